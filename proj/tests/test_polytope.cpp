#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <string>

#include "elemsym/polytope.hpp"

using namespace elemsym;

namespace {

// Domains with endpoints and gamma on the grid Z/den stay exactly
// representable, so face enumeration can be cross-checked in integer
// arithmetic with no tolerance at all.
struct RationalDomain {
    int n = 0;
    long den = 1;
    std::vector<long> lo, hi;  // numerators
    long gamma = 0;

    BoxDomain to_box() const {
        std::vector<double> l, h;
        for (int i = 0; i < n; ++i) {
            l.push_back(static_cast<double>(lo[static_cast<std::size_t>(i)]) / static_cast<double>(den));
            h.push_back(static_cast<double>(hi[static_cast<std::size_t>(i)]) / static_cast<double>(den));
        }
        return BoxDomain(l, h, static_cast<double>(gamma) / static_cast<double>(den));
    }
};

// Exact oracle for the canonical face set: enumerate all 3^n patterns in
// integer arithmetic, drop infeasible ones, and demote free coordinates the
// level constraint pins to an endpoint.
std::set<std::string> face_pattern_oracle(const RationalDomain& d) {
    std::set<std::string> out;
    long total = 1;
    for (int i = 0; i < d.n; ++i) total *= 3;
    for (long code = 0; code < total; ++code) {
        std::string pat(static_cast<std::size_t>(d.n), 'F');
        long c = code;
        for (int i = 0; i < d.n; ++i) {
            const int t = static_cast<int>(c % 3);
            c /= 3;
            pat[static_cast<std::size_t>(i)] = t == 0 ? 'F' : (t == 1 ? 'L' : 'H');
        }
        long fixed_sum = 0, free_lo = 0, free_hi = 0;
        std::vector<int> K;
        for (int i = 0; i < d.n; ++i) {
            if (pat[static_cast<std::size_t>(i)] == 'L') fixed_sum += d.lo[static_cast<std::size_t>(i)];
            else if (pat[static_cast<std::size_t>(i)] == 'H') fixed_sum += d.hi[static_cast<std::size_t>(i)];
            else {
                K.push_back(i);
                free_lo += d.lo[static_cast<std::size_t>(i)];
                free_hi += d.hi[static_cast<std::size_t>(i)];
            }
        }
        const long gs = d.gamma - fixed_sum;
        if (K.empty()) {
            if (gs != 0) continue;
        } else {
            if (gs < free_lo || gs > free_hi) continue;
            if (gs == free_lo) {
                for (int k : K) pat[static_cast<std::size_t>(k)] = 'L';
            } else if (gs == free_hi) {
                for (int k : K) pat[static_cast<std::size_t>(k)] = 'H';
            } else if (K.size() == 1) {
                if (gs == d.lo[static_cast<std::size_t>(K[0])]) pat[static_cast<std::size_t>(K[0])] = 'L';
                else if (gs == d.hi[static_cast<std::size_t>(K[0])]) pat[static_cast<std::size_t>(K[0])] = 'H';
            }
        }
        out.insert(pat);
    }
    return out;
}

RationalDomain random_rational_domain(std::mt19937_64& rng, int n) {
    RationalDomain d;
    d.n = n;
    d.den = 8;
    long sum_lo = 0, sum_hi = 0;
    for (int i = 0; i < n; ++i) {
        const long lo = -8 + static_cast<long>(rng() % 13);
        const long w = 1 + static_cast<long>(rng() % 8);
        d.lo.push_back(lo);
        d.hi.push_back(lo + w);
        sum_lo += lo;
        sum_hi += lo + w;
    }
    // gamma anywhere in [sum lo, sum hi], endpoints included so zero-slack
    // demotion gets exercised
    d.gamma = sum_lo + static_cast<long>(rng() % static_cast<unsigned long>(sum_hi - sum_lo + 1));
    return d;
}

const BoxDomain foregger_domain() {
    return BoxDomain({0.375, 0.375, 0.125}, {0.625, 0.625, 0.375}, 1.25);
}

}  // namespace

TEST_CASE("BoxDomain validation and feasibility") {
    CHECK_THROWS_AS(BoxDomain({0.0, 0.0}, {1.0}, 0.5), std::domain_error);
    CHECK_THROWS_AS(BoxDomain({0.0, 2.0}, {1.0, 2.0}, 0.5), std::domain_error);
    CHECK_THROWS_AS(BoxDomain({}, {}, 0.0), std::domain_error);

    const BoxDomain dom({0.0, 0.0}, {1.0, 1.0}, 1.0);
    CHECK(dom.feasible());
    CHECK(BoxDomain({0.0}, {1.0}, 2.0).feasible() == false);
    CHECK(BoxDomain({0.0}, {1.0}, -0.5).feasible() == false);
    CHECK(foregger_domain().feasible());
}

TEST_CASE("contains on the Foregger domain") {
    const BoxDomain dom = foregger_domain();
    CHECK(contains(dom, {0.5, 0.5, 0.25}, 1e-12));
    CHECK(contains(dom, {0.625, 0.5, 0.125}, 1e-12));
    CHECK(contains(dom, {0.5, 0.5, 0.26}, 1e-12) == false);   // level violated
    CHECK(contains(dom, {0.7, 0.3, 0.25}, 1e-12) == false);   // box violated
    CHECK_THROWS_AS(contains(dom, {0.5, 0.5}, 1e-12), std::domain_error);
}

TEST_CASE("enumerate_faces on the Foregger domain") {
    const BoxDomain dom = foregger_domain();
    const auto faces = enumerate_faces(dom);

    std::set<std::string> pats;
    for (const Face& f : faces) pats.insert(f.pattern_string());
    CHECK(pats.size() == faces.size());

    RationalDomain d;
    d.n = 3;
    d.den = 8;
    d.lo = {3, 3, 1};
    d.hi = {5, 5, 3};
    d.gamma = 10;
    CHECK(pats == face_pattern_oracle(d));

    // the full pattern is the unique 2-face
    int top = 0;
    for (const Face& f : faces)
        if (f.dim == 2) {
            ++top;
            CHECK(f.pattern_string() == "FFF");
            CHECK(f.gamma_star == doctest::Approx(1.25));
        }
    CHECK(top == 1);

    for (const Face& f : faces) {
        CHECK(f.dim == std::max(0, static_cast<int>(f.free.size()) - 1));
        double fixed_sum = 0.0;
        for (const auto& [idx, val] : f.fixed) {
            const bool at_lo = val == dom.lo[static_cast<std::size_t>(idx)];
            const bool at_hi = val == dom.hi[static_cast<std::size_t>(idx)];
            CHECK((at_lo || at_hi));
            fixed_sum += val;
        }
        CHECK(f.gamma_star == doctest::Approx(dom.gamma - fixed_sum));
    }
}

TEST_CASE("enumerate_faces matches the exact-rational oracle") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 4);
        const RationalDomain d = random_rational_domain(rng, n);
        const auto faces = enumerate_faces(d.to_box());
        std::set<std::string> pats;
        for (const Face& f : faces) pats.insert(f.pattern_string());
        CHECK(pats.size() == faces.size());
        CHECK(pats == face_pattern_oracle(d));

        // canonical means re-canonicalizing is the identity
        for (const Face& f : faces) {
            auto again = detail::canonical_pattern(d.to_box(), f.pattern, 1e-9);
            REQUIRE(again.has_value());
            CHECK(*again == f.pattern);
        }
        // sorted by (dim, pattern)
        for (std::size_t i = 1; i < faces.size(); ++i) {
            const bool ordered =
                faces[i - 1].dim < faces[i].dim ||
                (faces[i - 1].dim == faces[i].dim &&
                 faces[i - 1].pattern_string() < faces[i].pattern_string());
            CHECK(ordered);
        }
    }
}

TEST_CASE("enumerate_faces guards") {
    CHECK_THROWS_AS(enumerate_faces(BoxDomain({0.0}, {1.0}, 3.0)), std::domain_error);
    CHECK_THROWS_AS(enumerate_faces(BoxDomain(std::vector<double>(17, 0.0),
                                              std::vector<double>(17, 1.0), 8.0)),
                    std::domain_error);
}

TEST_CASE("enumerate_candidates on the Foregger domain") {
    const BoxDomain dom = foregger_domain();
    const auto cands = enumerate_candidates(dom);
    CHECK(!cands.empty());

    const auto find_point = [&](const Point& p) {
        for (const auto& c : cands) {
            double d = 0.0;
            for (int i = 0; i < dom.n; ++i)
                d = std::max(d, std::abs(c.point[static_cast<std::size_t>(i)] - p[static_cast<std::size_t>(i)]));
            if (d <= 1e-12) return true;
        }
        return false;
    };

    // the all-free pattern is infeasible: e = 5/12 exceeds x3's upper bound 3/8
    CHECK(find_point({5.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0}) == false);
    // (F,F,L): e = (5/4 - 1/8) / 2 = 9/16
    CHECK(find_point({9.0 / 16.0, 9.0 / 16.0, 1.0 / 8.0}));
    // the interior symmetric-looking point is *not* in the candidate set
    CHECK(find_point({0.5, 0.5, 0.25}) == false);

    for (const auto& c : cands) {
        CHECK(contains(dom, c.point, 1e-9));
        for (int i = 0; i < dom.n; ++i) {
            const char p = c.pattern[static_cast<std::size_t>(i)];
            const double v = c.point[static_cast<std::size_t>(i)];
            if (p == 'L') CHECK(v == dom.lo[static_cast<std::size_t>(i)]);
            else if (p == 'H') CHECK(v == dom.hi[static_cast<std::size_t>(i)]);
            else {
                CHECK(p == 'E');
                REQUIRE(c.e.has_value());
                CHECK(v == *c.e);
            }
        }
    }
}

TEST_CASE("enumerate_candidates on the unit simplex slice") {
    const BoxDomain dom({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, 1.0);
    const auto cands = enumerate_candidates(dom);

    const auto find_point = [&](const Point& p) {
        for (const auto& c : cands) {
            double d = 0.0;
            for (int i = 0; i < 3; ++i)
                d = std::max(d, std::abs(c.point[static_cast<std::size_t>(i)] - p[static_cast<std::size_t>(i)]));
            if (d <= 1e-12) return true;
        }
        return false;
    };
    CHECK(find_point({1.0, 0.0, 0.0}));
    CHECK(find_point({0.0, 1.0, 0.0}));
    CHECK(find_point({0.0, 0.0, 1.0}));
    CHECK(find_point({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}));
    CHECK(find_point({0.5, 0.5, 0.0}));

    // no duplicate points
    for (std::size_t i = 0; i < cands.size(); ++i)
        for (std::size_t j = i + 1; j < cands.size(); ++j) {
            double d = 0.0;
            for (int k = 0; k < 3; ++k)
                d = std::max(d, std::abs(cands[i].point[static_cast<std::size_t>(k)] -
                                         cands[j].point[static_cast<std::size_t>(k)]));
            CHECK(d > 1e-9);
        }
}

TEST_CASE("vertex faces appear among the candidates") {
    std::mt19937_64 rng(22);
    for (int rep = 0; rep < 25; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 4);
        const BoxDomain dom = random_rational_domain(rng, n).to_box();
        const auto faces = enumerate_faces(dom);
        const auto cands = enumerate_candidates(dom);
        for (const Face& f : faces) {
            if (f.dim != 0) continue;
            Point p(static_cast<std::size_t>(n), 0.0);
            for (const auto& [idx, val] : f.fixed) p[static_cast<std::size_t>(idx)] = val;
            if (f.free.size() == 1) p[static_cast<std::size_t>(f.free[0])] = f.gamma_star;
            bool found = false;
            for (const auto& c : cands) {
                double d = 0.0;
                for (int i = 0; i < n; ++i)
                    d = std::max(d, std::abs(c.point[static_cast<std::size_t>(i)] - p[static_cast<std::size_t>(i)]));
                if (d <= 1e-9 * dom.scale()) { found = true; break; }
            }
            CHECK(found);
        }
        for (const auto& c : cands) CHECK(contains(dom, c.point, 1e-8 * dom.scale()));
    }
}

TEST_CASE("edge_restrictions on the Foregger instance") {
    const BoxDomain dom = foregger_domain();
    const SymCombo phi(3, {0.0, 0.0, -0.5, 1.0});  // E3 - 0.5 E2
    const auto edges = edge_restrictions(dom, phi);
    CHECK(!edges.empty());
    for (const auto& [face, restriction] : edges) {
        CHECK(face.dim == 1);
        CHECK(face.free.size() == 2);
        // spot-check the interpolant against direct evaluation at the
        // midpoint of the t-range
        const int k1 = face.free[0], k2 = face.free[1];
        const double t_lo = std::max(dom.lo[static_cast<std::size_t>(k1)],
                                     face.gamma_star - dom.hi[static_cast<std::size_t>(k2)]);
        const double t_hi = std::min(dom.hi[static_cast<std::size_t>(k1)],
                                     face.gamma_star - dom.lo[static_cast<std::size_t>(k2)]);
        const double tm = 0.5 * (t_lo + t_hi);
        Point x(3, 0.0);
        for (const auto& [idx, val] : face.fixed) x[static_cast<std::size_t>(idx)] = val;
        x[static_cast<std::size_t>(k1)] = tm;
        x[static_cast<std::size_t>(k2)] = face.gamma_star - tm;
        CHECK(restriction(tm) == doctest::Approx(eval_combo(phi, x)).epsilon(1e-10));
    }
    CHECK(all_edges_nonconstant(dom, phi));
}

TEST_CASE("edge nonconstancy gate") {
    const BoxDomain dom = foregger_domain();
    // E1 is identically gamma on the level set, hence constant on every edge
    const SymCombo e1(3, {0.0, 1.0, 0.0, 0.0});
    CHECK(all_edges_nonconstant(dom, e1) == false);
    // a constant combination is constant everywhere
    const SymCombo c(3, {2.0, 0.0, 0.0, 0.0});
    CHECK(all_edges_nonconstant(dom, c) == false);
    // E2 restricted to an edge has a genuine t^2 term
    const SymCombo e2(3, {0.0, 0.0, 1.0, 0.0});
    CHECK(all_edges_nonconstant(dom, e2));
    CHECK_THROWS_AS(edge_restrictions(dom, SymCombo(4, {0, 0, 0, 0, 1})), std::domain_error);
}

TEST_CASE("is_nonconstant thresholding") {
    CHECK(is_nonconstant(UniPoly({1.0, 0.5})));
    CHECK(is_nonconstant(UniPoly({3.0})) == false);
    CHECK(is_nonconstant(UniPoly({1.0, 1e-14})) == false);
    CHECK(is_nonconstant(UniPoly({1e8, 1.0})));
}
