#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "elemsym/symfun.hpp"
#include "elemsym/unipoly.hpp"

namespace elemsym {

// The feasible set D' = {E_1 = gamma} intersected with the box prod [lo_i, hi_i].
struct BoxDomain {
    int n = 0;
    std::vector<double> lo, hi;
    double gamma = 0.0;

    BoxDomain() = default;
    BoxDomain(std::vector<double> lo_, std::vector<double> hi_, double gamma_)
        : n(static_cast<int>(lo_.size())), lo(std::move(lo_)), hi(std::move(hi_)), gamma(gamma_) {
        if (n < 1 || hi.size() != lo.size())
            throw std::domain_error("BoxDomain: lo and hi must be nonempty and equal length");
        for (int i = 0; i < n; ++i)
            if (!(lo[static_cast<std::size_t>(i)] < hi[static_cast<std::size_t>(i)]))
                throw std::domain_error("BoxDomain: requires lo[i] < hi[i]");
    }

    double scale() const {
        double s = std::max(1.0, std::abs(gamma));
        for (int i = 0; i < n; ++i)
            s = std::max({s, std::abs(lo[static_cast<std::size_t>(i)]), std::abs(hi[static_cast<std::size_t>(i)])});
        return s;
    }

    bool feasible(double tol = 1e-12) const {
        const double slo = std::accumulate(lo.begin(), lo.end(), 0.0);
        const double shi = std::accumulate(hi.begin(), hi.end(), 0.0);
        const double t = tol * scale();
        return slo - t <= gamma && gamma <= shi + t;
    }
};

// Per-coordinate role in a face or candidate pattern.
enum class Coord : char { Free = 'F', Lo = 'L', Hi = 'H' };

struct Face {
    std::vector<Coord> pattern;               // length n
    std::vector<int> free;                    // indices in K
    std::vector<std::pair<int, double>> fixed; // (index, endpoint value) on K^c
    double gamma_star = 0.0;                  // gamma - sum of fixed values
    int dim = 0;                              // (|K| - 1)^+

    std::string pattern_string() const {
        std::string s;
        for (Coord c : pattern) s.push_back(static_cast<char>(c));
        return s;
    }
};

struct Candidate {
    Point point;
    std::string pattern;      // per coordinate: 'L', 'H', or 'E'
    std::optional<double> e;  // shared value of the EQUAL coordinates
};

inline bool contains(const BoxDomain& dom, const Point& x, double tol) {
    if (static_cast<int>(x.size()) != dom.n)
        throw std::domain_error("contains: dimension mismatch");
    double sum = 0.0;
    for (int i = 0; i < dom.n; ++i) {
        const double v = x[static_cast<std::size_t>(i)];
        if (v < dom.lo[static_cast<std::size_t>(i)] - tol || v > dom.hi[static_cast<std::size_t>(i)] + tol)
            return false;
        sum += v;
    }
    return std::abs(sum - dom.gamma) <= tol * std::max(1.0, std::abs(dom.gamma));
}

namespace detail {

// Canonicalizes one {Free, Lo, Hi} assignment: demotes free coordinates that
// the level constraint forces to an endpoint (zero slack on either side, or a
// single free coordinate pinned at its bound).  Returns nullopt if infeasible.
inline std::optional<std::vector<Coord>> canonical_pattern(const BoxDomain& dom,
                                                           std::vector<Coord> pat, double tol) {
    const double t = tol * dom.scale();
    double fixed_sum = 0.0, free_lo = 0.0, free_hi = 0.0;
    std::vector<int> K;
    for (int i = 0; i < dom.n; ++i) {
        switch (pat[static_cast<std::size_t>(i)]) {
            case Coord::Lo: fixed_sum += dom.lo[static_cast<std::size_t>(i)]; break;
            case Coord::Hi: fixed_sum += dom.hi[static_cast<std::size_t>(i)]; break;
            case Coord::Free:
                K.push_back(i);
                free_lo += dom.lo[static_cast<std::size_t>(i)];
                free_hi += dom.hi[static_cast<std::size_t>(i)];
                break;
        }
    }
    const double gs = dom.gamma - fixed_sum;
    if (K.empty()) {
        if (std::abs(gs) > t) return std::nullopt;
        return pat;
    }
    if (gs < free_lo - t || gs > free_hi + t) return std::nullopt;
    if (std::abs(gs - free_lo) <= t) {
        for (int k : K) pat[static_cast<std::size_t>(k)] = Coord::Lo;
        return pat;
    }
    if (std::abs(gs - free_hi) <= t) {
        for (int k : K) pat[static_cast<std::size_t>(k)] = Coord::Hi;
        return pat;
    }
    if (K.size() == 1) {
        const int k = K[0];
        if (std::abs(gs - dom.lo[static_cast<std::size_t>(k)]) <= t) pat[static_cast<std::size_t>(k)] = Coord::Lo;
        else if (std::abs(gs - dom.hi[static_cast<std::size_t>(k)]) <= t) pat[static_cast<std::size_t>(k)] = Coord::Hi;
    }
    return pat;
}

inline Face face_from_pattern(const BoxDomain& dom, const std::vector<Coord>& pat) {
    Face f;
    f.pattern = pat;
    double fixed_sum = 0.0;
    for (int i = 0; i < dom.n; ++i) {
        switch (pat[static_cast<std::size_t>(i)]) {
            case Coord::Lo:
                f.fixed.emplace_back(i, dom.lo[static_cast<std::size_t>(i)]);
                fixed_sum += dom.lo[static_cast<std::size_t>(i)];
                break;
            case Coord::Hi:
                f.fixed.emplace_back(i, dom.hi[static_cast<std::size_t>(i)]);
                fixed_sum += dom.hi[static_cast<std::size_t>(i)];
                break;
            case Coord::Free: f.free.push_back(i); break;
        }
    }
    f.gamma_star = dom.gamma - fixed_sum;
    f.dim = f.free.empty() ? 0 : static_cast<int>(f.free.size()) - 1;
    return f;
}

}  // namespace detail

// All faces of D' via exhaustive enumeration of the 3^n coordinate patterns,
// canonicalized (no free coordinate forced to an endpoint) and deduplicated.
// Sorted by (dim, pattern).  n is capped to keep 3^n tractable.
inline std::vector<Face> enumerate_faces(const BoxDomain& dom, double tol = 1e-9, int max_n = 16) {
    if (!dom.feasible()) throw std::domain_error("enumerate_faces: empty domain");
    if (dom.n > max_n) throw std::domain_error("enumerate_faces: n exceeds the 3^n guard");
    std::set<std::string> seen;
    std::vector<Face> faces;
    std::vector<Coord> pat(static_cast<std::size_t>(dom.n), Coord::Free);
    const long total = static_cast<long>(std::pow(3.0, dom.n) + 0.5);
    for (long code = 0; code < total; ++code) {
        long c = code;
        for (int i = 0; i < dom.n; ++i) {
            const int d = static_cast<int>(c % 3);
            c /= 3;
            pat[static_cast<std::size_t>(i)] = d == 0 ? Coord::Free : (d == 1 ? Coord::Lo : Coord::Hi);
        }
        auto canon = detail::canonical_pattern(dom, pat, tol);
        if (!canon) continue;
        Face f = detail::face_from_pattern(dom, *canon);
        if (seen.insert(f.pattern_string()).second) faces.push_back(std::move(f));
    }
    std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        return a.pattern_string() < b.pattern_string();
    });
    return faces;
}

// Finite candidate set containing every point the Corollary 5 product
// {a_1, e, b_1} x ... x {a_n, e, b_n} admits: for each {Lo, Hi, Free} pattern
// the free coordinates share the value e = gamma_star / |K|.
inline std::vector<Candidate> enumerate_candidates(const BoxDomain& dom, double tol = 1e-9, int max_n = 16) {
    if (!dom.feasible()) throw std::domain_error("enumerate_candidates: empty domain");
    if (dom.n > max_n) throw std::domain_error("enumerate_candidates: n exceeds the 3^n guard");
    const double t = tol * dom.scale();
    std::vector<Candidate> cands;
    std::vector<Coord> pat(static_cast<std::size_t>(dom.n), Coord::Free);
    const long total = static_cast<long>(std::pow(3.0, dom.n) + 0.5);
    for (long code = 0; code < total; ++code) {
        long c = code;
        for (int i = 0; i < dom.n; ++i) {
            const int d = static_cast<int>(c % 3);
            c /= 3;
            pat[static_cast<std::size_t>(i)] = d == 0 ? Coord::Free : (d == 1 ? Coord::Lo : Coord::Hi);
        }
        double fixed_sum = 0.0;
        std::vector<int> K;
        for (int i = 0; i < dom.n; ++i) {
            if (pat[static_cast<std::size_t>(i)] == Coord::Lo) fixed_sum += dom.lo[static_cast<std::size_t>(i)];
            else if (pat[static_cast<std::size_t>(i)] == Coord::Hi) fixed_sum += dom.hi[static_cast<std::size_t>(i)];
            else K.push_back(i);
        }
        const double gs = dom.gamma - fixed_sum;
        Candidate cand;
        cand.pattern.assign(static_cast<std::size_t>(dom.n), '?');
        cand.point.assign(static_cast<std::size_t>(dom.n), 0.0);
        if (K.empty()) {
            if (std::abs(gs) > t) continue;
        } else {
            const double e = gs / static_cast<double>(K.size());
            bool ok = true;
            for (int k : K)
                if (e < dom.lo[static_cast<std::size_t>(k)] - t || e > dom.hi[static_cast<std::size_t>(k)] + t) { ok = false; break; }
            if (!ok) continue;
            cand.e = e;
        }
        for (int i = 0; i < dom.n; ++i) {
            switch (pat[static_cast<std::size_t>(i)]) {
                case Coord::Lo:
                    cand.pattern[static_cast<std::size_t>(i)] = 'L';
                    cand.point[static_cast<std::size_t>(i)] = dom.lo[static_cast<std::size_t>(i)];
                    break;
                case Coord::Hi:
                    cand.pattern[static_cast<std::size_t>(i)] = 'H';
                    cand.point[static_cast<std::size_t>(i)] = dom.hi[static_cast<std::size_t>(i)];
                    break;
                case Coord::Free:
                    cand.pattern[static_cast<std::size_t>(i)] = 'E';
                    cand.point[static_cast<std::size_t>(i)] = *cand.e;
                    break;
            }
        }
        cands.push_back(std::move(cand));
    }

    // Lexicographic order; on coinciding points prefer the pattern with the
    // fewest EQUAL coordinates (endpoint description wins).
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.point != b.point)
            return std::lexicographical_compare(a.point.begin(), a.point.end(), b.point.begin(), b.point.end());
        return std::count(a.pattern.begin(), a.pattern.end(), 'E') <
               std::count(b.pattern.begin(), b.pattern.end(), 'E');
    });
    std::vector<Candidate> out;
    for (auto& cand : cands) {
        bool dup = false;
        for (const auto& kept : out) {
            double d = 0.0;
            for (int i = 0; i < dom.n; ++i)
                d = std::max(d, std::abs(kept.point[static_cast<std::size_t>(i)] - cand.point[static_cast<std::size_t>(i)]));
            if (d <= t) { dup = true; break; }
        }
        if (!dup) out.push_back(std::move(cand));
    }
    return out;
}

// Univariate restriction of phi along each edge (dim-1 face): the two free
// coordinates trade off as (t, gamma_star - t) over the feasible t-range.
inline std::vector<std::pair<Face, UniPoly>> edge_restrictions(const BoxDomain& dom, const SymCombo& phi,
                                                               double tol = 1e-9) {
    if (phi.n != dom.n) throw std::domain_error("edge_restrictions: dimension mismatch");
    std::vector<std::pair<Face, UniPoly>> out;
    for (const Face& f : enumerate_faces(dom, tol)) {
        if (f.dim != 1) continue;
        const int k1 = f.free[0], k2 = f.free[1];
        const double t_lo = std::max(dom.lo[static_cast<std::size_t>(k1)],
                                     f.gamma_star - dom.hi[static_cast<std::size_t>(k2)]);
        const double t_hi = std::min(dom.hi[static_cast<std::size_t>(k1)],
                                     f.gamma_star - dom.lo[static_cast<std::size_t>(k2)]);
        out.emplace_back(f, diagonal_restriction(phi, f.gamma_star, f.fixed, CurveMode::Edge, t_lo, t_hi));
    }
    return out;
}

// True iff the restriction has a coefficient of positive degree above the
// noise threshold 1e-10 * scale.
inline bool is_nonconstant(const UniPoly& p) {
    const double thr = 1e-10 * std::max(1.0, p.max_abs_coeff());
    for (int i = 1; i <= p.degree(); ++i)
        if (std::abs(p[static_cast<std::size_t>(i)]) > thr) return true;
    return false;
}

// The Corollary 5 hypothesis: phi nonconstant on every edge of D'.
// Vacuously true when D' has no edges.
inline bool all_edges_nonconstant(const BoxDomain& dom, const SymCombo& phi, double tol = 1e-9) {
    for (const auto& [face, restriction] : edge_restrictions(dom, phi, tol))
        if (!is_nonconstant(restriction)) return false;
    return true;
}

}  // namespace elemsym
