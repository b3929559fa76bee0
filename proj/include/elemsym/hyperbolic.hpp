#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "elemsym/symfun.hpp"
#include "elemsym/unipoly.hpp"

namespace elemsym {

// Real roots of a hyperbolic polynomial: distinct values, sorted ascending,
// with multiplicities summing to the degree, plus an open interval (lo, hi)
// containing all of them.
struct RootProfile {
    std::vector<double> roots;   // distinct, sorted
    std::vector<int> mult;       // same length as roots
    int distinct_count = 0;
    double lo = 0.0, hi = 0.0;

    // Roots repeated by multiplicity, sorted ascending.
    Point expanded() const {
        Point p;
        for (std::size_t i = 0; i < roots.size(); ++i)
            p.insert(p.end(), static_cast<std::size_t>(mult[i]), roots[i]);
        return p;
    }
};

namespace detail {

// Full Sturm remainder ladder of f, each element normalized to unit max
// coefficient (positive scaling preserves the sign-variation count).
// rem_size[i] records the magnitude of the remainder that produced elems[i]
// before normalization (relative to the unit-scaled divisor); a tiny value
// marks a plausible gcd boundary.  With repeated roots the true boundary
// remainder is exactly zero in exact arithmetic but only noise-small in
// floating point, and no fixed threshold separates "noise" from "legitimately
// small", so the ladder is built in full and the certification step decides
// where to cut it.
struct SturmLadder {
    std::vector<UniPoly> elems;
    std::vector<double> rem_size;  // aligned with elems; 0 for the first two
};

inline SturmLadder sturm_ladder(const UniPoly& f) {
    SturmLadder lad;
    const double s0 = f.max_abs_coeff();
    if (s0 == 0.0) return lad;
    lad.elems.push_back(f * (1.0 / s0));
    lad.rem_size.push_back(0.0);
    UniPoly d = lad.elems[0].derivative();
    if (d.is_zero()) return lad;
    lad.elems.push_back(d * (1.0 / d.max_abs_coeff()));
    lad.rem_size.push_back(0.0);
    while (lad.elems.back().degree() >= 1) {
        auto [q, r] = lad.elems[lad.elems.size() - 2].divmod(lad.elems.back());
        r = r.trimmed_small(1e-13);
        const double sz = r.max_abs_coeff();
        if (sz <= 1e-13) break;
        lad.elems.push_back(r * (-1.0 / sz));
        lad.rem_size.push_back(sz);
    }
    return lad;
}

// Sign variations of the chain at t (zeros skipped).
inline int sign_variations(const std::vector<UniPoly>& chain, double t) {
    int v = 0, prev = 0;
    for (const auto& p : chain) {
        const double y = p(t);
        const int s = (y > 0.0) - (y < 0.0);
        if (s != 0) {
            if (prev != 0 && s != prev) ++v;
            prev = s;
        }
    }
    return v;
}

// First derivative order with a clearly nonzero value at r, i.e. the
// numerical multiplicity of r as a root of f.  rel_tol is the single tunable
// that most affects the distinct-root count.
inline int multiplicity_at(const UniPoly& f, double r, double rel_tol = 1e-7) {
    UniPoly d = f;
    int m = 0;
    // The scale is taken a root-location uncertainty away from r, so it does
    // not collapse when r sits near zero and every coefficient term vanishes.
    const double r_scale = std::abs(r) + 1e-7 * std::max(1.0, std::abs(r));
    while (d.degree() >= 1) {
        const double scale = std::max(d.eval_abs(r_scale), 1e-300);
        if (std::abs(d(r)) > rel_tol * scale) break;
        ++m;
        d = d.derivative();
    }
    if (m == 0) m = 1;  // r was isolated as a root; count it at least once
    return m;
}

}  // namespace detail

inline std::optional<RootProfile> roots_of(const UniPoly& f, double tol = 1e-12);

namespace detail {

// Distinct-root isolation by sign-variation counting over `chain` (a Sturm
// ladder of w, possibly truncated), bisected down to width tol and merged at
// the double-root splitting resolution.  Positions only; no certification.
inline std::vector<double> isolate_with_chain(const UniPoly& w,
                                              const std::vector<UniPoly>& chain,
                                              double tol) {
    const int n = w.degree();
    // Cauchy root bound.
    double bound = 0.0;
    for (int i = 0; i < n; ++i)
        bound = std::max(bound, std::abs(w[static_cast<std::size_t>(i)] / w[static_cast<std::size_t>(n)]));
    bound = 1.0 + bound;
    const double lo0 = -bound * (1.0 + 1e-9) - tol;
    const double hi0 = bound * (1.0 + 1e-9) + tol;

    const auto count = [&](double a, double b) {
        return detail::sign_variations(chain, a) - detail::sign_variations(chain, b);
    };

    // A split point sitting on a root of the whole chain has a meaningless
    // variation count; nudge it off chain zeros.
    const auto pick_mid = [&](double a, double b) {
        const double m0 = 0.5 * (a + b);
        for (int k = 0; k < 9; ++k) {
            const double off = (k == 0) ? 0.0
                : ((k % 2 ? 1.0 : -1.0) * 0.01 * ((k + 1) / 2) * (b - a));
            const double m = m0 + off;
            if (std::abs(w(m)) > 1e-9 * std::max(w.eval_abs(m), 1e-300)) return m;
        }
        return m0;
    };

    std::vector<double> roots;
    std::vector<std::pair<std::pair<double, double>, int>> stack{{{lo0, hi0}, count(lo0, hi0)}};
    while (!stack.empty()) {
        auto [iv, c] = stack.back();
        stack.pop_back();
        if (c <= 0) continue;
        auto [a, b] = iv;
        if (c == 1) {
            // Bisect on the variation count down to width tol * scale.
            const double width_goal = tol * std::max({1.0, std::abs(a), std::abs(b)});
            while (b - a > width_goal) {
                const double m = 0.5 * (a + b);
                if (count(a, m) >= 1) b = m; else a = m;
            }
            roots.push_back(0.5 * (a + b));
        } else {
            if (b - a <= tol * std::max({1.0, std::abs(a), std::abs(b)})) {
                // Unresolvable cluster; record its center once, multiplicity
                // detection below accounts for the rest.
                roots.push_back(0.5 * (a + b));
                continue;
            }
            const double m = pick_mid(a, b);
            const int cl = count(a, m);
            stack.push_back({{a, m}, cl});
            stack.push_back({{m, b}, c - cl});
        }
    }
    std::sort(roots.begin(), roots.end());

    // Merge clusters closer than the resolution of double-root splitting.
    std::vector<double> merged;
    for (double r : roots) {
        if (!merged.empty() &&
            r - merged.back() <= 1e-7 * std::max(1.0, std::abs(r)))
            merged.back() = 0.5 * (merged.back() + r);
        else
            merged.push_back(r);
    }
    return merged;
}

// Guarded Newton on w^(k-1) from r, under the hypothesis that r approximates
// a k-fold root of w (which is then a simple root of w^(k-1)).  Bisection can
// stall a few orders of magnitude short of a high-multiplicity root (the
// polynomial is below the evaluation noise floor there), so allow moderately
// large corrective steps.  A wrong hypothesis can pull the iterate towards a
// nearby root of the derivative instead; the result is accepted only when it
// does not worsen the residual of w itself beyond evaluation noise.
inline double newton_with_mult(const UniPoly& w, double r, int k) {
    UniPoly q = w;
    for (int i = 1; i < k; ++i) q = q.derivative();
    const UniPoly dq = q.derivative();
    const double max_step = 0.05 * std::max(1.0, std::abs(r));
    double rt = r;
    double qv = q(rt);
    for (int it = 0; it < 60; ++it) {
        const double dv = dq(rt);
        if (std::abs(dv) <= 1e-14 * std::max(dq.eval_abs(rt), 1e-300)) break;
        const double step = qv / dv;
        if (!std::isfinite(step) || std::abs(step) > max_step) break;
        const double r2 = rt - step;
        const double qv2 = q(r2);
        if (std::abs(qv2) > std::abs(qv)) break;
        rt = r2;
        qv = qv2;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(rt))) break;
    }
    const double noise = 1e-14 * std::max(w.eval_abs(rt), 1e-300);
    return std::abs(w(rt)) <= std::max(std::abs(w(r)), noise) ? rt : r;
}

// Polish a root estimate of w in place, estimating the multiplicity coarsely
// and iterating the estimate once the position sharpens.
inline void polish_root(const UniPoly& w, double& r) {
    for (int pass = 0; pass < 2; ++pass) {
        const int m = detail::multiplicity_at(w, r, 1e-5);
        const double rt = newton_with_mult(w, r, m);
        if (rt == r) break;
        r = rt;
    }
}

// Certification attempt against one truncation of the Sturm ladder: isolates
// distinct roots by sign-variation counting over `chain`, polishes them, and
// derives multiplicities from the chain tail (a numerical gcd(f, f')).
// Returns nullopt when the truncation is inconsistent with hyperbolicity.
inline std::optional<RootProfile> certify_with_chain(const UniPoly& w,
                                                     const std::vector<UniPoly>& chain,
                                                     int n, double tol) {
    std::vector<double> merged = isolate_with_chain(w, chain, tol);
    if (merged.empty()) return std::nullopt;

    // A nonconstant chain tail marks a truncation that claims repeated roots.
    // The tail itself is not consulted beyond its degree: Euclid's sequence
    // can collapse onto the gcd of a *nearby* more degenerate polynomial, so
    // neither its root positions nor multiplicities are trustworthy.  Nor is
    // any local test at the isolated positions: around an m-fold root every
    // point within about noise^(1/m) is numerically a root of w and of its
    // first m-1 derivatives, so residuals and derivative tests cannot tell a
    // misplaced estimate from a sharp one.  What does discriminate is global:
    // only the true multiplicity assignment, with each position re-polished
    // under its assigned multiplicity (an m-fold root of w is a *simple*,
    // well-conditioned root of w^(m-1)), reconstructs the coefficients of w.
    // So enumerate all assignments summing to the degree and keep the best
    // reconstruction; the gates below still apply to the winner.
    RootProfile rp;
    const UniPoly& tail = chain.back();
    if (tail.degree() >= 1) {
        const int d = static_cast<int>(merged.size());
        if (d + tail.degree() > n) {
#ifdef ELEMSYM_DEBUG_ROOTS
            std::fprintf(stderr, "[roots_of] n=%d FAIL size %d + tail %d\n", n, d, tail.degree());
#endif
            return std::nullopt;
        }
        const int kmax = n - d + 1;
        std::vector<std::vector<double>> cand(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            auto& ci = cand[static_cast<std::size_t>(i)];
            ci.resize(static_cast<std::size_t>(kmax) + 1);
            for (int k = 1; k <= kmax; ++k)
                ci[static_cast<std::size_t>(k)] = newton_with_mult(w, merged[static_cast<std::size_t>(i)], k);
        }
        std::vector<int> ks(static_cast<std::size_t>(d), 1), best_ks;
        std::vector<std::pair<double, int>> trial(static_cast<std::size_t>(d));
        double best_diff = std::numeric_limits<double>::infinity();
        const auto consider = [&]() {
            for (int i = 0; i < d; ++i)
                trial[static_cast<std::size_t>(i)] = {
                    cand[static_cast<std::size_t>(i)][static_cast<std::size_t>(ks[static_cast<std::size_t>(i)])],
                    ks[static_cast<std::size_t>(i)]};
            std::sort(trial.begin(), trial.end());
            UniPoly rebuilt = UniPoly::constant(w[static_cast<std::size_t>(n)]);
            for (const auto& [r, m] : trial)
                for (int t = 0; t < m; ++t) rebuilt.mul_linear(r);
            double diff = 0.0;
            for (int i = 0; i <= n; ++i)
                diff = std::max(diff, std::abs(rebuilt[static_cast<std::size_t>(i)] - w[static_cast<std::size_t>(i)]));
            if (diff < best_diff) {
                best_diff = diff;
                best_ks = ks;
            }
        };
        const auto enumerate = [&](const auto& self, int i, int rem) -> void {
            if (i == d - 1) {
                ks[static_cast<std::size_t>(i)] = 1 + rem;
                consider();
                return;
            }
            for (int e = 0; e <= rem; ++e) {
                ks[static_cast<std::size_t>(i)] = 1 + e;
                self(self, i + 1, rem - e);
            }
        };
        enumerate(enumerate, 0, n - d);
        for (int i = 0; i < d; ++i)
            trial[static_cast<std::size_t>(i)] = {
                cand[static_cast<std::size_t>(i)][static_cast<std::size_t>(best_ks[static_cast<std::size_t>(i)])],
                best_ks[static_cast<std::size_t>(i)]};
        std::sort(trial.begin(), trial.end());
        // Refine each position against the quotient by all other claimed
        // factors: a root crowded by a nearby high-multiplicity cluster is
        // ill-conditioned in w (|w'| is suppressed by the cluster's factor)
        // but perfectly conditioned once that factor is deflated away.  Kept
        // only when it actually tightens the reconstruction.
        {
            auto refined = trial;
            for (int pass = 0; pass < 2; ++pass)
                for (int i = 0; i < d; ++i) {
                    UniPoly q = w;
                    for (int j = 0; j < d; ++j) {
                        if (j == i) continue;
                        const auto& [rj, mj] = refined[static_cast<std::size_t>(j)];
                        for (int t = 0; t < mj; ++t) q = q.deflate(rj);
                    }
                    auto& [ri, mi] = refined[static_cast<std::size_t>(i)];
                    ri = newton_with_mult(q, ri, mi);
                }
            const auto rebuild_diff = [&](const std::vector<std::pair<double, int>>& prof) {
                UniPoly rebuilt = UniPoly::constant(w[static_cast<std::size_t>(n)]);
                for (const auto& [r, m] : prof)
                    for (int t = 0; t < m; ++t) rebuilt.mul_linear(r);
                double diff = 0.0;
                for (int i = 0; i <= n; ++i)
                    diff = std::max(diff, std::abs(rebuilt[static_cast<std::size_t>(i)] - w[static_cast<std::size_t>(i)]));
                return diff;
            };
            if (rebuild_diff(refined) < best_diff) {
                trial = std::move(refined);
                std::sort(trial.begin(), trial.end());
            }
        }
        // coincident entries are one root whose isolation estimate split
        for (const auto& [r, m] : trial) {
            if (!rp.roots.empty() &&
                r - rp.roots.back() <= 1e-7 * std::max(1.0, std::abs(r)))
                rp.mult.back() += m;
            else {
                rp.roots.push_back(r);
                rp.mult.push_back(m);
            }
        }
    } else {
        for (double& r : merged) polish_root(w, r);
        if (static_cast<int>(merged.size()) != n) {
#ifdef ELEMSYM_DEBUG_ROOTS
            std::fprintf(stderr, "[roots_of] n=%d FAIL tail const, size %zu\n", n, merged.size());
#endif
            return std::nullopt;
        }
        rp.roots = std::move(merged);
        rp.mult.assign(rp.roots.size(), 1);
    }
    int total = 0;
    for (int m : rp.mult) total += m;
    if (total != n) {
#ifdef ELEMSYM_DEBUG_ROOTS
        std::fprintf(stderr, "[roots_of] n=%d FAIL total %d\n", n, total);
#endif
        return std::nullopt;
    }
    // Reject profiles that do not actually annihilate w: a wrong truncation
    // can pass the structural checks with a quotient whose roots are not
    // roots of w at all.  True roots (any multiplicity) land on the noise
    // floor, several orders below this bar.
    for (double r : rp.roots) {
        if (std::abs(w(r)) > 1e-9 * std::max(w.eval_abs(r), 1e-300)) {
#ifdef ELEMSYM_DEBUG_ROOTS
            std::fprintf(stderr, "[roots_of] n=%d FAIL residual %.3e at %.17g\n", n,
                         std::abs(w(r)) / std::max(w.eval_abs(r), 1e-300), r);
#endif
            return std::nullopt;
        }
    }
    // Reconstruction test: the claimed factorization must reproduce w itself.
    // A profile that absorbs a moderately separated simple root into a
    // multiple one passes the residual test (its claimed roots are genuine),
    // but misses w by the absorbed factor.  Legitimate profiles rebuild to a
    // few orders below this bar; wrong ones miss by the size of the
    // misattributed factor.
    {
        UniPoly rebuilt = UniPoly::constant(w[static_cast<std::size_t>(n)]);
        for (std::size_t i = 0; i < rp.roots.size(); ++i)
            for (int t = 0; t < rp.mult[i]; ++t) rebuilt.mul_linear(rp.roots[i]);
        double diff = 0.0;
        for (int i = 0; i <= n; ++i)
            diff = std::max(diff, std::abs(rebuilt[static_cast<std::size_t>(i)] - w[static_cast<std::size_t>(i)]));
        if (diff > 1e-4) {  // w has max |coeff| 1 by normalization
#ifdef ELEMSYM_DEBUG_ROOTS
            std::fprintf(stderr, "[roots_of] n=%d FAIL reconstruction %.3e; profile:", n, diff);
            for (std::size_t i = 0; i < rp.roots.size(); ++i)
                std::fprintf(stderr, " %.17g(m%d)", rp.roots[i], rp.mult[i]);
            std::fprintf(stderr, "\n");
#endif
            return std::nullopt;
        }
    }
#ifdef ELEMSYM_DEBUG_ROOTS
    for (std::size_t i = 0; i < rp.roots.size(); ++i)
        std::fprintf(stderr, "[roots_of] n=%d root %.17g mult %d\n", n, rp.roots[i], rp.mult[i]);
#endif
    rp.distinct_count = static_cast<int>(rp.roots.size());
    rp.lo = rp.roots.front() - 1.0;
    rp.hi = rp.roots.back() + 1.0;
    return rp;
}

}  // namespace detail

// Isolates all real roots of f by Sturm sign-change counting and bisection,
// polishes them, and certifies hyperbolicity by checking that multiplicities
// sum to the degree.  Returns nullopt when f is not hyperbolic.
//
// With repeated roots the Sturm remainder that should vanish at the gcd
// boundary is only noise-small in floating point, and its size overlaps with
// legitimately small remainders of nearly-degenerate square-free inputs.  So
// every noise-small remainder is treated as a candidate cut of the ladder
// (most plausible first, full ladder last) and the first truncation whose
// certification is self-consistent wins.
inline std::optional<RootProfile> roots_of(const UniPoly& f, double tol) {
    const int n = f.degree();
    if (n < 1) throw std::domain_error("roots_of: degree must be >= 1");

    const UniPoly w = f * (1.0 / f.max_abs_coeff());
    const auto lad = detail::sturm_ladder(w);

    std::vector<std::size_t> cuts;
    for (std::size_t i = 2; i < lad.elems.size(); ++i)
        if (lad.rem_size[i] < 1e-6) cuts.push_back(i);
    std::sort(cuts.begin(), cuts.end(), [&](std::size_t a, std::size_t b) {
        return lad.rem_size[a] < lad.rem_size[b];
    });
    cuts.push_back(lad.elems.size());

    for (std::size_t len : cuts) {
        const std::vector<UniPoly> chain(lad.elems.begin(),
                                         lad.elems.begin() + static_cast<std::ptrdiff_t>(len));
        if (auto rp = detail::certify_with_chain(w, chain, n, tol)) return rp;
    }
    return std::nullopt;
}

// Monic polynomial with the given roots: prod (t - r_i).  Its coefficient of
// t^{n-j} equals (-1)^j E_j(roots).
inline UniPoly from_roots(const std::vector<double>& roots) {
    UniPoly p = UniPoly::constant(1.0);
    for (double r : roots) p.mul_linear(r);
    return p;
}

// Sorted root vector of a hyperbolic polynomial, multiplicities expanded.
// Sorting is a continuous selection on hyperbolic families.
inline Point point_from_poly(const UniPoly& f, double tol = 1e-12) {
    auto rp = roots_of(f, tol);
    if (!rp) throw std::domain_error("point_from_poly: polynomial is not hyperbolic");
    return rp->expanded();
}

// Output of the constructive perturbation: for all 0 < eps < eps0, both
// f + eps*g and f - eps*g are hyperbolic with more than s distinct roots, all
// inside the interval recorded in the originating RootProfile.
struct Perturbation {
    UniPoly g;
    double eps0 = 0.0;
    std::vector<double> xi;  // sign-witness points
    RootProfile profile;     // of the input f
};

// Splits f = p * g with p the square-free part over the distinct roots, picks
// witness points between consecutive distinct roots (and inward of the
// interval endpoints), and sets eps0 = 1/2 min |p(xi)|.  The invariant is
// verified at eps in {eps0/2, eps0/10} before returning.
inline Perturbation lemma2_perturb(const UniPoly& f) {
    const int n = f.degree();
    if (n < 2) throw std::invalid_argument("lemma2_perturb: degree must be >= 2");
    auto rp = roots_of(f);
    if (!rp) throw std::invalid_argument("lemma2_perturb: f is not hyperbolic");
    const int s = rp->distinct_count;
    if (s >= n)
        throw std::invalid_argument("lemma2_perturb: all roots simple (s = n); use the generic perturbation");

    const UniPoly p = from_roots(rp->roots);
    UniPoly g = f;
    for (double r : rp->roots) g = g.deflate(r);

    std::vector<double> xi;
    xi.push_back(0.5 * (rp->lo + rp->roots.front()));
    for (int i = 0; i + 1 < s; ++i)
        xi.push_back(0.5 * (rp->roots[static_cast<std::size_t>(i)] + rp->roots[static_cast<std::size_t>(i) + 1]));
    xi.push_back(0.5 * (rp->roots.back() + rp->hi));

    double eps0 = std::numeric_limits<double>::infinity();
    for (double x : xi) eps0 = std::min(eps0, std::abs(p(x)));
    eps0 *= 0.5;

    const auto invariant_holds = [&](double e0) {
        for (double eps : {e0 / 2.0, e0 / 10.0}) {
            for (double sign : {1.0, -1.0}) {
                auto rp2 = roots_of(f.add_scaled(g, sign * eps));
                if (!rp2 || rp2->distinct_count <= s) return false;
                if (rp2->roots.front() <= rp->lo || rp2->roots.back() >= rp->hi) return false;
            }
        }
        return true;
    };
    int shrink = 0;
    while (!invariant_holds(eps0)) {
        eps0 *= 0.5;
        if (++shrink > 50)
            throw std::runtime_error("lemma2_perturb: could not verify the perturbation invariant");
    }
    return Perturbation{g, eps0, std::move(xi), std::move(*rp)};
}

// Monic degree-n polynomial with coefficient of t^{n-j} pinned to
// (-1)^j gammas[j-1] for j = 1..k; low_coeffs supplies the remaining n-k
// coefficients (powers t^0 .. t^{n-k-1}, ascending).
inline UniPoly variety_poly(int n, const std::vector<double>& gammas,
                            const std::vector<double>& low_coeffs) {
    const int k = static_cast<int>(gammas.size());
    if (k < 1 || k >= n) throw std::domain_error("variety_poly: need 1 <= k < n");
    if (static_cast<int>(low_coeffs.size()) != n - k)
        throw std::domain_error("variety_poly: low_coeffs must have length n-k");
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    c[static_cast<std::size_t>(n)] = 1.0;
    for (int j = 1; j <= k; ++j)
        c[static_cast<std::size_t>(n - j)] = ((j % 2) ? -1.0 : 1.0) * gammas[static_cast<std::size_t>(j) - 1];
    for (int i = 0; i < n - k; ++i)
        c[static_cast<std::size_t>(i)] = low_coeffs[static_cast<std::size_t>(i)];
    return UniPoly(std::move(c));
}

// Rejection sampling on the variety {E_1 = gamma_1, ..., E_k = gamma_k}: draw
// a random point, take its monic polynomial, overwrite the pinned top
// coefficients, and accept when the result is hyperbolic.  Returns the sorted
// root vector, which lies on the variety exactly by construction, or nullopt
// after `budget` rejections.
inline std::optional<Point> sample_variety_point(int n, const std::vector<double>& gammas,
                                                 std::uint64_t seed, int budget = 10000) {
    const int k = static_cast<int>(gammas.size());
    if (k < 1 || k >= n) throw std::domain_error("sample_variety_point: need 1 <= k < n");
    std::mt19937_64 rng(seed);
    const double g1 = gammas[0];
    double spread2 = 1.0;
    if (k >= 2) spread2 = std::max((g1 * g1 - 2.0 * gammas[1]) / n, 0.5);
    std::normal_distribution<double> normal(0.0, std::sqrt(spread2));
    for (int it = 0; it < budget; ++it) {
        Point x(static_cast<std::size_t>(n));
        double sum = 0.0;
        for (double& v : x) { v = g1 / n + normal(rng); sum += v; }
        const double shift = (g1 - sum) / n;
        for (double& v : x) v += shift;
        const UniPoly f0 = from_roots(x);
        std::vector<double> low(f0.coeffs().begin(), f0.coeffs().begin() + (n - k));
        const UniPoly f = variety_poly(n, gammas, low);
        if (auto rp = roots_of(f)) return rp->expanded();
    }
    return std::nullopt;
}

}  // namespace elemsym
