#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "elemsym/unipoly.hpp"

namespace elemsym {

using Point = std::vector<double>;

// phi = sum_j coeffs[j] * E_j in n variables, coeffs ascending by E-index.
struct SymCombo {
    int n = 0;
    std::vector<double> coeffs;  // length n + 1

    SymCombo() = default;
    SymCombo(int n_, std::vector<double> coeffs_) : n(n_), coeffs(std::move(coeffs_)) {
        if (n < 1) throw std::domain_error("SymCombo: n must be positive");
        if (coeffs.size() != static_cast<std::size_t>(n) + 1)
            throw std::domain_error("SymCombo: coeffs must have length n+1");
    }

    // Highest j >= 1 with c_j != 0; 0 when the combination is constant.
    int degree() const {
        for (int j = n; j >= 1; --j)
            if (coeffs[static_cast<std::size_t>(j)] != 0.0) return j;
        return 0;
    }
};

// E_0(x), ..., E_jmax(x) by the column recurrence
//   E_j(x_1..x_m) = E_j(x_1..x_{m-1}) + x_m * E_{j-1}(x_1..x_{m-1}).
inline std::vector<double> eval_all_elem_sym(const Point& x, int jmax) {
    std::vector<double> e(static_cast<std::size_t>(jmax) + 1, 0.0);
    e[0] = 1.0;
    int m = 0;
    for (double xm : x) {
        ++m;
        for (int j = std::min(m, jmax); j >= 1; --j)
            e[static_cast<std::size_t>(j)] += xm * e[static_cast<std::size_t>(j) - 1];
    }
    return e;
}

inline double eval_elem_sym(const Point& x, int j) {
    if (j < 0 || j > static_cast<int>(x.size()))
        throw std::domain_error("eval_elem_sym: index out of range");
    return eval_all_elem_sym(x, j)[static_cast<std::size_t>(j)];
}

inline double eval_combo(const SymCombo& phi, const Point& x) {
    if (static_cast<int>(x.size()) != phi.n)
        throw std::domain_error("eval_combo: dimension mismatch");
    const auto e = eval_all_elem_sym(x, phi.n);
    double r = 0.0;
    for (int j = 0; j <= phi.n; ++j)
        r += phi.coeffs[static_cast<std::size_t>(j)] * e[static_cast<std::size_t>(j)];
    return r;
}

// dphi/dx_i = sum_{j>=1} c_j E_{j-1}(x with coordinate i removed).
inline Point gradient(const SymCombo& phi, const Point& x) {
    if (static_cast<int>(x.size()) != phi.n)
        throw std::domain_error("gradient: dimension mismatch");
    const int n = phi.n;
    Point g(static_cast<std::size_t>(n), 0.0);
    Point rest;
    rest.reserve(static_cast<std::size_t>(n) - 1);
    for (int i = 0; i < n; ++i) {
        rest.clear();
        for (int l = 0; l < n; ++l)
            if (l != i) rest.push_back(x[static_cast<std::size_t>(l)]);
        const auto e = eval_all_elem_sym(rest, n - 1);
        double gi = 0.0;
        for (int j = 1; j <= n; ++j)
            gi += phi.coeffs[static_cast<std::size_t>(j)] * e[static_cast<std::size_t>(j) - 1];
        g[static_cast<std::size_t>(i)] = gi;
    }
    return g;
}

// Number of coordinate clusters: sorted coordinates are grouped greedily and a
// new cluster starts when the gap exceeds tol * max(1, |x|_inf).
inline int distinct_components(const Point& x, double tol) {
    if (tol < 0.0) throw std::domain_error("distinct_components: tol must be >= 0");
    if (x.empty()) return 0;
    Point s = x;
    std::sort(s.begin(), s.end());
    double inf = 0.0;
    for (double v : s) inf = std::max(inf, std::abs(v));
    const double gap = tol * std::max(1.0, inf);
    int count = 1;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] - s[i - 1] > gap) ++count;
    return count;
}

enum class CurveMode { Edge, Diagonal };

namespace detail {

// Newton divided-difference interpolation through (nodes[i], values[i]),
// expanded to monomial coefficients.
inline UniPoly interpolate(const std::vector<double>& nodes, std::vector<double> values) {
    const std::size_t m = nodes.size();
    for (std::size_t level = 1; level < m; ++level)
        for (std::size_t i = m - 1; i >= level; --i)
            values[i] = (values[i] - values[i - 1]) / (nodes[i] - nodes[i - level]);
    UniPoly p = UniPoly::constant(values[m - 1]);
    for (std::size_t i = m - 1; i-- > 0;) {
        p.mul_linear(nodes[i]);
        p = p.add_scaled(UniPoly::constant(values[i]), 1.0);
    }
    return p;
}

}  // namespace detail

// Restriction of phi to a univariate curve inside the level set
// sum of free coordinates = gamma_star, the coordinates in `fixed` held at the
// given values.  Edge mode: the two free coordinates are (t, gamma_star - t).
// Diagonal mode: all free coordinates but the last equal t, the last one is
// gamma_star - (|K|-1) t.  Coefficients are recovered by interpolation at
// Chebyshev nodes over [t_lo, t_hi].
inline UniPoly diagonal_restriction(const SymCombo& phi, double gamma_star,
                                    const std::vector<std::pair<int, double>>& fixed,
                                    CurveMode mode, double t_lo = -1.0, double t_hi = 1.0) {
    const int n = phi.n;
    std::vector<char> is_fixed(static_cast<std::size_t>(n), 0);
    Point base(static_cast<std::size_t>(n), 0.0);
    for (const auto& [idx, val] : fixed) {
        if (idx < 0 || idx >= n) throw std::domain_error("diagonal_restriction: fixed index out of range");
        if (is_fixed[static_cast<std::size_t>(idx)]) throw std::domain_error("diagonal_restriction: duplicate fixed index");
        is_fixed[static_cast<std::size_t>(idx)] = 1;
        base[static_cast<std::size_t>(idx)] = val;
    }
    std::vector<int> free_idx;
    for (int i = 0; i < n; ++i)
        if (!is_fixed[static_cast<std::size_t>(i)]) free_idx.push_back(i);
    const int kf = static_cast<int>(free_idx.size());
    if (kf < 2) throw std::domain_error("diagonal_restriction: need at least 2 free coordinates");
    if (mode == CurveMode::Edge && kf != 2)
        throw std::domain_error("diagonal_restriction: edge mode needs exactly 2 free coordinates");
    if (!(t_hi > t_lo)) throw std::domain_error("diagonal_restriction: empty t-range");

    const int deg = std::max(phi.degree(), 0);
    const int m = deg + 1;
    std::vector<double> nodes(static_cast<std::size_t>(m));
    std::vector<double> values(static_cast<std::size_t>(m));
    const double mid = 0.5 * (t_lo + t_hi), half = 0.5 * (t_hi - t_lo);
    for (int i = 0; i < m; ++i) {
        // Chebyshev nodes; for m == 1 just the midpoint.
        const double c = (m == 1) ? 0.0 : std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * m));
        const double t = mid + half * c;
        nodes[static_cast<std::size_t>(i)] = t;
        Point x = base;
        if (mode == CurveMode::Edge) {
            x[static_cast<std::size_t>(free_idx[0])] = t;
            x[static_cast<std::size_t>(free_idx[1])] = gamma_star - t;
        } else {
            for (int j = 0; j + 1 < kf; ++j)
                x[static_cast<std::size_t>(free_idx[static_cast<std::size_t>(j)])] = t;
            x[static_cast<std::size_t>(free_idx.back())] = gamma_star - (kf - 1) * t;
        }
        values[static_cast<std::size_t>(i)] = eval_combo(phi, x);
    }
    return detail::interpolate(nodes, values).trimmed_small(1e-12);
}

}  // namespace elemsym
