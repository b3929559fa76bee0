#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace elemsym {

// Univariate real polynomial, coefficients stored in ascending power order.
// The representation is kept trimmed: the leading coefficient is nonzero
// unless the polynomial is identically zero (then coeffs == {0}).
class UniPoly {
public:
    UniPoly() : c_{0.0} {}

    explicit UniPoly(std::vector<double> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.push_back(0.0);
        trim();
    }

    static UniPoly constant(double v) { return UniPoly({v}); }

    // x^k
    static UniPoly monomial(int k, double scale = 1.0) {
        std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
        c.back() = scale;
        return UniPoly(std::move(c));
    }

    const std::vector<double>& coeffs() const { return c_; }
    double operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }

    int degree() const { return static_cast<int>(c_.size()) - 1; }

    bool is_zero() const { return c_.size() == 1 && c_[0] == 0.0; }

    double max_abs_coeff() const {
        double m = 0.0;
        for (double v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    // Horner evaluation.
    double operator()(double t) const {
        double r = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) r = r * t + c_[i];
        return r;
    }

    // sum |c_i| |t|^i, a local magnitude scale for zero tests at t.
    double eval_abs(double t) const {
        double r = 0.0;
        const double a = std::abs(t);
        for (std::size_t i = c_.size(); i-- > 0;) r = r * a + std::abs(c_[i]);
        return r;
    }

    UniPoly derivative() const {
        if (c_.size() <= 1) return UniPoly();
        std::vector<double> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i)
            d[i - 1] = static_cast<double>(i) * c_[i];
        return UniPoly(std::move(d));
    }

    UniPoly operator*(double s) const {
        std::vector<double> c = c_;
        for (double& v : c) v *= s;
        return UniPoly(std::move(c));
    }

    UniPoly operator+(const UniPoly& o) const { return add_scaled(o, 1.0); }
    UniPoly operator-(const UniPoly& o) const { return add_scaled(o, -1.0); }

    UniPoly add_scaled(const UniPoly& o, double s) const {
        std::vector<double> c(std::max(c_.size(), o.c_.size()), 0.0);
        for (std::size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i) c[i] += s * o.c_[i];
        return UniPoly(std::move(c));
    }

    // Multiply by the linear factor (t - r), in place.
    void mul_linear(double r) {
        c_.push_back(0.0);
        for (std::size_t i = c_.size(); i-- > 1;)
            c_[i] = c_[i - 1] - r * c_[i];
        c_[0] = -r * c_[0];
        trim();
    }

    // Synthetic division by (t - r); returns the quotient, discarding the
    // remainder (exact when r is a root).
    UniPoly deflate(double r) const {
        if (degree() < 1) throw std::domain_error("UniPoly::deflate: degree < 1");
        std::vector<double> q(c_.size() - 1);
        double carry = c_.back();
        for (std::size_t i = c_.size() - 1; i-- > 0;) {
            q[i] = carry;
            carry = c_[i] + r * carry;
        }
        return UniPoly(std::move(q));
    }

    // Long division: *this = q * d + rem.  Throws if d is zero.
    std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const {
        if (d.is_zero()) throw std::domain_error("UniPoly::divmod: division by zero polynomial");
        std::vector<double> rem = c_;
        const int dn = d.degree();
        const double lead = d.c_.back();
        int rn = static_cast<int>(rem.size()) - 1;
        std::vector<double> q(static_cast<std::size_t>(std::max(0, rn - dn)) + 1, 0.0);
        while (rn >= dn) {
            double f = rem[static_cast<std::size_t>(rn)] / lead;
            q[static_cast<std::size_t>(rn - dn)] = f;
            for (int i = 0; i <= dn; ++i)
                rem[static_cast<std::size_t>(rn - dn + i)] -= f * d.c_[static_cast<std::size_t>(i)];
            rem[static_cast<std::size_t>(rn)] = 0.0;
            --rn;
        }
        return {UniPoly(std::move(q)), UniPoly(std::move(rem))};
    }

    // Drop trailing coefficients whose magnitude is below rel_tol times the
    // largest coefficient magnitude.  Used after interpolation or remainder
    // computations where noise can inflate the apparent degree.
    UniPoly trimmed_small(double rel_tol) const {
        const double thr = rel_tol * std::max(max_abs_coeff(), 1e-300);
        std::vector<double> c = c_;
        while (c.size() > 1 && std::abs(c.back()) <= thr) c.pop_back();
        return UniPoly(std::move(c));
    }

    std::string to_string() const {
        std::string s = "[";
        char buf[40];
        for (std::size_t i = 0; i < c_.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", c_[i]);
            if (i) s += ", ";
            s += buf;
        }
        return s + "]";
    }

private:
    void trim() {
        while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
    }

    std::vector<double> c_;
};

}  // namespace elemsym
