#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "jet.hpp"

namespace dksphere {

/// Dense real polynomial, coefficients in ascending powers.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

    static Polynomial monomial(double coeff, int power)
    {
        std::vector<double> c(static_cast<std::size_t>(power) + 1, 0.0);
        c.back() = coeff;
        return Polynomial(std::move(c));
    }

    const std::vector<double>& coefficients() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool empty() const { return c_.empty(); }

    double operator()(double x) const
    {
        double s = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            s = s * x + *it;
        }
        return s;
    }

    Jet operator()(const Jet& x) const
    {
        Jet s = Jet::constant(0.0, x.order());
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            s = s * x;
            s.coeff(0) += *it;
        }
        return s;
    }

    Polynomial derivative() const
    {
        if (c_.size() <= 1) {
            return Polynomial({0.0});
        }
        std::vector<double> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) {
            d[k - 1] = static_cast<double>(k) * c_[k];
        }
        return Polynomial(std::move(d));
    }

    /// Exact division by x. The constant term must vanish (up to `tol` times the coefficient scale).
    Polynomial divided_by_x(double tol = 1e-13) const
    {
        if (c_.empty()) {
            return *this;
        }
        double scale = 0.0;
        for (double v : c_) {
            scale = std::max(scale, std::abs(v));
        }
        if (std::abs(c_.front()) > tol * std::max(scale, 1.0)) {
            throw std::domain_error("polynomial is not divisible by x");
        }
        return Polynomial(std::vector<double>(c_.begin() + 1, c_.end()));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b)
    {
        std::vector<double> r(std::max(a.c_.size(), b.c_.size()), 0.0);
        for (std::size_t k = 0; k < a.c_.size(); ++k) {
            r[k] += a.c_[k];
        }
        for (std::size_t k = 0; k < b.c_.size(); ++k) {
            r[k] += b.c_[k];
        }
        return Polynomial(std::move(r));
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

    friend Polynomial operator*(double s, Polynomial p)
    {
        for (double& v : p.c_) {
            v *= s;
        }
        return p;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.c_.empty() || b.c_.empty()) {
            return Polynomial();
        }
        std::vector<double> r(a.c_.size() + b.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            for (std::size_t k = 0; k < b.c_.size(); ++k) {
                r[i + k] += a.c_[i] * b.c_[k];
            }
        }
        return Polynomial(std::move(r));
    }

private:
    std::vector<double> c_;
};

}  // namespace dksphere
