#pragma once

// Truncated Taylor arithmetic ("jets"). A Jet of order N holds the Taylor
// coefficients c_0..c_N of a function about an expansion point, so
// f^(k)(x0) = k! * c_k. Arithmetic propagates derivatives exactly up to N,
// which is how every analytic derivative in this library is produced.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

namespace dksphere {

inline constexpr int kMaxJetOrder = 12;

class Jet {
public:
    Jet() = default;

    explicit Jet(int order) : order_(order)
    {
        if (order < 0 || order > kMaxJetOrder) {
            throw std::out_of_range("jet order out of range");
        }
    }

    static Jet constant(double value, int order)
    {
        Jet j(order);
        j.c_[0] = value;
        return j;
    }

    /// The independent variable x0 + t.
    static Jet variable(double x0, int order)
    {
        Jet j(order);
        j.c_[0] = x0;
        if (order >= 1) {
            j.c_[1] = 1.0;
        }
        return j;
    }

    /// Build from derivative values f(x0), f'(x0), ..., f^(N)(x0).
    static Jet from_derivatives(std::span<const double> derivatives)
    {
        Jet j(static_cast<int>(derivatives.size()) - 1);
        double factorial = 1.0;
        for (std::size_t k = 0; k < derivatives.size(); ++k) {
            if (k > 0) {
                factorial *= static_cast<double>(k);
            }
            j.c_[k] = derivatives[k] / factorial;
        }
        return j;
    }

    int order() const { return order_; }
    double value() const { return c_[0]; }

    double coeff(int k) const { return c_[static_cast<std::size_t>(k)]; }
    double& coeff(int k) { return c_[static_cast<std::size_t>(k)]; }

    /// k-th derivative at the expansion point.
    double derivative(int k) const
    {
        assert(k <= order_);
        double factorial = 1.0;
        for (int i = 2; i <= k; ++i) {
            factorial *= i;
        }
        return c_[static_cast<std::size_t>(k)] * factorial;
    }

    /// d/dt of the jet, one order lower.
    Jet derivative() const
    {
        if (order_ == 0) {
            throw std::logic_error("cannot differentiate an order-0 jet");
        }
        Jet d(order_ - 1);
        for (int k = 0; k < order_; ++k) {
            d.c_[k] = (k + 1) * c_[k + 1];
        }
        return d;
    }

    Jet truncated(int order) const
    {
        Jet t(std::min(order, order_));
        std::copy_n(c_.begin(), t.order_ + 1, t.c_.begin());
        return t;
    }

    Jet& operator+=(const Jet& o)
    {
        order_ = std::min(order_, o.order_);
        for (int k = 0; k <= order_; ++k) {
            c_[k] += o.c_[k];
        }
        zero_tail();
        return *this;
    }
    Jet& operator-=(const Jet& o)
    {
        order_ = std::min(order_, o.order_);
        for (int k = 0; k <= order_; ++k) {
            c_[k] -= o.c_[k];
        }
        zero_tail();
        return *this;
    }
    Jet& operator*=(double s)
    {
        for (int k = 0; k <= order_; ++k) {
            c_[k] *= s;
        }
        return *this;
    }
    Jet& operator/=(double s) { return *this *= (1.0 / s); }
    Jet& operator+=(double s)
    {
        c_[0] += s;
        return *this;
    }
    Jet& operator-=(double s)
    {
        c_[0] -= s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator-(Jet a)
    {
        a *= -1.0;
        return a;
    }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, double s) { return a /= s; }
    friend Jet operator+(Jet a, double s) { return a += s; }
    friend Jet operator+(double s, Jet a) { return a += s; }
    friend Jet operator-(Jet a, double s) { return a -= s; }
    friend Jet operator-(double s, const Jet& a) { return (-a) += s; }

    friend Jet operator*(const Jet& a, const Jet& b)
    {
        Jet r(std::min(a.order_, b.order_));
        for (int k = 0; k <= r.order_; ++k) {
            double s = 0.0;
            for (int i = 0; i <= k; ++i) {
                s += a.c_[i] * b.c_[k - i];
            }
            r.c_[k] = s;
        }
        return r;
    }

    friend Jet operator/(const Jet& u, const Jet& v)
    {
        if (v.c_[0] == 0.0) {
            throw std::domain_error("jet division by a function vanishing at the expansion point");
        }
        Jet h(std::min(u.order_, v.order_));
        for (int k = 0; k <= h.order_; ++k) {
            double s = u.c_[k];
            for (int i = 1; i <= k; ++i) {
                s -= v.c_[i] * h.c_[k - i];
            }
            h.c_[k] = s / v.c_[0];
        }
        return h;
    }

    friend Jet operator/(double s, const Jet& v) { return Jet::constant(s, v.order_) / v; }

private:
    void zero_tail()
    {
        std::fill(c_.begin() + order_ + 1, c_.end(), 0.0);
    }

    std::array<double, kMaxJetOrder + 1> c_{};
    int order_ = 0;
};

/// f^s for f(x0) > 0, via g' f = s f' g.
inline Jet pow(const Jet& f, double s)
{
    const double f0 = f.value();
    if (!(f0 > 0.0)) {
        throw std::domain_error("jet pow requires a positive base");
    }
    Jet g(f.order());
    g.coeff(0) = std::pow(f0, s);
    for (int k = 1; k <= f.order(); ++k) {
        double acc = 0.0;
        for (int i = 1; i <= k; ++i) {
            acc += ((s + 1.0) * i - k) * f.coeff(i) * g.coeff(k - i);
        }
        g.coeff(k) = acc / (k * f0);
    }
    return g;
}

inline Jet ipow(const Jet& f, int n)
{
    if (n < 0) {
        return 1.0 / ipow(f, -n);
    }
    Jet result = Jet::constant(1.0, f.order());
    Jet base   = f;
    while (n > 0) {
        if (n & 1) {
            result = result * base;
        }
        n >>= 1;
        if (n > 0) {
            base = base * base;
        }
    }
    return result;
}

inline Jet sqrt(const Jet& f) { return pow(f, 0.5); }

/// outer(inner(t)) where `outer` is expanded about inner.value().
inline Jet compose(const Jet& outer, const Jet& inner)
{
    const int order = std::min(outer.order(), inner.order());
    Jet shift       = inner.truncated(order);
    shift.coeff(0)  = 0.0;
    Jet result      = Jet::constant(outer.coeff(order), order);
    for (int k = order - 1; k >= 0; --k) {
        result = result * shift;
        result.coeff(0) += outer.coeff(k);
    }
    return result;
}

/// Taylor jets of sin and cos of the independent variable about r0.
inline Jet sin_jet(double r0, int order)
{
    Jet j(order);
    const double s = std::sin(r0), c = std::cos(r0);
    const std::array<double, 4> cycle{s, c, -s, -c};
    double factorial = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) {
            factorial *= k;
        }
        j.coeff(k) = cycle[static_cast<std::size_t>(k % 4)] / factorial;
    }
    return j;
}

inline Jet cos_jet(double r0, int order)
{
    Jet j(order);
    const double s = std::sin(r0), c = std::cos(r0);
    const std::array<double, 4> cycle{c, -s, -c, s};
    double factorial = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) {
            factorial *= k;
        }
        j.coeff(k) = cycle[static_cast<std::size_t>(k % 4)] / factorial;
    }
    return j;
}

/// Antiderivative with the given constant term, one order higher.
inline Jet integrate(const Jet& f, double constant)
{
    Jet r(std::min(f.order() + 1, kMaxJetOrder));
    r.coeff(0) = constant;
    for (int k = 1; k <= r.order(); ++k) {
        r.coeff(k) = f.coeff(k - 1) / k;
    }
    return r;
}

}  // namespace dksphere
