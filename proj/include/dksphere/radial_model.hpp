#pragma once

// Radial ODE systems and differential operators of the Dirac-Kaehler field on
// the 3-sphere (curvature radius 1, r in [0, pi]).
//
// Amplitudes K, L, M, N obey, for j >= 1,
//   K' = -(a/sin r) M - (eps+m) L
//   L' =  (a/sin r) N + (eps-m) K
//   M' = -cot r M - (a/sin r) K - (eps+m) N
//   N' =  cot r N + (a/sin r) L + (eps-m) M
// with a = sqrt(j(j+1)); for j = 0 only the (M, N) pair survives. The
// constraint branch lambda = -1 and the parity branch delta = -1 both amount
// to m -> -m, so every system here is written with m_eff = lambda*delta*m.
//
// Fourth-order operators act on functions of x = cos^2 r.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "jet.hpp"
#include "rational.hpp"

namespace dksphere {

struct QuantumNumbers {
    QuantumNumbers(int j_, int n_) : j(j_), n(n_)
    {
        if (j < 0 || n < 0) {
            throw std::invalid_argument("quantum numbers j and n must be non-negative");
        }
        a = std::sqrt(static_cast<double>(a_sq()));
    }

    /// a^2 = j(j+1), exact.
    long a_sq() const { return static_cast<long>(j) * (j + 1); }

    int j;
    int n;
    double a;
};

/// Mass, energy and branch labels. eps and m are the single source of truth; p^2 is derived.
class ModeParams {
public:
    ModeParams(double mass, double eps, int lambda_sign = +1, int delta_sign = +1)
        : m_(mass), eps_(eps), lambda_(lambda_sign), delta_(delta_sign)
    {
        if (!(mass >= 0.0) || !std::isfinite(mass) || !std::isfinite(eps)) {
            throw std::invalid_argument("mass must be finite and non-negative, energy finite");
        }
        if ((lambda_sign != 1 && lambda_sign != -1) || (delta_sign != 1 && delta_sign != -1)) {
            throw std::invalid_argument("lambda and delta must be +1 or -1");
        }
    }

    /// eps = eps_sign * sqrt(p^2 + m^2).
    static ModeParams from_p_sq(double p_sq, double mass, int eps_sign = +1, int lambda_sign = +1,
                                int delta_sign = +1)
    {
        if (eps_sign != 1 && eps_sign != -1) {
            throw std::invalid_argument("eps_sign must be +1 or -1");
        }
        const double e2 = p_sq + mass * mass;
        if (e2 < 0.0) {
            throw std::invalid_argument("p^2 + m^2 must be non-negative");
        }
        return ModeParams(mass, eps_sign * std::sqrt(e2), lambda_sign, delta_sign);
    }

    double mass() const { return m_; }
    double eps() const { return eps_; }
    double p_sq() const { return eps_ * eps_ - m_ * m_; }
    int lambda_sign() const { return lambda_; }
    int delta_sign() const { return delta_; }
    int eps_sign() const { return eps_ < 0.0 ? -1 : 1; }

    /// Mass entering the radial equations after the branch substitutions.
    double effective_mass() const { return lambda_ * delta_ * m_; }

private:
    double m_;
    double eps_;
    int lambda_;
    int delta_;
};

/// Coefficient function of the form
///   sum_k poly[k] x^k + sum_k at_zero[k-1] x^-k + sum_k at_one[k-1] (1-x)^-k.
/// Every operator coefficient in this model has this shape.
struct CoefficientFunction {
    std::vector<double> poly;
    std::vector<double> at_zero;
    std::vector<double> at_one;

    double operator()(double x) const
    {
        double s = 0.0;
        for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
            s = s * x + *it;
        }
        const double ix = 1.0 / x, iy = 1.0 / (1.0 - x);
        double t = 0.0;
        for (auto it = at_zero.rbegin(); it != at_zero.rend(); ++it) {
            t = (t + *it) * ix;
        }
        double u = 0.0;
        for (auto it = at_one.rbegin(); it != at_one.rend(); ++it) {
            u = (u + *it) * iy;
        }
        return s + t + u;
    }

    Jet operator()(const Jet& x) const
    {
        Jet s = Jet::constant(0.0, x.order());
        for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
            s = s * x;
            s.coeff(0) += *it;
        }
        if (!at_zero.empty()) {
            const Jet ix = 1.0 / x;
            Jet t        = Jet::constant(0.0, x.order());
            for (auto it = at_zero.rbegin(); it != at_zero.rend(); ++it) {
                t = (t + *it) * ix;
            }
            s += t;
        }
        if (!at_one.empty()) {
            const Jet iy = 1.0 / (1.0 - x);
            Jet u        = Jet::constant(0.0, x.order());
            for (auto it = at_one.rbegin(); it != at_one.rend(); ++it) {
                u = (u + *it) * iy;
            }
            s += u;
        }
        return s;
    }

    /// Most singular term at x -> 0 (or x -> 1), evaluated at x; 0 when regular there.
    double leading_pole_at_zero(double x) const
    {
        for (std::size_t k = at_zero.size(); k > 0; --k) {
            if (at_zero[k - 1] != 0.0) {
                return at_zero[k - 1] / std::pow(x, static_cast<double>(k));
            }
        }
        return 0.0;
    }
    double leading_pole_at_one(double x) const
    {
        for (std::size_t k = at_one.size(); k > 0; --k) {
            if (at_one[k - 1] != 0.0) {
                return at_one[k - 1] / std::pow(1.0 - x, static_cast<double>(k));
            }
        }
        return 0.0;
    }

    bool identically_zero() const
    {
        auto zero = [](const std::vector<double>& v) {
            for (double c : v) {
                if (c != 0.0) {
                    return false;
                }
            }
            return true;
        };
        return zero(poly) && zero(at_zero) && zero(at_one);
    }

    CoefficientFunction scaled(double s) const
    {
        CoefficientFunction c = *this;
        for (double& v : c.poly) {
            v *= s;
        }
        for (double& v : c.at_zero) {
            v *= s;
        }
        for (double& v : c.at_one) {
            v *= s;
        }
        return c;
    }
};

/// sum_k c_k(x) d^k/dx^k.
class LinearDifferentialOperator {
public:
    LinearDifferentialOperator(std::string name, std::vector<CoefficientFunction> coeffs)
        : name_(std::move(name)), coeffs_(std::move(coeffs))
    {
        if (coeffs_.size() < 2) {
            throw std::invalid_argument("differential operator needs order >= 1");
        }
        if (coeffs_.back().identically_zero()) {
            throw std::invalid_argument("leading coefficient of " + name_ + " is identically zero");
        }
    }

    const std::string& name() const { return name_; }
    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const CoefficientFunction& coeff(int k) const { return coeffs_[static_cast<std::size_t>(k)]; }
    const std::vector<CoefficientFunction>& coeffs() const { return coeffs_; }

    /// Terms c_k(x) y^(k)(x) given derivative values y, y', ..., y^(order).
    std::vector<double> terms(double x, const std::vector<double>& derivs) const
    {
        if (static_cast<int>(derivs.size()) < order() + 1) {
            throw std::invalid_argument(name_ + ": not enough derivatives supplied");
        }
        std::vector<double> t(coeffs_.size());
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            t[k] = coeffs_[k](x) * derivs[k];
        }
        return t;
    }

    double apply(double x, const std::vector<double>& derivs) const
    {
        double s = 0.0;
        for (double t : terms(x, derivs)) {
            s += t;
        }
        return s;
    }

    /// Applies the operator to a Taylor jet of y about x0; result has order y.order() - order().
    Jet apply(const Jet& y, double x0) const
    {
        const int out_order = y.order() - order();
        if (out_order < 0) {
            throw std::invalid_argument(name_ + ": jet order too low");
        }
        const Jet xv = Jet::variable(x0, out_order);
        Jet result   = Jet::constant(0.0, out_order);
        Jet dy       = y;
        for (int k = 0; k <= order(); ++k) {
            result += coeffs_[static_cast<std::size_t>(k)](xv) * dy.truncated(out_order);
            if (k < order()) {
                dy = dy.derivative();
            }
        }
        return result;
    }

    LinearDifferentialOperator with_coeff(int k, CoefficientFunction c) const
    {
        auto copy                          = coeffs_;
        copy[static_cast<std::size_t>(k)] = std::move(c);
        return LinearDifferentialOperator(name_, std::move(copy));
    }

private:
    std::string name_;
    std::vector<CoefficientFunction> coeffs_;
};

/// dY/dr = A(r) Y with A(r) = constant + csc_part / sin r + cot_part * cot r.
template <std::size_t Dim>
class FirstOrderSystem {
public:
    using Matrix = std::array<std::array<double, Dim>, Dim>;
    using State  = std::array<double, Dim>;

    FirstOrderSystem(Matrix constant, Matrix csc_part, Matrix cot_part)
        : constant_(constant), csc_(csc_part), cot_(cot_part)
    {
    }

    static constexpr std::size_t dim() { return Dim; }
    static constexpr std::array<double, 2> singular_points() { return {0.0, std::numbers::pi}; }

    Matrix matrix(double r) const
    {
        const double s = std::sin(r);
        if (s == 0.0) {
            throw DomainError("radial system evaluated at a pole r=" + std::to_string(r));
        }
        const double is = 1.0 / s, ct = std::cos(r) / s;
        Matrix a{};
        for (std::size_t i = 0; i < Dim; ++i) {
            for (std::size_t k = 0; k < Dim; ++k) {
                a[i][k] = constant_[i][k] + csc_[i][k] * is + cot_[i][k] * ct;
            }
        }
        return a;
    }

    State derivative(double r, const State& y) const
    {
        const auto a = matrix(r);
        State d{};
        for (std::size_t i = 0; i < Dim; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < Dim; ++k) {
                s += a[i][k] * y[k];
            }
            d[i] = s;
        }
        return d;
    }

    /// Taylor expansion of the solution through (r0, y0), obtained from the
    /// recurrence (k+1) Y_{k+1} = sum_i A_i Y_{k-i}.
    std::array<Jet, Dim> taylor(double r0, const State& y0, int order) const
    {
        const Jet sn  = sin_jet(r0, order);
        const Jet csc = 1.0 / sn;
        const Jet cot = cos_jet(r0, order) / sn;
        std::array<Jet, Dim> y;
        for (std::size_t i = 0; i < Dim; ++i) {
            y[i]          = Jet(order);
            y[i].coeff(0) = y0[i];
        }
        for (int k = 0; k < order; ++k) {
            for (std::size_t i = 0; i < Dim; ++i) {
                double s = 0.0;
                for (std::size_t q = 0; q < Dim; ++q) {
                    s += constant_[i][q] * y[q].coeff(k);
                    for (int l = 0; l <= k; ++l) {
                        s += (csc_[i][q] * csc.coeff(l) + cot_[i][q] * cot.coeff(l)) * y[q].coeff(k - l);
                    }
                }
                y[i].coeff(k + 1) = s / (k + 1);
            }
        }
        return y;
    }

    const Matrix& constant_part() const { return constant_; }
    const Matrix& csc_part() const { return csc_; }
    const Matrix& cot_part() const { return cot_; }

private:
    Matrix constant_;
    Matrix csc_;
    Matrix cot_;
};

/// j = 0 pair in state order (M, N):
///   M' = -cot r M - (eps+m) N,  N' = cot r N + (eps-m) M.
inline FirstOrderSystem<2> system_j0(const ModeParams& params)
{
    const double e = params.eps(), m = params.effective_mass();
    FirstOrderSystem<2>::Matrix c{{{0.0, -(e + m)}, {e - m, 0.0}}};
    FirstOrderSystem<2>::Matrix s{};
    FirstOrderSystem<2>::Matrix t{{{-1.0, 0.0}, {0.0, 1.0}}};
    return {c, s, t};
}

/// j >= 1 system in state order (K, L, M, N).
inline FirstOrderSystem<4> system_j(const ModeParams& params, const QuantumNumbers& qn)
{
    if (qn.j < 1) {
        throw std::invalid_argument("system_j requires j >= 1; use system_j0 for j = 0");
    }
    const double e = params.eps(), m = params.effective_mass(), a = qn.a;
    FirstOrderSystem<4>::Matrix c{{{0.0, -(e + m), 0.0, 0.0},
                                   {e - m, 0.0, 0.0, 0.0},
                                   {0.0, 0.0, 0.0, -(e + m)},
                                   {0.0, 0.0, e - m, 0.0}}};
    FirstOrderSystem<4>::Matrix s{{{0.0, 0.0, -a, 0.0}, {0.0, 0.0, 0.0, a}, {-a, 0.0, 0.0, 0.0}, {0.0, a, 0.0, 0.0}}};
    FirstOrderSystem<4>::Matrix t{{{0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, -1.0, 0.0}, {0.0, 0.0, 0.0, 1.0}}};
    return {c, s, t};
}

/// Fourth-order equation for K(x), x = cos^2 r.
inline LinearDifferentialOperator operator_K4(double p_sq, double a_sq)
{
    const double p2 = p_sq, p4 = p_sq * p_sq, a2 = a_sq;
    std::vector<CoefficientFunction> c(5);
    c[4] = {{0.0, 0.0, 1.0}, {}, {}};
    c[3] = {{5.0, 7.0}, {}, {-5.0}};
    c[2] = {{10.0 - 0.5 * p2}, {}, {(p2 + a2 - 28.0) / 2.0, (15.0 - 2.0 * a2) / 4.0}};
    c[1] = {{}, {0.25}, {(3.0 * p2 - 7.0) / 4.0, -(3.0 * p2 + a2 - 9.0) / 4.0, a2 / 4.0}};
    c[0] = {{},
            {(p2 - a2) / 8.0},
            {(p2 - a2) / 8.0, (p4 + 2.0 * p2 - 2.0 * a2) / 16.0, -a2 * (p2 - 1.0) / 8.0, a2 * (a2 - 2.0) / 16.0}};
    return LinearDifferentialOperator("K4", std::move(c));
}

/// Fourth-order equation for M(x).
inline LinearDifferentialOperator operator_M4(double p_sq, double a_sq)
{
    const double p2 = p_sq, p4 = p_sq * p_sq, a2 = a_sq;
    std::vector<CoefficientFunction> c(5);
    c[4] = {{0.0, 0.0, 1.0}, {}, {}};
    c[3] = {{5.0, 7.0}, {}, {-5.0}};
    c[2] = {{10.0 - 0.5 * p2}, {}, {(p2 + a2 - 28.0) / 2.0, (15.0 - 2.0 * a2) / 4.0}};
    c[1] = {{}, {0.25}, {(3.0 * p2 - 6.0) / 4.0, -(3.0 * p2 + a2 - 9.0) / 4.0, a2 / 4.0}};
    c[0] = {{},
            {(p2 - a2 - 1.0) / 8.0},
            {(p2 - a2 - 1.0) / 8.0, (p4 + 2.0 * p2 - 2.0 * a2 - 3.0) / 16.0, -a2 * (p2 - 1.0) / 8.0,
             a2 * (a2 - 2.0) / 16.0}};
    return LinearDifferentialOperator("M4", std::move(c));
}

struct OperatorFactorization {
    LinearDifferentialOperator outer;
    LinearDifferentialOperator inner;
};

namespace model_detail {

/// d^2 + (1/2)(u/x - v/(1-x)) d + (1/4)(w/x + w/(1-x) - z/(1-x)^2)
inline LinearDifferentialOperator second_order(std::string name, double u, double v, double w, double z)
{
    std::vector<CoefficientFunction> c(3);
    c[2] = {{1.0}, {}, {}};
    c[1] = {{}, {0.5 * u}, {-0.5 * v}};
    c[0] = {{}, {0.25 * w}, {0.25 * w, -0.25 * z}};
    return LinearDifferentialOperator(std::move(name), std::move(c));
}

}  // namespace model_detail

/// K4 = x^2 * outer o inner; kernel of inner holds the K1, K2 solutions.
inline OperatorFactorization factor_pair_K(double p_sq, double a_sq)
{
    return {model_detail::second_order("A2", 3.0, 7.0, p_sq - a_sq - 10.0, a_sq - 6.0),
            model_detail::second_order("K2", 1.0, 3.0, p_sq - a_sq, a_sq)};
}

/// M4 = x^2 * outer o inner; kernel of inner holds the M3, M4 solutions.
inline OperatorFactorization factor_pair_M(double p_sq, double a_sq)
{
    return {model_detail::second_order("B2", 3.0, 7.0, p_sq - a_sq - 9.0, a_sq - 6.0),
            model_detail::second_order("M2", 1.0, 3.0, p_sq - a_sq - 1.0, a_sq)};
}

/// j = 0 equation for M in x = (1 - cos r)/2:
///   x(1-x) M'' + (1/2 - x) M' + (p^2 + 1 - 1/(2x) - 1/(2(1-x))) M = 0.
inline LinearDifferentialOperator operator_j0(double p_sq)
{
    std::vector<CoefficientFunction> c(3);
    c[2] = {{0.0, 1.0, -1.0}, {}, {}};
    c[1] = {{0.5, -1.0}, {}, {}};
    c[0] = {{p_sq + 1.0}, {-0.5}, {-0.5}};
    return LinearDifferentialOperator("J0", std::move(c));
}

/// Left side of the K equation of the coupled pair in x = cos^2 r:
///   [4x(1-x) d^2 + 2(1-2x) d + p^2 - a^2/(1-x)] K = (2a sqrt(x)/(1-x)) M.
inline LinearDifferentialOperator coupling_K(double p_sq, double a_sq)
{
    std::vector<CoefficientFunction> c(3);
    c[2] = {{0.0, 4.0, -4.0}, {}, {}};
    c[1] = {{2.0, -4.0}, {}, {}};
    c[0] = {{p_sq}, {}, {-a_sq}};
    return LinearDifferentialOperator("coupling_K", std::move(c));
}

/// [4x(1-x) d^2 + 2(1-2x) d + p^2 + 1 - (a^2+2)/(1-x)] M = (2a sqrt(x)/(1-x)) K.
inline LinearDifferentialOperator coupling_M(double p_sq, double a_sq)
{
    std::vector<CoefficientFunction> c(3);
    c[2] = {{0.0, 4.0, -4.0}, {}, {}};
    c[1] = {{2.0, -4.0}, {}, {}};
    c[0] = {{p_sq + 1.0}, {}, {-(a_sq + 2.0)}};
    return LinearDifferentialOperator("coupling_M", std::move(c));
}

struct IndicialExponents {
    std::array<Rational, 4> all;
    std::array<Rational, 2> bound;
};

/// Local exponents gamma of (1-x)^gamma at x = 1 for j >= 1.
inline IndicialExponents indicial_exponents(int j)
{
    if (j < 1) {
        throw std::invalid_argument("indicial exponents are defined for j >= 1");
    }
    const Rational lo(j, 2), hi(j + 2, 2);
    return {{lo, hi, Rational(1 - j, 2), Rational(-(j + 1), 2)}, {lo, hi}};
}

/// Determinant of the 2x2 leading-order system for K = K0 (1-x)^g, M = M0 (1-x)^g.
inline double indicial_determinant(double g, double a_sq)
{
    const double d = 4.0 * g * g - 2.0 * g - a_sq;
    return d * (d - 2.0) - 4.0 * a_sq;
}

}  // namespace dksphere
