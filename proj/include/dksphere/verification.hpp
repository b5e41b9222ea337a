#pragma once

// Numerical checks: operator residuals, the factorization identity, the
// 4x4 Wronskian, and consistency between the closed-form representations.
// Every check returns a VerificationReport; residuals are relative to the
// largest participating term at each sample point.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "closed_form.hpp"
#include "errors.hpp"
#include "jet.hpp"
#include "radial_model.hpp"

namespace dksphere {

struct WorstPoint {
    double x;
    double abs_residual;
    double rel_residual;
};

struct VerificationReport {
    std::string check_name;
    double max_abs_residual = 0.0;
    double max_rel_residual = 0.0;
    int sample_count        = 0;
    double tolerance        = 0.0;
    bool pass               = true;
    std::vector<WorstPoint> details;  // worst offenders, largest first
    std::string error;                // set when the check could not run
};

/// Accumulates per-point residuals into a report.
class ReportBuilder {
public:
    ReportBuilder(std::string name, double tolerance, std::size_t keep = 5) : keep_(keep)
    {
        report_.check_name = std::move(name);
        report_.tolerance  = tolerance;
    }

    /// Residual at x; `scale` is the size of the terms it was formed from (0/0 counts as 0).
    void add(double x, double residual, double scale)
    {
        const double a   = std::abs(residual);
        const double rel = scale > 0.0 ? a / scale : (a == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        ++report_.sample_count;
        report_.max_abs_residual = std::max(report_.max_abs_residual, a);
        if (!(rel <= report_.max_rel_residual)) {
            report_.max_rel_residual = std::isnan(rel) ? std::numeric_limits<double>::infinity() : rel;
        }
        auto& d = report_.details;
        d.push_back({x, a, rel});
        std::stable_sort(d.begin(), d.end(), [](const WorstPoint& l, const WorstPoint& r) {
            return l.rel_residual > r.rel_residual;
        });
        if (d.size() > keep_) {
            d.pop_back();
        }
    }

    VerificationReport finish() const
    {
        VerificationReport r = report_;
        r.pass               = r.error.empty() && r.max_rel_residual <= r.tolerance;
        return r;
    }

    VerificationReport fail(std::string message) const
    {
        VerificationReport r = report_;
        r.error              = std::move(message);
        r.pass               = false;
        return r;
    }

private:
    VerificationReport report_;
    std::size_t keep_;
};

/// Chebyshev-distributed points on [lo, hi] (extrema of T_{count-1}).
inline std::vector<double> chebyshev_grid(int count = 200, double lo = 0.02, double hi = 0.98)
{
    if (count < 2) {
        throw std::invalid_argument("chebyshev grid needs at least two points");
    }
    std::vector<double> x(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double t                 = std::cos(std::numbers::pi * (count - 1 - i) / (count - 1));
        x[static_cast<std::size_t>(i)] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
    }
    return x;
}

/// Source of Taylor jets about a point: (x0, order) -> jet.
using JetSource = std::function<Jet(double, int)>;

namespace verify_detail {

inline void require_interior(double x, double margin, const std::string& who)
{
    if (!(x > margin && x < 1.0 - margin)) {
        throw DomainError(who + ": sample x=" + std::to_string(x) + " within " + std::to_string(margin) +
                          " of the singular endpoints");
    }
}

}  // namespace verify_detail

/// Residual of op applied to supplied derivative data: derivs[i] = {y, y', ..., y^(order)} at x[i].
inline VerificationReport residual_operator(const LinearDifferentialOperator& op, std::span<const double> x,
                                            std::span<const std::vector<double>> derivs, double tolerance,
                                            std::string name = {})
{
    ReportBuilder b(name.empty() ? "residual_" + op.name() : std::move(name), tolerance);
    if (x.size() != derivs.size()) {
        throw std::invalid_argument("residual_operator: grid and derivative data differ in length");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        verify_detail::require_interior(x[i], 1e-6, "residual_operator");
        const auto t = op.terms(x[i], derivs[i]);
        double sum = 0.0, scale = 0.0;
        for (double v : t) {
            sum += v;
            scale = std::max(scale, std::abs(v));
        }
        b.add(x[i], sum, scale);
    }
    return b.finish();
}

/// Residual of op applied to analytic jets of y.
inline VerificationReport residual_operator(const LinearDifferentialOperator& op, const JetSource& y,
                                            std::span<const double> x, double tolerance, std::string name = {})
{
    std::vector<std::vector<double>> derivs;
    derivs.reserve(x.size());
    for (double xi : x) {
        verify_detail::require_interior(xi, 1e-6, "residual_operator");
        const Jet j = y(xi, op.order());
        std::vector<double> d(static_cast<std::size_t>(op.order()) + 1);
        for (int k = 0; k <= op.order(); ++k) {
            d[static_cast<std::size_t>(k)] = j.derivative(k);
        }
        derivs.push_back(std::move(d));
    }
    return residual_operator(op, x, derivs, tolerance, std::move(name));
}

// ---------------------------------------------------------------------------
// Finite differences (used only where no analytic derivatives exist)

/// Default step for the k-th derivative: balances O(h^4) truncation against
/// eps/h^k rounding.
inline double fd_default_step(int order)
{
    static constexpr std::array<double, 5> steps{0.0, 1e-3, 2e-3, 5e-3, 1e-2};
    if (order < 1 || order > 4) {
        throw std::invalid_argument("finite-difference derivative order must be 1..4");
    }
    return steps[static_cast<std::size_t>(order)];
}

namespace verify_detail {

/// Centered 5-point stencil for derivative k (1..4) at step h.
inline double stencil5(const std::function<double(double)>& f, double x, int k, double h)
{
    const double fm2 = f(x - 2 * h), fm1 = f(x - h), f0 = f(x), fp1 = f(x + h), fp2 = f(x + 2 * h);
    switch (k) {
        case 1: return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
        case 2: return (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
        case 3: return (-fm2 + 2 * fm1 - 2 * fp1 + fp2) / (2 * h * h * h);
        case 4: return (fm2 - 4 * fm1 + 6 * f0 - 4 * fp1 + fp2) / (h * h * h * h);
        default: throw std::invalid_argument("stencil order must be 1..4");
    }
}

}  // namespace verify_detail

/// k-th derivative by the 5-point stencil with one Richardson step-halving.
/// Orders 1-2 are O(h^4) before extrapolation; orders 3-4 are O(h^2).
inline double fd_derivative(const std::function<double(double)>& f, double x, int order, double h = 0.0)
{
    if (h <= 0.0) {
        h = fd_default_step(order);
    }
    const double coarse = verify_detail::stencil5(f, x, order, h);
    const double fine   = verify_detail::stencil5(f, x, order, 0.5 * h);
    const double p      = order <= 2 ? 4.0 : 2.0;
    const double w      = std::pow(2.0, p);
    return (w * fine - coarse) / (w - 1.0);
}

/// Fornberg weights for derivatives 0..max_order at z from nodes xs.
inline std::vector<std::vector<double>> fornberg_weights(double z, std::span<const double> xs, int max_order)
{
    const int n = static_cast<int>(xs.size()) - 1;
    std::vector<std::vector<double>> c(static_cast<std::size_t>(n + 1),
                                       std::vector<double>(static_cast<std::size_t>(max_order + 1), 0.0));
    double c1 = 1.0, c4 = xs[0] - z;
    c[0][0]   = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, max_order);
        double c2    = 1.0;
        const double c5 = c4;
        c4              = xs[static_cast<std::size_t>(i)] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    return c;  // c[node][order]
}

/// Derivatives 0..max_order of sampled data at index i using `width` nodes
/// centred on i (shifted inward at the ends).
inline std::vector<double> grid_derivatives(std::span<const double> t, std::span<const double> y, std::size_t i,
                                            int max_order, std::size_t width = 7)
{
    if (t.size() != y.size() || t.size() < width) {
        throw std::invalid_argument("grid_derivatives: not enough samples");
    }
    std::size_t lo = i >= width / 2 ? i - width / 2 : 0;
    lo             = std::min(lo, t.size() - width);
    const auto w   = fornberg_weights(t[i], t.subspan(lo, width), max_order);
    std::vector<double> d(static_cast<std::size_t>(max_order) + 1, 0.0);
    for (std::size_t k = 0; k < width; ++k) {
        for (int q = 0; q <= max_order; ++q) {
            d[static_cast<std::size_t>(q)] += w[k][static_cast<std::size_t>(q)] * y[lo + k];
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// r <-> x = cos^2 r

/// Jet of r(x) about x0 on the near hemisphere (cos r > 0) or the far one.
inline Jet r_of_x_jet(double x0, int order, bool far_hemisphere = false)
{
    verify_detail::require_interior(x0, 0.0, "r_of_x_jet");
    const double r0 = std::acos(std::sqrt(x0));
    if (order == 0) {
        return Jet::constant(far_hemisphere ? std::numbers::pi - r0 : r0, 0);
    }
    const Jet x      = Jet::variable(x0, order - 1);
    const double sgn = far_hemisphere ? 0.5 : -0.5;
    const Jet drdx   = sgn * pow(x * (1.0 - x), -0.5);
    return integrate(drdx, far_hemisphere ? std::numbers::pi - r0 : r0);
}

/// Re-expands a jet in r (about r(x0)) as a jet in x about x0.
inline Jet r_jet_to_x(const Jet& f_r, double x0, bool far_hemisphere = false)
{
    return compose(f_r, r_of_x_jet(x0, f_r.order(), far_hemisphere));
}

/// (dy/dx, d^2y/dx^2) from (dy/dr, d^2y/dr^2) with x = cos^2 r.
inline std::array<double, 2> r_to_x_derivatives(double r, double dy_dr, double d2y_dr2)
{
    const double xr  = -std::sin(2.0 * r);
    const double xrr = -2.0 * std::cos(2.0 * r);
    if (std::abs(xr) < 1e-12) {
        throw DomainError("x = cos^2 r is stationary at r=" + std::to_string(r));
    }
    const double yx  = dy_dr / xr;
    const double yxx = (d2y_dr2 - yx * xrr) / (xr * xr);
    return {yx, yxx};
}

// ---------------------------------------------------------------------------
// Factorization identity

struct TestFunction {
    std::string name;
    JetSource jets;
};

/// x^0..x^6 and sin(kx), k = 1..3.
inline std::vector<TestFunction> default_battery()
{
    std::vector<TestFunction> b;
    for (int d = 0; d <= 6; ++d) {
        b.push_back({"x^" + std::to_string(d),
                     [d](double x0, int order) { return ipow(Jet::variable(x0, order), d); }});
    }
    for (int k = 1; k <= 3; ++k) {
        b.push_back({"sin(" + std::to_string(k) + "x)", [k](double x0, int order) {
                         // sin(k x) about x0: chain through the sin jet of k x.
                         Jet s = sin_jet(k * x0, order);
                         double kp = 1.0;
                         for (int q = 1; q <= order; ++q) {
                             kp *= k;
                             s.coeff(q) *= kp;
                         }
                         return s;
                     }});
    }
    return b;
}

/// Compares x^2 (outer o inner) phi with direct phi on [0.05, 0.95] for every battery function.
inline VerificationReport factorization_identity(const LinearDifferentialOperator& outer,
                                                 const LinearDifferentialOperator& inner,
                                                 const LinearDifferentialOperator& direct,
                                                 const std::vector<TestFunction>& battery, double tolerance = 1e-10,
                                                 int samples = 60)
{
    ReportBuilder b("factorization_" + outer.name() + "_" + inner.name() + "_vs_" + direct.name(), tolerance);
    const int order = outer.order() + inner.order();
    if (order != direct.order()) {
        throw std::invalid_argument("factorization_identity: orders do not add up");
    }
    const auto grid = chebyshev_grid(samples, 0.05, 0.95);
    for (const auto& f : battery) {
        for (double x : grid) {
            const Jet phi      = f.jets(x, order);
            const Jet inner_v  = inner.apply(phi, x);
            const double comp  = x * x * outer.apply(inner_v, x).value();
            std::vector<double> d(static_cast<std::size_t>(order) + 1);
            for (int k = 0; k <= order; ++k) {
                d[static_cast<std::size_t>(k)] = phi.derivative(k);
            }
            const auto terms = direct.terms(x, d);
            double dir = 0.0, scale = 0.0;
            for (double t : terms) {
                dir += t;
                scale = std::max(scale, std::abs(t));
            }
            b.add(x, comp - dir, scale);
        }
    }
    return b.finish();
}

inline VerificationReport factorization_identity(const OperatorFactorization& f,
                                                 const LinearDifferentialOperator& direct,
                                                 const std::vector<TestFunction>& battery = default_battery(),
                                                 double tolerance = 1e-10)
{
    return factorization_identity(f.outer, f.inner, direct, battery, tolerance);
}

/// Copy of op with coefficient k scaled by `factor` (negative controls).
inline LinearDifferentialOperator perturb_coefficient(const LinearDifferentialOperator& op, int k, double factor)
{
    return op.with_coeff(k, op.coeff(k).scaled(factor));
}

// ---------------------------------------------------------------------------
// Wronskian

/// Determinant of [y_i^(k)], k = 0..3 (column i holds solution i). Each
/// solution column is scaled to unit max-norm, then each derivative-order
/// row, so the value depends neither on the normalization of individual
/// solutions nor on how fast derivatives grow with k.
inline double wronskian4(const std::array<std::array<double, 4>, 4>& columns)
{
    Eigen::Matrix4d w;
    for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 4; ++k) {
            w(k, i) = columns[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        }
    }
    for (int i = 0; i < 4; ++i) {
        const double norm = w.col(i).cwiseAbs().maxCoeff();
        if (norm > 0.0) {
            w.col(i) /= norm;
        }
    }
    for (int k = 0; k < 4; ++k) {
        const double norm = w.row(k).cwiseAbs().maxCoeff();
        if (norm > 0.0) {
            w.row(k) /= norm;
        }
    }
    return w.determinant();
}

inline double wronskian4(const std::array<JetSource, 4>& solutions, double x0)
{
    if (!(x0 >= 0.05 && x0 <= 0.95)) {
        throw DomainError("wronskian4: x0 must lie in [0.05, 0.95], got " + std::to_string(x0));
    }
    std::array<std::array<double, 4>, 4> cols{};
    for (std::size_t i = 0; i < 4; ++i) {
        const Jet j = solutions[i](x0, 3);
        for (int k = 0; k < 4; ++k) {
            cols[i][static_cast<std::size_t>(k)] = j.derivative(k);
        }
    }
    return wronskian4(cols);
}

/// K components of the general basis as Wronskian inputs.
inline std::array<JetSource, 4> basis_K_sources(const std::array<BasisSolution, 4>& basis)
{
    std::array<JetSource, 4> s;
    for (std::size_t i = 0; i < 4; ++i) {
        s[i] = [b = basis[i]](double x0, int order) { return b.jets_x(x0, order)[0]; };
    }
    return s;
}

// ---------------------------------------------------------------------------
// First-order system residuals

/// |y' - A y| per component relative to the largest of |y'_i| and |A_ik y_k|.
template <std::size_t Dim>
inline VerificationReport system_residual(const FirstOrderSystem<Dim>& sys,
                                          const std::function<std::array<Jet, Dim>(double)>& state_jets,
                                          std::span<const double> r_grid, double tolerance, std::string name)
{
    ReportBuilder b(std::move(name), tolerance);
    for (double r : r_grid) {
        const auto y = state_jets(r);
        const auto a = sys.matrix(r);
        for (std::size_t i = 0; i < Dim; ++i) {
            double rhs = 0.0, scale = std::abs(y[i].coeff(1));
            for (std::size_t k = 0; k < Dim; ++k) {
                const double t = a[i][k] * y[k].value();
                rhs += t;
                scale = std::max(scale, std::abs(t));
            }
            b.add(r, y[i].coeff(1) - rhs, scale);
        }
    }
    return b.finish();
}

/// r-grid avoiding the poles by `buffer`.
inline std::vector<double> interior_r_grid(int count = 200, double buffer = 1e-3)
{
    std::vector<double> r(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        r[static_cast<std::size_t>(i)] = buffer + (std::numbers::pi - 2.0 * buffer) * i / (count - 1);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Closed-form checks

/// Directly given amplitude and partner under their fourth-order operators.
inline std::array<VerificationReport, 2> family_operator_residuals(Family family, const QuantumNumbers& qn,
                                                                   double tolerance = 1e-9,
                                                                   std::span<const double> grid = {})
{
    const auto amps = family_amplitudes(family, qn);
    std::vector<double> x_default;
    if (grid.empty()) {
        x_default = chebyshev_grid();
        grid      = x_default;
    }
    const double a_sq = static_cast<double>(qn.a_sq());
    const std::string tag = std::string(family_name(family)) + "_j" + std::to_string(qn.j) + "_n" +
                            std::to_string(qn.n);
    auto K = residual_operator(operator_K4(amps.p_sq, a_sq),
                               [&](double x, int o) { return amps.K.jet_x(x, o); }, grid, tolerance,
                               "operator_K4_" + tag);
    auto M = residual_operator(operator_M4(amps.p_sq, a_sq),
                               [&](double x, int o) { return amps.M.jet_x(x, o); }, grid, tolerance,
                               "operator_M4_" + tag);
    return {K, M};
}

inline VerificationReport family_system_residual(Family family, const QuantumNumbers& qn, const ModeParams& params,
                                                 double tolerance = 1e-9, std::span<const double> r_grid = {})
{
    const auto amps = family_amplitudes(family, qn);
    std::vector<double> r_default;
    if (r_grid.empty()) {
        r_default = interior_r_grid();
        r_grid    = r_default;
    }
    const auto sys = system_j(params, qn);
    return system_residual<4>(
        sys, [&](double r) { return family_state_jets(amps, params, r, 1); }, r_grid, tolerance,
        "first_order_system_" + std::string(family_name(family)) + "_j" + std::to_string(qn.j) + "_n" +
            std::to_string(qn.n));
}

/// (M, N) of the j = 0 closed form with M0/N0 = ratio against the j = 0 pair.
inline VerificationReport j0_system_residual(int n, const ModeParams& params, double ratio, double tolerance = 1e-9,
                                             std::span<const double> r_grid = {})
{
    auto amps = j0_amplitudes(n, params);
    amps.m0   = ratio * amps.n0;
    std::vector<double> r_default;
    if (r_grid.empty()) {
        r_default = interior_r_grid();
        r_grid    = r_default;
    }
    return system_residual<2>(
        system_j0(params), [&](double r) { return amps.jets_r(r, 1); }, r_grid, tolerance,
        "j0_system_n" + std::to_string(n));
}

/// M'' + (p^2 - (1 + cos^2 r)/sin^2 r) M = 0 and N'' + (p^2 + 1) N = 0.
inline std::array<VerificationReport, 2> j0_scalar_residuals(int n, const ModeParams& params,
                                                             double tolerance = 1e-9)
{
    const auto amps  = j0_amplitudes(n, params);
    const double p2  = params.p_sq();
    const auto grid  = interior_r_grid();
    ReportBuilder bm("j0_scalar_M_n" + std::to_string(n), tolerance);
    ReportBuilder bn("j0_scalar_N_n" + std::to_string(n), tolerance);
    for (double r : grid) {
        const auto y  = amps.jets_r(r, 2);
        const double s = std::sin(r), c = std::cos(r);
        const double m2 = y[0].derivative(2), m0 = y[0].value();
        const double q  = (p2 - (1.0 + c * c) / (s * s)) * m0;
        bm.add(r, m2 + q, std::max(std::abs(m2), std::abs(q)));
        const double n2 = y[1].derivative(2), n0 = (p2 + 1.0) * y[1].value();
        bn.add(r, n2 + n0, std::max(std::abs(n2), std::abs(n0)));
    }
    return {bm.finish(), bn.finish()};
}

/// Partner from the coupled relation vs the explicit partner formula, and the
/// first-order system residual of the assembled quadruple.
inline std::array<VerificationReport, 2> cross_consistency(Family family, const QuantumNumbers& qn,
                                                           const ModeParams& params, double tolerance = 1e-10,
                                                           double system_tolerance = 1e-9)
{
    const auto amps   = family_amplitudes(family, qn);
    const double a_sq = static_cast<double>(qn.a_sq());
    const bool K_direct = family == Family::F1 || family == Family::F2;
    const auto op       = K_direct ? coupling_K(amps.p_sq, a_sq) : coupling_M(amps.p_sq, a_sq);
    const auto& direct  = K_direct ? amps.K : amps.M;
    const auto& partner = K_direct ? amps.M : amps.K;

    const auto grid = chebyshev_grid();
    double sup      = 0.0;
    for (double x : grid) {
        sup = std::max(sup, std::abs(partner.value_x(x)));
    }
    ReportBuilder b("companion_" + std::string(family_name(family)) + "_j" + std::to_string(qn.j) + "_n" +
                        std::to_string(qn.n),
                    tolerance);
    for (double x : grid) {
        const double lhs     = op.apply(direct.jet_x(x, 2), x).value();
        const double via_rel = lhs * (1.0 - x) / (2.0 * qn.a * std::sqrt(x));
        b.add(x, via_rel - partner.value_x(x), sup);
    }
    return {b.finish(), family_system_residual(family, qn, params, system_tolerance)};
}

}  // namespace dksphere
