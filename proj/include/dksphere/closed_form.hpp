#pragma once

// Exact solutions.
//
// j >= 1: four families of quasi-polynomial amplitudes in x = cos^2 r,
//   (i)   K1 = sqrt(x)(1-x)^{j/2} F(-n, j+2+n; 3/2; x)   partner M1
//   (ii)  K2 =        (1-x)^{j/2} F(-n, j+1+n; 1/2; x)   partner M2
//   (iii) M3 = sqrt(x)(1-x)^{j/2} F(-n, j+2+n; 3/2; x)   partner K3
//   (iv)  M4 =        (1-x)^{j/2} F(-n, j+1+n; 1/2; x)   partner K4
// sqrt(x) is rendered as the signed cos r and (1-x)^{1/2} as sin r, so each
// amplitude is cos^h(r) sin^j(r) P(cos^2 r) and is smooth through r = pi/2.
// L and N follow from the first two radial equations.
//
// j = 0: in x = (1 - cos r)/2,
//   N = N0 sqrt(x(1-x)) F(-n-1, 3+n; 3/2; x),  M = M0 x(1-x) F(-n, 4+n; 5/2; x).

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "hypergeometric.hpp"
#include "jet.hpp"
#include "polynomial.hpp"
#include "radial_model.hpp"
#include "spectrum.hpp"

namespace dksphere {

/// scale * x^{h/2} (1-x)^{j/2} P(x), equivalently scale * cos^h r sin^j r P(cos^2 r).
struct QuasiPolynomial {
    int half_power_x = 0;  // h in {0, 1}
    int j            = 0;
    Polynomial poly;
    double scale = 1.0;

    bool odd_about_equator() const { return half_power_x == 1; }

    double value_x(double x) const
    {
        double v = scale * std::pow(1.0 - x, 0.5 * j) * poly(x);
        return half_power_x == 1 ? v * std::sqrt(x) : v;
    }

    Jet jet_x(double x0, int order) const
    {
        if (!(x0 > 0.0 && x0 < 1.0)) {
            throw DomainError("quasi-polynomial x-jet needs x in (0,1), got " + std::to_string(x0));
        }
        const Jet x = Jet::variable(x0, order);
        Jet v       = poly(x) * pow(1.0 - x, 0.5 * j);
        if (half_power_x == 1) {
            v = v * sqrt(x);
        }
        return v * scale;
    }

    Jet jet_r(double r0, int order) const
    {
        const Jet c = cos_jet(r0, order);
        const Jet s = sin_jet(r0, order);
        Jet v       = poly(c * c) * ipow(s, j);
        if (half_power_x == 1) {
            v = v * c;
        }
        return v * scale;
    }
};

/// Closed-form (K, M) of one family at fixed (j, n); p_sq is the family level.
struct FamilyAmplitudes {
    Family family;
    QuantumNumbers qn;
    double p_sq;
    QuasiPolynomial K;
    QuasiPolynomial M;
};

namespace closed_detail {

inline Polynomial hyp_poly(int n, double b, double c) { return terminating_polynomial(Hyp2F1Params(-n, b, c)); }

/// 2n(x-1) F(1-n, b; c; x) - q(x) F(-n, b; c; x) with q linear; the first term is absent for n = 0.
inline Polynomial partner_bracket(int n, double b, double c, const Polynomial& q)
{
    Polynomial bracket = -1.0 * (q * hyp_poly(n, b, c));
    if (n > 0) {
        bracket = bracket + Polynomial({-2.0 * n, 2.0 * n}) * hyp_poly(n - 1, b, c);
    }
    return bracket;
}

}  // namespace closed_detail

/// Directly given amplitude plus its explicit partner for families F1..F4.
inline FamilyAmplitudes family_amplitudes(Family family, const QuantumNumbers& qn)
{
    using closed_detail::hyp_poly;
    using closed_detail::partner_bracket;
    const int j = qn.j, n = qn.n;
    if (j < 1) {
        throw std::invalid_argument("families F1..F4 require j >= 1");
    }
    const double a    = qn.a;
    const double p_sq = to_double(family_p_sq(family, Rational(j), n));
    const double jd   = j;
    const double twon = 2.0 * n;
    switch (family) {
        case Family::F1: {
            QuasiPolynomial K{1, j, hyp_poly(n, j + 2.0 + n, 1.5), 1.0};
            // (j x + 2n(x-1) + x - 1)
            QuasiPolynomial M{0, j, partner_bracket(n, j + 2.0 + n, 1.5, Polynomial({-twon - 1.0, jd + twon + 1.0})),
                              1.0 / a};
            return {family, qn, p_sq, K, M};
        }
        case Family::F2: {
            QuasiPolynomial K{0, j, hyp_poly(n, j + 1.0 + n, 0.5), 1.0};
            // (j x + 2n(x-1)) / sqrt(x): the bracket vanishes at x = 0.
            auto bracket = partner_bracket(n, j + 1.0 + n, 0.5, Polynomial({-twon, jd + twon}));
            QuasiPolynomial M{1, j, bracket.divided_by_x(), 1.0 / a};
            return {family, qn, p_sq, K, M};
        }
        case Family::F3: {
            QuasiPolynomial M{1, j, hyp_poly(n, j + 2.0 + n, 1.5), 1.0};
            // ((j+2) x + 2n(x-1) - 1)
            QuasiPolynomial K{0, j, partner_bracket(n, j + 2.0 + n, 1.5, Polynomial({-twon - 1.0, jd + 2.0 + twon})),
                              1.0 / a};
            return {family, qn, p_sq, K, M};
        }
        case Family::F4: {
            QuasiPolynomial M{0, j, hyp_poly(n, j + 1.0 + n, 0.5), 1.0};
            auto bracket = partner_bracket(n, j + 1.0 + n, 0.5, Polynomial({-twon, jd + 1.0 + twon}));
            QuasiPolynomial K{1, j, bracket.divided_by_x(), 1.0 / a};
            return {family, qn, p_sq, K, M};
        }
        default: break;
    }
    throw std::invalid_argument("family_amplitudes: family must be one of F1..F4");
}

/// (K, L, M, N) jets in r; L and N from
///   L = -(K' + (a/sin r) M)/(eps+m),  N = -(M' + cot r M + (a/sin r) K)/(eps+m).
/// Input jets of order q give outputs of order q-1.
inline std::array<Jet, 4> eliminate_LN(const Jet& K, const Jet& M, double r0, double a, const ModeParams& params)
{
    const double em = params.eps() + params.effective_mass();
    if (em == 0.0) {
        throw DegenerateParameterError("eps + m = 0: L and N cannot be eliminated from K and M");
    }
    const int q   = std::min(K.order(), M.order()) - 1;
    const Jet sn  = sin_jet(r0, q);
    const Jet csc = 1.0 / sn;
    const Jet cot = cos_jet(r0, q) / sn;
    const Jet k0  = K.truncated(q);
    const Jet m0  = M.truncated(q);
    Jet L         = -(K.derivative().truncated(q) + a * csc * m0) / em;
    Jet N         = -(M.derivative().truncated(q) + cot * m0 + a * csc * k0) / em;
    return {k0, L, m0, N};
}

/// Amplitudes sampled on an r-grid. For J0 only M and N are populated.
struct RadialSolution {
    Family family;
    int j;
    int n;
    double p_sq;
    ModeParams params;
    std::vector<double> r;
    std::vector<double> K;
    std::vector<double> L;
    std::vector<double> M;
    std::vector<double> N;
};

/// Open-interval grid r_i = pi (i+1)/(count+1), i = 0..count-1.
inline std::vector<double> open_r_grid(int count)
{
    if (count < 1) {
        throw std::invalid_argument("grid size must be positive");
    }
    std::vector<double> r(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        r[static_cast<std::size_t>(i)] = std::numbers::pi * (i + 1) / (count + 1);
    }
    return r;
}

namespace closed_detail {

inline void require_on_spectrum(double expected_p_sq, const ModeParams& params, const std::string& what)
{
    const double got = params.p_sq();
    if (std::abs(got - expected_p_sq) > 1e-9 * std::max(1.0, std::abs(expected_p_sq))) {
        throw OffSpectrumError(what + ": eps^2 - m^2 = " + std::to_string(got) + " is not the level p^2 = " +
                               std::to_string(expected_p_sq));
    }
}

inline void require_open_interval(double r)
{
    if (!(r > 0.0 && r < std::numbers::pi)) {
        throw DomainError("grid point outside the open interval (0, pi): r=" + std::to_string(r));
    }
}

}  // namespace closed_detail

inline std::array<Jet, 4> family_state_jets(const FamilyAmplitudes& amps, const ModeParams& params, double r0,
                                            int order)
{
    return eliminate_LN(amps.K.jet_r(r0, order + 1), amps.M.jet_r(r0, order + 1), r0, amps.qn.a, params);
}

inline RadialSolution wavefunction_family(Family family, const QuantumNumbers& qn, const ModeParams& params,
                                          const std::vector<double>& grid)
{
    const auto amps = family_amplitudes(family, qn);
    closed_detail::require_on_spectrum(amps.p_sq, params,
                                       std::string(family_name(family)) + " j=" + std::to_string(qn.j) +
                                           " n=" + std::to_string(qn.n));
    if (params.eps() + params.effective_mass() == 0.0) {
        throw DegenerateParameterError("eps + m = 0: L and N cannot be eliminated from K and M");
    }
    RadialSolution sol{family, qn.j, qn.n, amps.p_sq, params, grid, {}, {}, {}, {}};
    for (double r : grid) {
        closed_detail::require_open_interval(r);
        const auto y = family_state_jets(amps, params, r, 0);
        sol.K.push_back(y[0].value());
        sol.L.push_back(y[1].value());
        sol.M.push_back(y[2].value());
        sol.N.push_back(y[3].value());
    }
    return sol;
}

/// j = 0 closed form with explicit normalizations N0 and M0.
struct J0Amplitudes {
    int n;
    double n0;
    double m0;
    Polynomial poly_n;  // F(-n-1, 3+n; 3/2; x)
    Polynomial poly_m;  // F(-n, 4+n; 5/2; x)

    /// (M, N) jets in r.
    std::array<Jet, 2> jets_r(double r0, int order) const
    {
        const Jet s = sin_jet(r0, order);
        const Jet x = 0.5 * (1.0 - cos_jet(r0, order));
        return {m0 * 0.25 * (s * s) * poly_m(x), n0 * 0.5 * s * poly_n(x)};
    }

    /// M as a function of x = (1 - cos r)/2.
    Jet m_jet_x(double x0, int order) const
    {
        const Jet x = Jet::variable(x0, order);
        return m0 * x * (1.0 - x) * poly_m(x);
    }
};

/// Ratio M0/N0 = -(2/3)(eps + m_eff) that makes (M, N) solve the j = 0 pair.
inline double j0_amplitude_ratio(const ModeParams& params)
{
    return -(2.0 / 3.0) * (params.eps() + params.effective_mass());
}

inline J0Amplitudes j0_amplitudes(int n, const ModeParams& params, double n0 = 1.0)
{
    if (n < 0) {
        throw std::invalid_argument("radial index n must be non-negative");
    }
    const double k = 2.0 + n;
    closed_detail::require_on_spectrum(k * k - 1.0, params, "J0 n=" + std::to_string(n));
    return {n, n0, j0_amplitude_ratio(params) * n0, closed_detail::hyp_poly(n + 1, 3.0 + n, 1.5),
            closed_detail::hyp_poly(n, 4.0 + n, 2.5)};
}

inline RadialSolution wavefunction_j0(int n, const ModeParams& params, const std::vector<double>& grid)
{
    const auto amps = j0_amplitudes(n, params);
    const double k  = 2.0 + n;
    RadialSolution sol{Family::J0, 0, n, k * k - 1.0, params, grid, {}, {}, {}, {}};
    for (double r : grid) {
        closed_detail::require_open_interval(r);
        const auto y = amps.jets_r(r, 0);
        sol.M.push_back(y[0].value());
        sol.N.push_back(y[1].value());
    }
    return sol;
}

// ---------------------------------------------------------------------------
// General solution at arbitrary p

enum class BasisKind { K1, K2, M3, M4 };

inline std::string_view basis_name(BasisKind k)
{
    switch (k) {
        case BasisKind::K1: return "K1";
        case BasisKind::K2: return "K2";
        case BasisKind::M3: return "M3";
        case BasisKind::M4: return "M4";
    }
    return "?";
}

/// One of the four fundamental solutions: the directly given amplitude
/// x^A (1-x)^{j/2} F(alpha, beta; gamma; x) and its partner obtained by
/// applying the coupled relation analytically.
class BasisSolution {
public:
    BasisSolution(BasisKind kind, int j, double p)
        : kind_(kind), j_(j), p_(p), a_sq_(static_cast<double>(j) * (j + 1)), f_(make_params(kind, j, p))
    {
    }

    BasisKind kind() const { return kind_; }
    int j() const { return j_; }
    double p() const { return p_; }
    const Hyp2F1Params& hypergeometric() const { return f_; }

    /// Exponent A of x^A in the directly given amplitude.
    double x_exponent() const { return (kind_ == BasisKind::K1 || kind_ == BasisKind::M3) ? 0.5 : 0.0; }

    bool direct_is_K() const { return kind_ == BasisKind::K1 || kind_ == BasisKind::K2; }

    /// Odd amplitudes pick up a sign on the far hemisphere (cos r < 0).
    bool K_odd() const { return (kind_ == BasisKind::K1) || (kind_ == BasisKind::M4); }
    bool M_odd() const { return !K_odd(); }

    Jet direct_jet_x(double x0, int order) const
    {
        require_x(x0);
        Jet v = regular_jet(x0, order);
        if (x_exponent() > 0.0) {
            v = v * sqrt(Jet::variable(x0, order));
        }
        return v;
    }

    /// {K, M} jets in x about x0. The partner is (1-x)/(2a sqrt x) C[x^A g]
    /// with g = (1-x)^{j/2} F and C the coupling operator. Moving x^A through
    /// C analytically leaves x^A R[g] with R regular at x = 0; for A = 0,
    /// R[g] vanishes at x = 0 and is summed from its Taylor series near there
    /// to avoid cancellation.
    std::array<Jet, 2> jets_x(double x0, int order) const
    {
        require_x(x0);
        const Jet x      = Jet::variable(x0, order);
        const double A   = x_exponent();
        const auto op    = reduced_coupling();
        const double a   = std::sqrt(a_sq_);
        Jet partner;
        if (A > 0.0) {
            partner = (1.0 - x) * op.apply(regular_jet(x0, order + 2), x0) / (2.0 * a);
        } else if (x0 >= kSeriesThreshold) {
            partner = (1.0 - x) * op.apply(regular_jet(x0, order + 2), x0) / (2.0 * a * sqrt(x));
        } else {
            // R[g](x) = sum_{k>=1} R_k x^k, so R[g]/sqrt(x) = sqrt(x) sum_k R_k x^{k-1}.
            const Jet series = op.apply(regular_jet(0.0, kMaxJetOrder), 0.0);
            std::vector<double> c(static_cast<std::size_t>(series.order()));
            for (int k = 1; k <= series.order(); ++k) {
                c[static_cast<std::size_t>(k - 1)] = series.coeff(k);
            }
            partner = (1.0 - x) * sqrt(x) * Polynomial(std::move(c))(x) / (2.0 * a);
        }
        const Jet direct = direct_jet_x(x0, order);
        if (direct_is_K()) {
            return {direct, partner};
        }
        return {partner, direct};
    }

    /// {K, M} jets in r (signed continuation through r = pi/2).
    std::array<Jet, 2> jets_r(double r0, int order) const
    {
        const double c0 = std::cos(r0);
        const double x0 = c0 * c0;
        const auto jx   = jets_x(x0, order);
        const Jet c     = cos_jet(r0, order);
        const Jet xr    = c * c;
        Jet K           = compose(jx[0], xr);
        Jet M           = compose(jx[1], xr);
        if (c0 < 0.0) {
            if (K_odd()) K = -K;
            if (M_odd()) M = -M;
        }
        return {K, M};
    }

private:
    static constexpr double kSeriesThreshold = 1e-3;

    /// (1-x)^{j/2} F(alpha, beta; gamma; x), analytic at x = 0.
    Jet regular_jet(double x0, int order) const
    {
        const Jet x = Jet::variable(x0, order);
        return gauss_2f1_jet(f_, x0, order) * pow(1.0 - x, 0.5 * j_);
    }

    /// x^{-A} C x^A with C the coupling operator:
    ///   4x(1-x) g'' + (2 - 4x + 8A(1-x)) g' + (c0 - 4A^2) g.
    LinearDifferentialOperator reduced_coupling() const
    {
        const double A = x_exponent();
        const auto op  = direct_is_K() ? coupling_K(p_ * p_, a_sq_) : coupling_M(p_ * p_, a_sq_);
        CoefficientFunction c0 = op.coeff(0);
        c0.poly.at(0) -= 4.0 * A * A;
        return op.with_coeff(1, {{2.0 + 8.0 * A, -4.0 - 8.0 * A}, {}, {}}).with_coeff(0, std::move(c0));
    }

    static Hyp2F1Params make_params(BasisKind kind, int j, double p)
    {
        if (j < 1) {
            throw std::invalid_argument("general basis requires j >= 1");
        }
        if (!(p > 0.0)) {
            throw std::invalid_argument("general basis requires p > 0");
        }
        const double B = 0.5 * j;
        const double A = (kind == BasisKind::K1 || kind == BasisKind::M3) ? 0.5 : 0.0;
        // K-type: alpha, beta = A + B + 1/2 -/+ sqrt(p^2+1)/2;  M-type: ... -/+ p/2.
        const double half_root = (kind == BasisKind::K1 || kind == BasisKind::K2) ? 0.5 * std::sqrt(p * p + 1.0)
                                                                                   : 0.5 * p;
        return {A + B + 0.5 - half_root, A + B + 0.5 + half_root, 0.5 + 2.0 * A};
    }

    static void require_x(double x0)
    {
        if (!(x0 > 0.0 && x0 < 1.0)) {
            throw DomainError("general basis is evaluated on 0 < x < 1, got x=" + std::to_string(x0));
        }
    }

    BasisKind kind_;
    int j_;
    double p_;
    double a_sq_;
    Hyp2F1Params f_;
};

inline std::array<BasisSolution, 4> general_basis(int j, double p)
{
    return {BasisSolution(BasisKind::K1, j, p), BasisSolution(BasisKind::K2, j, p), BasisSolution(BasisKind::M3, j, p),
            BasisSolution(BasisKind::M4, j, p)};
}

/// Samples a basis solution on an r-grid with L, N from elimination. Grid
/// points with x = cos^2 r within 1e-6 of 0 or 1 are rejected.
inline RadialSolution sample_basis(const BasisSolution& b, const ModeParams& params, const std::vector<double>& grid)
{
    RadialSolution sol{Family::F1, b.j(), -1, b.p() * b.p(), params, grid, {}, {}, {}, {}};
    switch (b.kind()) {
        case BasisKind::K1: sol.family = Family::F1; break;
        case BasisKind::K2: sol.family = Family::F2; break;
        case BasisKind::M3: sol.family = Family::F3; break;
        case BasisKind::M4: sol.family = Family::F4; break;
    }
    const double a = std::sqrt(static_cast<double>(b.j()) * (b.j() + 1));
    for (double r : grid) {
        const double x = std::cos(r) * std::cos(r);
        if (x < 1e-6 || x > 1.0 - 1e-6) {
            throw DomainError("general basis sample too close to x in {0,1}: r=" + std::to_string(r));
        }
        const auto km = b.jets_r(r, 1);
        const auto y  = eliminate_LN(km[0], km[1], r, a, params);
        sol.K.push_back(y[0].value());
        sol.L.push_back(y[1].value());
        sol.M.push_back(y[2].value());
        sol.N.push_back(y[3].value());
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Matrix amplitudes f_ab

struct AmplitudeMatrix {
    using Complex = std::complex<double>;
    std::array<std::array<Complex, 4>, 4> f{};

    /// f(a, b) with 1-based indices as in f_ab.
    Complex& at(int a, int b) { return f[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)]; }
    const Complex& at(int a, int b) const
    {
        return f[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)];
    }

    /// Rows 3-4 mirror rows 1-2 with the parity sign.
    bool satisfies_parity(int delta, double tol = 0.0) const
    {
        const std::array<std::array<int, 4>, 8> links{{{3, 1, 2, 4},
                                                       {3, 2, 2, 3},
                                                       {3, 3, 2, 2},
                                                       {3, 4, 2, 1},
                                                       {4, 1, 1, 4},
                                                       {4, 2, 1, 3},
                                                       {4, 3, 1, 2},
                                                       {4, 4, 1, 1}}};
        for (const auto& l : links) {
            if (std::abs(at(l[0], l[1]) - static_cast<double>(delta) * at(l[2], l[3])) > tol) {
                return false;
            }
        }
        return true;
    }

    /// A = lambda K, B = lambda L, C = lambda M, D = lambda N in terms of f_ab.
    bool satisfies_constraint(int lambda, double tol = 0.0) const
    {
        const double l = lambda;
        return std::abs((at(1, 1) + at(2, 2)) - l * (at(1, 3) + at(2, 4))) <= tol &&
               std::abs((at(1, 1) - at(2, 2)) - l * (at(1, 3) - at(2, 4))) <= tol &&
               std::abs((at(1, 2) + at(2, 1)) - l * (at(1, 4) + at(2, 3))) <= tol &&
               std::abs((at(1, 2) - at(2, 1)) - l * (at(1, 4) - at(2, 3))) <= tol;
    }
};

inline AmplitudeMatrix assemble_components(double K, double L, double M, double N, int lambda_sign, int delta_sign)
{
    if ((lambda_sign != 1 && lambda_sign != -1) || (delta_sign != 1 && delta_sign != -1)) {
        throw std::invalid_argument("lambda and delta must be +1 or -1");
    }
    using C = AmplitudeMatrix::Complex;
    const C i(0.0, 1.0);
    const double lam = lambda_sign, del = delta_sign;
    AmplitudeMatrix m;
    m.at(1, 3) = (K + i * L) / 2.0;
    m.at(2, 4) = (K - i * L) / 2.0;
    m.at(1, 4) = (M + i * N) / 2.0;
    m.at(2, 3) = (M - i * N) / 2.0;
    m.at(1, 1) = lam * m.at(1, 3);
    m.at(2, 2) = lam * m.at(2, 4);
    m.at(1, 2) = lam * m.at(1, 4);
    m.at(2, 1) = lam * m.at(2, 3);
    m.at(3, 1) = del * m.at(2, 4);
    m.at(3, 2) = del * m.at(2, 3);
    m.at(3, 3) = del * m.at(2, 2);
    m.at(3, 4) = del * m.at(2, 1);
    m.at(4, 1) = del * m.at(1, 4);
    m.at(4, 2) = del * m.at(1, 3);
    m.at(4, 3) = del * m.at(1, 2);
    m.at(4, 4) = del * m.at(1, 1);
    return m;
}

}  // namespace dksphere
