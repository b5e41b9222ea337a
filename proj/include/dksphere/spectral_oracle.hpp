#pragma once

// Spectra recovered from the radial equations alone, by shooting from both
// poles with regular initial data and matching at an interior point.
//
// j = 0: the scalar equation M'' + (p^2 - (1 + cos^2 r)/sin^2 r) M = 0 with
//        M ~ r^2 at both poles; mismatch = normalized Wronskian at the match point.
// j >= 1: the 4-dim system. Two regular solutions start at r = 0 from the
//        exponents r^j and r^{j+1} and two at r = pi by the mirror map
//        (K, L, M, N)(pi - s) = (K, -L, -M, N)(s); the mismatch is the
//        determinant of the four unit-normed state vectors at the match point.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "integrator.hpp"
#include "radial_model.hpp"
#include "spectrum.hpp"

namespace dksphere {

struct ShootingConfig {
    double r_start_offset = 1e-3;
    double tolerance      = 1e-10;
    double eps_min        = 0.1;
    double eps_max        = 10.0;
    double eps_step       = 0.01;
    double match_point    = std::numbers::pi / 2;
    double det_tolerance  = 1e-8;
    double bisection_tol  = 1e-12;

    void validate() const
    {
        if (!(r_start_offset > 0.0 && r_start_offset < match_point && match_point < std::numbers::pi - r_start_offset)) {
            throw std::invalid_argument("shooting config needs 0 < offset < match_point < pi - offset");
        }
        if (!(eps_step > 0.0) || !(eps_max > eps_min)) {
            throw std::invalid_argument("shooting config needs eps_min < eps_max and eps_step > 0");
        }
        if (!(tolerance > 0.0) || !(bisection_tol > 0.0)) {
            throw std::invalid_argument("shooting tolerances must be positive");
        }
    }
};

struct OracleEigenvalue {
    double eps;
    double p_sq;
    int j;
    std::array<double, 2> bracket;
    double mismatch = 0.0;        // normalized mismatch at eps
    int multiplicity = 1;
    std::optional<int> nodes;     // j = 0 only
    bool ill_conditioned = false;
    std::optional<StateLabel> matched_family_guess;
};

struct OracleRun {
    int j;
    double mass;
    int lambda_sign;
    std::vector<OracleEigenvalue> eigenvalues;
    std::vector<std::string> diagnostics;
};

namespace oracle_detail {

inline IntegratorOptions integrator_options(const ShootingConfig& c)
{
    IntegratorOptions o;
    o.rel_tol    = c.tolerance;
    o.abs_tol    = c.tolerance * 1e-4;
    o.first_step = std::min(1e-4, c.r_start_offset);
    return o;
}

/// Bisection on a sign change of f in [lo, hi].
template <class F>
double bisect(F&& f, double lo, double hi, double f_lo, double tol)
{
    for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm  = f(mid);
        if (fm == 0.0) {
            return mid;
        }
        if ((fm > 0.0) == (f_lo > 0.0)) {
            lo   = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline std::vector<double> scan_points(const ShootingConfig& c)
{
    std::vector<double> e;
    const auto count = static_cast<long>(std::ceil((c.eps_max - c.eps_min) / c.eps_step));
    for (long i = 0; i <= count; ++i) {
        e.push_back(std::min(c.eps_max, c.eps_min + static_cast<double>(i) * c.eps_step));
    }
    return e;
}

}  // namespace oracle_detail

// ---------------------------------------------------------------------------
// j = 0

class J0Shooter {
public:
    J0Shooter(double mass, int lambda_sign, ShootingConfig config)
        : mass_(mass), lambda_(lambda_sign), config_(config)
    {
        config_.validate();
        ModeParams(mass, 0.0, lambda_sign);  // validates mass and branch
    }

    double mass() const { return mass_; }
    const ShootingConfig& config() const { return config_; }

    /// Normalized Wronskian of the left and right regular solutions at the match point.
    double mismatch(double eps) const
    {
        const double p2 = eps * eps - mass_ * mass_;
        const auto l    = shoot(p2, config_.r_start_offset, config_.match_point);
        const auto r    = shoot(p2, std::numbers::pi - config_.r_start_offset, config_.match_point);
        return (l[0] * r[1] - l[1] * r[0]) / (std::hypot(l[0], l[1]) * std::hypot(r[0], r[1]));
    }

    /// Sign changes of M along a full pole-to-pole sweep.
    int count_nodes(double eps) const
    {
        const double p2 = eps * eps - mass_ * mass_;
        int nodes       = 0;
        double last     = 0.0;
        const double end = std::numbers::pi - config_.r_start_offset;
        shoot(p2, config_.r_start_offset, 0.5 * (config_.match_point + end),
              [&](double, const std::array<double, 2>& y) {
                  if (y[0] != 0.0) {
                      if (last != 0.0 && (y[0] > 0.0) != (last > 0.0)) {
                          ++nodes;
                      }
                      last = y[0];
                  }
              });
        // Mirror half: the right solution, traced back from the far pole.
        double last_r = 0.0;
        int nodes_r   = 0;
        shoot(p2, end, 0.5 * (config_.match_point + end), [&](double, const std::array<double, 2>& y) {
            if (y[0] != 0.0) {
                if (last_r != 0.0 && (y[0] > 0.0) != (last_r > 0.0)) {
                    ++nodes_r;
                }
                last_r = y[0];
            }
        });
        return nodes + nodes_r;
    }

private:
    /// M ~ r^2 (1 - (p^2 + 1/3) r^2 / 10) near a pole; returns (M, M') at r_end.
    std::array<double, 2> shoot(double p2, double r_begin, double r_end,
                                const std::function<void(double, const std::array<double, 2>&)>& obs = {}) const
    {
        const bool far  = r_begin > std::numbers::pi / 2;
        const double s  = far ? std::numbers::pi - r_begin : r_begin;
        const double c2 = (p2 + 1.0 / 3.0) / 10.0;
        // Normalized so the start vector has unit size.
        std::array<double, 2> y{s * s * (1.0 - c2 * s * s), 2.0 * s - 4.0 * c2 * s * s * s};
        if (far) {
            y[1] = -y[1];
        }
        const double nrm = std::hypot(y[0], y[1]);
        y[0] /= nrm;
        y[1] /= nrm;
        auto f = [p2](double r, const std::array<double, 2>& v) {
            const double sn = std::sin(r), cs = std::cos(r);
            return std::array<double, 2>{v[1], -(p2 - (1.0 + cs * cs) / (sn * sn)) * v[0]};
        };
        return integrate_adaptive<2>(f, y, r_begin, r_end, oracle_detail::integrator_options(config_), obs);
    }

    double mass_;
    int lambda_;
    ShootingConfig config_;
};

inline OracleRun shoot_j0(double mass, int lambda_sign, const ShootingConfig& config)
{
    const J0Shooter shooter(mass, lambda_sign, config);
    OracleRun run{0, mass, lambda_sign, {}, {}};
    const auto eps = oracle_detail::scan_points(config);
    std::vector<double> f(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        f[i] = shooter.mismatch(eps[i]);
    }
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
        if (f[i] == 0.0 || (f[i] > 0.0) != (f[i + 1] > 0.0)) {
            const double root = f[i] == 0.0 ? eps[i]
                                            : oracle_detail::bisect([&](double e) { return shooter.mismatch(e); },
                                                                    eps[i], eps[i + 1], f[i], config.bisection_tol);
            OracleEigenvalue ev{root, root * root - mass * mass, 0, {eps[i], eps[i + 1]}};
            ev.mismatch = shooter.mismatch(root);
            ev.nodes    = shooter.count_nodes(root);
            run.eigenvalues.push_back(ev);
        }
    }
    if (run.eigenvalues.empty()) {
        run.diagnostics.push_back("no sign change of the mismatch in [" + std::to_string(config.eps_min) + ", " +
                                  std::to_string(config.eps_max) + "]");
    }
    return run;
}

// ---------------------------------------------------------------------------
// j >= 1

class SystemShooter {
public:
    using State  = std::array<double, 4>;
    using Matrix = Eigen::Matrix4d;

    SystemShooter(double mass, int j, int lambda_sign, ShootingConfig config)
        : mass_(mass), j_(j), lambda_(lambda_sign), config_(config)
    {
        config_.validate();
        if (j < 1) {
            throw std::invalid_argument("shoot_j requires j >= 1");
        }
        ModeParams(mass, 0.0, lambda_sign);
    }

    /// Columns: two regular solutions from r = 0, two from r = pi, each at the
    /// match point and scaled to unit Euclidean norm.
    Matrix match_matrix(double eps) const
    {
        const ModeParams params(mass_, eps, lambda_);
        const auto sys = system_j(params, QuantumNumbers(j_, 0));
        // Both solutions of one pole advance together as an 8-dim system.
        auto f = [&sys](double r, const std::array<double, 8>& y) {
            const auto a = sys.matrix(r);
            std::array<double, 8> d{};
            for (std::size_t c = 0; c < 2; ++c) {
                for (std::size_t i = 0; i < 4; ++i) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < 4; ++k) {
                        s += a[i][k] * y[4 * c + k];
                    }
                    d[4 * c + i] = s;
                }
            }
            return d;
        };
        const double off = config_.r_start_offset;
        Matrix m;
        for (int side = 0; side < 2; ++side) {
            std::array<double, 8> y0{};
            for (int k = 0; k < 2; ++k) {
                State s = regular_start(params, off, k);
                if (side == 1) {
                    s = {s[0], -s[1], -s[2], s[3]};
                }
                std::copy(s.begin(), s.end(), y0.begin() + 4 * k);
            }
            const double r0 = side == 0 ? off : std::numbers::pi - off;
            const auto y    = integrate_adaptive<8>(f, y0, r0, config_.match_point,
                                                    oracle_detail::integrator_options(config_));
            for (int k = 0; k < 2; ++k) {
                double n = 0.0;
                for (int i = 0; i < 4; ++i) {
                    n += y[static_cast<std::size_t>(4 * k + i)] * y[static_cast<std::size_t>(4 * k + i)];
                }
                n = std::sqrt(n);
                for (int i = 0; i < 4; ++i) {
                    m(i, 2 * side + k) = y[static_cast<std::size_t>(4 * k + i)] / n;
                }
            }
        }
        return m;
    }

    double mismatch(double eps) const { return match_matrix(eps).determinant(); }

    /// Two-term Frobenius data at r = s near the pole, unit-normalized.
    /// k = 0: (K, M) ~ s^j (a, -j),   L ~ a(eps - m)/(j+1) s^{j+1}
    /// k = 1: (L, N) ~ s^{j+1} (a, j+1), (K, M) ~ -(eps + m)/(2j+3) s^{j+2} (a, j+1)
    State regular_start(const ModeParams& params, double s, int k) const
    {
        const double a  = std::sqrt(static_cast<double>(j_) * (j_ + 1));
        const double jd = j_;
        const double ep = params.eps() + params.effective_mass();
        const double em = params.eps() - params.effective_mass();
        State y{};
        if (k == 0) {
            y = {a, a * em / (jd + 1.0) * s, -jd, 0.0};
        } else {
            y = {-a * ep / (2.0 * jd + 3.0) * s, a, -ep * (jd + 1.0) / (2.0 * jd + 3.0) * s, jd + 1.0};
        }
        const double n = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]);
        for (double& v : y) {
            v /= n;
        }
        return y;
    }

    int j() const { return j_; }
    double mass() const { return mass_; }
    const ShootingConfig& config() const { return config_; }

private:
    double mass_;
    int j_;
    int lambda_;
    ShootingConfig config_;
};

namespace oracle_detail {

inline Eigen::Vector4d singular_values(const Eigen::Matrix4d& m)
{
    return Eigen::JacobiSVD<Eigen::Matrix4d>(m).singularValues();
}

/// Smallest singular value ratio of a 4x2 column pair; small means the pair is nearly dependent.
inline double pair_conditioning(const Eigen::Matrix4d& m, int first)
{
    const Eigen::Matrix<double, 4, 2> block = m.middleCols(first, 2);
    const auto sv = Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>>(block).singularValues();
    return sv(1) / sv(0);
}

inline void describe_root(const SystemShooter& s, OracleEigenvalue& ev)
{
    const auto m  = s.match_matrix(ev.eps);
    ev.mismatch   = m.determinant();
    const auto sv = singular_values(m);
    ev.multiplicity = 0;
    for (int i = 0; i < 4; ++i) {
        if (sv(i) < 1e-6 * sv(0)) {
            ++ev.multiplicity;
        }
    }
    ev.multiplicity = std::max(ev.multiplicity, 1);
    ev.ill_conditioned = pair_conditioning(m, 0) < 1e-12 || pair_conditioning(m, 2) < 1e-12;
}

/// Golden-section minimum of the smallest singular value in [lo, hi].
inline double minimize_sigma(const SystemShooter& s, double lo, double hi, double tol)
{
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    auto sigma     = [&](double e) { return singular_values(s.match_matrix(e))(3); };
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = sigma(c), fd = sigma(d);
    while (b - a > tol * std::max(1.0, std::abs(a))) {
        if (fc < fd) {
            b  = d;
            d  = c;
            fd = fc;
            c  = b - g * (b - a);
            fc = sigma(c);
        } else {
            a  = c;
            c  = d;
            fc = fd;
            d  = a + g * (b - a);
            fd = sigma(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace oracle_detail

inline OracleRun shoot_j(double mass, int j, int lambda_sign, const ShootingConfig& config)
{
    OracleRun run{j, mass, lambda_sign, {}, {}};
    ShootingConfig cfg = config;
    std::vector<double> eps = oracle_detail::scan_points(cfg);
    std::vector<double> f(eps.size());
    std::vector<double> sigma(eps.size());
    std::optional<SystemShooter> shooter;
    // One retry with a smaller offset if the integration breaks down near a pole.
    for (int attempt = 0; attempt < 2; ++attempt) {
        try {
            shooter.emplace(mass, j, lambda_sign, cfg);
            for (std::size_t i = 0; i < eps.size(); ++i) {
                const auto m = shooter->match_matrix(eps[i]);
                f[i]         = m.determinant();
                sigma[i]     = oracle_detail::singular_values(m)(3);
            }
            break;
        } catch (const IntegrationError& e) {
            run.diagnostics.push_back(std::string("integration failed (offset ") +
                                      std::to_string(cfg.r_start_offset) + "): " + e.what());
            if (attempt == 1) {
                return run;
            }
            cfg.r_start_offset *= 0.1;
        }
    }
    const SystemShooter& s = *shooter;
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
        const bool change = f[i] == 0.0 || (f[i] > 0.0) != (f[i + 1] > 0.0);
        if (change) {
            const double root =
                f[i] == 0.0 ? eps[i]
                            : oracle_detail::bisect([&](double e) { return s.mismatch(e); }, eps[i], eps[i + 1], f[i],
                                                    cfg.bisection_tol);
            OracleEigenvalue ev{root, root * root - mass * mass, j, {eps[i], eps[i + 1]}};
            oracle_detail::describe_root(s, ev);
            if (std::abs(ev.mismatch) > cfg.det_tolerance) {
                run.diagnostics.push_back("sign change at eps=" + std::to_string(root) +
                                          " rejected: |det| above tolerance");
                continue;
            }
            run.eigenvalues.push_back(ev);
            continue;
        }
        // A touching zero (even multiplicity) shows up as an interior minimum
        // of the smallest singular value without a sign change.
        if (i > 0 && sigma[i] < sigma[i - 1] && sigma[i] <= sigma[i + 1]) {
            const bool near_change = (f[i - 1] > 0.0) != (f[i] > 0.0);
            if (!near_change && sigma[i] < 1e-3) {
                const double root = oracle_detail::minimize_sigma(s, eps[i - 1], eps[i + 1], 1e-10);
                const auto m      = s.match_matrix(root);
                if (oracle_detail::singular_values(m)(3) < cfg.det_tolerance) {
                    OracleEigenvalue ev{root, root * root - mass * mass, j, {eps[i - 1], eps[i + 1]}};
                    oracle_detail::describe_root(s, ev);
                    ev.multiplicity = std::max(ev.multiplicity, 2);
                    run.eigenvalues.push_back(ev);
                }
            }
        }
    }
    if (run.eigenvalues.empty()) {
        run.diagnostics.push_back("no eigenvalue found in [" + std::to_string(cfg.eps_min) + ", " +
                                  std::to_string(cfg.eps_max) + "]");
    }
    return run;
}

// ---------------------------------------------------------------------------
// Comparison with the exact levels

/// Positive-energy exact levels of one j in [eps_lo, eps_hi].
inline std::vector<SpectrumEntry> closed_levels(int j, const Rational& m, double eps_lo, double eps_hi)
{
    std::vector<SpectrumEntry> out;
    auto in_range    = [&](const SpectrumEntry& e) {
        const double eps = std::sqrt(to_double(e.eps_sq));
        return eps >= eps_lo && eps <= eps_hi;
    };
    const std::vector<Family> families =
        j == 0 ? std::vector<Family>{Family::J0} : std::vector<Family>{Family::F1, Family::F2, Family::F3, Family::F4};
    for (Family fam : families) {
        for (int n = 0;; ++n) {
            const auto e = spectrum(fam, Rational(j), n, m);
            if (std::sqrt(to_double(e.eps_sq)) > eps_hi) {
                break;
            }
            if (in_range(e)) {
                out.push_back(e);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.eps_sq < b.eps_sq; });
    return out;
}

struct SpectrumMatch {
    OracleEigenvalue oracle;
    SpectrumEntry closed;
    double rel_error;
};

struct SpectrumComparison {
    std::vector<SpectrumMatch> matched;
    std::vector<OracleEigenvalue> unmatched_oracle;
    std::vector<SpectrumEntry> unmatched_closed;
    double rel_tol;
    double max_rel_error = 0.0;

    bool pass() const { return unmatched_oracle.empty() && unmatched_closed.empty(); }
};

/// Greedy nearest matching in eps; entries further apart than rel_tol stay unmatched.
inline SpectrumComparison compare_spectra(const std::vector<OracleEigenvalue>& oracle,
                                          const std::vector<SpectrumEntry>& closed, double rel_tol = 1e-5)
{
    struct Candidate {
        double err;
        std::size_t o;
        std::size_t c;
    };
    std::vector<Candidate> cand;
    for (std::size_t o = 0; o < oracle.size(); ++o) {
        for (std::size_t c = 0; c < closed.size(); ++c) {
            const double ce  = std::sqrt(to_double(closed[c].eps_sq));
            const double err = std::abs(std::abs(oracle[o].eps) - ce) / std::max(ce, 1e-300);
            if (err <= rel_tol) {
                cand.push_back({err, o, c});
            }
        }
    }
    std::stable_sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) { return a.err < b.err; });
    std::vector<int> o_used(oracle.size(), 0);
    std::vector<bool> c_used(closed.size(), false);
    SpectrumComparison cmp;
    cmp.rel_tol = rel_tol;
    for (const auto& k : cand) {
        // An oracle root of multiplicity q may absorb q exact levels.
        if (c_used[k.c] || o_used[k.o] >= oracle[k.o].multiplicity) {
            continue;
        }
        ++o_used[k.o];
        c_used[k.c] = true;
        OracleEigenvalue ev      = oracle[k.o];
        ev.matched_family_guess = closed[k.c].label();
        cmp.matched.push_back({ev, closed[k.c], k.err});
        cmp.max_rel_error = std::max(cmp.max_rel_error, k.err);
    }
    for (std::size_t o = 0; o < oracle.size(); ++o) {
        if (o_used[o] == 0) {
            cmp.unmatched_oracle.push_back(oracle[o]);
        }
    }
    for (std::size_t c = 0; c < closed.size(); ++c) {
        if (!c_used[c]) {
            cmp.unmatched_closed.push_back(closed[c]);
        }
    }
    std::sort(cmp.matched.begin(), cmp.matched.end(),
              [](const SpectrumMatch& a, const SpectrumMatch& b) { return a.oracle.eps < b.oracle.eps; });
    return cmp;
}

}  // namespace dksphere
