// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dksphere.hpp"

using namespace dksphere;
using boost::multiprecision::cpp_rational;

namespace {

struct Outcome {
    bool pass = true;
    std::string summary;
    std::vector<std::string> notes;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

ShootingConfig scan_to(double eps_max)
{
    ShootingConfig c;
    c.eps_min = 0.5;
    c.eps_max = eps_max;
    return c;
}

// 1. j = 0 levels from the shooting oracle.
Outcome j0_spectrum()
{
    Outcome o;
    double worst = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int m : {0, 1, 2}) {
        const double hi = std::sqrt(7.5 * 7.5 - 1.0 + m * m);
        const auto run  = shoot_j0(m, 1, scan_to(hi));
        if (run.eigenvalues.size() != 6) {
            o.pass = false;
            o.notes.push_back("m=" + std::to_string(m) + ": found " + std::to_string(run.eigenvalues.size()) +
                              " levels, expected 6");
            continue;
        }
        for (int n = 0; n <= 5; ++n) {
            const auto& ev     = run.eigenvalues[static_cast<std::size_t>(n)];
            const double exact = m * m - 1.0 + (2.0 + n) * (2.0 + n);
            const double err   = std::abs(ev.eps * ev.eps - exact) / exact;
            worst              = std::max(worst, err);
            if (err > 1e-6 || ev.nodes != n) {
                o.pass = false;
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > 10.0) {
        o.pass = false;
    }
    o.summary = "m in {0,1,2}, n = 0..5: max rel error " + fmt("%.2e", worst) + " (bound 1e-6), oracle time " +
                fmt("%.1f", secs) + " s (bound 10 s)";
    return o;
}

// 2. j >= 1 levels: oracle vs the union of the four families.
Outcome j_spectrum()
{
    Outcome o;
    double worst  = 0.0;
    int matched   = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int m : {0, 1}) {
        for (int j : {1, 2, 3}) {
            // Covers k = j+1 .. j+8 (all n <= 3 levels) and stops below (j+9)^2 - 1.
            const double hi = std::sqrt((j + 8.5) * (j + 8.5) + m * m);
            const auto run  = shoot_j(m, j, 1, scan_to(hi));
            const auto cmp  = compare_spectra(run.eigenvalues, closed_levels(j, Rational(m), 0.5, hi), 1e-5);
            worst           = std::max(worst, cmp.max_rel_error);
            matched += static_cast<int>(cmp.matched.size());
            if (!cmp.pass()) {
                o.pass = false;
                o.notes.push_back("m=" + std::to_string(m) + " j=" + std::to_string(j) + ": " +
                                  std::to_string(cmp.unmatched_oracle.size()) + " extra, " +
                                  std::to_string(cmp.unmatched_closed.size()) + " missing");
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > 120.0) {
        o.pass = false;
    }
    o.summary = "m in {0,1}, j in {1,2,3}: " + std::to_string(matched) + " levels matched, max rel error " +
                fmt("%.2e", worst) + " (bound 1e-5), oracle time " + fmt("%.1f", secs) + " s (bound 120 s)";
    return o;
}

// 3. Closed forms under the fourth-order operators and the first-order system.
Outcome closed_form_residuals()
{
    Outcome o;
    double op_worst = 0.0, sys_worst = 0.0;
    int checks      = 0;
    for (Family f : {Family::F1, Family::F2, Family::F3, Family::F4}) {
        for (int j = 1; j <= 3; ++j) {
            for (int n = 0; n <= 3; ++n) {
                const QuantumNumbers qn(j, n);
                for (const auto& r : family_operator_residuals(f, qn, 1e-9)) {
                    op_worst = std::max(op_worst, r.max_rel_residual);
                    o.pass   = o.pass && r.pass;
                    ++checks;
                }
                const auto params = ModeParams::from_p_sq(to_double(family_p_sq(f, Rational(j), n)), 1.0);
                const auto s      = family_system_residual(f, qn, params, 1e-9);
                sys_worst         = std::max(sys_worst, s.max_rel_residual);
                o.pass            = o.pass && s.pass;
                ++checks;
            }
        }
    }
    o.summary = std::to_string(checks) + " checks (F1..F4, j <= 3, n <= 3, m = 1): operator " + fmt("%.2e", op_worst) +
                ", system " + fmt("%.2e", sys_worst) + " (bound 1e-9)";
    return o;
}

// 4. Factorization identity with negative controls.
Outcome factorization()
{
    Outcome o;
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> p2(0.5, 80.0);
    std::uniform_int_distribution<int> js(1, 8);
    double worst     = 0.0;
    int controls     = 0;
    int caught       = 0;
    const auto battery = default_battery();
    for (int i = 0; i < 10; ++i) {
        const double p_sq = p2(rng);
        const int j       = js(rng);
        const double a_sq = j * (j + 1.0);
        for (bool k_side : {true, false}) {
            const auto f      = k_side ? factor_pair_K(p_sq, a_sq) : factor_pair_M(p_sq, a_sq);
            const auto direct = k_side ? operator_K4(p_sq, a_sq) : operator_M4(p_sq, a_sq);
            const auto r      = factorization_identity(f, direct, battery, 1e-10);
            worst             = std::max(worst, r.max_rel_residual);
            o.pass            = o.pass && r.pass;
            std::vector<VerificationReport> neg;
            for (int k = 0; k <= 4; ++k) {
                neg.push_back(factorization_identity(f, perturb_coefficient(direct, k, 1.01), battery, 1e-10));
            }
            for (int k = 0; k <= 2; ++k) {
                neg.push_back(factorization_identity({perturb_coefficient(f.outer, k, 1.01), f.inner}, direct, battery,
                                                     1e-10));
                neg.push_back(factorization_identity({f.outer, perturb_coefficient(f.inner, k, 1.01)}, direct, battery,
                                                     1e-10));
            }
            for (const auto& n : neg) {
                ++controls;
                caught += n.pass ? 0 : 1;
            }
        }
    }
    o.pass    = o.pass && caught == controls;
    o.summary = "10 random (p^2, a^2), K and M: max rel " + fmt("%.2e", worst) + " (bound 1e-10); " +
                std::to_string(caught) + "/" + std::to_string(controls) + " 1% perturbations detected";
    return o;
}

// 5. Wronskian of the general basis.
Outcome wronskian()
{
    Outcome o;
    double smallest = 1e300;
    for (int j : {1, 2}) {
        const auto sources = basis_K_sources(general_basis(j, 2.3));
        for (double x0 : {0.3, 0.6}) {
            const double w = std::abs(wronskian4(sources, x0));
            smallest       = std::min(smallest, w);
            o.notes.push_back("j=" + std::to_string(j) + " x0=" + fmt("%.1f", x0) + ": |W| = " + fmt("%.3e", w));
        }
    }
    auto dep      = basis_K_sources(general_basis(1, 2.3));
    const auto a  = dep[0], b = dep[2];
    dep[3]        = [a, b](double x, int k) { return 0.7 * a(x, k) - 1.3 * b(x, k); };
    const double wd = std::abs(wronskian4(dep, 0.3));
    o.pass          = smallest > 1e-6 && wd < 1e-12;
    o.summary       = "p = 2.3: min |W| " + fmt("%.3e", smallest) + " (bound > 1e-6), dependent quadruple " +
                fmt("%.1e", wd) + " (bound < 1e-12)";
    return o;
}

// 6. j-shift identities in exact integer arithmetic.
Outcome degeneracy()
{
    Outcome o;
    int first = 0, literal = 0, shifted = 0, total = 0;
    for (int j = 1; j <= 20; ++j) {
        for (int n = 0; n <= 20; ++n) {
            ++total;
            first += family_p_sq(Family::F2, Rational(j + 1), n) == family_p_sq(Family::F1, Rational(j), n);
            literal += family_p_sq(Family::F3, Rational(j + 1), n) == family_p_sq(Family::F4, Rational(j), n);
            shifted += family_p_sq(Family::F4, Rational(j + 1), n) == family_p_sq(Family::F3, Rational(j), n);
        }
    }
    o.pass    = first == total && literal == total;
    o.summary = "p2(j+1,n) = p1(j,n): " + std::to_string(first) + "/" + std::to_string(total) +
                "; p3(j+1,n) = p4(j,n): " + std::to_string(literal) + "/" + std::to_string(total);
    o.notes.push_back("the F3 level set implemented here is (j+2+2n)^2, the only one under which the F3 "
                      "amplitudes solve the radial system and criterion 2 passes; with it the second identity "
                      "holds in the reverse direction p4(j+1,n) = p3(j,n): " +
                      std::to_string(shifted) + "/" + std::to_string(total));
    return o;
}

// 7. Disjointness from the Dirac levels.
Outcome dirac_disjoint()
{
    Outcome o;
    const auto dk    = dk_p_sq_set(20, 20);
    const auto dirac = dirac_p_sq_set(41, 20);
    int common       = 0;
    for (const auto& v : dirac) {
        common += static_cast<int>(dk.count(v));
    }
    o.pass    = common == 0;
    o.summary = std::to_string(dk.size()) + " DK values, " + std::to_string(dirac.size()) + " Dirac values, " +
                std::to_string(common) + " in common";
    return o;
}

// 8. j = 0 amplitude ratio.
Outcome j0_ratio()
{
    Outcome o;
    double literal_worst = 0.0;
    bool literal_ok      = true;
    for (int n : {0, 1, 3}) {
        for (int m : {0, 1, 2}) {
            const double p2      = (n + 2.0) * (n + 2.0) - 1.0;
            const auto params    = ModeParams::from_p_sq(p2, m, 1, 1);
            const double literal = -(2.0 / 3.0) * (params.eps() - m);
            const auto r         = j0_system_residual(n, params, literal, 1e-9);
            literal_worst        = std::max(literal_worst, r.max_rel_residual);
            literal_ok           = literal_ok && r.pass;
        }
    }
    // Evidence for what does hold.
    bool branch_ok = true, other_ok = true, control_caught = true;
    for (int n : {0, 1, 3}) {
        for (int m : {0, 1, 2}) {
            const double p2 = (n + 2.0) * (n + 2.0) - 1.0;
            const auto up   = ModeParams::from_p_sq(p2, m, 1, 1);
            const auto down = ModeParams::from_p_sq(p2, m, 1, -1);
            branch_ok = branch_ok && j0_system_residual(n, up, -(2.0 / 3.0) * (up.eps() + m), 1e-9).pass;
            other_ok  = other_ok && j0_system_residual(n, down, -(2.0 / 3.0) * (down.eps() - m), 1e-9).pass;
            control_caught =
                control_caught && !j0_system_residual(n, up, 1.01 * j0_amplitude_ratio(up), 1e-9).pass;
        }
    }
    o.pass    = literal_ok && control_caught;
    o.summary = "M0/N0 = -(2/3)(eps - m) in the lambda = +1 pair, m in {0,1,2}: max rel residual " +
                fmt("%.2e", literal_worst) + " (bound 1e-9); 1% control " + (control_caught ? "fails" : "passes");
    o.notes.push_back(std::string("-(2/3)(eps + m) in the lambda = +1 pair: ") + (branch_ok ? "holds" : "fails") +
                      "; -(2/3)(eps - m) in the lambda = -1 pair: " + (other_ok ? "holds" : "fails") +
                      "; the printed ratio belongs to the lambda = -1 branch and agrees with lambda = +1 only at m = 0");
    return o;
}

// 9. Hypergeometric kernel.
cpp_rational exact_terminating(int n, const cpp_rational& b, const cpp_rational& c, const cpp_rational& x)
{
    cpp_rational term = 1, sum = 1;
    for (int k = 0; k < n; ++k) {
        term *= cpp_rational(k - n) * (b + k) / ((c + k) * (k + 1)) * x;
        sum += term;
    }
    return sum;
}

Outcome hypergeometric()
{
    Outcome o;
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> ab(-3.0, 3.0), cg(0.2, 4.0), xs(0.0, 0.97);
    double ode_worst = 0.0;
    int sets         = 0;
    while (sets < 20) {
        const double a = ab(rng), b = ab(rng), c = cg(rng);
        if (std::abs((c - a - b) - std::round(c - a - b)) < 0.05) {
            continue;
        }
        ++sets;
        const Hyp2F1Params p(a, b, c);
        for (int i = 0; i < 50; ++i) {
            const double x  = xs(rng);
            const double t2 = x * (1 - x) * gauss_2f1_derivative(p, x, 2);
            const double t1 = (c - (a + b + 1) * x) * gauss_2f1_derivative(p, x, 1);
            const double t0 = -a * b * gauss_2f1_derivative(p, x, 0);
            ode_worst = std::max(ode_worst, std::abs(t2 + t1 + t0) / std::max({std::abs(t2), std::abs(t1), std::abs(t0)}));
        }
    }
    double oracle_worst = 0.0;
    std::uniform_int_distribution<int> num(1, 40), den(1, 8), xk(0, 999);
    for (int s = 0; s < 200; ++s) {
        const int n = s % 12;
        // The oracle sees exactly the binary values the kernel receives.
        const double b = static_cast<double>(num(rng)) / den(rng), c = static_cast<double>(num(rng)) / den(rng);
        const double x = xk(rng) / 1000.0;
        const double exact = static_cast<double>(exact_terminating(n, cpp_rational(b), cpp_rational(c), cpp_rational(x)));
        const double got   = gauss_2f1(Hyp2F1Params(-n, b, c), x);
        oracle_worst = std::max(oracle_worst, std::abs(got - exact) / std::max(std::abs(exact), 1e-300));
    }
    o.pass    = ode_worst <= 1e-9 && oracle_worst <= 1e-14;
    o.summary = "Gauss ODE max rel residual " + fmt("%.2e", ode_worst) +
                " (20 sets x 50 points, bound 1e-9); terminating vs rational oracle " + fmt("%.2e", oracle_worst) +
                " (200 cases, bound 1e-14)";
    return o;
}

}  // namespace

int main()
{
    const std::vector<std::function<Outcome()>> criteria{j0_spectrum,   j_spectrum,     closed_form_residuals,
                                                         factorization, wronskian,      degeneracy,
                                                         dirac_disjoint, j0_ratio,      hypergeometric};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o.pass    = false;
            o.summary = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu: %s  [%.2f s] %s\n", i + 1, o.pass ? "PASS" : "FAIL", secs, o.summary.c_str());
        for (const auto& n : o.notes) {
            std::printf("    %s\n", n.c_str());
        }
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
