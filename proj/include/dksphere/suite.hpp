#pragma once

// Named groups of verification checks for one (j, n, mass) selection.

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "closed_form.hpp"
#include "format.hpp"
#include "verification.hpp"

namespace dksphere {

struct SuiteRequest {
    std::string suite = "all";  // all | residuals | consistency | factorization | wronskian | j0
    int j             = 1;
    int n             = 0;
    double mass       = 0.0;
    int lambda_sign   = 1;
    int delta_sign    = 1;
    int eps_sign      = 1;
    double generic_p  = 2.3;
};

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"all", "residuals", "consistency", "factorization", "wronskian",
                                                "j0"};
    return names;
}

namespace suite_detail {

/// Runs a check, turning exceptions into a failed report.
inline void run_check(std::vector<VerificationReport>& out, const std::string& name,
                      const std::function<std::vector<VerificationReport>()>& check)
{
    try {
        for (auto& r : check()) {
            out.push_back(std::move(r));
        }
    } catch (const std::exception& e) {
        ReportBuilder b(name, 0.0);
        out.push_back(b.fail(e.what()));
    }
}

/// Wronskian as a report: the recorded residual is 1/|W|, so pass means |W| >= 1/tolerance.
inline VerificationReport wronskian_report(int j, double p, double x0, double min_abs_w)
{
    ReportBuilder b("wronskian_j" + std::to_string(j) + "_x" + format_double(x0), 1.0 / min_abs_w);
    const double w = wronskian4(basis_K_sources(general_basis(j, p)), x0);
    b.add(x0, 1.0 / std::abs(w), 1.0);
    return b.finish();
}

}  // namespace suite_detail

inline std::vector<VerificationReport> run_suite(const SuiteRequest& req)
{
    using suite_detail::run_check;
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), req.suite) == names.end()) {
        throw std::invalid_argument("unknown suite '" + req.suite + "'");
    }
    const bool all = req.suite == "all";
    std::vector<VerificationReport> out;

    if (req.j == 0) {
        if (!all && req.suite != "j0") {
            throw std::invalid_argument("suite '" + req.suite + "' needs j >= 1");
        }
        run_check(out, "j0_closed_form", [&] {
            const double k   = 2.0 + req.n;
            const auto params =
                ModeParams::from_p_sq(k * k - 1.0, req.mass, req.eps_sign, req.lambda_sign, req.delta_sign);
            auto s = j0_scalar_residuals(req.n, params);
            return std::vector<VerificationReport>{j0_system_residual(req.n, params, j0_amplitude_ratio(params)),
                                                   s[0], s[1]};
        });
        return out;
    }
    if (req.suite == "j0") {
        throw std::invalid_argument("suite 'j0' needs j = 0");
    }

    const QuantumNumbers qn(req.j, req.n);
    const double a_sq = static_cast<double>(qn.a_sq());
    for (Family f : {Family::F1, Family::F2, Family::F3, Family::F4}) {
        const std::string tag = std::string(family_name(f));
        auto params           = [&] {
            const double p_sq = to_double(family_p_sq(f, Rational(req.j), req.n));
            return ModeParams::from_p_sq(p_sq, req.mass, req.eps_sign, req.lambda_sign, req.delta_sign);
        };
        if (all || req.suite == "residuals") {
            run_check(out, "operator_residuals_" + tag, [&] {
                auto r = family_operator_residuals(f, qn);
                return std::vector<VerificationReport>{r[0], r[1]};
            });
            run_check(out, "first_order_system_" + tag,
                      [&] { return std::vector<VerificationReport>{family_system_residual(f, qn, params())}; });
        }
        if (all || req.suite == "consistency") {
            run_check(out, "companion_" + tag,
                      [&] { return std::vector<VerificationReport>{cross_consistency(f, qn, params())[0]}; });
        }
    }
    if (all || req.suite == "factorization") {
        const double p_sq = to_double(family_p_sq(Family::F1, Rational(req.j), req.n));
        run_check(out, "factorization_K", [&] {
            return std::vector<VerificationReport>{
                factorization_identity(factor_pair_K(p_sq, a_sq), operator_K4(p_sq, a_sq))};
        });
        run_check(out, "factorization_M", [&] {
            return std::vector<VerificationReport>{
                factorization_identity(factor_pair_M(p_sq, a_sq), operator_M4(p_sq, a_sq))};
        });
    }
    if (all || req.suite == "wronskian") {
        for (double x0 : {0.3, 0.6}) {
            run_check(out, "wronskian", [&] {
                return std::vector<VerificationReport>{suite_detail::wronskian_report(req.j, req.generic_p, x0, 1e-6)};
            });
        }
    }
    return out;
}

}  // namespace dksphere
