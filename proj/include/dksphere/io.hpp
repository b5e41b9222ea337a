#pragma once

// Command implementations and serialization (CSV and JSON).
//
// CSV: comma separated, LF line endings, '#' comment lines first, then a
// header row. Doubles use the shortest round-trip representation; exact
// spectrum values are rendered as integers or "a/b".

#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "closed_form.hpp"
#include "format.hpp"
#include "rational.hpp"
#include "spectral_oracle.hpp"
#include "spectrum.hpp"
#include "suite.hpp"
#include "verification.hpp"

namespace dksphere {

enum class Command { spectrum, wavefunction, verify, oracle, degeneracy };
enum class Format { csv, json };

inline constexpr int kExitOk           = 0;
inline constexpr int kExitCheckFailed  = 1;
inline constexpr int kExitUsage        = 2;

/// Raised for inconsistent or incomplete command-line selections.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    Command command = Command::spectrum;
    std::string family = "all-dk";
    std::optional<int> j;
    std::optional<Rational> J;
    std::optional<int> n;
    std::optional<int> n_max;
    std::optional<int> j_max;
    Rational mass{0};
    int lambda_sign = 1;
    int delta_sign  = 1;
    int eps_sign    = 1;
    int grid        = 2001;
    std::optional<Format> format;
    std::string suite = "all";
    bool compare      = false;
    ShootingConfig shooting;

    Format output_format() const
    {
        if (format) {
            return *format;
        }
        const bool tabular = command == Command::spectrum || command == Command::wavefunction ||
                             command == Command::degeneracy;
        return tabular ? Format::csv : Format::json;
    }
};

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// spectrum

namespace io_detail {

inline std::pair<int, int> n_range(const RunConfig& c)
{
    if (c.n && c.n_max) {
        throw UsageError("give either --n or --n-max, not both");
    }
    if (c.n) {
        return {*c.n, *c.n};
    }
    return {0, c.n_max.value_or(0)};
}

inline int require_j(const RunConfig& c, const std::string& what)
{
    if (!c.j) {
        throw UsageError(what + " needs --j");
    }
    return *c.j;
}

inline std::string partner_text(const std::optional<StateLabel>& p)
{
    if (!p) {
        return "";
    }
    return std::string(family_name(p->family)) + " j=" + to_string(p->j) + " n=" + std::to_string(p->n);
}

inline double signed_eps(const Rational& eps_sq, int eps_sign) { return eps_sign * std::sqrt(to_double(eps_sq)); }

}  // namespace io_detail

inline std::vector<SpectrumEntry> spectrum_table(const RunConfig& c)
{
    const auto [n_lo, n_hi] = io_detail::n_range(c);
    if (n_lo < 0 || n_hi < n_lo) {
        throw UsageError("radial index range must be non-negative");
    }
    std::vector<SpectrumEntry> rows;
    auto add_family = [&](Family f, const Rational& j) {
        for (int n = n_lo; n <= n_hi; ++n) {
            rows.push_back(spectrum(f, j, n, c.mass));
        }
    };
    if (c.family == "all-dk") {
        add_family(Family::J0, Rational(0));
        const int j_lo = c.j.value_or(1);
        const int j_hi = c.j ? *c.j : c.j_max.value_or(1);
        for (int j = j_lo; j <= j_hi; ++j) {
            for (Family f : {Family::F1, Family::F2, Family::F3, Family::F4}) {
                add_family(f, Rational(j));
            }
        }
        return rows;
    }
    const Family f = parse_family(c.family);
    if (f == Family::Dirac) {
        if (!c.J) {
            throw UsageError("family dirac needs --J (e.g. 1/2)");
        }
        add_family(f, *c.J);
    } else if (f == Family::J0) {
        add_family(f, Rational(0));
    } else {
        add_family(f, Rational(io_detail::require_j(c, "family " + c.family)));
    }
    return rows;
}

inline void write_spectrum(std::ostream& os, const std::vector<SpectrumEntry>& rows, const RunConfig& c)
{
    if (c.output_format() == Format::json) {
        json arr = json::array();
        for (const auto& e : rows) {
            json row;
            row["family"]    = family_name(e.family);
            row["j"]         = to_string(e.j);
            row["n"]         = e.n;
            row["p_sq"]      = to_string(e.p_sq);
            row["p_sq_float"] = to_double(e.p_sq);
            row["eps_sq"]    = to_string(e.eps_sq);
            row["eps"]       = io_detail::signed_eps(e.eps_sq, c.eps_sign);
            row["degenerate_partner"] = e.degenerate_partner ? json(io_detail::partner_text(e.degenerate_partner))
                                                             : json(nullptr);
            arr.push_back(row);
        }
        os << json{{"mass", to_string(c.mass)}, {"rows", arr}}.dump(2) << '\n';
        return;
    }
    os << "# spectrum mass=" << to_string(c.mass) << " eps_sign=" << c.eps_sign << '\n';
    os << "family,j,n,p_sq,p_sq_float,eps_sq,eps,degenerate_partner\n";
    for (const auto& e : rows) {
        os << family_name(e.family) << ',' << to_string(e.j) << ',' << e.n << ',' << to_string(e.p_sq) << ','
           << format_double(to_double(e.p_sq)) << ',' << to_string(e.eps_sq) << ','
           << format_double(io_detail::signed_eps(e.eps_sq, c.eps_sign)) << ','
           << io_detail::partner_text(e.degenerate_partner) << '\n';
    }
}

// ---------------------------------------------------------------------------
// wavefunction

inline RadialSolution wavefunction_for(const RunConfig& c)
{
    if (c.family == "all-dk" || c.family == "dirac" || c.family == "DIRAC") {
        throw UsageError("wavefunction needs one of --family f1|f2|f3|f4|j0");
    }
    const Family f = parse_family(c.family);
    const int n    = c.n.value_or(0);
    if (c.n_max) {
        throw UsageError("wavefunction takes --n, not --n-max");
    }
    if (c.grid < 1) {
        throw UsageError("--grid must be positive");
    }
    const auto grid = open_r_grid(c.grid);
    if (f == Family::J0) {
        const auto e = spectrum(Family::J0, Rational(0), n, c.mass);
        const auto params =
            ModeParams::from_p_sq(to_double(e.p_sq), to_double(c.mass), c.eps_sign, c.lambda_sign, c.delta_sign);
        return wavefunction_j0(n, params, grid);
    }
    const int j       = io_detail::require_j(c, "wavefunction");
    const auto e      = spectrum(f, Rational(j), n, c.mass);
    const auto params =
        ModeParams::from_p_sq(to_double(e.p_sq), to_double(c.mass), c.eps_sign, c.lambda_sign, c.delta_sign);
    return wavefunction_family(f, QuantumNumbers(j, n), params, grid);
}

/// x = cos^2 r for j >= 1, (1 - cos r)/2 for j = 0.
inline double x_of_r(const RadialSolution& s, double r)
{
    return s.family == Family::J0 ? 0.5 * (1.0 - std::cos(r)) : std::cos(r) * std::cos(r);
}

inline void write_wavefunction(std::ostream& os, const RadialSolution& s, const RunConfig& c)
{
    const bool j0 = s.family == Family::J0;
    if (c.output_format() == Format::json) {
        json doc;
        doc["family"]  = family_name(s.family);
        doc["j"]       = s.j;
        doc["n"]       = s.n;
        doc["p_sq"]    = s.p_sq;
        doc["mass"]    = s.params.mass();
        doc["eps"]     = s.params.eps();
        doc["lambda"]  = s.params.lambda_sign();
        doc["delta"]   = s.params.delta_sign();
        std::vector<double> x;
        for (double r : s.r) {
            x.push_back(x_of_r(s, r));
        }
        doc["r"] = s.r;
        doc["x"] = x;
        if (!j0) {
            doc["K"] = s.K;
            doc["L"] = s.L;
        }
        doc["M"] = s.M;
        doc["N"] = s.N;
        os << doc.dump(2) << '\n';
        return;
    }
    os << "# family=" << family_name(s.family) << '\n';
    os << "# j=" << s.j << '\n';
    os << "# n=" << s.n << '\n';
    os << "# p_sq=" << format_double(s.p_sq) << '\n';
    os << "# mass=" << format_double(s.params.mass()) << '\n';
    os << "# eps=" << format_double(s.params.eps()) << '\n';
    os << "# lambda=" << s.params.lambda_sign() << '\n';
    os << "# delta=" << s.params.delta_sign() << '\n';
    os << (j0 ? "r,x,M,N\n" : "r,x,K,L,M,N\n");
    for (std::size_t i = 0; i < s.r.size(); ++i) {
        os << format_double(s.r[i]) << ',' << format_double(x_of_r(s, s.r[i]));
        if (!j0) {
            os << ',' << format_double(s.K[i]) << ',' << format_double(s.L[i]);
        }
        os << ',' << format_double(s.M[i]) << ',' << format_double(s.N[i]) << '\n';
    }
}

/// Parsed wavefunction CSV: comment metadata plus named columns.
struct WavefunctionTable {
    std::map<std::string, std::string> meta;
    std::map<std::string, std::vector<double>> columns;
};

inline WavefunctionTable read_wavefunction_csv(std::istream& is)
{
    WavefunctionTable t;
    std::string line;
    std::vector<std::string> header;
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            parts.push_back(item);
        }
        return parts;
    };
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                t.meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
            }
            continue;
        }
        if (header.empty()) {
            header = split(line);
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw std::runtime_error("malformed CSV row: " + line);
        }
        for (std::size_t k = 0; k < cells.size(); ++k) {
            t.columns[header[k]].push_back(std::stod(cells[k]));
        }
    }
    return t;
}

/// Re-verifies a wavefunction table with finite differences on the r-grid:
/// the directly given amplitude must lie in the kernel of the inner
/// second-order operator (j >= 1), or solve the j = 0 equation for M.
inline VerificationReport verify_wavefunction_table(const WavefunctionTable& t, double tolerance = 1e-5)
{
    const auto family = parse_family(t.meta.at("family"));
    const int j       = std::stoi(t.meta.at("j"));
    const double p_sq = std::stod(t.meta.at("p_sq"));
    const auto& r     = t.columns.at("r");
    const double a_sq = static_cast<double>(j) * (j + 1);

    std::string column = "M";
    std::optional<LinearDifferentialOperator> op;
    if (family == Family::J0) {
        op = operator_j0(p_sq);
    } else if (family == Family::F1 || family == Family::F2) {
        op     = factor_pair_K(p_sq, a_sq).inner;
        column = "K";
    } else {
        op = factor_pair_M(p_sq, a_sq).inner;
    }
    const auto& y = t.columns.at(column);
    ReportBuilder b("roundtrip_" + std::string(family_name(family)) + "_" + column, tolerance);
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double ri = r[i];
        // x(r), x'(r), x''(r) for the two variable conventions.
        double x, xr, xrr;
        if (family == Family::J0) {
            x   = 0.5 * (1.0 - std::cos(ri));
            xr  = 0.5 * std::sin(ri);
            xrr = 0.5 * std::cos(ri);
        } else {
            x   = std::cos(ri) * std::cos(ri);
            xr  = -std::sin(2.0 * ri);
            xrr = -2.0 * std::cos(2.0 * ri);
        }
        if (x < 0.02 || x > 0.98) {
            continue;
        }
        const auto d     = grid_derivatives(r, y, i, 2);
        const double yx  = d[1] / xr;
        const double yxx = (d[2] - yx * xrr) / (xr * xr);
        const auto terms = op->terms(x, {d[0], yx, yxx});
        double sum = 0.0, scale = 0.0;
        for (double v : terms) {
            sum += v;
            scale = std::max(scale, std::abs(v));
        }
        b.add(x, sum, scale);
    }
    return b.finish();
}

// ---------------------------------------------------------------------------
// reports

inline json report_json(const VerificationReport& r)
{
    json worst = json::array();
    for (const auto& w : r.details) {
        worst.push_back({{"x", w.x}, {"abs_residual", w.abs_residual}, {"rel_residual", w.rel_residual}});
    }
    json j;
    j["check_name"]       = r.check_name;
    j["pass"]             = r.pass;
    j["max_rel_residual"] = r.max_rel_residual;
    j["tolerance"]        = r.tolerance;
    j["samples"]          = r.sample_count;
    j["worst_points"]     = worst;
    j["max_abs_residual"] = r.max_abs_residual;
    if (!r.error.empty()) {
        j["error"] = r.error;
    }
    return j;
}

inline json oracle_json(const OracleEigenvalue& e)
{
    json j;
    j["eps"]          = e.eps;
    j["p_sq"]         = e.p_sq;
    j["j"]            = e.j;
    j["bracket"]      = {e.bracket[0], e.bracket[1]};
    j["mismatch"]     = e.mismatch;
    j["multiplicity"] = e.multiplicity;
    if (e.nodes) {
        j["nodes"] = *e.nodes;
    }
    j["ill_conditioned"] = e.ill_conditioned;
    if (e.matched_family_guess) {
        j["family"] = io_detail::partner_text(e.matched_family_guess);
    }
    return j;
}

inline json comparison_json(const SpectrumComparison& cmp)
{
    json matched = json::array(), uo = json::array(), uc = json::array();
    for (const auto& m : cmp.matched) {
        matched.push_back({{"eps", m.oracle.eps},
                           {"family", io_detail::partner_text(m.closed.label())},
                           {"p_sq", to_string(m.closed.p_sq)},
                           {"rel_error", m.rel_error}});
    }
    for (const auto& o : cmp.unmatched_oracle) {
        uo.push_back(oracle_json(o));
    }
    for (const auto& c : cmp.unmatched_closed) {
        uc.push_back({{"family", io_detail::partner_text(c.label())}, {"p_sq", to_string(c.p_sq)}});
    }
    return {{"pass", cmp.pass()},       {"rel_tol", cmp.rel_tol},         {"max_rel_error", cmp.max_rel_error},
            {"matched", matched},       {"unmatched_oracle", uo},         {"unmatched_closed", uc}};
}

// ---------------------------------------------------------------------------
// dispatch

inline int cmd_spectrum(const RunConfig& c, std::ostream& os)
{
    write_spectrum(os, spectrum_table(c), c);
    return kExitOk;
}

inline int cmd_wavefunction(const RunConfig& c, std::ostream& os)
{
    write_wavefunction(os, wavefunction_for(c), c);
    return kExitOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& os)
{
    if (c.n_max) {
        throw UsageError("verify takes --n, not --n-max");
    }
    SuiteRequest req;
    req.suite       = c.suite;
    req.j           = c.j.value_or(1);
    req.n           = c.n.value_or(0);
    req.mass        = to_double(c.mass);
    req.lambda_sign = c.lambda_sign;
    req.delta_sign  = c.delta_sign;
    req.eps_sign    = c.eps_sign;
    std::vector<VerificationReport> reports;
    try {
        reports = run_suite(req);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    bool pass   = true;
    json checks = json::array();
    for (const auto& r : reports) {
        pass = pass && r.pass;
        checks.push_back(report_json(r));
    }
    json doc{{"suite", req.suite}, {"j", req.j},  {"n", req.n},
             {"mass", req.mass},   {"pass", pass}, {"checks", checks}};
    if (c.output_format() == Format::csv) {
        os << "# verify suite=" << req.suite << " j=" << req.j << " n=" << req.n << '\n';
        os << "check_name,pass,max_rel_residual,tolerance,samples\n";
        for (const auto& r : reports) {
            os << r.check_name << ',' << (r.pass ? "true" : "false") << ',' << format_double(r.max_rel_residual)
               << ',' << format_double(r.tolerance) << ',' << r.sample_count << '\n';
        }
    } else {
        os << doc.dump(2) << '\n';
    }
    return pass ? kExitOk : kExitCheckFailed;
}

inline int cmd_oracle(const RunConfig& c, std::ostream& os)
{
    const int j       = c.j.value_or(0);
    const double mass = to_double(c.mass);
    if (j < 0) {
        throw UsageError("--j must be non-negative");
    }
    try {
        c.shooting.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const OracleRun run = j == 0 ? shoot_j0(mass, c.lambda_sign, c.shooting) : shoot_j(mass, j, c.lambda_sign, c.shooting);
    json doc;
    doc["j"]      = j;
    doc["mass"]   = mass;
    doc["lambda"] = c.lambda_sign;
    doc["config"] = {{"r_start_offset", c.shooting.r_start_offset}, {"tolerance", c.shooting.tolerance},
                     {"eps_min", c.shooting.eps_min},               {"eps_max", c.shooting.eps_max},
                     {"eps_step", c.shooting.eps_step},             {"match_point", c.shooting.match_point}};
    int status         = kExitOk;
    json eigenvalues   = json::array();
    std::vector<OracleEigenvalue> evs = run.eigenvalues;
    if (c.compare) {
        const auto closed = closed_levels(j, c.mass, c.shooting.eps_min, c.shooting.eps_max);
        const auto cmp    = compare_spectra(evs, closed);
        doc["comparison"] = comparison_json(cmp);
        if (!cmp.pass()) {
            status = kExitCheckFailed;
        }
        for (auto& e : evs) {
            for (const auto& m : cmp.matched) {
                if (m.oracle.eps == e.eps) {
                    e.matched_family_guess = m.closed.label();
                }
            }
        }
    }
    for (const auto& e : evs) {
        eigenvalues.push_back(oracle_json(e));
    }
    doc["eigenvalues"] = eigenvalues;
    doc["diagnostics"] = run.diagnostics;
    doc["pass"]        = status == kExitOk;
    if (c.output_format() == Format::csv) {
        os << "# oracle j=" << j << " mass=" << format_double(mass) << " lambda=" << c.lambda_sign << '\n';
        os << "eps,p_sq,multiplicity\n";
        for (const auto& e : evs) {
            os << format_double(e.eps) << ',' << format_double(e.p_sq) << ',' << e.multiplicity << '\n';
        }
    } else {
        os << doc.dump(2) << '\n';
    }
    return status;
}

inline int cmd_degeneracy(const RunConfig& c, std::ostream& os)
{
    const int j_max = c.j_max.value_or(5);
    const int n_max = c.n_max.value_or(5);
    std::vector<DegeneracyPair> pairs;
    try {
        pairs = degeneracy_map(j_max, n_max);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (c.output_format() == Format::json) {
        json arr = json::array();
        for (const auto& p : pairs) {
            arr.push_back({{"upper", io_detail::partner_text(p.upper)},
                           {"lower", io_detail::partner_text(p.lower)},
                           {"p_sq", to_string(p.p_sq)},
                           {"distinct_wavefunctions", p.distinct_wavefunctions}});
        }
        os << json{{"j_max", j_max}, {"n_max", n_max}, {"pairs", arr.size()}, {"rows", arr}}.dump(2) << '\n';
        return kExitOk;
    }
    os << "# degeneracy j_max=" << j_max << " n_max=" << n_max << " pairs=" << pairs.size() << '\n';
    os << "upper_family,upper_j,lower_family,lower_j,n,p_sq,distinct_wavefunctions\n";
    for (const auto& p : pairs) {
        os << family_name(p.upper.family) << ',' << to_string(p.upper.j) << ',' << family_name(p.lower.family) << ','
           << to_string(p.lower.j) << ',' << p.upper.n << ',' << to_string(p.p_sq) << ','
           << (p.distinct_wavefunctions ? "true" : "false") << '\n';
    }
    return kExitOk;
}

/// Runs one command. Usage problems and rejected requests give exit status 2
/// with a one-line message on `err`.
inline int run_command(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    try {
        switch (c.command) {
            case Command::spectrum: return cmd_spectrum(c, out);
            case Command::wavefunction: return cmd_wavefunction(c, out);
            case Command::verify: return cmd_verify(c, out);
            case Command::oracle: return cmd_oracle(c, out);
            case Command::degeneracy: return cmd_degeneracy(c, out);
        }
    } catch (const IntegrationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace dksphere
