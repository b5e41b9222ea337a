// dksphere: spectra, wavefunctions, verification and shooting reports.
//
//   dksphere spectrum --family f1 --j 1 --n-max 2
//   dksphere wavefunction --family j0 --n 0 --mass 1 --grid 5
//   dksphere verify --suite all --j 1 --n 0
//   dksphere oracle --j 1 --eps-max 4.5 --compare
//   dksphere degeneracy --j-max 5 --n-max 5

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "dksphere/io.hpp"

namespace {

using namespace dksphere;

int sign_flag(int v, const char* name)
{
    if (v != 1 && v != -1) {
        throw UsageError(std::string("--") + name + " must be +1 or -1");
    }
    return v;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dirac-Kaehler radial spectra on the 3-sphere"};
    app.set_config("--config", "", "flat key=value file mirroring the flags (flags win)");
    app.require_subcommand(1, 1);

    std::string family = "all-dk", suite = "all", out_path, format, mass = "0", J;
    std::optional<int> j, n, n_max, j_max;
    int lambda = 1, delta = 1, eps_sign = 1, grid = 2001;
    bool compare = false;
    ShootingConfig shooting;

    app.add_option("--family", family, "f1|f2|f3|f4|j0|dirac|all-dk")->capture_default_str();
    app.add_option("--j", j, "angular momentum j (integer)");
    app.add_option("--J", J, "Dirac total angular momentum, e.g. 1/2");
    app.add_option("--n", n, "radial index");
    app.add_option("--n-max", n_max, "largest radial index");
    app.add_option("--j-max", j_max, "largest j");
    app.add_option("--mass", mass, "mass (integer, a/b or decimal)")->capture_default_str();
    app.add_option("--lambda", lambda, "constraint branch +1|-1")->capture_default_str();
    app.add_option("--delta", delta, "parity branch +1|-1")->capture_default_str();
    app.add_option("--eps-sign", eps_sign, "energy sign +1|-1")->capture_default_str();
    app.add_option("--grid", grid, "wavefunction grid size")->capture_default_str();
    app.add_option("--eps-min", shooting.eps_min, "oracle scan start")->capture_default_str();
    app.add_option("--eps-max", shooting.eps_max, "oracle scan end")->capture_default_str();
    app.add_option("--eps-step", shooting.eps_step, "oracle scan step")->capture_default_str();
    app.add_option("--r-offset", shooting.r_start_offset, "oracle start offset from the poles")->capture_default_str();
    app.add_option("--match-point", shooting.match_point, "oracle matching radius")->capture_default_str();
    app.add_option("--suite", suite, "verify suite: all|residuals|consistency|factorization|wronskian|j0")
        ->capture_default_str();
    app.add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_flag("--compare", compare, "compare oracle levels with the exact spectrum");

    const std::vector<std::pair<std::string, Command>> commands{{"spectrum", Command::spectrum},
                                                                {"wavefunction", Command::wavefunction},
                                                                {"verify", Command::verify},
                                                                {"oracle", Command::oracle},
                                                                {"degeneracy", Command::degeneracy}};
    for (const auto& [name, cmd] : commands) {
        app.add_subcommand(name, "")->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    RunConfig cfg;
    try {
        for (const auto& [name, cmd] : commands) {
            if (app.got_subcommand(name)) {
                cfg.command = cmd;
            }
        }
        cfg.family      = family;
        cfg.j           = j;
        cfg.n           = n;
        cfg.n_max       = n_max;
        cfg.j_max       = j_max;
        cfg.mass        = parse_rational(mass);
        cfg.lambda_sign = sign_flag(lambda, "lambda");
        cfg.delta_sign  = sign_flag(delta, "delta");
        cfg.eps_sign    = sign_flag(eps_sign, "eps-sign");
        cfg.grid        = grid;
        cfg.suite       = suite;
        cfg.compare     = compare;
        cfg.shooting    = shooting;
        if (!J.empty()) {
            cfg.J = parse_rational(J);
        }
        if (!format.empty()) {
            cfg.format = format == "json" ? Format::json : Format::csv;
        }
        if (cfg.mass < 0) {
            throw UsageError("--mass must be non-negative");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    if (out_path.empty()) {
        return run_command(cfg, std::cout, std::cerr);
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
        std::cerr << "error: cannot open " << out_path << '\n';
        return kExitUsage;
    }
    return run_command(cfg, file, std::cerr);
}
