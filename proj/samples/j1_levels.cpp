// Shoots the j = 1 system at m = 1 and lines the levels up with the exact families.

#include <cstdio>

#include "dksphere.hpp"

int main()
{
    using namespace dksphere;

    ShootingConfig cfg;
    cfg.eps_min = 0.5;
    cfg.eps_max = 6.0;

    const auto run    = shoot_j(1.0, 1, +1, cfg);
    const auto exact  = closed_levels(1, Rational(1), cfg.eps_min, cfg.eps_max);
    const auto result = compare_spectra(run.eigenvalues, exact);

    std::printf("%-14s %-20s %s\n", "p^2 (exact)", "eps (shooting)", "state");
    for (const auto& m : result.matched) {
        std::printf("%-14s %-20.14f %s\n", to_string(m.closed.p_sq).c_str(), m.oracle.eps,
                    to_string(m.closed.label()).c_str());
    }
    std::printf("unmatched: %zu shooting, %zu exact\n", result.unmatched_oracle.size(),
                result.unmatched_closed.size());
    return result.pass() ? 0 : 1;
}
