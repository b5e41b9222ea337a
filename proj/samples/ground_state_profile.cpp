// Prints the lowest F1 state for j = 2 on a coarse grid together with the
// residual of the first-order system at each point.

#include <cstdio>

#include "dksphere.hpp"

int main()
{
    using namespace dksphere;

    const QuantumNumbers qn(2, 0);
    const auto amps   = family_amplitudes(Family::F1, qn);
    const auto params = ModeParams::from_p_sq(amps.p_sq, 0.5);
    const auto sys    = system_j(params, qn);

    std::printf("# F1 j=2 n=0  p^2=%g  eps=%.12g\n", amps.p_sq, params.eps());
    std::printf("%8s %14s %14s %14s %14s %10s\n", "r", "K", "L", "M", "N", "residual");
    for (double r : open_r_grid(15)) {
        const auto y = family_state_jets(amps, params, r, 1);
        const std::array<double, 4> v{y[0].value(), y[1].value(), y[2].value(), y[3].value()};
        const auto d = sys.derivative(r, v);
        double res   = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            res = std::max(res, std::abs(d[i] - y[i].coeff(1)));
        }
        std::printf("%8.4f %14.8f %14.8f %14.8f %14.8f %10.2e\n", r, v[0], v[1], v[2], v[3], res);
    }
}
