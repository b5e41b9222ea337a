#pragma once

// Adaptive Runge-Kutta-Fehlberg 7(8) integration of the radial systems.

#include <array>
#include <cmath>
#include <functional>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "errors.hpp"

namespace dksphere {

struct IntegratorOptions {
    double rel_tol   = 1e-10;
    double abs_tol   = 1e-14;
    double first_step = 1e-4;
    long max_steps   = 200000;
};

/// Integrates dy/dt = f(t, y) from t0 to t1 (either direction). The optional
/// observer sees every accepted step. Throws IntegrationError on step-size
/// collapse, step budget exhaustion or non-finite state.
template <std::size_t Dim, class Rhs>
std::array<double, Dim> integrate_adaptive(
    const Rhs& f, std::array<double, Dim> y, double t0, double t1, const IntegratorOptions& opt = {},
    const std::function<void(double, const std::array<double, Dim>&)>& observer = {})
{
    namespace odeint = boost::numeric::odeint;
    using State      = std::array<double, Dim>;

    auto rhs = [&f](const State& x, State& dxdt, double t) { dxdt = f(t, x); };
    auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_fehlberg78<State>());

    const double dir = t1 >= t0 ? 1.0 : -1.0;
    double t         = t0;
    double dt        = dir * std::min(opt.first_step, std::abs(t1 - t0));
    long steps       = 0;
    if (observer) {
        observer(t, y);
    }
    while (dir * (t1 - t) > 0.0) {
        if (dir * (t + dt - t1) > 0.0) {
            dt = t1 - t;
        }
        if (++steps > opt.max_steps) {
            throw IntegrationError("step budget exhausted at t=" + std::to_string(t));
        }
        if (stepper.try_step(rhs, y, t, dt) == odeint::success) {
            for (double v : y) {
                if (!std::isfinite(v)) {
                    throw IntegrationError("non-finite state at t=" + std::to_string(t));
                }
            }
            if (observer) {
                observer(t, y);
            }
        } else if (std::abs(dt) < 1e-14 * std::max(1.0, std::abs(t))) {
            throw IntegrationError("step size collapsed at t=" + std::to_string(t));
        }
    }
    return y;
}

}  // namespace dksphere
