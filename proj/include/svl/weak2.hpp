#pragma once

#include <cstddef>
#include <span>

namespace svl {

/// One step of the explicit order-2.0 weak predictor-corrector scheme for
/// SDEs with constant (state-independent) diffusion,
///
///   predictor:  Gamma = Y + A(t, Y) dt + B dW
///   corrector:  Y'    = Y + (dt/2) [A(t, Y) + A(t+dt, Gamma)] + B dW
///
/// with the same noise increment in both stages. `b_dw` holds B dW per
/// component (zero where the diffusion vanishes). The drift callable has
/// signature drift(t, y, out). The three workspaces have the state dimension.
///
/// This generic form exists so tests can drive the scheme with analytically
/// tractable drifts (linear SDEs); the production integrator applies the same
/// update with a fused implementation.
template <class DriftFn>
void weak2_step_inplace(std::span<double> y, double t, double dt, DriftFn&& drift,
                        std::span<const double> b_dw, std::span<double> drift_y,
                        std::span<double> predictor, std::span<double> drift_pred)
{
    const std::size_t dim = y.size();
    drift(t, std::span<const double>(y), drift_y);
    for (std::size_t i = 0; i < dim; ++i) {
        predictor[i] = y[i] + drift_y[i] * dt + b_dw[i];
    }
    drift(t + dt, std::span<const double>(predictor), drift_pred);
    for (std::size_t i = 0; i < dim; ++i) {
        y[i] += 0.5 * dt * (drift_y[i] + drift_pred[i]) + b_dw[i];
    }
}

} // namespace svl
