#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "svl/bath.hpp"
#include "svl/ising.hpp"
#include "svl/noise.hpp"
#include "svl/schedule.hpp"
#include "svl/state.hpp"

namespace svl {

struct IntegrationParams {
    double dt;
    int record_stride = 1;

    explicit IntegrationParams(double dt_, int record_stride_ = 1)
        : dt(dt_), record_stride(record_stride_)
    {
        if (!(dt > 0.0)) {
            throw std::invalid_argument("timestep must be positive");
        }
        if (record_stride < 1) {
            throw std::invalid_argument("record stride must be >= 1");
        }
    }

    /// Default policy: resolve the natural rotor period (m = J = 1) and keep
    /// at least 10^3 steps for short quenches.
    static double default_dt(double t_a) { return std::min(0.01, t_a / 1000.0); }
};

/// Deterministic drift vector of the 2N-dimensional SDE: components 0..N-1
/// are p_i/m, components N..2N-1 are -(dH/dtheta_i + (gamma/m) p_i), with the
/// Hamiltonian weights taken from the schedule at state.t.
std::vector<double> drift(const PhaseSpaceState& state, const IsingProblem& problem,
                          const Schedule& schedule, const BathParams& bath);

enum class InitStrategy { cold, thermal, burn_in };

struct BurnInParams {
    double duration = 50.0;
    double dt = 0.01;
};

/// Initial ensemble member at t = 0. `cold` is theta = p = 0; `thermal` adds
/// equipartition momenta p_i ~ N(0, mT); `burn_in` additionally relaxes under
/// the frozen initial Hamiltonian (A=1, B=0) for the given duration.
PhaseSpaceState initialize_state(const IsingProblem& problem, const BathParams& bath,
                                 InitStrategy strategy, NoiseStream& noise,
                                 const BurnInParams& burn_in = {});

using Recorder = std::function<void(double, const PhaseSpaceState&)>;

/// Reusable stepping engine with preallocated workspaces. A single instance
/// serves one trajectory at a time; ensemble workers each own one.
class Weak2Integrator {
public:
    Weak2Integrator(const IsingProblem& problem, const Schedule& schedule,
                    const BathParams& bath);

    /// Advance the state by dt (consumes exactly N Gaussian draws). Does not
    /// check finiteness; callers validate between steps.
    void step(PhaseSpaceState& state, double dt, NoiseStream& noise);

private:
    const IsingProblem* problem_;
    const Schedule* schedule_;
    BathParams bath_;
    bool chain_fast_path_;
    double chain_coupling_ = 0.0;
    bool chain_periodic_ = false;
    std::vector<double> gauss_, sin_y_, cos_y_, grad_y_, theta_pred_, p_pred_, sin_g_, cos_g_,
        grad_g_;
};

/// One predictor-corrector step of the multi-dimensional explicit order-2.0
/// weak scheme (diffusion matrix diagonal: 0 on angle rows, sqrt(2D) on
/// momentum rows; the same noise vector enters predictor and corrector).
/// Throws IntegrationError if the result is non-finite.
PhaseSpaceState weak2_step(const PhaseSpaceState& state, double dt, NoiseStream& noise,
                           const IsingProblem& problem, const Schedule& schedule,
                           const BathParams& bath);

inline PhaseSpaceState weak2_step(const PhaseSpaceState& state, const IntegrationParams& params,
                                  NoiseStream& noise, const IsingProblem& problem,
                                  const Schedule& schedule, const BathParams& bath)
{
    return weak2_step(state, params.dt, noise, problem, schedule, bath);
}

/// Integrate from t = 0 to t = schedule.duration() exactly; the last step
/// shrinks to land on the endpoint. The recorder (if any) fires at t = 0,
/// every record_stride-th step, and at the final step. Throws
/// IntegrationError with the failing step index on blowup.
PhaseSpaceState simulate_trajectory(PhaseSpaceState init, const IsingProblem& problem,
                                    const Schedule& schedule, const BathParams& bath,
                                    const IntegrationParams& params, NoiseStream& noise,
                                    const Recorder& recorder = {});

} // namespace svl
