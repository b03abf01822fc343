// Hot translation unit: compiled with aggressive FP flags so the sin/cos and
// Box-Muller array loops vectorize. Finiteness checks use bit-level tests
// (state.hpp) which remain valid under -ffast-math.

#include "svl/integrator.hpp"

#include <cmath>
#include <cstddef>
#include <utility>

#include "svl/errors.hpp"
#include "svl/model.hpp"

namespace svl {
namespace {

bool is_uniform_zero_field_chain(const IsingProblem& problem, double& coupling, bool& periodic)
{
    const auto n = problem.size();
    if (n < 2) {
        return false;
    }
    for (double g : problem.fields()) {
        if (g != 0.0) {
            return false;
        }
    }
    const auto& edges = problem.edges();
    const bool wrap = edges.size() == static_cast<std::size_t>(n);
    if (!wrap && edges.size() != static_cast<std::size_t>(n) - 1) {
        return false;
    }
    for (std::size_t k = 0; k + 1 < static_cast<std::size_t>(n); ++k) {
        const auto& e = edges[k];
        if (e.i != static_cast<std::int32_t>(k) || e.j != static_cast<std::int32_t>(k) + 1
            || e.coupling != edges[0].coupling) {
            return false;
        }
    }
    if (wrap) {
        const auto& e = edges.back();
        if (e.i != n - 1 || e.j != 0 || e.coupling != edges[0].coupling) {
            return false;
        }
    }
    coupling = edges[0].coupling;
    periodic = wrap;
    return true;
}

// grad_i = a sin_i - bJ cos_i (sin_{i-1} + sin_{i+1}); shifted-array form
// vectorizes, which the generic edge-list loop cannot.
void chain_gradient(const double* sin_t, const double* cos_t, std::size_t n, double a, double b_j,
                    bool periodic, double* out)
{
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = a * sin_t[i] - b_j * cos_t[i] * (sin_t[i - 1] + sin_t[i + 1]);
    }
    const double below_first = periodic ? sin_t[n - 1] : 0.0;
    const double above_last = periodic ? sin_t[0] : 0.0;
    out[0] = a * sin_t[0] - b_j * cos_t[0] * (below_first + sin_t[1]);
    out[n - 1] = a * sin_t[n - 1] - b_j * cos_t[n - 1] * (sin_t[n - 2] + above_last);
}

} // namespace

std::vector<double> drift(const PhaseSpaceState& state, const IsingProblem& problem,
                          const Schedule& schedule, const BathParams& bath)
{
    require_matching(state, problem);
    const auto n = static_cast<std::size_t>(problem.size());
    const auto [a, b] = schedule.at(state.t);
    const std::vector<double> grad = gradient(state, problem, a, b);
    std::vector<double> out(2 * n);
    const double inv_m = 1.0 / bath.mass;
    const double gm = bath.gamma * inv_m;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = state.p[i] * inv_m;
        out[n + i] = -(grad[i] + gm * state.p[i]);
    }
    return out;
}

Weak2Integrator::Weak2Integrator(const IsingProblem& problem, const Schedule& schedule,
                                 const BathParams& bath)
    : problem_(&problem), schedule_(&schedule), bath_(bath)
{
    chain_fast_path_ = is_uniform_zero_field_chain(problem, chain_coupling_, chain_periodic_);
    const auto n = static_cast<std::size_t>(problem.size());
    gauss_.resize(n);
    sin_y_.resize(n);
    cos_y_.resize(n);
    grad_y_.resize(n);
    theta_pred_.resize(n);
    p_pred_.resize(n);
    sin_g_.resize(n);
    cos_g_.resize(n);
    grad_g_.resize(n);
}

// noinline pins a single compiled instance of the kernel so repeated runs
// through any one caller are bitwise reproducible. Results can still differ
// in the last ulp across *different* state buffers: the vectorized loops'
// peel/tail split depends on allocation alignment.
__attribute__((noinline)) void Weak2Integrator::step(PhaseSpaceState& state, double dt,
                                                     NoiseStream& noise)
{
    const auto n = state.size();
    const double dur = schedule_->duration();
    const double t0 = std::min(state.t, dur);
    const double t1 = std::min(state.t + dt, dur);
    const auto [a0, b0] = schedule_->at(t0);
    const auto [a1, b1] = schedule_->at(t1);

    const double inv_m = 1.0 / bath_.mass;
    const double gm = bath_.gamma * inv_m;
    const double bdw_scale = std::sqrt(2.0 * bath_.diffusion() * dt);

    noise.fill_gaussian(gauss_);

    double* th = state.theta.data();
    double* p = state.p.data();

    for (std::size_t i = 0; i < n; ++i) {
        sin_y_[i] = std::sin(th[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        cos_y_[i] = std::cos(th[i]);
    }
    if (chain_fast_path_) {
        chain_gradient(sin_y_.data(), cos_y_.data(), n, a0, b0 * chain_coupling_, chain_periodic_,
                       grad_y_.data());
    } else {
        gradient_into(sin_y_, cos_y_, *problem_, a0, b0, grad_y_);
    }

    for (std::size_t i = 0; i < n; ++i) {
        theta_pred_[i] = th[i] + p[i] * inv_m * dt;
    }
    for (std::size_t i = 0; i < n; ++i) {
        p_pred_[i] = p[i] - (grad_y_[i] + gm * p[i]) * dt + bdw_scale * gauss_[i];
    }

    for (std::size_t i = 0; i < n; ++i) {
        sin_g_[i] = std::sin(theta_pred_[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        cos_g_[i] = std::cos(theta_pred_[i]);
    }
    if (chain_fast_path_) {
        chain_gradient(sin_g_.data(), cos_g_.data(), n, a1, b1 * chain_coupling_, chain_periodic_,
                       grad_g_.data());
    } else {
        gradient_into(sin_g_, cos_g_, *problem_, a1, b1, grad_g_);
    }

    const double half_dt = 0.5 * dt;
    for (std::size_t i = 0; i < n; ++i) {
        th[i] += half_dt * inv_m * (p[i] + p_pred_[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        p[i] += -half_dt * ((grad_y_[i] + gm * p[i]) + (grad_g_[i] + gm * p_pred_[i]))
                + bdw_scale * gauss_[i];
    }
    state.t = state.t + dt;
}

PhaseSpaceState weak2_step(const PhaseSpaceState& state, double dt, NoiseStream& noise,
                           const IsingProblem& problem, const Schedule& schedule,
                           const BathParams& bath)
{
    require_matching(state, problem);
    if (!(dt > 0.0)) {
        throw std::invalid_argument("timestep must be positive");
    }
    const double dur = schedule.duration();
    if (state.t + dt > dur + 1e-9 * std::max(1.0, dur)) {
        throw std::invalid_argument("step would leave the schedule domain");
    }
    PhaseSpaceState next = state;
    Weak2Integrator engine(problem, schedule, bath);
    engine.step(next, dt, noise);
    if (!next.is_finite()) {
        throw IntegrationError("non-finite state after step", 0, next.t);
    }
    return next;
}

PhaseSpaceState initialize_state(const IsingProblem& problem, const BathParams& bath,
                                 InitStrategy strategy, NoiseStream& noise,
                                 const BurnInParams& burn_in)
{
    const auto n = static_cast<std::size_t>(problem.size());
    PhaseSpaceState state = PhaseSpaceState::zeros(n);
    switch (strategy) {
    case InitStrategy::cold:
        return state;
    case InitStrategy::thermal:
    case InitStrategy::burn_in: {
        const double sigma = std::sqrt(bath.mass * bath.temperature);
        if (sigma > 0.0) {
            noise.fill_gaussian(state.p);
            for (double& pi : state.p) {
                pi *= sigma;
            }
        }
        break;
    }
    default:
        throw std::invalid_argument("unknown initialization strategy");
    }
    if (strategy == InitStrategy::burn_in) {
        const FrozenSchedule frozen(1.0, 0.0, burn_in.duration);
        state = simulate_trajectory(std::move(state), problem, frozen, bath,
                                    IntegrationParams(burn_in.dt), noise);
        state.t = 0.0;
    }
    return state;
}

PhaseSpaceState simulate_trajectory(PhaseSpaceState init, const IsingProblem& problem,
                                    const Schedule& schedule, const BathParams& bath,
                                    const IntegrationParams& params, NoiseStream& noise,
                                    const Recorder& recorder)
{
    require_matching(init, problem);
    if (init.t != 0.0) {
        throw std::invalid_argument("trajectory must start at t = 0");
    }
    const double t_a = schedule.duration();
    if (params.dt > t_a * (1.0 + 1e-12)) {
        throw std::invalid_argument("timestep exceeds the schedule duration");
    }

    Weak2Integrator engine(problem, schedule, bath);
    PhaseSpaceState state = std::move(init);
    if (recorder) {
        recorder(0.0, state);
    }
    const double dt = params.dt;
    std::int64_t step_index = 0;
    while (state.t < t_a) {
        const double remaining = t_a - state.t;
        const bool last = remaining <= dt * (1.0 + 1e-9);
        const double h = last ? remaining : dt;
        engine.step(state, h, noise);
        ++step_index;
        state.t = last ? t_a : static_cast<double>(step_index) * dt;
        if (!state.is_finite()) {
            throw IntegrationError("trajectory blew up (non-finite state)", step_index, state.t);
        }
        if (recorder && (last || step_index % params.record_stride == 0)) {
            recorder(state.t, state);
        }
    }
    return state;
}

} // namespace svl
