#include "svl/model.hpp"

#include <cmath>

namespace svl {

double energy(const PhaseSpaceState& state, const IsingProblem& problem, double a, double b)
{
    require_matching(state, problem);
    const auto n = static_cast<std::size_t>(problem.size());
    double transverse = 0.0;
    double field_term = 0.0;
    const auto& g = problem.fields();
    for (std::size_t i = 0; i < n; ++i) {
        transverse += std::cos(state.theta[i]);
        field_term += g[i] * std::sin(state.theta[i]);
    }
    double bond_term = 0.0;
    for (const auto& e : problem.edges()) {
        bond_term += e.coupling * std::sin(state.theta[e.i]) * std::sin(state.theta[e.j]);
    }
    return -a * transverse - b * (bond_term + field_term);
}

std::vector<double> gradient(const PhaseSpaceState& state, const IsingProblem& problem, double a,
                             double b)
{
    require_matching(state, problem);
    const auto n = static_cast<std::size_t>(problem.size());
    std::vector<double> sin_t(n);
    std::vector<double> cos_t(n);
    for (std::size_t i = 0; i < n; ++i) {
        sin_t[i] = std::sin(state.theta[i]);
        cos_t[i] = std::cos(state.theta[i]);
    }
    std::vector<double> out(n);
    gradient_into(sin_t, cos_t, problem, a, b, out);
    return out;
}

void gradient_into(std::span<const double> sin_theta, std::span<const double> cos_theta,
                   const IsingProblem& problem, double a, double b, std::span<double> out)
{
    const auto n = static_cast<std::size_t>(problem.size());
    const auto& g = problem.fields();
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a * sin_theta[i] - b * g[i] * cos_theta[i];
    }
    for (const auto& e : problem.edges()) {
        out[e.i] -= b * e.coupling * cos_theta[e.i] * sin_theta[e.j];
        out[e.j] -= b * e.coupling * cos_theta[e.j] * sin_theta[e.i];
    }
}

double kinetic_energy(const PhaseSpaceState& state, double mass)
{
    double sum = 0.0;
    for (double p : state.p) {
        sum += p * p;
    }
    return 0.5 * sum / mass;
}

} // namespace svl
