#pragma once

#include <span>
#include <vector>

#include "svl/bath.hpp"
#include "svl/ising.hpp"
#include "svl/state.hpp"

namespace svl {

/// Annealing Hamiltonian of the spin-vector model at fixed weights (A, B):
///   H = A * (-sum_i cos theta_i)
///     + B * (-sum_(i,j) J_ij sin theta_i sin theta_j - sum_i g_i sin theta_i).
double energy(const PhaseSpaceState& state, const IsingProblem& problem, double a, double b);

/// dH/dtheta_i = -B sum_j J_ij cos theta_i sin theta_j - B g_i cos theta_i
///              + A sin theta_i, with j running over the neighbors of i.
std::vector<double> gradient(const PhaseSpaceState& state, const IsingProblem& problem, double a,
                             double b);

/// Hot-path gradient from precomputed sin/cos tables; out has length n.
void gradient_into(std::span<const double> sin_theta, std::span<const double> cos_theta,
                   const IsingProblem& problem, double a, double b, std::span<double> out);

/// sum_i p_i^2 / (2m); used by conservation checks and equipartition tests.
double kinetic_energy(const PhaseSpaceState& state, double mass);

} // namespace svl
