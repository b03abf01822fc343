#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "svl/ising.hpp"

namespace svl {

/// Finite-valued check that survives -ffast-math translation units.
inline bool finite_bits(double x)
{
    const auto bits = std::bit_cast<std::uint64_t>(x);
    return ((bits >> 52) & 0x7ffu) != 0x7ffu;
}

inline bool all_finite(std::span<const double> v)
{
    for (double x : v) {
        if (!finite_bits(x)) {
            return false;
        }
    }
    return true;
}

/// Rotor angles and conjugate momenta at time t. Angles are unbounded reals;
/// all forces are 2pi-periodic so wrapping is never applied.
struct PhaseSpaceState {
    std::vector<double> theta;
    std::vector<double> p;
    double t = 0.0;

    PhaseSpaceState() = default;

    PhaseSpaceState(std::vector<double> theta_, std::vector<double> p_, double t_ = 0.0)
        : theta(std::move(theta_)), p(std::move(p_)), t(t_)
    {
        if (theta.size() != p.size()) {
            throw std::invalid_argument("theta and p must have equal length");
        }
    }

    static PhaseSpaceState zeros(std::size_t n)
    {
        return PhaseSpaceState(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0.0);
    }

    std::size_t size() const { return theta.size(); }

    bool is_finite() const { return all_finite(theta) && all_finite(p) && finite_bits(t); }
};

inline void require_matching(const PhaseSpaceState& state, const IsingProblem& problem)
{
    if (state.theta.size() != static_cast<std::size_t>(problem.size())
        || state.p.size() != static_cast<std::size_t>(problem.size())) {
        throw std::invalid_argument("state dimension does not match problem size");
    }
}

} // namespace svl
