#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace svl {

/// Numerical blowup during SDE integration. Carries the step index and time
/// at which a non-finite component first appeared; the ensemble runner adds
/// the trajectory index before reporting.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, std::int64_t step, double time,
                     std::int64_t trajectory = -1)
        : std::runtime_error(what), step_(step), time_(time), trajectory_(trajectory)
    {
    }

    std::int64_t step() const noexcept { return step_; }
    double time() const noexcept { return time_; }
    std::int64_t trajectory() const noexcept { return trajectory_; }

private:
    std::int64_t step_;
    double time_;
    std::int64_t trajectory_;
};

/// Eigensolver non-convergence, invalid fit windows discovered at run time,
/// and similar numerical failures that are not contract violations.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failures (unwritable output directory, missing results).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace svl
