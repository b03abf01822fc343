#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "svl/integrator.hpp"
#include "svl/ising.hpp"
#include "svl/schedule.hpp"

namespace svl {

struct ProblemSpec {
    std::int32_t n = 256;
    double coupling = 1.0;
    double field = 0.0;
    Boundary boundary = Boundary::open;
    bool operator==(const ProblemSpec&) const = default;
};

struct ScheduleSpec {
    ScheduleForm form = ScheduleForm::linear;
    std::vector<ScheduleSample> table;
    bool operator==(const ScheduleSpec&) const = default;
};

struct BathSpec {
    std::vector<double> gammas{1.0};
    double temperature = 0.01;
    double mass = 1.0;
    bool operator==(const BathSpec&) const = default;
};

struct IntegrationSpec {
    double dt = 0.0; // <= 0 selects the default policy min(0.01, t_a/1e3)
    int record_stride = 100;
    bool record_series = false;
    bool operator==(const IntegrationSpec&) const = default;
};

struct EnsembleSpec {
    int n_trajectories = 1000;
    std::uint64_t master_seed = 1;
    InitStrategy init = InitStrategy::thermal;
    double burn_in_time = 50.0;
    bool operator==(const EnsembleSpec&) const = default;
};

struct SweepSpec {
    std::vector<double> t_a{100.0};
    bool operator==(const SweepSpec&) const = default;
};

struct OutputSpec {
    std::string directory = "out";
    bool csv = true;
    bool json = true;
    bool operator==(const OutputSpec&) const = default;
};

/// Full experiment description. Serializes to a canonical JSON document;
/// parse(serialize(c)) == c.
struct ExperimentConfig {
    ProblemSpec problem;
    ScheduleSpec schedule;
    BathSpec bath;
    IntegrationSpec integration;
    EnsembleSpec ensemble;
    SweepSpec sweep;
    OutputSpec output;

    bool operator==(const ExperimentConfig&) const = default;

    /// Throws ConfigError on hard violations (non-increasing t_a grid,
    /// fewer than 100 trajectories, gamma = 0 with T > 0, ...); prints
    /// warnings to stderr for soft ones (under 10^3 trajectories, fewer
    /// than 4 grid points per decade).
    void validate() const;

    std::string serialize() const;
    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::filesystem::path& path);

    /// FNV-1a hash of the canonical serialization, as fixed-width hex.
    std::string hash() const;

    IsingProblem make_problem() const;
    AnnealSchedule make_schedule(double t_a) const;
    double dt_for(double t_a) const;
};

} // namespace svl
