#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "svl/config.hpp"
#include "svl/observables.hpp"

namespace svl {

/// Ensemble-averaged observables at the shared record times.
struct TimeSeries {
    std::vector<double> t;
    std::vector<double> mz;
    std::vector<double> kinks;
    bool operator==(const TimeSeries&) const = default;
};

/// One (gamma, t_a) sweep cell.
struct CellResult {
    int gamma_index = 0;
    int ta_index = 0;
    double gamma = 0.0;
    double t_a = 0.0;
    std::uint64_t cell_seed = 0;
    KinkStatistics stats;
    double mz_final_mean = 0.0;
    std::optional<TimeSeries> series;
    std::int64_t failures = 0;
    std::string failure_note;
    double wall_seconds = 0.0;

    bool valid() const { return failures == 0; }
};

struct RunRecord {
    std::string config_hash;
    ExperimentConfig config;
    std::vector<CellResult> cells; // gamma-major, t_a-minor order
};

/// Per-cell stream base derived from the master seed and the bit patterns of
/// (gamma, t_a); adding, removing, or reordering grid cells never perturbs
/// the randomness of existing cells.
std::uint64_t cell_seed(std::uint64_t master_seed, double gamma, double t_a);

/// The times at which simulate_trajectory fires its recorder for this cell.
std::vector<double> record_times(double t_a, double dt, int record_stride);

/// Run n_trajectories independent trajectories (trajectory_index 0..n-1),
/// measuring kinks and M_z at t = t_a exactly. Trajectories are scheduled in
/// fixed-size batches over `workers` threads and reduced in batch order, so
/// results do not depend on the worker count. Blowups are excluded from the
/// statistics and counted in `failures`.
CellResult run_ensemble(const ExperimentConfig& config, double gamma, double t_a,
                        int workers = 0);

using CellCallback = std::function<void(const CellResult&)>;

/// Iterate the full (gamma, t_a) grid. Completed cells are persisted under
/// <output.directory>/cells immediately; with resume = true, existing cell
/// files with a matching config hash are loaded instead of recomputed.
/// Cell-level failures do not stop the sweep.
RunRecord run_sweep(const ExperimentConfig& config, int workers = 0, bool resume = false,
                    const CellCallback& on_cell = {});

} // namespace svl
