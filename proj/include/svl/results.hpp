#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "svl/ensemble.hpp"

namespace svl {

/// Shortest round-trip decimal encoding of a double.
std::string format_double(double value);
double parse_double(const std::string& text);

/// One parsed row of results.csv.
struct ResultRow {
    double gamma = 0.0;
    double t_a = 0.0;
    std::int64_t n_traj = 0;
    std::uint64_t seed = 0;
    double kappa1 = 0.0, kappa2 = 0.0, kappa3 = 0.0;
    double ratio21 = 0.0, ratio31 = 0.0;
    double err21 = 0.0, err31 = 0.0;
    double density = 0.0, density_err = 0.0;
};

inline constexpr const char* kResultsCsvHeader =
    "gamma,t_a,n_traj,seed,kappa1,kappa2,kappa3,ratio21,ratio31,err21,err31,density,density_err";

/// Write results.csv (exact header above), per-cell histogram files
/// (hist_g<i>_t<j>.csv, header "n,count"), per-cell time series
/// (series_g<i>_t<j>.csv, header "t,mz_mean,kinks_mean"), a JSON mirror of
/// everything (results.json) and the resolved config echo (config.json).
/// Throws IoError before any computation if the directory is unwritable.
void emit_results(const RunRecord& record, const std::filesystem::path& dir);

std::vector<ResultRow> load_results_csv(const std::filesystem::path& file);

/// Incremental per-cell persistence (crash-safe resume).
void save_cell(const std::filesystem::path& cells_dir, const CellResult& cell,
               const std::string& config_hash);
std::optional<CellResult> load_cell(const std::filesystem::path& cells_dir, int gamma_index,
                                    int ta_index, const std::string& config_hash);

/// Probe that `dir` exists (creating it if needed) and is writable.
void preflight_output_dir(const std::filesystem::path& dir);

} // namespace svl
