#include "svl/ensemble.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <thread>

#include "svl/errors.hpp"
#include "svl/integrator.hpp"
#include "svl/results.hpp"

namespace svl {
namespace {

// Trajectories are scheduled in fixed-size batches regardless of worker
// count; reducing batch results in batch order keeps ensemble statistics
// bit-identical for any parallelism.
constexpr int kBatchSize = 16;

struct BatchResult {
    KinkAccumulator acc;
    std::vector<double> mz_sum;
    std::vector<double> kink_sum;
    std::int64_t failures = 0;
    std::string note;
};

} // namespace

std::uint64_t cell_seed(std::uint64_t master_seed, double gamma, double t_a)
{
    const std::uint64_t with_gamma =
        NoiseStream::derive_key(master_seed, std::bit_cast<std::uint64_t>(gamma));
    return NoiseStream::derive_key(with_gamma, std::bit_cast<std::uint64_t>(t_a));
}

std::vector<double> record_times(double t_a, double dt, int record_stride)
{
    std::vector<double> times{0.0};
    std::int64_t step = 0;
    double t = 0.0;
    while (t < t_a) {
        const double remaining = t_a - t;
        const bool last = remaining <= dt * (1.0 + 1e-9);
        ++step;
        t = last ? t_a : static_cast<double>(step) * dt;
        if (last || step % record_stride == 0) {
            times.push_back(t);
        }
    }
    return times;
}

CellResult run_ensemble(const ExperimentConfig& config, double gamma, double t_a, int workers)
{
    const auto wall_start = std::chrono::steady_clock::now();
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        workers = std::max(workers, 1);
    }

    const IsingProblem problem = config.make_problem();
    const AnnealSchedule schedule = config.make_schedule(t_a);
    const BathParams bath(gamma, config.bath.temperature, config.bath.mass);
    const double dt = config.dt_for(t_a);
    const IntegrationParams params(dt, config.integration.record_stride);
    const BurnInParams burn{config.ensemble.burn_in_time, dt};
    const bool series_on = config.integration.record_series;
    const std::vector<double> times =
        series_on ? record_times(t_a, dt, params.record_stride) : std::vector<double>{};

    const std::uint64_t seed = cell_seed(config.ensemble.master_seed, gamma, t_a);
    const int n_traj = config.ensemble.n_trajectories;
    const int n_batches = (n_traj + kBatchSize - 1) / kBatchSize;

    std::vector<BatchResult> batches(static_cast<std::size_t>(n_batches));
    std::atomic<int> next_batch{0};

    auto worker_fn = [&]() {
        std::vector<double> traj_mz;
        std::vector<double> traj_kinks;
        while (true) {
            const int b = next_batch.fetch_add(1, std::memory_order_relaxed);
            if (b >= n_batches) {
                return;
            }
            BatchResult& out = batches[static_cast<std::size_t>(b)];
            if (series_on) {
                out.mz_sum.assign(times.size(), 0.0);
                out.kink_sum.assign(times.size(), 0.0);
            }
            const int lo = b * kBatchSize;
            const int hi = std::min(n_traj, lo + kBatchSize);
            for (int traj = lo; traj < hi; ++traj) {
                NoiseStream noise(seed, static_cast<std::uint64_t>(traj));
                try {
                    PhaseSpaceState state =
                        initialize_state(problem, bath, config.ensemble.init, noise, burn);
                    Recorder recorder;
                    if (series_on) {
                        traj_mz.clear();
                        traj_kinks.clear();
                        recorder = [&](double, const PhaseSpaceState& s) {
                            traj_mz.push_back(order_parameter(s.theta));
                            traj_kinks.push_back(
                                static_cast<double>(count_kinks(s.theta, problem.boundary())));
                        };
                    }
                    PhaseSpaceState final_state = simulate_trajectory(
                        std::move(state), problem, schedule, bath, params, noise, recorder);
                    out.acc.add(count_kinks(final_state.theta, problem.boundary()),
                                order_parameter(final_state.theta));
                    if (series_on) {
                        for (std::size_t s = 0; s < times.size(); ++s) {
                            out.mz_sum[s] += traj_mz[s];
                            out.kink_sum[s] += traj_kinks[s];
                        }
                    }
                } catch (const IntegrationError& e) {
                    ++out.failures;
                    if (out.note.empty()) {
                        out.note = "trajectory " + std::to_string(traj) + " blew up at step "
                                   + std::to_string(e.step()) + " (t = " + std::to_string(e.time())
                                   + ")";
                    }
                }
            }
        }
    };

    if (workers == 1) {
        worker_fn();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(worker_fn);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    CellResult cell;
    cell.gamma = gamma;
    cell.t_a = t_a;
    cell.cell_seed = seed;

    KinkAccumulator acc;
    std::vector<double> mz_sum(times.size(), 0.0);
    std::vector<double> kink_sum(times.size(), 0.0);
    for (const auto& batch : batches) {
        acc.merge(batch.acc);
        cell.failures += batch.failures;
        if (cell.failure_note.empty() && !batch.note.empty()) {
            cell.failure_note = batch.note;
        }
        if (series_on) {
            for (std::size_t s = 0; s < times.size(); ++s) {
                mz_sum[s] += batch.mz_sum[s];
                kink_sum[s] += batch.kink_sum[s];
            }
        }
    }

    if (acc.count() >= 3) {
        cell.stats = make_kink_statistics(t_a, acc.samples(), problem.bond_count());
        cell.mz_final_mean = acc.mz_mean();
    } else if (cell.failure_note.empty()) {
        ++cell.failures;
        cell.failure_note = "fewer than three surviving trajectories";
    }

    if (series_on && acc.count() > 0) {
        TimeSeries series;
        series.t = times;
        series.mz.resize(times.size());
        series.kinks.resize(times.size());
        const double inv = 1.0 / static_cast<double>(acc.count());
        for (std::size_t s = 0; s < times.size(); ++s) {
            series.mz[s] = mz_sum[s] * inv;
            series.kinks[s] = kink_sum[s] * inv;
        }
        cell.series = std::move(series);
    }

    cell.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return cell;
}

RunRecord run_sweep(const ExperimentConfig& config, int workers, bool resume,
                    const CellCallback& on_cell)
{
    config.validate();
    const std::filesystem::path out_dir(config.output.directory);
    preflight_output_dir(out_dir);
    const std::filesystem::path cells_dir = out_dir / "cells";
    preflight_output_dir(cells_dir);

    RunRecord record;
    record.config_hash = config.hash();
    record.config = config;

    for (std::size_t gi = 0; gi < config.bath.gammas.size(); ++gi) {
        for (std::size_t ti = 0; ti < config.sweep.t_a.size(); ++ti) {
            const int gamma_index = static_cast<int>(gi);
            const int ta_index = static_cast<int>(ti);
            if (resume) {
                auto loaded = load_cell(cells_dir, gamma_index, ta_index, record.config_hash);
                if (loaded) {
                    record.cells.push_back(std::move(*loaded));
                    if (on_cell) {
                        on_cell(record.cells.back());
                    }
                    continue;
                }
            }
            CellResult cell =
                run_ensemble(config, config.bath.gammas[gi], config.sweep.t_a[ti], workers);
            cell.gamma_index = gamma_index;
            cell.ta_index = ta_index;
            save_cell(cells_dir, cell, record.config_hash);
            record.cells.push_back(std::move(cell));
            if (on_cell) {
                on_cell(record.cells.back());
            }
        }
    }
    return record;
}

} // namespace svl
