// svl: spin-vector Langevin annealing toolkit.
//
// Subcommands:
//   run          execute a (gamma, t_a) sweep from a config file
//   fit          power-law analysis of a result directory
//   equilibrium  transfer-matrix xi/mz tables
//   validate     fast invariant suite
//
// Exit codes: 0 success, 1 config error, 2 numerical failure, 3 I/O error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>

#include <CLI11.hpp>
#include <json.hpp>

#include "svl/analysis.hpp"
#include "svl/ensemble.hpp"
#include "svl/equilibrium.hpp"
#include "svl/errors.hpp"
#include "svl/model.hpp"
#include "svl/results.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<std::string> out, std::optional<double> dt, int workers, bool resume)
{
    svl::ExperimentConfig config = svl::ExperimentConfig::load(config_path);
    if (seed) {
        config.ensemble.master_seed = *seed;
    }
    if (out) {
        config.output.directory = *out;
    }
    if (dt) {
        config.integration.dt = *dt;
    }
    config.validate();

    const std::size_t total = config.bath.gammas.size() * config.sweep.t_a.size();
    std::size_t done = 0;
    const auto record = svl::run_sweep(config, workers, resume, [&](const svl::CellResult& cell) {
        ++done;
        std::cerr << "[" << done << "/" << total << "] gamma=" << cell.gamma
                  << " t_a=" << cell.t_a << " density=" << cell.stats.mean_density
                  << (cell.valid() ? "" : "  FAILED") << " (" << cell.wall_seconds << " s)\n";
    });
    svl::emit_results(record, config.output.directory);

    std::size_t failed = 0;
    for (const auto& cell : record.cells) {
        if (!cell.valid()) {
            ++failed;
            std::cerr << "invalid cell gamma=" << cell.gamma << " t_a=" << cell.t_a << ": "
                      << cell.failure_note << "\n";
        }
    }
    std::cout << "wrote " << record.cells.size() << " cells to " << config.output.directory
              << "\n";
    return failed == 0 ? 0 : 2;
}

int cmd_fit(const std::string& dir, std::optional<double> window_min,
            std::optional<double> window_max)
{
    const auto rows = svl::load_results_csv(fs::path(dir) / "results.csv");
    if (rows.empty()) {
        throw svl::NumericalError("no result rows to fit");
    }

    std::map<double, std::vector<svl::DensityPoint>> by_gamma;
    for (const auto& row : rows) {
        by_gamma[row.gamma].push_back({row.t_a, row.density});
    }

    std::map<double, svl::PowerLawFit> fits;
    for (const auto& [gamma, points] : by_gamma) {
        double lo, hi;
        if (window_min && window_max) {
            lo = *window_min;
            hi = *window_max;
        } else {
            const auto window = svl::select_scaling_window(points);
            lo = window.t_min;
            hi = window.t_max;
        }
        fits[gamma] = svl::fit_power_law(points, lo, hi);
    }

    json summary = json::array();
    for (const auto& [gamma, fit] : fits) {
        summary.push_back({{"gamma", gamma},
                           {"alpha", fit.exponent},
                           {"stderr", fit.stderr_},
                           {"window_min", fit.window_min},
                           {"window_max", fit.window_max},
                           {"n_points", fit.n_points},
                           {"r_squared", fit.r_squared}});
        std::printf("gamma=%-8g alpha=%.4f +/- %.4f  window=[%g, %g]  n=%d  R2=%.5f%s\n", gamma,
                    fit.exponent, fit.stderr_, fit.window_min, fit.window_max, fit.n_points,
                    fit.r_squared, fit.curvature_flag ? "  [curvature]" : "");
    }

    if (fits.size() > 1) {
        const auto table = svl::alpha_vs_gamma_curve(fits);
        std::printf("monotone within errors: %s; all in [0.20, 0.38]: %s\n",
                    table.monotone_within_errors ? "yes" : "NO",
                    table.all_in_band ? "yes" : "NO");
    }

    std::ofstream out(fs::path(dir) / "fit_summary.json");
    if (!out) {
        throw svl::IoError("cannot write fit_summary.json");
    }
    out << summary.dump(1) << "\n";
    return 0;
}

int cmd_equilibrium(const std::string& out_dir, std::vector<double> betas, double eps_min,
                    double eps_max, int eps_count, const std::string& method, int grid)
{
    if (betas.empty()) {
        betas = {1000.0};
    }
    svl::preflight_output_dir(out_dir);
    std::ofstream out(fs::path(out_dir) / "equilibrium.csv");
    if (!out) {
        throw svl::IoError("cannot write equilibrium.csv");
    }
    out << "epsilon,beta,xi,mz,lambda0,lambda1,method\n";

    const bool want_numeric = method == "numeric" || method == "both";
    const bool want_gaussian = method == "gaussian" || method == "both";

    for (const double beta : betas) {
        const int m = grid > 0 ? grid : svl::default_grid_size(beta);
        // log(lambda) is recorded instead of lambda once beta reaches 10^3
        // (raw eigenvalues overflow the double range there).
        const bool log_scale = beta >= 1000.0;
        for (int k = 0; k < eps_count; ++k) {
            const double eps_val =
                eps_count == 1
                    ? eps_min
                    : eps_min + (eps_max - eps_min) * static_cast<double>(k)
                          / static_cast<double>(eps_count - 1);
            const svl::EpsilonParam eps(eps_val);
            if (want_numeric) {
                const auto spectrum = svl::leading_spectrum(svl::build_kernel(eps, beta, m));
                const double l0 = log_scale ? spectrum.log_lambda0 : spectrum.lambda0();
                const double l1 = log_scale ? spectrum.log_lambda1 : spectrum.lambda1();
                out << svl::format_double(eps_val) << ',' << svl::format_double(beta) << ','
                    << svl::format_double(spectrum.xi) << ',' << svl::format_double(spectrum.mz)
                    << ',' << svl::format_double(l0) << ',' << svl::format_double(l1)
                    << ",numeric\n";
            }
            if (want_gaussian && beta >= 100.0 && eps_val < 1.0) {
                const auto analytic = svl::gaussian_spectrum(eps, beta);
                const double log_l1 = analytic.log_lambda0 - 1.0 / analytic.xi;
                const double l0 = log_scale ? analytic.log_lambda0 : std::exp(analytic.log_lambda0);
                const double l1 = log_scale ? log_l1 : std::exp(log_l1);
                const double mz = std::abs(std::sin(analytic.theta0));
                out << svl::format_double(eps_val) << ',' << svl::format_double(beta) << ','
                    << svl::format_double(analytic.xi) << ',' << svl::format_double(mz) << ','
                    << svl::format_double(l0) << ',' << svl::format_double(l1) << ",gaussian\n";
            }
        }
    }
    if (!out.good()) {
        throw svl::IoError("failed while writing equilibrium.csv");
    }
    std::cout << "wrote equilibrium.csv\n";
    return 0;
}

int cmd_validate()
{
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::printf("%s  %-38s %s\n", ok ? "[PASS]" : "[FAIL]", name.c_str(), detail.c_str());
        if (!ok) {
            ++failures;
        }
    };
    char detail[160];

    { // gradient vs central finite differences
        std::mt19937 rng(1);
        std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const auto problem = svl::IsingProblem::uniform_chain(8, 1.0, svl::Boundary::open);
            svl::PhaseSpaceState state(std::vector<double>(8), std::vector<double>(8, 0.0));
            for (auto& th : state.theta) {
                th = angle(rng);
            }
            const auto grad = svl::gradient(state, problem, 0.4, 1.1);
            for (int i = 0; i < 8; ++i) {
                auto plus = state;
                auto minus = state;
                plus.theta[static_cast<std::size_t>(i)] += 1e-5;
                minus.theta[static_cast<std::size_t>(i)] -= 1e-5;
                const double fd = (svl::energy(plus, problem, 0.4, 1.1)
                                   - svl::energy(minus, problem, 0.4, 1.1))
                                  / 2e-5;
                worst = std::max(worst,
                                 std::abs(grad[static_cast<std::size_t>(i)] - fd)
                                     / std::max(1.0, std::abs(fd)));
            }
        }
        std::snprintf(detail, sizeof(detail), "max rel err %.2e (tol 1e-6)", worst);
        report("gradient vs finite differences", worst < 1e-6, detail);
    }

    { // determinism and worker independence
        svl::ExperimentConfig config;
        config.problem.n = 16;
        config.bath.gammas = {1.0};
        config.bath.temperature = 0.2;
        config.sweep.t_a = {2.0};
        config.ensemble.n_trajectories = 128;
        const auto a = svl::run_ensemble(config, 1.0, 2.0, 1);
        const auto b = svl::run_ensemble(config, 1.0, 2.0, 4);
        const bool ok = a.stats.kappa.k1 == b.stats.kappa.k1
                        && a.stats.histogram == b.stats.histogram
                        && a.mz_final_mean == b.mz_final_mean && a.failures == 0;
        std::snprintf(detail, sizeof(detail), "kappa1 %.6f (1 vs 4 workers, exact)",
                      a.stats.kappa.k1);
        report("seeded determinism across workers", ok, detail);
    }

    { // equipartition under fluctuation-dissipation
        const auto problem = svl::IsingProblem::uniform_chain(16, 1.0, svl::Boundary::open);
        const svl::BathParams bath(1.0, 0.2, 1.0);
        const svl::FrozenSchedule schedule(1.0, 0.0, 2000.0);
        double sum_p2 = 0.0;
        std::int64_t count = 0;
        svl::NoiseStream noise(11, 0);
        auto init = svl::initialize_state(problem, bath, svl::InitStrategy::thermal, noise);
        svl::simulate_trajectory(std::move(init), problem, schedule, bath,
                                 svl::IntegrationParams(0.01, 10), noise,
                                 [&](double t, const svl::PhaseSpaceState& s) {
                                     if (t < 200.0) {
                                         return;
                                     }
                                     for (double p : s.p) {
                                         sum_p2 += p * p;
                                         ++count;
                                     }
                                 });
        const double mean = sum_p2 / static_cast<double>(count);
        std::snprintf(detail, sizeof(detail), "<p^2>/m = %.4f vs T = 0.2 (tol 5%%)", mean);
        report("equipartition", std::abs(mean - 0.2) < 0.01, detail);
    }

    { // weak order two on the linear SDE (deterministic moment recursion)
        const double a = 1.0, sigma = 0.8, x0 = 1.5;
        std::vector<double> lx, ly;
        for (const double dt : {0.2, 0.1, 0.05, 0.025}) {
            const double phi = 1.0 - a * dt + 0.5 * a * a * dt * dt;
            double second = x0 * x0;
            const int steps = static_cast<int>(std::lround(1.0 / dt));
            for (int k = 0; k < steps; ++k) {
                second = phi * phi * second
                         + (1.0 - 0.5 * a * dt) * (1.0 - 0.5 * a * dt) * sigma * sigma * dt;
            }
            const double exact = x0 * x0 * std::exp(-2.0) + sigma * sigma / 2.0 * (1.0 - std::exp(-2.0));
            lx.push_back(std::log(dt));
            ly.push_back(std::log(std::abs(second - exact)));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += ly[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * ly[i];
        }
        const double n = static_cast<double>(lx.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        std::snprintf(detail, sizeof(detail), "slope %.3f (want 2.0 +/- 0.3)", slope);
        report("weak order of the SDE scheme", std::abs(slope - 2.0) < 0.3, detail);
    }

    { // transfer-matrix quadrature convergence
        const auto coarse =
            svl::leading_spectrum(svl::build_kernel(svl::EpsilonParam(-0.1), 20.0, 256));
        const auto fine =
            svl::leading_spectrum(svl::build_kernel(svl::EpsilonParam(-0.1), 20.0, 512));
        const double rel = std::abs(coarse.log_lambda0 - fine.log_lambda0)
                           / std::abs(fine.log_lambda0);
        std::snprintf(detail, sizeof(detail), "lambda0 shift %.2e (tol 1e-10)", rel);
        report("kernel grid convergence", rel < 1e-10, detail);
    }

    { // gaussian vs numerical correlation length
        const auto analytic = svl::gaussian_spectrum(svl::EpsilonParam(-0.5), 1000.0);
        const auto numeric = svl::leading_spectrum(
            svl::build_kernel(svl::EpsilonParam(-0.5), 1000.0, svl::default_grid_size(1000.0)));
        const double rel = std::abs(analytic.xi - numeric.xi) / numeric.xi;
        std::snprintf(detail, sizeof(detail), "xi rel diff %.3e (tol 2e-2)", rel);
        report("gaussian vs numerical spectrum", rel < 0.02, detail);
    }

    { // KZM exponent algebra
        const bool ok = std::abs(svl::kzm_alpha(1, 0.5, 2.0) - 0.25) < 1e-15
                        && std::abs(svl::kzm_alpha(1, 0.5, 1.0) - 1.0 / 3.0) < 1e-15;
        report("KZM exponent algebra", ok, "alpha(1,1/2,2)=1/4, alpha(1,1/2,1)=1/3");
    }

    std::printf("%d check(s) failed\n", failures);
    return failures == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"spin-vector Langevin annealing toolkit"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "execute a sweep from a config file");
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<double> dt_override;
    int workers = 0;
    bool resume = false;
    run->add_option("--config", config_path, "config file (JSON)")->required();
    run->add_option("--seed", seed, "override ensemble.master_seed");
    run->add_option("--out", out, "override output.directory");
    run->add_option("--dt", dt_override, "override integration.dt");
    run->add_option("--workers", workers, "worker threads (default: all cores)");
    run->add_flag("--resume", resume, "reuse completed cells from a previous run");

    // fit
    auto* fit = app.add_subcommand("fit", "fit kink-density power laws in a result directory");
    std::string fit_dir;
    std::optional<double> window_min, window_max;
    fit->add_option("--out", fit_dir, "result directory containing results.csv")->required();
    fit->add_option("--window-min", window_min, "fit window lower edge (t_a)");
    fit->add_option("--window-max", window_max, "fit window upper edge (t_a)");

    // equilibrium
    auto* eq = app.add_subcommand("equilibrium", "transfer-matrix xi and mz tables");
    std::string eq_dir = "out";
    std::vector<double> betas;
    double eps_min = -0.9, eps_max = 0.9;
    int eps_count = 181, grid = 0;
    std::string method = "both";
    eq->add_option("--out", eq_dir, "output directory");
    eq->add_option("--beta", betas, "inverse temperatures (repeatable)");
    eq->add_option("--eps-min", eps_min, "epsilon grid start");
    eq->add_option("--eps-max", eps_max, "epsilon grid end");
    eq->add_option("--eps-count", eps_count, "epsilon grid size");
    eq->add_option("--grid", grid, "kernel grid size (default: policy)");
    eq->add_option("--method", method, "numeric|gaussian|both")
        ->check(CLI::IsMember({"numeric", "gaussian", "both"}));

    // validate
    auto* validate = app.add_subcommand("validate", "run the fast invariant suite");

    try {
        app.parse(argc, argv);
        if (run->parsed()) {
            return cmd_run(config_path, seed, out, dt_override, workers, resume);
        }
        if (fit->parsed()) {
            return cmd_fit(fit_dir, window_min, window_max);
        }
        if (eq->parsed()) {
            return cmd_equilibrium(eq_dir, betas, eps_min, eps_max, eps_count, method, grid);
        }
        if (validate->parsed()) {
            return cmd_validate();
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const svl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const svl::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const svl::IntegrationError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const svl::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
