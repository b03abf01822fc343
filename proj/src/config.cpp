#include "svl/config.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "svl/errors.hpp"

namespace svl {
namespace {

using nlohmann::json;

std::string boundary_name(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

Boundary boundary_from(const std::string& name)
{
    if (name == "open") {
        return Boundary::open;
    }
    if (name == "periodic") {
        return Boundary::periodic;
    }
    throw ConfigError("unknown boundary '" + name + "' (expected open|periodic)");
}

std::string form_name(ScheduleForm f) { return f == ScheduleForm::linear ? "linear" : "tabulated"; }

ScheduleForm form_from(const std::string& name)
{
    if (name == "linear") {
        return ScheduleForm::linear;
    }
    if (name == "tabulated") {
        return ScheduleForm::tabulated;
    }
    throw ConfigError("unknown schedule form '" + name + "' (expected linear|tabulated)");
}

std::string init_name(InitStrategy s)
{
    switch (s) {
    case InitStrategy::cold:
        return "cold";
    case InitStrategy::thermal:
        return "thermal";
    case InitStrategy::burn_in:
        return "burn_in";
    }
    return "thermal";
}

InitStrategy init_from(const std::string& name)
{
    if (name == "cold") {
        return InitStrategy::cold;
    }
    if (name == "thermal") {
        return InitStrategy::thermal;
    }
    if (name == "burn_in") {
        return InitStrategy::burn_in;
    }
    throw ConfigError("unknown init strategy '" + name + "' (expected cold|thermal|burn_in)");
}

} // namespace

void ExperimentConfig::validate() const
{
    if (problem.n < 2) {
        throw ConfigError("problem.n must be >= 2");
    }
    if (problem.boundary == Boundary::periodic && problem.n < 3) {
        throw ConfigError("periodic chains need n >= 3");
    }
    if (!(bath.mass > 0.0)) {
        throw ConfigError("bath.mass must be positive");
    }
    if (!(bath.temperature >= 0.0)) {
        throw ConfigError("bath.temperature must be nonnegative");
    }
    if (bath.gammas.empty()) {
        throw ConfigError("bath.gammas must not be empty");
    }
    for (double g : bath.gammas) {
        if (!(g >= 0.0)) {
            throw ConfigError("damping constants must be nonnegative");
        }
        if (g == 0.0 && bath.temperature > 0.0) {
            throw ConfigError("gamma = 0 with T > 0 violates fluctuation-dissipation");
        }
    }
    if (sweep.t_a.empty()) {
        throw ConfigError("sweep.t_a must not be empty");
    }
    for (std::size_t i = 0; i < sweep.t_a.size(); ++i) {
        if (!(sweep.t_a[i] > 0.0)) {
            throw ConfigError("annealing times must be positive");
        }
        if (i > 0 && !(sweep.t_a[i] > sweep.t_a[i - 1])) {
            throw ConfigError("sweep.t_a must be strictly increasing");
        }
    }
    if (ensemble.n_trajectories < 100) {
        throw ConfigError("statistics runs need at least 100 trajectories");
    }
    if (ensemble.n_trajectories < 1000) {
        std::cerr << "warning: fewer than 10^3 trajectories; cumulant ratios will be noisy\n";
    }
    if (integration.dt < 0.0) {
        throw ConfigError("integration.dt must be positive (or 0 for the default policy)");
    }
    if (integration.dt > 0.0 && integration.dt > sweep.t_a.front()) {
        throw ConfigError("integration.dt exceeds the shortest annealing time");
    }
    if (integration.record_stride < 1) {
        throw ConfigError("integration.record_stride must be >= 1");
    }
    if (ensemble.init == InitStrategy::burn_in && !(ensemble.burn_in_time > 0.0)) {
        throw ConfigError("burn_in_time must be positive for burn_in initialization");
    }
    if (sweep.t_a.size() >= 2) {
        const double decades = std::log10(sweep.t_a.back() / sweep.t_a.front());
        if (decades > 0.0) {
            const double per_decade = static_cast<double>(sweep.t_a.size() - 1) / decades;
            if (per_decade < 4.0) {
                std::cerr << "warning: t_a grid has fewer than 4 points per decade; "
                             "scaling fits will be weak\n";
            }
        }
    }
    // Construction-level checks (tabulated boundary conditions, chain size).
    make_schedule(sweep.t_a.front());
    make_problem();
}

std::string ExperimentConfig::serialize() const
{
    json table = json::array();
    for (const auto& row : schedule.table) {
        table.push_back({{"s", row.s}, {"a", row.a}, {"b", row.b}});
    }
    const json j{
        {"problem",
         {{"n", problem.n},
          {"coupling", problem.coupling},
          {"field", problem.field},
          {"boundary", boundary_name(problem.boundary)}}},
        {"schedule", {{"form", form_name(schedule.form)}, {"table", table}}},
        {"bath",
         {{"gammas", bath.gammas},
          {"temperature", bath.temperature},
          {"mass", bath.mass}}},
        {"integration",
         {{"dt", integration.dt},
          {"record_stride", integration.record_stride},
          {"record_series", integration.record_series}}},
        {"ensemble",
         {{"n_trajectories", ensemble.n_trajectories},
          {"master_seed", ensemble.master_seed},
          {"init", init_name(ensemble.init)},
          {"burn_in_time", ensemble.burn_in_time}}},
        {"sweep", {{"t_a", sweep.t_a}}},
        {"output",
         {{"directory", output.directory}, {"csv", output.csv}, {"json", output.json}}},
    };
    return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::parse(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c;
    try {
        if (j.contains("problem")) {
            const auto& p = j.at("problem");
            c.problem.n = p.value("n", c.problem.n);
            c.problem.coupling = p.value("coupling", c.problem.coupling);
            c.problem.field = p.value("field", c.problem.field);
            if (p.contains("boundary")) {
                c.problem.boundary = boundary_from(p.at("boundary").get<std::string>());
            }
        }
        if (j.contains("schedule")) {
            const auto& s = j.at("schedule");
            if (s.contains("form")) {
                c.schedule.form = form_from(s.at("form").get<std::string>());
            }
            if (s.contains("table")) {
                for (const auto& row : s.at("table")) {
                    c.schedule.table.push_back({row.at("s").get<double>(),
                                                row.at("a").get<double>(),
                                                row.at("b").get<double>()});
                }
            }
        }
        if (j.contains("bath")) {
            const auto& b = j.at("bath");
            if (b.contains("gammas")) {
                c.bath.gammas = b.at("gammas").get<std::vector<double>>();
            }
            c.bath.temperature = b.value("temperature", c.bath.temperature);
            c.bath.mass = b.value("mass", c.bath.mass);
        }
        if (j.contains("integration")) {
            const auto& i = j.at("integration");
            c.integration.dt = i.value("dt", c.integration.dt);
            c.integration.record_stride = i.value("record_stride", c.integration.record_stride);
            c.integration.record_series = i.value("record_series", c.integration.record_series);
        }
        if (j.contains("ensemble")) {
            const auto& e = j.at("ensemble");
            c.ensemble.n_trajectories = e.value("n_trajectories", c.ensemble.n_trajectories);
            c.ensemble.master_seed = e.value("master_seed", c.ensemble.master_seed);
            if (e.contains("init")) {
                c.ensemble.init = init_from(e.at("init").get<std::string>());
            }
            c.ensemble.burn_in_time = e.value("burn_in_time", c.ensemble.burn_in_time);
        }
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            if (s.contains("t_a")) {
                c.sweep.t_a = s.at("t_a").get<std::vector<double>>();
            }
        }
        if (j.contains("output")) {
            const auto& o = j.at("output");
            c.output.directory = o.value("directory", c.output.directory);
            c.output.csv = o.value("csv", c.output.csv);
            c.output.json = o.value("json", c.output.json);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config field: ") + e.what());
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::string ExperimentConfig::hash() const
{
    const std::string text = serialize();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

IsingProblem ExperimentConfig::make_problem() const
{
    if (problem.field == 0.0) {
        return IsingProblem::uniform_chain(problem.n, problem.coupling, problem.boundary);
    }
    std::vector<Edge> edges;
    for (std::int32_t i = 0; i + 1 < problem.n; ++i) {
        edges.push_back({i, i + 1, problem.coupling});
    }
    if (problem.boundary == Boundary::periodic) {
        edges.push_back({problem.n - 1, 0, problem.coupling});
    }
    return IsingProblem(problem.n, std::move(edges),
                        std::vector<double>(static_cast<std::size_t>(problem.n), problem.field),
                        problem.boundary);
}

AnnealSchedule ExperimentConfig::make_schedule(double t_a) const
{
    if (schedule.form == ScheduleForm::linear) {
        return AnnealSchedule::linear(t_a);
    }
    return AnnealSchedule::tabulated(t_a, schedule.table);
}

double ExperimentConfig::dt_for(double t_a) const
{
    return integration.dt > 0.0 ? integration.dt : IntegrationParams::default_dt(t_a);
}

} // namespace svl
