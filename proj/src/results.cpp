#include "svl/results.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "svl/errors.hpp"

namespace svl {
namespace {

using nlohmann::json;

std::string cell_file_name(int gamma_index, int ta_index)
{
    return "cell_g" + std::to_string(gamma_index) + "_t" + std::to_string(ta_index) + ".json";
}

json stats_to_json(const KinkStatistics& s)
{
    json hist = json::array();
    for (const auto& [n, count] : s.histogram) {
        hist.push_back({n, count});
    }
    return {{"t_a", s.t_a},
            {"n_samples", s.n_samples},
            {"mean_density", s.mean_density},
            {"density_err", s.density_err},
            {"kappa", {s.kappa.k1, s.kappa.k2, s.kappa.k3}},
            {"kappa_err", {s.kappa.k1_err, s.kappa.k2_err, s.kappa.k3_err}},
            {"ratio21", s.ratios.r21},
            {"ratio31", s.ratios.r31},
            {"err21", s.ratios.r21_err},
            {"err31", s.ratios.r31_err},
            {"histogram", hist}};
}

KinkStatistics stats_from_json(const json& j)
{
    KinkStatistics s;
    s.t_a = j.at("t_a").get<double>();
    s.n_samples = j.at("n_samples").get<std::int64_t>();
    s.mean_density = j.at("mean_density").get<double>();
    s.density_err = j.at("density_err").get<double>();
    const auto& kappa = j.at("kappa");
    s.kappa.k1 = kappa.at(0).get<double>();
    s.kappa.k2 = kappa.at(1).get<double>();
    s.kappa.k3 = kappa.at(2).get<double>();
    const auto& err = j.at("kappa_err");
    s.kappa.k1_err = err.at(0).get<double>();
    s.kappa.k2_err = err.at(1).get<double>();
    s.kappa.k3_err = err.at(2).get<double>();
    s.ratios.r21 = j.at("ratio21").get<double>();
    s.ratios.r31 = j.at("ratio31").get<double>();
    s.ratios.r21_err = j.at("err21").get<double>();
    s.ratios.r31_err = j.at("err31").get<double>();
    for (const auto& entry : j.at("histogram")) {
        s.histogram[entry.at(0).get<std::int64_t>()] = entry.at(1).get<std::int64_t>();
    }
    return s;
}

json cell_to_json(const CellResult& cell, const std::string& config_hash)
{
    json j{{"config_hash", config_hash},
           {"gamma_index", cell.gamma_index},
           {"ta_index", cell.ta_index},
           {"gamma", cell.gamma},
           {"t_a", cell.t_a},
           {"cell_seed", cell.cell_seed},
           {"failures", cell.failures},
           {"failure_note", cell.failure_note},
           {"wall_seconds", cell.wall_seconds},
           {"mz_final_mean", cell.mz_final_mean},
           {"stats", stats_to_json(cell.stats)}};
    if (cell.series) {
        j["series"] = {{"t", cell.series->t}, {"mz", cell.series->mz},
                       {"kinks", cell.series->kinks}};
    } else {
        j["series"] = nullptr;
    }
    return j;
}

CellResult cell_from_json(const json& j)
{
    CellResult cell;
    cell.gamma_index = j.at("gamma_index").get<int>();
    cell.ta_index = j.at("ta_index").get<int>();
    cell.gamma = j.at("gamma").get<double>();
    cell.t_a = j.at("t_a").get<double>();
    cell.cell_seed = j.at("cell_seed").get<std::uint64_t>();
    cell.failures = j.at("failures").get<std::int64_t>();
    cell.failure_note = j.at("failure_note").get<std::string>();
    cell.wall_seconds = j.at("wall_seconds").get<double>();
    cell.mz_final_mean = j.at("mz_final_mean").get<double>();
    cell.stats = stats_from_json(j.at("stats"));
    if (!j.at("series").is_null()) {
        TimeSeries series;
        series.t = j.at("series").at("t").get<std::vector<double>>();
        series.mz = j.at("series").at("mz").get<std::vector<double>>();
        series.kinks = j.at("series").at("kinks").get<std::vector<double>>();
        cell.series = std::move(series);
    }
    return cell;
}

std::ofstream open_for_write(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

} // namespace

std::string format_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text)
{
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{}) {
        throw IoError("cannot parse '" + text + "' as a number");
    }
    return value;
}

void preflight_output_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    const auto probe = dir / ".write_probe";
    {
        std::ofstream out(probe);
        if (!out) {
            throw IoError("output directory " + dir.string() + " is not writable");
        }
    }
    std::filesystem::remove(probe, ec);
}

void save_cell(const std::filesystem::path& cells_dir, const CellResult& cell,
               const std::string& config_hash)
{
    const auto path = cells_dir / cell_file_name(cell.gamma_index, cell.ta_index);
    const auto tmp = path.string() + ".tmp";
    {
        auto out = open_for_write(tmp);
        out << cell_to_json(cell, config_hash).dump(1) << "\n";
        if (!out.good()) {
            throw IoError("failed while writing " + tmp);
        }
    }
    std::filesystem::rename(tmp, path);
}

std::optional<CellResult> load_cell(const std::filesystem::path& cells_dir, int gamma_index,
                                    int ta_index, const std::string& config_hash)
{
    const auto path = cells_dir / cell_file_name(gamma_index, ta_index);
    std::ifstream in(path);
    if (!in) {
        return std::nullopt;
    }
    try {
        json j = json::parse(in);
        if (j.at("config_hash").get<std::string>() != config_hash) {
            return std::nullopt; // stale cell from a different configuration
        }
        return cell_from_json(j);
    } catch (const json::exception&) {
        return std::nullopt; // partially written file: recompute
    }
}

void emit_results(const RunRecord& record, const std::filesystem::path& dir)
{
    preflight_output_dir(dir);

    {
        auto out = open_for_write(dir / "config.json");
        out << record.config.serialize();
    }

    if (record.config.output.csv) {
        auto out = open_for_write(dir / "results.csv");
        out << kResultsCsvHeader << "\n";
        for (const auto& cell : record.cells) {
            const auto& s = cell.stats;
            out << format_double(cell.gamma) << ',' << format_double(cell.t_a) << ','
                << s.n_samples << ',' << record.config.ensemble.master_seed << ','
                << format_double(s.kappa.k1) << ',' << format_double(s.kappa.k2) << ','
                << format_double(s.kappa.k3) << ',' << format_double(s.ratios.r21) << ','
                << format_double(s.ratios.r31) << ',' << format_double(s.ratios.r21_err) << ','
                << format_double(s.ratios.r31_err) << ',' << format_double(s.mean_density) << ','
                << format_double(s.density_err) << "\n";
        }
        if (!out.good()) {
            throw IoError("failed while writing results.csv");
        }

        for (const auto& cell : record.cells) {
            {
                auto hist = open_for_write(
                    dir / ("hist_g" + std::to_string(cell.gamma_index) + "_t"
                           + std::to_string(cell.ta_index) + ".csv"));
                hist << "n,count\n";
                for (const auto& [n, count] : cell.stats.histogram) {
                    hist << n << ',' << count << "\n";
                }
            }
            if (cell.series) {
                auto series = open_for_write(
                    dir / ("series_g" + std::to_string(cell.gamma_index) + "_t"
                           + std::to_string(cell.ta_index) + ".csv"));
                series << "t,mz_mean,kinks_mean\n";
                for (std::size_t i = 0; i < cell.series->t.size(); ++i) {
                    series << format_double(cell.series->t[i]) << ','
                           << format_double(cell.series->mz[i]) << ','
                           << format_double(cell.series->kinks[i]) << "\n";
                }
            }
        }
    }

    if (record.config.output.json) {
        json cells = json::array();
        for (const auto& cell : record.cells) {
            cells.push_back(cell_to_json(cell, record.config_hash));
        }
        const json mirror{{"config_hash", record.config_hash},
                          {"config", json::parse(record.config.serialize())},
                          {"master_seed", record.config.ensemble.master_seed},
                          {"cells", cells}};
        auto out = open_for_write(dir / "results.json");
        out << mirror.dump(1) << "\n";
        if (!out.good()) {
            throw IoError("failed while writing results.json");
        }
    }
}

std::vector<ResultRow> load_results_csv(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in) {
        throw IoError("cannot open " + file.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != kResultsCsvHeader) {
        throw IoError("unexpected results.csv header in " + file.string());
    }
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        if (fields.size() != 13) {
            throw IoError("malformed results row: " + line);
        }
        ResultRow row;
        row.gamma = parse_double(fields[0]);
        row.t_a = parse_double(fields[1]);
        row.n_traj = static_cast<std::int64_t>(std::stoll(fields[2]));
        row.seed = static_cast<std::uint64_t>(std::stoull(fields[3]));
        row.kappa1 = parse_double(fields[4]);
        row.kappa2 = parse_double(fields[5]);
        row.kappa3 = parse_double(fields[6]);
        row.ratio21 = parse_double(fields[7]);
        row.ratio31 = parse_double(fields[8]);
        row.err21 = parse_double(fields[9]);
        row.err31 = parse_double(fields[10]);
        row.density = parse_double(fields[11]);
        row.density_err = parse_double(fields[12]);
        rows.push_back(row);
    }
    return rows;
}

} // namespace svl
