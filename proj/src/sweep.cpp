#include "wehsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "wehsim/rng.hpp"

namespace wehsim {

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::consume_probability: return "consume_probability";
        case SweepAxis::n_actors: return "n_actors";
        case SweepAxis::n_eps: return "n_eps";
        case SweepAxis::min_required_power_dbm: return "min_required_power_dbm";
        case SweepAxis::frequency_hz: return "frequency_hz";
        case SweepAxis::area_m2: return "area_m2";
        case SweepAxis::region_side_m: return "region_side_m";
    }
    return "unknown";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "consume_probability") return SweepAxis::consume_probability;
    if (s == "n_actors") return SweepAxis::n_actors;
    if (s == "n_eps") return SweepAxis::n_eps;
    if (s == "min_required_power_dbm") return SweepAxis::min_required_power_dbm;
    if (s == "frequency_hz") return SweepAxis::frequency_hz;
    if (s == "area_m2") return SweepAxis::area_m2;
    if (s == "region_side_m") return SweepAxis::region_side_m;
    throw std::invalid_argument("unknown sweep axis: " + s);
}

SampleStats compute_stats(std::span<const double> samples) {
    SampleStats st;
    st.n = static_cast<int>(samples.size());
    if (st.n == 0) return st;
    double sum = 0.0;
    for (double v : samples) sum += v;
    st.mean = sum / st.n;
    if (st.n > 1) {
        double sq = 0.0;
        for (double v : samples) sq += (v - st.mean) * (v - st.mean);
        st.stddev = std::sqrt(sq / (st.n - 1));
    }
    return st;
}

namespace {

void apply_axis(ScenarioConfig& c, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::consume_probability:
            c.consume_probability = value;
            break;
        case SweepAxis::n_actors:
            c.n_actors = static_cast<int>(std::llround(value));
            break;
        case SweepAxis::n_eps:
            c.n_eps = static_cast<int>(std::llround(value));
            c.ep_positions.clear();
            break;
        case SweepAxis::min_required_power_dbm:
            c.min_required_power_dbm = value;
            break;
        case SweepAxis::frequency_hz:
            c.frequency_hz = value;
            break;
        case SweepAxis::area_m2:
            c.area_m2 = value;
            c.region_side_m.reset();
            break;
        case SweepAxis::region_side_m:
            c.region_side_m = value;
            break;
    }
}

struct RunOutcome {
    bool ok = false;
    bool censored = false;
    double lifetime_s = 0.0;
    double consumed_per_cycle_j = 0.0;
    double residual_j = 0.0;
    std::string error;
};

// An explicit sensor count would pin the population while the area grows;
// fold it into the density once so area points scale it back up.
ScenarioConfig normalize_base(const SweepSpec& spec, const ScenarioConfig& base) {
    ScenarioConfig cfg = base;
    const bool size_axis =
        spec.axis == SweepAxis::area_m2 || spec.axis == SweepAxis::region_side_m;
    if (size_axis && cfg.n_sensors) {
        const double side = cfg.region_side();
        cfg.sensor_density_per_m2 = *cfg.n_sensors / (side * side);
        cfg.n_sensors.reset();
        cfg.region_side_m.reset();
    }
    return cfg;
}

std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ScenarioConfig sweep_run_config(const SweepSpec& spec, const ScenarioConfig& base,
                                double value, MobilityModel variant, double frequency_hz,
                                int seed_index) {
    ScenarioConfig cfg = normalize_base(spec, base);
    apply_axis(cfg, spec.axis, value);
    cfg.mobility_model = variant;
    cfg.frequency_hz = frequency_hz;
    cfg.seed = derive_seed(base.seed,
                           {fnv1a("sweep"), static_cast<std::uint64_t>(spec.axis),
                            std::bit_cast<std::uint64_t>(value),
                            static_cast<std::uint64_t>(variant),
                            std::bit_cast<std::uint64_t>(frequency_hz),
                            static_cast<std::uint64_t>(seed_index)});
    return cfg;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const ScenarioConfig& base,
                                int n_threads) {
    if (spec.values.empty()) throw std::invalid_argument("sweep needs at least one value");
    if (spec.variants.empty()) throw std::invalid_argument("sweep needs at least one variant");
    if (spec.seeds_per_point < 1) throw std::invalid_argument("seeds_per_point must be >= 1");

    const std::vector<double> freqs =
        spec.frequencies.empty() ? std::vector<double>{base.frequency_hz}
                                 : spec.frequencies;

    struct Job {
        std::size_t row;
        ScenarioConfig config;
    };
    std::vector<Job> jobs;
    std::vector<SweepRow> rows;
    for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
        for (std::size_t mi = 0; mi < spec.variants.size(); ++mi) {
            for (std::size_t fi = 0; fi < freqs.size(); ++fi) {
                SweepRow row;
                row.value = spec.values[vi];
                row.variant = spec.variants[mi];
                row.frequency_hz = freqs[fi];
                const std::size_t row_index = rows.size();
                rows.push_back(row);
                for (int si = 0; si < spec.seeds_per_point; ++si) {
                    jobs.push_back({row_index,
                                    sweep_run_config(spec, base, spec.values[vi],
                                                     spec.variants[mi], freqs[fi], si)});
                }
            }
        }
    }

    std::vector<RunOutcome> outcomes(jobs.size());
    std::atomic<std::size_t> cursor{0};
    const unsigned hw = std::thread::hardware_concurrency();
    const unsigned workers = n_threads > 0 ? static_cast<unsigned>(n_threads)
                                           : std::max(1u, hw);
    const auto worker = [&] {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= jobs.size()) break;
            RunOutcome& out = outcomes[i];
            try {
                const RunResult r = run(jobs[i].config, /*record_series=*/false);
                out.ok = true;
                out.censored = r.censored;
                out.lifetime_s = r.lifetime_s;
                out.consumed_per_cycle_j = r.mean_consumed_per_cycle_j;
                out.residual_j = r.final_residual_j;
            } catch (const std::exception& e) {
                out.error = e.what();
            }
        }
    };
    if (workers <= 1 || jobs.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Aggregate in job order; rows come out deterministic regardless of which
    // worker ran what.
    std::vector<std::vector<double>> lifetimes(rows.size()), consumed(rows.size()),
        residuals(rows.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        SweepRow& row = rows[jobs[i].row];
        const RunOutcome& out = outcomes[i];
        if (!out.ok) {
            if (!row.failed) {
                row.failed = true;
                row.error = out.error;
            }
            continue;
        }
        row.n_seeds += 1;
        row.n_censored += out.censored ? 1 : 0;
        lifetimes[jobs[i].row].push_back(out.lifetime_s);
        consumed[jobs[i].row].push_back(out.consumed_per_cycle_j);
        residuals[jobs[i].row].push_back(out.residual_j);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows[r].lifetime_s = compute_stats(lifetimes[r]);
        rows[r].consumed_per_cycle_j = compute_stats(consumed[r]);
        rows[r].residual_j = compute_stats(residuals[r]);
    }
    return rows;
}

std::string sweep_csv(const SweepSpec& spec, std::span<const SweepRow> rows) {
    std::ostringstream out;
    out << "axis,value,variant,frequency_hz,n_seeds,n_censored,"
           "lifetime_mean_s,lifetime_std_s,"
           "consumed_per_cycle_mean_j,consumed_per_cycle_std_j,"
           "residual_mean_j,residual_std_j,status\n";
    for (const SweepRow& row : rows) {
        out << to_string(spec.axis) << ',' << fmt(row.value) << ','
            << to_string(row.variant) << ',' << fmt(row.frequency_hz) << ','
            << row.n_seeds << ',' << row.n_censored << ',' << fmt(row.lifetime_s.mean)
            << ',' << fmt(row.lifetime_s.stddev) << ','
            << fmt(row.consumed_per_cycle_j.mean) << ','
            << fmt(row.consumed_per_cycle_j.stddev) << ',' << fmt(row.residual_j.mean)
            << ',' << fmt(row.residual_j.stddev) << ','
            << (row.failed ? "failed: " + sanitize(row.error) : "ok") << "\n";
    }
    return out.str();
}

SweepTable read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingSweep("cannot open sweep file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("axis,", 0) != 0)
        throw MissingSweep("not a sweep CSV: " + path);

    SweepTable table;
    bool axis_set = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row_in(line);
        std::vector<std::string> fields;
        std::string f;
        while (std::getline(row_in, f, ',')) fields.push_back(f);
        if (fields.size() < 13) throw MissingSweep("malformed sweep row: " + line);
        if (!axis_set) {
            table.axis = sweep_axis_from_string(fields[0]);
            axis_set = true;
        }
        SweepRow row;
        row.value = std::stod(fields[1]);
        row.variant = mobility_model_from_string(fields[2]);
        row.frequency_hz = std::stod(fields[3]);
        row.n_seeds = std::stoi(fields[4]);
        row.n_censored = std::stoi(fields[5]);
        row.lifetime_s = {row.n_seeds, std::stod(fields[6]), std::stod(fields[7])};
        row.consumed_per_cycle_j = {row.n_seeds, std::stod(fields[8]), std::stod(fields[9])};
        row.residual_j = {row.n_seeds, std::stod(fields[10]), std::stod(fields[11])};
        row.failed = fields[12] != "ok";
        if (row.failed) row.error = fields[12];
        table.rows.push_back(row);
    }
    if (table.rows.empty()) throw MissingSweep("sweep file has no rows: " + path);
    return table;
}

namespace {

constexpr MobilityModel kVariantOrder[] = {
    MobilityModel::static_em, MobilityModel::mobile_em, MobilityModel::static_cm,
    MobilityModel::mobile_cm};

std::vector<double> distinct_values(const SweepTable& table) {
    std::vector<double> vals;
    for (const SweepRow& r : table.rows)
        if (std::find(vals.begin(), vals.end(), r.value) == vals.end())
            vals.push_back(r.value);
    return vals;
}

const SweepRow* find_row(const SweepTable& table, double value, MobilityModel variant) {
    for (const SweepRow& r : table.rows)
        if (r.value == value && r.variant == variant && !r.failed) return &r;
    return nullptr;
}

const SweepRow* find_row_freq(const SweepTable& table, double value, double freq) {
    for (const SweepRow& r : table.rows)
        if (r.value == value && r.frequency_hz == freq && !r.failed) return &r;
    return nullptr;
}

// x column + one column per variant holding the chosen per-row statistic.
std::string project_by_variant(const SweepTable& table,
                               SampleStats SweepRow::* metric) {
    std::vector<MobilityModel> present;
    for (MobilityModel m : kVariantOrder)
        for (const SweepRow& r : table.rows)
            if (r.variant == m) {
                if (std::find(present.begin(), present.end(), m) == present.end())
                    present.push_back(m);
                break;
            }

    std::ostringstream out;
    out << to_string(table.axis);
    for (MobilityModel m : present) out << ',' << to_string(m);
    out << "\n";
    for (double v : distinct_values(table)) {
        out << fmt(v);
        for (MobilityModel m : present) {
            const SweepRow* row = find_row(table, v, m);
            out << ',' << (row ? fmt((row->*metric).mean) : "");
        }
        out << "\n";
    }
    return out.str();
}

std::string project_by_frequency(const SweepTable& table,
                                 SampleStats SweepRow::* metric) {
    std::vector<double> freqs;
    for (const SweepRow& r : table.rows)
        if (std::find(freqs.begin(), freqs.end(), r.frequency_hz) == freqs.end())
            freqs.push_back(r.frequency_hz);

    std::ostringstream out;
    out << to_string(table.axis);
    for (double f : freqs) out << ",f_" << static_cast<long long>(f) << "hz";
    out << "\n";
    for (double v : distinct_values(table)) {
        out << fmt(v);
        for (double f : freqs) {
            const SweepRow* row = find_row_freq(table, v, f);
            out << ',' << (row ? fmt((row->*metric).mean) : "");
        }
        out << "\n";
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>& written) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    written.push_back(path);
}

}  // namespace

std::vector<std::string> emit_figure_data(const SweepTable& table,
                                          const std::string& out_dir) {
    if (table.rows.empty()) throw MissingSweep("sweep table is empty");
    std::filesystem::create_directories(out_dir);
    const auto path = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };

    std::vector<double> freqs;
    for (const SweepRow& r : table.rows)
        if (std::find(freqs.begin(), freqs.end(), r.frequency_hz) == freqs.end())
            freqs.push_back(r.frequency_hz);
    const bool by_frequency = freqs.size() > 1;

    std::vector<std::string> written;
    switch (table.axis) {
        case SweepAxis::min_required_power_dbm:
            if (by_frequency) {
                write_file(path("fig5a.csv"),
                           project_by_frequency(table, &SweepRow::consumed_per_cycle_j),
                           written);
                write_file(path("fig5b.csv"),
                           project_by_frequency(table, &SweepRow::residual_j), written);
            } else {
                write_file(path("fig3a.csv"),
                           project_by_variant(table, &SweepRow::consumed_per_cycle_j),
                           written);
                write_file(path("fig3b.csv"),
                           project_by_variant(table, &SweepRow::residual_j), written);
            }
            break;
        case SweepAxis::frequency_hz:
            write_file(path("fig4a.csv"),
                       project_by_variant(table, &SweepRow::consumed_per_cycle_j), written);
            write_file(path("fig4b.csv"), project_by_variant(table, &SweepRow::residual_j),
                       written);
            write_file(path("fig9a.csv"), project_by_variant(table, &SweepRow::lifetime_s),
                       written);
            break;
        case SweepAxis::n_actors:
            write_file(path("fig6a.csv"),
                       project_by_variant(table, &SweepRow::consumed_per_cycle_j), written);
            write_file(path("fig6b.csv"), project_by_variant(table, &SweepRow::residual_j),
                       written);
            write_file(path("fig9b.csv"), project_by_variant(table, &SweepRow::lifetime_s),
                       written);
            break;
        case SweepAxis::n_eps:
            write_file(path("fig7a.csv"),
                       project_by_variant(table, &SweepRow::consumed_per_cycle_j), written);
            write_file(path("fig9c.csv"), project_by_variant(table, &SweepRow::lifetime_s),
                       written);
            break;
        case SweepAxis::consume_probability:
            write_file(path("fig7b.csv"), project_by_variant(table, &SweepRow::residual_j),
                       written);
            break;
        case SweepAxis::area_m2:
        case SweepAxis::region_side_m:
            write_file(path("fig8a.csv"),
                       project_by_variant(table, &SweepRow::consumed_per_cycle_j), written);
            write_file(path("fig8b.csv"), project_by_variant(table, &SweepRow::residual_j),
                       written);
            break;
    }
    return written;
}

}  // namespace wehsim
