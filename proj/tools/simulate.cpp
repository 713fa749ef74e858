// Experiment harness: single runs, Table-style parameter sweeps, geometry and
// plan dumps, and plot-ready figure projections, all emitting CSV.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "wehsim/config.hpp"
#include "wehsim/sim.hpp"
#include "wehsim/sweep.hpp"

namespace fs = std::filesystem;
using namespace wehsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;
constexpr int kExitAllCensored = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::map<std::string, std::string> overrides;
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Config file (key = value lines)");
    cmd->add_option("--out", args.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--set", args.sets, "Extra override as key=value (repeatable)");

    const auto add_override = [cmd, &args](const std::string& flag, const std::string& key,
                                           const std::string& help) {
        cmd->add_option_function<std::string>(
            flag, [&args, key](const std::string& v) { args.overrides[key] = v; }, help);
    };
    add_override("--seed", "seed", "Run seed");
    add_override("--area-m2", "area_m2", "Deployment area in square meters");
    add_override("--region-side-m", "region_side_m", "Region side length (overrides area)");
    add_override("--n-sensors", "n_sensors", "Explicit sensor count");
    add_override("--sensor-density", "sensor_density_per_m2", "Sensors per square meter");
    add_override("--n-actors", "n_actors", "Number of actors");
    add_override("--n-eps", "n_eps", "Number of event points");
    add_override("--min-required-power", "min_required_power_dbm",
                 "Required incident power at each event point, dBm");
    add_override("--max-tx-power", "max_tx_power_dbm", "Transmit power cap, dBm");
    add_override("--frequency-hz", "frequency_hz", "Carrier frequency, Hz");
    add_override("--consume-probability", "consume_probability",
                 "Per-slot wake probability (accepts fractions like 1/30)");
    add_override("--mobility-model", "mobility_model",
                 "static_em | mobile_em | static_cm | mobile_cm");
    add_override("--actor-speed", "actor_speed_mps", "Actor speed, m/s");
    add_override("--slot-seconds", "slot_seconds", "Slot duration, s");
    add_override("--max-slots", "max_slots", "Safety bound on simulated slots");
    add_override("--harvest-trace", "harvest_trace",
                 "Harvest trace CSV (incident_dbm,efficiency)");
    add_override("--sensitivity-mode", "sensitivity_mode", "aggregate | per_actor");
    add_override("--sensing-radius", "sensing_radius_m", "Coverage sensing radius, m");
    add_override("--grid-resolution", "grid_resolution_m", "Coverage grid resolution, m");
    add_override("--radiation-duty", "radiation_duty", "Fraction of each slot spent radiating");
    add_override("--revival", "revival", "on | off");
    add_override("--revive-threshold", "revive_threshold_j", "Cold-start energy, J");
    add_override("--sensor-capacity", "sensor_capacity_j", "Storage capacity, J");
    add_override("--sensor-initial", "sensor_initial_j", "Initial stored energy, J");
    add_override("--sensor-active-power", "sensor_active_power_w", "Awake draw, W");
}

ScenarioConfig resolve_config(const CommonArgs& args) {
    std::map<std::string, std::string> overrides = args.overrides;
    for (const std::string& kv : args.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ValidationError("--set expects key=value, got: " + kv);
        overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (!args.config_path.empty()) return load_config(args.config_path, overrides);
    ScenarioConfig config;
    apply_overrides(config, overrides);
    validate(config);
    return config;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string run_metrics_csv(const RunResult& result) {
    std::string csv = "slot,consumed_j,residual_j,alive,coverage\n";
    char buf[160];
    for (const MetricsRecord& rec : result.series) {
        std::snprintf(buf, sizeof buf, "%ld,%.9f,%.9f,%d,%.6f\n", rec.slot,
                      rec.consumed_j(), rec.residual_j, rec.alive_count, rec.coverage);
        csv += buf;
    }
    return csv;
}

std::string run_summary_csv(const RunResult& result) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%.6f,%.9f,%.9f,%d\n", result.lifetime_s,
                  result.mean_consumed_per_cycle_j, result.final_residual_j,
                  result.censored ? 1 : 0);
    return std::string("lifetime_s,mean_consumed_per_cycle_j,final_residual_j,censored\n") +
           buf;
}

int cmd_run(const CommonArgs& args) {
    const ScenarioConfig config = resolve_config(args);
    fs::create_directories(args.out_dir);

    std::cout << "frequency: " << config.frequency_hz << " Hz (wavelength "
              << wavelength({config.frequency_hz}) << " m)\n"
              << "model: " << to_string(config.mobility_model) << ", actors "
              << config.n_actors << ", event points "
              << (config.ep_positions.empty() ? config.n_eps
                                              : static_cast<int>(config.ep_positions.size()))
              << ", sensors " << config.sensor_count() << ", seed " << config.seed
              << "\n";

    const RunResult result = run(config);

    write_text(fs::path(args.out_dir) / "effective_config.txt", dump_config(config));
    write_text(fs::path(args.out_dir) / "run_metrics.csv", run_metrics_csv(result));
    write_text(fs::path(args.out_dir) / "run_summary.csv", run_summary_csv(result));

    std::cout << "lifetime: " << result.lifetime_s << " s over " << result.slots
              << " slots" << (result.censored ? " (censored at the safety bound)" : "")
              << "\n"
              << "consumed/cycle: " << result.mean_consumed_per_cycle_j << " J"
              << " (motion " << result.total_motion_j() << " J, tx " << result.total_tx_j()
              << " J total)\n"
              << "final residual: " << result.final_residual_j << " J\n";
    return kExitOk;
}

int cmd_sweep(const CommonArgs& args, const std::string& axis_name,
              const std::vector<std::string>& value_strs,
              const std::vector<std::string>& variant_names, int seeds,
              const std::vector<std::string>& frequency_strs, int threads) {
    const ScenarioConfig base = resolve_config(args);

    SweepSpec spec;
    spec.axis = sweep_axis_from_string(axis_name);
    for (const std::string& v : value_strs) {
        const auto slash = v.find('/');
        if (slash != std::string::npos)
            spec.values.push_back(std::stod(v.substr(0, slash)) /
                                  std::stod(v.substr(slash + 1)));
        else
            spec.values.push_back(std::stod(v));
    }
    for (const std::string& name : variant_names)
        spec.variants.push_back(mobility_model_from_string(name));
    spec.seeds_per_point = seeds;
    for (const std::string& f : frequency_strs) spec.frequencies.push_back(std::stod(f));

    const auto rows = run_sweep(spec, base, threads);

    fs::create_directories(args.out_dir);
    const fs::path out =
        fs::path(args.out_dir) / ("sweep_" + to_string(spec.axis) + ".csv");
    write_text(out, sweep_csv(spec, rows));
    std::cout << "wrote " << out.string() << " (" << rows.size() << " rows)\n";

    long ok_runs = 0, censored_runs = 0;
    for (const SweepRow& row : rows) {
        ok_runs += row.n_seeds;
        censored_runs += row.n_censored;
    }
    if (ok_runs > 0 && censored_runs == ok_runs) {
        std::cerr << "every run hit the safety bound; results are censored\n";
        return kExitAllCensored;
    }
    return kExitOk;
}

int cmd_dump_voronoi(const CommonArgs& args) {
    const ScenarioConfig config = resolve_config(args);
    const ScenarioState state = make_state(config);
    fs::create_directories(args.out_dir);

    std::string vertices = "vertex_id,x,y,inner\n";
    char buf[160];
    std::vector<bool> inner(state.diagram.vertices.size(), false);
    for (int v : state.diagram.inner_vertices) inner[v] = true;
    for (std::size_t v = 0; v < state.diagram.vertices.size(); ++v) {
        std::snprintf(buf, sizeof buf, "%zu,%.9f,%.9f,%d\n", v, state.diagram.vertices[v].x,
                      state.diagram.vertices[v].y, inner[v] ? 1 : 0);
        vertices += buf;
    }
    std::string edges = "edge_id,vertex_a,vertex_b\n";
    for (std::size_t e = 0; e < state.diagram.edges.size(); ++e) {
        std::snprintf(buf, sizeof buf, "%zu,%d,%d\n", e, state.diagram.edges[e].first,
                      state.diagram.edges[e].second);
        edges += buf;
    }
    write_text(fs::path(args.out_dir) / "voronoi_vertices.csv", vertices);
    write_text(fs::path(args.out_dir) / "voronoi_edges.csv", edges);
    std::cout << "wrote voronoi_vertices.csv (" << state.diagram.vertices.size()
              << " vertices) and voronoi_edges.csv (" << state.diagram.edges.size()
              << " edges) to " << args.out_dir << "\n";
    return kExitOk;
}

int cmd_dump_plan(const CommonArgs& args) {
    const ScenarioConfig config = resolve_config(args);
    const ScenarioState state = make_state(config);
    fs::create_directories(args.out_dir);

    std::string csv = "actor_id,x,y,path_vertex_list\n";
    char buf[96];
    for (const Actor& a : state.actors) {
        std::snprintf(buf, sizeof buf, "%d,%.9f,%.9f,", a.id, a.position.x, a.position.y);
        csv += buf;
        if (a.path) {
            for (std::size_t i = 0; i < a.path->waypoints.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%s%.9f:%.9f", i ? ";" : "",
                              a.path->waypoints[i].x, a.path->waypoints[i].y);
                csv += buf;
            }
        }
        csv += "\n";
    }
    const fs::path out = fs::path(args.out_dir) / "deployment_plan.csv";
    write_text(out, csv);
    std::cout << "wrote " << out.string() << " (" << state.actors.size() << " actors)\n";
    return kExitOk;
}

int cmd_figures(const std::vector<std::string>& sweep_files, const std::string& out_dir) {
    if (sweep_files.empty()) throw MissingSweep("no sweep files given");
    for (const std::string& file : sweep_files) {
        const SweepTable table = read_sweep_csv(file);
        for (const std::string& written : emit_figure_data(table, out_dir))
            std::cout << "wrote " << written << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RF energy-harvesting network simulator"};
    app.require_subcommand(1);

    CommonArgs run_args;
    CLI::App* run_cmd = app.add_subcommand("run", "Execute a single scenario");
    add_common(run_cmd, run_args);

    CommonArgs sweep_args;
    std::string axis_name;
    std::vector<std::string> values, variants{"static_em", "mobile_em", "static_cm",
                                              "mobile_cm"};
    std::vector<std::string> frequencies;
    int seeds = 30;
    int threads = 0;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
    add_common(sweep_cmd, sweep_args);
    sweep_cmd->add_option("--axis", axis_name, "Config key to vary")->required();
    sweep_cmd->add_option("--values", values, "Values to sweep (accepts fractions)")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--variants", variants, "Mobility models to compare")
        ->delimiter(',')
        ->capture_default_str();
    sweep_cmd->add_option("--seeds", seeds, "Seeds per sweep point")->capture_default_str();
    sweep_cmd->add_option("--frequencies", frequencies,
                          "Repeat the sweep at each carrier frequency")
        ->delimiter(',');
    sweep_cmd->add_option("--threads", threads, "Worker threads (0 = hardware)");

    CommonArgs voronoi_args;
    CLI::App* voronoi_cmd =
        app.add_subcommand("dump-voronoi", "Write the tessellation as CSV");
    add_common(voronoi_cmd, voronoi_args);

    CommonArgs plan_args;
    CLI::App* plan_cmd =
        app.add_subcommand("dump-plan", "Write the actor deployment plan as CSV");
    add_common(plan_cmd, plan_args);

    std::vector<std::string> sweep_files;
    std::string figures_out = ".";
    CLI::App* figures_cmd =
        app.add_subcommand("figures", "Project sweep CSVs into per-figure data files");
    figures_cmd->add_option("sweeps", sweep_files, "Sweep CSV files")->required();
    figures_cmd->add_option("--out", figures_out, "Output directory")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(run_args);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_args, axis_name, values, variants, seeds, frequencies,
                             threads);
        if (voronoi_cmd->parsed()) return cmd_dump_voronoi(voronoi_args);
        if (plan_cmd->parsed()) return cmd_dump_plan(plan_args);
        if (figures_cmd->parsed()) return cmd_figures(sweep_files, figures_out);
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitOk;
}
