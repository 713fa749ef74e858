#include "wehsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wehsim {

namespace {

int coverage_grid_cells(Region region, double grid_resolution_m) {
    return std::max(1,
                    static_cast<int>(std::ceil(region.side / grid_resolution_m - 1e-9)));
}

// Visits every grid cell whose center lies within the sensing radius of the
// position. Single source of truth for both the one-shot computation and the
// incremental bookkeeping the engine keeps per slot.
template <typename Fn>
void for_each_covered_cell(Point pos, Region region, double radius, int n, Fn&& fn) {
    const double cell = region.side / n;
    const double r_sq = radius * radius;
    const int lo_i = std::max(0, static_cast<int>((pos.x - radius) / cell - 0.5));
    const int hi_i = std::min(n - 1, static_cast<int>((pos.x + radius) / cell + 0.5));
    const int lo_j = std::max(0, static_cast<int>((pos.y - radius) / cell - 0.5));
    const int hi_j = std::min(n - 1, static_cast<int>((pos.y + radius) / cell + 0.5));
    for (int i = lo_i; i <= hi_i; ++i) {
        const double dx = (i + 0.5) * cell - pos.x;
        for (int j = lo_j; j <= hi_j; ++j) {
            const double dy = (j + 0.5) * cell - pos.y;
            if (dx * dx + dy * dy <= r_sq) fn(static_cast<std::size_t>(i) * n + j);
        }
    }
}

}  // namespace

double coverage_fraction(std::span<const Sensor> sensors, Region region,
                         double sensing_radius_m, double grid_resolution_m) {
    const int n = coverage_grid_cells(region, grid_resolution_m);
    std::vector<char> covered(static_cast<std::size_t>(n) * n, 0);
    for (const Sensor& s : sensors) {
        if (!s.alive) continue;
        for_each_covered_cell(s.position, region, sensing_radius_m, n,
                              [&](std::size_t c) { covered[c] = 1; });
    }
    const long hit = std::count(covered.begin(), covered.end(), char{1});
    return static_cast<double>(hit) / (static_cast<double>(n) * n);
}

namespace {

int nearest_sensor_index(std::span<const Sensor> sensors, Point p) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        const double dsq = distance_sq(sensors[i].position, p);
        if (dsq < best_d) {
            best_d = dsq;
            best = static_cast<int>(i);
        }
    }
    return best;
}

std::int64_t ledger_total_nj(std::span<const Actor> actors) {
    std::int64_t total = 0;
    for (const Actor& a : actors) total += a.motion_energy_nj + a.tx_energy_nj;
    return total;
}

}  // namespace

double residual_metric(std::span<const EventPoint> eps, std::span<const Sensor> sensors) {
    if (sensors.empty()) throw NoSensors("residual metric needs at least one sensor");
    double sum = 0.0;
    for (const EventPoint& ep : eps) {
        sum += sensors[nearest_sensor_index(sensors, ep.position)].stored_j;
    }
    return sum / static_cast<double>(eps.size());
}

ScenarioState make_state(const ScenarioConfig& config) {
    validate(config);

    ScenarioState state;
    state.region = {config.region_side()};
    state.frequency = {config.frequency_hz};
    state.model.active_power_w = config.sensor_active_power_w;
    state.model.slot_seconds = config.slot_seconds;
    state.model.max_tx_power_dbm = config.max_tx_power_dbm;
    state.model.revival = config.revival;
    state.model.revive_threshold_j = config.revive_threshold_j;
    state.model.radiation_duty = config.radiation_duty;
    state.model.sensitivity_mode = config.sensitivity_mode;

    state.curve = config.harvest_trace.empty() ? HarvestCurve::default_curve()
                                               : load_harvest_trace(config.harvest_trace);
    wehsim::validate(state.curve);

    // Placement and duty-cycle draws come from independent streams so varying
    // one axis (say, event point count) never perturbs the others.
    const double side = state.region.side;
    if (!config.ep_positions.empty()) {
        for (std::size_t i = 0; i < config.ep_positions.size(); ++i)
            state.eps.push_back({static_cast<int>(i), config.ep_positions[i],
                                 config.min_required_power_dbm});
    } else {
        Rng ep_rng(derive_stream_seed(config.seed, "eps"));
        for (int i = 0; i < config.n_eps; ++i)
            state.eps.push_back({i,
                                 {side * ep_rng.uniform(), side * ep_rng.uniform()},
                                 config.min_required_power_dbm});
    }

    Rng sensor_rng(derive_stream_seed(config.seed, "sensors"));
    const int n_sensors = config.sensor_count();
    state.sensors.reserve(n_sensors);
    for (int i = 0; i < n_sensors; ++i) {
        Sensor s;
        s.id = i;
        s.position = {side * sensor_rng.uniform(), side * sensor_rng.uniform()};
        s.capacity_j = config.sensor_capacity_j;
        s.stored_j = config.sensor_initial_j;
        s.alive_threshold_j = config.alive_threshold_j;
        s.consume_probability = config.consume_probability;
        s.alive = s.stored_j > s.alive_threshold_j;
        state.sensors.push_back(s);
    }

    std::vector<Point> sites;
    sites.reserve(state.eps.size());
    for (const EventPoint& ep : state.eps) sites.push_back(ep.position);
    state.diagram = build_voronoi(sites, state.region);

    state.plan = build_plan(config.mobility_model, state.eps, state.diagram,
                            config.n_actors);
    const bool mobile = is_mobile(config.mobility_model);
    state.actors.reserve(state.plan.actors.size());
    for (std::size_t i = 0; i < state.plan.actors.size(); ++i) {
        const ActorPlacement& placement = state.plan.actors[i];
        Actor a;
        a.id = static_cast<int>(i);
        a.position = placement.position;
        a.path = placement.path;
        a.arc_offset_m = placement.arc_offset_m;
        a.speed_mps = mobile ? config.actor_speed_mps : 0.0;
        set_tx_power(a, select_tx_power(a, state.eps, state.frequency, state.model));
        state.actors.push_back(std::move(a));
    }

    state.duty_rng = Rng(derive_stream_seed(config.seed, "duty"));
    state.sensing_radius_m = config.sensing_radius_m;
    state.grid_resolution_m = config.grid_resolution_m;

    state.nearest_sensor_per_ep.reserve(state.eps.size());
    for (const EventPoint& ep : state.eps)
        state.nearest_sensor_per_ep.push_back(nearest_sensor_index(state.sensors, ep.position));

    init_coverage(state);
    return state;
}

void init_coverage(ScenarioState& state) {
    state.alive_snapshot.clear();
    state.alive_snapshot.reserve(state.sensors.size());
    for (const Sensor& s : state.sensors) state.alive_snapshot.push_back(s.alive ? 1 : 0);
    state.grid_n = coverage_grid_cells(state.region, state.grid_resolution_m);
    state.cover_count.assign(static_cast<std::size_t>(state.grid_n) * state.grid_n, 0);
    state.covered_cells = 0;
    for (const Sensor& s : state.sensors) {
        if (!s.alive) continue;
        for_each_covered_cell(s.position, state.region, state.sensing_radius_m,
                              state.grid_n, [&](std::size_t c) {
                                  if (state.cover_count[c]++ == 0) ++state.covered_cells;
                              });
    }
}

MetricsRecord step(ScenarioState& state) {
    const std::int64_t before_nj = ledger_total_nj(state.actors);

    for (Actor& a : state.actors) actor_advance(a, state.model);
    for (Actor& a : state.actors) {
        set_tx_power(a, select_tx_power(a, state.eps, state.frequency, state.model));
        actor_accrue_tx(a, state.model);
    }
    for (Sensor& s : state.sensors)
        sensor_charge_step(s, state.actors, state.frequency, state.curve, state.model);
    for (Sensor& s : state.sensors)
        sensor_consume_step(s, state.duty_rng, state.model);

    state.clock += 1;

    MetricsRecord rec;
    rec.slot = state.clock;
    rec.consumed_nj = ledger_total_nj(state.actors) - before_nj;

    double residual_sum = 0.0;
    for (int idx : state.nearest_sensor_per_ep) residual_sum += state.sensors[idx].stored_j;
    rec.residual_j = state.eps.empty() ? 0.0
                                       : residual_sum / static_cast<double>(state.eps.size());

    int alive = 0;
    for (std::size_t i = 0; i < state.sensors.size(); ++i) {
        const char now = state.sensors[i].alive ? 1 : 0;
        alive += now;
        if (now == state.alive_snapshot[i]) continue;
        state.alive_snapshot[i] = now;
        const Sensor& s = state.sensors[i];
        if (now) {
            for_each_covered_cell(s.position, state.region, state.sensing_radius_m,
                                  state.grid_n, [&](std::size_t c) {
                                      if (state.cover_count[c]++ == 0) ++state.covered_cells;
                                  });
        } else {
            for_each_covered_cell(s.position, state.region, state.sensing_radius_m,
                                  state.grid_n, [&](std::size_t c) {
                                      if (--state.cover_count[c] == 0) --state.covered_cells;
                                  });
        }
    }
    rec.alive_count = alive;
    rec.coverage = state.coverage();
    return rec;
}

RunResult run(const ScenarioConfig& config, bool record_series) {
    ScenarioState state = make_state(config);

    RunResult result;
    if (state.coverage() >= 0.5) {
        while (true) {
            if (state.clock >= config.max_slots) {
                result.censored = true;
                break;
            }
            const MetricsRecord rec = step(state);
            if (record_series) result.series.push_back(rec);
            if (rec.coverage < 0.5) break;
        }
    }

    result.slots = state.clock;
    result.lifetime_s = static_cast<double>(state.clock) * config.slot_seconds;
    result.total_consumed_nj = ledger_total_nj(state.actors);
    for (const Actor& a : state.actors) {
        result.total_motion_nj += a.motion_energy_nj;
        result.total_tx_nj += a.tx_energy_nj;
    }
    result.mean_consumed_per_cycle_j =
        state.clock > 0 ? result.total_consumed_j() / static_cast<double>(state.clock) : 0.0;
    result.final_residual_j = residual_metric(state.eps, state.sensors);
    return result;
}

}  // namespace wehsim
