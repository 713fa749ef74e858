#ifndef WEHSIM_SIM_HPP
#define WEHSIM_SIM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "wehsim/config.hpp"
#include "wehsim/entities.hpp"
#include "wehsim/geometry.hpp"
#include "wehsim/mobility.hpp"
#include "wehsim/rf.hpp"
#include "wehsim/rng.hpp"

namespace wehsim {

struct NoSensors : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// One output row per simulated slot. Energy is carried in integer nanojoules
// so slot values and run totals add up exactly.
struct MetricsRecord {
    long slot = 0;                    // 1-based index of the executed slot
    std::int64_t consumed_nj = 0;     // all actors, motion + TX, this slot
    double residual_j = 0.0;          // mean stored energy of EP-nearest sensors
    int alive_count = 0;
    double coverage = 0.0;            // after this slot

    double consumed_j() const { return static_cast<double>(consumed_nj) * 1e-9; }
};

struct RunResult {
    double lifetime_s = 0.0;
    long slots = 0;
    bool censored = false;            // stopped by the safety bound, not by coverage
    std::int64_t total_consumed_nj = 0;
    std::int64_t total_motion_nj = 0;
    std::int64_t total_tx_nj = 0;
    double mean_consumed_per_cycle_j = 0.0;
    double final_residual_j = 0.0;
    std::vector<MetricsRecord> series;  // filled only when recording is requested

    double total_consumed_j() const { return static_cast<double>(total_consumed_nj) * 1e-9; }
    double total_motion_j() const { return static_cast<double>(total_motion_nj) * 1e-9; }
    double total_tx_j() const { return static_cast<double>(total_tx_nj) * 1e-9; }
};

// Everything a run touches slot to slot. Built once per run from the config
// and stepped until the stop condition.
struct ScenarioState {
    long clock = 0;
    Region region;
    Frequency frequency{915e6};
    EnergyModel model;
    HarvestCurve curve;
    std::vector<EventPoint> eps;
    std::vector<Sensor> sensors;
    std::vector<Actor> actors;
    VoronoiDiagram diagram;
    DeploymentPlan plan;
    Rng duty_rng{0};
    double sensing_radius_m = 5.0;
    double grid_resolution_m = 0.25;

    // Sensor positions never move, so the nearest sensor of each event point
    // is fixed for the whole run.
    std::vector<int> nearest_sensor_per_ep;

    // Coverage bookkeeping, maintained incrementally: per grid cell, how many
    // alive sensors cover it. A death or revival only touches that sensor's
    // own disk of cells.
    std::vector<char> alive_snapshot;
    int grid_n = 1;
    std::vector<int> cover_count;
    long covered_cells = 0;

    double coverage() const {
        return static_cast<double>(covered_cells) /
               (static_cast<double>(grid_n) * grid_n);
    }
};

// Fraction of grid sample points (cell centers tiling the region) within
// sensing radius of at least one alive sensor.
double coverage_fraction(std::span<const Sensor> sensors, Region region,
                         double sensing_radius_m, double grid_resolution_m);

// Mean stored energy over the sensors nearest to each event point (alive or
// dead; a sensor serving several points is counted once per point).
double residual_metric(std::span<const EventPoint> eps, std::span<const Sensor> sensors);

// Builds geometry, deployment plan and entities from the config and seed.
ScenarioState make_state(const ScenarioConfig& config);

// (Re)builds the incremental coverage structures from the current alive set.
// make_state calls this; callers assembling a state by hand must too.
void init_coverage(ScenarioState& state);

// Advances one slot: actors move and pay motion energy, select and pay TX
// power against their nearest event point, sensors harvest from the aggregate
// incident power, then run their duty-cycle draw. Metrics are recorded last.
MetricsRecord step(ScenarioState& state);

// Steps until coverage drops below one half or the slot bound is reached.
RunResult run(const ScenarioConfig& config, bool record_series = true);

}  // namespace wehsim

#endif
