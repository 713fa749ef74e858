#ifndef WEHSIM_CONFIG_HPP
#define WEHSIM_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wehsim/entities.hpp"
#include "wehsim/geometry.hpp"
#include "wehsim/mobility.hpp"

namespace wehsim {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Full experiment parameterization. Field defaults are the simulation
// defaults; everything can be overridden from a config file or CLI flags.
struct ScenarioConfig {
    double area_m2 = 200.0;
    std::optional<double> region_side_m;   // wins over area_m2 when set

    std::optional<int> n_sensors;          // wins over density when set
    double sensor_density_per_m2 = 0.5;

    int n_actors = 10;
    int n_eps = 10;
    std::vector<Point> ep_positions;       // explicit placement; overrides n_eps

    double min_required_power_dbm = -5.0;
    double max_tx_power_dbm = 36.0;
    double frequency_hz = 915e6;
    double consume_probability = 1.0 / 30.0;

    MobilityModel mobility_model = MobilityModel::mobile_cm;
    double actor_speed_mps = 2.0;
    double slot_seconds = 1.0;

    double sensor_capacity_j = 10.0;
    double sensor_initial_j = 5.0;
    double sensor_active_power_w = 0.024;
    double alive_threshold_j = 0.0;
    bool revival = true;
    double revive_threshold_j = 0.5;
    double radiation_duty = 1.0;

    std::string harvest_trace;             // CSV path; empty = built-in curve
    SensitivityMode sensitivity_mode = SensitivityMode::aggregate;

    double sensing_radius_m = 5.0;
    double grid_resolution_m = 0.25;
    long max_slots = 1000000;
    std::uint64_t seed = 1;

    double region_side() const;
    int sensor_count() const;
};

// Flat `key = value` lines, `#` comments. Missing keys keep their defaults;
// overrides (CLI flags) are applied after the file. Throws ParseError with
// the offending line number or ValidationError naming the key.
ScenarioConfig load_config(const std::string& path,
                           const std::map<std::string, std::string>& overrides = {});

// Applies `key = value` pairs onto an existing config.
void apply_overrides(ScenarioConfig& config,
                     const std::map<std::string, std::string>& overrides);

// Throws ValidationError naming the first offending key.
void validate(const ScenarioConfig& config);

// Serializes every field as `key = value` lines; load_config on the result
// reproduces the config exactly.
std::string dump_config(const ScenarioConfig& config);

}  // namespace wehsim

#endif
