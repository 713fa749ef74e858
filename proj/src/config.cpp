#include "wehsim/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace wehsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Accepts plain floats and `a/b` fractions (handy for duty-cycle values).
double parse_double(const std::string& key, const std::string& value) {
    const auto slash = value.find('/');
    try {
        std::size_t used = 0;
        if (slash != std::string::npos) {
            const double num = std::stod(trim(value.substr(0, slash)));
            const double den = std::stod(trim(value.substr(slash + 1)));
            if (den == 0.0) throw std::invalid_argument("zero denominator");
            return num / den;
        }
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("key `" + key + "`: not a number: " + value);
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("key `" + key + "`: not an integer: " + value);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("key `" + key + "`: not an unsigned integer: " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw ValidationError("key `" + key + "`: expected on/off: " + value);
}

std::vector<Point> parse_points(const std::string& key, const std::string& value) {
    std::vector<Point> points;
    std::istringstream in(value);
    std::string pair;
    while (std::getline(in, pair, ';')) {
        pair = trim(pair);
        if (pair.empty()) continue;
        const auto comma = pair.find(',');
        if (comma == std::string::npos)
            throw ValidationError("key `" + key + "`: expected `x,y` pairs: " + pair);
        points.push_back({parse_double(key, trim(pair.substr(0, comma))),
                          parse_double(key, trim(pair.substr(comma + 1)))});
    }
    return points;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void apply_key(ScenarioConfig& c, const std::string& key, const std::string& value) {
    if (key == "area_m2") c.area_m2 = parse_double(key, value);
    else if (key == "region_side_m") c.region_side_m = parse_double(key, value);
    else if (key == "n_sensors") c.n_sensors = static_cast<int>(parse_long(key, value));
    else if (key == "sensor_density_per_m2") c.sensor_density_per_m2 = parse_double(key, value);
    else if (key == "n_actors") c.n_actors = static_cast<int>(parse_long(key, value));
    else if (key == "n_eps") c.n_eps = static_cast<int>(parse_long(key, value));
    else if (key == "ep_positions") c.ep_positions = parse_points(key, value);
    else if (key == "min_required_power_dbm") c.min_required_power_dbm = parse_double(key, value);
    else if (key == "max_tx_power_dbm") c.max_tx_power_dbm = parse_double(key, value);
    else if (key == "frequency_hz") c.frequency_hz = parse_double(key, value);
    else if (key == "consume_probability") c.consume_probability = parse_double(key, value);
    else if (key == "mobility_model") {
        try {
            c.mobility_model = mobility_model_from_string(value);
        } catch (const std::exception&) {
            throw ValidationError("key `mobility_model`: unknown model: " + value);
        }
    } else if (key == "actor_speed_mps") c.actor_speed_mps = parse_double(key, value);
    else if (key == "slot_seconds") c.slot_seconds = parse_double(key, value);
    else if (key == "sensor_capacity_j") c.sensor_capacity_j = parse_double(key, value);
    else if (key == "sensor_initial_j") c.sensor_initial_j = parse_double(key, value);
    else if (key == "sensor_active_power_w") c.sensor_active_power_w = parse_double(key, value);
    else if (key == "alive_threshold_j") c.alive_threshold_j = parse_double(key, value);
    else if (key == "revival") c.revival = parse_bool(key, value);
    else if (key == "revive_threshold_j") c.revive_threshold_j = parse_double(key, value);
    else if (key == "radiation_duty") c.radiation_duty = parse_double(key, value);
    else if (key == "harvest_trace") c.harvest_trace = value;
    else if (key == "sensitivity_mode") {
        if (value == "aggregate") c.sensitivity_mode = SensitivityMode::aggregate;
        else if (value == "per_actor") c.sensitivity_mode = SensitivityMode::per_actor;
        else throw ValidationError("key `sensitivity_mode`: expected aggregate/per_actor");
    } else if (key == "sensing_radius_m") c.sensing_radius_m = parse_double(key, value);
    else if (key == "grid_resolution_m") c.grid_resolution_m = parse_double(key, value);
    else if (key == "max_slots") c.max_slots = parse_long(key, value);
    else if (key == "seed") c.seed = parse_u64(key, value);
    else throw ValidationError("unknown key `" + key + "`");
}

}  // namespace

double ScenarioConfig::region_side() const {
    return region_side_m ? *region_side_m : std::sqrt(area_m2);
}

int ScenarioConfig::sensor_count() const {
    if (n_sensors) return *n_sensors;
    const double side = region_side();
    return std::max(1, static_cast<int>(std::llround(sensor_density_per_m2 * side * side)));
}

ScenarioConfig load_config(const std::string& path,
                           const std::map<std::string, std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);

    ScenarioConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": expected `key = value`");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError(path + ":" + std::to_string(line_no) + ": empty key");
        apply_key(config, key, value);
    }
    apply_overrides(config, overrides);
    validate(config);
    return config;
}

void apply_overrides(ScenarioConfig& config,
                     const std::map<std::string, std::string>& overrides) {
    for (const auto& [key, value] : overrides) apply_key(config, key, value);
}

void validate(const ScenarioConfig& c) {
    const auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ValidationError(msg);
    };
    require(c.area_m2 > 0.0, "key `area_m2` must be positive");
    require(!c.region_side_m || *c.region_side_m > 0.0, "key `region_side_m` must be positive");
    require(!c.n_sensors || *c.n_sensors >= 1, "key `n_sensors` must be >= 1");
    require(c.sensor_density_per_m2 > 0.0, "key `sensor_density_per_m2` must be positive");
    require(c.n_actors >= 1, "key `n_actors` must be >= 1");
    require(c.n_eps >= 1 || !c.ep_positions.empty(), "key `n_eps` must be >= 1");
    require(c.max_tx_power_dbm >= c.min_required_power_dbm,
            "key `max_tx_power_dbm` must be >= min_required_power_dbm");
    require(c.frequency_hz > 0.0, "key `frequency_hz` must be positive");
    require(c.consume_probability >= 0.0 && c.consume_probability <= 1.0,
            "key `consume_probability` must lie in [0, 1]");
    require(c.actor_speed_mps >= 0.0, "key `actor_speed_mps` must be >= 0");
    require(c.slot_seconds > 0.0, "key `slot_seconds` must be positive");
    require(c.sensor_capacity_j > 0.0, "key `sensor_capacity_j` must be positive");
    require(c.sensor_initial_j >= 0.0 && c.sensor_initial_j <= c.sensor_capacity_j,
            "key `sensor_initial_j` must lie in [0, sensor_capacity_j]");
    require(c.sensor_active_power_w >= 0.0, "key `sensor_active_power_w` must be >= 0");
    require(c.alive_threshold_j >= 0.0, "key `alive_threshold_j` must be >= 0");
    require(c.revive_threshold_j >= 0.0, "key `revive_threshold_j` must be >= 0");
    require(c.radiation_duty >= 0.0 && c.radiation_duty <= 1.0,
            "key `radiation_duty` must lie in [0, 1]");
    require(c.sensing_radius_m > 0.0, "key `sensing_radius_m` must be positive");
    require(c.grid_resolution_m > 0.0, "key `grid_resolution_m` must be positive");
    require(c.max_slots >= 0, "key `max_slots` must be >= 0");
}

std::string dump_config(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "area_m2 = " << fmt(c.area_m2) << "\n";
    if (c.region_side_m) out << "region_side_m = " << fmt(*c.region_side_m) << "\n";
    if (c.n_sensors) out << "n_sensors = " << *c.n_sensors << "\n";
    out << "sensor_density_per_m2 = " << fmt(c.sensor_density_per_m2) << "\n";
    out << "n_actors = " << c.n_actors << "\n";
    out << "n_eps = " << c.n_eps << "\n";
    if (!c.ep_positions.empty()) {
        out << "ep_positions = ";
        for (std::size_t i = 0; i < c.ep_positions.size(); ++i) {
            if (i) out << "; ";
            out << fmt(c.ep_positions[i].x) << "," << fmt(c.ep_positions[i].y);
        }
        out << "\n";
    }
    out << "min_required_power_dbm = " << fmt(c.min_required_power_dbm) << "\n";
    out << "max_tx_power_dbm = " << fmt(c.max_tx_power_dbm) << "\n";
    out << "frequency_hz = " << fmt(c.frequency_hz) << "\n";
    out << "consume_probability = " << fmt(c.consume_probability) << "\n";
    out << "mobility_model = " << to_string(c.mobility_model) << "\n";
    out << "actor_speed_mps = " << fmt(c.actor_speed_mps) << "\n";
    out << "slot_seconds = " << fmt(c.slot_seconds) << "\n";
    out << "sensor_capacity_j = " << fmt(c.sensor_capacity_j) << "\n";
    out << "sensor_initial_j = " << fmt(c.sensor_initial_j) << "\n";
    out << "sensor_active_power_w = " << fmt(c.sensor_active_power_w) << "\n";
    out << "alive_threshold_j = " << fmt(c.alive_threshold_j) << "\n";
    out << "revival = " << (c.revival ? "on" : "off") << "\n";
    out << "revive_threshold_j = " << fmt(c.revive_threshold_j) << "\n";
    out << "radiation_duty = " << fmt(c.radiation_duty) << "\n";
    if (!c.harvest_trace.empty()) out << "harvest_trace = " << c.harvest_trace << "\n";
    out << "sensitivity_mode = "
        << (c.sensitivity_mode == SensitivityMode::aggregate ? "aggregate" : "per_actor")
        << "\n";
    out << "sensing_radius_m = " << fmt(c.sensing_radius_m) << "\n";
    out << "grid_resolution_m = " << fmt(c.grid_resolution_m) << "\n";
    out << "max_slots = " << c.max_slots << "\n";
    out << "seed = " << c.seed << "\n";
    return out.str();
}

}  // namespace wehsim
