#ifndef WEHSIM_SWEEP_HPP
#define WEHSIM_SWEEP_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "wehsim/config.hpp"
#include "wehsim/mobility.hpp"
#include "wehsim/sim.hpp"

namespace wehsim {

struct MissingSweep : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The parameters a study may vary, one at a time. Deployment size can be
// swept either as a literal area or as the region side length (the two
// readings of the same study); both hold the sensor density constant.
enum class SweepAxis {
    consume_probability,
    n_actors,
    n_eps,
    min_required_power_dbm,
    frequency_hz,
    area_m2,
    region_side_m,
};

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& s);

struct SweepSpec {
    SweepAxis axis = SweepAxis::min_required_power_dbm;
    std::vector<double> values;
    std::vector<MobilityModel> variants;
    int seeds_per_point = 30;
    // Optional second dimension: repeat the whole sweep at each of these
    // carrier frequencies (single-variant frequency studies).
    std::vector<double> frequencies;
};

struct SampleStats {
    int n = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample (n-1)

    double stderr_mean() const { return n > 1 ? stddev / std::sqrt(double(n)) : 0.0; }
};

SampleStats compute_stats(std::span<const double> samples);

// One aggregate row per (value, variant[, frequency]) point.
struct SweepRow {
    double value = 0.0;
    MobilityModel variant = MobilityModel::mobile_cm;
    double frequency_hz = 0.0;
    int n_seeds = 0;
    int n_censored = 0;
    bool failed = false;
    std::string error;
    SampleStats lifetime_s;
    SampleStats consumed_per_cycle_j;
    SampleStats residual_j;
};

// The exact config a sweep executes for one (value, variant, frequency, seed
// index) point. The run seed mixes the sweep coordinates by value rather than
// by list position, so editing the value list never reshuffles the seeds of
// points that stay. When sweeping the area, an explicit sensor count is
// folded into the density so the deployment density stays constant.
ScenarioConfig sweep_run_config(const SweepSpec& spec, const ScenarioConfig& base,
                                double value, MobilityModel variant, double frequency_hz,
                                int seed_index);

// Derives one config per (value, variant, frequency, seed index), runs them
// across a small thread pool, and aggregates per point. Per-run failures mark
// the row failed; the sweep continues. Row order is deterministic regardless
// of scheduling.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const ScenarioConfig& base,
                                int n_threads = 0);

std::string sweep_csv(const SweepSpec& spec, std::span<const SweepRow> rows);

struct SweepTable {
    SweepAxis axis = SweepAxis::min_required_power_dbm;
    std::vector<SweepRow> rows;
};

SweepTable read_sweep_csv(const std::string& path);

// Writes the plot-ready projections the sweep's axis supports (one CSV per
// figure: the x value plus one column per variant, or per frequency for the
// two-dimensional study). Returns the paths written. Throws MissingSweep for
// an empty table.
std::vector<std::string> emit_figure_data(const SweepTable& table,
                                          const std::string& out_dir);

}  // namespace wehsim

#endif
