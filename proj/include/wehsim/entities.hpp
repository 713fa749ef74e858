#ifndef WEHSIM_ENTITIES_HPP
#define WEHSIM_ENTITIES_HPP

#include <cstdint>
#include <optional>
#include <span>

#include "wehsim/geometry.hpp"
#include "wehsim/rf.hpp"
#include "wehsim/rng.hpp"

namespace wehsim {

// A location of sensing interest. The surrounding sensors must keep receiving
// at least min_required_power_dbm while an actor serves the point.
struct EventPoint {
    int id = 0;
    Point position;
    double min_required_power_dbm = -5.0;
};

// Whether the harvesting sensitivity floor applies to the summed incident
// power at a sensor or to each transmitter's contribution separately.
enum class SensitivityMode { aggregate, per_actor };

// Physics constants shared by every entity update.
struct EnergyModel {
    double active_power_w = 0.024;      // sensor draw while awake
    double slot_seconds = 1.0;
    double max_tx_power_dbm = 36.0;
    double motion_coefficient = 0.05;   // W per (m/s)^gamma
    double motion_exponent = 1.5;
    bool revival = true;                // dead sensors may cold-start again
    double revive_threshold_j = 0.5;
    double radiation_duty = 1.0;        // fraction of each slot spent radiating
    SensitivityMode sensitivity_mode = SensitivityMode::aggregate;
};

// Actors park exactly on event points; ranging shorter than this would make
// the free-space equation blow up.
inline constexpr double kMinRangeM = 0.1;

// Harvesting node with a storage capacitor. Dead at zero stored energy;
// revives once the charge climbs back over the revive threshold.
struct Sensor {
    int id = 0;
    Point position;
    double stored_j = 0.0;
    double capacity_j = 10.0;
    double alive_threshold_j = 0.0;
    double consume_probability = 1.0 / 30.0;  // per-slot wake-up draw
    bool alive = true;
};

// Mobile (or parked) energy source. Energy ledgers are kept in integer
// nanojoules so slot-by-slot totals and lifetime totals agree exactly.
struct Actor {
    int id = 0;
    Point position;
    double speed_mps = 0.0;
    std::optional<Path> path;  // absent for static variants
    double arc_offset_m = 0.0;
    double tx_power_dbm = 0.0;
    double tx_power_w = 0.0;   // linear mirror of tx_power_dbm; see set_tx_power
    std::int64_t motion_energy_nj = 0;
    std::int64_t tx_energy_nj = 0;

    bool mobile() const { return path.has_value(); }
    double motion_energy_j() const { return static_cast<double>(motion_energy_nj) * 1e-9; }
    double tx_energy_j() const { return static_cast<double>(tx_energy_nj) * 1e-9; }
    double consumed_j() const {
        return static_cast<double>(motion_energy_nj + tx_energy_nj) * 1e-9;
    }
};

// Locomotion draw: coefficient * speed^gamma.
double motion_power_w(double speed_mps, const EnergyModel& model);

// Sets the transmit level and its linear mirror together. Charging sums the
// watt field for every sensor, so converting once per slot here beats one
// conversion per actor-sensor pair.
void set_tx_power(Actor& actor, PowerDbm dbm);

// Power the actor radiates this slot: just enough for the incident level
// required at its nearest event point, capped at the model maximum. Ranging
// below kMinRangeM is clamped.
PowerDbm select_tx_power(const Actor& actor, std::span<const EventPoint> eps, Frequency f,
                         const EnergyModel& model);

// Summed free-space contribution of every actor at the sensor, in watts.
// In per_actor mode, contributions below the curve floor are dropped before
// summing.
PowerWatts incident_power(const Sensor& sensor, std::span<const Actor> actors, Frequency f,
                          const HarvestCurve& curve, const EnergyModel& model);

// Charge phase: convert the aggregate incident power through the harvest
// curve and store it, capped at capacity. Dead sensors keep charging and may
// revive.
void sensor_charge_step(Sensor& sensor, std::span<const Actor> actors, Frequency f,
                        const HarvestCurve& curve, const EnergyModel& model);

// Duty-cycle phase: with probability consume_probability the sensor wakes and
// drains active_power_w for the slot (floored at zero). Dead sensors never
// wake, but the draw is consumed either way.
void sensor_consume_step(Sensor& sensor, Rng& rng, const EnergyModel& model);

// Movement phase: advance along the path at constant speed and pay the
// locomotion energy. No-op for static actors.
void actor_advance(Actor& actor, const EnergyModel& model);

// Radiation phase: pay transmit energy at the currently selected power.
void actor_accrue_tx(Actor& actor, const EnergyModel& model);

// Full per-slot actor update at the current tx power: advance then radiate.
void actor_step(Actor& actor, const EnergyModel& model);

}  // namespace wehsim

#endif
