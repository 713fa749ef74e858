#include "wehsim/entities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace wehsim {

namespace {

std::int64_t to_nanojoules(double joules) {
    return static_cast<std::int64_t>(std::llround(joules * 1e9));
}

void update_alive(Sensor& sensor, const EnergyModel& model) {
    if (sensor.alive) {
        if (sensor.stored_j <= sensor.alive_threshold_j) sensor.alive = false;
    } else if (model.revival && sensor.stored_j >= model.revive_threshold_j) {
        sensor.alive = true;
    }
}

}  // namespace

double motion_power_w(double speed_mps, const EnergyModel& model) {
    if (speed_mps <= 0.0) return 0.0;
    return model.motion_coefficient * std::pow(speed_mps, model.motion_exponent);
}

void set_tx_power(Actor& actor, PowerDbm dbm) {
    actor.tx_power_dbm = dbm.value;
    actor.tx_power_w = dbm_to_watts(dbm).value;
}

PowerDbm select_tx_power(const Actor& actor, std::span<const EventPoint> eps, Frequency f,
                         const EnergyModel& model) {
    if (eps.empty())
        throw std::invalid_argument("select_tx_power requires at least one event point");
    const EventPoint* nearest = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const EventPoint& ep : eps) {
        const double dsq = distance_sq(actor.position, ep.position);
        if (dsq < best) {
            best = dsq;
            nearest = &ep;
        }
    }
    const double r = std::max(std::sqrt(best), kMinRangeM);
    return required_tx_power({nearest->min_required_power_dbm}, r, f,
                             {model.max_tx_power_dbm})
        .dbm;
}

PowerWatts incident_power(const Sensor& sensor, std::span<const Actor> actors, Frequency f,
                          const HarvestCurve& curve, const EnergyModel& model) {
    const double floor_w = dbm_to_watts({curve.sensitivity_floor_dbm}).value;
    // (lambda / 4 pi)^2: the free-space contribution is tx_w * gain / r^2,
    // which avoids a sqrt and a pow in the hottest loop of the simulation.
    const double lam = wavelength(f);
    const double gain = (lam * lam) / (16.0 * std::numbers::pi * std::numbers::pi);
    const double min_range_sq = kMinRangeM * kMinRangeM;
    double total_w = 0.0;
    for (const Actor& actor : actors) {
        const double r_sq =
            std::max(distance_sq(actor.position, sensor.position), min_range_sq);
        const double contribution = actor.tx_power_w * gain / r_sq;
        if (model.sensitivity_mode == SensitivityMode::per_actor && contribution < floor_w)
            continue;
        total_w += contribution;
    }
    return {total_w};
}

void sensor_charge_step(Sensor& sensor, std::span<const Actor> actors, Frequency f,
                        const HarvestCurve& curve, const EnergyModel& model) {
    const PowerWatts incident = incident_power(sensor, actors, f, curve, model);
    if (incident.value <= 0.0) return;
    const PowerWatts dc = harvested_power(curve, watts_to_dbm(incident));
    if (dc.value <= 0.0) return;
    sensor.stored_j = std::min(sensor.capacity_j,
                               sensor.stored_j + dc.value * model.slot_seconds *
                                                     model.radiation_duty);
    update_alive(sensor, model);
}

void sensor_consume_step(Sensor& sensor, Rng& rng, const EnergyModel& model) {
    // The draw happens for every sensor every slot so the duty stream layout
    // does not depend on who is alive. A dead node cannot wake, so only alive
    // sensors drain.
    const bool awake = rng.bernoulli(sensor.consume_probability);
    if (!awake || !sensor.alive) return;
    sensor.stored_j =
        std::max(0.0, sensor.stored_j - model.active_power_w * model.slot_seconds);
    update_alive(sensor, model);
}

void actor_advance(Actor& actor, const EnergyModel& model) {
    if (!actor.mobile()) return;
    actor.arc_offset_m += actor.speed_mps * model.slot_seconds;
    actor.position = point_along_path(*actor.path, actor.arc_offset_m);
    actor.motion_energy_nj +=
        to_nanojoules(motion_power_w(actor.speed_mps, model) * model.slot_seconds);
}

void actor_accrue_tx(Actor& actor, const EnergyModel& model) {
    // Computed from the dBm field, which stays authoritative; the watt mirror
    // only serves the per-sensor charging loop.
    actor.tx_energy_nj += to_nanojoules(dbm_to_watts({actor.tx_power_dbm}).value *
                                        model.slot_seconds * model.radiation_duty);
}

void actor_step(Actor& actor, const EnergyModel& model) {
    actor_advance(actor, model);
    actor_accrue_tx(actor, model);
}

}  // namespace wehsim
