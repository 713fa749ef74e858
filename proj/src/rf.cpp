#include "wehsim/rf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace wehsim {

PowerWatts dbm_to_watts(PowerDbm p) {
    return {std::pow(10.0, (p.value - 30.0) / 10.0)};
}

PowerDbm watts_to_dbm(PowerWatts p) {
    if (p.value <= 0.0) throw NonPositivePower("cannot express non-positive watts in dBm");
    return {10.0 * std::log10(p.value) + 30.0};
}

double wavelength(Frequency f) {
    if (f.hertz <= 0.0) throw std::domain_error("frequency must be positive");
    return kSpeedOfLight / f.hertz;
}

PowerWatts friis_received(PowerWatts tx, Frequency f, double distance_m, double gain_tx,
                          double gain_rx) {
    if (distance_m <= 0.0) throw ZeroDistance("emitter-receiver distance must be positive");
    const double ratio = wavelength(f) / (4.0 * std::numbers::pi * distance_m);
    return {tx.value * gain_tx * gain_rx * ratio * ratio};
}

TxPowerRequirement required_tx_power(PowerDbm min_at_receiver, double distance_m,
                                     Frequency f, PowerDbm cap_dbm) {
    if (distance_m <= 0.0) throw ZeroDistance("emitter-receiver distance must be positive");
    const double path_loss_db =
        20.0 * std::log10(4.0 * std::numbers::pi * distance_m / wavelength(f));
    const double needed = min_at_receiver.value + path_loss_db;
    if (needed > cap_dbm.value) return {cap_dbm, true};
    return {{needed}, false};
}

HarvestCurve HarvestCurve::default_curve() {
    return {{{-20.0, 0.05}, {-10.0, 0.15}, {0.0, 0.30}, {10.0, 0.40}}, -20.0};
}

void validate(const HarvestCurve& curve) {
    if (curve.knots.empty()) throw InvalidHarvestCurve("harvest curve has no knots");
    for (std::size_t i = 0; i < curve.knots.size(); ++i) {
        const auto& [dbm, eff] = curve.knots[i];
        if (!std::isfinite(dbm) || !std::isfinite(eff))
            throw InvalidHarvestCurve("harvest curve knot is not finite");
        if (eff < 0.0 || eff > 1.0)
            throw InvalidHarvestCurve("efficiency must lie in [0, 1]");
        if (i > 0 && dbm <= curve.knots[i - 1].first)
            throw InvalidHarvestCurve("knots must be strictly increasing in dBm");
    }
}

double efficiency_at(const HarvestCurve& curve, double incident_dbm) {
    const auto& k = curve.knots;
    if (incident_dbm <= k.front().first) return k.front().second;
    if (incident_dbm >= k.back().first) return k.back().second;
    for (std::size_t i = 1; i < k.size(); ++i) {
        if (incident_dbm <= k[i].first) {
            const double t = (incident_dbm - k[i - 1].first) / (k[i].first - k[i - 1].first);
            return k[i - 1].second + t * (k[i].second - k[i - 1].second);
        }
    }
    return k.back().second;
}

PowerWatts harvested_power(const HarvestCurve& curve, PowerDbm incident) {
    if (incident.value < curve.sensitivity_floor_dbm) return {0.0};
    return {efficiency_at(curve, incident.value) * dbm_to_watts(incident).value};
}

HarvestCurve load_harvest_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidHarvestCurve("cannot open harvest trace: " + path);
    std::string line;
    if (!std::getline(in, line) || line.find("incident_dbm") == std::string::npos)
        throw InvalidHarvestCurve("harvest trace missing `incident_dbm,efficiency` header");
    HarvestCurve curve;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b))
            throw InvalidHarvestCurve("malformed harvest trace row: " + line);
        try {
            curve.knots.emplace_back(std::stod(a), std::stod(b));
        } catch (const std::exception&) {
            throw InvalidHarvestCurve("non-numeric harvest trace row: " + line);
        }
    }
    validate(curve);
    return curve;
}

}  // namespace wehsim
