#ifndef WEHSIM_RF_HPP
#define WEHSIM_RF_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace wehsim {

// Speed of light used throughout, m/s.
inline constexpr double kSpeedOfLight = 2.998e8;

struct PowerDbm {
    double value = 0.0;
};

struct PowerWatts {
    double value = 0.0;
};

struct Frequency {
    double hertz = 0.0;
};

struct NonPositivePower : std::domain_error {
    using std::domain_error::domain_error;
};
struct ZeroDistance : std::domain_error {
    using std::domain_error::domain_error;
};
struct InvalidHarvestCurve : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// W = 10^((dBm - 30) / 10)
PowerWatts dbm_to_watts(PowerDbm p);

// dBm = 10 * log10(W) + 30; requires W > 0.
PowerDbm watts_to_dbm(PowerWatts p);

// lambda = c / f, meters.
double wavelength(Frequency f);

// Free-space received power: pT * gT * gR * (lambda / (4 pi r))^2.
PowerWatts friis_received(PowerWatts tx, Frequency f, double distance_m,
                          double gain_tx = 1.0, double gain_rx = 1.0);

struct TxPowerRequirement {
    PowerDbm dbm;
    bool clamped = false;  // cap hit; the receive-point requirement is unmet
};

// Transmit power needed so the received level at distance r equals
// min_at_receiver, capped at cap_dbm: min(cap, pMin + 20*log10(4 pi r / lambda)).
TxPowerRequirement required_tx_power(PowerDbm min_at_receiver, double distance_m,
                                     Frequency f, PowerDbm cap_dbm);

// RF-to-DC conversion behavior of the harvesting circuit, as a piecewise-linear
// efficiency curve over incident power in dBm. Below the sensitivity floor the
// circuit outputs nothing.
struct HarvestCurve {
    std::vector<std::pair<double, double>> knots;  // (incident dBm, efficiency)
    double sensitivity_floor_dbm = -20.0;

    static HarvestCurve default_curve();
};

// Throws InvalidHarvestCurve unless knots are strictly increasing in dBm and
// every efficiency lies in [0, 1].
void validate(const HarvestCurve& curve);

// Efficiency at the given incident level, linearly interpolated in the dBm
// domain and clamped to the end knots outside their range.
double efficiency_at(const HarvestCurve& curve, double incident_dbm);

// DC power recovered from the incident RF level; zero below the floor.
PowerWatts harvested_power(const HarvestCurve& curve, PowerDbm incident);

// Loads a trace CSV with header `incident_dbm,efficiency`, rows ascending.
HarvestCurve load_harvest_trace(const std::string& path);

}  // namespace wehsim

#endif
