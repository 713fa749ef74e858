#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wehsim/entities.hpp"

using namespace wehsim;

namespace {

Sensor test_sensor(double stored, double capacity = 10.0, double p = 1.0) {
    Sensor s;
    s.stored_j = stored;
    s.capacity_j = capacity;
    s.consume_probability = p;
    s.alive = stored > s.alive_threshold_j;
    return s;
}

Actor static_actor(Point pos, double tx_dbm) {
    Actor a;
    a.position = pos;
    set_tx_power(a, {tx_dbm});
    return a;
}

}  // namespace

TEST_SUITE("entities") {

TEST_CASE("motion power follows the locomotion law") {
    const EnergyModel model;
    CHECK(motion_power_w(0.0, model) == 0.0);
    CHECK(motion_power_w(1.0, model) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(motion_power_w(2.0, model) ==
          doctest::Approx(0.05 * std::pow(2.0, 1.5)).epsilon(1e-12));
    CHECK(motion_power_w(2.0, model) == doctest::Approx(0.1414).epsilon(1e-3));
}

TEST_CASE("tx power selection inverts the link at the unit path-gain distance") {
    const EnergyModel model;
    // At 100 MHz the unit path-gain distance (~24 cm) clears the ranging
    // clamp, so the selected power is exactly the required level.
    const Frequency f{100e6};
    const double r = wavelength(f) / (4.0 * std::numbers::pi);
    REQUIRE(r > kMinRangeM);
    const std::vector<EventPoint> eps = {{0, {5.0 + r, 5.0}, -5.0}};
    const Actor a = static_actor({5.0, 5.0}, 0.0);
    CHECK(select_tx_power(a, eps, f, model).value == doctest::Approx(-5.0).epsilon(1e-12));
}

TEST_CASE("tx power selection clamps at the maximum") {
    const EnergyModel model;  // cap 36 dBm
    const Frequency f{915e6};
    const std::vector<EventPoint> eps = {{0, {15.0, 5.0}, -5.0}};
    const Actor a = static_actor({5.0, 5.0}, 0.0);  // 10 m out
    CHECK(select_tx_power(a, eps, f, model).value == 36.0);
}

TEST_CASE("tx power selection serves the nearest event point") {
    const EnergyModel model;
    const Frequency f{915e6};
    // Near point wants -10 dBm at 3 m; far point wants 0 dBm at 8 m.
    const std::vector<EventPoint> eps = {{0, {13.0, 5.0}, 0.0}, {1, {5.0, 8.0}, -10.0}};
    const Actor a = static_actor({5.0, 5.0}, 0.0);
    const double expected =
        required_tx_power({-10.0}, 3.0, f, {model.max_tx_power_dbm}).dbm.value;
    CHECK(select_tx_power(a, eps, f, model).value ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("ranging clamps when the actor sits on the event point") {
    const EnergyModel model;
    const Frequency f{915e6};
    const std::vector<EventPoint> eps = {{0, {5.0, 5.0}, -5.0}};
    const Actor on_top = static_actor({5.0, 5.0}, 0.0);
    const double expected =
        required_tx_power({-5.0}, kMinRangeM, f, {model.max_tx_power_dbm}).dbm.value;
    CHECK(select_tx_power(on_top, eps, f, model).value ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("selected power never exceeds the cap") {
    const EnergyModel model;
    const Frequency f{2.4e9};
    const std::vector<EventPoint> eps = {{0, {1.0, 1.0}, 10.0}, {1, {19.0, 19.0}, 10.0}};
    for (double x = 0.0; x <= 20.0; x += 0.5) {
        const Actor a = static_actor({x, 10.0}, 0.0);
        CHECK(select_tx_power(a, eps, f, model).value <= model.max_tx_power_dbm);
    }
}

TEST_CASE("unclamped selection delivers exactly the required level at the point") {
    const EnergyModel model;
    const Frequency f{915e6};
    const std::vector<EventPoint> eps = {{0, {5.0, 6.2}, -5.0}};
    const Actor a = static_actor({5.0, 5.0}, 0.0);  // 1.2 m: requirement ~16.6 dBm
    const double tx = select_tx_power(a, eps, f, model).value;
    REQUIRE(tx < model.max_tx_power_dbm);
    const double at_ep =
        watts_to_dbm(friis_received(dbm_to_watts({tx}), f, 1.2)).value;
    CHECK(at_ep == doctest::Approx(-5.0).epsilon(1e-9));
}

TEST_CASE("consume step drains awake sensors") {
    const EnergyModel model;  // 24 mW, 1 s slots
    Rng rng(1);
    Sensor s = test_sensor(1.0);
    sensor_consume_step(s, rng, model);
    CHECK(s.stored_j == doctest::Approx(0.976).epsilon(1e-12));
    CHECK(s.alive);
}

TEST_CASE("consume step floors at zero and kills the sensor") {
    const EnergyModel model;
    Rng rng(1);
    Sensor s = test_sensor(0.01);
    sensor_consume_step(s, rng, model);
    CHECK(s.stored_j == 0.0);
    CHECK(!s.alive);
}

TEST_CASE("a dead sensor does not drain") {
    const EnergyModel model;
    Rng rng(1);
    Sensor s = test_sensor(0.3);
    s.alive = false;
    sensor_consume_step(s, rng, model);
    CHECK(s.stored_j == 0.3);
}

TEST_CASE("awake fraction matches the duty-cycle probability") {
    EnergyModel model;
    model.active_power_w = 1e-6;  // tiny drain so the sensor never dies
    Rng rng(77);
    Sensor s = test_sensor(10.0, 10.0, 1.0 / 30.0);
    const int slots = 100000;
    int awake = 0;
    double prev = s.stored_j;
    for (int t = 0; t < slots; ++t) {
        sensor_consume_step(s, rng, model);
        if (s.stored_j < prev) ++awake;
        prev = s.stored_j;
    }
    const double p = 1.0 / 30.0;
    const double sigma = std::sqrt(slots * p * (1.0 - p));
    CHECK(std::abs(awake - slots * p) <= 3.0 * sigma);
}

TEST_CASE("charge step is a no-op without actors") {
    const EnergyModel model;
    Sensor s = test_sensor(2.0);
    sensor_charge_step(s, {}, {915e6}, HarvestCurve::default_curve(), model);
    CHECK(s.stored_j == 2.0);
}

TEST_CASE("incident power below the floor harvests nothing") {
    const EnergyModel model;
    const Frequency f{915e6};
    const HarvestCurve curve = HarvestCurve::default_curve();
    // 0 dBm transmitter 10 m away arrives near -52 dBm, far under the floor.
    const std::vector<Actor> actors = {static_actor({0.0, 0.0}, 0.0)};
    Sensor s = test_sensor(2.0);
    s.position = {10.0, 0.0};
    const double incident_dbm =
        watts_to_dbm(incident_power(s, actors, f, curve, model)).value;
    REQUIRE(incident_dbm < -20.0);
    sensor_charge_step(s, actors, f, curve, model);
    CHECK(s.stored_j == 2.0);
}

TEST_CASE("incident contributions superpose before the curve applies") {
    const EnergyModel model;
    const Frequency f{915e6};
    const HarvestCurve curve = HarvestCurve::default_curve();
    const std::vector<Actor> one = {static_actor({0.0, 0.0}, 30.0)};
    const std::vector<Actor> two = {static_actor({0.0, 0.0}, 30.0),
                                    static_actor({4.0, 0.0}, 30.0)};
    Sensor s = test_sensor(0.0, 100.0);
    s.position = {2.0, 0.0};  // equidistant from both transmitters
    s.alive = true;
    const double p1 = incident_power(s, one, f, curve, model).value;
    const double p2 = incident_power(s, two, f, curve, model).value;
    CHECK(p2 == doctest::Approx(2.0 * p1).epsilon(1e-12));

    Sensor charged = s;
    sensor_charge_step(charged, two, f, curve, model);
    const double expected = harvested_power(curve, watts_to_dbm({p2})).value * 1.0;
    CHECK(charged.stored_j == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("per-actor sensitivity mode drops weak contributions") {
    EnergyModel model;
    const Frequency f{915e6};
    const HarvestCurve curve = HarvestCurve::default_curve();
    // One strong transmitter nearby, one weak far transmitter under the floor.
    const std::vector<Actor> actors = {static_actor({0.0, 0.0}, 30.0),
                                       static_actor({12.0, 0.0}, 0.0)};
    Sensor s = test_sensor(1.0);
    s.position = {1.0, 0.0};

    model.sensitivity_mode = SensitivityMode::aggregate;
    const double agg = incident_power(s, actors, f, curve, model).value;
    model.sensitivity_mode = SensitivityMode::per_actor;
    const double per = incident_power(s, actors, f, curve, model).value;
    CHECK(per < agg);
    CHECK(per == doctest::Approx(friis_received(dbm_to_watts({30.0}), f, 1.0).value)
                     .epsilon(1e-12));
}

TEST_CASE("charging caps at capacity and can revive a dead sensor") {
    EnergyModel model;
    const Frequency f{915e6};
    const HarvestCurve curve = HarvestCurve::default_curve();
    const std::vector<Actor> actors = {static_actor({0.0, 0.0}, 36.0)};

    Sensor s = test_sensor(0.0, 0.4);
    s.position = {0.1, 0.0};
    s.alive = false;
    // Strong field: revival blocked only by the capacity below the threshold.
    sensor_charge_step(s, actors, f, curve, model);
    CHECK(s.stored_j <= 0.4);
    CHECK(!s.alive);

    Sensor big = test_sensor(0.0, 10.0);
    big.position = {0.1, 0.0};
    big.alive = false;
    for (int t = 0; t < 20 && !big.alive; ++t)
        sensor_charge_step(big, actors, f, curve, model);
    CHECK(big.alive);
    CHECK(big.stored_j >= model.revive_threshold_j);

    model.revival = false;
    Sensor never = test_sensor(0.0, 10.0);
    never.position = {0.1, 0.0};
    never.alive = false;
    for (int t = 0; t < 20; ++t) sensor_charge_step(never, actors, f, curve, model);
    CHECK(!never.alive);
}

TEST_CASE("static actor accrues only transmit energy") {
    const EnergyModel model;
    Actor a = static_actor({3.0, 3.0}, 36.0);
    actor_step(a, model);
    CHECK(a.motion_energy_nj == 0);
    CHECK(a.tx_energy_j() == doctest::Approx(3.981).epsilon(1e-4));
    CHECK(a.position.x == 3.0);
}

TEST_CASE("mobile actor advances and pays the locomotion cost") {
    const EnergyModel model;
    Actor a;
    a.path = make_path({{0.0, 0.0}, {10.0, 0.0}}, false);
    a.speed_mps = 2.0;
    set_tx_power(a, {-100.0});  // negligible TX
    actor_step(a, model);
    CHECK(a.position.x == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(a.motion_energy_j() == doctest::Approx(0.05 * std::pow(2.0, 1.5)).epsilon(1e-6));

    // A full reflection period brings it home: 10 s * 2 m/s = 20 m = 2 lengths.
    for (int t = 1; t < 10; ++t) actor_step(a, model);
    CHECK(a.position.x == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(a.motion_energy_j() ==
          doctest::Approx(10.0 * 0.05 * std::pow(2.0, 1.5)).epsilon(1e-6));
}

TEST_CASE("ledgers add up slot by slot") {
    const EnergyModel model;
    Actor a;
    a.path = make_path({{0.0, 0.0}, {5.0, 0.0}}, false);
    a.speed_mps = 1.3;
    set_tx_power(a, {20.0});
    std::int64_t sum = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::int64_t before = a.motion_energy_nj + a.tx_energy_nj;
        actor_step(a, model);
        sum += (a.motion_energy_nj + a.tx_energy_nj) - before;
    }
    CHECK(sum == a.motion_energy_nj + a.tx_energy_nj);
    CHECK(a.motion_energy_nj >= 0);
    CHECK(a.tx_energy_nj >= 0);
}

}  // TEST_SUITE
