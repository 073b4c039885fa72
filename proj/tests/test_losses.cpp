#include <doctest.h>

#include <cmath>
#include <numbers>

#include "npcrel/errors.hpp"
#include "npcrel/losses.hpp"

using namespace npc;
constexpr double kPi = std::numbers::pi;

namespace {

SwitchPhysics test_switch(double v_ceo, double r_s) {
  SwitchPhysics s = defaults::irf740();
  s.name = "test";
  s.v_ceo = v_ceo;
  s.i_cn = 10.0;
  s.v_cen = v_ceo + r_s * 10.0;
  return s;
}

DiodePhysics test_diode(double v_fo, double r_d) {
  DiodePhysics d = defaults::mur1560();
  d.name = "test";
  d.v_fo = v_fo;
  d.i_cn = 10.0;
  d.v_fn = v_fo + r_d * 10.0;
  return d;
}

OperatingPoint point(double m, double phi, double i_max = 10.0) {
  OperatingPoint op;
  op.modulation_index = m;
  op.phi = phi;
  op.i_max = i_max;
  return op;
}

}  // namespace

TEST_CASE("SPWM S1 closed form, resistive and with threshold") {
  const auto op = point(1.0, 0.0);
  CHECK(conduction_loss_closed_form(Strategy::spwm, Role::S1, test_switch(0.0, 0.5), op) ==
        doctest::Approx(10.610).epsilon(1e-4));
  CHECK(conduction_loss_closed_form(Strategy::spwm, Role::S1, test_switch(0.7, 0.5), op) ==
        doctest::Approx(12.360).epsilon(1e-4));
}

TEST_CASE("numeric integrator reproduces the SPWM S1 closed form") {
  const auto op = point(1.0, 0.0);
  for (double v : {0.0, 0.7}) {
    const auto dev = test_switch(v, 0.5);
    const double cf = conduction_loss_closed_form(Strategy::spwm, Role::S1, dev, op);
    CHECK(conduction_loss_numeric(Strategy::spwm, Role::S1, dev, op) == doctest::Approx(cf).epsilon(1e-3));
  }
}

TEST_CASE("closed forms vanish with M for the M-proportional roles") {
  const auto op = point(1e-9, 0.4);
  CHECK(std::abs(conduction_loss_closed_form(Strategy::spwm, Role::S1, test_switch(0.7, 0.5), op)) < 1e-6);
  CHECK(std::abs(conduction_loss_closed_form(Strategy::thipwm, Role::S4, test_switch(0.7, 0.5), op)) < 1e-6);
  CHECK(std::abs(conduction_loss_closed_form(Strategy::spwm, Role::D1, test_diode(0.7, 0.5), op)) < 1e-6);
  CHECK(std::abs(conduction_loss_closed_form(Strategy::thipwm, Role::D3, test_diode(0.7, 0.5), op)) < 1e-6);
}

TEST_CASE("SVPWM has no closed form") {
  CHECK_THROWS_AS(conduction_loss_closed_form(Strategy::svpwm, Role::S1, test_switch(0, 0.5), point(1, 0)),
                  UnsupportedStrategyError);
}

TEST_CASE("role and device kind must match") {
  CHECK_THROWS_AS(conduction_loss_numeric(Strategy::spwm, Role::S1, test_diode(0.7, 0.1), point(1, 0)),
                  DomainError);
  CHECK_THROWS_AS(switching_loss(Role::D5, test_switch(0.7, 0.1), point(1, 0), Strategy::spwm),
                  DomainError);
}

TEST_CASE("closed forms against the integrator on the 12-point grid") {
  DeviceSet devs;
  devs.outer_switch = devs.inner_switch = test_switch(0.7, 0.5);
  devs.freewheel = devs.clamp = test_diode(0.7, 0.5);
  const auto checks = validate_closed_forms(devs, 10.0, {0.2, 0.5, 0.8, 1.0}, {0.0, kPi / 6, kPi / 3});
  CHECK(checks.size() == 2 * 4 * 12);
  for (const auto& c : checks) {
    CAPTURE(to_string(c.strategy));
    CAPTURE(to_string(c.role));
    CAPTURE(c.modulation_index);
    CAPTURE(c.phi);
    const bool coefficient_269 =
        c.strategy == Strategy::thipwm && (c.role == Role::S2 || c.role == Role::D1) && c.phi > 0.0;
    if (!coefficient_269) {
      CHECK_FALSE(c.flagged);
      CHECK(c.rel_error < 5e-3);
    }
  }
}

TEST_CASE("THIPWM S2 and D1 with the 296 coefficient match the integrator") {
  const auto sw = test_switch(0.7, 0.5);
  const auto di = test_diode(0.7, 0.5);
  for (double m : {0.2, 0.5, 0.8, 1.0}) {
    for (double phi : {0.0, kPi / 6, kPi / 3}) {
      const auto op = point(m, phi);
      for (Role r : {Role::S2, Role::S3}) {
        CHECK(conduction_loss_closed_form_corrected(Strategy::thipwm, r, sw, op) ==
              doctest::Approx(conduction_loss_numeric(Strategy::thipwm, r, sw, op)).epsilon(1e-3));
      }
      for (Role r : {Role::D1, Role::D4}) {
        const double num = conduction_loss_numeric(Strategy::thipwm, r, di, op);
        const double cf = conduction_loss_closed_form_corrected(Strategy::thipwm, r, di, op);
        CHECK(std::abs(cf - num) <= 1e-3 * std::max(num, 1e-9));
      }
    }
  }
}

TEST_CASE("THIPWM S2 and D1 with the 269 coefficient are flagged at large phi") {
  DeviceSet devs;
  devs.outer_switch = devs.inner_switch = test_switch(0.7, 0.5);
  devs.freewheel = devs.clamp = test_diode(0.7, 0.5);
  const auto checks = validate_closed_forms(devs, 10.0, {1.0}, {kPi / 3});
  int flagged = 0;
  for (const auto& c : checks) flagged += c.flagged ? 1 : 0;
  CHECK(flagged == 2);
}

TEST_CASE("zero current gives zero loss") {
  const DeviceSet devs;
  const auto op = point(0.8, 0.3, 0.0);
  for (Strategy s : kAllStrategies) {
    const auto dist = loss_distribution(op, s, devs);
    for (const auto& [r, b] : dist.per_role) {
      CHECK(b.p_cond == 0.0);
      CHECK(b.p_sw == 0.0);
    }
    CHECK(dist.inverter_total.total() == 0.0);
  }
}

TEST_CASE("SVPWM lowers S1 conduction loss at M = 1") {
  const auto dev = DevicePhysics{defaults::irf740()};
  const auto op = point(1.0, 0.0);
  CHECK(conduction_loss_numeric(Strategy::svpwm, Role::S1, dev, op) <
        conduction_loss_numeric(Strategy::spwm, Role::S1, dev, op));
}

TEST_CASE("switching loss scales with carrier frequency") {
  const DeviceSet devs;
  auto op = point(0.9, 0.2);
  for (Role r : kAllRoles) {
    const auto dev = devs.physics(r);
    const double p1 = switching_loss(r, dev, op, Strategy::thipwm);
    op.f_sw = 2000.0;
    const double p2 = switching_loss(r, dev, op, Strategy::thipwm);
    op.f_sw = 1000.0;
    CHECK(p2 == 2.0 * p1);
  }
}

TEST_CASE("switching loss matches the pulse-by-pulse enumeration at the reference point") {
  const DeviceSet devs;
  const auto op = point(1.0, 0.0);
  for (Strategy s : {Strategy::spwm, Strategy::thipwm}) {
    for (Role r : {Role::S1, Role::S4, Role::D5, Role::D6}) {
      CAPTURE(to_string(s));
      CAPTURE(to_string(r));
      const auto dev = devs.physics(r);
      const double avg = switching_loss(r, dev, op, s);
      const double pbp = switching_loss_point_by_point(r, dev, op, s);
      CHECK(avg > 0.0);
      CHECK(pbp == doctest::Approx(avg).epsilon(5e-3));
    }
  }
}

TEST_CASE("SVPWM pulse enumeration converges to the average as the carrier rises") {
  const DeviceSet devs;
  for (Role r : {Role::S1, Role::S4, Role::D5, Role::D6}) {
    CAPTURE(to_string(r));
    const auto dev = devs.physics(r);
    double prev_gap = 1.0;
    for (double f : {5000.0, 20000.0}) {
      auto op = point(1.0, 0.0);
      op.f_sw = f;
      const double avg = switching_loss(r, dev, op, Strategy::svpwm);
      const double gap = std::abs(switching_loss_point_by_point(r, dev, op, Strategy::svpwm) / avg - 1.0);
      CHECK(gap <= prev_gap);
      prev_gap = gap;
    }
    CHECK(prev_gap < 5e-3);
  }
}

TEST_CASE("series diodes D2 and D3 take no recovery loss") {
  const DeviceSet devs;
  const auto op = point(0.9, 0.5);
  CHECK(switching_loss(Role::D2, devs.freewheel, op, Strategy::spwm) == 0.0);
  CHECK(switching_loss(Role::D3, devs.freewheel, op, Strategy::spwm) == 0.0);
  CHECK(switching_loss(Role::D1, devs.freewheel, op, Strategy::spwm) > 0.0);
}

TEST_CASE("mirror roles carry equal losses under half-wave symmetric references") {
  const DeviceSet devs;
  for (Strategy s : {Strategy::spwm, Strategy::thipwm}) {
    for (double phi : {0.0, 0.4, 1.0}) {
      const auto d = loss_distribution(point(0.85, phi), s, devs);
      CAPTURE(to_string(s));
      CAPTURE(phi);
      const double tol = 1e-6;
      CHECK(d.at(Role::S4).total() == doctest::Approx(d.at(Role::S1).total()).epsilon(tol));
      CHECK(d.at(Role::S3).total() == doctest::Approx(d.at(Role::S2).total()).epsilon(tol));
      CHECK(d.at(Role::D6).total() == doctest::Approx(d.at(Role::D5).total()).epsilon(tol));
      for (Role r : {Role::D2, Role::D3, Role::D4}) {
        CHECK(d.at(r).p_cond == doctest::Approx(d.at(Role::D1).p_cond).epsilon(tol));
      }
      CHECK(d.at(Role::D4).p_sw == doctest::Approx(d.at(Role::D1).p_sw).epsilon(tol));
    }
  }
}

TEST_CASE("totals add up") {
  const auto d = loss_distribution(point(0.9, 0.3), Strategy::spwm, DeviceSet{});
  double cond = 0.0;
  double sw = 0.0;
  for (const auto& [r, b] : d.per_role) {
    cond += b.p_cond;
    sw += b.p_sw;
    CHECK(b.total() == b.p_cond + b.p_sw);
  }
  CHECK(d.leg_total.p_cond == doctest::Approx(cond));
  CHECK(d.leg_total.p_sw == doctest::Approx(sw));
  CHECK(d.inverter_total.total() == doctest::Approx(3.0 * d.leg_total.total()));
}

TEST_CASE("SPWM S1 at unity power factor is conduction dominated") {
  const auto d = loss_distribution(point(1.0, 0.0), Strategy::spwm, DeviceSet{});
  CHECK(d.at(Role::S1).p_cond > d.at(Role::S1).p_sw);
}

TEST_CASE("S1 loss is nondecreasing in M and in peak current") {
  const DevicePhysics dev = defaults::irf740();
  for (Strategy s : kAllStrategies) {
    double prev = -1.0;
    for (double m = 0.05; m <= 1.0 + 1e-12; m += 0.05) {
      const auto op = point(std::min(m, 1.0), 0.0);
      const double p = conduction_loss_numeric(s, Role::S1, dev, op) + switching_loss(Role::S1, dev, op, s);
      CAPTURE(to_string(s));
      CAPTURE(m);
      CHECK(p >= prev);
      prev = p;
    }
    prev = -1.0;
    for (double i = 0.0; i <= 30.0; i += 2.5) {
      const auto op = point(0.8, 0.0, i);
      const double p = conduction_loss_numeric(s, Role::S1, dev, op) + switching_loss(Role::S1, dev, op, s);
      CHECK(p >= prev);
      prev = p;
    }
  }
}

TEST_CASE("losses are finite and non-negative across the operating range") {
  const DeviceSet devs;
  for (Strategy s : kAllStrategies) {
    for (double m : {0.1, 0.5, 0.56, 0.8, 1.0}) {
      for (double phi : {0.0, 0.7, 1.5, 2.5}) {
        const auto d = loss_distribution(point(m, phi), s, devs);
        for (const auto& [r, b] : d.per_role) {
          CHECK(std::isfinite(b.total()));
          CHECK(b.p_cond >= 0.0);
          CHECK(b.p_sw >= 0.0);
        }
      }
    }
  }
}

TEST_CASE("coarse quadrature is reported") {
  QuadratureOptions q;
  q.samples = 16;
  q.tolerance = 1e-6;
  CHECK_THROWS_AS(conduction_loss_numeric(Strategy::spwm, Role::S1, defaults::irf740(), point(0.9, 0.3), q),
                  NumericError);
}

TEST_CASE("role names") {
  CHECK(parse_role("d5") == Role::D5);
  CHECK(to_string(Role::S3) == "S3");
  CHECK_THROWS_AS(parse_role("S7"), DomainError);
}
