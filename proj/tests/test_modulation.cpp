#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "npcrel/errors.hpp"
#include "npcrel/modulation.hpp"

using namespace npc;
constexpr double kPi = std::numbers::pi;

TEST_CASE("SPWM modulating function") {
  CHECK(modulating_function(Strategy::spwm, 0.8, kPi / 6.0, 0.0) == doctest::Approx(0.4));
  CHECK(modulating_function(Strategy::spwm, 0.8, 0.0, kPi / 6.0) == doctest::Approx(0.4));
}

TEST_CASE("THIPWM peaks at exactly 1 for M = 1") {
  double peak = 0.0;
  const int n = 1000000;
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * kPi * k / n;
    peak = std::max(peak, std::abs(modulating_function(Strategy::thipwm, 1.0, theta, 0.0)));
  }
  CHECK(peak == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("THIPWM differs from a scaled sine by the injected third harmonic") {
  for (double m : {0.3, 0.7, 1.0}) {
    for (double x = 0.0; x < 2.0 * kPi; x += 0.1) {
      const double thi = modulating_function(Strategy::thipwm, m, x, 0.0);
      const double fundamental = 2.0 * m / std::sqrt(3.0) * std::sin(x);
      CHECK(thi - fundamental == doctest::Approx(2.0 * m / std::sqrt(3.0) * std::sin(3.0 * x) / 6.0));
    }
  }
}

TEST_CASE("no strategy overmodulates for M <= 1") {
  for (Strategy s : kAllStrategies) {
    for (double m : {0.05, 0.2, 0.4, 0.5, 0.55, 0.577, 0.58, 0.7, 0.85, 0.95, 1.0}) {
      double peak = 0.0;
      for (int k = 0; k < 20000; ++k) {
        peak = std::max(peak, std::abs(modulating_function(s, m, 2.0 * kPi * k / 20000, 0.3)));
      }
      CAPTURE(to_string(s));
      CAPTURE(m);
      CHECK(peak <= 1.0);
    }
  }
}

TEST_CASE("modulation index outside (0, 1] is rejected") {
  CHECK_THROWS_AS(modulating_function(Strategy::spwm, 0.0, 0.1, 0.0), DomainError);
  CHECK_THROWS_AS(modulating_function(Strategy::svpwm, 0.0, 0.1, 0.0), DomainError);
  CHECK_THROWS_AS(modulating_function(Strategy::thipwm, 1.01, 0.1, 0.0), DomainError);
  CHECK_THROWS_AS(svpwm_band(-0.1), DomainError);
}

TEST_CASE("strategy names parse in any case") {
  CHECK(parse_strategy("svpwm") == Strategy::svpwm);
  CHECK(parse_strategy("ThiPWM") == Strategy::thipwm);
  CHECK(to_string(Strategy::spwm) == "SPWM");
  CHECK_THROWS_AS(parse_strategy("DPWM"), DomainError);
}

TEST_CASE("SVPWM band edges are inclusive upper bounds") {
  CHECK(svpwm_band(0.5) == SvpwmBand::low);
  CHECK(svpwm_band(0.5000001) == SvpwmBand::mid);
  CHECK(svpwm_band(0.577) == SvpwmBand::mid);
  CHECK(svpwm_band(0.5771) == SvpwmBand::high);
  CHECK(svpwm_band(1.0) == SvpwmBand::high);
}

TEST_CASE("SVPWM low band: on-axis region carries M cos(alpha)") {
  CHECK(svpwm_region(0.4, 0.0) == 2);
  const SvpwmRegionTable t(0.4);
  CHECK(t.voltage(0.0) == doctest::Approx(0.4));
  CHECK(t.region_at(0.0).expression.describe() == "M*cos(alpha)");
  // alpha = theta + phi - pi/2
  CHECK(modulating_function(Strategy::svpwm, 0.4, kPi / 2.0, 0.0) == doctest::Approx(0.4));
}

TEST_CASE("SVPWM region lookup is total over the excursion") {
  for (double m : {0.1, 0.5, 0.52, 0.577, 0.6, 0.9, 1.0}) {
    const SvpwmRegionTable t(m);
    for (int k = 0; k <= 1200; ++k) {
      const double alpha = kExcursionBegin + (kExcursionEnd - kExcursionBegin) * k / 1200.0;
      const int id = t.region_at(alpha).id;
      CHECK(id >= 1);
      CHECK(id <= static_cast<int>(t.regions().size()));
    }
  }
  // Midpoint of the excursion at M = 0.9.
  CHECK(svpwm_region(0.9, kPi / 6.0) >= 1);
}

TEST_CASE("SVPWM region spans partition the excursion") {
  for (double m : {0.3, 0.55, 0.577, 0.7, 1.0}) {
    const SvpwmRegionTable t(m);
    const auto& r = t.regions();
    CHECK(r.front().begin == doctest::Approx(0.0));
    CHECK(r.back().end == doctest::Approx(2.0 * kPi / 3.0));
    for (std::size_t k = 1; k < r.size(); ++k) {
      CHECK(r[k].begin == doctest::Approx(r[k - 1].end));
      CHECK(r[k].end >= r[k].begin - 1e-12);
    }
  }
  CHECK(SvpwmRegionTable(0.3).regions().size() == 4);
  CHECK(SvpwmRegionTable(0.55).regions().size() == 8);
  CHECK(SvpwmRegionTable(0.9).regions().size() == 8);
}

TEST_CASE("M = 0.55 sweep visits every region once, in order") {
  const SvpwmRegionTable t(0.55);
  std::vector<int> sequence;
  for (int k = 0; k <= 12000; ++k) {
    const double alpha = kExcursionBegin + (kExcursionEnd - kExcursionBegin) * k / 12000.0;
    const int id = t.region_at(alpha).id;
    if (sequence.empty() || sequence.back() != id) sequence.push_back(id);
  }
  CHECK(sequence == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
}

TEST_CASE("SVPWM angle outside the excursion is rejected") {
  CHECK_THROWS_AS(svpwm_region(0.5, -kPi / 3.0), DomainError);
  CHECK_THROWS_AS(svpwm_region(0.5, kPi), DomainError);
}

TEST_CASE("SVPWM phase voltage has zero mean over a cycle") {
  for (double m : {0.3, 0.5, 0.55, 0.7, 0.9, 1.0}) {
    const SvpwmRegionTable t(m);
    const int n = 120000;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += t.voltage(2.0 * kPi * (k + 0.5) / n);
    CAPTURE(m);
    CHECK(std::abs(sum / n) < 1e-9 * m);
  }
}

TEST_CASE("SVPWM modulating function stays within the linear range") {
  for (double m : {0.2, 0.5, 0.55, 0.577, 0.8, 1.0}) {
    const SvpwmRegionTable t(m);
    double peak = 0.0;
    for (double th = 0.0; th < 2.0 * kPi; th += 1e-3) {
      peak = std::max(peak, std::abs(svpwm_modulating_function(t, th, 0.0)));
    }
    CAPTURE(m);
    CHECK(peak <= 1.0 + 1e-12);
  }
}

TEST_CASE("switching states follow the leg connectivity") {
  const auto p = switching_state(LegState::positive);
  const auto z = switching_state(LegState::zero);
  const auto n = switching_state(LegState::negative);
  CHECK(p.level() == 1);
  CHECK(z.level() == 0);
  CHECK(n.level() == -1);
  for (const auto& s : {p, z, n}) {
    CHECK(s.gates[0] != s.gates[2]);  // S1 / S3 complementary
    CHECK(s.gates[1] != s.gates[3]);  // S2 / S4 complementary
  }
  CHECK(p.gates == std::array<bool, 4>{true, true, false, false});
  CHECK(z.gates == std::array<bool, 4>{false, true, true, false});
  CHECK(n.gates == std::array<bool, 4>{false, false, true, true});
}

TEST_CASE("duty cycles") {
  auto d = duty_cycles(0.5);
  CHECK(d.dt_p == doctest::Approx(0.5));
  CHECK(d.dt_zp == doctest::Approx(0.5));
  CHECK(d.dt_n == 0.0);
  d = duty_cycles(0.0);
  CHECK(d.dt_p == 0.0);
  CHECK(d.dt_n == 0.0);
  CHECK(d.zero() == 1.0);
  d = duty_cycles(-0.3);
  CHECK(d.dt_n == doctest::Approx(0.3));
  CHECK(d.dt_zn == doctest::Approx(0.7));
  CHECK_THROWS_AS(duty_cycles(1.2), DomainError);
  for (double mf = -1.0; mf <= 1.0; mf += 0.01) {
    const auto e = duty_cycles(mf);
    for (double v : {e.dt_p, e.dt_zp, e.dt_zn, e.dt_n}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(e.dt_p + e.dt_n + e.zero() == doctest::Approx(1.0));
  }
}

TEST_CASE("load current") {
  CHECK(load_current(0.7, 0.0, 0.4, 10.0) == 0.0);
  double peak1 = 0.0;
  double peak05 = 0.0;
  for (int k = 0; k < 3600; ++k) {
    const double th = 2.0 * kPi * k / 3600;
    peak1 = std::max(peak1, load_current(1.0, th, 0.3, 10.0));
    peak05 = std::max(peak05, load_current(0.5, th, 0.3, 10.0));
  }
  CHECK(peak1 == doctest::Approx(10.0));
  CHECK(peak05 == doctest::Approx(5.0));
}

TEST_CASE("operating point validation") {
  OperatingPoint op;
  CHECK_NOTHROW(op.validate());
  op.f_sw = 400.0;
  CHECK_THROWS_AS(op.validate(), DomainError);
  op = {};
  op.phi = kPi;
  CHECK_THROWS_AS(op.validate(), DomainError);
  op = {};
  op.v_dc = 0.0;
  CHECK_THROWS_AS(op.validate(), DomainError);
  op = {};
  op.i_max = 0.0;
  CHECK_NOTHROW(op.validate());
}
