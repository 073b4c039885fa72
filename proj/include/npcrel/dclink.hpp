#pragma once

// DC-link capacitor voltage stress and a neutral-point switching-function
// simulator.

#include <string>
#include <vector>

#include "npcrel/modulation.hpp"

namespace npc {

struct CapacitorSpec {
  double capacitance_uF = 470.0;
  double v_rated = 250.0;  // [V]
  double pi_q = 10.0;
  double pi_sr = 1.0;

  void validate() const;  // ConfigError
};

struct AppliedVoltage {
  double v_dc = 0.0;  // mean [V]
  double v_ac = 0.0;  // ripple RMS [V]
};

// S = (v_dc + sqrt2 v_ac) / (0.6 v_rated)
double voltage_stress(const AppliedVoltage& applied, const CapacitorSpec& spec);

// (S / 0.6)^5 + 1. DomainError for S < 0.
double pi_v(double s);

// How the three references are shifted before carrier comparison. The shift
// bias * (1 - max_x MF_x) moves every phase towards the positive rail by a
// fraction of the headroom left by the highest phase, which lengthens
// positive dwells at the expense of the neutral point.
struct NpPolicy {
  double common_mode_bias = 0.0;  // 0 = symmetric
};

struct DclinkSimOptions {
  int cycles = 20;                   // fundamental periods simulated, >= 10
  double dt = 1e-6;                  // [s]
  double balancing_resistance = 100.0;  // across each capacitor [ohm]
  bool record_trace = true;
};

struct DclinkTrace {
  std::vector<double> time;  // [s]
  std::vector<double> v_c1;  // [V]
  std::vector<double> v_c2;  // [V]
};

struct DclinkResult {
  AppliedVoltage c1;  // upper capacitor, over the second half of the run
  AppliedVoltage c2;
  double mean_np_current = 0.0;  // [A], same window
  DclinkTrace trace;
};

// Carrier-based simulation with in-phase level-shifted triangular carriers.
// The source is stiff, so V_C2 = Vdc - V_C1 throughout and the neutral-point
// current i_np = sum_x i_x [leg x in state 2] drives
//   (C1 + C2) dV_C1/dt = i_np + (Vdc - 2 V_C1) / R_bal.
// Throws DomainError for cycles < 10 and StepSizeError when dt does not
// resolve the carrier or the capacitor time constant.
DclinkResult simulate_np_voltages(Strategy s, const OperatingPoint& op, const CapacitorSpec& c1,
                                  const CapacitorSpec& c2, const NpPolicy& policy,
                                  const DclinkSimOptions& options = {});

// Columnar text: header line, then "time_s v_c1_V v_c2_V" per step.
std::string format_trace(const DclinkTrace& trace);

}  // namespace npc
