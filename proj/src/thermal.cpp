#include "npcrel/thermal.hpp"

#include <cmath>

#include "npcrel/errors.hpp"

namespace npc {

double ThermalPath::r_case_to_ambient() const {
  if (const auto* f = std::get_if<FreeAir>(&sink)) return f->r_ca;
  const auto& h = std::get<Heatsink>(sink);
  return h.r_ch + h.r_ha;
}

void ThermalPath::validate() const {
  bool ok = r_jc > 0.0;
  if (const auto* f = std::get_if<FreeAir>(&sink)) {
    ok = ok && f->r_ca > 0.0;
  } else {
    const auto& h = std::get<Heatsink>(sink);
    ok = ok && h.r_ch > 0.0 && h.r_ha > 0.0;
  }
  if (!ok) throw ConfigError("thermal resistances must be positive");
}

TemperaturePair junction_temperature(double p_loss, double t_ambient, const ThermalPath& path) {
  if (!(p_loss >= 0.0) || !std::isfinite(p_loss)) {
    throw DomainError("loss fed to the thermal model must be finite and non-negative");
  }
  path.validate();
  TemperaturePair t;
  t.t_case = t_ambient + p_loss * path.r_case_to_ambient();
  t.t_junction = t.t_case + p_loss * path.r_jc;
  return t;
}

}  // namespace npc
