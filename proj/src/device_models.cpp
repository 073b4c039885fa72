#include "npcrel/device_models.hpp"

#include <cmath>

#include "npcrel/errors.hpp"

namespace npc {

double EnergyFit::evaluate(double i) const { return a * std::exp(b * i) + c * std::exp(d * i); }

void SwitchPhysics::validate() const {
  if (!(i_cn > 0.0)) throw ConfigError(name + ": rated current must be positive");
  if (!(v_ceo >= 0.0)) throw ConfigError(name + ": threshold voltage must be non-negative");
  if (!(r_s() >= 0.0)) throw ConfigError(name + ": on-state slope must be non-negative");
}

void DiodePhysics::validate() const {
  if (!(i_cn > 0.0)) throw ConfigError(name + ": rated current must be positive");
  if (!(v_fo >= 0.0)) throw ConfigError(name + ": threshold voltage must be non-negative");
  if (!(r_d() >= 0.0)) throw ConfigError(name + ": forward slope must be non-negative");
  if (!(v_rev_rated > 0.0)) throw ConfigError(name + ": rated reverse voltage must be positive");
}

double on_state_voltage(const SwitchPhysics& dev, double i) {
  if (i < 0.0) throw DomainError("on-state voltage requested for negative current");
  return dev.v_ceo + dev.r_s() * i;
}

double on_state_voltage(const DiodePhysics& dev, double i) {
  if (i < 0.0) throw DomainError("on-state voltage requested for negative current");
  return dev.v_fo + dev.r_d() * i;
}

double on_state_voltage(const DevicePhysics& dev, double i) {
  return std::visit([i](const auto& d) { return on_state_voltage(d, i); }, dev);
}

OnStateLine on_state_line(const DevicePhysics& dev) {
  if (const auto* s = std::get_if<SwitchPhysics>(&dev)) return {s->v_ceo, s->r_s()};
  const auto& d = std::get<DiodePhysics>(dev);
  return {d.v_fo, d.r_d()};
}

double commutation_energy(const EnergyFit& fit, double i) {
  if (i < 0.0) throw DomainError("commutation energy requested for negative current");
  const double e = fit.evaluate(i);
  if (e < 0.0) {
    throw ModelValidityError("energy fit is negative at " + std::to_string(i) +
                             " A; fit used outside its range");
  }
  return e;
}

namespace defaults {

EnergyFit irf740_eon() { return {0.0048, 0.0044, -0.00433, -0.008}; }
EnergyFit irf740_eoff() { return {0.0126, -0.00107, -0.0102, 0.00021}; }
EnergyFit erec() { return {0.00806, -0.000322, -0.0057, -0.00446}; }

SwitchPhysics irf740() { return {"IRF740", 0.0, 10.0, 5.5, irf740_eon(), irf740_eoff()}; }

DiodePhysics irf740_body_diode() { return {"IRF740-body-diode", 0.8, 10.0, 2.0, erec(), 400.0}; }

DiodePhysics mur1560() { return {"MUR1560", 0.7, 15.0, 1.25, erec(), 600.0}; }

}  // namespace defaults

namespace {

nlohmann::json fit_to_json(const EnergyFit& f) {
  return {{"a", f.a}, {"b", f.b}, {"c", f.c}, {"d", f.d}};
}

EnergyFit fit_from_json(const nlohmann::json& j, const std::string& where) {
  try {
    return {j.at("a").get<double>(), j.at("b").get<double>(), j.at("c").get<double>(),
            j.at("d").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + ": malformed energy fit (" + e.what() + ")");
  }
}

}  // namespace

DeviceLibrary DeviceLibrary::defaults() {
  DeviceLibrary lib;
  lib.add(defaults::irf740());
  lib.add(defaults::irf740_body_diode());
  lib.add(defaults::mur1560());
  return lib;
}

void DeviceLibrary::add(DevicePhysics dev) {
  std::visit([](const auto& d) { d.validate(); }, dev);
  const std::string name = std::visit([](const auto& d) { return d.name; }, dev);
  devices_.insert_or_assign(name, std::move(dev));
}

DeviceLibrary DeviceLibrary::from_json(const nlohmann::json& doc) {
  DeviceLibrary lib;
  if (!doc.contains("devices") || !doc["devices"].is_object()) {
    throw ConfigError("device library needs a 'devices' object");
  }
  for (const auto& [name, entry] : doc["devices"].items()) {
    try {
      const auto kind = entry.at("kind").get<std::string>();
      if (kind == "switch") {
        lib.add(SwitchPhysics{name, entry.at("v_ceo_V").get<double>(),
                              entry.at("i_cn_A").get<double>(), entry.at("v_cen_V").get<double>(),
                              fit_from_json(entry.at("eon_J"), name),
                              fit_from_json(entry.at("eoff_J"), name)});
      } else if (kind == "diode") {
        lib.add(DiodePhysics{name, entry.at("v_fo_V").get<double>(),
                             entry.at("i_cn_A").get<double>(), entry.at("v_fn_V").get<double>(),
                             fit_from_json(entry.at("erec_J"), name),
                             entry.at("v_rev_rated_V").get<double>()});
      } else {
        throw ConfigError(name + ": unknown device kind '" + kind + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("device '" + name + "': " + e.what());
    }
  }
  return lib;
}

nlohmann::json DeviceLibrary::to_json() const {
  nlohmann::json devices = nlohmann::json::object();
  for (const auto& [name, dev] : devices_) {
    if (const auto* s = std::get_if<SwitchPhysics>(&dev)) {
      devices[name] = {{"kind", "switch"},       {"v_ceo_V", s->v_ceo},
                       {"i_cn_A", s->i_cn},      {"v_cen_V", s->v_cen},
                       {"eon_J", fit_to_json(s->eon)}, {"eoff_J", fit_to_json(s->eoff)}};
    } else {
      const auto& d = std::get<DiodePhysics>(dev);
      devices[name] = {{"kind", "diode"},          {"v_fo_V", d.v_fo},
                       {"i_cn_A", d.i_cn},         {"v_fn_V", d.v_fn},
                       {"v_rev_rated_V", d.v_rev_rated}, {"erec_J", fit_to_json(d.erec)}};
    }
  }
  return {{"devices", devices}};
}

const SwitchPhysics& DeviceLibrary::switch_device(const std::string& name) const {
  auto it = devices_.find(name);
  if (it == devices_.end()) throw ConfigError("device '" + name + "' not in library");
  const auto* s = std::get_if<SwitchPhysics>(&it->second);
  if (!s) throw ConfigError("device '" + name + "' is not a switch");
  return *s;
}

const DiodePhysics& DeviceLibrary::diode(const std::string& name) const {
  auto it = devices_.find(name);
  if (it == devices_.end()) throw ConfigError("device '" + name + "' not in library");
  const auto* d = std::get_if<DiodePhysics>(&it->second);
  if (!d) throw ConfigError("device '" + name + "' is not a diode");
  return *d;
}

}  // namespace npc
