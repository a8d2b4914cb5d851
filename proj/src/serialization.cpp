#include "catstress/serialization.hpp"

#include <cstdio>

#include "catstress/error.hpp"

namespace catstress {

using nlohmann::json;

std::string format_real(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json basis_to_json(const ModeBasis& basis) {
  json modes = json::array();
  for (const auto& m : basis.modes()) modes.push_back(m.index);
  return {{"dimension", basis.dimension()},
          {"length", basis.geometry().length},
          {"mass", basis.mass()},
          {"coupling", basis.coupling()},
          {"modes", std::move(modes)}};
}

BasisPtr basis_from_json(const json& j) {
  try {
    const auto geometry = BoxGeometry::make(j.at("dimension").get<int>(), j.at("length").get<double>());
    return std::make_shared<const ModeBasis>(geometry, j.at("mass").get<double>(),
                                             j.value("coupling", 0.0),
                                             j.at("modes").get<std::vector<std::vector<int>>>());
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed basis JSON: ") + e.what());
  }
}

json complex_to_json(Complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  try {
    return {j.value("re", 0.0), j.value("im", 0.0)};
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed complex number: ") + e.what());
  }
}

namespace {

json amplitudes_to_json(const CoherentAmplitude& alpha) {
  json out = json::array();
  for (const auto& c : alpha.amplitudes()) out.push_back(complex_to_json(c));
  return out;
}

CoherentAmplitude amplitudes_from_json(const json& j, const BasisPtr& basis) {
  if (!j.is_array()) throw InvalidArgument("alpha must be an array");
  std::vector<Complex> values;
  for (const auto& e : j) values.push_back(complex_from_json(e));
  return CoherentAmplitude(basis, std::move(values));
}

}  // namespace

json state_to_json(const State& state) {
  if (const auto* alpha = std::get_if<CoherentAmplitude>(&state)) {
    return {{"type", "coherent"}, {"alpha", amplitudes_to_json(*alpha)}};
  }
  const auto& cat = std::get<CatState>(state);
  json out = {{"type", "cat"},
              {"alpha", amplitudes_to_json(cat.alpha())},
              {"a", complex_to_json(cat.a())},
              {"b", complex_to_json(cat.b())}};
  if (cat.theta()) out["theta"] = *cat.theta();
  return out;
}

State state_from_json(const json& j, const BasisPtr& basis) {
  const auto type = j.value("type", std::string("coherent"));
  if (!j.contains("alpha")) throw InvalidArgument("state needs an alpha array");
  auto alpha = amplitudes_from_json(j.at("alpha"), basis);
  if (type == "coherent") return alpha;
  if (type != "cat") throw InvalidArgument("unknown state type '" + type + "'");
  if (j.contains("theta")) return phase_form_cat(j.at("theta").get<double>(), alpha);
  if (!j.contains("a") || !j.contains("b")) throw InvalidArgument("cat state needs theta or a and b");
  return cat_normalize(complex_from_json(j.at("a")), complex_from_json(j.at("b")), alpha);
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config.dump())));
  return buf;
}

}  // namespace catstress
