#include "run_config.hpp"

#include <cmath>
#include <fstream>

#include "catstress/serialization.hpp"

namespace catstress::cli {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

Complex parse_complex(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_object()) return {get_or(j, "re", 0.0), get_or(j, "im", 0.0)};
  throw ConfigError(what + " must be a number, [re, im] or {\"re\", \"im\"}");
}

SpacetimePoint parse_point(const json& j, int dimension) {
  SpacetimePoint p;
  if (j.is_array()) {
    // [t, x1, ..., xd]
    if (j.size() != static_cast<std::size_t>(dimension + 1)) {
      throw ConfigError("point arrays need t followed by " + std::to_string(dimension) + " coordinates");
    }
    p.t = j[0].get<double>();
    for (std::size_t k = 1; k < j.size(); ++k) p.x.push_back(j[k].get<double>());
    return p;
  }
  p.t = get_or(j, "t", 0.0);
  p.x = get_or(j, "x", std::vector<double>{});
  if (p.x.size() != static_cast<std::size_t>(dimension)) {
    throw ConfigError("point has " + std::to_string(p.x.size()) + " spatial coordinates, expected " +
                      std::to_string(dimension));
  }
  return p;
}

}  // namespace

BasisPtr BasisConfig::build() const {
  const auto geometry = BoxGeometry::make(dimension, length);
  if (modes) return std::make_shared<const ModeBasis>(geometry, mass, coupling, *modes);
  return build_box_modes(geometry, mass, coupling, max_index);
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  c.source = j;
  try {
    if (j.contains("basis")) {
      const auto& b = j.at("basis");
      c.basis.dimension = get_or(b, "dimension", c.basis.dimension);
      c.basis.length = get_or(b, "length", c.basis.length);
      c.basis.mass = get_or(b, "mass", c.basis.mass);
      c.basis.coupling = get_or(b, "coupling", c.basis.coupling);
      c.basis.max_index = get_or(b, "max_index", c.basis.max_index);
      if (b.contains("modes")) c.basis.modes = b.at("modes").get<std::vector<std::vector<int>>>();
    }
    if (j.contains("state")) {
      const auto& s = j.at("state");
      c.state.type = get_or(s, "type", c.state.type);
      if (c.state.type != "coherent" && c.state.type != "cat") {
        throw ConfigError("state.type must be 'coherent' or 'cat'");
      }
      if (s.contains("alpha")) {
        for (const auto& a : s.at("alpha")) c.state.alpha.push_back(parse_complex(a, "state.alpha entry"));
      }
      if (s.contains("a")) c.state.a = parse_complex(s.at("a"), "state.a");
      if (s.contains("b")) c.state.b = parse_complex(s.at("b"), "state.b");
      if (s.contains("theta")) c.state.theta = s.at("theta").get<double>();
    }
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      c.sweep.alpha_squared = get_or(s, "alpha_squared", std::vector<double>{});
      c.sweep.thetas = get_or(s, "thetas", std::vector<double>{});
      if (s.contains("alpha_squared") && c.sweep.alpha_squared.empty()) {
        throw ConfigError("sweep.alpha_squared must be nonempty");
      }
      if (s.contains("thetas") && c.sweep.thetas.empty()) throw ConfigError("sweep.thetas must be nonempty");
      for (double v : c.sweep.alpha_squared) {
        if (!(v >= 0.0)) throw ConfigError("sweep.alpha_squared entries must be >= 0");
      }
    }
    if (j.contains("points")) {
      for (const auto& p : j.at("points")) c.points.push_back(parse_point(p, c.basis.dimension));
    } else {
      c.points.push_back({0.0, std::vector<double>(static_cast<std::size_t>(c.basis.dimension), 0.0)});
    }
    if (j.contains("components")) {
      for (const auto& comp : j.at("components")) {
        const auto v = comp.get<std::vector<int>>();
        if (v.size() != 2) throw ConfigError("components are [mu, nu] pairs");
        c.components.push_back({v[0], v[1]});
      }
    } else {
      c.components.push_back({0, 0});
    }
    c.moment_orders = get_or(j, "moment_orders", c.moment_orders);
    c.symmetrized = get_or(j, "symmetrized", c.symmetrized);
    const auto placement = get_or(j, "placement", std::string("lower"));
    if (placement != "lower" && placement != "upper") throw ConfigError("placement must be 'lower' or 'upper'");
    c.placement = placement == "upper" ? IndexPlacement::upper : IndexPlacement::lower;
    if (j.contains("oracle")) {
      const auto& o = j.at("oracle");
      c.oracle.enabled = get_or(o, "enabled", c.oracle.enabled);
      c.oracle.cutoff = get_or(o, "cutoff", c.oracle.cutoff);
      c.oracle.polynomials = get_or(o, "polynomials", c.oracle.polynomials);
      c.oracle.max_degree = get_or(o, "max_degree", c.oracle.max_degree);
      c.oracle.tolerance = get_or(o, "tolerance", c.oracle.tolerance);
    }
    if (j.contains("validate")) {
      const auto& v = j.at("validate");
      c.validate.corrupt_frequency = get_or(v, "corrupt_frequency", c.validate.corrupt_frequency);
      c.validate.tolerance = get_or(v, "tolerance", c.validate.tolerance);
    }
    if (j.contains("output")) c.output_directory = get_or(j.at("output"), "directory", std::string("out"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (c.points.empty()) throw ConfigError("points list must be nonempty");
  if (c.components.empty()) throw ConfigError("components list must be nonempty");
  for (const auto& comp : c.components) {
    if (comp.mu < 0 || comp.nu < 0 || comp.mu > c.basis.dimension || comp.nu > c.basis.dimension) {
      throw ConfigError("component index outside spacetime dimension");
    }
  }
  for (int n : c.moment_orders) {
    if (n < 1 || n > kDefaultMomentCap) {
      throw ConfigError("moment orders must lie in 1.." + std::to_string(kDefaultMomentCap));
    }
  }
  if (c.oracle.cutoff < 1 || c.oracle.max_degree < 0 || c.oracle.polynomials < 0) {
    throw ConfigError("oracle settings out of range");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

namespace {

State make_state(const StateConfig& s, const CoherentAmplitude& alpha, std::optional<double> theta) {
  if (s.type == "coherent") return alpha;
  if (theta) return phase_form_cat(*theta, alpha);
  if (s.a || s.b) return cat_normalize(s.a.value_or(0.0), s.b.value_or(0.0), alpha);
  return cat_normalize(1.0, 1.0, alpha);
}

}  // namespace

std::vector<StateCase> expand_states(const RunConfig& config, const BasisPtr& basis) {
  std::vector<Complex> values = config.state.alpha;
  if (values.empty()) values.assign(basis->size(), 0.0);
  if (values.size() != basis->size()) {
    throw ConfigError("state.alpha has " + std::to_string(values.size()) + " entries but the basis has " +
                      std::to_string(basis->size()) + " modes");
  }
  const CoherentAmplitude direction(basis, values);

  std::vector<double> norms = config.sweep.alpha_squared;
  if (norms.empty()) norms.push_back(direction.norm_squared());
  std::vector<std::optional<double>> thetas;
  for (double t : config.sweep.thetas) thetas.emplace_back(t);
  if (thetas.empty()) thetas.push_back(config.state.theta);
  if (!config.sweep.thetas.empty() && config.state.type != "cat") {
    throw ConfigError("a theta sweep needs state.type = 'cat'");
  }

  std::vector<StateCase> out;
  for (double r2 : norms) {
    CoherentAmplitude alpha = direction;
    if (!config.sweep.alpha_squared.empty()) {
      const double current = direction.norm_squared();
      if (current == 0.0 && r2 > 0.0) throw ConfigError("an |alpha|^2 sweep needs a nonzero state.alpha direction");
      if (current > 0.0) alpha = direction.scaled(std::sqrt(r2 / current));
    }
    for (const auto& theta : thetas) {
      State state = make_state(config.state, alpha, theta);
      const auto* cat = std::get_if<CatState>(&state);
      const double eps = cat ? cat->overlap() : 0.0;
      out.push_back(StateCase{out.size(), std::move(state), alpha.norm_squared(), theta, eps});
    }
  }
  return out;
}

}  // namespace catstress::cli
