#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dnls/io.hpp"

namespace dnls::io {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("config: '" + where + "' must be an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("config: unknown key '" + item.key() + "' in " + where);
    }
  }
}

double get_number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("config: " + where + "." + key + " must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError("config: " + where + "." + key + " must be an integer");
  }
  return v.get<int>();
}

template <typename T, typename Getter>
void maybe(const json& obj, const std::string& key, T& target, Getter get) {
  if (obj.contains(key)) target = get(obj, key);
}

int parse_sign(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "+") return +1;
    if (s == "-") return -1;
  }
  if (v.is_number_integer() && (v.get<int>() == 1 || v.get<int>() == -1)) return v.get<int>();
  throw ConfigError("config: sign must be \"+\" or \"-\"");
}

Potential parse_potential(const json& p) {
  require_keys(p, "potential", {"kind", "c", "coefficients"});
  if (!p.contains("kind") || !p.at("kind").is_string()) {
    throw ConfigError("config: potential.kind must be a string");
  }
  const PotentialKind kind = potential_kind_from_string(p.at("kind").get<std::string>());
  if (kind == PotentialKind::polynomial) {
    if (!p.contains("coefficients") || !p.at("coefficients").is_array()) {
      throw ConfigError("config: polynomial potential needs a 'coefficients' array");
    }
    std::vector<double> coeffs;
    for (const json& c : p.at("coefficients")) {
      if (!c.is_number()) throw ConfigError("config: polynomial coefficients must be numbers");
      coeffs.push_back(c.get<double>());
    }
    return Potential::polynomial(std::move(coeffs));
  }
  if (!p.contains("c")) throw ConfigError("config: potential.c is required for " + to_string(kind));
  const double c = get_number(p, "c", "potential");
  return kind == PotentialKind::cubic ? Potential::cubic(c) : Potential::saturable(c);
}

void parse_continuation(const json& c, RunConfig& cfg) {
  require_keys(c, "continuation",
               {"harmonics", "newton_tol", "max_newton_iter", "ds0", "ds_min", "ds_max",
                "max_steps", "amplitude_cap", "first_step_eps", "nu_min", "nu_max",
                "snapshot_every"});
  ContinuationOptions& o = cfg.continuation;
  const std::string w = "continuation";
  auto num = [&w](const json& j, const std::string& k) { return get_number(j, k, w); };
  auto integer = [&w](const json& j, const std::string& k) { return get_int(j, k, w); };
  maybe(c, "harmonics", o.harmonics, integer);
  maybe(c, "newton_tol", o.newton_tol, num);
  maybe(c, "max_newton_iter", o.max_newton_iter, integer);
  maybe(c, "ds0", o.ds0, num);
  maybe(c, "ds_min", o.ds_min, num);
  maybe(c, "ds_max", o.ds_max, num);
  maybe(c, "max_steps", o.max_steps, integer);
  maybe(c, "amplitude_cap", o.amplitude_cap, num);
  maybe(c, "first_step_eps", o.first_step_eps, num);
  maybe(c, "nu_min", o.nu_min, num);
  maybe(c, "nu_max", o.nu_max, num);
  maybe(c, "snapshot_every", cfg.snapshot_every, integer);
  o.validate();
  if (cfg.snapshot_every < 1) throw ConfigError("config: continuation.snapshot_every must be >= 1");
}

void parse_integration(const json& i, IntegrationOptions& o) {
  require_keys(i, "integration", {"dt", "periods", "points", "T", "perturbation", "seed", "stride"});
  const std::string w = "integration";
  auto num = [&w](const json& j, const std::string& k) { return get_number(j, k, w); };
  auto integer = [&w](const json& j, const std::string& k) { return get_int(j, k, w); };
  maybe(i, "dt", o.dt, num);
  maybe(i, "periods", o.periods, integer);
  maybe(i, "points", o.points, integer);
  maybe(i, "T", o.T, num);
  maybe(i, "perturbation", o.perturbation, num);
  if (i.contains("seed")) {
    if (!i.at("seed").is_number_unsigned()) {
      throw ConfigError("config: integration.seed must be a non-negative integer");
    }
    o.seed = i.at("seed").get<std::uint64_t>();
  }
  maybe(i, "stride", o.stride, integer);
  if (!(o.dt > 0.0)) throw ConfigError("config: integration.dt must be positive");
  if (o.periods < 1) throw ConfigError("config: integration.periods must be >= 1");
  if (o.points < 1) throw ConfigError("config: integration.points must be >= 1");
  if (!(o.T >= o.dt)) throw ConfigError("config: integration.T must be >= dt");
  if (!(o.perturbation >= 0.0)) throw ConfigError("config: integration.perturbation must be >= 0");
  if (o.stride < 1) throw ConfigError("config: integration.stride must be >= 1");
}

}  // namespace

std::vector<double> Sweep::values() const {
  std::vector<double> out;
  if (steps == 1) return {a_min};
  for (int i = 0; i < steps; ++i) out.push_back(a_min + (a_max - a_min) * i / (steps - 1));
  return out;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  try {
    require_keys(doc, "config",
                 {"lattice", "potential", "amplitude", "sweep", "k", "sign", "reverse",
                  "continuation", "integration", "thresholds", "output"});
    RunConfig cfg;
    if (!doc.contains("lattice")) throw ConfigError("config: 'lattice' is required");
    const json& lat = doc.at("lattice");
    require_keys(lat, "lattice", {"n", "m"});
    if (!lat.contains("n") || !lat.contains("m")) {
      throw ConfigError("config: lattice needs n and m");
    }
    cfg.lattice = LatticeConfig(get_int(lat, "n", "lattice"), get_int(lat, "m", "lattice"));

    if (!doc.contains("potential")) throw ConfigError("config: 'potential' is required");
    cfg.potential = parse_potential(doc.at("potential"));

    if (doc.contains("amplitude")) {
      const double a = get_number(doc, "amplitude", "config");
      if (!(a >= 0.0)) throw ConfigError("config: amplitude must satisfy a >= 0");
      cfg.amplitude = a;
    }
    if (doc.contains("sweep")) {
      const json& s = doc.at("sweep");
      require_keys(s, "sweep", {"a_min", "a_max", "steps"});
      Sweep sw;
      maybe(s, "a_min", sw.a_min, [](const json& j, const std::string& k) {
        return get_number(j, k, "sweep");
      });
      maybe(s, "a_max", sw.a_max, [](const json& j, const std::string& k) {
        return get_number(j, k, "sweep");
      });
      maybe(s, "steps", sw.steps,
            [](const json& j, const std::string& k) { return get_int(j, k, "sweep"); });
      if (!(sw.a_min >= 0.0 && sw.a_max >= sw.a_min)) {
        throw ConfigError("config: sweep requires 0 <= a_min <= a_max");
      }
      if (sw.steps < 1) throw ConfigError("config: sweep.steps must be >= 1");
      cfg.sweep = sw;
    }
    if (doc.contains("k")) cfg.k = get_int(doc, "k", "config");
    if (doc.contains("sign")) cfg.sign = parse_sign(doc.at("sign"));
    if (doc.contains("reverse")) {
      if (!doc.at("reverse").is_boolean()) throw ConfigError("config: reverse must be a boolean");
      cfg.reverse = doc.at("reverse").get<bool>();
    }
    if (doc.contains("continuation")) parse_continuation(doc.at("continuation"), cfg);
    if (doc.contains("integration")) parse_integration(doc.at("integration"), cfg.integration);
    if (doc.contains("thresholds")) {
      const json& t = doc.at("thresholds");
      require_keys(t, "thresholds", {"a_max"});
      if (t.contains("a_max")) cfg.thresholds_a_max = get_number(t, "a_max", "thresholds");
      if (!(cfg.thresholds_a_max > 0.0)) throw ConfigError("config: thresholds.a_max must be > 0");
    }
    if (doc.contains("output")) {
      if (!doc.at("output").is_string()) throw ConfigError("config: output must be a string");
      cfg.output_dir = doc.at("output").get<std::string>();
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace dnls::io
