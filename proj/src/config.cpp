#include "colhyp/config.hpp"

#include <fstream>
#include <sstream>

#include "colhyp/errors.hpp"
#include "json.hpp"

namespace colhyp {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
  }
}

double number(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + key, "expected a number");
  return v.get<double>();
}

long long integer(const json& obj, const std::string& key, const std::string& path, long long fallback,
                  long long minimum) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(path + key, "expected an integer");
  const auto n = v.get<long long>();
  if (n < minimum) throw ConfigError(path + key, "must be at least " + std::to_string(minimum));
  return n;
}

}  // namespace

void RunConfig::validate() const {
  try {
    spec.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("", e.what());
  }
  if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

std::string RunConfig::echo() const {
  json j;
  j["scenario"] = spec.name;
  j["seed"] = spec.seed;
  j["output_dir"] = output_dir.string();
  j["jobs"] = spec.jobs;
  j["samples"] = spec.samples;
  j["mollifier"] = {{"vanishing_moments", spec.vanishing_moments},
                    {"cutoff_inner", spec.cutoff_inner},
                    {"cutoff_outer", spec.cutoff_outer}};
  j["ladder"] = {{"eps0", spec.ladder.eps0},
                 {"ratio", spec.ladder.ratio},
                 {"count", spec.ladder.count},
                 {"scale", to_string(spec.ladder.scale)}};
  j["params"] = spec.params;
  return j.dump(2) + "\n";
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.what());
  }
  reject_unknown(j, "", {"scenario", "seed", "output_dir", "jobs", "samples", "mollifier", "ladder", "params"});

  if (!j.contains("scenario") || !j["scenario"].is_string()) throw ConfigError("scenario", "mandatory string");
  const std::string name = j["scenario"].get<std::string>();
  RunConfig c;
  try {
    c.spec = default_spec(name);
  } catch (const ParameterError&) {
    throw ConfigError("scenario", "unknown scenario '" + name + "'");
  }
  if (!j.contains("seed")) throw ConfigError("seed", "master seed is mandatory");
  if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
    throw ConfigError("seed", "expected a non-negative integer");
  c.spec.seed = j["seed"].get<std::uint64_t>();

  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ConfigError("output_dir", "expected a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  c.spec.jobs = static_cast<std::size_t>(integer(j, "jobs", "", static_cast<long long>(c.spec.jobs), 0));
  c.spec.samples = static_cast<std::size_t>(integer(j, "samples", "", static_cast<long long>(c.spec.samples), 1));

  if (j.contains("mollifier")) {
    const json& m = j["mollifier"];
    reject_unknown(m, "mollifier", {"vanishing_moments", "cutoff_inner", "cutoff_outer"});
    c.spec.vanishing_moments =
        static_cast<int>(integer(m, "vanishing_moments", "mollifier.", c.spec.vanishing_moments, 0));
    c.spec.cutoff_inner = number(m, "cutoff_inner", "mollifier.", c.spec.cutoff_inner);
    c.spec.cutoff_outer = number(m, "cutoff_outer", "mollifier.", c.spec.cutoff_outer);
  }
  if (j.contains("ladder")) {
    const json& l = j["ladder"];
    reject_unknown(l, "ladder", {"eps0", "ratio", "count", "scale"});
    c.spec.ladder.eps0 = number(l, "eps0", "ladder.", c.spec.ladder.eps0);
    c.spec.ladder.ratio = number(l, "ratio", "ladder.", c.spec.ladder.ratio);
    c.spec.ladder.count = static_cast<int>(integer(l, "count", "ladder.", c.spec.ladder.count, 1));
    if (l.contains("scale")) {
      if (!l["scale"].is_string()) throw ConfigError("ladder.scale", "expected a string");
      try {
        c.spec.ladder.scale = scale_map_from_string(l["scale"].get<std::string>());
      } catch (const Error& e) {
        throw ConfigError("ladder.scale", e.what());
      }
    }
    try {
      c.spec.ladder.validate();
    } catch (const Error& e) {
      throw ConfigError("ladder", e.what());
    }
  }
  if (j.contains("params")) {
    const json& p = j["params"];
    if (!p.is_object()) throw ConfigError("params", "expected an object");
    for (const auto& [key, value] : p.items()) {
      if (!c.spec.params.count(key)) throw ConfigError("params." + key, "unknown key for scenario '" + name + "'");
      if (!value.is_number()) throw ConfigError("params." + key, "expected a number");
      c.spec.params[key] = value.get<double>();
    }
  }
  c.validate();
  return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace colhyp
