#include "nvmag/config.hpp"

#include <cinttypes>
#include <fstream>

namespace nvmag {

namespace {

void reject_unknown(const json& obj, const std::string& section,
                    std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw config_error("unknown key '" + section + "." + it.key() + "'");
  }
}

double require_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw config_error("'" + key + "' must be a number");
  return v.get<double>();
}

Range parse_range(const json& v, const std::string& key) {
  if (!v.is_object()) throw config_error("'" + key + "' range must be an object");
  reject_unknown(v, key, {"min", "max", "points", "log"});
  Range r{};
  if (!v.contains("min") || !v.contains("max") || !v.contains("points"))
    throw config_error("'" + key + "' range needs min, max, points");
  r.min = require_number(v.at("min"), key + ".min");
  r.max = require_number(v.at("max"), key + ".max");
  if (!v.at("points").is_number_unsigned())
    throw config_error("'" + key + ".points' must be a non-negative integer");
  r.points = v.at("points").get<std::size_t>();
  r.log_scale = v.value("log", false);
  try {
    r.validate();
  } catch (const config_error& e) {
    throw config_error("'" + key + "': " + e.what());
  }
  return r;
}

/// Scalar -> assigns target; object -> fills range slot.
void parse_scalar_or_range(const json& v, const std::string& key, double& scalar,
                           std::optional<Range>& range, bool allow_inf = false) {
  if (v.is_object()) {
    range = parse_range(v, key);
    return;
  }
  if (allow_inf && v.is_string()) {
    if (v.get<std::string>() == "inf") {
      scalar = kInf;
      return;
    }
    throw config_error("'" + key + "': only the string \"inf\" is accepted");
  }
  scalar = require_number(v, key);
}

json range_json(const Range& r) {
  return {{"min", r.min}, {"max", r.max}, {"points", r.points}, {"log", r.log_scale}};
}

}  // namespace

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw config_error("config root must be an object");
  reject_unknown(doc, "root", {"physics", "protocol", "timing", "noise", "output"});
  ExperimentConfig cfg;

  if (doc.contains("physics")) {
    const json& ph = doc.at("physics");
    reject_unknown(ph, "physics", {"species", "A_zz", "B", "B_z", "T2_star"});
    if (ph.contains("species")) {
      const std::string s = ph.at("species").get<std::string>();
      if (s == "c13") {
        cfg.base.species = Species::C13;
      } else if (s == "n15") {
        cfg.base.species = Species::N15;
      } else if (s == "custom") {
        cfg.base.species = Species::Custom;
        if (!ph.contains("A_zz"))
          throw config_error("custom species needs an explicit A_zz");
      } else {
        throw config_error("physics.species must be c13, n15 or custom");
      }
      if (cfg.base.species != Species::Custom)
        cfg.base.A_zz = default_A_zz(cfg.base.species);
    }
    if (ph.contains("A_zz"))  // ordinary MHz in, angular stored
      cfg.base.A_zz = to_angular(require_number(ph.at("A_zz"), "physics.A_zz"));
    if (ph.contains("B"))
      parse_scalar_or_range(ph.at("B"), "physics.B", cfg.base.B, cfg.B_range);
    if (ph.contains("B_z")) cfg.base.B_z = require_number(ph.at("B_z"), "physics.B_z");
    if (ph.contains("T2_star"))
      parse_scalar_or_range(ph.at("T2_star"), "physics.T2_star", cfg.base.T2_star,
                            cfg.T2_range, /*allow_inf=*/true);
  }

  if (doc.contains("protocol")) {
    const json& pr = doc.at("protocol");
    reject_unknown(pr, "protocol", {"alpha", "theta_i", "theta_f", "tau"});
    if (pr.contains("alpha"))
      cfg.base.alpha = require_number(pr.at("alpha"), "protocol.alpha");
    if (pr.contains("theta_i"))
      cfg.base.theta_i = require_number(pr.at("theta_i"), "protocol.theta_i");
    if (pr.contains("theta_f"))
      cfg.base.theta_f = require_number(pr.at("theta_f"), "protocol.theta_f");
    if (pr.contains("tau"))
      parse_scalar_or_range(pr.at("tau"), "protocol.tau", cfg.base.tau, cfg.tau_range);
  }

  if (doc.contains("timing")) {
    const json& tm = doc.at("timing");
    reject_unknown(tm, "timing", {"preset", "t_i", "t_p", "t_r", "C"});
    if (tm.contains("preset")) {
      // only the budget: the species choice stays with [physics]
      const std::string name = tm.at("preset").get<std::string>();
      if (name == "c13-cryo")
        cfg.timing = TimingBudget::c13_cryo();
      else if (name == "n15-cryo")
        cfg.timing = TimingBudget::n15_cryo();
      else if (name == "room-temp")
        cfg.timing = TimingBudget::room_temp();
      else if (name == "ramsey")
        cfg.timing = TimingBudget::ramsey();
      else
        throw config_error("unknown preset '" + name + "'");
      cfg.timing_preset = name;
    } else {
      cfg.timing_preset = "custom";
    }
    // explicit values override the preset; the echoed effective config
    // carries both so that a round-trip re-parse lands on the same budget
    if (tm.contains("t_i")) cfg.timing.t_i = require_number(tm.at("t_i"), "timing.t_i");
    if (tm.contains("t_p")) cfg.timing.t_p = require_number(tm.at("t_p"), "timing.t_p");
    if (tm.contains("t_r")) cfg.timing.t_r = require_number(tm.at("t_r"), "timing.t_r");
    if (tm.contains("C")) cfg.timing.C = require_number(tm.at("C"), "timing.C");
  }

  if (doc.contains("noise")) {
    const json& no = doc.at("noise");
    reject_unknown(no, "noise",
                   {"model", "tau_c", "dt", "n_traj", "seed", "t_max", "points"});
    if (no.contains("model")) {
      cfg.noise.model = no.at("model").get<std::string>();
      if (cfg.noise.model != "markovian" && cfg.noise.model != "ou")
        throw config_error("noise.model must be markovian or ou");
    }
    if (no.contains("tau_c")) cfg.noise.tau_c = require_number(no.at("tau_c"), "noise.tau_c");
    if (no.contains("dt")) cfg.noise.dt = require_number(no.at("dt"), "noise.dt");
    if (no.contains("n_traj")) cfg.noise.n_traj = no.at("n_traj").get<std::size_t>();
    if (no.contains("seed")) cfg.noise.seed = no.at("seed").get<std::uint64_t>();
    if (no.contains("t_max")) cfg.noise.t_max = require_number(no.at("t_max"), "noise.t_max");
    if (no.contains("points")) cfg.noise.points = no.at("points").get<std::size_t>();
    if (!(cfg.noise.tau_c > 0.0)) throw config_error("noise.tau_c must be > 0");
    if (!(cfg.noise.dt > 0.0)) throw config_error("noise.dt must be > 0");
    if (!(cfg.noise.t_max > 0.0)) throw config_error("noise.t_max must be > 0");
    if (cfg.noise.points < 2) throw config_error("noise.points must be >= 2");
  }

  if (doc.contains("output")) {
    const json& ou = doc.at("output");
    reject_unknown(ou, "output", {"path", "format", "precision"});
    if (ou.contains("path")) cfg.output.path = ou.at("path").get<std::string>();
    if (ou.contains("format")) {
      cfg.output.format = ou.at("format").get<std::string>();
      if (cfg.output.format != "csv" && cfg.output.format != "json")
        throw config_error("output.format must be csv or json");
    }
    if (ou.contains("precision")) {
      cfg.output.precision = ou.at("precision").get<int>();
      if (cfg.output.precision < 1 || cfg.output.precision > 17)
        throw config_error("output.precision must be in [1, 17]");
    }
  }

  cfg.base.validate();
  cfg.timing.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config parse: ") + e.what());
  }
  return parse_config(doc);
}

void apply_preset(ExperimentConfig& cfg, const std::string& name) {
  if (name == "c13-cryo") {
    cfg.timing = TimingBudget::c13_cryo();
    cfg.base.species = Species::C13;
    cfg.base.A_zz = default_A_zz(Species::C13);
  } else if (name == "n15-cryo") {
    cfg.timing = TimingBudget::n15_cryo();
    cfg.base.species = Species::N15;
    cfg.base.A_zz = default_A_zz(Species::N15);
  } else if (name == "room-temp") {
    cfg.timing = TimingBudget::room_temp();
    cfg.base.species = Species::C13;
    cfg.base.A_zz = default_A_zz(Species::C13);
  } else if (name == "ramsey") {
    cfg.timing = TimingBudget::ramsey();
  } else {
    throw config_error("unknown preset '" + name + "'");
  }
  cfg.timing_preset = name;
}

json ExperimentConfig::effective() const {
  const char* species =
      base.species == Species::C13 ? "c13" : base.species == Species::N15 ? "n15" : "custom";
  json physics = {{"species", species},
                  {"A_zz", from_angular(base.A_zz)},
                  {"B_z", base.B_z}};
  physics["B"] = B_range ? range_json(*B_range) : json(base.B);
  if (T2_range)
    physics["T2_star"] = range_json(*T2_range);
  else if (std::isinf(base.T2_star))
    physics["T2_star"] = "inf";
  else
    physics["T2_star"] = base.T2_star;
  json protocol = {{"alpha", base.alpha},
                   {"theta_i", base.theta_i},
                   {"theta_f", base.theta_f}};
  protocol["tau"] = tau_range ? range_json(*tau_range) : json(base.tau);
  json timing_j = {{"t_i", timing.t_i},
                   {"t_p", timing.t_p},
                   {"t_r", timing.t_r},
                   {"C", timing.C},
                   {"preset", timing_preset}};
  json noise_j = {{"model", noise.model}, {"tau_c", noise.tau_c},
                  {"dt", noise.dt},       {"n_traj", noise.n_traj},
                  {"seed", noise.seed},   {"t_max", noise.t_max},
                  {"points", noise.points}};
  json output_j = {{"path", output.path},
                   {"format", output.format},
                   {"precision", output.precision}};
  return {{"physics", physics},
          {"protocol", protocol},
          {"timing", timing_j},
          {"noise", noise_j},
          {"output", output_j}};
}

std::string ExperimentConfig::hash() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, fnv1a64(effective().dump()));
  return buf;
}

}  // namespace nvmag
