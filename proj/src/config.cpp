#include "kaon/config.hpp"

#include <cmath>

namespace kaon {

namespace {

using nlohmann::json;

template <typename T>
void read(const json& j, const char* name, T& field) {
  if (!j.contains(name)) return;
  try {
    field = j.at(name).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("config: field '") + name + "' has the wrong type");
  }
}

const json& section(const json& doc, const char* name) {
  static const json empty = json::object();
  if (!doc.contains(name)) return empty;
  const json& s = doc.at(name);
  if (!s.is_object()) throw InvalidArgument(std::string("config: '") + name + "' must be an object");
  return s;
}

}  // namespace

void AnalyticGrid::validate() const {
  if (!(tau_max >= 0.0) || !(tau_step > 0.0)) {
    throw InvalidArgument("analytic: tau_max must be >= 0 and tau_step > 0");
  }
  if (!(delta_tau_max >= delta_tau_min) || !(delta_tau_step > 0.0)) {
    throw InvalidArgument("analytic: delta_tau range must be ordered with a positive step");
  }
}

void RunConfig::validate() const {
  constants.validate();
  simulation.validate();
  binning.validate();
  analytic.validate();
  if (verify.random_triples < 1) throw InvalidArgument("verify: random_triples must be >= 1");
  if (verify.misid_samples < 1) throw InvalidArgument("verify: misid_samples must be >= 1");
  if (out_dir.empty()) throw InvalidArgument("output: dir must not be empty");
}

json to_json(const PhysicalConstants& k) { return json::parse(constants_to_json(k)); }

json to_json(const SimulationConfig& cfg) {
  json j = {
      {"kind", std::string(to_string(cfg.kind))},
      {"n_pairs", cfg.n_pairs},
      {"tau_l_grid", cfg.tau_l_grid},
      {"tau_r0", cfg.tau_r0},
      {"window", cfg.window.delta_tau_w},
      {"seed", cfg.seed},
      {"partitions", cfg.partitions},
      {"channel_filter", std::string(to_string(cfg.channel_filter))},
  };
  if (cfg.tau_l_range) j["tau_l_range"] = {cfg.tau_l_range->first, cfg.tau_l_range->second};
  return j;
}

json to_json(const Binning& b) {
  return {{"mode", b.mode == Binning::Mode::DeltaTau ? "delta_tau" : "time_pair"},
          {"width", b.width},
          {"lo", b.lo},
          {"hi", b.hi}};
}

json to_json(const RunConfig& cfg) {
  return {
      {"constants", to_json(cfg.constants)},
      {"experiment", to_json(cfg.simulation)},
      {"binning", to_json(cfg.binning)},
      {"analytic",
       {{"tau_max", cfg.analytic.tau_max},
        {"tau_step", cfg.analytic.tau_step},
        {"delta_tau_min", cfg.analytic.delta_tau_min},
        {"delta_tau_max", cfg.analytic.delta_tau_max},
        {"delta_tau_step", cfg.analytic.delta_tau_step}}},
      {"verify",
       {{"random_triples", cfg.verify.random_triples},
        {"seed", cfg.verify.seed},
        {"misid_samples", cfg.verify.misid_samples}}},
      {"output", {{"dir", cfg.out_dir}}},
  };
}

SimulationConfig simulation_config_from_json(const json& j) {
  SimulationConfig cfg;
  std::string kind = std::string(to_string(cfg.kind));
  read(j, "kind", kind);
  cfg.kind = parse_experiment_kind(kind);
  if (j.contains("n_pairs")) {
    const json& n = j.at("n_pairs");
    if (!n.is_number_integer() || n.get<long long>() < 1) {
      throw InvalidArgument("config: n_pairs must be a positive integer");
    }
    cfg.n_pairs = n.get<std::uint64_t>();
  }
  read(j, "tau_l_grid", cfg.tau_l_grid);
  if (j.contains("tau_l_range")) {
    std::vector<double> r;
    read(j, "tau_l_range", r);
    if (r.size() != 2) throw InvalidArgument("config: tau_l_range needs two values");
    cfg.tau_l_range = std::pair{r[0], r[1]};
  }
  read(j, "tau_r0", cfg.tau_r0);
  read(j, "window", cfg.window.delta_tau_w);
  read(j, "seed", cfg.seed);
  if (j.contains("partitions")) {
    const json& p = j.at("partitions");
    if (!p.is_number_integer() || p.get<long long>() < 1) {
      throw InvalidArgument("config: partitions must be a positive integer");
    }
    cfg.partitions = p.get<unsigned>();
  }
  std::string filter = std::string(to_string(cfg.channel_filter));
  read(j, "channel_filter", filter);
  cfg.channel_filter = parse_channel_filter(filter);
  return cfg;
}

Binning binning_from_json(const json& j) {
  Binning b;
  std::string mode = "delta_tau";
  read(j, "mode", mode);
  if (mode == "delta_tau") {
    b.mode = Binning::Mode::DeltaTau;
  } else if (mode == "time_pair") {
    b.mode = Binning::Mode::TimePair;
  } else {
    throw InvalidArgument("config: binning mode must be delta_tau or time_pair");
  }
  read(j, "width", b.width);
  read(j, "lo", b.lo);
  read(j, "hi", b.hi);
  return b;
}

RunConfig run_config_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidArgument("config: expected a JSON object");

  RunConfig cfg;
  if (doc.contains("constants")) cfg.constants = constants_from_json(section(doc, "constants").dump());
  cfg.simulation = simulation_config_from_json(section(doc, "experiment"));
  cfg.binning = binning_from_json(section(doc, "binning"));
  const json& a = section(doc, "analytic");
  read(a, "tau_max", cfg.analytic.tau_max);
  read(a, "tau_step", cfg.analytic.tau_step);
  read(a, "delta_tau_min", cfg.analytic.delta_tau_min);
  read(a, "delta_tau_max", cfg.analytic.delta_tau_max);
  read(a, "delta_tau_step", cfg.analytic.delta_tau_step);
  const json& v = section(doc, "verify");
  read(v, "random_triples", cfg.verify.random_triples);
  read(v, "seed", cfg.verify.seed);
  read(v, "misid_samples", cfg.verify.misid_samples);
  read(section(doc, "output"), "dir", cfg.out_dir);
  return cfg;
}

}  // namespace kaon
