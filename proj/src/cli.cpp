#include "kaon/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "kaon/event_io.hpp"
#include "kaon/verification.hpp"

namespace kaon::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> pairs;
  std::optional<std::string> kind;
  std::optional<std::string> out;
  std::string events_path;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw InvalidArgument("cannot write " + p.string());
  f << content;
  f.flush();
  if (!f) throw InvalidArgument("write failed for " + p.string());
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw InvalidArgument("output directory '" + dir + "' is not writable");
  }
  return fs::path(dir);
}

RunConfig load_config(const Options& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : run_config_from_json(read_file(o.config_path));
  if (o.seed) {
    cfg.simulation.seed = *o.seed;
    cfg.verify.seed = *o.seed;
  }
  if (o.pairs) {
    if (*o.pairs == 0) throw InvalidArgument("--pairs must be positive");
    cfg.simulation.n_pairs = *o.pairs;
  }
  if (o.kind) cfg.simulation.kind = parse_experiment_kind(*o.kind);
  if (o.out) cfg.out_dir = *o.out;
  cfg.validate();
  return cfg;
}

std::vector<double> steps(double lo, double hi, double step) {
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

json meta_json(const RunConfig& cfg, const std::string& command) {
  return {{"command", command}, {"config", to_json(cfg)}, {"seed", cfg.simulation.seed}};
}

int cmd_analytic(const RunConfig& cfg, std::ostream& out) {
  const fs::path dir = prepare_out_dir(cfg.out_dir);
  write_file(dir / "single_kaon.csv", single_kaon_csv(cfg.analytic, cfg.constants));
  write_file(dir / "joint.csv", joint_csv(cfg.analytic, cfg.constants));
  write_file(dir / "analytic_meta.json", meta_json(cfg, "analytic").dump(2) + "\n");
  out << "wrote " << (dir / "single_kaon.csv").string() << " and " << (dir / "joint.csv").string()
      << "\n";
  return kSuccess;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const fs::path dir = prepare_out_dir(cfg.out_dir);
  const AmplitudeModel model = build_amplitude_model(cfg.constants);
  const EventSet set = run_experiment(cfg.simulation, cfg.constants, model);

  std::ostringstream events;
  json extra = {{"constants", to_json(cfg.constants)}};
  write_events(events, set, extra.dump());
  write_file(dir / "events.csv", events.str());

  const json summary = simulation_summary(cfg, set);
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  out << "wrote " << set.events.size() << " records to " << (dir / "events.csv").string() << "\n";
  if (summary.contains("pre_detector_decay")) {
    out << "pre-detector decay fraction: " << summary["pre_detector_decay"]["fraction"].get<double>()
        << " +- " << summary["pre_detector_decay"]["stderr"].get<double>() << "\n";
  }
  return kSuccess;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  VerifySettings s;
  s.random_triples = cfg.verify.random_triples;
  s.seed = cfg.verify.seed;
  s.misid_samples = cfg.verify.misid_samples;
  s.window = cfg.simulation.window;
  bool failed = false;
  for (const auto& r : run_verification(cfg.constants, s)) {
    char line[64];
    std::snprintf(line, sizeof line, "worst=%.3e tol=%.1e", r.worst_deviation, r.tolerance);
    out << to_string(r.status) << "  " << r.name << "  " << line;
    if (!r.detail.empty()) out << "  [" << r.detail << "]";
    out << "\n";
    failed = failed || r.status == CheckStatus::Fail;
  }
  return failed ? kVerificationFailure : kSuccess;
}

int cmd_fit(const RunConfig& cfg, const std::string& events_path, std::ostream& out) {
  std::ifstream in(events_path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + events_path);
  const EventSet set = read_events(in);
  const fs::path dir = prepare_out_dir(cfg.out_dir);
  const auto points = fit_visibility(estimate_probs(set.events, cfg.binning), cfg.constants);
  write_file(dir / "visibility.csv", visibility_csv(points));
  json meta = meta_json(cfg, "fit");
  meta["events"] = events_path;
  meta["events_experiment"] = to_json(set.config);
  meta["seed"] = set.config.seed;
  meta["rng_scheme"] = set.rng_scheme;
  write_file(dir / "visibility_meta.json", meta.dump(2) + "\n");
  out << "wrote " << points.size() << " bins to " << (dir / "visibility.csv").string() << "\n";
  return kSuccess;
}

}  // namespace

std::string format_csv(double x) {
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string single_kaon_csv(const AnalyticGrid& grid, const PhysicalConstants& k) {
  std::ostringstream os;
  os << "tau,p_k0,p_k0bar,p_ks,p_kl,visibility\n";
  for (double t : steps(0.0, grid.tau_max, grid.tau_step)) {
    const auto s = strangeness_probs(t, k);
    const auto l = lifetime_probs(t, k);
    os << format_csv(t) << ',' << format_csv(s.first) << ',' << format_csv(s.second) << ','
       << format_csv(l.first) << ',' << format_csv(l.second) << ','
       << format_csv(visibility_single(t, k)) << '\n';
  }
  return os.str();
}

std::string joint_csv(const AnalyticGrid& grid, const PhysicalConstants& k) {
  std::ostringstream os;
  os << "delta_tau,p_like,p_unlike,p_s_ks,p_s_kl,visibility\n";
  for (double dt : steps(grid.delta_tau_min, grid.delta_tau_max, grid.delta_tau_step)) {
    os << format_csv(dt) << ',' << format_csv(closed_form_joint(JointKind::StrangenessLike, dt, k))
       << ',' << format_csv(closed_form_joint(JointKind::StrangenessUnlike, dt, k)) << ','
       << format_csv(closed_form_joint(JointKind::StrangenessShort, dt, k)) << ','
       << format_csv(closed_form_joint(JointKind::StrangenessLong, dt, k)) << ','
       << format_csv(pair_visibility(dt, k)) << '\n';
  }
  return os.str();
}

std::string visibility_csv(const std::vector<VisibilityPoint>& points) {
  std::ostringstream os;
  os << "delta_tau_bin,v_hat,stderr,excluded_flag\n";
  for (const auto& p : points) {
    os << format_csv(p.delta_tau) << ',' << format_csv(p.v_hat) << ',' << format_csv(p.std_err)
       << ',' << (p.excluded ? 1 : 0) << '\n';
  }
  return os.str();
}

PreDetectorFraction pre_detector_fraction(const std::vector<EventRecord>& events) {
  PreDetectorFraction f;
  f.total = events.size();
  for (const auto& e : events) {
    if (e.right && e.right->observable == Observable::Lifetime) ++f.decayed;
  }
  if (f.total > 0) {
    f.fraction = static_cast<double>(f.decayed) / static_cast<double>(f.total);
    f.std_err = std::sqrt(f.fraction * (1.0 - f.fraction) / static_cast<double>(f.total));
  }
  return f;
}

json estimates_to_json(const std::vector<Estimate>& estimates) {
  json arr = json::array();
  for (const auto& e : estimates) {
    arr.push_back({{"left_observable", std::string(to_string(e.bin.left_observable))},
                   {"right_observable", std::string(to_string(e.bin.right_observable))},
                   {"bin_a", e.bin.index_a},
                   {"bin_b", e.bin.index_b},
                   {"center_a", e.center_a},
                   {"center_b", e.center_b},
                   {"mean_delta_tau", e.mean_delta_tau},
                   {"left_outcome", std::string(to_string(e.outcomes.left))},
                   {"right_outcome", std::string(to_string(e.outcomes.right))},
                   {"count", e.count},
                   {"n", e.n},
                   {"p_hat", e.p_hat},
                   {"stderr", e.std_err}});
  }
  return arr;
}

json simulation_summary(const RunConfig& cfg, const EventSet& set) {
  std::uint64_t discarded = 0;
  for (const auto& e : set.events) discarded += e.discarded() ? 1 : 0;
  json s;
  s["records"] = set.events.size();
  s["counts"] = {{"total", set.events.size()},
                 {"kept", set.events.size() - discarded},
                 {"discarded", discarded}};
  s["seed"] = set.config.seed;
  s["partitions"] = set.config.partitions;
  s["rng_scheme"] = set.rng_scheme;
  s["config"] = to_json(cfg);
  if (set.config.kind == ExperimentKind::B) {
    const auto f = pre_detector_fraction(set.events);
    s["pre_detector_decay"] = {
        {"decayed", f.decayed}, {"total", f.total}, {"fraction", f.fraction}, {"stderr", f.std_err}};
  }
  s["estimates"] = discarded == set.events.size()
                       ? json::array()
                       : estimates_to_json(estimate_probs(set.events, cfg.binning));
  return s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neutral kaon quantum eraser: analytic curves, simulation, verification, fits"};
  app.require_subcommand(1);
  Options o;
  const auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--pairs", o.pairs, "number of pairs");
    sub->add_option("--kind", o.kind, "experiment kind")
        ->check(CLI::IsMember({"A1", "A2", "B", "C", "D"}));
    sub->add_option("--out", o.out, "output directory");
  };
  auto* analytic = app.add_subcommand("analytic", "write single-kaon and joint probability curves");
  auto* simulate = app.add_subcommand("simulate", "generate an event file and summary");
  auto* verify = app.add_subcommand("verify", "run the identity and normalization checks");
  auto* fit = app.add_subcommand("fit", "fit visibility per delta-tau bin from an event file");
  for (auto* sub : {analytic, simulate, verify, fit}) common(sub);
  fit->add_option("events", o.events_path, "event file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidationError;
  }

  try {
    const RunConfig cfg = load_config(o);
    if (*analytic) return cmd_analytic(cfg, out);
    if (*simulate) return cmd_simulate(cfg, out);
    if (*verify) return cmd_verify(cfg, out);
    return cmd_fit(cfg, o.events_path, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  }
}

}  // namespace kaon::cli
