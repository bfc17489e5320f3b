/*******************************************************************************
 * Copyright 2026 The sixbar Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *******************************************************************************/

// sixbar: search, evaluate and export six-bar leg mechanisms.
//
// Exit codes: 0 ok, 1 I/O or internal error, 2 configuration error,
// 3 infeasible mechanism, 4 reproduction failure.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sixbar.hpp"

using namespace sixbar;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kIo = 1, kConfig = 2, kInfeasible = 3, kReproduction = 4 };

struct ReproductionFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Options shared by the subcommands that evaluate mechanisms.
struct EvalOpts {
  std::string config;
  std::optional<int> N, M, branch_bcd, branch_efg;
  std::string theta_frame, report;
  bool normalize = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "run configuration (JSON)");
    app->add_option("--N", N, "support samples")->check(CLI::Range(3, 1 << 20));
    app->add_option("--M", M, "cycle samples")->check(CLI::Range(2, 1 << 22));
    app->add_option("--branch-bcd", branch_bcd, "dyad BCD branch (+1/-1)");
    app->add_option("--branch-efg", branch_efg, "dyad EFG branch (+1/-1)");
    app->add_option("--theta-frame", theta_frame, "CouplerEF or CrankFG");
    app->add_option("--report", report, "realized or fitted");
    app->add_flag("--normalize-stride", normalize, "rescale each mechanism to unit stride");
  }

  void apply(EvalSettings& e) const {
    if (N) e.N = *N;
    if (M) e.M = *M;
    if (branch_bcd) e.conventions.branch_BCD = *branch_bcd;
    if (branch_efg) e.conventions.branch_EFG = *branch_efg;
    if (!theta_frame.empty()) e.conventions.theta_frame = io::parse_theta_frame(theta_frame);
    if (!report.empty()) e.report = io::parse_report(report);
    if (normalize) e.normalize_stride = true;
    if (e.N < 3 || e.M < 2) throw io::ConfigError("grid sizes too small");
    for (int b : {e.conventions.branch_BCD, e.conventions.branch_EFG})
      if (b != 1 && b != -1) throw io::ConfigError("branch signs must be +1 or -1");
  }
};

// A mechanism named on the command line, by fixture label or 13 values.
struct MechanismOpts {
  std::string fixture;
  std::vector<double> params;

  void attach(CLI::App* app) {
    auto* f = app->add_option("--fixture", fixture, "published solution label (e.g. 7146)");
    auto* p = app->add_option("--params", params, "p1..p13, comma separated")->delimiter(',')->expected(13);
    f->excludes(p);
  }

  MechanismParams resolve() const {
    if (!fixture.empty()) return io::load_fixtures().at(fixture).params;
    if (params.size() != kParamCount) throw io::ConfigError("give --fixture or 13 --params values");
    ParamVector v;
    std::copy(params.begin(), params.end(), v.begin());
    const MechanismParams p = MechanismParams::from_vector(v);
    if (auto e = p.validate(); !e.empty()) throw io::ConfigError(e);
    return p;
  }
};

// Defaults from the fixture manifest, then config file, then flags.
EvalSettings eval_settings(const EvalOpts& o) {
  EvalSettings e;
  if (!o.config.empty()) {
    e = io::load_config(o.config).eval;
  } else {
    const auto m = io::load_fixtures().manifest;
    e.conventions = m.conventions;
    e.N = m.N;
    e.M = m.calibrated_M;
    e.report = m.report;
  }
  o.apply(e);
  return e;
}

int env_threads() {
  const char* v = std::getenv("SIXBAR_THREADS");
  if (!v || !*v) return -1;
  try {
    const int n = std::stoi(v);
    if (n < 0) throw std::invalid_argument("negative");
    return n;
  } catch (const std::exception&) {
    throw io::ConfigError(std::string("SIXBAR_THREADS must be a non-negative integer, got '") + v + "'");
  }
}

json vars_json(const DesignVars& v) {
  return {{"x1", v.x_P}, {"x2", v.y_P}, {"x3", v.xi_0}, {"x4", v.eta_0}, {"x5", v.stride}};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json criteria_json(const CriteriaVector& c) {
  json j;
  for (int k = 0; k < 6; ++k) j["c" + std::to_string(k + 1)] = finite_or_null(c[k]);
  j["h_max"] = finite_or_null(c.h_max);
  return j;
}

DesignVars synthesized_vars(const MechanismParams& p, const EvalSettings& e) {
  const SupportGrid g = trace_support(p, e.conventions, e.N);
  return report_vars(g, synth5(g).vars, e.report);
}

// search / local share everything after the box is known
struct SearchOpts {
  std::optional<std::uint64_t> trials, offset;
  std::optional<int> threads;
  std::string out, filtered;
  std::string sort_key, sort_order;

  void attach(CLI::App* app) {
    app->add_option("--trials", trials, "number of LP-tau trials");
    app->add_option("--offset", offset, "skip this many leading trials (resume)");
    app->add_option("--threads", threads, "worker threads, 0 = all cores");
    app->add_option("--out", out, "trial table CSV");
    app->add_option("--filtered", filtered, "filtered and sorted trial table CSV");
    app->add_option("--sort", sort_key, "sort key c1..c6 for the filtered table");
    app->add_option("--order", sort_order, "asc or desc")->check(CLI::IsMember({"asc", "desc"}));
  }
};

int run_search(io::RunConfig cfg, const EvalOpts& eo, const SearchOpts& so) {
  eo.apply(cfg.eval);
  if (so.trials) cfg.trials = *so.trials;
  if (so.offset) cfg.offset = *so.offset;
  if (const int env = env_threads(); env >= 0) cfg.threads = env;
  if (so.threads) cfg.threads = *so.threads;
  if (!so.out.empty()) cfg.output.trials = so.out;
  if (!so.filtered.empty()) cfg.output.filtered = so.filtered;
  if (!so.sort_key.empty() || !so.sort_order.empty()) {
    io::SortSpec spec = cfg.sort.value_or(io::SortSpec{});
    if (!so.sort_key.empty()) {
      const auto k = parse_criterion(so.sort_key);
      if (!k) throw io::ConfigError("--sort must be one of c1..c6");
      spec.key = *k;
    }
    if (!so.sort_order.empty()) spec.order = so.sort_order == "asc" ? SortOrder::Ascending : SortOrder::Descending;
    cfg.sort = spec;
  }
  io::validate(cfg);

  const TrialTable table = run_global(cfg.box, cfg.trials, cfg.search_settings());
  std::size_t counts[4] = {};
  for (const auto& r : table) ++counts[static_cast<int>(r.status)];
  TrialTable kept = filter_table(table, cfg.filters);
  if (cfg.sort) kept = sort_table(kept, cfg.sort->key, cfg.sort->order);

  if (!cfg.output.trials.empty()) io::export_trials(table, cfg.output.trials);
  if (!cfg.output.filtered.empty()) io::export_trials(kept, cfg.output.filtered);
  std::printf("trials %llu..%llu: ok %zu, assembly_failed %zu, singular %zu, nonrotating %zu; %zu pass filters\n",
              static_cast<unsigned long long>(cfg.offset + 1), static_cast<unsigned long long>(cfg.offset + cfg.trials),
              counts[0], counts[1], counts[2], counts[3], kept.size());
  const std::size_t show = std::min<std::size_t>(kept.size(), 10);
  for (std::size_t i = 0; i < show; ++i) {
    const auto& r = kept[i];
    std::printf("  %8llu  c1 %.4f  c2 %.4f  c3 %6.2f  c4 %.3f  c5 %.3f  c6 %.3f\n",
                static_cast<unsigned long long>(r.index), r.criteria.c1, r.criteria.c2, r.criteria.c3, r.criteria.c4,
                r.criteria.c5, r.criteria.c6);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesis and search of six-bar walking-leg mechanisms"};
  app.require_subcommand(1);

  // eval
  auto* eval = app.add_subcommand("eval", "synthesize and score one mechanism");
  EvalOpts eval_o;
  MechanismOpts eval_m;
  eval_o.attach(eval);
  eval_m.attach(eval);

  // search
  auto* search = app.add_subcommand("search", "LP-tau search over the configured box");
  EvalOpts search_e;
  SearchOpts search_o;
  search_e.attach(search);
  search_o.attach(search);
  search->get_option("--config")->required();

  // local
  auto* local = app.add_subcommand("local", "LP-tau search in a box around one mechanism");
  EvalOpts local_e;
  SearchOpts local_o;
  MechanismOpts local_m;
  double fraction = 0.20, angle_scale = 30.0;
  local_e.attach(local);
  local_o.attach(local);
  local_m.attach(local);
  local->add_option("--fraction", fraction, "relative half-width for lengths")->check(CLI::Range(1e-9, 0.999));
  local->add_option("--angle-scale", angle_scale, "angle half-width per unit fraction [deg]");

  // filter
  auto* filter = app.add_subcommand("filter", "filter and sort an existing trial table");
  std::string filter_in, filter_out, filter_key = "c6", filter_order = "desc";
  std::map<std::string, std::optional<double>> bounds;
  filter->add_option("--in", filter_in, "trial table CSV")->required();
  filter->add_option("--out", filter_out, "output CSV (default stdout)");
  filter->add_option("--sort", filter_key, "c1..c6");
  filter->add_option("--order", filter_order)->check(CLI::IsMember({"asc", "desc"}));
  for (const char* b : {"c1-max", "c2-min", "c2-max", "c3-min", "c4-min", "c4-max", "c5-max", "c6-min"})
    filter->add_option(std::string("--") + b, bounds[b]);

  // trace
  auto* trace = app.add_subcommand("trace", "full-cycle foot trajectory as CSV");
  EvalOpts trace_e;
  MechanismOpts trace_m;
  std::vector<double> trace_vars;
  std::string trace_out;
  trace_e.attach(trace);
  trace_m.attach(trace);
  trace->add_option("--vars", trace_vars, "x1..x5 (default: synthesized)")->delimiter(',')->expected(5);
  trace->add_option("--out", trace_out, "CSV path")->required();

  // plot
  auto* plot = app.add_subcommand("plot", "draw the mechanism and its foot path as SVG");
  EvalOpts plot_e;
  MechanismOpts plot_m;
  std::vector<double> plot_vars;
  std::string plot_out;
  double plot_phi = 0.0;
  plot_e.attach(plot);
  plot_m.attach(plot);
  plot->add_option("--vars", plot_vars, "x1..x5 (default: synthesized)")->delimiter(',')->expected(5);
  plot->add_option("--phi", plot_phi, "crank angle of the drawn pose [deg]");
  plot->add_option("--out", plot_out, "SVG path")->required();

  // reproduce
  auto* reproduce = app.add_subcommand("reproduce", "recompute the published solutions");
  std::string fixtures_path;
  bool sweep = false;
  std::vector<int> calibrate;
  reproduce->add_option("--fixtures", fixtures_path, "solutions JSON (default: shipped data)");
  reproduce->add_flag("--sweep", sweep, "try every assembly convention and grid size");
  reproduce->add_option("--calibrate", calibrate, "scan cycle samples M over LO,HI")->delimiter(',')->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  auto explicit_vars = [](const std::vector<double>& v, const MechanismParams& p, const EvalSettings& e) {
    return v.empty() ? synthesized_vars(p, e) : DesignVars{v[0], v[1], v[2], v[3], v[4]};
  };

  try {
    if (*eval) {
      const MechanismParams p = eval_m.resolve();
      const EvalSettings e = eval_settings(eval_o);
      const TrialRecord r = evaluate_trial(p, e);
      json out{{"status", to_string(r.status)},
               {"conventions",
                {{"branch_BCD", e.conventions.branch_BCD},
                 {"branch_EFG", e.conventions.branch_EFG},
                 {"theta_frame", io::to_string(e.conventions.theta_frame)}}},
               {"grid", {{"N", e.N}, {"M", e.M}}},
               {"report", io::to_string(e.report)}};
      if (r.status != TrialStatus::AssemblyFailed && r.status != TrialStatus::Singular) {
        out["vars"] = vars_json(r.vars);
        out["criteria"] = criteria_json(r.criteria);
      }
      std::cout << out.dump(2) << '\n';
      return r.status == TrialStatus::Ok ? kOk : kInfeasible;
    }
    if (*search) return run_search(io::load_config(search_e.config), search_e, search_o);
    if (*local) {
      io::RunConfig cfg;
      if (!local_e.config.empty()) {
        cfg = io::load_config(local_e.config);
      } else {
        cfg.trials = 4096;
        cfg.eval = eval_settings(local_e);
      }
      cfg.box = local_box(local_m.resolve(), fraction, angle_scale);
      return run_search(cfg, local_e, local_o);
    }
    if (*filter) {
      FilterLimits f;
      f.c1_max = bounds["c1-max"];
      f.c2_min = bounds["c2-min"];
      f.c2_max = bounds["c2-max"];
      f.c3_min = bounds["c3-min"];
      f.c4_min = bounds["c4-min"];
      f.c4_max = bounds["c4-max"];
      f.c5_max = bounds["c5-max"];
      f.c6_min = bounds["c6-min"];
      if (auto err = f.validate(); !err.empty()) throw io::ConfigError(err);
      const auto key = parse_criterion(filter_key);
      if (!key) throw io::ConfigError("--sort must be one of c1..c6");
      const TrialTable kept = sort_table(filter_table(io::import_trials(filter_in), f), *key,
                                         filter_order == "asc" ? SortOrder::Ascending : SortOrder::Descending);
      if (filter_out.empty())
        io::write_trials(std::cout, kept);
      else
        io::export_trials(kept, filter_out);
      return kOk;
    }
    if (*trace) {
      const MechanismParams p = trace_m.resolve();
      const EvalSettings e = eval_settings(trace_e);
      io::export_trace(p, explicit_vars(trace_vars, p, e), e.conventions, e.M, trace_out);
      return kOk;
    }
    if (*plot) {
      const MechanismParams p = plot_m.resolve();
      const EvalSettings e = eval_settings(plot_e);
      io::render_svg(p, explicit_vars(plot_vars, p, e), e.conventions, deg_to_rad(plot_phi), plot_out);
      return kOk;
    }
    if (*reproduce) {
      const io::FixtureSet set = fixtures_path.empty() ? io::load_fixtures() : io::load_fixtures(fixtures_path);
      if (!calibrate.empty()) {
        if (calibrate[0] < 2 || calibrate[1] < calibrate[0]) throw io::ConfigError("--calibrate needs 2 <= LO <= HI");
        const auto pts = io::calibrate_M(set, io::manifest_config(set.manifest), calibrate[0], calibrate[1]);
        const auto& best = io::best_calibration(pts);
        std::printf("best M %d (mean relative c5/c6 error %.3e); manifest M %d\n", best.M, best.score,
                    set.manifest.calibrated_M);
      }
      io::ReproductionReport report;
      if (sweep) {
        const io::SweepResult sw = io::convention_sweep(set, set.manifest.calibrated_M);
        for (const auto& e : sw.entries)
          std::printf("%-70s max x rel err %.3e %s\n", io::describe(e.config).c_str(), e.max_vars_rel_error,
                      e.hard_pass ? "PASS" : "fail");
        std::printf("best: %s\n\n", io::describe(sw.entries[sw.best].config).c_str());
        report = sw.best_report;
      } else {
        report = io::reproduce_tables(set);
      }
      std::cout << io::format_report(report);
      return report.hard_pass ? kOk : kReproduction;
    }
  } catch (const io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const io::InfeasibleCycleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const AssemblyError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const SingularSystemError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}
