#include "cli.hpp"

#include "smoothsafe/scenario.hpp"
#include "smoothsafe/sim.hpp"
#include "smoothsafe/trajectory_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <future>
#include <ostream>
#include <sstream>

namespace smoothsafe::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonArgs {
  std::string scenario;
  std::vector<std::string> overrides;
  std::string dt;
  std::string duration;
};

struct RunOutcome {
  Scenario scenario;
  TrajectoryLog log;
  Metrics metrics;
  std::vector<Verdict> verdicts;
};

std::vector<std::string> all_overrides(const CommonArgs& a) {
  std::vector<std::string> out = a.overrides;
  if (!a.dt.empty()) out.push_back("dt=" + a.dt);
  if (!a.duration.empty()) out.push_back("duration=" + a.duration);
  return out;
}

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json vector_json(const Eigen::VectorXd& v) {
  ordered_json out = ordered_json::array();
  for (double x : v) out.push_back(number_or_null(x));
  return out;
}

ordered_json metrics_json(const Metrics& m) {
  return {{"min_h", number_or_null(m.min_h)},
          {"goal_error_final", number_or_null(m.goal_error_final)},
          {"velocity_tracking_rms", number_or_null(m.velocity_tracking_rms)},
          {"control_rate_max", number_or_null(m.control_rate_max)},
          {"violations", m.violations}};
}

ordered_json verdicts_json(const std::vector<Verdict>& vs) {
  ordered_json out = ordered_json::array();
  for (const Verdict& v : vs)
    out.push_back({{"name", v.name}, {"applicable", v.applicable}, {"pass", v.pass}, {"detail", v.detail}});
  return out;
}

bool all_pass(const std::vector<Verdict>& vs) {
  for (const Verdict& v : vs)
    if (v.applicable && !v.pass) return false;
  return true;
}

RunOutcome simulate(const Scenario& sc) {
  RunOutcome r{sc, run_scenario(sc), {}, {}};
  r.metrics = compute_metrics(r.log);
  r.verdicts = evaluate_verdicts(sc, r.log, r.metrics);
  return r;
}

ordered_json monitors_json(const RunOutcome& r) {
  ordered_json mon = ordered_json::object();
  if (r.scenario.filter.kind == FilterKind::GatedQP)
    mon["gate_boundary_sigma_min"] = number_or_null(gate_boundary_sigma_min(r.log, r.scenario.filter.gate.delta));
  return mon;
}

fs::path prepare_out_dir(const std::string& dir) {
  const fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw ConfigError("--out", "cannot create directory " + dir + ": " + ec.message());
  return p;
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

int cmd_run(const CommonArgs& a, const std::string& out_dir, std::ostream& out) {
  const Scenario sc = load_scenario(a.scenario, all_overrides(a));
  const RunOutcome r = simulate(sc);
  const fs::path dir = prepare_out_dir(out_dir);
  const fs::path csv = dir / (stem_of(a.scenario) + ".csv");
  const fs::path report_path = dir / (stem_of(a.scenario) + ".report.json");

  ordered_json report;
  report["scenario"] = ordered_json::parse(scenario_to_json(sc).dump());
  report["metrics"] = metrics_json(r.metrics);
  report["verdicts"] = verdicts_json(r.verdicts);
  report["monitors"] = monitors_json(r);
  report["files"] = {{"trajectory", csv.string()}, {"report", report_path.string()}};
  const std::string text = report.dump(2) + "\n";

  write_file_atomic(csv, to_csv(r.log));
  write_file_atomic(report_path, text);
  out << text;
  return all_pass(r.verdicts) ? kExitOk : kExitInvariant;
}

StateVec parse_state(const std::string& s) {
  std::vector<double> vals;
  std::string cell;
  std::string cleaned;
  for (char c : s)
    if (c != '[' && c != ']' && c != ' ') cleaned.push_back(c);
  std::istringstream ss(cleaned);
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ConfigError("--state", "not a number: '" + cell + "'");
    }
  }
  return Eigen::Map<StateVec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

int cmd_eval(const CommonArgs& a, const std::string& state_text, std::ostream& out) {
  const Scenario sc = load_scenario(a.scenario, all_overrides(a));
  const StateVec x = parse_state(state_text);
  if (x.size() != sc.state_dim())
    throw ConfigError("--state", "state has " + std::to_string(x.size()) + " entries, " + to_string(sc.system) +
                                     " needs " + std::to_string(sc.state_dim()));
  const SafetyDesign design = sc.design();
  const StateVec p = x.head(2);
  const FilterOutput f = design.evaluate(p);

  ordered_json doc;
  doc["state"] = vector_json(x);
  doc["u0"] = vector_json(design.nominal(p));
  doc["u_star"] = vector_json(f.u_star);
  doc["h"] = number_or_null(f.h);
  doc["sigma"] = number_or_null(f.sigma);
  doc["gate_or_psi"] = number_or_null(f.gate_or_psi);
  doc["correction"] = vector_json(f.correction);
  doc["constraint_active"] = f.constraint_active;
  ordered_json residuals = ordered_json::array();
  for (const Barrier& b : design.barriers) {
    const LieData lie = lie_derivatives(design.system, b, p);
    residuals.push_back(hdot_under_filter(lie, f.u_star) + classk_eval(b.value(p), sc.filter.classk));
  }
  doc["cbf_residual"] = residuals;
  out << doc.dump(2) << "\n";
  return kExitOk;
}

std::vector<FilterKind> parse_kinds(const std::string& s) {
  std::vector<FilterKind> kinds;
  std::istringstream ss(s);
  std::string name;
  while (std::getline(ss, name, ','))
    if (!name.empty()) kinds.push_back(parse_filter_kind(name));
  if (kinds.size() < 2) throw ConfigError("--kinds", "compare needs at least two filter kinds");
  return kinds;
}

std::string merged_csv(const std::vector<RunOutcome>& runs) {
  std::ostringstream os;
  const TrajectoryLog& first = runs.front().log;
  os << "# system=" << to_string(first.system) << "\n# dt=" << format_double(first.dt) << "\n";
  os << "t";
  for (const RunOutcome& r : runs) {
    const std::string prefix = to_string(r.scenario.filter.kind) + ":";
    const auto cols = csv_columns(r.log);
    for (std::size_t c = 1; c < cols.size(); ++c) os << ',' << prefix << cols[c];
  }
  os << '\n';
  std::vector<std::vector<std::string>> lines;
  for (const RunOutcome& r : runs) {
    std::istringstream in(to_csv(r.log));
    std::string line;
    std::vector<std::string> body;
    while (std::getline(in, line))
      if (!line.empty() && line[0] != '#') body.push_back(line);
    body.erase(body.begin());  // header row
    lines.push_back(std::move(body));
  }
  for (std::size_t k = 0; k < first.size(); ++k) {
    os << format_double(first.t[k]);
    for (const auto& body : lines) os << body[k].substr(body[k].find(','));
    os << '\n';
  }
  return os.str();
}

int cmd_compare(const CommonArgs& a, const std::string& kinds_text, const std::string& out_dir,
                std::ostream& out) {
  const std::vector<FilterKind> kinds = parse_kinds(kinds_text);
  const Scenario base = load_scenario(a.scenario, all_overrides(a));
  std::vector<Scenario> scenarios;
  for (FilterKind k : kinds) {
    Scenario sc = base;
    sc.filter.kind = k;
    sc.validate();
    scenarios.push_back(std::move(sc));
  }

  std::vector<std::future<RunOutcome>> jobs;
  for (const Scenario& sc : scenarios) jobs.push_back(std::async(std::launch::async, simulate, sc));
  std::vector<RunOutcome> runs;
  for (auto& j : jobs) runs.push_back(j.get());

  const fs::path dir = prepare_out_dir(out_dir);
  const fs::path csv = dir / (stem_of(a.scenario) + ".compare.csv");
  const fs::path report_path = dir / (stem_of(a.scenario) + ".compare.json");

  ordered_json report;
  report["scenario"] = ordered_json::parse(scenario_to_json(base).dump());
  ordered_json table = ordered_json::array();
  bool ok = true;
  for (const RunOutcome& r : runs) {
    ordered_json row;
    row["kind"] = to_string(r.scenario.filter.kind);
    row["metrics"] = metrics_json(r.metrics);
    row["verdicts"] = verdicts_json(r.verdicts);
    row["monitors"] = monitors_json(r);
    table.push_back(row);
    ok = ok && all_pass(r.verdicts);
  }
  report["runs"] = table;
  report["files"] = {{"trajectory", csv.string()}, {"report", report_path.string()}};
  const std::string text = report.dump(2) + "\n";

  write_file_atomic(csv, merged_csv(runs));
  write_file_atomic(report_path, text);

  out << "kind                 min_h                goal_error           control_rate_max     tracking_rms\n";
  for (const RunOutcome& r : runs) {
    char line[160];
    std::snprintf(line, sizeof line, "%-20s %-20.12g %-20.12g %-20.12g %-20.12g\n",
                  to_string(r.scenario.filter.kind).c_str(), r.metrics.min_h, r.metrics.goal_error_final,
                  r.metrics.control_rate_max, r.metrics.velocity_tracking_rms);
    out << line;
  }
  out << "report: " << report_path.string() << "\n";
  return ok ? kExitOk : kExitInvariant;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Smooth safety filters: simulate scenarios, evaluate filters, compare kinds"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string out_dir = "out";
  std::string state_text;
  std::string kinds_text;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", common.scenario, "scenario JSON file")->required();
    sub->add_option("--set", common.overrides, "dotted.key=value override (repeatable)");
    sub->add_option("--dt", common.dt, "time step override [s]");
    sub->add_option("--duration", common.duration, "duration override [s]");
  };

  CLI::App* run = app.add_subcommand("run", "simulate a scenario, write trajectory CSV and report JSON");
  add_common(run);
  run->add_option("--out", out_dir, "output directory");

  CLI::App* eval = app.add_subcommand("eval", "evaluate the filter at one state and print JSON");
  add_common(eval);
  eval->add_option("--state", state_text, "comma-separated state vector")->required();

  CLI::App* compare = app.add_subcommand("compare", "run one scenario under several filter kinds");
  add_common(compare);
  compare->add_option("--kinds", kinds_text, "comma-separated filter kinds (at least two)")->required();
  compare->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(common, out_dir, out);
    if (eval->parsed()) return cmd_eval(common, state_text, out);
    return cmd_compare(common, kinds_text, out_dir, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SimulationError& e) {
    err << "simulation error at " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace smoothsafe::cli
