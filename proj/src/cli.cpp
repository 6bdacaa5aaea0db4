// SPDX-License-Identifier: Apache-2.0
#include "riskcr/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "riskcr/one_max_search.hpp"
#include "riskcr/simulation.hpp"
#include "riskcr/ski_rental_continuous.hpp"
#include "riskcr/ski_rental_discrete.hpp"

namespace riskcr {
namespace {

using nlohmann::json;

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct CommonOpts {
  std::vector<double> deltas;
  double delta = 0.0;
  int buy_cost = 2;
  double low = 1.0;
  double high = 100.0;
  double tol = 0.0;
  int grid = 0;
  std::uint64_t seed = 1;
  long long samples = 1'000'000;
  bool as_json = false;
  std::string out_path;
  std::string svg_path;
  std::vector<std::string> series;
};

SolverConfig solver_config(const CommonOpts& o) {
  SolverConfig cfg;
  cfg.grid_points = o.grid;
  cfg.bisect_tol = o.tol;
  return cfg;
}

json config_json(const SolverConfig& cfg) {
  return json{{"grid_points", cfg.grid_points},
              {"bisect_tol", cfg.bisect_tol},
              {"max_bisect_iters", cfg.max_bisect_iters},
              {"adversary_grid_points", cfg.adversary_grid_points}};
}

// ---------------------------------------------------------------------------
// Sweep plumbing

struct SweepRow {
  double delta = 0.0;
  std::optional<double> optimal;
  std::optional<double> suboptimal;
  std::optional<double> upper_bound;
  std::optional<double> lower_bound;
};

bool series_requested(const std::vector<std::string>& series, const std::string& name) {
  return std::find(series.begin(), series.end(), name) != series.end();
}

int write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot open " << path << " for writing\n";
    return kExitIo;
  }
  f << "delta,optimal,suboptimal,upper_bound,lower_bound\n";
  const auto cell = [](const std::optional<double>& v) { return v ? fmt9(*v) : std::string(); };
  for (const auto& r : rows) {
    f << fmt9(r.delta) << ',' << cell(r.optimal) << ',' << cell(r.suboptimal) << ','
      << cell(r.upper_bound) << ',' << cell(r.lower_bound) << '\n';
  }
  f.flush();
  if (!f) {
    err << "error: short write to " << path << '\n';
    return kExitIo;
  }
  return kExitOk;
}

// Minimal self-contained SVG line chart: one polyline per series, ticked axes.
int write_sweep_svg(const std::vector<SweepRow>& rows, const std::string& path, std::ostream& err) {
  struct Series {
    const char* name;
    const char* color;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series = {{"optimal", "#1f77b4", {}},
                                {"suboptimal", "#ff7f0e", {}},
                                {"upper_bound", "#2ca02c", {}},
                                {"lower_bound", "#d62728", {}}};
  for (const auto& r : rows) {
    const std::optional<double>* cols[4] = {&r.optimal, &r.suboptimal, &r.upper_bound,
                                            &r.lower_bound};
    for (int i = 0; i < 4; ++i)
      if (*cols[i]) series[static_cast<std::size_t>(i)].pts.emplace_back(r.delta, **cols[i]);
  }
  double ymin = 1e300, ymax = -1e300, xmin = 1e300, xmax = -1e300;
  for (const auto& s : series) {
    for (auto [x, y] : s.pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (ymin > ymax) {
    err << "error: nothing to plot\n";
    return kExitUsage;
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  const double pad = std::max(1e-9, (ymax - ymin) * 0.08);
  ymin -= pad;
  ymax += pad;

  const double w = 640, h = 440, ml = 70, mr = 20, mt = 20, mb = 50;
  const auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
  const auto Y = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
      << h - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    const double yv = ymin + (ymax - ymin) * i / 5.0;
    svg << "<line x1=\"" << X(xv) << "\" y1=\"" << h - mb << "\" x2=\"" << X(xv) << "\" y2=\""
        << h - mb + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << X(xv) << "\" y=\"" << h - mb + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt9(std::round(xv * 1000) / 1000)
        << "</text>\n";
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y(yv) << "\" x2=\"" << ml << "\" y2=\""
        << Y(yv) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << Y(yv) + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt9(std::round(yv * 1000) / 1000)
        << "</text>\n";
  }
  svg << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">delta</text>\n";
  svg << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (mt + h - mb) / 2 << ")\">DCR</text>\n";
  double legend_y = mt + 12;
  for (const auto& s : series) {
    if (s.pts.empty()) continue;
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : s.pts) svg << X(x) << ',' << Y(y) << ' ';
    svg << "\"/>\n";
    svg << "<line x1=\"" << w - mr - 130 << "\" y1=\"" << legend_y << "\" x2=\"" << w - mr - 110
        << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>\n";
    svg << "<text x=\"" << w - mr - 104 << "\" y=\"" << legend_y + 4 << "\" font-size=\"11\">"
        << s.name << "</text>\n";
    legend_y += 16;
  }
  svg << "</svg>\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot open " << path << " for writing\n";
    return kExitIo;
  }
  f << svg.str();
  f.flush();
  return f ? kExitOk : kExitIo;
}

int validate_deltas(const std::vector<double>& deltas, std::ostream& err) {
  if (deltas.empty()) {
    err << "error: sweep needs at least one --delta value\n";
    return kExitUsage;
  }
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] < 0.0 || deltas[i] > 1.0) {
      err << "error: delta values must lie in [0, 1]\n";
      return kExitUsage;
    }
    if (i > 0 && deltas[i] <= deltas[i - 1]) {
      err << "error: delta values must be sorted strictly ascending\n";
      return kExitUsage;
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Per-problem handlers

int run_solve(const std::string& problem, const CommonOpts& o, std::ostream& out,
              std::ostream& err) {
  const SolverConfig cfg = solver_config(o);
  double alpha = 0.0, lower = 0.0, upper = 0.0;
  json extra;
  try {
    if (problem == "csr") {
      alpha = csr_solve_optimal(RiskLevel(o.delta), cfg).alpha_star;
      lower = csr_lower_bound(RiskLevel(o.delta));
      upper = csr_suboptimal_dcr(RiskLevel(o.delta));
    } else if (problem == "dsr") {
      alpha = dsr_solve_optimal(o.buy_cost, RiskLevel(o.delta), cfg).alpha;
      lower = dsr_analytic_optimal(o.buy_cost, RiskLevel(0.0)).alpha;
      upper = 2.0 - 1.0 / o.buy_cost;
      extra["B"] = o.buy_cost;
    } else {
      const OmsProblem prob(o.low, o.high);
      alpha = oms_solve_alpha(prob, RiskLevel(o.delta), cfg).alpha;
      lower = oms_lower_bound_root(prob, RiskLevel(o.delta));
      upper = oms_upper_bound_root(prob, RiskLevel(o.delta));
      extra["L"] = o.low;
      extra["U"] = o.high;
    }
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  }
  if (o.as_json) {
    json j{{"problem", problem}, {"delta", o.delta},  {"alpha", alpha},
           {"lower", lower},     {"upper", upper},    {"config", config_json(cfg)}};
    for (auto& [k, v] : extra.items()) j[k] = v;
    out << j.dump() << '\n';
  } else {
    out << problem << " delta=" << fmt9(o.delta) << "  alpha=" << fmt9(alpha)
        << "  lower=" << fmt9(lower) << "  upper=" << fmt9(upper) << '\n';
  }
  return kExitOk;
}

int run_bounds(const std::string& problem, const CommonOpts& o, std::ostream& out,
               std::ostream& err) {
  (void)err;
  json j{{"problem", problem}, {"delta", o.delta}};
  if (problem == "csr") {
    j["lower"] = csr_lower_bound(RiskLevel(o.delta));
    j["upper"] = csr_suboptimal_dcr(RiskLevel(o.delta));
  } else if (problem == "dsr") {
    const auto bounds = dsr_phase_bounds(o.buy_cost);
    j["B"] = o.buy_cost;
    j["improves_below"] = bounds.improves_below;
    j["deterministic_at_or_above"] = bounds.deterministic_at_or_above;
    j["analytic_threshold"] = dsr_analytic_threshold(o.buy_cost);
    j["deterministic_ratio"] = 2.0 - 1.0 / o.buy_cost;
  } else {
    const OmsProblem prob(o.low, o.high);
    j["L"] = o.low;
    j["U"] = o.high;
    j["lower"] = oms_lower_bound_root(prob, RiskLevel(o.delta));
    j["upper"] = oms_upper_bound_root(prob, RiskLevel(o.delta));
    j["deterministic_ratio"] = std::sqrt(prob.fluctuation);
  }
  if (o.as_json) {
    out << j.dump() << '\n';
  } else {
    for (auto& [k, v] : j.items()) out << k << " = " << v.dump() << '\n';
  }
  return kExitOk;
}

int run_suboptimal(const std::string& problem, const CommonOpts& o, std::ostream& out,
                   std::ostream& err) {
  (void)err;
  double value;
  if (problem == "csr")
    value = csr_suboptimal_dcr(RiskLevel(o.delta));
  else if (problem == "dsr")
    value = 2.0 - 1.0 / o.buy_cost;
  else
    value = std::sqrt(OmsProblem(o.low, o.high).fluctuation);
  if (o.as_json) {
    out << json{{"problem", problem}, {"delta", o.delta}, {"alpha", value}}.dump() << '\n';
  } else {
    out << problem << " suboptimal delta=" << fmt9(o.delta) << "  alpha=" << fmt9(value) << '\n';
  }
  return kExitOk;
}

int run_sweep(const std::string& problem, const CommonOpts& o, std::ostream& out,
              std::ostream& err) {
  if (const int rc = validate_deltas(o.deltas, err); rc != kExitOk) return rc;
  std::vector<std::string> series = o.series;
  if (series.empty()) {
    if (problem == "csr")
      series = {"optimal", "suboptimal", "lower_bound"};
    else if (problem == "dsr")
      series = {"optimal", "suboptimal"};
    else
      series = {"optimal", "upper_bound", "lower_bound"};
  }
  for (const auto& s : series) {
    if (s != "optimal" && s != "suboptimal" && s != "upper_bound" && s != "lower_bound") {
      err << "error: unknown series '" << s << "'\n";
      return kExitUsage;
    }
  }
  const SolverConfig cfg = solver_config(o);

  std::vector<SweepRow> rows;
  try {
    for (double d : o.deltas) {
      SweepRow row;
      row.delta = d;
      const RiskLevel delta(d);
      if (problem == "csr") {
        if (series_requested(series, "optimal")) row.optimal = csr_solve_optimal(delta, cfg).alpha_star;
        if (series_requested(series, "suboptimal")) row.suboptimal = csr_suboptimal_dcr(delta);
        if (series_requested(series, "upper_bound")) row.upper_bound = csr_suboptimal_dcr(delta);
        if (series_requested(series, "lower_bound")) row.lower_bound = csr_lower_bound(delta);
      } else if (problem == "dsr") {
        if (series_requested(series, "optimal"))
          row.optimal = dsr_solve_optimal(o.buy_cost, delta, cfg).alpha;
        if (series_requested(series, "suboptimal")) row.suboptimal = 2.0 - 1.0 / o.buy_cost;
        if (series_requested(series, "upper_bound")) row.upper_bound = 2.0 - 1.0 / o.buy_cost;
        if (series_requested(series, "lower_bound"))
          row.lower_bound = dsr_analytic_optimal(o.buy_cost, RiskLevel(0.0)).alpha;
      } else {
        const OmsProblem prob(o.low, o.high);
        if (series_requested(series, "optimal")) row.optimal = oms_solve_alpha(prob, delta, cfg).alpha;
        if (series_requested(series, "suboptimal")) row.suboptimal = std::sqrt(prob.fluctuation);
        if (series_requested(series, "upper_bound")) row.upper_bound = oms_upper_bound_root(prob, delta);
        if (series_requested(series, "lower_bound")) row.lower_bound = oms_lower_bound_root(prob, delta);
      }
      rows.push_back(row);
    }
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  }

  if (!o.out_path.empty()) {
    if (const int rc = write_sweep_csv(rows, o.out_path, err); rc != kExitOk) return rc;
  } else {
    out << "delta,optimal,suboptimal,upper_bound,lower_bound\n";
    const auto cell = [](const std::optional<double>& v) { return v ? fmt9(*v) : std::string(); };
    for (const auto& r : rows)
      out << fmt9(r.delta) << ',' << cell(r.optimal) << ',' << cell(r.suboptimal) << ','
          << cell(r.upper_bound) << ',' << cell(r.lower_bound) << '\n';
  }
  if (!o.svg_path.empty()) {
    if (const int rc = write_sweep_svg(rows, o.svg_path, err); rc != kExitOk) return rc;
  }
  return kExitOk;
}

int run_simulate(const std::string& problem, const CommonOpts& o, std::ostream& out,
                 std::ostream& err) {
  SimConfig sim;
  sim.samples = o.samples;
  sim.seed = o.seed;
  try {
    sim.validate();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const SolverConfig cfg = solver_config(o);
  const RiskLevel delta(o.delta);

  SimReport report;
  try {
    if (problem == "csr") {
      report = simulate_csr(csr_solve_optimal(delta, cfg).strategy, delta, sim);
    } else if (problem == "dsr") {
      report = simulate_dsr(dsr_solve_optimal(o.buy_cost, delta, cfg).strategy, delta, sim);
    } else {
      const OmsProblem prob(o.low, o.high);
      report = simulate_oms(oms_solve_alpha(prob, delta, cfg).strategy, prob, delta, sim);
    }
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  }

  std::ostringstream csv;
  csv << "decision,empirical,analytic,gap\n";
  for (std::size_t i = 0; i < report.decisions.size(); ++i) {
    csv << fmt9(report.decisions[i]) << ',' << fmt9(report.empirical_ratios[i]) << ','
        << fmt9(report.analytic_ratios[i]) << ','
        << fmt9(report.empirical_ratios[i] - report.analytic_ratios[i]) << '\n';
  }
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot open " << o.out_path << " for writing\n";
      return kExitIo;
    }
    f << csv.str();
    f.flush();
    if (!f) return kExitIo;
  } else {
    out << csv.str();
  }
  err << "max_abs_gap=" << fmt9(report.max_abs_gap)
      << " stderr_estimate=" << fmt9(report.stderr_estimate) << '\n';
  return report.within(3.0) ? kExitOk : kExitSimMismatch;
}

void add_common_flags(CLI::App* cmd, CommonOpts& o, const std::string& problem, bool sweep,
                      bool simulate) {
  if (sweep)
    cmd->add_option("--delta", o.deltas, "risk levels, ascending in [0, 1]")->delimiter(',');
  else
    cmd->add_option("--delta", o.delta, "risk level in [0, 1]")->check(CLI::Range(0.0, 1.0));
  if (problem == "dsr") cmd->add_option("--B", o.buy_cost, "buying cost (>= 2)")->check(CLI::Range(2, 1000000));
  if (problem == "oms") {
    cmd->add_option("--L", o.low, "price floor (> 0)");
    cmd->add_option("--U", o.high, "price ceiling (>= L)");
  }
  cmd->add_option("--tol", o.tol, "solver tolerance (0 = default)");
  cmd->add_option("--grid", o.grid, "solver grid points (0 = default)");
  if (simulate) {
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--samples", o.samples, "Monte Carlo sample count (>= 1000)");
  }
  cmd->add_flag("--json", o.as_json, "machine-readable output");
  if (sweep) {
    cmd->add_option("--svg", o.svg_path, "also write an SVG line plot");
    cmd->add_option("--series", o.series, "series subset: optimal,suboptimal,upper_bound,lower_bound")
        ->delimiter(',');
  }
  if (sweep || simulate) cmd->add_option("--out", o.out_path, "output CSV path (default stdout)");
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"risk-sensitive competitive ratios for online ski rental and one-max search"};
  app.require_subcommand(1);

  struct Pending {
    std::string problem;
    std::string action;
    CommonOpts opts;
  };
  std::vector<std::unique_ptr<Pending>> pendings;
  Pending* selected = nullptr;

  for (const std::string problem : {"csr", "dsr", "oms"}) {
    auto* prob_cmd = app.add_subcommand(problem);
    prob_cmd->require_subcommand(1);
    for (const std::string action : {"solve", "bounds", "suboptimal", "sweep", "simulate"}) {
      auto pending = std::make_unique<Pending>();
      pending->problem = problem;
      pending->action = action;
      auto* cmd = prob_cmd->add_subcommand(action);
      add_common_flags(cmd, pending->opts, problem, action == "sweep", action == "simulate");
      Pending* raw = pending.get();
      cmd->callback([raw, &selected]() { selected = raw; });
      pendings.push_back(std::move(pending));
    }
  }

  std::vector<std::string> argv_copy = args;
  std::reverse(argv_copy.begin(), argv_copy.end());
  try {
    app.parse(argv_copy);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (selected == nullptr) {
    err << "error: no subcommand selected\n";
    return kExitUsage;
  }

  try {
    const auto& o = selected->opts;
    if (o.high < o.low || o.low <= 0.0) {
      err << "error: need 0 < L <= U\n";
      return kExitUsage;
    }
    if (selected->action == "solve") return run_solve(selected->problem, o, out, err);
    if (selected->action == "bounds") return run_bounds(selected->problem, o, out, err);
    if (selected->action == "suboptimal") return run_suboptimal(selected->problem, o, out, err);
    if (selected->action == "sweep") return run_sweep(selected->problem, o, out, err);
    return run_simulate(selected->problem, o, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_run(args, std::cout, std::cerr);
}

}  // namespace riskcr
