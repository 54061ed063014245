#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fpp/acceptance.hpp"
#include "fpp/critical.hpp"
#include "fpp/criterion.hpp"
#include "fpp/errors.hpp"
#include "fpp/genfun.hpp"
#include "fpp/io.hpp"
#include "fpp/simulation.hpp"
#include "fpp/walk.hpp"

using namespace fpp;

namespace {

struct Common {
  std::string graph;
  std::string from;
  std::string to;
  std::string out = "-";
  std::string format = "json";
  std::uint64_t seed = 1;
};

Json header(const std::string& command, const Common& c) {
  return {{"tool", "fpp"}, {"version", kToolVersion}, {"command", command}, {"seed", c.seed}};
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidSpec, "bad integer list '" + text + "'");
    }
  }
  if (out.empty()) throw Error(ErrorKind::InvalidSpec, "empty integer list");
  return out;
}

int run_analyze(const Common& c, double tol, int grid, int depth, bool margin) {
  const GraphSpec spec = read_graph_spec(c.graph);
  const BaseGraph g = build_graph(spec);
  Json doc = header("analyze", c);
  doc["config"] = {{"graph", graph_spec_to_json(spec)}, {"from", c.from}, {"to", c.to},
                   {"tol", tol},    {"grid", grid},       {"depth", depth}};
  Table table{{"s", "t", "f_value", "f_err"}, {}};
  const CriticalTime ct = critical_time(g, c.from, c.to, {.tol = tol});
  Json result{{"t_star", ct.t_star}, {"t_star_err", ct.abs_err}};
  if (ct.t_star > 0.0) {
    ClassifyOptions opts;
    opts.grid = grid;
    opts.max_depth = depth;
    CriterionReport report = sup_f_classify(g, c.from, c.to, opts);
    if (margin && report.classification == Classification::Positive) {
      report.margin = not_sharp_margin(g, c.from, c.to, report);
    }
    result["criterion"] = to_json(report);
    if (c.format == "csv") table = f_grid_table(f_grid(g, c.from, c.to, report.t_star, grid));
  } else {
    result["criterion"] = nullptr;
  }
  if (g.is_finite() && g.num_vertices() <= 8) {
    const auto sigma = symmetry_condition(g, c.from, c.to);
    result["symmetry_witness"] = sigma ? Json(*sigma) : Json(nullptr);
  }
  doc["result"] = result;
  emit_report(doc, table, parse_format(c.format), c.out);
  return 0;
}

int run_constants(const Common& c, double rho, int grid, bool diagonal_only) {
  const AlphaStar a = solve_alpha_star(1e-13);
  Json doc = header("constants", c);
  doc["config"] = {{"rho", rho}, {"grid", grid}};
  Json result{{"alpha_star", a.alpha_star},
              {"alpha_star_err", a.abs_err},
              {"diagonal_constant", a.diagonal_constant(rho)}};
  Table table{{"x", "theta"}, {}};
  if (!diagonal_only) {
    Json theta = Json::array();
    for (int i = 0; i <= grid; ++i) {
      const double x = static_cast<double>(i) / grid;
      const double th = solve_theta(x, 1e-13);
      theta.push_back({{"x", x}, {"theta", th}});
      table.rows.push_back({format_number(x), format_number(th)});
    }
    result["theta"] = theta;
    Json kq = Json::array();
    for (int q = 2; q <= 10; ++q) {
      GraphSpec spec;
      spec.builtin = "Kq";
      spec.q = q;
      const double t = critical_time(build_graph(spec), "0", "1", {.tol = 1e-12}).t_star;
      kq.push_back({{"q", q},
                    {"t_star", t},
                    {"lower", std::log(q) / (q - 1)},
                    {"upper", std::log(q + 1.0) / (q - 1)}});
    }
    result["complete_graphs"] = kq;
    Json chain = Json::array();
    for (int k : {10, 25, 50, 100, 200}) {
      const double t = chain_critical_time(k, 1e-12);
      chain.push_back({{"k", k}, {"t_star", t}, {"ratio", t / k}});
    }
    result["integer_chain"] = chain;
  }
  doc["result"] = result;
  emit_report(doc, table, parse_format(c.format), c.out);
  return 0;
}

int run_walk(const Common& c, int samples, std::optional<int> n, std::optional<double> s,
             std::optional<double> t) {
  const GraphSpec spec = read_graph_spec(c.graph);
  const BaseGraph g = build_graph(spec);
  const CriticalTime ct = critical_time(g, c.from, c.to, {.tol = 1e-12});
  const WalkSampler sampler(g, c.from, c.to, ct.t_star);
  RandomStream rng(c.seed, 0);
  Json doc = header("walk", c);
  doc["config"] = {{"graph", graph_spec_to_json(spec)}, {"from", c.from}, {"to", c.to},
                   {"samples", samples}};
  Json law = Json::array();
  for (double p : sampler.law().probabilities) law.push_back(p);
  Table table{{"length", "probability", "empirical"}, {}};
  std::vector<std::size_t> counts(sampler.law().probabilities.size(), 0);
  std::size_t self_avoiding = 0;
  for (int i = 0; i < samples; ++i) {
    const WalkSample w = sampler.sample(rng);
    ++counts[w.jumps()];
    self_avoiding += w.self_avoiding();
  }
  Json empirical = Json::array();
  for (std::size_t l = 0; l < counts.size(); ++l) {
    const double freq = samples ? static_cast<double>(counts[l]) / samples : 0.0;
    empirical.push_back(freq);
    table.rows.push_back({std::to_string(l), format_number(sampler.law().probabilities[l]),
                          format_number(freq)});
  }
  Json result{{"t_star", ct.t_star},
              {"jump_length_law", law},
              {"tail_mass", sampler.law().tail_mass},
              {"empirical_law", empirical},
              {"self_avoiding_fraction", samples ? static_cast<double>(self_avoiding) / samples : 0.0}};
  if (g.is_finite() && g.num_vertices() <= 16) {
    result["self_avoiding_exact"] = self_avoiding_mass(g, c.from, c.to, ct.t_star);
  }
  if (g.is_finite() && ct.t_star > 0.0) {
    const double ss = s.value_or(0.0);
    const double tt = t.value_or(0.5 * ct.t_star);
    result["mc_f"] = to_json(mc_f_estimate(g, c.from, c.to, ss, tt, static_cast<std::size_t>(samples), rng));
    result["mc_f"]["s"] = ss;
    result["mc_f"]["t"] = tt;
    result["f"] = to_json(f_eval(g, c.from, c.to, ct.t_star, ss, tt));
  }
  if (n) {
    result["success_lower_bound"] = to_json(
        success_lower_bound(g, c.from, c.to, *n, ct.t_star, static_cast<std::size_t>(samples), rng));
    result["success_lower_bound"]["n"] = *n;
  }
  doc["result"] = result;
  emit_report(doc, table, parse_format(c.format), c.out);
  return 0;
}

int run_simulate(const Common& c, const std::string& n_list, int replicas, const std::string& weights,
                 const std::string& hamming) {
  const GraphSpec spec = read_graph_spec(c.graph);
  const BaseGraph g = build_graph(spec);
  const WeightModel model = make_weight_model(weights);
  std::vector<std::optional<int>> ks{std::nullopt};
  if (!hamming.empty()) {
    ks.clear();
    for (int k : parse_int_list(hamming)) ks.emplace_back(k);
  }
  Json doc = header("simulate", c);
  doc["config"] = {{"graph", graph_spec_to_json(spec)}, {"from", c.from}, {"to", c.to},
                   {"n", n_list},  {"replicas", replicas}, {"weights", model.describe()}};
  Json runs = Json::array();
  Table table{{"n", "hamming_k", "replica", "time", "geodesic_length"}, {}};
  for (int n : parse_int_list(n_list)) {
    for (const auto& k : ks) {
      EnsembleConfig config;
      config.base = g;
      config.graph_label = spec.builtin ? *spec.builtin : c.graph;
      config.n = n;
      config.v = c.from;
      config.w = c.to;
      config.model = model;
      config.replicas = replicas;
      config.seed = c.seed;
      config.hamming_k = k;
      const SimulationSummary summary = run_ensemble(config);
      runs.push_back(to_json(summary));
      for (const auto& row : replica_table(summary).rows) {
        std::vector<std::string> r{std::to_string(n), k ? std::to_string(*k) : ""};
        r.insert(r.end(), row.begin(), row.end());
        table.rows.push_back(r);
      }
    }
  }
  doc["result"] = {{"ensembles", runs}};
  emit_report(doc, table, parse_format(c.format), c.out);
  return 0;
}

int run_verify(const Common& c, const std::string& only) {
  AcceptanceOptions options;
  options.seed = c.seed;
  if (!only.empty()) {
    for (int id : parse_int_list(only)) options.only.insert(id);
  }
  Json doc = header("verify", c);
  Json list = Json::array();
  Table table{{"criterion", "passed", "seconds", "detail"}, {}};
  int failed = 0;
  for (const auto& o : run_acceptance(options)) {
    std::cerr << format_outcome(o) << "\n";
    failed += !o.passed;
    list.push_back({{"criterion", o.id},
                    {"title", o.title},
                    {"passed", o.passed},
                    {"seconds", o.seconds},
                    {"detail", o.detail}});
    table.rows.push_back({std::to_string(o.id), o.passed ? "true" : "false",
                          format_number(o.seconds), o.detail});
  }
  doc["result"] = {{"criteria", list}, {"failed", failed}};
  emit_report(doc, table, parse_format(c.format), c.out);
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-passage percolation on Cartesian power graphs"};
  app.require_subcommand(1, 1);
  Common c;
  double tol = 1e-10;
  int grid = 32;
  int theta_points = 10;
  int depth = 12;
  bool margin = false;
  double rho = 1.0;
  bool diagonal = false;
  int samples = 10000;
  std::optional<int> n;
  std::optional<double> s, t;
  std::string n_list = "1";
  std::string weights = "exp:1";
  std::string hamming;
  std::string only;

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", c.out, "Output path, '-' for stdout");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_endpoints = [&](CLI::App* sub) {
    sub->add_option("--graph", c.graph, "Graph JSON file")->required();
    sub->add_option("--from", c.from, "Start vertex")->required();
    sub->add_option("--to", c.to, "End vertex")->required();
  };

  CLI::App* analyze = app.add_subcommand("analyze", "Critical time and criterion classification");
  add_endpoints(analyze);
  analyze->add_option("--tol", tol, "Critical time tolerance")->check(CLI::PositiveNumber);
  analyze->add_option("--grid", grid, "Coarse grid resolution")->check(CLI::PositiveNumber);
  analyze->add_option("--depth", depth, "Refinement depth")->check(CLI::NonNegativeNumber);
  analyze->add_flag("--margin", margin, "Extract the margin c when POSITIVE");
  add_output(analyze);

  CLI::App* constants = app.add_subcommand("constants", "alpha*, diagonal constant, theta and K_q tables");
  constants->add_option("--rho", rho, "Density at zero")->check(CLI::PositiveNumber);
  constants->add_flag("--diagonal", diagonal, "Only alpha* and the diagonal constant");
  constants->add_option("--grid", theta_points, "Points of the theta table minus one")->check(CLI::PositiveNumber);
  add_output(constants);

  CLI::App* walk = app.add_subcommand("walk", "Conditioned walk diagnostics");
  add_endpoints(walk);
  walk->add_option("--replicas", samples, "Number of walk samples")->check(CLI::PositiveNumber);
  walk->add_option("--n", n, "Power for the success lower bound");
  walk->add_option("--s", s, "s for the Monte Carlo f estimate");
  walk->add_option("--t", t, "t for the Monte Carlo f estimate");
  walk->add_option("--seed", c.seed, "Random seed");
  add_output(walk);

  CLI::App* simulate = app.add_subcommand("simulate", "First-passage ensembles on G^n");
  add_endpoints(simulate);
  simulate->add_option("--n", n_list, "Power, or a comma separated list");
  simulate->add_option("--replicas", samples, "Replicas per configuration")->check(CLI::PositiveNumber);
  simulate->add_option("--weights", weights, "exp:RATE | uniform:A,B | table:PATH");
  simulate->add_option("--hamming", hamming, "Comma separated Hamming distances k");
  simulate->add_option("--seed", c.seed, "Random seed");
  add_output(simulate);

  CLI::App* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--seed", c.seed, "Random seed");
  verify->add_option("--only", only, "Comma separated criterion ids");
  add_output(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*analyze) return run_analyze(c, tol, grid, depth, margin);
    if (*constants) return run_constants(c, rho, theta_points, diagonal);
    if (*walk) return run_walk(c, samples, n, s, t);
    if (*simulate) return run_simulate(c, n_list, samples, weights, hamming);
    if (*verify) return run_verify(c, only);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_numerical(e.kind()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
