#pragma once

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "walkdist/io.hpp"
#include "walkdist/walkdist.hpp"

namespace walkdist {

inline constexpr const char* kCliVersion = "1.0.0";

struct CliCommon {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string mode = "exact";
};

namespace cli_detail {

inline std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

inline void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw resource_error("cannot create output directory: " + dir);
}

inline WalkMode parse_mode(const std::string& mode) {
  if (mode == "exact") return WalkMode::exact;
  if (mode == "float") return WalkMode::floating;
  throw config_error("mode must be 'exact' or 'float', got '" + mode + "'");
}

// Provenance hash of everything that determines the output bytes. Thread
// count is deliberately excluded: results must not depend on it.
inline std::uint64_t effective_hash(const json& cfg, const CliCommon& common) {
  json effective = cfg;
  effective["__seed"] = common.seed;
  effective["__mode"] = common.mode;
  return config_hash(effective);
}

inline std::size_t vertex_index(const json& cfg, const std::string& key,
                                std::size_t n, std::size_t fallback) {
  if (!cfg.contains(key)) return fallback;
  const std::uint64_t v = detail::get_u64(cfg, key, "config");
  if (v >= n)
    throw config_error("vertex '" + key + "' out of range [0, " +
                       std::to_string(n) + ")");
  return static_cast<std::size_t>(v);
}

}  // namespace cli_detail

// ---------------------------------------------------------------------------
// walks: exact/floating walk-product distributions and their deviation
// from uniform across a range of lengths.
// ---------------------------------------------------------------------------

inline json cmd_walks(const CliCommon& common, const json& cfg) {
  cli_detail::ensure_out_dir(common.out_dir);
  const std::uint64_t hash = cli_detail::effective_hash(cfg, common);
  const FiniteGroup group =
      group_from_json(detail::require_field(cfg, "group", "config"));
  const DecoratedGraph graph =
      graph_from_json(detail::require_field(cfg, "graph", "config"), group);
  const std::size_t n = graph.size();
  const std::size_t start = cli_detail::vertex_index(cfg, "start", n, 0);
  const std::size_t end = cli_detail::vertex_index(cfg, "end", n, 0);
  const std::uint32_t n_lo =
      cfg.contains("n_lo") ? detail::get_u32(cfg, "n_lo", "config") : 1u;
  const std::uint32_t n_hi = detail::get_u32(cfg, "n_hi", "config");
  if (n_hi < n_lo) throw config_error("n_hi must be at least n_lo");
  const WalkMode mode = cli_detail::parse_mode(common.mode);

  require_primitive(graph.adjacency);
  const auto cert = validate_primitive(graph.adjacency);
  const auto hypothesis = theorem_hypotheses(graph, group);
  const auto perron = perron_data(graph.adjacency);
  const auto series =
      deviation_series(graph, group, start, end, n_lo, n_hi, mode);
  const auto dist = walk_distribution(graph, group, start, end, n_hi, mode);
  const auto fit = measured_rate(series);

  write_deviation_csv(cli_detail::join(common.out_dir, "deviations.csv"),
                      series, hash, common.seed);
  write_distribution_csv(cli_detail::join(common.out_dir, "distribution.csv"),
                         dist, hash, common.seed);

  json summary;
  summary["config_hash"] = hex_u64(hash);
  summary["seed"] = common.seed;
  summary["group"] = {{"name", group.name()}, {"order", group.order()}};
  summary["graph"] = {{"vertices", n},
                      {"primitivity_exponent", cert.exponent}};
  summary["start"] = start;
  summary["end"] = end;
  summary["mode"] = common.mode;
  summary["hypothesis"] = to_json(hypothesis);
  summary["perron"] = to_json(perron);
  summary["rate_fit"] = to_json(fit);
  write_json_file(cli_detail::join(common.out_dir, "walks_summary.json"),
                  summary);
  return summary;
}

// ---------------------------------------------------------------------------
// tau-uniformity: reduce integer matrix decorations modulo each requested
// modulus, and measure the transfer-operator contraction inside each
// special linear quotient. The headline number r* is the worst ratio.
// ---------------------------------------------------------------------------

inline json cmd_tau_uniformity(const CliCommon& common, const json& cfg) {
  cli_detail::ensure_out_dir(common.out_dir);
  const std::uint64_t hash = cli_detail::effective_hash(cfg, common);
  const json& graph_j = detail::require_field(cfg, "graph", "config");
  const AdjMatrix adjacency = adjacency_from_json(graph_j);
  const std::size_t n = static_cast<std::size_t>(adjacency.rows());
  const std::uint32_t dim = detail::get_u32(cfg, "dim", "config");
  const json& decs =
      detail::require_field(cfg, "decorations_int", "config");
  if (!decs.is_array() || decs.size() != n)
    throw config_error("decorations_int must list one integer matrix per "
                       "vertex");
  std::vector<IntMatrix> raw;
  for (const auto& d : decs) {
    IntMatrix m = detail::int_matrix_from_json(d, "decorations_int");
    if (m.n != dim)
      throw config_error("decoration dimension mismatch: expected " +
                         std::to_string(dim));
    raw.push_back(m);
  }
  const json& mods = detail::require_field(cfg, "moduli", "config");
  if (!mods.is_array() || mods.empty())
    throw config_error("'moduli' must be a nonempty array");

  require_primitive(adjacency);
  const auto perron = perron_data(adjacency);

  CsvWriter csv(cli_detail::join(common.out_dir, "tau_table.csv"), hash,
                common.seed);
  csv.header({"modulus", "group_order", "hypothesis_holds", "transfer_ratio",
              "compression_d", "shrink_g", "certified"});
  json rows = json::array();
  double r_star = 0.0;
  bool any_certified = false;
  bool all_certified = true;
  for (const auto& mj : mods) {
    if (!mj.is_number_unsigned())
      throw config_error("moduli must be positive integers");
    const std::uint32_t m = mj.get<std::uint32_t>();
    const FiniteGroup quotient = special_linear_group(dim, m);
    DecoratedGraph graph;
    graph.adjacency = adjacency;
    for (const auto& r : raw) graph.decorations.push_back(reduce_mod(r, m));
    const auto hyp = theorem_hypotheses(graph, quotient);
    json row;
    row["modulus"] = m;
    row["group_order"] = quotient.order();
    row["hypothesis"] = to_json(hyp);
    if (!hyp.holds()) {
      all_certified = false;
      csv.row({std::to_string(m), std::to_string(quotient.order()), "0", "",
               "", "", "0"});
      rows.push_back(row);
      continue;
    }
    const auto rate = regular_transfer_rate(graph, quotient);
    const double d = compression_d_regular(graph, quotient, perron);
    const auto shrink = shrink_bound(perron.ratio, std::min(d, 1.0));
    row["transfer_ratio"] = rate.ratio;
    row["compression_d"] = d;
    row["shrink_g"] = shrink.g;
    row["certified"] = rate.certified;
    row["spectral"] = to_json(rate.report);
    rows.push_back(row);
    csv.row({std::to_string(m), std::to_string(quotient.order()), "1",
             format_double(rate.ratio), format_double(d),
             format_double(shrink.g), rate.certified ? "1" : "0"});
    r_star = std::max(r_star, rate.ratio);
    any_certified = any_certified || rate.certified;
    all_certified = all_certified && rate.certified;
  }

  json summary;
  summary["config_hash"] = hex_u64(hash);
  summary["seed"] = common.seed;
  summary["dim"] = dim;
  summary["perron"] = to_json(perron);
  summary["rows"] = rows;
  summary["r_star"] = r_star;
  summary["any_certified"] = any_certified;
  summary["all_certified"] = all_certified;
  write_json_file(cli_detail::join(common.out_dir, "tau_summary.json"),
                  summary);
  return summary;
}

// ---------------------------------------------------------------------------
// irreducibility: reducibility-decay experiment for random words in
// integer matrix generators, with optional theory-side prime windows.
// ---------------------------------------------------------------------------

inline json cmd_irreducibility(const CliCommon& common, const json& cfg) {
  cli_detail::ensure_out_dir(common.out_dir);
  const std::uint64_t hash = cli_detail::effective_hash(cfg, common);
  const std::string kind_s =
      detail::require_field(cfg, "kind", "config").get<std::string>();
  MatrixKind kind;
  if (kind_s == "sl")
    kind = MatrixKind::special_linear;
  else if (kind_s == "sp")
    kind = MatrixKind::symplectic;
  else
    throw config_error("kind must be 'sl' or 'sp', got '" + kind_s + "'");
  const std::uint32_t dim = detail::get_u32(cfg, "dim", "config");
  IntegerMatrixGenSet set;
  if (cfg.contains("generators")) {
    set.dim = dim;
    set.kind = kind;
    for (const auto& g : cfg.at("generators")) {
      IntMatrix m = detail::int_matrix_from_json(g, "generators");
      set.gens.push_back(m);
    }
    validate_generators(set);
  } else {
    set = builtin_generators(kind, dim);
  }
  const json& lens = detail::require_field(cfg, "lengths", "config");
  std::vector<std::uint32_t> lengths;
  for (const auto& l : lens) {
    if (!l.is_number_unsigned())
      throw config_error("lengths must be positive integers");
    lengths.push_back(l.get<std::uint32_t>());
  }
  const json& prs = detail::require_field(cfg, "primes", "config");
  std::vector<std::uint64_t> prime_levels;
  for (const auto& q : prs) {
    if (!q.is_number_unsigned())
      throw config_error("primes must be positive integers");
    prime_levels.push_back(q.get<std::uint64_t>());
  }
  const std::size_t samples = detail::get_u64(cfg, "samples", "config");

  // optional structured word source
  GraphWordSource source;
  DecoratedGraph source_graph;
  const GraphWordSource* source_ptr = nullptr;
  if (cfg.contains("word_graph")) {
    const json& wg = cfg.at("word_graph");
    source_graph.adjacency = adjacency_from_json(wg);
    const std::size_t n = static_cast<std::size_t>(
        source_graph.adjacency.rows());
    const FiniteGroup trivial_group = FiniteGroup::cyclic(1);
    for (std::size_t v = 0; v < n; ++v)
      source_graph.decorations.push_back(
          trivial_group.element(trivial_group.identity()));
    source.graph = &source_graph;
    source.start = cli_detail::vertex_index(wg, "start", n, 0);
    source.end = cli_detail::vertex_index(wg, "end", n, 0);
    const json& letters = detail::require_field(wg, "vertex_letters",
                                                "word_graph");
    if (!letters.is_array() || letters.size() != n)
      throw config_error("word_graph needs one generator letter per vertex");
    for (const auto& l : letters) {
      if (!l.is_number_unsigned() ||
          l.get<std::uint64_t>() >= set.gens.size())
        throw config_error("vertex_letters entries must index a generator");
      source.vertex_letter.push_back(l.get<std::size_t>());
    }
    source_ptr = &source;
  }

  const auto report = reducibility_experiment(
      set, lengths, prime_levels, samples, common.seed, common.threads,
      source_ptr);
  write_decay_csv(cli_detail::join(common.out_dir, "decay.csv"), report,
                  hash);

  json summary = to_json(report);
  summary["config_hash"] = hex_u64(hash);
  summary["kind"] = kind_s;
  summary["dim"] = dim;
  summary["generator_count"] = set.gens.size();
  summary["word_source"] = source_ptr != nullptr ? "graph" : "iid";

  // theory-side tail shapes at each length, when constants are supplied
  if (cfg.contains("bounds")) {
    const json& b = cfg.at("bounds");
    json theory = json::array();
    if (kind == MatrixKind::special_linear) {
      const double c = b.at("c").get<double>();
      const double c2 = b.at("c2").get<double>();
      const double eps = b.at("eps").get<double>();
      for (const auto n_steps : lengths) {
        const auto window = select_prime(c, n_steps, dim, eps);
        theory.push_back({{"n", n_steps},
                          {"prime", window.prime},
                          {"target", window.target},
                          {"bound", sl_level_bound(window.prime, c2, eps)}});
      }
    } else {
      const double c = b.at("c").get<double>();
      const double c3 = b.at("c3").get<double>();
      for (const auto n_steps : lengths) {
        const std::size_t k = primorial_level(n_steps, dim, c);
        theory.push_back({{"n", n_steps},
                          {"level_k", k},
                          {"primorial", primes::primorial(k).str()},
                          {"log_bound", sp_level_log_bound(k, c3)}});
      }
    }
    summary["theory"] = theory;
  }
  write_json_file(cli_detail::join(common.out_dir, "decay_summary.json"),
                  summary);
  return summary;
}

// ---------------------------------------------------------------------------
// shrink: the two-step shrinkage factor for given (lambda, d), or a sweep.
// ---------------------------------------------------------------------------

inline json cmd_shrink(const CliCommon& common, const json& cfg) {
  cli_detail::ensure_out_dir(common.out_dir);
  const std::uint64_t hash = cli_detail::effective_hash(cfg, common);
  json summary;
  summary["config_hash"] = hex_u64(hash);
  if (cfg.contains("grid")) {
    const json& grid = cfg.at("grid");
    std::vector<double> lambdas, ds;
    for (const auto& l : detail::require_field(grid, "lambda", "grid"))
      lambdas.push_back(l.get<double>());
    for (const auto& d : detail::require_field(grid, "d", "grid"))
      ds.push_back(d.get<double>());
    CsvWriter csv(cli_detail::join(common.out_dir, "shrink_sweep.csv"), hash,
                  common.seed);
    csv.header({"lambda", "d", "alpha0", "branch_a", "branch_b", "g"});
    double worst = 0.0;
    for (const double l : lambdas)
      for (const double d : ds) {
        const auto s = shrink_bound(l, d);
        csv.row({format_double(l), format_double(d), format_double(s.alpha0),
                 format_double(s.branch_a), format_double(s.branch_b),
                 format_double(s.g)});
        worst = std::max(worst, s.g);
      }
    summary["grid_max_g"] = worst;
    summary["grid_points"] = lambdas.size() * ds.size();
  } else {
    const double lambda =
        detail::require_field(cfg, "lambda", "config").get<double>();
    const double d = detail::require_field(cfg, "d", "config").get<double>();
    summary["shrink"] = to_json(shrink_bound(lambda, d));
  }
  write_json_file(cli_detail::join(common.out_dir, "shrink.json"), summary);
  return summary;
}

// ---------------------------------------------------------------------------
// spectral-gap: certified deviation schedule for one decorated graph,
// with the per-representation collapse table when the dual is available.
// ---------------------------------------------------------------------------

inline json cmd_spectral_gap(const CliCommon& common, const json& cfg) {
  cli_detail::ensure_out_dir(common.out_dir);
  const std::uint64_t hash = cli_detail::effective_hash(cfg, common);
  const FiniteGroup group =
      group_from_json(detail::require_field(cfg, "group", "config"));
  const DecoratedGraph graph =
      graph_from_json(detail::require_field(cfg, "graph", "config"), group);
  const std::size_t n = graph.size();
  const std::size_t start = cli_detail::vertex_index(cfg, "start", n, 0);
  const std::size_t end = cli_detail::vertex_index(cfg, "end", n, 0);
  const std::uint32_t n_lo =
      cfg.contains("n_lo") ? detail::get_u32(cfg, "n_lo", "config") : 1u;
  const std::uint32_t n_hi = detail::get_u32(cfg, "n_hi", "config");
  if (n_hi < n_lo) throw config_error("n_hi must be at least n_lo");
  const bool with_observed = cfg.value("with_observed", true);

  require_primitive(graph.adjacency);
  const auto rate =
      effective_rate(graph, group, start, end, n_lo, n_hi, with_observed);
  write_schedule_csv(cli_detail::join(common.out_dir, "schedule.csv"), rate,
                     hash, common.seed);

  json summary;
  summary["config_hash"] = hex_u64(hash);
  summary["seed"] = common.seed;
  summary["group"] = {{"name", group.name()}, {"order", group.order()}};
  summary["lambda"] = rate.lambda;
  summary["lambda_max"] = rate.lambda_max;
  summary["d"] = rate.d;
  summary["d_is_exact"] = rate.d_is_exact;
  summary["certified"] = rate.certified;
  summary["failure"] = rate.failure;
  summary["shrink"] = to_json(rate.shrink);
  summary["hypothesis"] = to_json(rate.hypothesis);
  summary["perron"] = to_json(rate.perron);

  // per-representation collapse ratios, for families with a listed dual
  try {
    const UnitaryDual dual = unitary_dual(group);
    json reps = json::array();
    for (const auto& rho : dual.reps) {
      if (rho.trivial()) continue;
      const auto gap = collapse_gap(graph, group, rho);
      reps.push_back({{"representation", rho.name()},
                      {"dimension", rho.dim()},
                      {"twisted_radius", gap.twisted_radius},
                      {"ratio", gap.ratio},
                      {"certified", gap.certified}});
    }
    summary["collapse_table"] = reps;
  } catch (const capability_error& e) {
    summary["collapse_table_unavailable"] = e.what();
  }
  write_json_file(
      cli_detail::join(common.out_dir, "spectral_summary.json"), summary);
  return summary;
}

// ---------------------------------------------------------------------------
// kazhdan: spectral-gap displacement constants for a generating set, the
// pair-product variant, and the derived compression bound on a graph.
// ---------------------------------------------------------------------------

inline json cmd_kazhdan(const CliCommon& common, const json& cfg) {
  cli_detail::ensure_out_dir(common.out_dir);
  const std::uint64_t hash = cli_detail::effective_hash(cfg, common);
  const FiniteGroup group =
      group_from_json(detail::require_field(cfg, "group", "config"));
  const json& set_j = detail::require_field(cfg, "set", "config");
  if (!set_j.is_array() || set_j.empty())
    throw config_error("'set' must be a nonempty array of group elements");
  std::vector<GroupElement> set;
  for (const auto& e : set_j) set.push_back(element_from_json(e, group));

  json summary;
  summary["config_hash"] = hex_u64(hash);
  summary["group"] = {{"name", group.name()}, {"order", group.order()}};

  try {
    summary["cayley"] = to_json(cayley_gap(group, set));
  } catch (const domain_error& e) {
    summary["cayley_unavailable"] = e.what();
  }
  const auto tprime = tprime_epsilon(group, set);
  summary["pair_products"] = to_json(tprime.gap);
  summary["epsilon1"] = tprime.epsilon1;
  summary["pair_separation"] = tprime.pair_separation;

  if (cfg.contains("graph")) {
    const DecoratedGraph graph = graph_from_json(cfg.at("graph"), group);
    require_primitive(graph.adjacency);
    const auto perron = perron_data(graph.adjacency);
    const double d_bound = d_from_kazhdan(perron, tprime.epsilon1);
    const double d_exact = compression_d_regular(graph, group, perron);
    summary["perron"] = to_json(perron);
    summary["d_from_separation"] = d_bound;
    summary["d_exact"] = d_exact;
    summary["shrink_from_separation"] =
        to_json(shrink_bound(perron.ratio, std::min(d_bound, 1.0)));
    summary["shrink_exact"] =
        to_json(shrink_bound(perron.ratio, std::min(d_exact, 1.0)));
  }
  write_json_file(cli_detail::join(common.out_dir, "kazhdan.json"), summary);
  return summary;
}

// ---------------------------------------------------------------------------
// Driver.
// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"walk-product distributions on decorated graphs"};
  app.set_version_flag("--version", std::string("walkdist ") + kCliVersion);
  app.require_subcommand(1);

  struct SubSpec {
    CLI::App* sub = nullptr;
    CliCommon common;
  };
  std::vector<SubSpec> specs(6);
  const char* names[6] = {"walks",  "tau-uniformity", "irreducibility",
                          "shrink", "spectral-gap",   "kazhdan"};
  const char* descs[6] = {
      "walk-product distributions and deviation series",
      "transfer-operator contraction across special linear quotients",
      "reducibility decay for random words in integer matrix generators",
      "two-step shrinkage factor",
      "certified deviation schedule for a decorated graph",
      "displacement constants for a generating set"};
  double shrink_lambda = -1.0, shrink_d = -1.0;
  for (int i = 0; i < 6; ++i) {
    specs[i].sub = app.add_subcommand(names[i], descs[i]);
    auto* sub = specs[i].sub;
    auto* opt = sub->add_option("--config", specs[i].common.config_path,
                                "JSON config file");
    if (i == 3) {
      sub->add_option("--lambda", shrink_lambda,
                      "residual spectral ratio in [0, 1)");
      sub->add_option("--d", shrink_d, "top-space compression in [0, 1]");
    } else {
      opt->required();
    }
    sub->add_option("--out", specs[i].common.out_dir, "output directory");
    sub->add_option("--seed", specs[i].common.seed, "master seed");
    sub->add_option("--threads", specs[i].common.threads, "worker threads");
    sub->add_option("--mode", specs[i].common.mode,
                    "arithmetic mode: exact or float");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    for (int i = 0; i < 6; ++i) {
      if (!specs[i].sub->parsed()) continue;
      const CliCommon& common = specs[i].common;
      json cfg;
      if (!common.config_path.empty()) {
        cfg = load_json_file(common.config_path);
      } else if (i == 3) {
        if (shrink_lambda < 0.0 || shrink_d < 0.0)
          throw config_error(
              "shrink needs either --config or both --lambda and --d");
        cfg = json{{"lambda", shrink_lambda}, {"d", shrink_d}};
      }
      if (i == 3 && shrink_lambda >= 0.0) cfg["lambda"] = shrink_lambda;
      if (i == 3 && shrink_d >= 0.0) cfg["d"] = shrink_d;
      switch (i) {
        case 0: cmd_walks(common, cfg); break;
        case 1: cmd_tau_uniformity(common, cfg); break;
        case 2: cmd_irreducibility(common, cfg); break;
        case 3: cmd_shrink(common, cfg); break;
        case 4: cmd_spectral_gap(common, cfg); break;
        case 5: cmd_kazhdan(common, cfg); break;
      }
    }
    return 0;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const capability_error& e) {
    std::cerr << "capability error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace walkdist
