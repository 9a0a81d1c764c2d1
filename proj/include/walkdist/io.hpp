#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "walkdist/bounds.hpp"
#include "walkdist/errors.hpp"
#include "walkdist/graphwalk.hpp"
#include "walkdist/groups.hpp"
#include "walkdist/linalg.hpp"
#include "walkdist/matapp.hpp"
#include "walkdist/repsfourier.hpp"
#include "walkdist/spectral.hpp"

namespace walkdist {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Deterministic formatting and hashing.
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

// Hash of the canonical (key-sorted) dump; stable across runs and platforms.
inline std::uint64_t config_hash(const json& j) { return fnv1a64(j.dump()); }

inline std::string hex_u64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "0x%016llx",
                static_cast<unsigned long long>(v));
  return std::string(buf);
}

// ---------------------------------------------------------------------------
// JSON loading and descriptor parsing.
// ---------------------------------------------------------------------------

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

namespace detail {

inline const json& require_field(const json& j, const std::string& key,
                                 const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw config_error("missing field '" + key + "' in " + where);
  return *it;
}

inline std::uint64_t get_u64(const json& j, const std::string& key,
                             const std::string& where) {
  const json& v = require_field(j, key, where);
  if (!v.is_number_unsigned())
    throw config_error("field '" + key + "' in " + where +
                       " must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

inline std::uint32_t get_u32(const json& j, const std::string& key,
                             const std::string& where) {
  const std::uint64_t v = get_u64(j, key, where);
  if (v > 0xFFFFFFFFull)
    throw config_error("field '" + key + "' in " + where +
                       " exceeds the 32-bit range");
  return static_cast<std::uint32_t>(v);
}

inline IntMatrix int_matrix_from_json(const json& rows,
                                      const std::string& where) {
  if (!rows.is_array() || rows.empty())
    throw config_error("matrix in " + where +
                       " must be a nonempty array of rows");
  if (rows.size() > 64)
    throw config_error("matrix in " + where + " is larger than 64x64");
  IntMatrix m;
  m.n = static_cast<std::uint32_t>(rows.size());
  const std::size_t n = m.n;
  m.entries.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != n)
      throw config_error("matrix row " + std::to_string(i) + " in " + where +
                         " must have " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) {
      if (!row[j].is_number_integer())
        throw config_error("matrix entries in " + where + " must be integers");
      m.entries[i * n + j] = row[j].get<std::int64_t>();
    }
  }
  return m;
}

}  // namespace detail

inline FiniteGroup group_from_json(const json& j) {
  if (!j.is_object()) throw config_error("group descriptor must be an object");
  const std::string family =
      detail::require_field(j, "family", "group descriptor")
          .get<std::string>();
  const std::size_t cap =
      j.contains("cap") ? detail::get_u64(j, "cap", "group descriptor")
                        : kDefaultGroupCap;
  if (family == "cyclic")
    return FiniteGroup::cyclic(detail::get_u32(j, "m", "cyclic group"), cap);
  if (family == "product") {
    const json& ms = detail::require_field(j, "moduli", "product group");
    if (!ms.is_array() || ms.empty())
      throw config_error("product group needs a nonempty 'moduli' array");
    std::vector<std::uint32_t> moduli;
    for (const auto& m : ms) {
      if (!m.is_number_unsigned() || m.get<std::uint64_t>() > 0xFFFFFFFFull)
        throw config_error("product moduli must be 32-bit positive integers");
      moduli.push_back(m.get<std::uint32_t>());
    }
    return FiniteGroup::product_of_cyclics(moduli, cap);
  }
  if (family == "dihedral")
    return FiniteGroup::dihedral(detail::get_u32(j, "m", "dihedral group"),
                                 cap);
  if (family == "symmetric")
    return FiniteGroup::symmetric(
        detail::get_u32(j, "degree", "symmetric group"), cap);
  if (family == "sl")
    return special_linear_group(detail::get_u32(j, "dim", "sl group"),
                                detail::get_u32(j, "modulus", "sl group"),
                                cap);
  if (family == "sp")
    return symplectic_group(detail::get_u32(j, "dim", "sp group"),
                            detail::get_u32(j, "modulus", "sp group"), cap);
  if (family == "matgen") {
    const std::uint32_t modulus =
        detail::get_u32(j, "modulus", "matgen group");
    const json& gens = detail::require_field(j, "generators", "matgen group");
    if (!gens.is_array() || gens.empty())
      throw config_error("matgen group needs a nonempty 'generators' array");
    std::vector<GroupElement> seeds;
    for (const auto& g : gens) {
      const IntMatrix m = detail::int_matrix_from_json(g, "matgen generator");
      seeds.push_back(reduce_mod(m, modulus));
    }
    const std::string name =
        j.contains("name") ? j.at("name").get<std::string>() : "matgen";
    return FiniteGroup::from_generators(seeds, cap, name);
  }
  throw config_error("unknown group family: " + family);
}

inline GroupElement element_from_json(const json& j, const FiniteGroup& group) {
  const auto& info = group.info();
  GroupElement elem;
  switch (info.family) {
    case GroupFamily::cyclic: {
      if (!j.is_number_integer())
        throw config_error("cyclic element must be an integer residue");
      std::int64_t r = j.get<std::int64_t>() %
                       static_cast<std::int64_t>(info.m);
      if (r < 0) r += static_cast<std::int64_t>(info.m);
      elem = CyclicElem{static_cast<std::uint32_t>(r), info.m};
      break;
    }
    case GroupFamily::product: {
      if (!j.is_array() || j.size() != info.moduli.size())
        throw config_error("product element must be an array of " +
                           std::to_string(info.moduli.size()) + " residues");
      ProductElem pe;
      pe.moduli = info.moduli;
      for (std::size_t i = 0; i < info.moduli.size(); ++i) {
        if (!j[i].is_number_integer())
          throw config_error("product residues must be integers");
        std::int64_t r = j[i].get<std::int64_t>() %
                         static_cast<std::int64_t>(info.moduli[i]);
        if (r < 0) r += static_cast<std::int64_t>(info.moduli[i]);
        pe.residues.push_back(static_cast<std::uint32_t>(r));
      }
      elem = pe;
      break;
    }
    case GroupFamily::dihedral: {
      if (j.is_object()) {
        const std::uint32_t rot = static_cast<std::uint32_t>(
            detail::get_u64(j, "rot", "dihedral element") % info.m);
        const std::uint64_t flip =
            detail::get_u64(j, "flip", "dihedral element");
        if (flip > 1)
          throw config_error("dihedral 'flip' must be 0 or 1");
        elem = DihedralElem{rot, static_cast<std::uint8_t>(flip), info.m};
      } else if (j.is_string()) {
        const std::string s = j.get<std::string>();
        bool matched = false;
        for (std::size_t i = 0; i < group.order(); ++i)
          if (group.label(static_cast<std::uint32_t>(i)) == s) {
            elem = group.element(static_cast<std::uint32_t>(i));
            matched = true;
            break;
          }
        if (!matched)
          throw config_error("unknown dihedral element label: " + s);
      } else {
        throw config_error(
            "dihedral element must be {\"rot\":r,\"flip\":f} or a label");
      }
      break;
    }
    case GroupFamily::symmetric: {
      if (!j.is_array() || j.size() != info.degree)
        throw config_error("permutation must be an array of " +
                           std::to_string(info.degree) + " images");
      PermElem pe;
      for (const auto& v : j) {
        if (!v.is_number_unsigned())
          throw config_error("permutation images must be nonnegative");
        pe.images.push_back(v.get<std::uint32_t>());
      }
      elem = pe;
      break;
    }
    case GroupFamily::matrix:
    case GroupFamily::generated: {
      const IntMatrix m = detail::int_matrix_from_json(j, "matrix element");
      if (m.n != info.dim)
        throw config_error("matrix element must be " +
                           std::to_string(info.dim) + "x" +
                           std::to_string(info.dim));
      elem = reduce_mod(m, info.modulus);
      break;
    }
  }
  // canonicalize through the group's element table (validates membership)
  return group.element(group.index_of_checked(elem));
}

inline AdjMatrix adjacency_from_json(const json& j) {
  if (!j.is_object()) throw config_error("graph descriptor must be an object");
  const std::size_t n = detail::get_u64(j, "n", "graph descriptor");
  if (n == 0) throw config_error("graph must have at least one vertex");
  const json& adj = detail::require_field(j, "adjacency", "graph descriptor");
  if (!adj.is_array() || adj.size() != n * n)
    throw config_error("adjacency must be a row-major array of " +
                       std::to_string(n * n) + " entries");
  const bool directed = j.value("directed", false);
  AdjMatrix a = AdjMatrix::Zero(static_cast<Eigen::Index>(n),
                                static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const json& e = adj[i * n + k];
      if (!e.is_number_integer() || e.get<std::int64_t>() < 0)
        throw config_error("adjacency entries must be nonnegative integers");
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          e.get<std::int64_t>();
    }
  if (!directed) {
    // undirected input: harmonize the two orientations by taking the max
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = i + 1; k < n; ++k) {
        const auto m =
            std::max(a(static_cast<Eigen::Index>(i),
                       static_cast<Eigen::Index>(k)),
                     a(static_cast<Eigen::Index>(k),
                       static_cast<Eigen::Index>(i)));
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = m;
        a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = m;
      }
  }
  return a;
}

inline DecoratedGraph graph_from_json(const json& j,
                                      const FiniteGroup& group) {
  DecoratedGraph graph;
  graph.adjacency = adjacency_from_json(j);
  const std::size_t n = static_cast<std::size_t>(graph.adjacency.rows());
  const json& decs = detail::require_field(j, "decorations",
                                           "graph descriptor");
  if (!decs.is_array() || decs.size() != n)
    throw config_error("graph needs exactly " + std::to_string(n) +
                       " decorations");
  for (const auto& d : decs)
    graph.decorations.push_back(element_from_json(d, group));
  validate_graph(graph);
  return graph;
}

// ---------------------------------------------------------------------------
// CSV output. Every file starts with a provenance comment carrying the
// config hash and master seed, then a header row. Doubles use %.17g so
// reruns are byte-identical.
// ---------------------------------------------------------------------------

class CsvWriter {
public:
  CsvWriter(const std::string& path, std::uint64_t cfg_hash,
            std::uint64_t seed)
      : out_(path, std::ios::binary) {
    if (!out_) throw resource_error("cannot open file for writing: " + path);
    out_ << "# config_hash=" << hex_u64(cfg_hash) << " seed=" << seed << "\n";
  }
  void header(const std::vector<std::string>& cols) { line(cols); }
  void row(const std::vector<std::string>& cells) { line(cells); }

private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }
  std::ofstream out_;
};

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw resource_error("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
}

inline void write_distribution_csv(const std::string& path,
                                   const WalkDistribution& dist,
                                   std::uint64_t cfg_hash,
                                   std::uint64_t seed) {
  CsvWriter csv(path, cfg_hash, seed);
  csv.header({"element_index", "element_label", "count", "probability"});
  for (std::size_t g = 0; g < dist.group.order(); ++g) {
    const std::string count =
        dist.mode == WalkMode::exact ? dist.counts[g].str() : "";
    csv.row({std::to_string(g), dist.group.label(static_cast<std::uint32_t>(g)),
             count, format_double(dist.probs[g])});
  }
}

inline void write_deviation_csv(const std::string& path,
                                const std::vector<DeviationPoint>& series,
                                std::uint64_t cfg_hash, std::uint64_t seed) {
  CsvWriter csv(path, cfg_hash, seed);
  csv.header({"n", "d_inf", "tv", "exact_zero", "walks"});
  for (const auto& p : series)
    csv.row({std::to_string(p.n), format_double(p.d_inf), format_double(p.tv),
             p.exact_zero ? "1" : "0", p.walks.str()});
}

inline void write_schedule_csv(const std::string& path,
                               const EffectiveRate& rate,
                               std::uint64_t cfg_hash, std::uint64_t seed) {
  CsvWriter csv(path, cfg_hash, seed);
  csv.header({"n", "opnorm_bound", "deviation_bound", "observed_d_inf"});
  for (const auto& row : rate.schedule)
    csv.row({std::to_string(row.n), format_double(row.opnorm_bound),
             format_double(row.deviation_bound),
             row.observed_valid ? format_double(row.observed) : ""});
}

inline void write_decay_csv(const std::string& path, const DecayReport& report,
                            std::uint64_t cfg_hash) {
  CsvWriter csv(path, cfg_hash, report.seed);
  csv.header({"n", "samples", "reducible", "fraction", "ci_lo", "ci_hi"});
  for (const auto& row : report.rows)
    csv.row({std::to_string(row.n), std::to_string(row.samples),
             std::to_string(row.reducible), format_double(row.fraction),
             format_double(row.ci_lo), format_double(row.ci_hi)});
}

// ---------------------------------------------------------------------------
// JSON serializers for report structures.
// ---------------------------------------------------------------------------

inline json to_json(const SpectralReport& r) {
  json j;
  j["radius"] = r.radius;
  j["method"] = r.method == RadiusMethod::exact    ? "exact"
                : r.method == RadiusMethod::power  ? "power"
                                                   : "gelfand";
  j["converged"] = r.converged;
  j["upper_bound_only"] = r.upper_bound_only;
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  json samples = json::array();
  for (const auto& s : r.gelfand)
    samples.push_back({{"k", s.k}, {"value", s.value}});
  j["gelfand_samples"] = samples;
  return j;
}

inline json to_json(const PerronData& p) {
  json j;
  j["lambda_max"] = p.lambda_max;
  j["lambda2_abs"] = p.lambda2_abs;
  j["ratio"] = p.ratio;
  j["residual"] = p.residual;
  j["iterations"] = p.iterations;
  std::vector<double> v(p.v_max.data(), p.v_max.data() + p.v_max.size());
  j["perron_vector"] = v;
  return j;
}

inline json to_json(const HypothesisReport& h) {
  json j;
  j["holds"] = h.holds();
  j["fails_generation"] = h.status == HypothesisStatus::fails_generation;
  j["fails_onedim"] = h.status == HypothesisStatus::fails_onedim;
  j["group_order"] = h.group_order;
  j["generated_order"] = h.generated_order;
  j["onedim_order"] = h.onedim_order;
  j["detail"] = h.detail;
  return j;
}

inline json to_json(const UniformityBound& b) {
  json j;
  j["epsilon"] = b.epsilon;
  j["pairwise_bound"] = b.pairwise_bound;
  j["value_bound"] = b.value_bound;
  j["subset_coefficient"] = b.subset_coefficient;
  j["is_probability"] = b.probability;
  return j;
}

inline json to_json(const ShrinkBound& s) {
  json j;
  j["lambda"] = s.lambda;
  j["d"] = s.d;
  j["alpha0"] = std::isinf(s.alpha0) ? json("infinity") : json(s.alpha0);
  j["branch_a"] = s.branch_a;
  j["branch_b"] = s.branch_b;
  j["branch_b_variant"] = s.branch_b_variant;
  j["g"] = s.g;
  j["h_at_alpha0"] = s.h_at_alpha0;
  j["quad_residual"] = s.quad_residual;
  return j;
}

inline json to_json(const KazhdanEstimate& k) {
  json j;
  j["lambda1"] = k.lambda1;
  j["epsilon_lb"] = k.epsilon_lb;
  j["set_size"] = k.set_size;
  j["group_order"] = k.group_order;
  j["residual"] = k.residual;
  j["iterations"] = k.iterations;
  j["from_pair_products"] = k.from_pair_products;
  return j;
}

inline json to_json(const RateFit& f) {
  json j;
  j["collapsed"] = f.collapsed;
  j["collapse_n"] = f.collapse_n;
  j["slope"] = f.slope;
  j["intercept"] = f.intercept;
  j["rms_residual"] = f.rms_residual;
  j["points"] = f.points;
  return j;
}

inline json to_json(const DecayReport& r) {
  json j;
  j["fitted"] = r.fitted;
  j["slope"] = r.slope;
  j["intercept"] = r.intercept;
  j["slope_stderr"] = r.slope_stderr;
  j["residual"] = r.residual;
  j["slope_negative_95"] = r.slope_negative_95;
  j["primes"] = r.primes;
  j["seed"] = r.seed;
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n", row.n},
                    {"samples", row.samples},
                    {"reducible", row.reducible},
                    {"fraction", row.fraction},
                    {"ci_lo", row.ci_lo},
                    {"ci_hi", row.ci_hi}});
  j["rows"] = rows;
  return j;
}

inline json to_json(const FourierData& f, const UnitaryDual& dual) {
  json j = json::array();
  for (std::size_t r = 0; r < dual.reps.size(); ++r) {
    const CMat& m = f.coeffs[r];
    json entry;
    entry["representation"] = dual.reps[r].name();
    entry["dimension"] = dual.reps[r].dim();
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index k = 0; k < m.cols(); ++k)
        rows.push_back({m(i, k).real(), m(i, k).imag()});
    entry["matrix"] = rows;  // row-major [re, im] pairs
    j.push_back(entry);
  }
  return j;
}

}  // namespace walkdist
