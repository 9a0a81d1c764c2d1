#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "walkdist/errors.hpp"

namespace walkdist {

using boost::multiprecision::cpp_int;

constexpr std::uint32_t kMaxModulus = 0x7FFFFFFFu;  // moduli fit in 31 bits
constexpr std::uint64_t kDefaultGroupCap = 10'000'000ull;

// ---------------------------------------------------------------------------
// Group elements. One concrete payload per family; a GroupElement is a
// variant over them. Products of elements from different ambient groups are
// domain errors, never coercions.
// ---------------------------------------------------------------------------

struct CyclicElem {
  std::uint32_t residue = 0;
  std::uint32_t modulus = 1;
  bool operator==(const CyclicElem&) const = default;
};

struct ProductElem {
  std::vector<std::uint32_t> residues;
  std::vector<std::uint32_t> moduli;
  bool operator==(const ProductElem&) const = default;
};

// Dihedral group of order 2m: element r^rot f^flip with f r f^-1 = r^-1.
struct DihedralElem {
  std::uint32_t rot = 0;
  std::uint8_t flip = 0;
  std::uint32_t m = 1;
  bool operator==(const DihedralElem&) const = default;
};

// Permutation of {0,..,n-1} in one-line notation: images[x] is the image
// of x. Product convention is pinned by the multiplication tests:
// (a*b)(x) = a(b(x)), i.e. the right factor acts first.
struct PermElem {
  std::vector<std::uint32_t> images;
  bool operator==(const PermElem&) const = default;
};

// Square matrix over Z/modulus, entries reduced to [0, modulus).
struct MatModElem {
  std::uint32_t dim = 1;
  std::uint32_t modulus = 1;
  std::vector<std::uint32_t> entries;  // row-major, dim*dim
  bool operator==(const MatModElem&) const = default;
};

using GroupElement =
    std::variant<CyclicElem, ProductElem, DihedralElem, PermElem, MatModElem>;

namespace detail {

inline std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFFu;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::uint32_t add_mod(std::uint32_t a, std::uint32_t b,
                             std::uint32_t m) {
  std::uint64_t s = std::uint64_t(a) + b;
  if (s >= m) s -= m;
  return static_cast<std::uint32_t>(s);
}

inline std::uint32_t neg_mod(std::uint32_t a, std::uint32_t m) {
  return a == 0 ? 0 : m - a;
}

[[noreturn]] inline void mixed_group_error() {
  throw domain_error(
      "cannot combine elements that belong to different groups");
}

}  // namespace detail

struct ElementHash {
  std::size_t operator()(const GroupElement& g) const {
    std::uint64_t h = 0xCBF29CE484222325ull;
    h = detail::fnv1a(h, g.index());
    std::visit(
        [&h](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, CyclicElem>) {
            h = detail::fnv1a(h, e.residue);
            h = detail::fnv1a(h, e.modulus);
          } else if constexpr (std::is_same_v<T, ProductElem>) {
            for (std::size_t i = 0; i < e.residues.size(); ++i) {
              h = detail::fnv1a(h, e.residues[i]);
              h = detail::fnv1a(h, e.moduli[i]);
            }
          } else if constexpr (std::is_same_v<T, DihedralElem>) {
            h = detail::fnv1a(h, e.rot);
            h = detail::fnv1a(h, e.flip);
            h = detail::fnv1a(h, e.m);
          } else if constexpr (std::is_same_v<T, PermElem>) {
            for (auto x : e.images) h = detail::fnv1a(h, x);
          } else {
            h = detail::fnv1a(h, e.dim);
            h = detail::fnv1a(h, e.modulus);
            for (auto x : e.entries) h = detail::fnv1a(h, x);
          }
        },
        g);
    return static_cast<std::size_t>(h);
  }
};

inline GroupElement mul(const GroupElement& a, const GroupElement& b) {
  if (a.index() != b.index()) detail::mixed_group_error();
  return std::visit(
      [&b](const auto& x) -> GroupElement {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, CyclicElem>) {
          if (x.modulus != y.modulus) detail::mixed_group_error();
          return CyclicElem{detail::add_mod(x.residue, y.residue, x.modulus),
                            x.modulus};
        } else if constexpr (std::is_same_v<T, ProductElem>) {
          if (x.moduli != y.moduli) detail::mixed_group_error();
          ProductElem r = x;
          for (std::size_t i = 0; i < r.residues.size(); ++i)
            r.residues[i] =
                detail::add_mod(x.residues[i], y.residues[i], x.moduli[i]);
          return r;
        } else if constexpr (std::is_same_v<T, DihedralElem>) {
          if (x.m != y.m) detail::mixed_group_error();
          // r^a f^b * r^c f^d = r^(a + (-1)^b c) f^(b xor d)
          const std::uint32_t c =
              x.flip ? detail::neg_mod(y.rot, x.m) : y.rot;
          return DihedralElem{detail::add_mod(x.rot, c, x.m),
                              static_cast<std::uint8_t>(x.flip ^ y.flip),
                              x.m};
        } else if constexpr (std::is_same_v<T, PermElem>) {
          if (x.images.size() != y.images.size()) detail::mixed_group_error();
          PermElem r;
          r.images.resize(x.images.size());
          for (std::size_t i = 0; i < x.images.size(); ++i)
            r.images[i] = x.images[y.images[i]];
          return r;
        } else {
          if (x.dim != y.dim || x.modulus != y.modulus)
            detail::mixed_group_error();
          const std::uint32_t n = x.dim, m = x.modulus;
          MatModElem r{n, m, std::vector<std::uint32_t>(std::size_t(n) * n, 0)};
          for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j) {
              std::uint64_t acc = 0;
              for (std::uint32_t k = 0; k < n; ++k) {
                acc += std::uint64_t(x.entries[i * n + k]) *
                       y.entries[k * n + j] % m;
                if (acc >= m) acc -= m;
              }
              r.entries[i * n + j] = static_cast<std::uint32_t>(acc);
            }
          return r;
        }
      },
      a);
}

namespace detail {

// Determinant of the minor of `a` with row i and column j removed,
// computed exactly.
inline cpp_int minor_det(const std::vector<cpp_int>& a, std::uint32_t n,
                         std::uint32_t skip_row, std::uint32_t skip_col);

inline cpp_int det_exact(const std::vector<cpp_int>& a, std::uint32_t n) {
  if (n == 0) return 1;
  if (n == 1) return a[0];
  if (n == 2) return a[0] * a[3] - a[1] * a[2];
  cpp_int det = 0;
  for (std::uint32_t j = 0; j < n; ++j) {
    cpp_int term = a[j] * minor_det(a, n, 0, j);
    if (j % 2 == 0)
      det += term;
    else
      det -= term;
  }
  return det;
}

inline cpp_int minor_det(const std::vector<cpp_int>& a, std::uint32_t n,
                         std::uint32_t skip_row, std::uint32_t skip_col) {
  std::vector<cpp_int> sub;
  sub.reserve(std::size_t(n - 1) * (n - 1));
  for (std::uint32_t i = 0; i < n; ++i) {
    if (i == skip_row) continue;
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j == skip_col) continue;
      sub.push_back(a[i * n + j]);
    }
  }
  return det_exact(sub, n - 1);
}

inline std::int64_t egcd(std::int64_t a, std::int64_t b, std::int64_t& x,
                         std::int64_t& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  std::int64_t x1, y1;
  std::int64_t g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

inline std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t m) {
  std::int64_t x, y;
  std::int64_t g = egcd(std::int64_t(a % m), std::int64_t(m), x, y);
  if (g != 1 && g != -1)
    throw domain_error("value has no inverse modulo " + std::to_string(m));
  std::int64_t r = x % std::int64_t(m);
  if (r < 0) r += m;
  return static_cast<std::uint32_t>(r);
}

inline std::uint32_t reduce_int(const cpp_int& v, std::uint32_t m) {
  cpp_int r = v % m;
  if (r < 0) r += m;
  return r.convert_to<std::uint32_t>();
}

}  // namespace detail

inline GroupElement inv(const GroupElement& g) {
  return std::visit(
      [](const auto& e) -> GroupElement {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, CyclicElem>) {
          return CyclicElem{detail::neg_mod(e.residue, e.modulus), e.modulus};
        } else if constexpr (std::is_same_v<T, ProductElem>) {
          ProductElem r = e;
          for (std::size_t i = 0; i < r.residues.size(); ++i)
            r.residues[i] = detail::neg_mod(e.residues[i], e.moduli[i]);
          return r;
        } else if constexpr (std::is_same_v<T, DihedralElem>) {
          if (e.flip) return e;  // reflections are involutions
          return DihedralElem{detail::neg_mod(e.rot, e.m), 0, e.m};
        } else if constexpr (std::is_same_v<T, PermElem>) {
          PermElem r;
          r.images.resize(e.images.size());
          for (std::size_t i = 0; i < e.images.size(); ++i)
            r.images[e.images[i]] = static_cast<std::uint32_t>(i);
          return r;
        } else {
          // inverse = det^'-1' * adjugate, entrywise mod m; requires det to
          // be a unit mod m, which holds for members of a matrix group
          const std::uint32_t n = e.dim, m = e.modulus;
          std::vector<cpp_int> a(e.entries.begin(), e.entries.end());
          const std::uint32_t det =
              detail::reduce_int(detail::det_exact(a, n), m);
          const std::uint32_t det_inv = detail::inverse_mod(det, m);
          MatModElem r{n, m, std::vector<std::uint32_t>(std::size_t(n) * n)};
          for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j) {
              cpp_int cof = detail::minor_det(a, n, j, i);
              if ((i + j) % 2 == 1) cof = -cof;
              r.entries[i * n + j] = static_cast<std::uint32_t>(
                  std::uint64_t(detail::reduce_int(cof, m)) * det_inv % m);
            }
          return r;
        }
      },
      g);
}

inline bool is_identity(const GroupElement& g) {
  return std::visit(
      [](const auto& e) -> bool {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, CyclicElem>) {
          return e.residue == 0;
        } else if constexpr (std::is_same_v<T, ProductElem>) {
          return std::all_of(e.residues.begin(), e.residues.end(),
                             [](std::uint32_t r) { return r == 0; });
        } else if constexpr (std::is_same_v<T, DihedralElem>) {
          return e.rot == 0 && e.flip == 0;
        } else if constexpr (std::is_same_v<T, PermElem>) {
          for (std::size_t i = 0; i < e.images.size(); ++i)
            if (e.images[i] != i) return false;
          return true;
        } else {
          for (std::uint32_t i = 0; i < e.dim; ++i)
            for (std::uint32_t j = 0; j < e.dim; ++j)
              if (e.entries[i * e.dim + j] != (i == j ? 1u % e.modulus : 0u))
                return false;
          return true;
        }
      },
      g);
}

inline std::string element_label(const GroupElement& g) {
  return std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, CyclicElem>) {
          return std::to_string(e.residue);
        } else if constexpr (std::is_same_v<T, ProductElem>) {
          std::string s = "(";
          for (std::size_t i = 0; i < e.residues.size(); ++i) {
            if (i) s += ' ';
            s += std::to_string(e.residues[i]);
          }
          return s + ")";
        } else if constexpr (std::is_same_v<T, DihedralElem>) {
          if (e.rot == 0 && e.flip == 0) return "e";
          std::string s;
          if (e.rot == 1)
            s = "r";
          else if (e.rot > 1)
            s = "r" + std::to_string(e.rot);
          if (e.flip) s += "f";
          return s;
        } else if constexpr (std::is_same_v<T, PermElem>) {
          std::string s = "[";
          for (std::size_t i = 0; i < e.images.size(); ++i) {
            if (i) s += ' ';
            s += std::to_string(e.images[i]);
          }
          return s + "]";
        } else {
          std::string s = "[";
          for (std::uint32_t i = 0; i < e.dim; ++i) {
            s += "[";
            for (std::uint32_t j = 0; j < e.dim; ++j) {
              if (j) s += ' ';
              s += std::to_string(e.entries[i * e.dim + j]);
            }
            s += "]";
          }
          return s + "]";
        }
      },
      g);
}

// ---------------------------------------------------------------------------
// Integer matrices (exact), quotient reduction.
// ---------------------------------------------------------------------------

struct IntMatrix {
  std::uint32_t n = 0;
  std::vector<std::int64_t> entries;  // row-major, n*n

  static IntMatrix identity(std::uint32_t n) {
    IntMatrix m{n, std::vector<std::int64_t>(std::size_t(n) * n, 0)};
    for (std::uint32_t i = 0; i < n; ++i) m.entries[i * n + i] = 1;
    return m;
  }
  std::int64_t& at(std::uint32_t i, std::uint32_t j) {
    return entries[i * n + j];
  }
  std::int64_t at(std::uint32_t i, std::uint32_t j) const {
    return entries[i * n + j];
  }
  bool operator==(const IntMatrix&) const = default;
};

// Exact product over Z with arbitrary-precision entries.
struct BigMatrix {
  std::uint32_t n = 0;
  std::vector<cpp_int> entries;

  static BigMatrix from(const IntMatrix& m) {
    return BigMatrix{m.n, std::vector<cpp_int>(m.entries.begin(),
                                               m.entries.end())};
  }
  static BigMatrix identity(std::uint32_t n) {
    BigMatrix m{n, std::vector<cpp_int>(std::size_t(n) * n, 0)};
    for (std::uint32_t i = 0; i < n; ++i) m.entries[i * n + i] = 1;
    return m;
  }
};

inline BigMatrix mul(const BigMatrix& a, const BigMatrix& b) {
  if (a.n != b.n) throw domain_error("matrix size mismatch in product");
  BigMatrix r{a.n, std::vector<cpp_int>(std::size_t(a.n) * a.n, 0)};
  for (std::uint32_t i = 0; i < a.n; ++i)
    for (std::uint32_t k = 0; k < a.n; ++k) {
      const cpp_int& aik = a.entries[i * a.n + k];
      if (aik == 0) continue;
      for (std::uint32_t j = 0; j < a.n; ++j)
        r.entries[i * a.n + j] += aik * b.entries[k * a.n + j];
    }
  return r;
}

inline cpp_int det_exact(const BigMatrix& m) {
  return detail::det_exact(m.entries, m.n);
}

inline cpp_int det_exact(const IntMatrix& m) {
  return det_exact(BigMatrix::from(m));
}

inline void validate_modulus(std::uint64_t m) {
  if (m < 1 || m > kMaxModulus)
    throw domain_error("modulus must lie in [1, 2^31 - 1], got " +
                       std::to_string(m));
}

// Entrywise reduction with nonnegative representatives.
inline GroupElement reduce_mod(const IntMatrix& m, std::uint32_t modulus) {
  validate_modulus(modulus);
  MatModElem e{m.n, modulus, std::vector<std::uint32_t>(m.entries.size())};
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    std::int64_t r = m.entries[i] % std::int64_t(modulus);
    if (r < 0) r += modulus;
    e.entries[i] = static_cast<std::uint32_t>(r);
  }
  return e;
}

inline GroupElement reduce_mod(const BigMatrix& m, std::uint32_t modulus) {
  validate_modulus(modulus);
  MatModElem e{m.n, modulus, std::vector<std::uint32_t>(m.entries.size())};
  for (std::size_t i = 0; i < m.entries.size(); ++i)
    e.entries[i] = detail::reduce_int(m.entries[i], modulus);
  return e;
}

// Entrywise modular reduction between matrix quotients (target | source) or
// from characteristic zero (source_modulus = 0).
struct QuotientMap {
  std::uint32_t source_modulus = 0;
  std::uint32_t target_modulus = 1;

  QuotientMap(std::uint32_t source, std::uint32_t target)
      : source_modulus(source), target_modulus(target) {
    validate_modulus(target);
    if (source != 0) {
      validate_modulus(source);
      if (source % target != 0)
        throw domain_error(
            "quotient map requires the target modulus to divide the source "
            "modulus");
    }
  }

  GroupElement operator()(const GroupElement& g) const {
    if (const auto* m = std::get_if<MatModElem>(&g)) {
      if (source_modulus != 0 && m->modulus != source_modulus)
        throw domain_error("element modulus does not match the quotient map");
      MatModElem r{m->dim, target_modulus,
                   std::vector<std::uint32_t>(m->entries.size())};
      for (std::size_t i = 0; i < m->entries.size(); ++i)
        r.entries[i] = m->entries[i] % target_modulus;
      return r;
    }
    if (const auto* c = std::get_if<CyclicElem>(&g)) {
      if (source_modulus != 0 && c->modulus != source_modulus)
        throw domain_error("element modulus does not match the quotient map");
      return CyclicElem{c->residue % target_modulus, target_modulus};
    }
    throw capability_error(
        "quotient maps are defined for matrix and cyclic elements only");
  }
};

// ---------------------------------------------------------------------------
// FiniteGroup: an enumerated group with a canonical element order (identity
// first, then breadth-first discovery from the listed generators) and O(1)
// index lookup. Value type over shared immutable state.
// ---------------------------------------------------------------------------

enum class GroupFamily { cyclic, product, dihedral, symmetric, matrix, generated };

class FiniteGroup {
public:
  struct Info {
    GroupFamily family = GroupFamily::generated;
    std::uint32_t m = 0;                 // cyclic / dihedral parameter
    std::vector<std::uint32_t> moduli;   // product of cyclics
    std::uint32_t degree = 0;            // symmetric
    std::uint32_t dim = 0, modulus = 0;  // matrix families
    std::string name;
  };

  static FiniteGroup cyclic(std::uint32_t m,
                            std::uint64_t cap = kDefaultGroupCap) {
    validate_modulus(m);
    if (m > cap) group_too_large(m, cap);
    std::vector<GroupElement> elems;
    elems.reserve(m);
    for (std::uint32_t r = 0; r < m; ++r) elems.push_back(CyclicElem{r, m});
    Info info{GroupFamily::cyclic, m, {}, 0, 0, 0, "Z" + std::to_string(m)};
    std::vector<GroupElement> gens;
    if (m > 1) gens.push_back(CyclicElem{1, m});
    return FiniteGroup(std::move(elems), std::move(gens), std::move(info));
  }

  static FiniteGroup product_of_cyclics(std::vector<std::uint32_t> moduli,
                                        std::uint64_t cap = kDefaultGroupCap) {
    if (moduli.empty())
      throw domain_error("product of cyclics needs at least one factor");
    std::uint64_t order = 1;
    std::string name;
    for (auto m : moduli) {
      validate_modulus(m);
      order *= m;
      if (order > cap) group_too_large(order, cap);
      if (!name.empty()) name += "x";
      name += "Z" + std::to_string(m);
    }
    std::vector<GroupElement> elems;
    elems.reserve(order);
    ProductElem cur{std::vector<std::uint32_t>(moduli.size(), 0), moduli};
    for (std::uint64_t i = 0; i < order; ++i) {
      elems.push_back(cur);
      // odometer increment, last coordinate fastest
      for (std::size_t k = moduli.size(); k-- > 0;) {
        if (++cur.residues[k] < moduli[k]) break;
        cur.residues[k] = 0;
      }
    }
    std::vector<GroupElement> gens;
    for (std::size_t k = 0; k < moduli.size(); ++k) {
      if (moduli[k] == 1) continue;
      ProductElem g{std::vector<std::uint32_t>(moduli.size(), 0), moduli};
      g.residues[k] = 1;
      gens.push_back(g);
    }
    Info info{GroupFamily::product, 0, moduli, 0, 0, 0, name};
    return FiniteGroup(std::move(elems), std::move(gens), std::move(info));
  }

  static FiniteGroup dihedral(std::uint32_t m,
                              std::uint64_t cap = kDefaultGroupCap) {
    validate_modulus(m);
    if (2ull * m > cap) group_too_large(2ull * m, cap);
    std::vector<GroupElement> elems;
    elems.reserve(2ull * m);
    for (std::uint8_t f = 0; f <= 1; ++f)
      for (std::uint32_t a = 0; a < m; ++a)
        elems.push_back(DihedralElem{a, f, m});
    std::vector<GroupElement> gens;
    if (m > 1) gens.push_back(DihedralElem{1, 0, m});
    gens.push_back(DihedralElem{0, 1, m});
    Info info{GroupFamily::dihedral, m, {}, 0, 0, 0,
              "D" + std::to_string(m)};
    return FiniteGroup(std::move(elems), std::move(gens), std::move(info));
  }

  static FiniteGroup symmetric(std::uint32_t degree,
                               std::uint64_t cap = kDefaultGroupCap) {
    if (degree < 1) throw domain_error("permutation degree must be positive");
    std::vector<GroupElement> gens;
    if (degree >= 2) {
      PermElem t{std::vector<std::uint32_t>(degree)};
      std::iota(t.images.begin(), t.images.end(), 0);
      std::swap(t.images[0], t.images[1]);
      gens.push_back(t);
      if (degree >= 3) {
        PermElem c{std::vector<std::uint32_t>(degree)};
        for (std::uint32_t i = 0; i < degree; ++i)
          c.images[i] = (i + 1) % degree;
        gens.push_back(c);
      }
    }
    PermElem id{std::vector<std::uint32_t>(degree)};
    std::iota(id.images.begin(), id.images.end(), 0);
    auto elems = bfs_enumerate(GroupElement(id), gens, cap);
    Info info{GroupFamily::symmetric, 0, {}, degree, 0, 0,
              "S" + std::to_string(degree)};
    return FiniteGroup(std::move(elems), std::move(gens), std::move(info));
  }

  static FiniteGroup from_generators(std::vector<GroupElement> gens,
                                     std::uint64_t cap = kDefaultGroupCap,
                                     std::string name = "") {
    if (gens.empty())
      throw domain_error("generated group needs at least one generator");
    GroupElement id = make_identity_like(gens.front());
    auto elems = bfs_enumerate(id, gens, cap);
    Info info;
    info.family = GroupFamily::generated;
    if (const auto* m = std::get_if<MatModElem>(&gens.front())) {
      info.family = GroupFamily::matrix;
      info.dim = m->dim;
      info.modulus = m->modulus;
    }
    info.name = name.empty()
                     ? "G(order=" + std::to_string(elems.size()) + ")"
                     : std::move(name);
    return FiniteGroup(std::move(elems), std::move(gens), std::move(info));
  }

  std::size_t order() const { return d_->elems.size(); }
  const GroupElement& element(std::uint32_t i) const { return d_->elems[i]; }
  std::uint32_t identity() const { return d_->identity; }
  const std::vector<GroupElement>& elements() const { return d_->elems; }
  const Info& info() const { return d_->info; }
  const std::string& name() const { return d_->info.name; }

  std::optional<std::uint32_t> index_of(const GroupElement& g) const {
    auto it = d_->index.find(g);
    if (it == d_->index.end()) return std::nullopt;
    return it->second;
  }

  std::uint32_t index_of_checked(const GroupElement& g) const {
    auto idx = index_of(g);
    if (!idx)
      throw domain_error("element " + element_label(g) +
                         " does not belong to group " + name());
    return *idx;
  }

  std::uint32_t mul_idx(std::uint32_t a, std::uint32_t b) const {
    return index_of_checked(mul(d_->elems[a], d_->elems[b]));
  }

  std::uint32_t inv_idx(std::uint32_t a) const { return d_->inverse[a]; }

  const std::vector<std::uint32_t>& generator_indices() const {
    return d_->gen_idx;
  }

  std::string label(std::uint32_t i) const {
    return element_label(d_->elems[i]);
  }

  // tbl[g] = index of g * t (or g * t^-1). The walk recurrences and the
  // transfer operators are built from these tables.
  std::vector<std::uint32_t> right_translation_table(std::uint32_t t_idx,
                                                     bool by_inverse) const {
    const GroupElement t =
        by_inverse ? d_->elems[d_->inverse[t_idx]] : d_->elems[t_idx];
    std::vector<std::uint32_t> tbl(order());
    for (std::uint32_t g = 0; g < order(); ++g)
      tbl[g] = index_of_checked(mul(d_->elems[g], t));
    return tbl;
  }

  bool same_group(const FiniteGroup& other) const { return d_ == other.d_; }

private:
  struct Data {
    std::vector<GroupElement> elems;
    std::unordered_map<GroupElement, std::uint32_t, ElementHash> index;
    std::vector<std::uint32_t> inverse;
    std::vector<std::uint32_t> gen_idx;
    std::uint32_t identity = 0;
    Info info;
  };

  [[noreturn]] static void group_too_large(std::uint64_t order,
                                           std::uint64_t cap) {
    throw resource_error("group order " + std::to_string(order) +
                         " exceeds the enumeration cap " +
                         std::to_string(cap));
  }

  static GroupElement make_identity_like(const GroupElement& g) {
    return std::visit(
        [](const auto& e) -> GroupElement {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, CyclicElem>) {
            return CyclicElem{0, e.modulus};
          } else if constexpr (std::is_same_v<T, ProductElem>) {
            return ProductElem{
                std::vector<std::uint32_t>(e.residues.size(), 0), e.moduli};
          } else if constexpr (std::is_same_v<T, DihedralElem>) {
            return DihedralElem{0, 0, e.m};
          } else if constexpr (std::is_same_v<T, PermElem>) {
            PermElem id{std::vector<std::uint32_t>(e.images.size())};
            std::iota(id.images.begin(), id.images.end(), 0);
            return id;
          } else {
            MatModElem id{e.dim, e.modulus,
                          std::vector<std::uint32_t>(e.entries.size(), 0)};
            for (std::uint32_t i = 0; i < e.dim; ++i)
              id.entries[i * e.dim + i] = 1 % e.modulus;
            return id;
          }
        },
        g);
  }

  // Breadth-first closure from the identity; discovery order is the
  // canonical element order and is deterministic for a fixed generator list.
  static std::vector<GroupElement> bfs_enumerate(
      const GroupElement& id, const std::vector<GroupElement>& gens,
      std::uint64_t cap) {
    std::vector<GroupElement> elems;
    std::unordered_map<GroupElement, std::uint32_t, ElementHash> seen;
    elems.push_back(id);
    seen.emplace(id, 0);
    for (std::size_t head = 0; head < elems.size(); ++head) {
      const GroupElement cur = elems[head];
      for (const auto& t : gens) {
        GroupElement nxt = mul(cur, t);
        if (seen.emplace(nxt, static_cast<std::uint32_t>(elems.size()))
                .second) {
          elems.push_back(std::move(nxt));
          if (elems.size() > cap) group_too_large(elems.size(), cap);
        }
      }
    }
    return elems;
  }

  FiniteGroup(std::vector<GroupElement> elems, std::vector<GroupElement> gens,
              Info info) {
    auto d = std::make_shared<Data>();
    d->elems = std::move(elems);
    d->info = std::move(info);
    d->index.reserve(d->elems.size() * 2);
    for (std::uint32_t i = 0; i < d->elems.size(); ++i)
      d->index.emplace(d->elems[i], i);
    if (d->index.size() != d->elems.size())
      throw numeric_error("duplicate elements in group enumeration");
    bool found_id = false;
    for (std::uint32_t i = 0; i < d->elems.size(); ++i)
      if (is_identity(d->elems[i])) {
        d->identity = i;
        found_id = true;
        break;
      }
    if (!found_id) throw numeric_error("group enumeration lost the identity");
    d->inverse.resize(d->elems.size());
    for (std::uint32_t i = 0; i < d->elems.size(); ++i) {
      auto it = d->index.find(inv(d->elems[i]));
      if (it == d->index.end())
        throw numeric_error("group enumeration is not closed under inverse");
      d->inverse[i] = it->second;
    }
    for (const auto& g : gens) {
      auto it = d->index.find(g);
      if (it == d->index.end())
        throw numeric_error("generator missing from enumeration");
      d->gen_idx.push_back(it->second);
    }
    d_ = std::move(d);
  }

  std::shared_ptr<const Data> d_;
};

// ---------------------------------------------------------------------------
// Subgroup machinery (closures, derived subgroup) on enumerated groups.
// ---------------------------------------------------------------------------

// Indices of the subgroup generated by the given elements, in discovery
// order starting from the identity.
inline std::vector<std::uint32_t> subgroup_closure(
    const FiniteGroup& g, const std::vector<std::uint32_t>& seeds) {
  std::vector<std::uint32_t> members;
  std::vector<char> in(g.order(), 0);
  members.push_back(g.identity());
  in[g.identity()] = 1;
  for (std::size_t head = 0; head < members.size(); ++head) {
    for (auto s : seeds) {
      const std::uint32_t nxt = g.mul_idx(members[head], s);
      if (!in[nxt]) {
        in[nxt] = 1;
        members.push_back(nxt);
      }
    }
  }
  return members;
}

// Derived subgroup: normal closure of the commutators of the group's stored
// generators. The conjugation loop runs until the closure is stable.
inline std::vector<std::uint32_t> derived_subgroup(const FiniteGroup& g) {
  const auto& gens = g.generator_indices();
  std::vector<std::uint32_t> seeds;
  for (auto a : gens)
    for (auto b : gens) {
      const std::uint32_t c =
          g.mul_idx(g.mul_idx(a, b), g.mul_idx(g.inv_idx(a), g.inv_idx(b)));
      seeds.push_back(c);
    }
  for (;;) {
    auto members = subgroup_closure(g, seeds);
    std::vector<char> in(g.order(), 0);
    for (auto m : members) in[m] = 1;
    bool grew = false;
    for (auto m : members) {
      for (auto t : gens) {
        const std::uint32_t conj =
            g.mul_idx(g.mul_idx(t, m), g.inv_idx(t));
        if (!in[conj]) {
          in[conj] = 1;
          seeds.push_back(conj);
          grew = true;
        }
      }
    }
    if (!grew) return members;
  }
}

// Integer generator families for the arithmetic groups.

// All elementary matrices E_ij(+-1), i != j: 2 n (n-1) generators of SL(n,Z).
inline std::vector<IntMatrix> elementary_sl_generators(std::uint32_t n) {
  if (n < 2) throw domain_error("special linear generators need n >= 2");
  std::vector<IntMatrix> gens;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int s : {+1, -1}) {
        IntMatrix m = IntMatrix::identity(n);
        m.at(i, j) = s;
        gens.push_back(std::move(m));
      }
    }
  return gens;
}

// The standard symplectic form J = [[0, I], [-I, 0]] on 2n coordinates.
inline IntMatrix symplectic_form(std::uint32_t two_n) {
  if (two_n < 2 || two_n % 2 != 0)
    throw domain_error("symplectic form needs an even dimension >= 2");
  const std::uint32_t n = two_n / 2;
  IntMatrix j{two_n, std::vector<std::int64_t>(std::size_t(two_n) * two_n, 0)};
  for (std::uint32_t i = 0; i < n; ++i) {
    j.at(i, n + i) = 1;
    j.at(n + i, i) = -1;
  }
  return j;
}

// Symmetric generating set of Sp(2n,Z): the symplectic translations
// [[I, S], [0, I]] over a basis of symmetric S, their inverses, and the
// form rotation J with its inverse.
inline std::vector<IntMatrix> symplectic_generators(std::uint32_t two_n) {
  if (two_n < 2 || two_n % 2 != 0)
    throw domain_error("symplectic generators need an even dimension >= 2");
  const std::uint32_t n = two_n / 2;
  std::vector<IntMatrix> gens;
  auto push_translation = [&](std::uint32_t a, std::uint32_t b) {
    for (int s : {+1, -1}) {
      IntMatrix m = IntMatrix::identity(two_n);
      m.at(a, n + b) = s;
      if (a != b) m.at(b, n + a) = s;
      gens.push_back(std::move(m));
    }
  };
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = a; b < n; ++b) push_translation(a, b);
  IntMatrix j = symplectic_form(two_n);
  gens.push_back(j);
  // J^-1 = J^T = -J
  IntMatrix jinv = j;
  for (auto& e : jinv.entries) e = -e;
  gens.push_back(std::move(jinv));
  return gens;
}

// True when M^T J M = J exactly over the integers.
inline bool is_symplectic(const IntMatrix& m) {
  const IntMatrix j = symplectic_form(m.n);
  BigMatrix bm = BigMatrix::from(m);
  BigMatrix bj = BigMatrix::from(j);
  BigMatrix mt{m.n, std::vector<cpp_int>(bm.entries.size())};
  for (std::uint32_t i = 0; i < m.n; ++i)
    for (std::uint32_t k = 0; k < m.n; ++k)
      mt.entries[i * m.n + k] = bm.entries[k * m.n + i];
  const BigMatrix prod = mul(mul(mt, bj), bm);
  return prod.entries == bj.entries;
}

// SL(n, Z/m): image of the elementary generators under entrywise reduction.
inline FiniteGroup special_linear_group(std::uint32_t n, std::uint32_t modulus,
                                        std::uint64_t cap = kDefaultGroupCap) {
  std::vector<GroupElement> gens;
  for (const auto& m : elementary_sl_generators(n))
    gens.push_back(reduce_mod(m, modulus));
  return FiniteGroup::from_generators(
      std::move(gens), cap,
      "SL(" + std::to_string(n) + "," + std::to_string(modulus) + ")");
}

// Sp(2n, Z/m): image of the symplectic generators under entrywise reduction.
inline FiniteGroup symplectic_group(std::uint32_t two_n, std::uint32_t modulus,
                                    std::uint64_t cap = kDefaultGroupCap) {
  std::vector<GroupElement> gens;
  for (const auto& m : symplectic_generators(two_n))
    gens.push_back(reduce_mod(m, modulus));
  return FiniteGroup::from_generators(
      std::move(gens), cap,
      "Sp(" + std::to_string(two_n) + "," + std::to_string(modulus) + ")");
}

}  // namespace walkdist
