#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "walkdist/errors.hpp"
#include "walkdist/graphwalk.hpp"
#include "walkdist/groups.hpp"
#include "walkdist/parallel.hpp"
#include "walkdist/rng.hpp"

namespace walkdist {

// ---------------------------------------------------------------------------
// Integer generator sets for the matrix-product experiments.
// ---------------------------------------------------------------------------

enum class MatrixKind { special_linear, symplectic };

struct IntegerMatrixGenSet {
  std::size_t dim = 0;
  MatrixKind kind = MatrixKind::special_linear;
  std::vector<IntMatrix> gens;
};

inline void validate_generators(const IntegerMatrixGenSet& set) {
  if (set.dim == 0) throw domain_error("generator matrices must be nonempty");
  if (set.gens.empty()) throw domain_error("generator list is empty");
  for (const auto& g : set.gens) {
    if (g.n != set.dim)
      throw domain_error("generator dimension mismatch: expected " +
                         std::to_string(set.dim) + ", got " +
                         std::to_string(g.n));
    if (set.kind == MatrixKind::special_linear) {
      if (det_exact(BigMatrix::from(g)) != 1)
        throw domain_error("generator determinant is not one");
    } else {
      if (!is_symplectic(g))
        throw domain_error("generator does not preserve the symplectic form");
    }
  }
}

inline IntegerMatrixGenSet builtin_generators(MatrixKind kind,
                                              std::size_t dim) {
  if (dim == 0 || dim > 64)
    throw domain_error("built-in generators support dimensions 1 through 64");
  IntegerMatrixGenSet set;
  set.dim = dim;
  set.kind = kind;
  const auto d32 = static_cast<std::uint32_t>(dim);
  set.gens = kind == MatrixKind::special_linear
                 ? elementary_sl_generators(d32)
                 : symplectic_generators(d32);
  validate_generators(set);
  return set;
}

// ---------------------------------------------------------------------------
// Characteristic polynomials by the Berkowitz iteration (division-free,
// so it runs unchanged over Z and over Z/p).
// ---------------------------------------------------------------------------

struct ZpRing {
  using value_type = std::uint64_t;
  std::uint64_t p;
  explicit ZpRing(std::uint64_t modulus) : p(modulus) {
    validate_modulus(modulus);
    if (modulus < 2) throw domain_error("modulus must be at least 2");
  }
  value_type zero() const { return 0; }
  value_type one() const { return 1 % p; }
  value_type add(value_type a, value_type b) const { return (a + b) % p; }
  value_type sub(value_type a, value_type b) const { return (a + p - b) % p; }
  value_type mul(value_type a, value_type b) const { return (a * b) % p; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
};

struct BigRing {
  using value_type = cpp_int;
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type add(const value_type& a, const value_type& b) const {
    return a + b;
  }
  value_type sub(const value_type& a, const value_type& b) const {
    return a - b;
  }
  value_type mul(const value_type& a, const value_type& b) const {
    return a * b;
  }
  value_type neg(const value_type& a) const { return -a; }
};

// Ascending coefficients of det(xI - A): coeffs[i] multiplies x^i,
// coeffs[n] = 1. Entries are row-major.
template <typename Ring>
std::vector<typename Ring::value_type> berkowitz_charpoly(
    const Ring& ring, const std::vector<typename Ring::value_type>& a,
    std::size_t n) {
  using T = typename Ring::value_type;
  if (a.size() != n * n) throw domain_error("matrix entry count mismatch");
  if (n == 0) return {ring.one()};
  // descending coefficients; p[0] is the leading 1
  std::vector<T> p = {ring.one(), ring.neg(a[0])};
  for (std::size_t k = 2; k <= n; ++k) {
    const std::size_t m = k - 1;
    // corner blocks of the leading k x k principal submatrix
    std::vector<T> t(k + 1, ring.zero());
    t[0] = ring.one();
    t[1] = ring.neg(a[(k - 1) * n + (k - 1)]);
    std::vector<T> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = a[i * n + (k - 1)];
    for (std::size_t j = 2; j <= k; ++j) {
      T dot = ring.zero();
      for (std::size_t i = 0; i < m; ++i)
        dot = ring.add(dot, ring.mul(a[(k - 1) * n + i], w[i]));
      t[j] = ring.neg(dot);
      if (j < k) {
        std::vector<T> next(m, ring.zero());
        for (std::size_t r = 0; r < m; ++r)
          for (std::size_t c = 0; c < m; ++c)
            next[r] = ring.add(next[r], ring.mul(a[r * n + c], w[c]));
        w = std::move(next);
      }
    }
    std::vector<T> pn(k + 1, ring.zero());
    for (std::size_t i = 0; i <= k; ++i)
      for (std::size_t j = 0; j <= std::min(i, k); ++j)
        if (i - j < p.size())
          pn[i] = ring.add(pn[i], ring.mul(t[j], p[i - j]));
    p = std::move(pn);
  }
  std::reverse(p.begin(), p.end());
  return p;
}

inline std::vector<cpp_int> charpoly_exact(const BigMatrix& a) {
  BigRing ring;
  return berkowitz_charpoly(ring, a.entries, a.n);
}

// ---------------------------------------------------------------------------
// Dense polynomials over Z/p (ascending coefficients, trimmed; the zero
// polynomial has an empty coefficient vector).
// ---------------------------------------------------------------------------

struct PolyModP {
  std::uint64_t p = 2;
  std::vector<std::uint64_t> coeffs;  // ascending, no trailing zeros

  bool is_zero() const { return coeffs.empty(); }
  std::size_t degree() const {
    if (coeffs.empty()) throw domain_error("degree of the zero polynomial");
    return coeffs.size() - 1;
  }
};

namespace polymod {

inline void trim(PolyModP& f) {
  while (!f.coeffs.empty() && f.coeffs.back() == 0) f.coeffs.pop_back();
}

inline PolyModP make(std::uint64_t p, std::vector<std::uint64_t> coeffs) {
  validate_modulus(p);
  PolyModP f;
  f.p = p;
  f.coeffs = std::move(coeffs);
  for (auto& c : f.coeffs) c %= p;
  trim(f);
  return f;
}

inline PolyModP constant(std::uint64_t p, std::uint64_t c) {
  return make(p, {c});
}

inline PolyModP identity_x(std::uint64_t p) { return make(p, {0, 1}); }

inline void check_same_modulus(const PolyModP& a, const PolyModP& b) {
  if (a.p != b.p)
    throw domain_error("polynomial moduli differ: " + std::to_string(a.p) +
                       " vs " + std::to_string(b.p));
}

inline std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) throw domain_error("zero has no modular inverse");
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p),
               new_r = static_cast<std::int64_t>(a);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1)
    throw domain_error(std::to_string(a) + " is not invertible modulo " +
                       std::to_string(p));
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

inline PolyModP add(const PolyModP& a, const PolyModP& b) {
  check_same_modulus(a, b);
  PolyModP out;
  out.p = a.p;
  out.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) out.coeffs[i] = a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i)
    out.coeffs[i] = (out.coeffs[i] + b.coeffs[i]) % a.p;
  trim(out);
  return out;
}

inline PolyModP sub(const PolyModP& a, const PolyModP& b) {
  check_same_modulus(a, b);
  PolyModP out;
  out.p = a.p;
  out.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) out.coeffs[i] = a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i)
    out.coeffs[i] = (out.coeffs[i] + a.p - b.coeffs[i]) % a.p;
  trim(out);
  return out;
}

inline PolyModP mul(const PolyModP& a, const PolyModP& b) {
  check_same_modulus(a, b);
  PolyModP out;
  out.p = a.p;
  if (a.is_zero() || b.is_zero()) return out;
  out.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs.size(); ++j)
      out.coeffs[i + j] =
          (out.coeffs[i + j] + a.coeffs[i] * b.coeffs[j]) % a.p;
  }
  trim(out);
  return out;
}

// quotient-and-remainder; the divisor's leading coefficient is inverted.
inline std::pair<PolyModP, PolyModP> divmod(const PolyModP& a,
                                            const PolyModP& b) {
  check_same_modulus(a, b);
  if (b.is_zero()) throw domain_error("polynomial division by zero");
  PolyModP q, r = a;
  q.p = a.p;
  const std::uint64_t inv_lead = inverse_mod(b.coeffs.back(), b.p);
  if (a.is_zero() || a.coeffs.size() < b.coeffs.size()) return {q, r};
  q.coeffs.assign(a.coeffs.size() - b.coeffs.size() + 1, 0);
  for (std::size_t step = q.coeffs.size(); step-- > 0;) {
    if (r.coeffs.size() < b.coeffs.size() + step) continue;
    const std::size_t top = b.coeffs.size() + step - 1;
    if (top >= r.coeffs.size() || r.coeffs[top] == 0) continue;
    const std::uint64_t factor = (r.coeffs[top] * inv_lead) % a.p;
    q.coeffs[step] = factor;
    for (std::size_t i = 0; i < b.coeffs.size(); ++i)
      r.coeffs[step + i] =
          (r.coeffs[step + i] + a.p - (factor * b.coeffs[i]) % a.p) % a.p;
    trim(r);
  }
  trim(q);
  return {q, r};
}

inline PolyModP mod(const PolyModP& a, const PolyModP& b) {
  return divmod(a, b).second;
}

inline PolyModP monic(const PolyModP& f) {
  if (f.is_zero()) throw domain_error("cannot normalize the zero polynomial");
  if (f.coeffs.back() == 1) return f;
  const std::uint64_t inv = inverse_mod(f.coeffs.back(), f.p);
  PolyModP out = f;
  for (auto& c : out.coeffs) c = (c * inv) % f.p;
  return out;
}

inline PolyModP gcd(PolyModP a, PolyModP b) {
  while (!b.is_zero()) {
    PolyModP r = mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return monic(a);
}

inline PolyModP powmod(PolyModP base, cpp_int e, const PolyModP& modulus) {
  if (e < 0) throw domain_error("polynomial exponent must be nonnegative");
  PolyModP result = constant(modulus.p, 1);
  base = mod(base, modulus);
  while (e > 0) {
    if ((e & 1) != 0) result = mod(mul(result, base), modulus);
    e >>= 1;
    if (e > 0) base = mod(mul(base, base), modulus);
  }
  return result;
}

}  // namespace polymod

// Irreducibility over F_p by the Frobenius-fixed-field criterion:
// f (degree d) is irreducible iff x^(p^d) = x (mod f) and, for every prime
// q dividing d, gcd(x^(p^(d/q)) - x, f) is constant.
inline bool is_irreducible(const PolyModP& f_in) {
  if (f_in.is_zero()) return false;
  if (f_in.degree() == 0) return false;  // units and constants
  const PolyModP f = polymod::monic(f_in);
  const std::size_t d = f.degree();
  if (d == 1) return true;
  const PolyModP x = polymod::identity_x(f.p);
  std::vector<std::size_t> prime_divisors;
  {
    std::size_t rest = d;
    for (std::size_t q = 2; q * q <= rest; ++q)
      if (rest % q == 0) {
        prime_divisors.push_back(q);
        while (rest % q == 0) rest /= q;
      }
    if (rest > 1) prime_divisors.push_back(rest);
  }
  for (const std::size_t q : prime_divisors) {
    cpp_int e = boost::multiprecision::pow(cpp_int(f.p),
                                           static_cast<unsigned>(d / q));
    const PolyModP h = polymod::powmod(x, e, f);
    const PolyModP g = polymod::gcd(polymod::sub(h, x), f);
    if (!(g.is_zero() || g.degree() == 0)) return false;
  }
  cpp_int e = boost::multiprecision::pow(cpp_int(f.p),
                                         static_cast<unsigned>(d));
  const PolyModP frob = polymod::powmod(x, e, f);
  return polymod::sub(frob, x).is_zero();
}

// ---------------------------------------------------------------------------
// Primes: deterministic 64-bit Miller-Rabin, window search, primorials.
// ---------------------------------------------------------------------------

namespace primes {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b,
                                std::uint64_t m) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t e,
                                std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1) result = mulmod_u64(result, base, m);
    base = mulmod_u64(base, base, m);
    e >>= 1;
  }
  return result;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> first_primes(std::size_t count) {
  std::vector<std::uint64_t> out;
  std::uint64_t candidate = 2;
  while (out.size() < count) {
    if (is_prime(candidate)) out.push_back(candidate);
    ++candidate;
  }
  return out;
}

inline cpp_int primorial(std::size_t k) {
  cpp_int out = 1;
  for (auto q : first_primes(k)) out *= q;
  return out;
}

}  // namespace primes

// Smallest prime p with (1 - eps) c^(N/(n^2-1)) <= p <= (1 + eps) c^(N/(n^2-1)).
struct PrimeWindow {
  std::uint64_t prime = 0;
  double target = 0.0;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

inline PrimeWindow select_prime(double c, std::uint32_t n_steps,
                                std::size_t dim, double eps) {
  if (c <= 1.0) throw domain_error("growth base must exceed one");
  if (dim < 2) throw domain_error("matrix dimension must be at least 2");
  if (!(eps > 0.0) || eps >= 1.0)
    throw domain_error("window width must lie in (0, 1)");
  PrimeWindow out;
  const double exponent =
      double(n_steps) / double(dim * dim - 1);
  out.target = std::exp(exponent * std::log(c));
  const double lo_d = (1.0 - eps) * out.target;
  const double hi_d = (1.0 + eps) * out.target;
  if (hi_d > 9.0e18)
    throw resource_error("prime window exceeds 64-bit range");
  out.lo = static_cast<std::uint64_t>(std::ceil(lo_d));
  out.hi = static_cast<std::uint64_t>(std::floor(hi_d));
  if (out.lo > out.hi)
    throw domain_error("prime window [" + std::to_string(lo_d) + ", " +
                       std::to_string(hi_d) + "] contains no integer");
  for (std::uint64_t q = std::max<std::uint64_t>(out.lo, 2); q <= out.hi; ++q)
    if (primes::is_prime(q)) {
      out.prime = q;
      return out;
    }
  throw domain_error("prime window [" + std::to_string(out.lo) + ", " +
                     std::to_string(out.hi) + "] contains no prime");
}

// Level parameter for the primorial-modulus route: k is the integer closest
// to ((N / (2n^2 + n)) log c) / log(N / (2n^2 + n)), floored at 1.
inline std::size_t primorial_level(std::uint32_t n_steps, std::size_t dim,
                                   double c) {
  if (c <= 1.0) throw domain_error("growth base must exceed one");
  const double denom_steps = double(2 * dim * dim + dim);
  const double ratio = double(n_steps) / denom_steps;
  if (ratio <= 1.0) return 1;
  const double k = (ratio * std::log(c)) / std::log(ratio);
  if (k < 1.0) return 1;
  return static_cast<std::size_t>(std::llround(k));
}

// Tail-probability shapes for the two moduli routes, in log space so tiny
// values survive: level-p route ~ (c2/p)(1 + (1+eps) c2); primorial route
// ~ c3^k.
inline double sl_level_bound(std::uint64_t prime, double c2, double eps) {
  if (prime == 0) throw domain_error("prime must be positive");
  if (c2 <= 0.0) throw domain_error("constant must be positive");
  return (c2 / double(prime)) * (1.0 + (1.0 + eps) * c2);
}

inline double sp_level_log_bound(std::size_t k, double c3) {
  if (!(c3 > 0.0) || c3 >= 1.0)
    throw domain_error("decay constant must lie in (0, 1)");
  return double(k) * std::log(c3);
}

// ---------------------------------------------------------------------------
// Reducibility decay experiment: sample random words in the generators,
// reduce the product modulo each prime, and record how often the
// characteristic polynomial is reducible modulo every prime at once.
// ---------------------------------------------------------------------------

struct ModMatrix {
  std::size_t n = 0;
  std::uint64_t p = 2;
  std::vector<std::uint64_t> entries;  // row-major, reduced

  static ModMatrix identity(std::size_t n, std::uint64_t p) {
    ModMatrix m;
    m.n = n;
    m.p = p;
    m.entries.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) m.entries[i * n + i] = 1 % p;
    return m;
  }
  static ModMatrix from(const IntMatrix& a, std::uint64_t p) {
    validate_modulus(p);
    ModMatrix m;
    m.n = a.n;
    m.p = p;
    m.entries.resize(a.n * a.n);
    const std::int64_t mod = static_cast<std::int64_t>(p);
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
      std::int64_t r = a.entries[i] % mod;
      if (r < 0) r += mod;
      m.entries[i] = static_cast<std::uint64_t>(r);
    }
    return m;
  }
};

inline ModMatrix mul(const ModMatrix& a, const ModMatrix& b) {
  if (a.n != b.n || a.p != b.p) throw domain_error("matrix shape mismatch");
  ModMatrix out;
  out.n = a.n;
  out.p = a.p;
  out.entries.assign(a.n * a.n, 0);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t k = 0; k < a.n; ++k) {
      const std::uint64_t aik = a.entries[i * a.n + k];
      if (aik == 0) continue;
      for (std::size_t j = 0; j < a.n; ++j)
        out.entries[i * a.n + j] =
            (out.entries[i * a.n + j] + aik * b.entries[k * a.n + j]) % a.p;
    }
  return out;
}

inline PolyModP charpoly_mod(const ModMatrix& a) {
  ZpRing ring(a.p);
  return polymod::make(a.p, berkowitz_charpoly(ring, a.entries, a.n));
}

// Optional structured word source: letters read off the vertices of a
// uniformly random fixed-length walk instead of i.i.d. draws.
struct GraphWordSource {
  const DecoratedGraph* graph = nullptr;
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<std::size_t> vertex_letter;  // vertex index -> generator index
};

struct DecayRow {
  std::uint32_t n = 0;
  std::size_t samples = 0;
  std::size_t reducible = 0;
  double fraction = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct DecayReport {
  std::vector<DecayRow> rows;
  bool fitted = false;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double residual = 0.0;
  bool slope_negative_95 = false;
  std::vector<std::uint64_t> primes;
  std::uint64_t seed = 0;
};

namespace detail {

constexpr double kZ95 = 1.959964;

inline std::pair<double, double> wilson_interval(std::size_t hits,
                                                 std::size_t n) {
  if (n == 0) return {0.0, 1.0};
  const double z = kZ95;
  const double f = double(hits) / double(n);
  const double nn = double(n);
  const double denom = 1.0 + z * z / nn;
  const double center = (f + z * z / (2.0 * nn)) / denom;
  const double half =
      (z * std::sqrt(f * (1.0 - f) / nn + z * z / (4.0 * nn * nn))) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

inline std::vector<std::size_t> sample_word(const GraphWordSource* source,
                                            std::size_t num_gens,
                                            std::uint32_t length, Rng& rng) {
  std::vector<std::size_t> letters(length);
  if (source == nullptr) {
    for (auto& l : letters) l = rng.below(num_gens);
    return letters;
  }
  if (length == 0) return letters;
  const auto walk = sample_walk_uniform(*source->graph, source->start,
                                        source->end, length - 1, rng);
  for (std::uint32_t i = 0; i < length; ++i) {
    const std::size_t v = walk[i];
    if (v >= source->vertex_letter.size())
      throw domain_error("walk vertex has no generator letter");
    const std::size_t g = source->vertex_letter[v];
    if (g >= num_gens) throw domain_error("generator letter out of range");
    letters[i] = g;
  }
  return letters;
}

}  // namespace detail

inline DecayReport reducibility_experiment(
    const IntegerMatrixGenSet& set, const std::vector<std::uint32_t>& lengths,
    const std::vector<std::uint64_t>& prime_levels, std::size_t samples,
    std::uint64_t seed, std::size_t threads = 1,
    const GraphWordSource* source = nullptr) {
  validate_generators(set);
  if (lengths.empty()) throw domain_error("no word lengths requested");
  if (prime_levels.empty()) throw domain_error("no prime levels requested");
  if (samples == 0) throw domain_error("sample count must be positive");
  for (auto q : prime_levels)
    if (!primes::is_prime(q))
      throw domain_error("level " + std::to_string(q) + " is not prime");
  if (source != nullptr) {
    if (source->graph == nullptr)
      throw domain_error("graph word source has no graph");
    validate_graph(*source->graph);
  }

  DecayReport report;
  report.primes = prime_levels;
  report.seed = seed;

  // generators reduced once per level
  std::vector<std::vector<ModMatrix>> reduced(prime_levels.size());
  for (std::size_t pi = 0; pi < prime_levels.size(); ++pi)
    for (const auto& g : set.gens)
      reduced[pi].push_back(ModMatrix::from(g, prime_levels[pi]));

  for (std::size_t li = 0; li < lengths.size(); ++li) {
    const std::uint32_t length = lengths[li];
    if (length == 0) throw domain_error("word length must be positive");
    const auto flags = parallel_map<char>(
        samples, threads, [&](std::size_t s) -> char {
          Rng rng(derive_seed(seed, static_cast<std::uint64_t>(li),
                              static_cast<std::uint64_t>(s)));
          const auto letters =
              detail::sample_word(source, set.gens.size(), length, rng);
          for (std::size_t pi = 0; pi < prime_levels.size(); ++pi) {
            ModMatrix prod =
                ModMatrix::identity(set.dim, prime_levels[pi]);
            for (auto l : letters) prod = mul(prod, reduced[pi][l]);
            if (is_irreducible(charpoly_mod(prod)))
              return 0;  // irreducible at one level: not a reducible word
          }
          return 1;
        });
    DecayRow row;
    row.n = length;
    row.samples = samples;
    row.reducible = static_cast<std::size_t>(
        std::count(flags.begin(), flags.end(), char(1)));
    row.fraction = double(row.reducible) / double(samples);
    const auto ci = detail::wilson_interval(row.reducible, samples);
    row.ci_lo = ci.first;
    row.ci_hi = ci.second;
    report.rows.push_back(row);
  }

  // weighted least squares on log-fraction, rows with 0 < f < 1 only
  std::vector<double> xs, ys, ws;
  for (const auto& row : report.rows) {
    if (row.fraction <= 0.0 || row.fraction >= 1.0) continue;
    xs.push_back(double(row.n));
    ys.push_back(std::log(row.fraction));
    ws.push_back(double(row.samples) * row.fraction / (1.0 - row.fraction));
  }
  bool distinct = false;
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] != xs[0]) distinct = true;
  if (xs.size() >= 2 && distinct) {
    double sw = 0, swx = 0, swy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sw += ws[i];
      swx += ws[i] * xs[i];
      swy += ws[i] * ys[i];
    }
    const double xbar = swx / sw, ybar = swy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += ws[i] * (xs[i] - xbar) * (xs[i] - xbar);
      sxy += ws[i] * (xs[i] - xbar) * (ys[i] - ybar);
    }
    report.fitted = true;
    report.slope = sxy / sxx;
    report.intercept = ybar - report.slope * xbar;
    report.slope_stderr = std::sqrt(1.0 / sxx);
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - (report.intercept + report.slope * xs[i]);
      ss += ws[i] * r * r;
    }
    report.residual = std::sqrt(ss / sw);
    report.slope_negative_95 =
        report.slope + detail::kZ95 * report.slope_stderr < 0.0;
  }
  return report;
}

// Exact integer product of a word in the generators (oracle-grade).
inline BigMatrix word_product_exact(const IntegerMatrixGenSet& set,
                                    const std::vector<std::size_t>& letters) {
  BigMatrix prod = BigMatrix::identity(static_cast<std::uint32_t>(set.dim));
  for (auto l : letters) {
    if (l >= set.gens.size()) throw domain_error("letter out of range");
    prod = mul(prod, BigMatrix::from(set.gens[l]));
  }
  return prod;
}

}  // namespace walkdist
