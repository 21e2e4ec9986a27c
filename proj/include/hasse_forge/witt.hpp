#pragma once

// p-typical Witt vectors W_n(R) of finite length over exact base rings.
//
// Addition, multiplication and the Witt vector Frobenius F are evaluated
// through universal integer polynomials obtained once per (p, n) from the
// ghost recursion
//     w_m(X) = sum_{i <= m} p^i X_i^{p^{m-i}},
// so the same code serves Z (where ghost coordinates are injective and give
// an independent check), Z/m and F_q.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hasse_forge/error.hpp"
#include "hasse_forge/finite_field.hpp"
#include "hasse_forge/multipoly.hpp"

namespace hasse_forge {

// ---------------------------------------------------------------------------
// Base rings

struct IntegerRing {
  using value_type = BigInt;
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_integer(const BigInt& n) const { return n; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool p_is_regular(std::uint64_t) const { return true; }
  std::string format(const value_type& a) const { return a.str(); }
  std::string name() const { return "Z"; }
  bool operator==(const IntegerRing&) const { return true; }
};

struct ZmodRing {
  BigInt modulus;

  explicit ZmodRing(BigInt m) : modulus(std::move(m)) {
    if (modulus < 2) throw Error(ErrorKind::BadParameter, "Z/m needs m >= 2");
  }
  using value_type = BigInt;
  value_type normalize(BigInt a) const {
    a %= modulus;
    if (a < 0) a += modulus;
    return a;
  }
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_integer(const BigInt& n) const { return normalize(n); }
  value_type add(const value_type& a, const value_type& b) const { return normalize(a + b); }
  value_type sub(const value_type& a, const value_type& b) const { return normalize(a - b); }
  value_type mul(const value_type& a, const value_type& b) const { return normalize(a * b); }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool p_is_regular(std::uint64_t p) const { return boost::multiprecision::gcd(modulus, BigInt(p)) == 1; }
  std::string format(const value_type& a) const { return a.str(); }
  std::string name() const { return "Z/" + modulus.str(); }
  bool operator==(const ZmodRing& o) const { return modulus == o.modulus; }
};

struct FqRing {
  FqField field;

  using value_type = FqElement;
  value_type zero() const { return field.zero(); }
  value_type one() const { return field.one(); }
  value_type from_integer(const BigInt& n) const {
    BigInt v = n % field.p();
    return field.from_integer(v.convert_to<std::int64_t>());
  }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool p_is_regular(std::uint64_t) const { return false; }
  std::string format(const value_type& a) const { return a.to_string(); }
  std::string name() const { return "F_" + std::to_string(field.order()); }
  bool operator==(const FqRing& o) const { return field == o.field; }
};

template <class R>
concept WittBaseRing = requires(const R& ring, const typename R::value_type& a, const BigInt& z, std::uint64_t p) {
  { ring.zero() } -> std::convertible_to<typename R::value_type>;
  { ring.one() } -> std::convertible_to<typename R::value_type>;
  { ring.from_integer(z) } -> std::convertible_to<typename R::value_type>;
  { ring.add(a, a) } -> std::convertible_to<typename R::value_type>;
  { ring.sub(a, a) } -> std::convertible_to<typename R::value_type>;
  { ring.mul(a, a) } -> std::convertible_to<typename R::value_type>;
  { ring.equal(a, a) } -> std::convertible_to<bool>;
  { ring.p_is_regular(p) } -> std::convertible_to<bool>;
  { ring.format(a) } -> std::convertible_to<std::string>;
  { ring.name() } -> std::convertible_to<std::string>;
};

template <WittBaseRing R>
typename R::value_type ring_pow(const R& ring, typename R::value_type base, std::uint64_t e) {
  auto result = ring.one();
  while (e) {
    if (e & 1) result = ring.mul(result, base);
    e >>= 1;
    if (e) base = ring.mul(base, base);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Universal polynomials

inline BigInt big_pow(std::uint64_t p, unsigned k) {
  BigInt out = 1;
  for (unsigned i = 0; i < k; ++i) out *= p;
  return out;
}

inline std::uint64_t small_pow(std::uint64_t p, unsigned k) {
  std::uint64_t out = 1;
  for (unsigned i = 0; i < k; ++i) out *= p;
  return out;
}

/// w_m in the variables offset..offset+m of a ring with nvars variables.
inline MultiPoly ghost_polynomial(std::uint64_t p, unsigned m, std::size_t nvars, std::size_t offset) {
  MultiPoly w(nvars);
  for (unsigned i = 0; i <= m; ++i) {
    w += MultiPoly::variable(nvars, offset + i, static_cast<std::uint32_t>(small_pow(p, m - i))).scaled(big_pow(p, i));
  }
  return w;
}

struct WittStructurePolys {
  std::uint64_t p = 0;
  unsigned n = 0;
  /// Variables X_0..X_{n-1} are indices 0..n-1, Y_0..Y_{n-1} are n..2n-1.
  std::vector<MultiPoly> sum_polys;
  std::vector<MultiPoly> prod_polys;
  /// F_0..F_{n-2} in the variables X_0..X_{n-1} only (nvars = n).
  std::vector<MultiPoly> frobenius_polys;

  std::vector<std::string> variable_names() const {
    std::vector<std::string> names;
    for (unsigned i = 0; i < n; ++i) names.push_back("X" + std::to_string(i));
    for (unsigned i = 0; i < n; ++i) names.push_back("Y" + std::to_string(i));
    return names;
  }
};

namespace detail {

// Solves sum_{i <= m} p^i P_i^{p^{m-i}} = target_m for P_0..P_{count-1}.
// `chain[i]` holds P_i^{p^{m-1-i}} from the previous level and is raised by p
// each step, so every power is computed once.
template <class TargetFn>
std::vector<MultiPoly> solve_ghost_recursion(std::uint64_t p, unsigned count, TargetFn target) {
  std::vector<MultiPoly> out;
  std::vector<MultiPoly> chain;
  for (unsigned m = 0; m < count; ++m) {
    for (auto& c : chain) c = c.pow(p);
    MultiPoly rhs = target(m);
    for (unsigned i = 0; i < m; ++i) rhs -= chain[i].scaled(big_pow(p, i));
    MultiPoly next = rhs.divided_exactly(big_pow(p, m));
    chain.push_back(next);
    out.push_back(std::move(next));
  }
  return out;
}

inline WittStructurePolys compute_structure_polys(std::uint64_t p, unsigned n) {
  WittStructurePolys polys;
  polys.p = p;
  polys.n = n;
  const std::size_t nv = 2 * n;
  polys.sum_polys = solve_ghost_recursion(p, n, [&](unsigned m) {
    return ghost_polynomial(p, m, nv, 0) + ghost_polynomial(p, m, nv, n);
  });
  polys.prod_polys = solve_ghost_recursion(p, n, [&](unsigned m) {
    return ghost_polynomial(p, m, nv, 0) * ghost_polynomial(p, m, nv, n);
  });
  if (n >= 2) {
    polys.frobenius_polys =
        solve_ghost_recursion(p, n - 1, [&](unsigned m) { return ghost_polynomial(p, m + 1, n, 0); });
  }
  return polys;
}

}  // namespace detail

/// Structure polynomials for W_n with prime p. Results are cached per (p, n);
/// the cache is filled under a lock and entries are immutable afterwards.
inline std::shared_ptr<const WittStructurePolys> witt_structure_polys(std::uint64_t p, unsigned n) {
  if (!is_prime(p)) throw Error(ErrorKind::NonPrime, "p = " + std::to_string(p) + " is not prime");
  if (n < 1) throw Error(ErrorKind::LengthTooShort, "Witt length must be >= 1");
  static std::mutex mutex;
  static std::map<std::pair<std::uint64_t, unsigned>, std::shared_ptr<const WittStructurePolys>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({p, n}); it != cache.end()) return it->second;
  }
  auto polys = std::make_shared<const WittStructurePolys>(detail::compute_structure_polys(p, n));
  std::lock_guard lock(mutex);
  return cache.try_emplace({p, n}, std::move(polys)).first->second;
}

struct GhostCompatibilityReport {
  bool sums = true;
  bool products = true;
  bool frobenius = true;
  bool ok() const { return sums && products && frobenius; }
};

/// Recomputes w_m(S), w_m(M), w_m(F) symbolically and compares them with
/// w_m(X) + w_m(Y), w_m(X) w_m(Y), w_{m+1}(X).
inline GhostCompatibilityReport verify_ghost_compatibility(const WittStructurePolys& polys) {
  GhostCompatibilityReport report;
  const std::uint64_t p = polys.p;
  const unsigned n = polys.n;
  const std::size_t nv = 2 * n;
  auto ghost_of = [&](const std::vector<MultiPoly>& comps, unsigned m, std::size_t vars) {
    MultiPoly w(vars);
    for (unsigned i = 0; i <= m; ++i) w += comps[i].pow(small_pow(p, m - i)).scaled(big_pow(p, i));
    return w;
  };
  for (unsigned m = 0; m < n; ++m) {
    const MultiPoly wx = ghost_polynomial(p, m, nv, 0);
    const MultiPoly wy = ghost_polynomial(p, m, nv, n);
    report.sums &= ghost_of(polys.sum_polys, m, nv) == wx + wy;
    report.products &= ghost_of(polys.prod_polys, m, nv) == wx * wy;
  }
  for (unsigned m = 0; m + 1 < n; ++m) {
    report.frobenius &= ghost_of(polys.frobenius_polys, m, n) == ghost_polynomial(p, m + 1, n, 0);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Witt vectors

template <WittBaseRing R>
class WittVector {
 public:
  using value_type = typename R::value_type;

  WittVector(R ring, std::uint64_t p, std::vector<value_type> components)
      : ring_(std::move(ring)), p_(p), components_(std::move(components)) {
    if (!is_prime(p_)) throw Error(ErrorKind::NonPrime, "p = " + std::to_string(p_) + " is not prime");
    if (components_.empty()) throw Error(ErrorKind::LengthTooShort, "Witt vectors need length >= 1");
  }

  static WittVector zero(R ring, std::uint64_t p, unsigned n) {
    auto z = ring.zero();
    return WittVector(ring, p, std::vector<value_type>(n, z));
  }
  static WittVector one(R ring, std::uint64_t p, unsigned n) {
    std::vector<value_type> c(n, ring.zero());
    c[0] = ring.one();
    return WittVector(std::move(ring), p, std::move(c));
  }

  const R& ring() const { return ring_; }
  std::uint64_t p() const { return p_; }
  unsigned length() const { return static_cast<unsigned>(components_.size()); }
  const std::vector<value_type>& components() const { return components_; }
  const value_type& operator[](std::size_t i) const { return components_[i]; }

  friend WittVector operator+(const WittVector& a, const WittVector& b) {
    a.check_shape(b);
    auto polys = witt_structure_polys(a.p_, a.length());
    return a.apply_binary(b, polys->sum_polys);
  }
  friend WittVector operator*(const WittVector& a, const WittVector& b) {
    a.check_shape(b);
    auto polys = witt_structure_polys(a.p_, a.length());
    return a.apply_binary(b, polys->prod_polys);
  }
  WittVector& operator+=(const WittVector& b) { return *this = *this + b; }
  WittVector& operator*=(const WittVector& b) { return *this = *this * b; }

  /// k * a by double-and-add, k >= 0.
  WittVector times(std::uint64_t k) const {
    WittVector result = zero(ring_, p_, length());
    WittVector base = *this;
    while (k) {
      if (k & 1) result += base;
      k >>= 1;
      if (k) base += base;
    }
    return result;
  }

  WittVector pow(std::uint64_t k) const {
    WittVector result = one(ring_, p_, length());
    WittVector base = *this;
    while (k) {
      if (k & 1) result *= base;
      k >>= 1;
      if (k) base *= base;
    }
    return result;
  }

  friend bool operator==(const WittVector& a, const WittVector& b) {
    if (a.p_ != b.p_ || a.length() != b.length() || !(a.ring_ == b.ring_)) return false;
    for (std::size_t i = 0; i < a.components_.size(); ++i) {
      if (!a.ring_.equal(a.components_[i], b.components_[i])) return false;
    }
    return true;
  }
  friend bool operator!=(const WittVector& a, const WittVector& b) { return !(a == b); }

  /// Ghost coordinates (w_0, ..., w_{n-1}); refused when p is a zero divisor in R.
  std::vector<value_type> ghost() const {
    if (!ring_.p_is_regular(p_)) {
      throw Error(ErrorKind::UnsupportedBaseRing,
                  "ghost map needs p = " + std::to_string(p_) + " to be a non-zero-divisor in " + ring_.name());
    }
    std::vector<value_type> out;
    for (unsigned m = 0; m < length(); ++m) {
      auto acc = ring_.zero();
      for (unsigned i = 0; i <= m; ++i) {
        acc = ring_.add(acc, ring_.mul(ring_.from_integer(big_pow(p_, i)),
                                       ring_pow(ring_, components_[i], small_pow(p_, m - i))));
      }
      out.push_back(acc);
    }
    return out;
  }

  /// Witt vector Frobenius F: W_n -> W_{n-1}.
  WittVector frobenius_F() const {
    if (length() < 2) throw Error(ErrorKind::LengthTooShort, "F needs length >= 2");
    auto polys = witt_structure_polys(p_, length());
    std::vector<value_type> out;
    for (const auto& poly : polys->frobenius_polys) out.push_back(evaluate(poly, components_));
    return WittVector(ring_, p_, std::move(out));
  }

  /// Verschiebung V: W_n -> W_{n+1}, (a_0, ..., a_{n-1}) -> (0, a_0, ..., a_{n-1}).
  WittVector verschiebung_V() const {
    std::vector<value_type> out;
    out.push_back(ring_.zero());
    out.insert(out.end(), components_.begin(), components_.end());
    return WittVector(ring_, p_, std::move(out));
  }

  /// Restriction R: W_n -> W_{n-1}, drops the last component.
  WittVector restrict_R() const {
    if (length() < 2) throw Error(ErrorKind::LengthTooShort, "R needs length >= 2");
    return WittVector(ring_, p_, std::vector<value_type>(components_.begin(), components_.end() - 1));
  }

  /// Componentwise application of a ring endomorphism, i.e. W_n(f).
  template <class Fn>
  WittVector map_components(Fn&& fn) const {
    std::vector<value_type> out;
    for (const auto& c : components_) out.push_back(fn(c));
    return WittVector(ring_, p_, std::move(out));
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "W_" << length() << '(' << ring_.name() << "): (";
    for (std::size_t i = 0; i < components_.size(); ++i) {
      if (i) os << ", ";
      os << ring_.format(components_[i]);
    }
    os << ')';
    return os.str();
  }

 private:
  void check_shape(const WittVector& b) const {
    if (p_ != b.p_ || length() != b.length() || !(ring_ == b.ring_)) {
      throw Error(ErrorKind::ShapeMismatch, to_string() + " vs " + b.to_string());
    }
  }

  value_type evaluate(const MultiPoly& poly, const std::vector<value_type>& vars) const {
    std::vector<std::map<std::uint32_t, value_type>> power_cache(vars.size());
    auto power = [&](std::size_t var, std::uint32_t e) -> const value_type& {
      auto& slot = power_cache[var];
      auto it = slot.find(e);
      if (it == slot.end()) it = slot.emplace(e, ring_pow(ring_, vars[var], e)).first;
      return it->second;
    };
    auto acc = ring_.zero();
    for (const auto& [exps, coeff] : poly.terms()) {
      auto term = ring_.from_integer(coeff);
      for (std::size_t v = 0; v < exps.size(); ++v) {
        if (exps[v]) term = ring_.mul(term, power(v, exps[v]));
      }
      acc = ring_.add(acc, term);
    }
    return acc;
  }

  WittVector apply_binary(const WittVector& b, const std::vector<MultiPoly>& polys) const {
    std::vector<value_type> vars = components_;
    vars.insert(vars.end(), b.components_.begin(), b.components_.end());
    std::vector<value_type> out;
    for (const auto& poly : polys) out.push_back(evaluate(poly, vars));
    return WittVector(ring_, p_, std::move(out));
  }

  R ring_;
  std::uint64_t p_;
  std::vector<value_type> components_;
};

/// Teichmueller representative [c] = (c, 0, ..., 0).
template <WittBaseRing R>
WittVector<R> teichmuller(const R& ring, std::uint64_t p, const typename R::value_type& c, unsigned n) {
  std::vector<typename R::value_type> comps(n, ring.zero());
  comps[0] = c;
  return WittVector<R>(ring, p, std::move(comps));
}

using WittFq = WittVector<FqRing>;

inline WittFq teichmuller(const FqElement& c, unsigned n) {
  return teichmuller(FqRing{c.field()}, c.field().p(), c, n);
}

/// The ring isomorphism W_n(F_p) -> Z/p^n. Writing a = sum_i V^i[a_i] (valid
/// because Frobenius is the identity on F_p), a maps to sum_i p^i t(a_i), where
/// t(c) = c~^{p^{n-1}} mod p^n is the multiplicative lift of c.
inline BigInt wn_fp_iso(const WittFq& a) {
  const FqField& f = a.ring().field;
  if (f.r() != 1 || f.p() != a.p()) {
    throw Error(ErrorKind::WrongBaseField, "wn_fp_iso needs base field F_p, got " + f.to_string());
  }
  const unsigned n = a.length();
  const BigInt modulus = big_pow(a.p(), n);
  const BigInt exponent = big_pow(a.p(), n - 1);
  BigInt total = 0;
  for (unsigned i = 0; i < n; ++i) {
    const BigInt digit = a[i].coeffs()[0];
    const BigInt lift = boost::multiprecision::powm(digit, exponent, modulus);
    total += big_pow(a.p(), i) * lift;
  }
  return total % modulus;
}

/// sum_{j < p} [c]^j in W_n(F_q).
inline WittFq xi_image(std::uint64_t p, unsigned n, const FqElement& c) {
  if (c.field().p() != p) {
    throw Error(ErrorKind::WrongBaseField, "element of " + c.field().to_string() + " used with p = " + std::to_string(p));
  }
  const WittFq tc = teichmuller(c, n);
  WittFq acc = WittFq::zero(FqRing{c.field()}, p, n);
  WittFq power = WittFq::one(FqRing{c.field()}, p, n);
  for (std::uint64_t j = 0; j < p; ++j) {
    acc += power;
    power *= tc;
  }
  return acc;
}

/// Level-n component of phi^infinity: W_n(phi^n), raising every component to p^n.
inline WittFq phi_infty(const WittFq& a) {
  const unsigned n = a.length();
  const std::uint64_t e = small_pow(a.p(), n);
  return a.map_components([&](const FqElement& c) { return c.pow_u(e); });
}

/// Inverse of phi_infty at level n: W_n(phi^{-n}) = W_n(phi^{k}) with k = -n mod r.
inline WittFq phi_infty_inverse(const WittFq& a) {
  const unsigned r = a.ring().field.r();
  const unsigned k = (r - a.length() % r) % r;
  const std::uint64_t e = small_pow(a.p(), k);
  return a.map_components([&](const FqElement& c) { return c.pow_u(e); });
}

}  // namespace hasse_forge
