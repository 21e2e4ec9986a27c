#pragma once

// Exact arithmetic in F_q = F_p[x]/(f) with f monic irreducible of degree r.
// Elements are dense coefficient vectors (constant term first) reduced mod p.

#include <cstdint>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hasse_forge/error.hpp"

namespace hasse_forge {

inline constexpr std::uint64_t kDefaultEnumerationLimit = std::uint64_t{1} << 24;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

namespace detail {

// Polynomials over F_p, constant term first, no trailing zeros (zero poly is empty).
using PolyFp = std::vector<std::uint64_t>;

inline void trim(PolyFp& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  // p is prime, a != 0 mod p
  std::uint64_t result = 1, base = a % p, e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return result;
}

inline PolyFp poly_mod(PolyFp a, const PolyFp& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = inv_mod(m.back(), p);
  while (a.size() > dm) {
    const std::uint64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = (a[shift + i] + (p - c) * m[i]) % p;
    }
    trim(a);
  }
  return a;
}

inline PolyFp poly_mulmod(const PolyFp& a, const PolyFp& b, const PolyFp& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  PolyFp out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  }
  return poly_mod(std::move(out), m, p);
}

inline PolyFp poly_powmod(PolyFp base, std::uint64_t e, const PolyFp& m, std::uint64_t p) {
  PolyFp result{1};
  base = poly_mod(std::move(base), m, p);
  while (e) {
    if (e & 1) result = poly_mulmod(result, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return result;
}

inline PolyFp poly_gcd(PolyFp a, PolyFp b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyFp r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// f monic of degree r >= 1: irreducible iff gcd(x^{p^i} - x, f) = 1 for i <= r/2.
inline bool is_irreducible(const PolyFp& f, std::uint64_t p) {
  const std::size_t r = f.size() - 1;
  if (r == 1) return true;
  PolyFp h = poly_mod(PolyFp{0, 1}, f, p);
  for (std::size_t i = 1; i <= r / 2; ++i) {
    h = poly_powmod(h, p, f, p);
    PolyFp diff = h;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (poly_gcd(f, diff, p).size() > 1) return false;
  }
  return true;
}

}  // namespace detail

class FqElement;

class FqField {
 public:
  /// Builds F_{p^r}. The optional modulus is listed leading coefficient first,
  /// as in the variety spec file. Without one, monic polynomials of degree r
  /// are scanned in lexicographic order of (c_{r-1}, ..., c_0) and the first
  /// irreducible one is used.
  static FqField build(std::uint64_t p, unsigned r,
                       const std::optional<std::vector<std::int64_t>>& modulus_leading_first = std::nullopt);

  std::uint64_t p() const { return data_->p; }
  unsigned r() const { return data_->r; }
  std::uint64_t order() const { return data_->q; }
  /// Constant term first, monic, size r + 1.
  const std::vector<std::uint64_t>& modulus() const { return data_->modulus; }
  std::vector<std::uint64_t> modulus_leading_first() const {
    return {data_->modulus.rbegin(), data_->modulus.rend()};
  }

  bool operator==(const FqField& other) const {
    return data_ == other.data_ || (p() == other.p() && modulus() == other.modulus());
  }
  bool operator!=(const FqField& other) const { return !(*this == other); }

  FqElement zero() const;
  FqElement one() const;
  /// The class of x (equal to -modulus[0] when r == 1).
  FqElement generator() const;
  FqElement from_integer(std::int64_t n) const;
  /// Constant term first; entries are reduced mod p, length must be r.
  FqElement element(const std::vector<std::int64_t>& coeffs) const;
  /// Deterministic enumeration order: index = sum c_i p^i.
  FqElement element_at(std::uint64_t index) const;
  std::uint64_t index_of(const FqElement& a) const;

  std::string to_string() const;

 private:
  struct Data {
    std::uint64_t p = 0;
    unsigned r = 0;
    std::uint64_t q = 0;
    std::vector<std::uint64_t> modulus;
  };
  explicit FqField(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
  friend class FqElement;
};

class FqElement {
 public:
  const FqField& field() const { return field_; }
  /// Constant term first, length r, each entry in [0, p).
  const std::vector<std::uint32_t>& coeffs() const { return c_; }

  bool is_zero() const {
    for (auto c : c_) {
      if (c) return false;
    }
    return true;
  }
  bool is_one() const {
    if (c_[0] != 1) return false;
    for (std::size_t i = 1; i < c_.size(); ++i) {
      if (c_[i]) return false;
    }
    return true;
  }

  friend bool operator==(const FqElement& a, const FqElement& b) {
    a.check_same(b);
    return a.c_ == b.c_;
  }
  friend bool operator!=(const FqElement& a, const FqElement& b) { return !(a == b); }

  friend FqElement operator+(const FqElement& a, const FqElement& b) {
    a.check_same(b);
    FqElement out = a;
    const std::uint64_t p = a.field_.p();
    for (std::size_t i = 0; i < out.c_.size(); ++i) {
      out.c_[i] = static_cast<std::uint32_t>((std::uint64_t{a.c_[i]} + b.c_[i]) % p);
    }
    return out;
  }
  friend FqElement operator-(const FqElement& a, const FqElement& b) {
    a.check_same(b);
    FqElement out = a;
    const std::uint64_t p = a.field_.p();
    for (std::size_t i = 0; i < out.c_.size(); ++i) {
      out.c_[i] = static_cast<std::uint32_t>((std::uint64_t{a.c_[i]} + p - b.c_[i]) % p);
    }
    return out;
  }
  FqElement operator-() const { return field_.zero() - *this; }

  friend FqElement operator*(const FqElement& a, const FqElement& b) {
    a.check_same(b);
    const auto& mod = a.field_.modulus();
    const std::uint64_t p = a.field_.p();
    const std::size_t r = a.c_.size();
    if (r == 1) {
      FqElement out = a;
      out.c_[0] = static_cast<std::uint32_t>(std::uint64_t{a.c_[0]} * b.c_[0] % p);
      return out;
    }
    std::vector<std::uint64_t> prod(2 * r - 1, 0);
    for (std::size_t i = 0; i < r; ++i) {
      if (!a.c_[i]) continue;
      for (std::size_t j = 0; j < r; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a.c_[i]} * b.c_[j]) % p;
    }
    // modulus is monic: x^r = -(mod[0] + ... + mod[r-1] x^{r-1})
    for (std::size_t k = 2 * r - 2; k >= r; --k) {
      const std::uint64_t c = prod[k];
      if (c) {
        for (std::size_t i = 0; i < r; ++i) prod[k - r + i] = (prod[k - r + i] + (p - c) * mod[i]) % p;
      }
      prod[k] = 0;
    }
    FqElement out = a;
    for (std::size_t i = 0; i < r; ++i) out.c_[i] = static_cast<std::uint32_t>(prod[i]);
    return out;
  }

  FqElement pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-(e + 1)) * inverse();
    FqElement result = field_.one();
    FqElement base = *this;
    auto n = static_cast<std::uint64_t>(e);
    while (n) {
      if (n & 1) result = result * base;
      base = base * base;
      n >>= 1;
    }
    return result;
  }
  /// Exponent given as an unsigned 64-bit value (used for p^k powers).
  FqElement pow_u(std::uint64_t n) const {
    FqElement result = field_.one();
    FqElement base = *this;
    while (n) {
      if (n & 1) result = result * base;
      base = base * base;
      n >>= 1;
    }
    return result;
  }

  FqElement inverse() const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero in " + field_.to_string());
    return pow_u(field_.order() - 2);
  }

  friend FqElement operator/(const FqElement& a, const FqElement& b) {
    a.check_same(b);
    if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero in " + a.field_.to_string());
    return a * b.inverse();
  }

  FqElement& operator+=(const FqElement& b) { return *this = *this + b; }
  FqElement& operator-=(const FqElement& b) { return *this = *this - b; }
  FqElement& operator*=(const FqElement& b) { return *this = *this * b; }

  /// The arithmetic Frobenius x -> x^p.
  FqElement frobenius() const { return pow_u(field_.p()); }

  /// Absolute trace to F_p: x + x^p + ... + x^{p^{r-1}} (lands in the prime field).
  FqElement trace() const {
    FqElement acc = *this;
    FqElement term = *this;
    for (unsigned i = 1; i < field_.r(); ++i) {
      term = term.frobenius();
      acc += term;
    }
    return acc;
  }

  std::string to_string() const {
    std::ostringstream os;
    bool any = false;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (!c_[i]) continue;
      if (any) os << '+';
      any = true;
      if (i == 0) {
        os << c_[i];
      } else {
        if (c_[i] != 1) os << c_[i] << '*';
        os << 'x';
        if (i > 1) os << '^' << i;
      }
    }
    if (!any) os << '0';
    return os.str();
  }

 private:
  FqElement(FqField field, std::vector<std::uint32_t> c) : field_(std::move(field)), c_(std::move(c)) {}

  void check_same(const FqElement& b) const {
    if (field_.data_ != b.field_.data_ && field_ != b.field_) {
      throw Error(ErrorKind::FieldMismatch, field_.to_string() + " vs " + b.field_.to_string());
    }
  }

  FqField field_;
  std::vector<std::uint32_t> c_;
  friend class FqField;
};

inline FqField FqField::build(std::uint64_t p, unsigned r,
                              const std::optional<std::vector<std::int64_t>>& modulus_leading_first) {
  if (!is_prime(p)) throw Error(ErrorKind::NonPrime, "p = " + std::to_string(p) + " is not prime");
  if (p >= (std::uint64_t{1} << 31)) throw Error(ErrorKind::TooLarge, "characteristic exceeds 2^31");
  if (r < 1) throw Error(ErrorKind::DegreeMismatch, "extension degree must be >= 1");
  std::uint64_t q = 1;
  for (unsigned i = 0; i < r; ++i) {
    if (q > UINT64_MAX / p) throw Error(ErrorKind::TooLarge, "p^r does not fit in 64 bits");
    q *= p;
  }
  auto data = std::make_shared<Data>();
  data->p = p;
  data->r = r;
  data->q = q;
  if (modulus_leading_first) {
    const auto& m = *modulus_leading_first;
    if (m.size() != r + 1) {
      throw Error(ErrorKind::DegreeMismatch, "modulus has " + std::to_string(m.size()) + " coefficients, expected " +
                                                 std::to_string(r + 1));
    }
    detail::PolyFp f(r + 1);
    for (unsigned i = 0; i <= r; ++i) {
      const std::int64_t c = m[r - i] % static_cast<std::int64_t>(p);
      f[i] = static_cast<std::uint64_t>(c < 0 ? c + static_cast<std::int64_t>(p) : c);
    }
    if (f[r] != 1) throw Error(ErrorKind::DegreeMismatch, "modulus must be monic of degree " + std::to_string(r));
    if (!detail::is_irreducible(f, p)) throw Error(ErrorKind::Reducible, "modulus is reducible over F_" + std::to_string(p));
    data->modulus = std::move(f);
  } else {
    // Lexicographic in (c_{r-1}, ..., c_0): c_0 varies fastest.
    const std::uint64_t candidates = q;
    for (std::uint64_t idx = 0; idx < candidates; ++idx) {
      detail::PolyFp f(r + 1, 0);
      f[r] = 1;
      std::uint64_t rest = idx;
      for (unsigned i = 0; i < r; ++i) {
        f[i] = rest % p;
        rest /= p;
      }
      if (detail::is_irreducible(f, p)) {
        data->modulus = std::move(f);
        break;
      }
    }
  }
  return FqField(std::move(data));
}

inline FqElement FqField::zero() const { return FqElement(*this, std::vector<std::uint32_t>(r(), 0)); }

inline FqElement FqField::one() const {
  std::vector<std::uint32_t> c(r(), 0);
  c[0] = 1;
  return FqElement(*this, std::move(c));
}

inline FqElement FqField::generator() const {
  if (r() == 1) return from_integer(-static_cast<std::int64_t>(modulus()[0]));
  std::vector<std::uint32_t> c(r(), 0);
  c[1] = 1;
  return FqElement(*this, std::move(c));
}

inline FqElement FqField::from_integer(std::int64_t n) const {
  const auto sp = static_cast<std::int64_t>(p());
  std::int64_t v = n % sp;
  if (v < 0) v += sp;
  std::vector<std::uint32_t> c(r(), 0);
  c[0] = static_cast<std::uint32_t>(v);
  return FqElement(*this, std::move(c));
}

inline FqElement FqField::element(const std::vector<std::int64_t>& coeffs) const {
  if (coeffs.size() != r()) {
    throw Error(ErrorKind::DegreeMismatch,
                "element needs " + std::to_string(r()) + " coefficients, got " + std::to_string(coeffs.size()));
  }
  const auto sp = static_cast<std::int64_t>(p());
  std::vector<std::uint32_t> c(r());
  for (unsigned i = 0; i < r(); ++i) {
    std::int64_t v = coeffs[i] % sp;
    c[i] = static_cast<std::uint32_t>(v < 0 ? v + sp : v);
  }
  return FqElement(*this, std::move(c));
}

inline FqElement FqField::element_at(std::uint64_t index) const {
  std::vector<std::uint32_t> c(r());
  for (unsigned i = 0; i < r(); ++i) {
    c[i] = static_cast<std::uint32_t>(index % p());
    index /= p();
  }
  return FqElement(*this, std::move(c));
}

inline std::uint64_t FqField::index_of(const FqElement& a) const {
  std::uint64_t idx = 0;
  for (std::size_t i = a.coeffs().size(); i-- > 0;) idx = idx * p() + a.coeffs()[i];
  return idx;
}

inline std::string FqField::to_string() const {
  std::ostringstream os;
  os << "F_" << order();
  if (r() > 1) {
    os << "[x]/(";
    bool any = false;
    for (std::size_t i = modulus().size(); i-- > 0;) {
      const auto c = modulus()[i];
      if (!c) continue;
      if (any) os << '+';
      any = true;
      if (i == 0) {
        os << c;
      } else {
        if (c != 1) os << c << '*';
        os << 'x';
        if (i > 1) os << '^' << i;
      }
    }
    os << ')';
  }
  return os.str();
}

/// Forward range over all q elements in index order.
class ElementRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = FqElement;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = FqElement;

    iterator(const FqField* field, std::uint64_t index) : field_(field), index_(index) {}
    FqElement operator*() const { return field_->element_at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      auto tmp = *this;
      ++index_;
      return tmp;
    }
    bool operator==(const iterator& o) const { return index_ == o.index_; }
    bool operator!=(const iterator& o) const { return index_ != o.index_; }

   private:
    const FqField* field_;
    std::uint64_t index_;
  };

  explicit ElementRange(FqField field) : field_(std::move(field)) {}
  iterator begin() const { return {&field_, 0}; }
  iterator end() const { return {&field_, field_.order()}; }
  std::uint64_t size() const { return field_.order(); }

 private:
  FqField field_;
};

inline ElementRange enumerate_elements(const FqField& field, std::uint64_t limit = kDefaultEnumerationLimit) {
  if (field.order() > limit) {
    throw Error(ErrorKind::TooLarge,
                "q = " + std::to_string(field.order()) + " exceeds enumeration limit " + std::to_string(limit));
  }
  return ElementRange(field);
}

/// Images of a root of `base`'s modulus inside `ext`, i.e. the embeddings
/// F_{p^r} -> F_{p^{rm}}; the first root in enumeration order is used.
class FieldEmbedding {
 public:
  FieldEmbedding(const FqField& base, const FqField& ext, std::uint64_t limit = kDefaultEnumerationLimit)
      : base_(base), ext_(ext), root_(ext.zero()) {
    if (base.p() != ext.p() || ext.r() % base.r() != 0) {
      throw Error(ErrorKind::FieldMismatch, base.to_string() + " does not embed in " + ext.to_string());
    }
    if (base.r() == 1) {
      root_ = ext.from_integer(-static_cast<std::int64_t>(base.modulus()[0]));
      return;
    }
    for (const FqElement& z : enumerate_elements(ext, limit)) {
      if (eval_modulus(z).is_zero()) {
        root_ = z;
        return;
      }
    }
    throw Error(ErrorKind::Reducible, "no root of the base modulus in the extension");
  }

  FqElement operator()(const FqElement& a) const {
    if (a.field() != base_) throw Error(ErrorKind::FieldMismatch, "embedding applied to foreign element");
    FqElement acc = ext_.zero();
    const auto& c = a.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * root_ + ext_.from_integer(c[i]);
    return acc;
  }

 private:
  FqElement eval_modulus(const FqElement& z) const {
    FqElement acc = ext_.zero();
    const auto& m = base_.modulus();
    for (std::size_t i = m.size(); i-- > 0;) acc = acc * z + ext_.from_integer(static_cast<std::int64_t>(m[i]));
    return acc;
  }

  FqField base_;
  FqField ext_;
  FqElement root_;
};

}  // namespace hasse_forge
