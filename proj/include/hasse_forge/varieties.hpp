#pragma once

// Point counts N_m = |X(F_{q^m})| and the rational zeta function
//     Z(X, t) = exp(sum_m N_m t^m / m) = prod_i P_i(t)^{(-1)^{i+1}},
// reconstructed exactly from counts and split into Weil polynomials P_i.

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "hasse_forge/error.hpp"
#include "hasse_forge/finite_field.hpp"
#include "hasse_forge/multipoly.hpp"
#include "hasse_forge/polyroots.hpp"
#include "hasse_forge/special_functions.hpp"

namespace hasse_forge {

/// Integer polynomial in t, constant term first.
using IntPoly = std::vector<BigInt>;

inline void trim(IntPoly& a) {
  while (a.size() > 1 && a.back() == 0) a.pop_back();
}

inline IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly out(a.size() + b.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

inline Complex poly_eval(const IntPoly& a, Complex t) {
  Complex acc = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) acc = acc * t + a[k].convert_to<double>();
  return acc;
}

inline std::string poly_to_string(const IntPoly& a, char var = 't') {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0) continue;
    const BigInt mag = a[k] < 0 ? BigInt(-a[k]) : a[k];
    if (first) {
      if (a[k] < 0) os << '-';
    } else {
      os << (a[k] < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0 || mag != 1) os << mag.str();
    if (k >= 1) os << var;
    if (k >= 2) os << '^' << k;
  }
  if (first) os << '0';
  return os.str();
}

inline BigInt big_power(std::uint64_t base, unsigned e) {
  BigInt out = 1;
  for (unsigned i = 0; i < e; ++i) out *= base;
  return out;
}

namespace detail {

using RatPoly = std::vector<BigRational>;

inline void trim_rat(RatPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline RatPoly derivative(const RatPoly& a) {
  RatPoly d;
  for (std::size_t k = 1; k < a.size(); ++k) d.push_back(a[k] * BigRational(static_cast<long long>(k)));
  trim_rat(d);
  return d;
}

// Quotient and remainder; b must be non-zero.
inline std::pair<RatPoly, RatPoly> divmod(RatPoly a, const RatPoly& b) {
  trim_rat(a);
  if (a.size() < b.size()) return {RatPoly{}, a};
  RatPoly quot(a.size() - b.size() + 1, BigRational(0));
  for (std::size_t shift = quot.size(); shift-- > 0;) {
    const BigRational f = a[shift + b.size() - 1] / b.back();
    quot[shift] = f;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= f * b[j];
  }
  trim_rat(a);
  trim_rat(quot);
  return {quot, a};
}

inline RatPoly monic_gcd(RatPoly a, RatPoly b) {
  trim_rat(a);
  trim_rat(b);
  while (!b.empty()) {
    RatPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const BigRational lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

inline RatPoly subtract(RatPoly a, const RatPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), BigRational(0));
  for (std::size_t k = 0; k < b.size(); ++k) a[k] -= b[k];
  trim_rat(a);
  return a;
}

// Scales to a primitive integer polynomial with positive constant term.
inline IntPoly primitive_part(const RatPoly& a) {
  BigInt lcm = 1;
  for (const auto& c : a) {
    const BigInt den = boost::multiprecision::denominator(c);
    lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
  }
  IntPoly out;
  BigInt g = 0;
  for (const auto& c : a) {
    out.push_back(boost::multiprecision::numerator(c) * (lcm / boost::multiprecision::denominator(c)));
    g = boost::multiprecision::gcd(g, out.back());
  }
  const bool flip = !out.empty() && out.front() < 0;
  for (auto& c : out) c = (flip ? -c : c) / g;
  return out;
}

}  // namespace detail

/// Yun's square-free decomposition over Q: P = c * prod_i f_i^i with f_i
/// square-free and pairwise coprime. Returns (f_i, i) for non-constant f_i.
inline std::vector<std::pair<IntPoly, unsigned>> squarefree_factorization(const IntPoly& p) {
  detail::RatPoly f;
  for (const auto& c : p) f.emplace_back(c);
  detail::trim_rat(f);
  std::vector<std::pair<IntPoly, unsigned>> out;
  if (f.size() <= 1) return out;
  const detail::RatPoly df = detail::derivative(f);
  detail::RatPoly a = detail::monic_gcd(f, df);
  detail::RatPoly b = detail::divmod(f, a).first;
  detail::RatPoly c = detail::divmod(df, a).first;
  detail::RatPoly d = detail::subtract(c, detail::derivative(b));
  for (unsigned i = 1; b.size() > 1; ++i) {
    const detail::RatPoly g = detail::monic_gcd(b, d);
    if (g.size() > 1) out.emplace_back(detail::primitive_part(g), i);
    b = detail::divmod(b, g).first;
    c = detail::divmod(d, g).first;
    d = detail::subtract(c, detail::derivative(b));
  }
  return out;
}

/// Reciprocal roots of P(t) = prod (1 - lambda t), i.e. roots of t^deg P(1/t).
/// Repeated roots are separated exactly first, so each is found as a simple root.
inline std::vector<Complex> reciprocal_roots(const IntPoly& p, const RootOptions& opts = {}) {
  std::vector<Complex> out;
  for (const auto& [factor, mult] : squarefree_factorization(p)) {
    std::vector<double> reversed(factor.size());
    for (std::size_t k = 0; k < factor.size(); ++k) reversed[factor.size() - 1 - k] = factor[k].convert_to<double>();
    for (const auto& r : polynomial_roots(reversed, opts)) out.insert(out.end(), mult, r);
  }
  std::sort(out.begin(), out.end(), [](Complex x, Complex y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return out;
}

// ---------------------------------------------------------------------------
// Variety specs

class VarietySpec;

struct ProjectiveSpace {
  unsigned n = 1;
};

/// y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6, coefficients (a1, a2, a3, a4, a6).
struct WeierstrassCurve {
  std::vector<FqElement> a;
};

struct ProductVariety {
  std::shared_ptr<const VarietySpec> left;
  std::shared_ptr<const VarietySpec> right;
};

struct CustomVariety {
  std::vector<BigInt> counts;  // N_1..N_B
  std::vector<unsigned> betti; // b_0..b_{2d}
};

inline FqElement weierstrass_discriminant(const std::vector<FqElement>& a) {
  const FqField& f = a[0].field();
  auto k = [&](std::int64_t n) { return f.from_integer(n); };
  const auto &a1 = a[0], &a2 = a[1], &a3 = a[2], &a4 = a[3], &a6 = a[4];
  const FqElement b2 = a1 * a1 + k(4) * a2;
  const FqElement b4 = k(2) * a4 + a1 * a3;
  const FqElement b6 = a3 * a3 + k(4) * a6;
  const FqElement b8 = a1 * a1 * a6 + k(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  return -(b2 * b2 * b8) - k(8) * b4 * b4 * b4 - k(27) * b6 * b6 + k(9) * b2 * b4 * b6;
}

class VarietySpec {
 public:
  using Kind = std::variant<ProjectiveSpace, WeierstrassCurve, ProductVariety, CustomVariety>;

  static VarietySpec projective_space(FqField base, unsigned n) {
    if (n < 1) throw Error(ErrorKind::BadParameter, "projective space needs n >= 1");
    return VarietySpec(std::move(base), ProjectiveSpace{n});
  }

  static VarietySpec weierstrass(FqField base, std::vector<FqElement> a) {
    if (a.size() != 5) throw Error(ErrorKind::BadParameter, "Weierstrass curves need (a1, a2, a3, a4, a6)");
    for (const auto& c : a) {
      if (c.field() != base) throw Error(ErrorKind::FieldMismatch, "curve coefficient outside the base field");
    }
    if (weierstrass_discriminant(a).is_zero()) throw Error(ErrorKind::SingularCurve, "discriminant vanishes");
    return VarietySpec(std::move(base), WeierstrassCurve{std::move(a)});
  }

  static VarietySpec weierstrass(const FqField& base, const std::array<std::int64_t, 5>& a) {
    std::vector<FqElement> coeffs;
    for (auto c : a) coeffs.push_back(base.from_integer(c));
    return weierstrass(base, std::move(coeffs));
  }

  static VarietySpec product(const VarietySpec& left, const VarietySpec& right) {
    if (left.base() != right.base()) throw Error(ErrorKind::FieldMismatch, "product factors over different fields");
    return VarietySpec(left.base(), ProductVariety{std::make_shared<const VarietySpec>(left),
                                                   std::make_shared<const VarietySpec>(right)});
  }

  static VarietySpec custom(FqField base, std::vector<BigInt> counts, std::vector<unsigned> betti) {
    if (betti.empty() || betti.size() % 2 == 0) {
      throw Error(ErrorKind::BettiMismatch, "Betti list must have odd length 2d + 1");
    }
    unsigned total = 0;
    for (auto b : betti) total += b;
    if (counts.size() < (total + 1) / 2) {
      throw Error(ErrorKind::InsufficientCounts, "custom spec needs at least " + std::to_string((total + 1) / 2) +
                                                     " counts, got " + std::to_string(counts.size()));
    }
    for (const auto& n : counts) {
      if (n < 0) throw Error(ErrorKind::BadParameter, "point counts must be non-negative");
    }
    return VarietySpec(std::move(base), CustomVariety{std::move(counts), std::move(betti)});
  }

  const FqField& base() const { return base_; }
  std::uint64_t q() const { return base_.order(); }
  const Kind& kind() const { return kind_; }

  std::vector<unsigned> betti() const {
    return std::visit(
        [](const auto& k) -> std::vector<unsigned> {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, ProjectiveSpace>) {
            std::vector<unsigned> b(2 * k.n + 1, 0);
            for (unsigned i = 0; i <= k.n; ++i) b[2 * i] = 1;
            return b;
          } else if constexpr (std::is_same_v<T, WeierstrassCurve>) {
            return {1, 2, 1};
          } else if constexpr (std::is_same_v<T, ProductVariety>) {
            // Kuenneth: b_k(X x Y) = sum_{i+j=k} b_i(X) b_j(Y)
            const auto l = k.left->betti(), r = k.right->betti();
            std::vector<unsigned> b(l.size() + r.size() - 1, 0);
            for (std::size_t i = 0; i < l.size(); ++i)
              for (std::size_t j = 0; j < r.size(); ++j) b[i + j] += l[i] * r[j];
            return b;
          } else {
            return k.betti;
          }
        },
        kind_);
  }

  unsigned dimension() const { return static_cast<unsigned>(betti().size() - 1) / 2; }

  std::string describe() const {
    return std::visit(
        [&](const auto& k) -> std::string {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, ProjectiveSpace>) {
            return "P^" + std::to_string(k.n) + " over " + base_.to_string();
          } else if constexpr (std::is_same_v<T, WeierstrassCurve>) {
            std::string s = "y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6, a = (";
            for (std::size_t i = 0; i < k.a.size(); ++i) s += (i ? ", " : "") + k.a[i].to_string();
            return s + ") over " + base_.to_string();
          } else if constexpr (std::is_same_v<T, ProductVariety>) {
            return "(" + k.left->describe() + ") x (" + k.right->describe() + ")";
          } else {
            return "custom variety over " + base_.to_string();
          }
        },
        kind_);
  }

 private:
  VarietySpec(FqField base, Kind kind) : base_(std::move(base)), kind_(std::move(kind)) {}

  FqField base_;
  Kind kind_;
};

// ---------------------------------------------------------------------------
// Counting

struct CountOptions {
  std::uint64_t enumeration_limit = kDefaultEnumerationLimit;
  /// Worker threads for curve counts; 0 picks hardware_concurrency.
  unsigned threads = 0;
};

namespace detail {

// Number of y with y^2 + b y = c, via precomputed tables over the whole field.
class QuadraticSolutionCounter {
 public:
  explicit QuadraticSolutionCounter(const FqField& f) : field_(f) {
    const std::uint64_t q = f.order();
    table_.assign(q, 0);
    // odd p: table[z] = #{y : y^2 = z};  p = 2: table[z] = #{u : u^2 + u = z}
    for (std::uint64_t i = 0; i < q; ++i) {
      const FqElement y = f.element_at(i);
      const FqElement z = f.p() == 2 ? y * y + y : y * y;
      ++table_[f.index_of(z)];
    }
  }

  unsigned count(const FqElement& b, const FqElement& c) const {
    if (field_.p() != 2) {
      const FqElement disc = b * b + field_.from_integer(4) * c;
      return table_[field_.index_of(disc)];
    }
    if (b.is_zero()) return 1;  // squaring is a bijection in characteristic 2
    // y = b u turns y^2 + b y = c into u^2 + u = c / b^2
    return table_[field_.index_of(c / (b * b))];
  }

 private:
  FqField field_;
  std::vector<std::uint8_t> table_;
};

inline std::uint64_t count_affine_range(const WeierstrassCurve& curve, const FqField& ext, const FieldEmbedding& iota,
                                        const QuadraticSolutionCounter& counter, std::uint64_t begin,
                                        std::uint64_t end) {
  const FqElement a1 = iota(curve.a[0]), a2 = iota(curve.a[1]), a3 = iota(curve.a[2]), a4 = iota(curve.a[3]),
                  a6 = iota(curve.a[4]);
  std::uint64_t total = 0;
  for (std::uint64_t i = begin; i < end; ++i) {
    const FqElement x = ext.element_at(i);
    const FqElement b = a1 * x + a3;
    const FqElement c = ((x + a2) * x + a4) * x + a6;
    total += counter.count(b, c);
  }
  return total;
}

inline BigInt count_weierstrass(const WeierstrassCurve& curve, const FqField& base, unsigned m,
                                const CountOptions& opts) {
  const std::uint64_t rm = std::uint64_t{base.r()} * m;
  if (std::pow(static_cast<double>(base.p()), static_cast<double>(rm)) > static_cast<double>(opts.enumeration_limit)) {
    throw Error(ErrorKind::TooLarge, "q^m = " + std::to_string(base.order()) + "^" + std::to_string(m) +
                                         " exceeds the enumeration limit " + std::to_string(opts.enumeration_limit));
  }
  const FqField ext = m == 1 ? base : FqField::build(base.p(), static_cast<unsigned>(rm));
  const FieldEmbedding iota(base, ext, opts.enumeration_limit);
  const QuadraticSolutionCounter counter(ext);
  const std::uint64_t q = ext.order();
  unsigned workers = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  if (q < 4096) workers = 1;
  std::vector<std::future<std::uint64_t>> parts;
  const std::uint64_t chunk = (q + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = w * chunk, hi = std::min(q, lo + chunk);
    if (lo >= hi) break;
    parts.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async, [&, lo, hi] {
      return count_affine_range(curve, ext, iota, counter, lo, hi);
    }));
  }
  std::uint64_t affine = 0;
  for (auto& part : parts) affine += part.get();
  return BigInt(affine + 1);  // point at infinity
}

}  // namespace detail

/// N_m = |X(F_{q^m})|.
inline BigInt count_points(const VarietySpec& spec, unsigned m, const CountOptions& opts = {}) {
  if (m < 1) throw Error(ErrorKind::BadParameter, "m must be >= 1");
  return std::visit(
      [&](const auto& k) -> BigInt {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ProjectiveSpace>) {
          const BigInt qm = big_power(spec.q(), m);
          BigInt total = 0, term = 1;
          for (unsigned i = 0; i <= k.n; ++i) {
            total += term;
            term *= qm;
          }
          return total;
        } else if constexpr (std::is_same_v<T, WeierstrassCurve>) {
          return detail::count_weierstrass(k, spec.base(), m, opts);
        } else if constexpr (std::is_same_v<T, ProductVariety>) {
          return count_points(*k.left, m, opts) * count_points(*k.right, m, opts);
        } else {
          if (m > k.counts.size()) {
            throw Error(ErrorKind::MissingCount, "custom spec has no N_" + std::to_string(m));
          }
          return k.counts[m - 1];
        }
      },
      spec.kind());
}

struct PointCounts {
  std::uint64_t q = 0;
  std::vector<BigInt> counts;  // N_1..N_M
};

/// Counts needed to pin down Z(X, t) with the functional equation.
inline unsigned required_count_number(const std::vector<unsigned>& betti) {
  unsigned total = 0;
  for (auto b : betti) total += b;
  return std::max(1u, (total + 1) / 2);
}

inline PointCounts point_counts(const VarietySpec& spec, unsigned max_m, const CountOptions& opts = {}) {
  PointCounts out{spec.q(), {}};
  for (unsigned m = 1; m <= max_m; ++m) out.counts.push_back(count_points(spec, m, opts));
  return out;
}

// ---------------------------------------------------------------------------
// Rational zeta function

struct ZetaRational {
  std::uint64_t q = 0;
  unsigned d = 0;
  std::vector<IntPoly> polys;  // P_0..P_{2d}

  std::vector<unsigned> betti() const {
    std::vector<unsigned> b;
    for (const auto& p : polys) b.push_back(static_cast<unsigned>(p.size() - 1));
    return b;
  }

  /// N_m from the P_i by Newton's identities: N_m = sum_i (-1)^i p_m(P_i).
  BigInt count(unsigned m) const {
    BigInt total = 0;
    for (std::size_t i = 0; i < polys.size(); ++i) {
      const BigInt pm = power_sum(polys[i], m);
      total += (i % 2 == 0) ? pm : BigInt(-pm);
    }
    return total;
  }

  Complex evaluate(Complex t) const {
    Complex acc = 1.0;
    for (std::size_t i = 0; i < polys.size(); ++i) {
      const Complex v = poly_eval(polys[i], t);
      acc = (i % 2 == 1) ? acc * v : acc / v;
    }
    return acc;
  }

  /// zeta(X, s) = Z(X, q^{-s}).
  Complex hasse_weil(Complex s) const { return evaluate(std::exp(-s * std::log(static_cast<double>(q)))); }

  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < polys.size(); ++i) os << "P_" << i << "(t) = " << poly_to_string(polys[i]) << '\n';
    return os.str();
  }

  /// Power sum p_m of the reciprocal roots of P: p_m + c_1 p_{m-1} + ... + m c_m = 0.
  static BigInt power_sum(const IntPoly& p, unsigned m) {
    std::vector<BigInt> ps(m + 1, BigInt(0));
    for (unsigned k = 1; k <= m; ++k) {
      BigInt acc = k < p.size() ? BigInt(-BigInt(k) * p[k]) : BigInt(0);
      for (unsigned j = 1; j < k && j < p.size(); ++j) acc -= p[j] * ps[k - j];
      ps[k] = acc;
    }
    return ps[m];
  }
};

namespace detail {

using Rational = BigRational;
using LinearForm = std::vector<Rational>;  // [constant, coeff of u_0, u_1, ...]

// Coefficients of a polynomial of degree deg whose reciprocal roots are closed
// under lambda -> c / lambda: a_{deg-k} = sigma c^{deg/2 - k} a_k.
// Returns nullopt if the shape is impossible (odd degree with c not a square).
inline std::optional<std::vector<LinearForm>> symmetric_coefficients(unsigned deg, const BigInt& c, int sigma,
                                                                      std::size_t first_unknown,
                                                                      std::size_t total_unknowns,
                                                                      std::size_t& used_unknowns) {
  std::optional<BigInt> sqrt_c;
  if (deg % 2 == 1) {
    BigInt s = boost::multiprecision::sqrt(c);
    if (s * s != c) return std::nullopt;
    sqrt_c = s;
  }
  std::vector<LinearForm> a(deg + 1, LinearForm(total_unknowns + 1, Rational(0)));
  a[0][0] = 1;
  used_unknowns = 0;
  for (unsigned k = 1; 2 * k < deg; ++k) a[k][1 + first_unknown + used_unknowns++] = 1;
  if (deg % 2 == 0 && deg > 0 && sigma == 1) a[deg / 2][1 + first_unknown + used_unknowns++] = 1;
  for (unsigned j = deg / 2 + 1; j <= deg; ++j) {
    if (2 * j == deg) continue;
    // a_j = sigma c^{j - deg/2} a_{deg - j}
    const unsigned twice = 2 * j - deg;
    BigInt factor = 1;
    for (unsigned t = 0; t < twice / 2; ++t) factor *= c;
    if (twice % 2 == 1) factor *= *sqrt_c;
    for (std::size_t v = 0; v < a[j].size(); ++v) a[j][v] = Rational(sigma) * Rational(factor) * a[deg - j][v];
  }
  return a;
}

struct LinearSolution {
  bool consistent = false;
  bool determined = false;
  std::vector<Rational> values;
};

// Gaussian elimination on rows sum_v row[1+v] u_v + row[0] = 0.
inline LinearSolution solve_linear(std::vector<LinearForm> rows, std::size_t unknowns) {
  LinearSolution sol;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t col = 0; col < unknowns && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][1 + col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const Rational inv = Rational(1) / rows[rank][1 + col];
    for (auto& x : rows[rank]) x *= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][1 + col] == 0) continue;
      const Rational f = rows[r][1 + col];
      for (std::size_t v = 0; v < rows[r].size(); ++v) rows[r][v] -= f * rows[rank][v];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r) {
    if (rows[r][0] != 0) return sol;  // 0 = nonzero
  }
  sol.consistent = true;
  sol.determined = rank == unknowns;
  if (!sol.determined) return sol;
  sol.values.assign(unknowns, Rational(0));
  for (std::size_t r = 0; r < rank; ++r) sol.values[pivot_col[r]] = -rows[r][0];
  return sol;
}

inline std::optional<IntPoly> integral_polynomial(const std::vector<LinearForm>& forms,
                                                  const std::vector<Rational>& values) {
  IntPoly out;
  for (const auto& f : forms) {
    Rational v = f[0];
    for (std::size_t u = 0; u < values.size(); ++u) v += f[1 + u] * values[u];
    if (boost::multiprecision::denominator(v) != 1) return std::nullopt;
    out.push_back(boost::multiprecision::numerator(v));
  }
  return out;
}

// Splits a product of Weil polynomials by the modulus of the reciprocal roots:
// a root with |lambda| = q^{i/2} belongs to P_i.
inline std::optional<std::vector<IntPoly>> split_by_weight(const IntPoly& product, std::uint64_t q,
                                                           const std::vector<unsigned>& betti, int parity) {
  std::vector<IntPoly> factors(betti.size(), IntPoly{BigInt(1)});
  std::vector<Complex> roots;
  try {
    roots = reciprocal_roots(product);
  } catch (const Error&) {
    return std::nullopt;
  }
  const double log_q = std::log(static_cast<double>(q));
  std::vector<std::vector<Complex>> groups(betti.size());
  for (const auto& lambda : roots) {
    const double twice_weight = 2.0 * std::log(std::abs(lambda)) / log_q;
    const long i = std::lround(twice_weight);
    if (i < 0 || static_cast<std::size_t>(i) >= betti.size() || (i % 2) != parity) return std::nullopt;
    if (std::abs(twice_weight - static_cast<double>(i)) > 1e-6) return std::nullopt;
    groups[static_cast<std::size_t>(i)].push_back(lambda);
  }
  IntPoly check{BigInt(1)};
  for (std::size_t i = 0; i < betti.size(); ++i) {
    if (static_cast<int>(i % 2) != parity) continue;
    if (groups[i].size() != betti[i]) return std::nullopt;
    std::vector<Complex> coeffs{1.0};
    for (const auto& lambda : groups[i]) {
      std::vector<Complex> next(coeffs.size() + 1, 0.0);
      for (std::size_t k = 0; k < coeffs.size(); ++k) {
        next[k] += coeffs[k];
        next[k + 1] -= lambda * coeffs[k];
      }
      coeffs = std::move(next);
    }
    IntPoly p;
    for (const auto& c : coeffs) {
      const double rounded = std::round(c.real());
      if (std::abs(c.real() - rounded) > 1e-6 * std::max(1.0, std::abs(rounded)) ||
          std::abs(c.imag()) > 1e-6 * std::max(1.0, std::abs(rounded))) {
        return std::nullopt;
      }
      p.emplace_back(static_cast<long long>(rounded));
    }
    factors[i] = p;
    check = poly_mul(check, p);
  }
  IntPoly target = product;
  hasse_forge::trim(target);
  hasse_forge::trim(check);
  if (check != target) return std::nullopt;
  return factors;
}

}  // namespace detail

/// Rebuilds Z(X, t) from N_1..N_M and the Betti numbers. Unknown coefficients
/// of the numerator (odd degrees) and of the denominator with (1 - t)(1 - q^d t)
/// removed are constrained by Poincare duality, solved exactly over Q from
/// Z(t) D(t) = N(t) mod t^{M+1}, then split into the P_i by root modulus.
inline ZetaRational zeta_from_counts(const PointCounts& counts, const std::vector<unsigned>& betti) {
  using detail::LinearForm;
  using detail::Rational;
  if (betti.empty() || betti.size() % 2 == 0) throw Error(ErrorKind::BettiMismatch, "Betti list needs odd length");
  if (betti.front() != 1 || betti.back() != 1) throw Error(ErrorKind::BettiMismatch, "b_0 and b_2d must be 1");
  if (counts.q < 2) throw Error(ErrorKind::BadParameter, "q must be >= 2");
  const unsigned d = static_cast<unsigned>(betti.size() - 1) / 2;
  const std::size_t M = counts.counts.size();
  unsigned odd_total = 0, even_total = 0;
  for (std::size_t i = 0; i < betti.size(); ++i) (i % 2 ? odd_total : even_total) += betti[i];
  if (M < required_count_number(betti)) {
    throw Error(ErrorKind::InsufficientCounts, "need at least " + std::to_string(required_count_number(betti)) +
                                                   " counts, got " + std::to_string(M));
  }
  const BigInt c = big_power(counts.q, d);

  // Z(t) mod t^{M+1}: m Z_m = sum_{k=1}^{m} N_k Z_{m-k}.
  std::vector<Rational> z(M + 1, Rational(0));
  z[0] = 1;
  for (std::size_t m = 1; m <= M; ++m) {
    Rational acc = 0;
    for (std::size_t k = 1; k <= m; ++k) acc += Rational(counts.counts[k - 1]) * z[m - k];
    z[m] = acc / Rational(static_cast<long long>(m));
  }
  // E(t) = Z(t) * known denominator factors
  IntPoly known{BigInt(1), BigInt(-1)};
  if (d > 0) known = poly_mul(known, IntPoly{BigInt(1), BigInt(-c)});
  std::vector<Rational> e(M + 1, Rational(0));
  for (std::size_t k = 0; k <= M; ++k)
    for (std::size_t j = 0; j < known.size() && j <= k; ++j) e[k] += z[k - j] * Rational(known[j]);
  const unsigned rest_deg = even_total - static_cast<unsigned>(known.size() - 1);

  struct Candidate {
    IntPoly numerator, denominator;
    std::vector<IntPoly> polys;
  };
  std::vector<Candidate> accepted;
  bool any_underdetermined = false, any_nonintegral = false, any_rejected_split = false;

  const std::vector<int> signs_n = odd_total ? std::vector<int>{1, -1} : std::vector<int>{1};
  const std::vector<int> signs_d = rest_deg ? std::vector<int>{1, -1} : std::vector<int>{1};
  for (int sn : signs_n) {
    for (int sd : signs_d) {
      // Count unknowns first, then build the forms with the final width.
      std::size_t un = 0, ud = 0;
      auto probe_n = detail::symmetric_coefficients(odd_total, c, sn, 0, odd_total + rest_deg, un);
      auto probe_d = detail::symmetric_coefficients(rest_deg, c, sd, 0, odd_total + rest_deg, ud);
      if (!probe_n || !probe_d) continue;
      const std::size_t unknowns = un + ud;
      std::size_t tmp = 0;
      auto num = *detail::symmetric_coefficients(odd_total, c, sn, 0, unknowns, tmp);
      auto den = *detail::symmetric_coefficients(rest_deg, c, sd, un, unknowns, tmp);
      std::vector<LinearForm> rows;
      for (std::size_t k = 1; k <= M; ++k) {
        LinearForm row(unknowns + 1, Rational(0));
        for (std::size_t j = 0; j <= k && j < den.size(); ++j)
          for (std::size_t v = 0; v <= unknowns; ++v) row[v] += e[k - j] * den[j][v];
        if (k < num.size())
          for (std::size_t v = 0; v <= unknowns; ++v) row[v] -= num[k][v];
        rows.push_back(std::move(row));
      }
      const auto sol = detail::solve_linear(rows, unknowns);
      if (!sol.consistent) continue;
      if (!sol.determined) {
        any_underdetermined = true;
        continue;
      }
      auto n_poly = detail::integral_polynomial(num, sol.values);
      auto d_rest = detail::integral_polynomial(den, sol.values);
      if (!n_poly || !d_rest) {
        any_nonintegral = true;
        continue;
      }
      const IntPoly d_poly = poly_mul(known, *d_rest);
      auto odd_parts = detail::split_by_weight(*n_poly, counts.q, betti, 1);
      auto even_parts = detail::split_by_weight(d_poly, counts.q, betti, 0);
      if (!odd_parts || !even_parts) {
        any_rejected_split = true;
        continue;
      }
      Candidate cand{*n_poly, d_poly, {}};
      for (std::size_t i = 0; i < betti.size(); ++i) cand.polys.push_back(i % 2 ? (*odd_parts)[i] : (*even_parts)[i]);
      const bool duplicate = std::any_of(accepted.begin(), accepted.end(), [&](const Candidate& a) {
        return a.polys == cand.polys;
      });
      if (!duplicate) accepted.push_back(std::move(cand));
    }
  }

  if (accepted.size() > 1) {
    throw Error(ErrorKind::InsufficientCounts, "counts admit several zeta functions; supply more counts");
  }
  if (accepted.empty()) {
    if (any_underdetermined) throw Error(ErrorKind::InsufficientCounts, "not enough counts to fix Z(X, t)");
    if (any_nonintegral) throw Error(ErrorKind::NonIntegerCoefficients, "solution has non-integer coefficients");
    if (any_rejected_split) {
      throw Error(ErrorKind::BettiMismatch, "solution does not split into Weil polynomials of the given degrees");
    }
    throw Error(ErrorKind::SurplusCountMismatch, "counts are inconsistent with any rational zeta of this shape");
  }
  ZetaRational out{counts.q, d, std::move(accepted.front().polys)};
  for (std::size_t m = 1; m <= M; ++m) {
    if (out.count(static_cast<unsigned>(m)) != counts.counts[m - 1]) {
      throw Error(ErrorKind::SurplusCountMismatch, "reconstruction does not reproduce N_" + std::to_string(m));
    }
  }
  return out;
}

/// Counts as many points as the zeta reconstruction needs plus `surplus`
/// cross-check counts (dropped when they would exceed the enumeration guard).
inline ZetaRational zeta_of(const VarietySpec& spec, unsigned surplus = 1, const CountOptions& opts = {}) {
  const auto betti = spec.betti();
  const unsigned needed = required_count_number(betti);
  if (const auto* custom = std::get_if<CustomVariety>(&spec.kind())) {
    return zeta_from_counts(PointCounts{spec.q(), custom->counts}, betti);
  }
  PointCounts counts = point_counts(spec, needed, opts);
  for (unsigned extra = 1; extra <= surplus; ++extra) {
    try {
      counts.counts.push_back(count_points(spec, needed + extra, opts));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TooLarge) throw;
      break;
    }
  }
  return zeta_from_counts(counts, betti);
}

// ---------------------------------------------------------------------------
// Consistency reports

struct FunctionalEquationReport {
  bool ok = true;
  double max_deviation = 0.0;
  std::vector<std::string> violations;
};

namespace detail {

inline bool lex_less(Complex x, Complex y) {
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

// Greedy nearest matching of two multisets; returns the largest relative gap.
inline double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::vector<bool> used(b.size(), false);
  std::sort(a.begin(), a.end(), lex_less);
  for (const auto& x : a) {
    std::size_t best = b.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(x - b[j]) / std::max(1.0, std::abs(x));
      if (dist < best_d) {
        best_d = dist;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

}  // namespace detail

/// Poincare duality: {lambda in degree i} = {q^d / mu : mu in degree 2d - i}.
inline FunctionalEquationReport functional_equation_check(const ZetaRational& zeta, double tolerance = 1e-9) {
  FunctionalEquationReport report;
  const double qd = std::pow(static_cast<double>(zeta.q), static_cast<double>(zeta.d));
  std::vector<std::vector<Complex>> roots;
  for (const auto& p : zeta.polys) roots.push_back(reciprocal_roots(p));
  for (std::size_t i = 0; i < roots.size(); ++i) {
    std::vector<Complex> dual;
    for (const auto& mu : roots[roots.size() - 1 - i]) dual.push_back(qd / mu);
    const double dev = detail::multiset_distance(roots[i], dual);
    report.max_deviation = std::max(report.max_deviation, dev);
    if (!(dev <= tolerance)) {
      report.ok = false;
      report.violations.push_back("degree " + std::to_string(i) + " vs " + std::to_string(roots.size() - 1 - i) +
                                  ": deviation " + std::to_string(dev));
    }
  }
  return report;
}

struct WeilBoundReport {
  bool ok = true;
  double max_relative_deviation = 0.0;
};

/// ||lambda| - q^{i/2}| <= tolerance * q^{i/2} for every reciprocal root of P_i.
inline WeilBoundReport weil_bound_check(const ZetaRational& zeta, double tolerance = 1e-9) {
  WeilBoundReport report;
  for (std::size_t i = 0; i < zeta.polys.size(); ++i) {
    const double expected = std::pow(static_cast<double>(zeta.q), static_cast<double>(i) / 2.0);
    for (const auto& lambda : reciprocal_roots(zeta.polys[i])) {
      const double dev = std::abs(std::abs(lambda) - expected) / expected;
      report.max_relative_deviation = std::max(report.max_relative_deviation, dev);
      if (!(dev <= tolerance)) report.ok = false;
    }
  }
  return report;
}

}  // namespace hasse_forge
