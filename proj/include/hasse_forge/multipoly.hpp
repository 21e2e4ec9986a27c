#pragma once

// Sparse multivariate polynomials with arbitrary-precision integer coefficients.

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hasse_forge/error.hpp"

namespace hasse_forge {

using BigInt = boost::multiprecision::cpp_int;

class MultiPoly {
 public:
  using Exponents = std::vector<std::uint32_t>;
  using Terms = std::map<Exponents, BigInt>;

  MultiPoly() = default;
  explicit MultiPoly(std::size_t nvars) : nvars_(nvars) {}

  static MultiPoly constant(std::size_t nvars, const BigInt& c) {
    MultiPoly out(nvars);
    if (c != 0) out.terms_[Exponents(nvars, 0)] = c;
    return out;
  }
  static MultiPoly variable(std::size_t nvars, std::size_t index, std::uint32_t power = 1) {
    MultiPoly out(nvars);
    Exponents e(nvars, 0);
    e[index] = power;
    out.terms_[e] = 1;
    return out;
  }

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  MultiPoly& operator+=(const MultiPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly out(a.nvars_);
    Exponents e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    }
    return out;
  }

  MultiPoly scaled(const BigInt& k) const {
    MultiPoly out(nvars_);
    if (k == 0) return out;
    out.terms_ = terms_;
    for (auto& [e, c] : out.terms_) c *= k;
    return out;
  }

  /// Exact division; throws NonIntegerCoefficients when some coefficient is
  /// not divisible by d.
  MultiPoly divided_exactly(const BigInt& d) const {
    MultiPoly out = *this;
    for (auto& [e, c] : out.terms_) {
      if (c % d != 0) throw Error(ErrorKind::NonIntegerCoefficients, "coefficient not divisible by " + d.str());
      c /= d;
    }
    return out;
  }

  MultiPoly pow(std::uint64_t k) const {
    MultiPoly result = constant(nvars_, 1);
    MultiPoly base = *this;
    while (k) {
      if (k & 1) result = result * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return result;
  }

  bool operator==(const MultiPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

  /// Renders with variable names supplied by the caller, e.g. {"X0","X1","Y0","Y1"}.
  std::string to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      BigInt mag = c < 0 ? BigInt(-c) : c;
      if (first) {
        if (c < 0) os << '-';
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      bool has_var = false;
      for (auto x : e) has_var |= x != 0;
      if (mag != 1 || !has_var) os << mag.str();
      bool need_dot = mag != 1;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e[i]) continue;
        if (need_dot) os << '*';
        os << names.at(i);
        if (e[i] > 1) os << '^' << e[i];
        need_dot = true;
      }
    }
    return os.str();
  }

 private:
  void add_term(const Exponents& e, const BigInt& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::size_t nvars_ = 0;
  Terms terms_;
};

}  // namespace hasse_forge
