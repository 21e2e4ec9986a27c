#pragma once

// JSON variety specs:
//   {"kind": "projective_space", "n": 2, "base": {"p": 2, "r": 1}}
//   {"kind": "weierstrass", "base": {"p": 5, "r": 1}, "a": [0, 0, 0, 1, 1]}
//   {"kind": "product", "factors": [spec, spec, ...]}
//   {"kind": "custom", "base": {...}, "counts": [...], "betti": [1, 2, 1]}
// A base field may pin its modulus, leading coefficient first:
//   {"p": 5, "r": 2, "modulus": [1, 0, 2]}
// Curve coefficients in F_{p^r}, r > 1, are coefficient lists in the same order.

#include <istream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hasse_forge/error.hpp"
#include "hasse_forge/finite_field.hpp"
#include "hasse_forge/varieties.hpp"

namespace hasse_forge {

namespace detail {

[[noreturn]] inline void spec_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::SpecParse, where + ": " + what);
}

inline const nlohmann::json& require(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) spec_error(where, std::string("missing \"") + key + "\"");
  return j.at(key);
}

inline std::int64_t as_int(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number_integer()) spec_error(where, "expected an integer");
  return j.get<std::int64_t>();
}

inline unsigned as_unsigned(const nlohmann::json& j, const std::string& where) {
  const auto v = as_int(j, where);
  if (v < 0 || v > 0xffff) spec_error(where, "expected a small non-negative integer");
  return static_cast<unsigned>(v);
}

inline BigInt as_bigint(const nlohmann::json& j, const std::string& where) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) spec_error(where, "bad integer string");
    return BigInt(s);
  }
  spec_error(where, "expected an integer or a decimal string");
}

inline FqField parse_field(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) spec_error(where, "field must be an object");
  const auto p = as_int(require(j, "p", where), where + ".p");
  const auto r = j.contains("r") ? as_unsigned(j.at("r"), where + ".r") : 1u;
  if (p < 2) spec_error(where + ".p", "must be at least 2");
  std::optional<std::vector<std::int64_t>> modulus;
  if (j.contains("modulus")) {
    const auto& m = j.at("modulus");
    if (!m.is_array()) spec_error(where + ".modulus", "expected a list");
    modulus.emplace();
    for (const auto& c : m) modulus->push_back(as_int(c, where + ".modulus"));
  }
  return FqField::build(static_cast<std::uint64_t>(p), r, modulus);
}

inline FqElement parse_element(const FqField& f, const nlohmann::json& j, const std::string& where) {
  if (j.is_number_integer()) return f.from_integer(j.get<std::int64_t>());
  if (j.is_array()) {
    std::vector<std::int64_t> leading_first;
    for (const auto& c : j) leading_first.push_back(as_int(c, where));
    if (leading_first.size() > f.r()) spec_error(where, "more coefficients than the field degree");
    std::vector<std::int64_t> low_first(leading_first.rbegin(), leading_first.rend());
    return f.element(low_first);
  }
  spec_error(where, "expected an integer or a coefficient list");
}

inline VarietySpec parse_spec(const nlohmann::json& j, const std::string& where) {
  const auto& kind_j = require(j, "kind", where);
  if (!kind_j.is_string()) spec_error(where + ".kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();
  if (kind == "projective_space") {
    return VarietySpec::projective_space(parse_field(require(j, "base", where), where + ".base"),
                                         as_unsigned(require(j, "n", where), where + ".n"));
  }
  if (kind == "weierstrass") {
    const auto base = parse_field(require(j, "base", where), where + ".base");
    const auto& a = require(j, "a", where);
    if (!a.is_array() || a.size() != 5) spec_error(where + ".a", "expected [a1, a2, a3, a4, a6]");
    std::vector<FqElement> coeffs;
    for (std::size_t i = 0; i < 5; ++i) coeffs.push_back(parse_element(base, a[i], where + ".a"));
    return VarietySpec::weierstrass(base, std::move(coeffs));
  }
  if (kind == "product") {
    const auto& factors = require(j, "factors", where);
    if (!factors.is_array() || factors.size() < 2) spec_error(where + ".factors", "expected at least two specs");
    VarietySpec acc = parse_spec(factors[0], where + ".factors[0]");
    for (std::size_t i = 1; i < factors.size(); ++i) {
      acc = VarietySpec::product(acc, parse_spec(factors[i], where + ".factors[" + std::to_string(i) + "]"));
    }
    return acc;
  }
  if (kind == "custom") {
    const auto base = parse_field(require(j, "base", where), where + ".base");
    const auto& counts_j = require(j, "counts", where);
    const auto& betti_j = require(j, "betti", where);
    if (!counts_j.is_array() || !betti_j.is_array()) spec_error(where, "counts and betti must be lists");
    std::vector<BigInt> counts;
    for (const auto& c : counts_j) counts.push_back(as_bigint(c, where + ".counts"));
    std::vector<unsigned> betti;
    for (const auto& b : betti_j) betti.push_back(as_unsigned(b, where + ".betti"));
    return VarietySpec::custom(base, std::move(counts), std::move(betti));
  }
  spec_error(where + ".kind", "unknown kind \"" + kind + "\"");
}

}  // namespace detail

inline VarietySpec parse_variety_spec(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::SpecParse, std::string("invalid JSON: ") + e.what());
  }
  return detail::parse_spec(j, "spec");
}

inline VarietySpec read_variety_spec(std::istream& is) {
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return parse_variety_spec(text);
}

}  // namespace hasse_forge
