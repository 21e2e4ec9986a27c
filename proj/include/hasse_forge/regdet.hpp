#pragma once

// Zeta-regularized determinants det_inf(s - Theta) over the progressions of
// the two-class model, and the comparison with zeta(X, s).
//
// For the progression x_k = delta (s - alpha - k step), k in Z, put
// B = -delta step and a = delta (s - alpha) / B, so x_k = B (k + a) for
// k >= 0 and x_{-k} = -B ((k - 1) + (1 - a)) for k >= 1. Then
//   log det = log(B) zeta_H(0, a) - zeta_H'(0, a)
//           + log(-B) zeta_H(0, 1 - a) - zeta_H'(0, 1 - a),
// which works out to 1 - q^{alpha - s} = 1 - lambda q^{-s}.

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hasse_forge/error.hpp"
#include "hasse_forge/special_functions.hpp"
#include "hasse_forge/spectrum.hpp"
#include "hasse_forge/varieties.hpp"

namespace hasse_forge {

struct RegDetResult {
  Complex value;            // det_inf; exactly 0 when some s - alpha_k vanishes
  Complex log_value;        // -zeta'(0) over the non-zero eigenvalues
  Complex zeta_at_0;        // zeta(0) over the non-zero eigenvalues
  Complex zeta_prime_at_0;  // zeta'(0) over the non-zero eigenvalues
  Complex anomalous_dim;    // dim V_0 + zeta(0)
  bool vanishing = false;
  unsigned zero_order = 0;  // dim V_0
};

/// |s - alpha_k| below this counts as a zero eigenvalue.
inline constexpr double kVanishingTolerance = 1e-10;

namespace detail {

struct ProgressionSplit {
  Complex b;  // ray direction for k >= 0
  Complex a;  // Hurwitz parameter
  bool vanishing;
};

inline ProgressionSplit split_progression(const EigenProgression& prog, Complex s, Complex delta,
                                          double vanishing_tolerance) {
  if (delta == Complex(0.0)) throw Error(ErrorKind::BadParameter, "scale delta must be non-zero");
  const Complex b = -delta * prog.step;
  // One of the rays b, -b would lie on the cut of the principal logarithm.
  if (std::abs(b.imag()) <= 1e-14 * std::abs(b)) {
    throw Error(ErrorKind::BranchBoundary, "progression direction lies on the branch cut");
  }
  const Complex a = delta * (s - prog.alpha) / b;
  // distance from s to the nearest alpha_k, in the unscaled variable
  const double gap = std::abs(a - std::round(a.real())) * std::abs(prog.step);
  return {b, a, gap <= vanishing_tolerance};
}

}  // namespace detail

/// det_inf of delta (s - Theta) on one progression (multiplicity ignored).
inline RegDetResult regdet_progression(const EigenProgression& prog, Complex s, Complex delta = 1.0,
                                       double vanishing_tolerance = kVanishingTolerance) {
  const auto split = detail::split_progression(prog, s, delta, vanishing_tolerance);
  RegDetResult r;
  if (split.vanishing) {
    // Remaining eigenvalues are b j and -b j, j >= 1: two copies of Riemann zeta.
    const Complex z0 = hurwitz_zeta(0.0, 1.0);
    const Complex d0 = hurwitz_zeta_deriv0(1.0);
    r.vanishing = true;
    r.zero_order = 1;
    r.value = 0.0;
    r.zeta_at_0 = 2.0 * z0;
    r.zeta_prime_at_0 = -(principal_log(split.b) + principal_log(-split.b)) * z0 + 2.0 * d0;
    r.log_value = -r.zeta_prime_at_0;
    r.anomalous_dim = 1.0 + r.zeta_at_0;
    return r;
  }
  const Complex a = split.a;
  const Complex z_pos = hurwitz_zeta(0.0, a);
  const Complex z_neg = hurwitz_zeta(0.0, 1.0 - a);
  r.zeta_at_0 = z_pos + z_neg;
  r.zeta_prime_at_0 = -principal_log(split.b) * z_pos + hurwitz_zeta_deriv0(a) - principal_log(-split.b) * z_neg +
                      hurwitz_zeta_deriv0(1.0 - a);
  r.log_value = -r.zeta_prime_at_0;
  r.anomalous_dim = r.zeta_at_0;
  r.value = std::exp(r.log_value);
  return r;
}

/// dim_inf summed over a parity class.
inline Complex dim_infty(const TPModel& model, Parity parity, Complex s, Complex delta = 1.0) {
  Complex total = 0.0;
  for (const auto& prog : model.parity_class(parity)) {
    total += static_cast<double>(prog.multiplicity) * regdet_progression(prog, s, delta).anomalous_dim;
  }
  return total;
}

struct ParityDet {
  Complex value;         // regularized determinant (0 if vanishing)
  Complex finite_part;   // product over the non-zero eigenvalues
  Complex finite_det;    // det(id - q^{-s} Fr | class), computed directly
  unsigned zero_order = 0;
  Complex dim;
};

/// Product of regdet_progression over the class (determinants are
/// multiplicative), next to the finite determinant prod (1 - lambda q^{-s}).
inline ParityDet regdet_parity_class(const TPModel& model, Parity parity, Complex s, Complex delta = 1.0) {
  ParityDet out{1.0, 1.0, 1.0, 0, 0.0};
  Complex log_finite = 0.0;
  const Complex q_neg_s = std::exp(-s * std::log(static_cast<double>(model.q)));
  for (const auto& prog : model.parity_class(parity)) {
    const auto r = regdet_progression(prog, s, delta);
    const double mult = static_cast<double>(prog.multiplicity);
    out.finite_det *= std::pow(1.0 - prog.lambda * q_neg_s, mult);
    out.dim += mult * r.anomalous_dim;
    if (r.vanishing) {
      out.zero_order += prog.multiplicity;
      continue;
    }
    log_finite += mult * r.log_value;
  }
  out.finite_part = std::exp(log_finite);
  out.value = out.zero_order ? Complex(0.0) : out.finite_part;
  return out;
}

/// det_inf(delta (s - Theta)) / det_inf(s - Theta) per parity class; both should be 1.
struct ScalingReport {
  Complex even_ratio;
  Complex odd_ratio;
  double max_deviation = 0.0;
};

inline ScalingReport scaling_check(const TPModel& model, Complex s, Complex delta) {
  ScalingReport r;
  const auto ratio = [&](Parity p) {
    const auto scaled = regdet_parity_class(model, p, s, delta);
    const auto plain = regdet_parity_class(model, p, s, 1.0);
    if (scaled.zero_order != plain.zero_order) return Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    return scaled.finite_part / plain.finite_part;
  };
  r.even_ratio = ratio(Parity::Even);
  r.odd_ratio = ratio(Parity::Odd);
  r.max_deviation = std::max(std::abs(r.even_ratio - 1.0), std::abs(r.odd_ratio - 1.0));
  if (std::isnan(r.max_deviation)) r.max_deviation = std::numeric_limits<double>::infinity();
  return r;
}

// ---------------------------------------------------------------------------
// Comparison with zeta(X, s)

struct VerifyRow {
  Complex s;
  Complex lhs;  // zeta(X, s) from the rational zeta function
  Complex rhs;  // det_inf(s - Theta | TP_od) / det_inf(s - Theta | TP_ev)
  double relerr = 0.0;
  std::string status;  // ok, zero, pole, fail
  double finite_crosscheck = 0.0;  // max over classes |det_inf - det(id - q^{-s} Fr)| / |det(...)|
};

struct VerifyOptions {
  double tolerance = 1e-8;
  Complex delta = 1.0;
};

inline VerifyRow verify_at(const ZetaRational& zeta, const TPModel& model, Complex s, const VerifyOptions& opts = {}) {
  VerifyRow row;
  row.s = s;
  const auto od = regdet_parity_class(model, Parity::Odd, s, opts.delta);
  const auto ev = regdet_parity_class(model, Parity::Even, s, opts.delta);
  const Complex t = std::exp(-s * std::log(static_cast<double>(zeta.q)));
  Complex num = 1.0, den = 1.0;
  for (std::size_t i = 0; i < zeta.polys.size(); ++i) (i % 2 ? num : den) *= poly_eval(zeta.polys[i], t);
  for (const auto* d : {&od, &ev}) {
    if (d->zero_order == 0) {
      row.finite_crosscheck = std::max(row.finite_crosscheck, std::abs(d->value - d->finite_det) / std::abs(d->finite_det));
    }
  }
  const double small = 1e-8;
  const bool lhs_pole = std::abs(den) <= small;
  const bool lhs_zero = !lhs_pole && std::abs(num) <= small;
  const int rhs_order = static_cast<int>(od.zero_order) - static_cast<int>(ev.zero_order);
  if (ev.zero_order > 0 || od.zero_order > 0) {
    row.rhs = rhs_order > 0   ? Complex(0.0)
              : rhs_order < 0 ? Complex(std::numeric_limits<double>::infinity(), 0.0)
                              : od.finite_part / ev.finite_part;
    row.lhs = lhs_pole ? Complex(std::numeric_limits<double>::infinity(), 0.0) : num / den;
    const bool matched = (rhs_order > 0 && lhs_zero) || (rhs_order < 0 && lhs_pole);
    row.relerr = matched ? 0.0 : std::numeric_limits<double>::infinity();
    row.status = matched ? (rhs_order > 0 ? "zero" : "pole") : "fail";
    if (rhs_order == 0) row.status = "fail";  // cancelling zero and pole are not resolved here
    return row;
  }
  row.lhs = num / den;
  row.rhs = od.value / ev.value;
  if (lhs_pole || lhs_zero) {
    row.relerr = std::numeric_limits<double>::infinity();
    row.status = "fail";
    return row;
  }
  row.relerr = std::abs(row.lhs - row.rhs) / std::abs(row.lhs);
  row.status = row.relerr <= opts.tolerance ? "ok" : "fail";
  return row;
}

inline std::vector<VerifyRow> verify_theorem_a(const ZetaRational& zeta, const std::vector<Complex>& samples,
                                               const VerifyOptions& opts = {}) {
  const auto model = build_tp_model(spectrum_from_zeta(zeta));
  std::vector<VerifyRow> rows;
  for (const auto& s : samples) rows.push_back(verify_at(zeta, model, s, opts));
  return rows;
}

/// Counts points as needed, reconstructs zeta and compares at each sample.
inline std::vector<VerifyRow> verify_theorem_a(const VarietySpec& spec, const std::vector<Complex>& samples,
                                               const VerifyOptions& opts = {}) {
  return verify_theorem_a(zeta_of(spec), samples, opts);
}

inline bool all_passed(const std::vector<VerifyRow>& rows) {
  for (const auto& r : rows) {
    if (r.status == "fail") return false;
  }
  return true;
}

/// Throws IdentityViolated on the first failing row.
inline void require_theorem_a(const std::vector<VerifyRow>& rows) {
  for (const auto& r : rows) {
    if (r.status != "fail") continue;
    std::ostringstream os;
    os << "identity violated at s = " << r.s << ": lhs " << r.lhs << ", rhs " << r.rhs << ", relerr " << r.relerr;
    throw Error(ErrorKind::IdentityViolated, os.str());
  }
}

/// Shortest decimal that reads back to the same double; locale independent.
inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string format_complex(Complex z) {
  std::string out = format_double(z.real());
  if (z.imag() != 0.0) out += (z.imag() < 0 ? "-" : "+") + format_double(std::abs(z.imag())) + "i";
  return out;
}

inline void write_verify_csv(std::ostream& out, const std::vector<VerifyRow>& rows) {
  std::string text = "s,lhs_re,lhs_im,rhs_re,rhs_im,relerr,status\n";
  for (const auto& r : rows) {
    text += format_complex(r.s) + ',' + format_double(r.lhs.real()) + ',' + format_double(r.lhs.imag()) + ',' +
            format_double(r.rhs.real()) + ',' + format_double(r.rhs.imag()) + ',' + format_double(r.relerr) + ',' +
            r.status + '\n';
  }
  out << text;
}

}  // namespace hasse_forge
