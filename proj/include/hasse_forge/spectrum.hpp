#pragma once

// Frobenius spectra on H^i, the operator Theta with q^Theta = Frobenius, and
// the two-class model TP_ev / TP_od on which Theta acts by arithmetic
// progressions alpha + k (2 pi i / log q).

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <locale>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "hasse_forge/error.hpp"
#include "hasse_forge/special_functions.hpp"
#include "hasse_forge/varieties.hpp"

namespace hasse_forge {

using CMatrix = Eigen::MatrixXcd;

struct SpectrumEntry {
  Complex lambda;
  unsigned multiplicity = 1;  // algebraic
  unsigned jordan = 1;        // size of each Jordan block
};

struct FrobeniusSpectrum {
  std::uint64_t q = 0;
  std::vector<std::vector<SpectrumEntry>> degrees;  // H^0 .. H^{2d}

  unsigned dimension() const { return static_cast<unsigned>(degrees.size() - 1) / 2; }

  std::vector<unsigned> betti() const {
    std::vector<unsigned> b;
    for (const auto& deg : degrees) {
      unsigned n = 0;
      for (const auto& e : deg) n += e.multiplicity;
      b.push_back(n);
    }
    return b;
  }

  /// Frobenius on H^i as a block-diagonal Jordan matrix.
  CMatrix frobenius_matrix(std::size_t i) const {
    const auto n = static_cast<Eigen::Index>(betti()[i]);
    CMatrix m = CMatrix::Zero(n, n);
    Eigen::Index at = 0;
    for (const auto& e : degrees[i]) {
      if (e.jordan == 0 || e.multiplicity % e.jordan != 0) {
        throw Error(ErrorKind::ShapeMismatch, "Jordan block size must divide the multiplicity");
      }
      for (unsigned b = 0; b < e.multiplicity / e.jordan; ++b) {
        for (unsigned k = 0; k < e.jordan; ++k) {
          m(at + k, at + k) = e.lambda;
          if (k + 1 < e.jordan) m(at + k, at + k + 1) = 1.0;
        }
        at += e.jordan;
      }
    }
    return m;
  }
};

/// Reciprocal roots of each P_i, grouped by exact multiplicity.
/// Frobenius is taken to be semisimple, so every Jordan block has size 1.
inline FrobeniusSpectrum spectrum_from_zeta(const ZetaRational& zeta) {
  FrobeniusSpectrum spec{zeta.q, {}};
  for (const auto& p : zeta.polys) {
    std::vector<SpectrumEntry> entries;
    for (const auto& [factor, mult] : squarefree_factorization(p)) {
      std::vector<double> reversed(factor.size());
      for (std::size_t k = 0; k < factor.size(); ++k) reversed[factor.size() - 1 - k] = factor[k].convert_to<double>();
      for (const auto& r : polynomial_roots(reversed)) entries.push_back({r, mult, 1});
    }
    std::sort(entries.begin(), entries.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
      if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
      return a.lambda.imag() < b.lambda.imag();
    });
    spec.degrees.push_back(std::move(entries));
  }
  return spec;
}

/// Inverse of spectrum_from_zeta: P_i = prod (1 - lambda t)^mult, rounded to
/// integers. Lets an imported spectrum stand in for point counts.
inline ZetaRational zeta_from_spectrum(const FrobeniusSpectrum& spec) {
  ZetaRational zeta;
  zeta.q = spec.q;
  for (std::size_t i = 0; i < spec.degrees.size(); ++i) {
    std::vector<Complex> c{1.0};
    for (const auto& e : spec.degrees[i]) {
      for (unsigned k = 0; k < e.multiplicity; ++k) {
        c.push_back(0.0);
        for (std::size_t j = c.size() - 1; j > 0; --j) c[j] -= e.lambda * c[j - 1];
      }
    }
    IntPoly poly;
    for (const auto& x : c) {
      const double rounded = std::round(x.real());
      if (std::abs(x - rounded) > 1e-6 * std::max(1.0, std::abs(x))) {
        throw Error(ErrorKind::NonIntegerCoefficients,
                    "spectrum in degree " + std::to_string(i) + " does not give an integer polynomial");
      }
      poly.push_back(BigInt(static_cast<long long>(rounded)));
    }
    zeta.polys.push_back(std::move(poly));
  }
  zeta.d = spec.degrees.empty() ? 0 : static_cast<unsigned>((spec.degrees.size() - 1) / 2);
  return zeta;
}

// ---------------------------------------------------------------------------
// Text export / import: "q <q>" then one "i re im mult jordan" line per entry.

inline void write_spectrum(std::ostream& os, const FrobeniusSpectrum& spec) {
  std::ostringstream buf;
  buf.imbue(std::locale::classic());
  buf << "# i re im mult jordan\n";
  buf << "q " << spec.q << '\n';
  buf << "degrees " << spec.degrees.size() << '\n';
  buf << std::setprecision(17);
  for (std::size_t i = 0; i < spec.degrees.size(); ++i) {
    for (const auto& e : spec.degrees[i]) {
      buf << i << ' ' << e.lambda.real() << ' ' << e.lambda.imag() << ' ' << e.multiplicity << ' ' << e.jordan << '\n';
    }
  }
  os << buf.str();
}

inline FrobeniusSpectrum read_spectrum(std::istream& is) {
  FrobeniusSpectrum spec;
  std::string line;
  std::size_t line_no = 0;
  bool have_degrees = false;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::SpecParse, "spectrum line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    if (line.rfind("q ", 0) == 0) {
      std::string tag;
      ls >> tag >> spec.q;
      if (!ls || spec.q < 2) fail("bad q");
      continue;
    }
    if (line.rfind("degrees ", 0) == 0) {
      std::string tag;
      std::size_t n = 0;
      ls >> tag >> n;
      if (!ls || n == 0 || n % 2 == 0) fail("degree count must be odd");
      spec.degrees.assign(n, {});
      have_degrees = true;
      continue;
    }
    if (!have_degrees) fail("entry before the degrees line");
    std::size_t i = 0;
    double re = 0, im = 0;
    unsigned mult = 0, jordan = 0;
    ls >> i >> re >> im >> mult >> jordan;
    std::string rest;
    if (!ls || (ls >> rest)) fail("expected: i re im mult jordan");
    if (i >= spec.degrees.size()) fail("degree out of range");
    if (mult == 0 || jordan == 0 || mult % jordan != 0) fail("jordan must divide mult");
    spec.degrees[i].push_back({Complex(re, im), mult, jordan});
  }
  if (spec.q == 0 || !have_degrees) throw Error(ErrorKind::SpecParse, "spectrum needs q and degrees lines");
  return spec;
}

// ---------------------------------------------------------------------------
// Matrix logarithm to base q

struct MatrixLogResult {
  CMatrix theta;       // q^theta = M
  CMatrix semisimple;  // theta_s, diagonalizable
  CMatrix nilpotent;   // theta_n, theta = theta_s + theta_n, [theta_s, theta_n] = 0
  CMatrix s_part;      // M = S U, S semisimple, U unipotent, SU = US
  CMatrix u_part;
  std::vector<std::pair<Complex, unsigned>> eigenvalues;  // clustered, with algebraic multiplicity
  double residual = 0.0;                                  // ||exp(theta log q) - M|| / ||M||
};

struct MatrixLogOptions {
  /// Eigenvalues closer than this (relative) are one cluster; defective
  /// blocks of size k split the eigenvalue by about eps^{1/k}.
  double cluster_tolerance = 1e-4;
  double residual_tolerance = 1e-9;
  double max_condition = 1e12;
};

/// Theta = log(M) / log q with the principal branch on every eigenvalue,
/// computed block by block on the generalized eigenspaces.
inline MatrixLogResult matrix_log_q(const CMatrix& m, double q, const MatrixLogOptions& opts = {}) {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error(ErrorKind::ShapeMismatch, "matrix_log_q needs a square matrix");
  if (!(q > 1.0)) throw Error(ErrorKind::BadParameter, "base q must exceed 1");
  const Eigen::Index n = m.rows();
  const double log_q = std::log(q);
  Eigen::JacobiSVD<CMatrix> svd_m(m);
  const auto& sv = svd_m.singularValues();
  if (sv(0) == 0.0 || sv(n - 1) <= 1e-14 * sv(0)) throw Error(ErrorKind::Singular, "matrix is singular; log undefined");

  Eigen::ComplexEigenSolver<CMatrix> eig(m, false);
  if (eig.info() != Eigen::Success) throw Error(ErrorKind::IllConditioned, "eigenvalue computation failed");
  std::vector<Complex> raw(eig.eigenvalues().data(), eig.eigenvalues().data() + n);

  // single-linkage clustering
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  int clusters = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (label[i] >= 0) continue;
    label[i] = clusters;
    std::vector<Eigen::Index> stack{i};
    while (!stack.empty()) {
      const auto a = stack.back();
      stack.pop_back();
      for (Eigen::Index b = 0; b < n; ++b) {
        if (label[b] >= 0) continue;
        if (std::abs(raw[a] - raw[b]) <= opts.cluster_tolerance * std::max(1.0, std::abs(raw[a]))) {
          label[b] = clusters;
          stack.push_back(b);
        }
      }
    }
    ++clusters;
  }

  // generalized eigenspace of each cluster = kernel of (M - mu)^k
  CMatrix basis(n, n);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;  // (offset, size)
  std::vector<Complex> centers;
  Eigen::Index col = 0;
  for (int c = 0; c < clusters; ++c) {
    Complex mu = 0.0;
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (label[i] == c) {
        mu += raw[i];
        ++k;
      }
    }
    mu /= static_cast<double>(k);
    CMatrix shifted = m - mu * CMatrix::Identity(n, n);
    CMatrix power = CMatrix::Identity(n, n);
    for (Eigen::Index j = 0; j < k; ++j) power = power * shifted;
    Eigen::JacobiSVD<CMatrix> svd(power, Eigen::ComputeFullV);
    basis.middleCols(col, k) = svd.matrixV().rightCols(k);
    blocks.emplace_back(col, k);
    centers.push_back(mu);
    col += k;
  }
  Eigen::JacobiSVD<CMatrix> svd_b(basis);
  const auto& sb = svd_b.singularValues();
  if (sb(n - 1) <= 0.0 || sb(0) / sb(n - 1) > opts.max_condition) {
    throw Error(ErrorKind::IllConditioned, "generalized eigenspaces are nearly dependent");
  }
  const CMatrix basis_inv = basis.inverse();
  const CMatrix c_mat = basis_inv * m * basis;

  CMatrix theta_s = CMatrix::Zero(n, n), theta_n = CMatrix::Zero(n, n);
  CMatrix s_diag = CMatrix::Zero(n, n);
  MatrixLogResult out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto [off, k] = blocks[b];
    const CMatrix block = c_mat.block(off, off, k, k);
    const Complex lambda = block.trace() / static_cast<double>(k);
    out.eigenvalues.emplace_back(lambda, static_cast<unsigned>(k));
    // log(block) = log(lambda) I + log(I + N), N = block / lambda - I (nearly nilpotent)
    const CMatrix nil = block / lambda - CMatrix::Identity(k, k);
    CMatrix term = nil, series = CMatrix::Zero(k, k);
    for (int j = 1; j <= 200; ++j) {
      series += (j % 2 ? 1.0 : -1.0) / static_cast<double>(j) * term;
      term = term * nil;
      if (term.norm() < 1e-18 * std::max(1.0, series.norm())) break;
    }
    theta_s.block(off, off, k, k) = principal_log(lambda) / log_q * CMatrix::Identity(k, k);
    theta_n.block(off, off, k, k) = series / log_q;
    s_diag.block(off, off, k, k) = lambda * CMatrix::Identity(k, k);
  }
  out.semisimple = basis * theta_s * basis_inv;
  out.nilpotent = basis * theta_n * basis_inv;
  out.theta = out.semisimple + out.nilpotent;
  out.s_part = basis * s_diag * basis_inv;
  out.u_part = out.s_part.inverse() * m;
  const CMatrix back = (out.theta * log_q).exp();
  out.residual = (back - m).norm() / m.norm();
  if (!(out.residual <= opts.residual_tolerance)) {
    throw Error(ErrorKind::IllConditioned, "q^theta misses M by " + std::to_string(out.residual));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The two-class model

/// Theta-eigenvalues {alpha + k step : k in Z}, step = 2 pi i / log q.
struct EigenProgression {
  Complex alpha;
  Complex step;
  unsigned multiplicity = 1;
  unsigned degree = 0;  // cohomological degree i; weight i / 2
  unsigned jordan = 1;
  Complex lambda;  // Frobenius eigenvalue q^alpha

  /// Rank of the nilpotent part of Theta on this generalized eigenspace.
  unsigned nilpotent_rank() const { return multiplicity - multiplicity / jordan; }

  /// Multiplying by the unit v moves every eigenvalue by one step; the set is unchanged.
  EigenProgression shifted(long k) const {
    EigenProgression out = *this;
    out.alpha += static_cast<double>(k) * step;
    return out;
  }
};

enum class Parity { Even = 0, Odd = 1 };

inline const char* to_string(Parity p) { return p == Parity::Even ? "ev" : "od"; }

struct TPModel {
  std::uint64_t q = 0;
  Complex step;
  std::vector<EigenProgression> even;
  std::vector<EigenProgression> odd;

  const std::vector<EigenProgression>& parity_class(Parity p) const { return p == Parity::Even ? even : odd; }

  /// Frobenius weight of the unit v: Fr(v) = v, Theta(v) = step * v.
  static constexpr int unit_twice_weight = -2;
};

inline TPModel build_tp_model(const FrobeniusSpectrum& spec) {
  TPModel model;
  model.q = spec.q;
  const double log_q = std::log(static_cast<double>(spec.q));
  model.step = Complex(0.0, 2.0 * kPi / log_q);
  for (std::size_t i = 0; i < spec.degrees.size(); ++i) {
    for (const auto& e : spec.degrees[i]) {
      if (e.lambda == Complex(0.0)) throw Error(ErrorKind::Singular, "zero Frobenius eigenvalue has no logarithm");
      EigenProgression prog{principal_log(e.lambda) / log_q, model.step, e.multiplicity, static_cast<unsigned>(i),
                            e.jordan, e.lambda};
      (i % 2 ? model.odd : model.even).push_back(prog);
    }
  }
  return model;
}

/// Theta on each H^i, from the Jordan form of Frobenius.
inline std::vector<MatrixLogResult> theta_operators(const FrobeniusSpectrum& spec) {
  std::vector<MatrixLogResult> out;
  for (std::size_t i = 0; i < spec.degrees.size(); ++i) {
    if (spec.betti()[i] == 0) {
      out.push_back({});
      continue;
    }
    out.push_back(matrix_log_q(spec.frobenius_matrix(i), static_cast<double>(spec.q)));
  }
  return out;
}

struct WeightReport {
  bool ok = true;
  double max_relative_deviation = 0.0;  // max ||lambda| - q^{i/2}| / q^{i/2}
  double max_real_part_deviation = 0.0; // max |Re alpha - i/2|
  double max_phi_deviation = 0.0;       // max ||lambda q^{-i/2}| - 1|: phi^r = q^{-w} Fr is unitary
  Complex unit_frobenius;               // Fr(v) / v = q^{w(v)} phi^r(v) / v, expected 1
  Complex unit_theta_shift;             // Theta(v) / v, expected step
};

/// Weil bounds seen twice: |lambda| = q^{i/2} on H^i, and Re(alpha) = i/2 for
/// the corresponding Theta-progression.
inline WeightReport frobenius_weight_relation(const FrobeniusSpectrum& spec, double tolerance = 1e-9) {
  WeightReport r;
  const auto model = build_tp_model(spec);
  for (std::size_t i = 0; i < spec.degrees.size(); ++i) {
    const double expected = std::pow(static_cast<double>(spec.q), static_cast<double>(i) / 2.0);
    for (const auto& e : spec.degrees[i]) {
      const double dev = std::abs(std::abs(e.lambda) - expected) / expected;
      r.max_relative_deviation = std::max(r.max_relative_deviation, dev);
      if (!(dev <= tolerance)) r.ok = false;
    }
  }
  for (const auto* cls : {&model.even, &model.odd}) {
    for (const auto& prog : *cls) {
      r.max_real_part_deviation =
          std::max(r.max_real_part_deviation, std::abs(prog.alpha.real() - static_cast<double>(prog.degree) / 2.0));
      const Complex phi = prog.lambda * std::pow(static_cast<double>(spec.q), -static_cast<double>(prog.degree) / 2.0);
      r.max_phi_deviation = std::max(r.max_phi_deviation, std::abs(std::abs(phi) - 1.0));
    }
  }
  // The unit v has phi(v) = p v, so phi^r(v) = q v, and weight -1.
  const double q = static_cast<double>(spec.q);
  r.unit_frobenius = std::pow(q, TPModel::unit_twice_weight / 2.0) * q;
  r.unit_theta_shift = model.step;
  if (!(r.max_real_part_deviation <= tolerance) || !(std::abs(r.unit_frobenius - 1.0) <= tolerance)) r.ok = false;
  return r;
}

}  // namespace hasse_forge
