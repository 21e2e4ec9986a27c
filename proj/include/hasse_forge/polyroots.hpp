#pragma once

// Roots of real polynomials: companion-matrix eigenvalues as starting points,
// polished by simultaneous Aberth-Ehrlich iteration, then made conjugate-closed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "hasse_forge/error.hpp"
#include "hasse_forge/special_functions.hpp"

namespace hasse_forge {

struct RootOptions {
  int max_iterations = 100;
  /// |Im z| below this (relative to |z|) after polishing is treated as real.
  double real_axis_tolerance = 1e-7;
  /// Largest accepted residual |p(z)| / sum_k |a_k| |z|^k.
  double residual_tolerance = 1e-10;
};

/// Evaluates sum a_k z^k and its derivative; coefficients constant term first.
inline std::pair<Complex, Complex> horner_with_derivative(const std::vector<double>& a, Complex z) {
  Complex p = 0.0, dp = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) {
    dp = dp * z + p;
    p = p * z + a[k];
  }
  return {p, dp};
}

/// Relative residual |p(z)| / sum |a_k| |z|^k.
inline double relative_residual(const std::vector<double>& a, Complex z) {
  double scale = 0.0;
  double zk = 1.0;
  for (double c : a) {
    scale += std::abs(c) * zk;
    zk *= std::abs(z);
  }
  const Complex p = horner_with_derivative(a, z).first;
  return scale > 0 ? std::abs(p) / scale : std::abs(p);
}

/// All complex roots of sum_{k} a_k z^k (constant term first, a.back() != 0).
inline std::vector<Complex> polynomial_roots(std::vector<double> a, const RootOptions& opts = {}) {
  while (!a.empty() && a.back() == 0.0) a.pop_back();
  if (a.size() <= 1) return {};
  std::vector<Complex> zero_roots;
  while (a.front() == 0.0) {
    zero_roots.emplace_back(0.0);
    a.erase(a.begin());
  }
  const std::size_t deg = a.size() - 1;
  // Scale z = s y so the roots of the scaled polynomial have geometric-mean modulus 1.
  const double s = std::pow(std::abs(a.front() / a.back()), 1.0 / static_cast<double>(deg));
  std::vector<double> b(a.size());
  double sk = 1.0;
  for (std::size_t k = 0; k <= deg; ++k) {
    b[k] = a[k] * sk / a.back();
    sk *= s;
  }
  // b is monic after dividing by a.back() * s^deg; fix the rounding of the leading term
  for (std::size_t k = 0; k < deg; ++k) b[k] /= b[deg];
  b[deg] = 1.0;

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
  for (std::size_t i = 1; i < deg; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < deg; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg - 1)) = -b[i];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::RootFindingDiverged, "companion eigenvalues failed");
  std::vector<Complex> z(deg);
  for (std::size_t i = 0; i < deg; ++i) z[i] = solver.eigenvalues()[static_cast<Eigen::Index>(i)];

  // Aberth-Ehrlich: z_k -= N_k / (1 - N_k sum_{j != k} 1/(z_k - z_j)), N_k = p/p'.
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    double max_step = 0.0;
    for (std::size_t k = 0; k < deg; ++k) {
      auto [p, dp] = horner_with_derivative(b, z[k]);
      if (p == Complex(0.0)) continue;
      if (dp == Complex(0.0)) continue;
      const Complex newton = p / dp;
      Complex repulsion = 0.0;
      for (std::size_t j = 0; j < deg; ++j) {
        if (j != k && z[j] != z[k]) repulsion += 1.0 / (z[k] - z[j]);
      }
      const Complex step = newton / (1.0 - newton * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      // only accept steps that do not increase the residual
      const Complex candidate = z[k] - step;
      if (std::abs(horner_with_derivative(b, candidate).first) <= std::abs(p)) {
        z[k] = candidate;
        max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[k])));
      }
    }
    if (max_step < 1e-16) break;
  }

  // Conjugate closure: snap near-real roots, then pair the rest with their
  // closest conjugate partners and average each pair.
  std::vector<bool> used(deg, false);
  for (std::size_t k = 0; k < deg; ++k) {
    if (std::abs(z[k].imag()) <= opts.real_axis_tolerance * std::max(1.0, std::abs(z[k]))) {
      z[k] = Complex(z[k].real(), 0.0);
      used[k] = true;
    }
  }
  for (std::size_t k = 0; k < deg; ++k) {
    if (used[k] || z[k].imag() < 0) continue;
    std::size_t best = deg;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < deg; ++j) {
      if (used[j] || j == k || z[j].imag() >= 0) continue;
      const double dist = std::abs(z[j] - std::conj(z[k]));
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best == deg) throw Error(ErrorKind::RootFindingDiverged, "roots of a real polynomial are not conjugate-closed");
    const Complex avg = 0.5 * (z[k] + std::conj(z[best]));
    z[k] = avg;
    z[best] = std::conj(avg);
    used[k] = used[best] = true;
  }
  for (std::size_t k = 0; k < deg; ++k) {
    if (!used[k]) throw Error(ErrorKind::RootFindingDiverged, "unpaired non-real root");
  }

  std::vector<Complex> roots = zero_roots;
  for (auto r : z) {
    const Complex root = r * s;
    if (relative_residual(a, root) > opts.residual_tolerance) {
      throw Error(ErrorKind::RootFindingDiverged, "residual above tolerance after refinement");
    }
    roots.push_back(root);
  }
  std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return roots;
}

}  // namespace hasse_forge
