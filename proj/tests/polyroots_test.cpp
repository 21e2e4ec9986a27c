#include "hasse_forge/polyroots.hpp"

#include <gtest/gtest.h>

#include <random>

namespace hf = hasse_forge;
using hf::Complex;

namespace {

// Expands prod (z - r_k), constant term first.
std::vector<Complex> expand(const std::vector<Complex>& roots) {
  std::vector<Complex> c{1.0};
  for (const auto& r : roots) {
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return c;
}

double match_distance(std::vector<Complex> got, std::vector<Complex> want) {
  if (got.size() != want.size()) return 1e300;
  double worst = 0.0;
  for (const auto& w : want) {
    auto it = std::min_element(got.begin(), got.end(),
                               [&](Complex a, Complex b) { return std::abs(a - w) < std::abs(b - w); });
    worst = std::max(worst, std::abs(*it - w) / std::max(1.0, std::abs(w)));
    got.erase(it);
  }
  return worst;
}

}  // namespace

TEST(PolynomialRoots, Quadratic) {
  // z^2 + 3z + 5
  auto roots = hf::polynomial_roots({5.0, 3.0, 1.0});
  ASSERT_EQ(roots.size(), 2u);
  const double s = std::sqrt(11.0) / 2.0;
  EXPECT_NEAR(roots[0].real(), -1.5, 1e-14);
  EXPECT_NEAR(roots[0].imag(), -s, 1e-14);
  EXPECT_NEAR(roots[1].imag(), s, 1e-14);
  EXPECT_EQ(roots[0], std::conj(roots[1]));
}

TEST(PolynomialRoots, ZeroRootsAndLinear) {
  auto roots = hf::polynomial_roots({0.0, 0.0, -2.0, 1.0});
  ASSERT_EQ(roots.size(), 3u);
  EXPECT_EQ(roots[0], Complex(0.0));
  EXPECT_EQ(roots[1], Complex(0.0));
  EXPECT_NEAR(roots[2].real(), 2.0, 1e-15);
  EXPECT_TRUE(hf::polynomial_roots({4.0}).empty());
}

TEST(PolynomialRoots, DoubleRoot) {
  // (z - 3)^2: a double root only resolves to about sqrt(eps)
  auto roots = hf::polynomial_roots({9.0, -6.0, 1.0});
  ASSERT_EQ(roots.size(), 2u);
  for (auto r : roots) EXPECT_NEAR(std::abs(r - 3.0), 0.0, 1e-7);
}

TEST(PolynomialRoots, WeilNumbersOnCircles) {
  // reversed Weil polynomials with roots of modulus sqrt(q)
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> angle(0.0, hf::kPi);
  for (double q : {2.0, 3.0, 5.0, 7.0, 25.0}) {
    for (int t = 0; t < 20; ++t) {
      std::vector<Complex> want;
      for (int k = 0; k < 3; ++k) {
        const Complex lam = std::polar(std::sqrt(q), angle(rng));
        want.push_back(lam);
        want.push_back(std::conj(lam));
      }
      auto c = expand(want);
      std::vector<double> real;
      for (auto x : c) real.push_back(x.real());
      auto got = hf::polynomial_roots(real);
      EXPECT_LE(match_distance(got, want), 1e-6) << q;
      for (auto r : got) EXPECT_LE(hf::relative_residual(real, r), 1e-10);
    }
  }
}

TEST(PolynomialRoots, RandomRealCoefficientsAreConjugateClosed) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a(2 + t % 9);
    for (auto& x : a) x = d(rng);
    auto roots = hf::polynomial_roots(a);
    ASSERT_EQ(roots.size(), a.size() - 1);
    for (auto r : roots) {
      EXPECT_LE(hf::relative_residual(a, r), 1e-10);
      if (r.imag() != 0.0) {
        EXPECT_TRUE(std::find(roots.begin(), roots.end(), std::conj(r)) != roots.end());
      }
    }
  }
}
