#include "hasse_forge/witt.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

namespace hf = hasse_forge;
using hf::BigInt;
using WZ = hf::WittVector<hf::IntegerRing>;

namespace {

WZ random_wz(std::uint64_t p, unsigned n, std::mt19937_64& rng, int bound = 20) {
  std::uniform_int_distribution<int> d(-bound, bound);
  std::vector<BigInt> c;
  for (unsigned i = 0; i < n; ++i) c.emplace_back(d(rng));
  return WZ(hf::IntegerRing{}, p, c);
}

hf::WittFq random_wfq(const hf::FqField& f, unsigned n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> d(0, f.order() - 1);
  std::vector<hf::FqElement> c;
  for (unsigned i = 0; i < n; ++i) c.push_back(f.element_at(d(rng)));
  return hf::WittFq(hf::FqRing{f}, f.p(), c);
}

std::vector<BigInt> add_ghost(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  std::vector<BigInt> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}
std::vector<BigInt> mul_ghost(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  std::vector<BigInt> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] * b[i]);
  return out;
}

template <class Fn>
hf::ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const hf::Error& e) {
    return e.kind();
  }
  return hf::ErrorKind::IdentityViolated;
}

}  // namespace

TEST(WittPolys, LengthOneIsTheBaseRing) {
  auto polys = hf::witt_structure_polys(2, 1);
  auto names = polys->variable_names();
  EXPECT_EQ(polys->sum_polys[0].to_string(names), "X0 + Y0");
  EXPECT_EQ(polys->prod_polys[0].to_string(names), "X0*Y0");
}

TEST(WittPolys, SecondSumPolynomialForPTwo) {
  auto polys = hf::witt_structure_polys(2, 2);
  const std::size_t nv = 4;
  hf::MultiPoly expected = hf::MultiPoly::variable(nv, 1) + hf::MultiPoly::variable(nv, 3) -
                           hf::MultiPoly::variable(nv, 0) * hf::MultiPoly::variable(nv, 2);
  EXPECT_EQ(polys->sum_polys[1], expected);
}

TEST(WittPolys, GhostCompatibilityForSmallPrimes) {
  for (std::uint64_t p : {2, 3, 5}) {
    for (unsigned n = 1; n <= 4; ++n) {
      auto report = hf::verify_ghost_compatibility(*hf::witt_structure_polys(p, n));
      EXPECT_TRUE(report.sums) << "p=" << p << " n=" << n;
      EXPECT_TRUE(report.products) << "p=" << p << " n=" << n;
      EXPECT_TRUE(report.frobenius) << "p=" << p << " n=" << n;
    }
  }
}

TEST(WittPolys, NonPrimeRejected) {
  EXPECT_EQ(kind_of([] { hf::witt_structure_polys(6, 2); }), hf::ErrorKind::NonPrime);
}

TEST(Witt, AdditiveIdentityAndKnownSum) {
  WZ a(hf::IntegerRing{}, 2, {BigInt(1), BigInt(0)});
  auto sum = a + a;
  EXPECT_EQ(sum, WZ(hf::IntegerRing{}, 2, {BigInt(2), BigInt(-1)}));
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    auto x = random_wz(3, 3, rng);
    EXPECT_EQ(x + WZ::zero(hf::IntegerRing{}, 3, 3), x);
    EXPECT_EQ(x * WZ::one(hf::IntegerRing{}, 3, 3), x);
  }
}

TEST(Witt, CommutativityOnRandomPairs) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 1000; ++t) {
    auto a = random_wz(2, 3, rng), b = random_wz(2, 3, rng);
    ASSERT_EQ(a + b, b + a);
    ASSERT_EQ(a * b, b * a);
  }
}

TEST(Witt, GhostExamples) {
  WZ v(hf::IntegerRing{}, 2, {BigInt(0), BigInt(1)});
  EXPECT_EQ(v.ghost(), (std::vector<BigInt>{0, 2}));
  auto one_v = WZ::one(hf::IntegerRing{}, 2, 1).verschiebung_V();
  EXPECT_EQ(one_v.ghost(), (std::vector<BigInt>{0, 2}));
  for (int c : {-3, 2, 5}) {
    auto t = hf::teichmuller(hf::IntegerRing{}, 3, BigInt(c), 3);
    EXPECT_EQ(t.ghost(), (std::vector<BigInt>{BigInt(c), BigInt(c) * c * c, hf::ring_pow(hf::IntegerRing{}, BigInt(c), 9)}));
  }
}

TEST(Witt, GhostIsRingHomomorphismAndRingAxiomsHold) {
  std::mt19937_64 rng(6);
  for (std::uint64_t p : {2, 3}) {
    for (int t = 0; t < 1000; ++t) {
      auto a = random_wz(p, 3, rng), b = random_wz(p, 3, rng), c = random_wz(p, 3, rng);
      ASSERT_EQ((a + b).ghost(), add_ghost(a.ghost(), b.ghost()));
      ASSERT_EQ((a * b).ghost(), mul_ghost(a.ghost(), b.ghost()));
      ASSERT_EQ(((a + b) + c).ghost(), (a + (b + c)).ghost());
      ASSERT_EQ((a * (b + c)).ghost(), (a * b + a * c).ghost());
    }
  }
}

TEST(Witt, AssociativityAndDistributivityOverFiniteField) {
  std::mt19937_64 rng(7);
  auto f = hf::FqField::build(3, 2);
  for (int t = 0; t < 200; ++t) {
    auto a = random_wfq(f, 3, rng), b = random_wfq(f, 3, rng), c = random_wfq(f, 3, rng);
    ASSERT_EQ((a + b) + c, a + (b + c));
    ASSERT_EQ((a * b) * c, a * (b * c));
    ASSERT_EQ(a * (b + c), a * b + a * c);
  }
}

TEST(Witt, TeichmullerBasics) {
  auto f = hf::FqField::build(2, 3);
  EXPECT_EQ(hf::teichmuller(f.one(), 3), hf::WittFq::one(hf::FqRing{f}, 2, 3));
  EXPECT_EQ(hf::teichmuller(f.zero(), 3), hf::WittFq::zero(hf::FqRing{f}, 2, 3));
}

TEST(Witt, TeichmullerIsMultiplicative) {
  std::mt19937_64 rng(8);
  for (auto f : {hf::FqField::build(2, 3), hf::FqField::build(3, 2), hf::FqField::build(5, 1)}) {
    std::uniform_int_distribution<std::uint64_t> d(0, f.order() - 1);
    for (int t = 0; t < 1000; ++t) {
      auto a = f.element_at(d(rng)), b = f.element_at(d(rng));
      ASSERT_EQ(hf::teichmuller(a, 3) * hf::teichmuller(b, 3), hf::teichmuller(a * b, 3));
    }
  }
}

TEST(Witt, OperatorIdentities) {
  std::mt19937_64 rng(9);
  for (std::uint64_t p : {2, 3}) {
    for (int t = 0; t < 1000; ++t) {
      auto a = random_wz(p, 2, rng);
      ASSERT_EQ(a.verschiebung_V().frobenius_F(), a.times(p));  // F V = p
      auto b = random_wz(p, 3, rng);
      ASSERT_EQ(b.verschiebung_V().restrict_R(), b.restrict_R().verschiebung_V());
      ASSERT_EQ(b.restrict_R().frobenius_F(), b.frobenius_F().restrict_R());
    }
    for (int c : {-2, 0, 3, 7}) {
      auto t = hf::teichmuller(hf::IntegerRing{}, p, BigInt(c), 3);
      auto cp = hf::ring_pow(hf::IntegerRing{}, BigInt(c), p);
      EXPECT_EQ(t.frobenius_F(), hf::teichmuller(hf::IntegerRing{}, p, cp, 2));
    }
  }
}

TEST(Witt, FrobeniusEqualsRestrictionOverPrimeField) {
  std::mt19937_64 rng(10);
  for (std::uint64_t p : {2, 3, 5}) {
    auto f = hf::FqField::build(p, 1);
    for (int t = 0; t < 200; ++t) {
      auto a = random_wfq(f, 3, rng);
      ASSERT_EQ(a.frobenius_F(), a.restrict_R());
    }
  }
  // Over F_9 the Frobenius is R composed with componentwise x -> x^p.
  auto f9 = hf::FqField::build(3, 2);
  for (int t = 0; t < 200; ++t) {
    auto a = random_wfq(f9, 3, rng);
    auto phi_a = a.map_components([](const hf::FqElement& c) { return c.frobenius(); });
    ASSERT_EQ(a.frobenius_F(), phi_a.restrict_R());
  }
}

TEST(Witt, Errors) {
  WZ a(hf::IntegerRing{}, 2, {BigInt(1)});
  WZ b(hf::IntegerRing{}, 2, {BigInt(1), BigInt(2)});
  WZ c(hf::IntegerRing{}, 3, {BigInt(1), BigInt(2)});
  EXPECT_EQ(kind_of([&] { (void)(a + b); }), hf::ErrorKind::ShapeMismatch);
  EXPECT_EQ(kind_of([&] { (void)(b * c); }), hf::ErrorKind::ShapeMismatch);
  EXPECT_EQ(kind_of([&] { (void)a.frobenius_F(); }), hf::ErrorKind::LengthTooShort);
  EXPECT_EQ(kind_of([&] { (void)a.restrict_R(); }), hf::ErrorKind::LengthTooShort);
  auto f = hf::FqField::build(2, 2);
  EXPECT_EQ(kind_of([&] { (void)hf::teichmuller(f.one(), 2).ghost(); }), hf::ErrorKind::UnsupportedBaseRing);
  hf::WittVector<hf::ZmodRing> zm(hf::ZmodRing(BigInt(4)), 2, {BigInt(1), BigInt(3)});
  EXPECT_EQ(kind_of([&] { (void)zm.ghost(); }), hf::ErrorKind::UnsupportedBaseRing);
  hf::WittVector<hf::ZmodRing> z9(hf::ZmodRing(BigInt(9)), 2, {BigInt(1), BigInt(3)});
  EXPECT_EQ(z9.ghost(), (std::vector<BigInt>{1, 7}));  // 1 + 2*3 mod 9
  EXPECT_EQ(kind_of([&] { (void)hf::wn_fp_iso(hf::teichmuller(f.one(), 2)); }), hf::ErrorKind::WrongBaseField);
  EXPECT_EQ(kind_of([&] { (void)hf::xi_image(3, 2, f.one()); }), hf::ErrorKind::WrongBaseField);
}

TEST(Witt, ZmodReductionCommutesWithArithmetic) {
  std::mt19937_64 rng(11);
  hf::ZmodRing ring(BigInt(16));
  for (int t = 0; t < 200; ++t) {
    auto a = random_wz(2, 3, rng), b = random_wz(2, 3, rng);
    auto reduce = [&](const WZ& x) {
      std::vector<BigInt> c;
      for (const auto& v : x.components()) c.push_back(ring.normalize(v));
      return hf::WittVector<hf::ZmodRing>(ring, 2, c);
    };
    ASSERT_EQ(reduce(a + b), reduce(a) + reduce(b));
    ASSERT_EQ(reduce(a * b), reduce(a) * reduce(b));
  }
}

TEST(Witt, Printing) {
  WZ a(hf::IntegerRing{}, 2, {BigInt(2), BigInt(-1)});
  EXPECT_EQ(a.to_string(), "W_2(Z): (2, -1)");
}

TEST(WnFpIso, SmallExamples) {
  auto f2 = hf::FqField::build(2, 1);
  hf::WittFq one(hf::FqRing{f2}, 2, {f2.one(), f2.zero()});
  hf::WittFq ones(hf::FqRing{f2}, 2, {f2.one(), f2.one()});
  EXPECT_EQ(hf::wn_fp_iso(one), 1);
  EXPECT_EQ(hf::wn_fp_iso(ones), 3);
}

// The oracle: a ring isomorphism W_n(F_p) -> Z/p^n sends k*1 to k, so the
// additive multiples of 1 give the whole table independently of digits.
TEST(WnFpIso, ExhaustiveRingTableComparison) {
  for (auto [p, n] : {std::pair<std::uint64_t, unsigned>{2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 1}, {3, 2}, {3, 3}, {5, 1}, {5, 2}}) {
    auto f = hf::FqField::build(p, 1);
    const std::uint64_t order = hf::small_pow(p, n);
    std::vector<hf::WittFq> multiples;
    auto acc = hf::WittFq::zero(hf::FqRing{f}, p, n);
    const auto one = hf::WittFq::one(hf::FqRing{f}, p, n);
    std::set<std::vector<std::uint32_t>> seen;
    for (std::uint64_t k = 0; k < order; ++k) {
      multiples.push_back(acc);
      std::vector<std::uint32_t> key;
      for (const auto& c : acc.components()) key.push_back(c.coeffs()[0]);
      seen.insert(key);
      acc += one;
    }
    ASSERT_EQ(seen.size(), order) << "1 should have additive order p^n";
    ASSERT_EQ(acc, hf::WittFq::zero(hf::FqRing{f}, p, n));
    for (std::uint64_t k = 0; k < order; ++k) ASSERT_EQ(hf::wn_fp_iso(multiples[k]), k) << "p=" << p << " n=" << n;
    for (std::uint64_t i = 0; i < order; ++i) {
      for (std::uint64_t j = 0; j < order; ++j) {
        ASSERT_EQ(hf::wn_fp_iso(multiples[i] * multiples[j]), (i * j) % order);
        ASSERT_EQ(hf::wn_fp_iso(multiples[i] + multiples[j]), (i + j) % order);
      }
    }
  }
}

TEST(XiImage, EqualsPForAllSmallPrimes) {
  for (std::uint64_t p : {2, 3, 5, 7}) {
    auto f = hf::FqField::build(p, 1);
    for (unsigned n = 1; n <= 3; ++n) {
      auto xi = hf::xi_image(p, n, f.one());
      EXPECT_EQ(xi, hf::WittFq::one(hf::FqRing{f}, p, n).times(p));
      EXPECT_EQ(hf::wn_fp_iso(xi), BigInt(p) % hf::big_pow(p, n));
    }
  }
  auto f2 = hf::FqField::build(2, 1);
  EXPECT_EQ(hf::wn_fp_iso(hf::xi_image(2, 3, f2.one())), 2);
  auto f5 = hf::FqField::build(5, 1);
  EXPECT_EQ(hf::wn_fp_iso(hf::xi_image(5, 2, f5.one())), 5);
}

TEST(XiImage, ZeroGivesOneAndExtensionFieldsWork) {
  auto f = hf::FqField::build(3, 2);
  EXPECT_EQ(hf::xi_image(3, 3, f.zero()), hf::WittFq::one(hf::FqRing{f}, 3, 3));
  EXPECT_EQ(hf::xi_image(3, 3, f.one()), hf::WittFq::one(hf::FqRing{f}, 3, 3).times(3));
}

TEST(PhiInfty, IdentityOverPrimeField) {
  std::mt19937_64 rng(12);
  auto f = hf::FqField::build(5, 1);
  for (int t = 0; t < 100; ++t) {
    auto a = random_wfq(f, 3, rng);
    ASSERT_EQ(hf::phi_infty(a), a);
  }
}

TEST(PhiInfty, SquaringOnF4AtLevelOne) {
  auto f = hf::FqField::build(2, 2);
  for (const auto& c : hf::enumerate_elements(f)) {
    auto a = hf::teichmuller(c, 1);
    EXPECT_EQ(hf::phi_infty(a)[0], c * c);
  }
  // x -> x + 1, x + 1 -> x
  EXPECT_EQ(hf::phi_infty(hf::teichmuller(f.generator(), 1))[0], f.element({1, 1}));
}

TEST(PhiInfty, InverseOnRandomInputsOverF9) {
  std::mt19937_64 rng(13);
  auto f = hf::FqField::build(3, 2);
  for (unsigned n = 1; n <= 3; ++n) {
    for (int t = 0; t < 1000; ++t) {
      auto a = random_wfq(f, n, rng);
      ASSERT_EQ(hf::phi_infty(hf::phi_infty_inverse(a)), a);
      ASSERT_EQ(hf::phi_infty_inverse(hf::phi_infty(a)), a);
    }
  }
}

TEST(PhiInfty, IsRingHomomorphism) {
  std::mt19937_64 rng(14);
  auto f = hf::FqField::build(2, 3);
  for (int t = 0; t < 100; ++t) {
    auto a = random_wfq(f, 3, rng), b = random_wfq(f, 3, rng);
    ASSERT_EQ(hf::phi_infty(a + b), hf::phi_infty(a) + hf::phi_infty(b));
    ASSERT_EQ(hf::phi_infty(a * b), hf::phi_infty(a) * hf::phi_infty(b));
  }
}
