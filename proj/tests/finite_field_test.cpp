#include "hasse_forge/finite_field.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

namespace hf = hasse_forge;

namespace {

// Schoolbook product followed by long division by a monic modulus, all
// leading-coefficient-first, independent of the library's reduction loop.
std::vector<std::int64_t> long_division_product(std::vector<std::int64_t> a, std::vector<std::int64_t> b,
                                                const std::vector<std::int64_t>& modulus, std::int64_t p) {
  std::vector<std::int64_t> prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  while (prod.size() >= modulus.size()) {
    const std::int64_t lead = prod.front();
    for (std::size_t i = 0; i < modulus.size(); ++i) prod[i] = ((prod[i] - lead * modulus[i]) % p + p) % p;
    prod.erase(prod.begin());
  }
  return prod;  // leading first, length deg(modulus)
}

hf::FqElement random_element(const hf::FqField& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> d(0, f.order() - 1);
  return f.element_at(d(rng));
}

std::vector<hf::FqField> sample_fields() {
  return {hf::FqField::build(2, 1), hf::FqField::build(2, 3), hf::FqField::build(3, 2), hf::FqField::build(5, 1),
          hf::FqField::build(5, 2), hf::FqField::build(7, 3), hf::FqField::build(2, 8)};
}

}  // namespace

TEST(FiniteField, BuildPrimeFieldDefaultsToModulusX) {
  auto f = hf::FqField::build(2, 1);
  EXPECT_EQ(f.order(), 2u);
  EXPECT_EQ(f.modulus_leading_first(), (std::vector<std::uint64_t>{1, 0}));
}

TEST(FiniteField, BuildF4PicksOnlyIrreducibleQuadratic) {
  auto f = hf::FqField::build(2, 2);
  EXPECT_EQ(f.modulus_leading_first(), (std::vector<std::uint64_t>{1, 1, 1}));
}

TEST(FiniteField, BuildWithExplicitModulus) {
  auto f = hf::FqField::build(5, 1, std::vector<std::int64_t>{1, 0});
  EXPECT_EQ(f.order(), 5u);
  auto g = hf::FqField::build(3, 2, std::vector<std::int64_t>{1, 0, 1});
  EXPECT_EQ(g.order(), 9u);
}

TEST(FiniteField, BuildErrors) {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const hf::Error& e) {
      return e.kind();
    }
    return hf::ErrorKind::BadParameter;
  };
  EXPECT_EQ(kind_of([] { hf::FqField::build(4, 1); }), hf::ErrorKind::NonPrime);
  EXPECT_EQ(kind_of([] { hf::FqField::build(2, 2, std::vector<std::int64_t>{1, 0, 1}); }), hf::ErrorKind::Reducible);
  EXPECT_EQ(kind_of([] { hf::FqField::build(2, 2, std::vector<std::int64_t>{1, 1}); }), hf::ErrorKind::DegreeMismatch);
  EXPECT_EQ(kind_of([] { hf::FqField::build(3, 2, std::vector<std::int64_t>{2, 0, 1}); }),
            hf::ErrorKind::DegreeMismatch);
}

TEST(FiniteField, DefaultModulusIsIrreducibleForManyFields) {
  for (std::uint64_t p : {2, 3, 5, 7, 11}) {
    for (unsigned r = 1; r <= 6; ++r) {
      auto f = hf::FqField::build(p, r);
      // x^{q} = x and x^{p^k} != x for proper divisors is implied by a^(q-1) = 1 on the generator
      auto x = f.generator();
      EXPECT_EQ(x.pow_u(f.order()), x);
      ASSERT_EQ(f.modulus().size(), r + 1);
    }
  }
}

TEST(FiniteField, MultiplyInF4MatchesLongDivision) {
  auto f = hf::FqField::build(2, 2);
  auto x = f.generator();
  auto xx = x * x;
  auto expected = long_division_product({1, 0}, {1, 0}, {1, 1, 1}, 2);  // leading first
  EXPECT_EQ(expected, (std::vector<std::int64_t>{1, 1}));
  EXPECT_EQ(xx, f.element({1, 1}));  // x + 1
}

TEST(FiniteField, MultiplyMatchesLongDivisionOnRandomPairs) {
  std::mt19937_64 rng(17);
  for (const auto& f : sample_fields()) {
    std::vector<std::int64_t> mod;
    for (auto c : f.modulus_leading_first()) mod.push_back(static_cast<std::int64_t>(c));
    for (int t = 0; t < 200; ++t) {
      auto a = random_element(f, rng), b = random_element(f, rng);
      std::vector<std::int64_t> la(a.coeffs().rbegin(), a.coeffs().rend()), lb(b.coeffs().rbegin(), b.coeffs().rend());
      auto want = long_division_product(la, lb, mod, static_cast<std::int64_t>(f.p()));
      std::vector<std::int64_t> got(a.coeffs().size());
      auto prod = a * b;
      for (std::size_t i = 0; i < got.size(); ++i) got[i] = prod.coeffs()[got.size() - 1 - i];
      ASSERT_EQ(got, want);
    }
  }
}

TEST(FiniteField, FieldAxiomsOnRandomTriples) {
  std::mt19937_64 rng(1);
  for (const auto& f : sample_fields()) {
    for (int t = 0; t < 1000; ++t) {
      auto a = random_element(f, rng), b = random_element(f, rng), c = random_element(f, rng);
      ASSERT_EQ((a + b) + c, a + (b + c));
      ASSERT_EQ((a * b) * c, a * (b * c));
      ASSERT_EQ(a * b, b * a);
      ASSERT_EQ(a + b, b + a);
      ASSERT_EQ(a * (b + c), a * b + a * c);
      ASSERT_EQ(a - a, f.zero());
      ASSERT_EQ(a * f.one(), a);
    }
  }
}

TEST(FiniteField, InversesAndFermat) {
  std::mt19937_64 rng(2);
  for (const auto& f : sample_fields()) {
    for (int t = 0; t < 300; ++t) {
      auto a = random_element(f, rng);
      ASSERT_EQ(a.pow_u(f.order()), a);
      if (a.is_zero()) continue;
      ASSERT_EQ(a * a.inverse(), f.one());
      ASSERT_EQ(a.pow_u(f.order() - 1), f.one());
      ASSERT_EQ(a.pow(-3) * a.pow(3), f.one());
      ASSERT_EQ((f.one() / a), a.inverse());
    }
  }
}

TEST(FiniteField, DivisionByZeroAndFieldMismatch) {
  auto f = hf::FqField::build(5, 1);
  auto g = hf::FqField::build(7, 1);
  EXPECT_THROW(f.one() / f.zero(), hf::Error);
  try {
    (void)(f.one() + g.one());
    FAIL();
  } catch (const hf::Error& e) {
    EXPECT_EQ(e.kind(), hf::ErrorKind::FieldMismatch);
  }
}

TEST(FiniteField, FrobeniusExamples) {
  auto f4 = hf::FqField::build(2, 2);
  EXPECT_EQ(f4.one().frobenius(), f4.one());
  EXPECT_EQ(f4.generator().frobenius(), f4.element({1, 1}));
}

TEST(FiniteField, FrobeniusIsRingHomomorphismOfOrderR) {
  std::mt19937_64 rng(3);
  for (const auto& f : sample_fields()) {
    for (int t = 0; t < 100; ++t) {
      auto a = random_element(f, rng), b = random_element(f, rng);
      ASSERT_EQ((a + b).frobenius(), a.frobenius() + b.frobenius());
      ASSERT_EQ((a * b).frobenius(), a.frobenius() * b.frobenius());
      auto it = a;
      for (unsigned i = 0; i < f.r(); ++i) it = it.frobenius();
      ASSERT_EQ(it, a);
    }
  }
}

TEST(FiniteField, EnumerationYieldsEachElementOnce) {
  for (auto [p, r, q] : {std::tuple{2u, 1u, 2u}, {2u, 2u, 4u}, {5u, 2u, 25u}}) {
    auto f = hf::FqField::build(p, r);
    std::set<std::vector<std::uint32_t>> seen;
    std::uint64_t n = 0;
    for (const auto& a : hf::enumerate_elements(f)) {
      seen.insert(a.coeffs());
      EXPECT_EQ(f.index_of(a), n);
      ++n;
    }
    EXPECT_EQ(n, q);
    EXPECT_EQ(seen.size(), q);
  }
  auto f2 = hf::FqField::build(2, 1);
  std::vector<std::uint64_t> idx;
  for (const auto& a : hf::enumerate_elements(f2)) idx.push_back(a.coeffs()[0]);
  EXPECT_EQ(idx, (std::vector<std::uint64_t>{0, 1}));
}

TEST(FiniteField, EnumerationGuard) {
  auto f = hf::FqField::build(2, 25);
  try {
    (void)hf::enumerate_elements(f);
    FAIL();
  } catch (const hf::Error& e) {
    EXPECT_EQ(e.kind(), hf::ErrorKind::TooLarge);
  }
  EXPECT_NO_THROW((void)hf::enumerate_elements(hf::FqField::build(2, 4), 16));
  EXPECT_THROW((void)hf::enumerate_elements(hf::FqField::build(2, 5), 16), hf::Error);
}

TEST(FiniteField, EmbeddingIsRingHomomorphism) {
  auto base = hf::FqField::build(3, 2);
  auto ext = hf::FqField::build(3, 4);
  hf::FieldEmbedding iota(base, ext);
  for (const auto& a : hf::enumerate_elements(base)) {
    for (const auto& b : hf::enumerate_elements(base)) {
      ASSERT_EQ(iota(a + b), iota(a) + iota(b));
      ASSERT_EQ(iota(a * b), iota(a) * iota(b));
    }
  }
  EXPECT_EQ(iota(base.one()), ext.one());
}
