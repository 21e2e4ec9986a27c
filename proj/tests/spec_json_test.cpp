#include "hasse_forge/spec_json.hpp"

#include <gtest/gtest.h>

namespace hf = hasse_forge;

namespace {

hf::ErrorKind kind_of(const std::string& text) {
  try {
    hf::parse_variety_spec(text);
  } catch (const hf::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "accepted: " << text;
  return hf::ErrorKind::BadParameter;
}

}  // namespace

TEST(SpecJson, AllKinds) {
  auto ec = hf::parse_variety_spec(R"({"kind":"weierstrass","base":{"p":5,"r":1},"a":[0,0,0,1,1]})");
  EXPECT_EQ(hf::count_points(ec, 1), 9);
  auto p2 = hf::parse_variety_spec(R"({"kind":"projective_space","n":2,"base":{"p":2}})");
  EXPECT_EQ(p2.betti(), (std::vector<unsigned>{1, 0, 1, 0, 1}));
  auto prod = hf::parse_variety_spec(R"({"kind":"product","factors":[
      {"kind":"projective_space","n":1,"base":{"p":3,"r":1}},
      {"kind":"projective_space","n":1,"base":{"p":3,"r":1}}]})");
  EXPECT_EQ(hf::count_points(prod, 2), 100);
  auto custom = hf::parse_variety_spec(R"({"kind":"custom","base":{"p":5,"r":1},"counts":[9,"27"],"betti":[1,2,1]})");
  EXPECT_EQ(hf::count_points(custom, 2), 27);
}

TEST(SpecJson, ExtensionFieldModulusAndElements) {
  // F_4 = F_2[x]/(x^2 + x + 1); a6 = [1, 0] is the class of x
  auto ec = hf::parse_variety_spec(
      R"({"kind":"weierstrass","base":{"p":2,"r":2,"modulus":[1,1,1]},"a":[1,0,0,0,[1,0]]})");
  EXPECT_EQ(ec.base().modulus_leading_first(), (std::vector<std::uint64_t>{1, 1, 1}));
  const auto& curve = std::get<hf::WeierstrassCurve>(ec.kind());
  EXPECT_EQ(curve.a[4], ec.base().generator());
}

TEST(SpecJson, Errors) {
  EXPECT_EQ(kind_of("{not json"), hf::ErrorKind::SpecParse);
  EXPECT_EQ(kind_of(R"({"kind":"torus"})"), hf::ErrorKind::SpecParse);
  EXPECT_EQ(kind_of(R"({"kind":"projective_space","base":{"p":3}})"), hf::ErrorKind::SpecParse);
  EXPECT_EQ(kind_of(R"({"kind":"weierstrass","base":{"p":5},"a":[0,0,1]})"), hf::ErrorKind::SpecParse);
  EXPECT_EQ(kind_of(R"({"kind":"weierstrass","base":{"p":5},"a":[0,0,0,0,0]})"), hf::ErrorKind::SingularCurve);
  EXPECT_EQ(kind_of(R"({"kind":"projective_space","n":1,"base":{"p":6}})"), hf::ErrorKind::NonPrime);
  EXPECT_EQ(kind_of(R"({"kind":"projective_space","n":1,"base":{"p":2,"r":2,"modulus":[1,0,1]}})"),
            hf::ErrorKind::Reducible);
  EXPECT_EQ(kind_of(R"({"kind":"custom","base":{"p":5},"counts":[9],"betti":[1,2,1]})"),
            hf::ErrorKind::InsufficientCounts);
  EXPECT_EQ(kind_of(R"({"kind":"custom","base":{"p":5},"counts":["9x",1],"betti":[1,2,1]})"), hf::ErrorKind::SpecParse);
  EXPECT_EQ(kind_of(R"({"kind":"product","factors":[{"kind":"projective_space","n":1,"base":{"p":3}}]})"),
            hf::ErrorKind::SpecParse);
}
