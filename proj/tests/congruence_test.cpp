#include <gtest/gtest.h>

#include <vector>

#include "gsa/congruence.hpp"
#include "gsa/mcg.hpp"
#include "gsa/standard_groups.hpp"
#include "oracles.hpp"

using gsa::EpiContext;
using gsa::EpiSet;
using gsa::Mat2;
using gsa::Verdict;

namespace
{

std::size_t
oracle_order(std::vector<Mat2> const &mats, std::int64_t n)
{
  std::vector<std::array<std::int64_t, 4>> gens;
  for (auto const &m : mats)
    gens.push_back({m.a, m.b, m.c, m.d});
  return gsa::oracle::matrix_closure_order(gens, n);
}

struct Components
{
  explicit Components(std::string const &spec)
  : ctx(gsa::resolve_group(spec).group), set(ctx.enumerate()), comps(gsa::decompose_components(ctx, set))
  {
  }

  EpiContext ctx;
  EpiSet set;
  std::vector<gsa::OrbitComponent> comps;
};

Mat2 const T{1, 1, 0, 1};
Mat2 const S{0, -1, 1, 0};

} // namespace

TEST(Congruence, FullGroupOrders)
{
  EXPECT_EQ(gsa::subgroup_order_mod({T, S}, 2), 6);
  EXPECT_EQ(gsa::subgroup_order_mod({T, S}, 4), 48);
  EXPECT_EQ(gsa::subgroup_order_mod({T, S}, 60), 138240);
  for (std::int64_t n : {2, 3, 4, 6, 8, 12, 30})
    EXPECT_EQ(gsa::subgroup_index_mod({T, S}, n), 1u) << n;
}

TEST(Congruence, MatchesMatrixClosure)
{
  std::vector<std::vector<Mat2>> cases{
      {T},
      {S},
      {Mat2{1, 2, 0, 1}, Mat2{1, 0, 2, 1}},
      {Mat2{1, 0, 3, 1}, Mat2{-1, 0, 0, -1}},
      {Mat2{2, 1, 1, 1}},
      {Mat2{1, 4, 0, 1}, Mat2{1, 0, 4, 1}, Mat2{5, 4, 1, 1}},
  };
  for (auto const &mats : cases)
    for (std::int64_t n : {4, 6, 8, 10, 12})
      EXPECT_EQ(gsa::subgroup_order_mod(mats, n), oracle_order(mats, n)) << n;
}

TEST(Congruence, SanovSubgroupIsGammaTwo)
{
  // [[1,2],[0,1]] and [[1,0],[2,1]] together with -I generate Gamma(2), of
  // index 6, whose image mod 2 is trivial and mod 4 has order 8.
  std::vector<Mat2> const gens{{1, 2, 0, 1}, {1, 0, 2, 1}, {-1, 0, 0, -1}};
  EXPECT_EQ(gsa::subgroup_order_mod(gens, 2), 1);
  EXPECT_EQ(gsa::subgroup_index_mod(gens, 2), 6u);
  EXPECT_EQ(gsa::subgroup_order_mod(gens, 4), 8);
}

TEST(Congruence, RejectsNonUnimodular)
{
  EXPECT_THROW(gsa::subgroup_order_mod({Mat2{2, 0, 0, 1}}, 5), gsa::usage_error);
  EXPECT_THROW(gsa::subgroup_order_mod({T}, 1), gsa::usage_error);
  EXPECT_THROW(gsa::subgroup_order_mod({T}, 1024, 1000), gsa::cap_exceeded);
}

TEST(Congruence, DihedralVerdicts)
{
  for (auto spec : {"D:6", "D:8", "D:10", "D:12"}) {
    Components const c(spec);
    for (auto const &comp : c.comps) {
      auto const sig = gsa::signature(comp);
      auto const r = gsa::congruence_verdict(sig, comp);
      EXPECT_EQ(r.verdict, Verdict::Congruence) << spec;
      EXPECT_EQ(r.congruence_deficiency_f, 1u);
    }
  }
  Components const d6("D:6");
  auto const r = gsa::congruence_verdict(gsa::signature(d6.comps[0]), d6.comps[0]);
  EXPECT_EQ(r.modulus, 4u);
  EXPECT_EQ(r.congruence_degree_e, 3u);
}

TEST(Congruence, AbelianGroupsAreCongruence)
{
  for (auto spec : {"Z:2", "Z:5", "Z:8", "Z:2x2", "Z:2x4", "Z:3x3", "Z:4x4", "Z:2x6", "Z:5x5", "Z:6x6"}) {
    Components const c(spec);
    for (auto const &comp : c.comps) {
      auto const sig = gsa::signature(comp);
      auto const r = gsa::congruence_verdict(sig, comp);
      EXPECT_EQ(r.verdict, Verdict::Congruence) << spec;
      EXPECT_EQ(r.congruence_degree_e, sig.d) << spec;
    }
  }
}

TEST(Congruence, NoncongruenceExamples)
{
  for (auto spec : {"Sn:4", "SL2:3", "An:5"}) {
    Components const c(spec);
    for (auto const &comp : c.comps) {
      auto const sig = gsa::signature(comp);
      auto const r = gsa::congruence_verdict(sig, comp);
      EXPECT_EQ(r.verdict, Verdict::Noncongruence) << spec;
      EXPECT_LT(r.congruence_degree_e, sig.d);
      EXPECT_EQ(sig.d % r.congruence_degree_e, 0u);
    }
  }
}

TEST(Congruence, MirrorConventionSameVerdict)
{
  for (auto spec : {"D:8", "Sn:4", "SL2:3"}) {
    Components const c(spec);
    auto const sig = gsa::signature(c.comps[0]);
    auto const a = gsa::congruence_verdict(sig, c.comps[0], gsa::kDefaultCongruenceCap, gsa::Convention::Standard);
    auto const b = gsa::congruence_verdict(sig, c.comps[0], gsa::kDefaultCongruenceCap, gsa::Convention::Mirror);
    EXPECT_EQ(a, b) << spec;
  }
}

TEST(Congruence, CapSkipsExactTest)
{
  Components const c("SL2:3");
  auto const sig = gsa::signature(c.comps[0]);
  auto const r = gsa::congruence_verdict(sig, c.comps[0], 8);
  EXPECT_EQ(r.verdict, Verdict::SkippedCap);
  EXPECT_EQ(r.congruence_degree_e, 0u);
}

TEST(Congruence, VerdictStrings)
{
  for (auto v : {Verdict::Congruence, Verdict::Noncongruence, Verdict::SkippedCap})
    EXPECT_EQ(gsa::verdict_from_string(gsa::to_string(v)), v);
  EXPECT_THROW(gsa::verdict_from_string("maybe"), gsa::usage_error);
}

TEST(CriterionA, PairwiseCoprimeOrders)
{
  // A5 has generating pairs of orders (2, 3, 5).
  EpiContext const ctx(gsa::resolve_group("An:5").group);
  std::size_t fired = 0;
  for (auto const &e : ctx.enumerate()) {
    auto const [x, y] = ctx.pair(e);
    auto const cert = gsa::criterion_A(ctx, e);
    bool const coprime = std::gcd(x.order(), y.order()) == 1 && std::gcd(y.order(), (x * y).order()) == 1 &&
                         std::gcd(x.order(), (x * y).order()) == 1;
    EXPECT_EQ(cert.has_value(), coprime);
    fired += cert.has_value();
  }
  EXPECT_GT(fired, 0u);
}

TEST(CriterionA, NeverFiresOnAbelianOrDihedral)
{
  for (auto spec : {"Z:2x2", "Z:6", "D:6", "D:10"}) {
    EpiContext const ctx(gsa::resolve_group(spec).group);
    for (auto const &e : ctx.enumerate())
      EXPECT_FALSE(gsa::criterion_A(ctx, e).has_value()) << spec;
  }
  EpiContext const trivial(gsa::resolve_group("Sn:1").group);
  EXPECT_FALSE(gsa::criterion_A(trivial, trivial.enumerate().front()).has_value());
}

TEST(MonodromicCertificate, LargeAlternatingOrSymmetric)
{
  gsa::MonodromyInfo mi;
  mi.domain_size = 9;
  mi.classification = gsa::AltSym::Alt;
  EXPECT_TRUE(gsa::monodromic_certificate(mi).has_value());
  mi.classification = gsa::AltSym::Sym;
  mi.domain_size = 18;
  EXPECT_TRUE(gsa::monodromic_certificate(mi).has_value());
  mi.domain_size = 6;
  EXPECT_FALSE(gsa::monodromic_certificate(mi).has_value());
  mi.domain_size = 12;
  mi.classification = gsa::AltSym::Other;
  EXPECT_FALSE(gsa::monodromic_certificate(mi).has_value());
}
