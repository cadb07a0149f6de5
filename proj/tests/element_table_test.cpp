#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "gsa/element_table.hpp"
#include "gsa/standard_groups.hpp"
#include "oracles.hpp"

using gsa::ElementTable;
using gsa::Permutation;

namespace
{

std::vector<std::size_t>
sorted_sizes(ElementTable const &t)
{
  std::vector<std::size_t> res;
  for (auto const &c : t.classes())
    res.push_back(c.size);
  std::sort(res.begin(), res.end());
  return res;
}

std::vector<Permutation>
all_elements(ElementTable const &t)
{
  std::vector<Permutation> res;
  for (std::uint32_t i = 0; i < t.size(); ++i)
    res.push_back(t.element(i));
  return res;
}

ElementTable
table_of(char const *spec)
{
  return ElementTable::build(gsa::resolve_group(spec).group);
}

} // namespace

TEST(ElementTable, SymmetricThreeClasses)
{
  auto const t = table_of("Sn:3");
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(sorted_sizes(t), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_TRUE(t.element(0).is_identity());
}

TEST(ElementTable, SL2F3HasSevenClasses)
{
  auto const t = table_of("SL2:3");
  EXPECT_EQ(t.size(), 24u);
  EXPECT_EQ(t.classes().size(), 7u);
}

TEST(ElementTable, D10HasFourClasses)
{
  EXPECT_EQ(table_of("D:10").classes().size(), 4u);
}

TEST(ElementTable, ClassEquationMatchesOracle)
{
  for (auto spec : {"Sn:4", "An:5", "D:12", "SL2:3", "PSL2:7", "Z:3x3"}) {
    auto const t = table_of(spec);
    EXPECT_EQ(sorted_sizes(t), gsa::oracle::class_sizes(all_elements(t))) << spec;
  }
}

TEST(ElementTable, ElementsSortedAndIndexed)
{
  auto const t = table_of("An:5");
  for (std::uint32_t i = 0; i + 1 < t.size(); ++i)
    EXPECT_LT(t.element(i), t.element(i + 1));
  for (std::uint32_t i = 0; i < t.size(); ++i)
    EXPECT_EQ(t.index_of(t.element(i)), i);
  EXPECT_EQ(t.index_of(Permutation::from_cycles("(1 2)", 5)), ElementTable::npos);
}

TEST(ElementTable, ToRepConjugatesIntoRepresentative)
{
  auto const t = table_of("Sn:4");
  for (std::uint32_t i = 0; i < t.size(); ++i) {
    auto const c = t.class_of(i);
    EXPECT_EQ(gsa::conjugate(t.element(i), t.element(t.to_rep(i))), t.classes()[c].representative);
    EXPECT_EQ(t.element(t.class_rep(c)), t.classes()[c].representative);
  }
}

TEST(ElementTable, IndexArithmetic)
{
  auto const t = table_of("PSL2:7");
  for (std::uint32_t a = 0; a < t.size(); a += 7)
    for (std::uint32_t b = 0; b < t.size(); b += 11) {
      EXPECT_EQ(t.element(t.product_index(a, b)), t.element(a) * t.element(b));
      EXPECT_EQ(t.element(t.conjugate_index(a, b)), gsa::conjugate(t.element(a), t.element(b)));
    }
  for (std::uint32_t a = 0; a < t.size(); ++a)
    EXPECT_EQ(t.element(t.inverse_index(a)), t.element(a).inverse());
}

TEST(ElementTable, CentralizerOrdersMatchBruteForce)
{
  auto const t = table_of("Sn:5");
  for (std::uint32_t i = 0; i < t.size(); i += 5) {
    auto const x = t.element(i);
    std::size_t brute = 0;
    for (std::uint32_t j = 0; j < t.size(); ++j)
      brute += x * t.element(j) == t.element(j) * x;
    auto const C = gsa::centralizer(t, x);
    EXPECT_EQ(C.order(), brute);
    for (auto const &g : C.generators())
      EXPECT_EQ(x * g, g * x);
  }
}

TEST(ElementTable, CentralizerOrbitMinimaAreOrbitMinima)
{
  auto const t = table_of("Sn:4");
  for (std::size_t c = 0; c < t.classes().size(); ++c) {
    auto const rep = t.classes()[c].representative;
    for (std::uint32_t y = 0; y < t.size(); ++y) {
      std::uint32_t least = y;
      for (std::uint32_t g = 0; g < t.size(); ++g)
        if (t.element(g) * rep == rep * t.element(g))
          least = std::min(least, t.conjugate_index(y, g));
      EXPECT_EQ(t.centralizer_orbit_min(c, y), least);
    }
  }
}

TEST(ElementTable, LabelsFollowOrder)
{
  auto const t = table_of("An:5");
  std::set<std::string> labels;
  for (auto const &c : t.classes())
    labels.insert(c.label);
  EXPECT_EQ(labels, (std::set<std::string>{"1A", "2A", "3A", "5A", "5B"}));
}

TEST(ElementTable, CapIsEnforced)
{
  EXPECT_THROW(ElementTable::build(gsa::resolve_group("Sn:8").group, 1000), gsa::cap_exceeded);
}
