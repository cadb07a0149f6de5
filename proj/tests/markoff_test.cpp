#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gsa/markoff.hpp"

using gsa::MarkoffMove;
using gsa::MarkoffTriple;

namespace
{

// Direct count of nonzero solutions, independent of the square-root table.
std::uint64_t
brute_count(std::uint64_t p)
{
  std::uint64_t n = 0;
  for (std::uint64_t x = 0; x < p; ++x)
    for (std::uint64_t y = 0; y < p; ++y)
      for (std::uint64_t z = 0; z < p; ++z)
        if ((x || y || z) && (x * x + y * y + z * z) % p == x * y % p * z % p)
          ++n;
  return n;
}

} // namespace

TEST(Markoff, PointCountsMatchBruteForce)
{
  for (std::uint64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31})
    EXPECT_EQ(gsa::markoff_points(p).size(), brute_count(p)) << p;
}

TEST(Markoff, PointCountFormula)
{
  for (std::uint64_t p = 5; p < 200; ++p) {
    if (!gsa::detail::is_prime(p))
      continue;
    std::uint64_t const expected = p % 4 == 1 ? p * (p + 3) : p * (p - 3);
    EXPECT_EQ(gsa::markoff_points(p).size(), expected) << p;
  }
}

TEST(Markoff, PointsAreSortedAndOnSurface)
{
  auto const pts = gsa::markoff_points(43);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_TRUE(gsa::on_markoff_surface(pts[i], 43));
    if (i > 0)
      EXPECT_LT(pts[i - 1], pts[i]);
  }
}

TEST(Markoff, MovesAreInvolutionsPreservingTheEquation)
{
  std::mt19937_64 rng(7);
  for (std::uint64_t p : {5, 7, 13, 101, 199}) {
    auto const pts = gsa::markoff_points(p);
    for (int k = 0; k < 200; ++k) {
      auto const t = pts[rng() % pts.size()];
      for (auto m : gsa::kMarkoffMoves) {
        auto const s = gsa::apply_markoff_move(t, m, p);
        EXPECT_TRUE(gsa::on_markoff_surface(s, p));
        EXPECT_EQ(gsa::apply_markoff_move(s, m, p), t);
      }
    }
  }
}

TEST(Markoff, VietaMoveExample)
{
  // (3, 3, 3) -> (3, 3, 9 - 3) over the integers, reduced mod 7.
  EXPECT_EQ(gsa::apply_markoff_move({3, 3, 3}, MarkoffMove::R3, 7), (MarkoffTriple{3, 3, 6}));
  EXPECT_EQ(gsa::apply_markoff_move({1, 2, 3}, MarkoffMove::Tau12, 7), (MarkoffTriple{2, 1, 3}));
  EXPECT_EQ(gsa::apply_markoff_move({1, 2, 3}, MarkoffMove::Tau23, 7), (MarkoffTriple{1, 3, 2}));
}

TEST(Markoff, SmallPrimes)
{
  auto const r3 = gsa::markoff_orbits(3);
  EXPECT_EQ(r3.point_count, 0u);
  EXPECT_FALSE(r3.transitive_out);

  auto const r5 = gsa::markoff_orbits(5);
  EXPECT_EQ(r5.point_count, 40u);
  EXPECT_TRUE(r5.transitive_out);
  auto const r7 = gsa::markoff_orbits(7);
  EXPECT_EQ(r7.point_count, 28u);
  EXPECT_TRUE(r7.transitive_out);
}

TEST(Markoff, OrbitSizesSumToPointCount)
{
  for (std::uint64_t p : {5, 7, 11, 13, 37, 61}) {
    auto const r = gsa::markoff_orbits(p);
    std::uint64_t out = 0, plus = 0;
    for (auto s : r.out_orbit_sizes)
      out += s;
    for (auto s : r.out_plus_orbit_sizes)
      plus += s;
    EXPECT_EQ(out, r.point_count);
    EXPECT_EQ(plus, r.point_count);
    EXPECT_TRUE(r.divisibility_ok);
  }
}

TEST(Markoff, ThreadCountDoesNotMatter)
{
  auto const a = gsa::markoff_orbits(97, 1);
  auto const b = gsa::markoff_orbits(97, 4);
  EXPECT_EQ(a.out_orbit_sizes, b.out_orbit_sizes);
  EXPECT_EQ(a.out_plus_orbit_sizes, b.out_plus_orbit_sizes);
}

TEST(Markoff, InvalidPrimes)
{
  EXPECT_THROW(gsa::markoff_points(2), gsa::usage_error);
  EXPECT_THROW(gsa::markoff_points(9), gsa::usage_error);
  EXPECT_THROW(gsa::strong_approximation_report(3), gsa::usage_error);
}

TEST(Markoff, StrongApproximation)
{
  auto const sa = gsa::strong_approximation_report(11);
  EXPECT_TRUE(sa.holds);
  EXPECT_FALSE(sa.narrative.empty());
}

TEST(Markoff, TraceCrosscheck)
{
  for (auto [p, count] : {std::pair{3u, 0u}, std::pair{5u, 40u}, std::pair{7u, 28u}}) {
    auto const c = gsa::crosscheck_epi_bijection(p);
    EXPECT_EQ(c.markoff_count, count) << p;
    EXPECT_EQ(c.epi_trace_count, count) << p;
  }
  EXPECT_THROW(gsa::crosscheck_epi_bijection(17), gsa::usage_error);
}

TEST(Markoff, MatrixFromVectorAction)
{
  gsa::Mat2 const m{2, 3, 1, 2};
  auto const perm = gsa::vector_action(m, 5);
  EXPECT_EQ(gsa::matrix_from_vector_action(perm.images(), 5), m);
}
