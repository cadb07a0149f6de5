#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "epi.hpp"
#include "mcg.hpp"
#include "sl2.hpp"
#include "standard_groups.hpp"
#include "util.hpp"

namespace gsa
{

/// A nonzero F_p-point of x^2 + y^2 + z^2 - xyz = 0.
struct MarkoffTriple
{
  std::uint32_t x = 0, y = 0, z = 0;

  friend bool
  operator==(MarkoffTriple const &, MarkoffTriple const &) = default;

  friend auto
  operator<=>(MarkoffTriple const &, MarkoffTriple const &) = default;
};

enum class MarkoffMove
{
  R3,    // (x, y, z) -> (x, y, xy - z)
  Tau12, // (x, y, z) -> (y, x, z)
  Tau23  // (x, y, z) -> (x, z, y)
};

inline constexpr MarkoffMove kMarkoffMoves[] = {MarkoffMove::R3, MarkoffMove::Tau12, MarkoffMove::Tau23};

/// Each move abelianizes to a matrix of determinant -1 (R3 and both
/// transpositions come from orientation-reversing automorphisms), so the
/// orientation-preserving subgroup consists of the even-length words.
inline constexpr int kMarkoffMoveDeterminant = -1;

namespace detail
{

inline constexpr std::uint64_t kMarkoffPrimeLimit = std::uint64_t{1} << 21;

inline void
check_markoff_prime(std::uint64_t p)
{
  if (p == 2 || !is_prime(p))
    throw usage_error("Markoff module needs an odd prime, got " + std::to_string(p));
  if (p >= kMarkoffPrimeLimit)
    throw cap_exceeded("p must be below 2^21");
}

inline std::uint64_t
pack(MarkoffTriple const &t)
{
  return (std::uint64_t{t.x} << 42) | (std::uint64_t{t.y} << 21) | t.z;
}

inline MarkoffTriple
unpack(std::uint64_t v)
{
  constexpr std::uint64_t mask = (std::uint64_t{1} << 21) - 1;
  return {static_cast<std::uint32_t>(v >> 42), static_cast<std::uint32_t>((v >> 21) & mask),
          static_cast<std::uint32_t>(v & mask)};
}

} // namespace detail

inline bool
on_markoff_surface(MarkoffTriple const &t, std::uint64_t p)
{
  std::uint64_t const x = t.x, y = t.y, z = t.z;
  std::uint64_t const lhs = (x * x + y * y + z * z) % p;
  return lhs == x * y % p * z % p;
}

inline MarkoffTriple
apply_markoff_move(MarkoffTriple const &t, MarkoffMove m, std::uint64_t p)
{
  switch (m) {
  case MarkoffMove::R3:
    return {t.x, t.y, static_cast<std::uint32_t>((std::uint64_t{t.x} * t.y % p + p - t.z) % p)};
  case MarkoffMove::Tau12:
    return {t.y, t.x, t.z};
  case MarkoffMove::Tau23:
    return {t.x, t.z, t.y};
  }
  return t;
}

/// All points of X*(p), sorted. For each (x, y) the equation is a quadratic
/// in z with discriminant (xy)^2 - 4(x^2 + y^2); roots come from a table of
/// square roots.
inline std::vector<MarkoffTriple>
markoff_points(std::uint64_t p, unsigned threads = 1)
{
  detail::check_markoff_prime(p);
  constexpr std::uint32_t none = ~std::uint32_t{0};
  std::vector<std::uint32_t> root(p, none);
  for (std::uint64_t s = 0; s < p; ++s)
    root[s * s % p] = static_cast<std::uint32_t>(std::min(s, p - s));
  std::uint64_t const half = (p + 1) / 2;

  std::vector<std::vector<MarkoffTriple>> stripes(p);
  parallel_for(p, threads, [&](std::size_t xi) {
    std::uint64_t const x = xi;
    auto &out = stripes[xi];
    for (std::uint64_t y = 0; y < p; ++y) {
      std::uint64_t const xy = x * y % p;
      std::uint64_t const disc = (xy * xy % p + 4 * (p - (x * x + y * y) % p)) % p;
      std::uint32_t const s = root[disc];
      if (s == none)
        continue;
      std::uint64_t const z1 = (xy + s) % p * half % p;
      std::uint64_t const z2 = (xy + p - s) % p * half % p;
      for (auto z : {std::min(z1, z2), std::max(z1, z2)}) {
        if (x == 0 && y == 0 && z == 0)
          continue;
        MarkoffTriple const t{static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y),
                              static_cast<std::uint32_t>(z)};
        if (out.empty() || out.back() != t)
          out.push_back(t);
      }
    }
  });

  std::vector<MarkoffTriple> res;
  for (auto &s : stripes)
    res.insert(res.end(), s.begin(), s.end());
  return res;
}

struct MarkoffReport
{
  std::uint64_t p = 0;
  std::uint64_t point_count = 0;
  std::vector<std::uint64_t> out_orbit_sizes;
  std::vector<std::uint64_t> out_plus_orbit_sizes;
  bool transitive_out = false;
  bool strong_approx = false;
  bool divisibility_ok = true;

  std::uint64_t
  max_orbit() const
  {
    return out_orbit_sizes.empty() ? 0 : out_orbit_sizes.back();
  }
};

/// Orbits of <R3, Tau12, Tau23> (Out) and of its even-word subgroup (Out+).
/// Out+ orbits come from a traversal of (point, sign) states in which every
/// move flips the sign.
inline MarkoffReport
markoff_orbits(std::uint64_t p, unsigned threads = 1)
{
  auto const pts = markoff_points(p, threads);
  std::size_t const n = pts.size();
  std::vector<std::uint64_t> keys(n);
  for (std::size_t i = 0; i < n; ++i)
    keys[i] = detail::pack(pts[i]);

  auto index_of = [&](MarkoffTriple const &t) {
    auto it = std::lower_bound(keys.begin(), keys.end(), detail::pack(t));
    if (it == keys.end() || *it != detail::pack(t))
      throw consistency_error("Markoff move left the surface");
    return static_cast<std::uint32_t>(it - keys.begin());
  };

  std::vector<std::array<std::uint32_t, 3>> nbr(n);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t k = 0; k < 3; ++k)
      nbr[i][k] = index_of(apply_markoff_move(pts[i], kMarkoffMoves[k], p));
  });

  MarkoffReport r;
  r.p = p;
  r.point_count = n;

  std::vector<bool> seen(n, false);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (seen[s])
      continue;
    seen[s] = true;
    queue.assign(1, s);
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (auto t : nbr[queue[q]])
        if (!seen[t]) {
          seen[t] = true;
          queue.push_back(t);
        }
    r.out_orbit_sizes.push_back(queue.size());
  }

  // State 2i is (i, +), 2i + 1 is (i, -).
  std::vector<bool> seen2(2 * n, false);
  for (std::uint32_t s = 0; s < n; ++s) {
    if (seen2[2 * s])
      continue;
    seen2[2 * s] = true;
    queue.assign(1, 2 * s);
    std::uint64_t plus = 0;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      std::uint32_t const st = queue[q];
      plus += (st & 1u) == 0;
      for (auto t : nbr[st / 2]) {
        std::uint32_t const next = 2 * t + ((st & 1u) ^ 1u);
        if (!seen2[next]) {
          seen2[next] = true;
          queue.push_back(next);
        }
      }
    }
    r.out_plus_orbit_sizes.push_back(plus);
  }

  std::sort(r.out_orbit_sizes.begin(), r.out_orbit_sizes.end());
  std::sort(r.out_plus_orbit_sizes.begin(), r.out_plus_orbit_sizes.end());
  r.transitive_out = n > 0 && r.out_orbit_sizes.size() == 1;
  for (auto s : r.out_plus_orbit_sizes)
    r.divisibility_ok = r.divisibility_ok && s % p == 0;
  r.strong_approx = r.transitive_out && p != 3;
  return r;
}

struct StrongApproximation
{
  bool holds = false;
  std::string narrative;
};

/// Transitivity on X*(p) together with the integral point (3, 3, 3), which
/// is nonzero mod p for p != 3, makes reduction of integral points onto.
inline StrongApproximation
strong_approximation_report(std::uint64_t p, unsigned threads = 1)
{
  if (p == 2 || p == 3)
    throw usage_error("strong approximation report needs p >= 5");
  auto const r = markoff_orbits(p, threads);
  StrongApproximation sa;
  sa.holds = r.transitive_out && 3 % p != 0;
  if (sa.holds)
    sa.narrative = "Out acts transitively on all " + std::to_string(r.point_count) +
                   " points and (3,3,3) reduces into X*(" + std::to_string(p) +
                   "), so X(Z) -> X*(F_p) is surjective";
  else
    sa.narrative = "Out has " + std::to_string(r.out_orbit_sizes.size()) + " orbits on X*(" +
                   std::to_string(p) + "); surjectivity is not established";
  return sa;
}

struct TraceCrosscheck
{
  std::uint64_t markoff_count = 0;
  std::uint64_t epi_trace_count = 0;
};

inline constexpr std::uint64_t kCrosscheckPrimeLimit = 13;

/// Matrix of an element of SL_2(F_p) in the vector action, read off from
/// the images of e1 and e2.
inline Mat2
matrix_from_vector_action(std::span<point_t const> im, std::int64_t p)
{
  auto coords = [p](point_t v) {
    std::int64_t const k = static_cast<std::int64_t>(v) + 1;
    return std::pair{k / p, k % p};
  };
  auto const [a, c] = coords(im[vector_index(1, 0, p)]);
  auto const [b, d] = coords(im[vector_index(0, 1, p)]);
  return {a, b, c, d};
}

/// Counts GL_2(F_p)-classes of generating pairs (A, B) of SL_2(F_p) with
/// tr(B A B^-1 A^-1) = -2 and compares with |X*(p)|.
inline TraceCrosscheck
crosscheck_epi_bijection(std::uint64_t p, unsigned threads = 1)
{
  detail::check_markoff_prime(p);
  if (p > kCrosscheckPrimeLimit)
    throw usage_error("crosscheck is brute force and limited to p <= " + std::to_string(kCrosscheckPrimeLimit));

  TraceCrosscheck res;
  res.markoff_count = markoff_points(p, threads).size();

  auto const G = resolve_group("SL2:" + std::to_string(p) + "@aut=natural");
  EpiOptions opts;
  opts.threads = threads;
  EpiContext const ctx(G.group, opts);
  EpiSet const set(ctx.enumerate(opts));
  auto const &t = ctx.table();
  auto const pi = static_cast<std::int64_t>(p);

  std::vector<bool> keep(set.size(), false);
  for (std::uint32_t i = 0; i < set.size(); ++i) {
    auto const h = ctx.higman_invariant(set[i]);
    Mat2 const comm = matrix_from_vector_action(t.images(t.class_rep(h.class_index)), pi);
    keep[i] = detail::mod(comm.a + comm.d, pi) == detail::mod(-2, pi);
  }

  std::vector<std::vector<std::uint32_t>> actions;
  for (auto const &a : *G.auts)
    actions.push_back(aut_action(ctx, set, a));

  std::vector<bool> seen(set.size(), false);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t s = 0; s < set.size(); ++s) {
    if (!keep[s] || seen[s])
      continue;
    ++res.epi_trace_count;
    seen[s] = true;
    queue.assign(1, s);
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (auto const &act : actions) {
        auto const r = act[queue[q]];
        if (!keep[r])
          throw consistency_error("automorphism changed the commutator trace");
        if (!seen[r]) {
          seen[r] = true;
          queue.push_back(r);
        }
      }
  }
  return res;
}

} // namespace gsa
