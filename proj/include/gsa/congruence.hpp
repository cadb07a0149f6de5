#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "epi.hpp"
#include "mcg.hpp"
#include "perm_group.hpp"
#include "sl2.hpp"
#include "util.hpp"

namespace gsa
{

enum class Verdict
{
  Congruence,
  Noncongruence,
  SkippedCap
};

inline char const *
to_string(Verdict v)
{
  switch (v) {
  case Verdict::Congruence:
    return "congruence";
  case Verdict::Noncongruence:
    return "noncongruence";
  case Verdict::SkippedCap:
    return "skipped_cap";
  }
  return "?";
}

inline Verdict
verdict_from_string(std::string const &s)
{
  if (s == "congruence")
    return Verdict::Congruence;
  if (s == "noncongruence")
    return Verdict::Noncongruence;
  if (s == "skipped_cap")
    return Verdict::SkippedCap;
  throw usage_error("unknown verdict '" + s + "'");
}

inline constexpr char const *kCertificateA = "totally noncongruence (criterion A)";
inline constexpr char const *kCertificateMonodromic = "noncongruence (monodromic)";

struct CongruenceReport
{
  std::uint64_t level_l = 1;
  std::uint64_t modulus = 2;
  std::uint64_t index_d = 1;
  std::uint64_t congruence_degree_e = 0;     // 0 when skipped
  std::uint64_t congruence_deficiency_f = 0; // 0 when skipped
  Verdict verdict = Verdict::SkippedCap;
  bool totally_noncongruence = false;
  std::vector<std::string> certificates;

  friend bool
  operator==(CongruenceReport const &, CongruenceReport const &) = default;
};

inline constexpr std::size_t kDefaultDegreeCap = std::size_t{1} << 18;
inline constexpr std::uint64_t kDefaultCongruenceCap = 512;

/// Order of the subgroup of SL_2(Z/n) generated by the reductions of mats,
/// from its faithful action on the nonzero vectors of (Z/n)^2.
inline BigInt
subgroup_order_mod(std::vector<Mat2> const &mats, std::int64_t n, std::size_t degree_cap = kDefaultDegreeCap)
{
  if (n < 2)
    throw usage_error("modulus must be at least 2");
  if (static_cast<std::size_t>(n) * static_cast<std::size_t>(n) - 1 > degree_cap)
    throw cap_exceeded("vector action of degree " + std::to_string(n * n - 1) + " exceeds the degree cap");

  std::set<Mat2> distinct;
  for (auto const &m : mats) {
    Mat2 const r = reduce(m, n);
    if (detail::mod(r.det(), n) != 1 % n)
      throw usage_error("matrix " + m.str() + " does not have determinant 1 mod " + std::to_string(n));
    if (r != reduce(Mat2{}, n))
      distinct.insert(r);
  }
  if (distinct.empty())
    return 1;

  // e1 = (1, 0) and e2 = (0, 1) form a base of the linear action. Generators
  // are added one at a time and only when they are not already members, so
  // the chain never holds more than about log2 |group| of them.
  BuildOptions opts;
  opts.known_base = {vector_index(1, 0, n), vector_index(0, 1, n)};
  std::vector<Permutation> gens;
  PermGroup H;
  for (auto const &m : distinct) {
    Permutation p = vector_action(m, n);
    if (!gens.empty() && H.contains(p))
      continue;
    gens.push_back(std::move(p));
    H = PermGroup::build(gens, opts);
  }
  return H.order();
}

/// [SL_2(Z/n) : image of <mats>].
inline std::uint64_t
subgroup_index_mod(std::vector<Mat2> const &mats, std::int64_t n, std::size_t degree_cap = kDefaultDegreeCap)
{
  BigInt const full = sl2_group_order_mod(static_cast<std::uint64_t>(n));
  BigInt const sub = subgroup_order_mod(mats, n, degree_cap);
  if (full % sub != 0)
    throw consistency_error("subgroup order does not divide |SL_2(Z/n)|");
  return static_cast<std::uint64_t>(full / sub);
}

/// Exact test: Gamma is congruence iff its image mod 2l has index d.
/// `mats` generate Gamma; entries may be exact or already reduced mod 2l.
inline CongruenceReport
congruence_verdict(Signature const &sig, std::vector<Mat2> const &mats,
                   std::uint64_t cap = kDefaultCongruenceCap, std::size_t degree_cap = kDefaultDegreeCap)
{
  CongruenceReport r;
  r.level_l = sig.level;
  r.modulus = 2 * sig.level;
  r.index_d = sig.d;
  if (r.modulus > cap) {
    r.verdict = Verdict::SkippedCap;
    return r;
  }
  std::uint64_t const e = subgroup_index_mod(mats, static_cast<std::int64_t>(r.modulus), degree_cap);
  if (e == 0 || sig.d % e != 0)
    throw consistency_error("congruence degree " + std::to_string(e) + " does not divide index " +
                            std::to_string(sig.d));
  r.congruence_degree_e = e;
  r.congruence_deficiency_f = sig.d / e;
  r.verdict = e == sig.d ? Verdict::Congruence : Verdict::Noncongruence;
  r.totally_noncongruence = e == 1 && sig.d > 1;
  return r;
}

/// Convenience form computing the generators mod 2l from the component.
inline CongruenceReport
congruence_verdict(Signature const &sig, OrbitComponent const &c, std::uint64_t cap = kDefaultCongruenceCap,
                   Convention conv = Convention::Standard)
{
  if (2 * sig.level > cap)
    return congruence_verdict(sig, std::vector<Mat2>{}, cap);
  return congruence_verdict(sig, stabilizer_matrices_mod(c, static_cast<std::int64_t>(2 * sig.level), conv),
                            cap);
}

/// Certificate when |x|, |y| and |(xy)^-1| are pairwise coprime in a
/// nontrivial group.
inline std::optional<std::string>
criterion_A(EpiContext const &ctx, EpiClass const &e)
{
  if (ctx.group().order() == 1)
    return std::nullopt;
  auto const [x, y] = ctx.pair(e);
  std::uint64_t const a = x.order(), b = y.order(), c = (x * y).order();
  if (std::gcd(a, b) == 1 && std::gcd(b, c) == 1 && std::gcd(a, c) == 1)
    return std::string(kCertificateA);
  return std::nullopt;
}

/// Alt(m) or Sym(m) with m >= 9 as monodromy: Alt(m) is then neither cyclic
/// of prime order nor some PSL_2(F_p), which a congruence subgroup of level
/// l would require of its composition factors.
inline std::optional<std::string>
monodromic_certificate(MonodromyInfo const &mi, std::uint64_t /*level*/ = 0)
{
  if ((mi.classification == AltSym::Alt || mi.classification == AltSym::Sym) && mi.domain_size >= 9)
    return std::string(kCertificateMonodromic);
  return std::nullopt;
}

} // namespace gsa
