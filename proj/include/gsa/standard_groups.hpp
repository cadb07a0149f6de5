#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perm_group.hpp"
#include "permutation.hpp"
#include "sl2.hpp"
#include "util.hpp"

namespace gsa
{

enum class Family
{
  Sym,
  Alt,
  Dih,
  Cyc,
  ZnSq,
  ZmZn,
  SL2,
  PSL2,
  File
};

enum class AutSource
{
  None,
  Natural,
  File
};

struct GroupSpec
{
  std::string text;
  Family family = Family::Sym;
  std::uint64_t n = 0; // degree, dihedral order, cyclic factor, or prime
  std::uint64_t m = 0; // second cyclic factor
  std::string path;
  AutSource aut_source = AutSource::None;
  std::string aut_path;
};

namespace detail
{

inline std::uint64_t
parse_uint(std::string_view s, std::string const &context)
{
  std::uint64_t v = 0;
  auto const *end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end)
    throw usage_error("expected a positive integer in group spec '" + context + "'");
  return v;
}

} // namespace detail

/// Grammar: Sn:<n> | An:<n> | D:<2k> | Z:<n> | Z:<n>x<m> | SL2:<p> | PSL2:<p> |
/// perm:<path>, optionally followed by @aut=natural or @aut=<path>.
inline GroupSpec
parse_group_spec(std::string const &s)
{
  GroupSpec spec;
  spec.text = s;
  std::string body = s;
  if (auto at = s.find("@aut="); at != std::string::npos) {
    body = s.substr(0, at);
    std::string const src = s.substr(at + 5);
    if (src.empty())
      throw usage_error("empty aut source in group spec '" + s + "'");
    if (src == "natural") {
      spec.aut_source = AutSource::Natural;
    } else {
      spec.aut_source = AutSource::File;
      spec.aut_path = src;
    }
  }

  auto const colon = body.find(':');
  if (colon == std::string::npos)
    throw usage_error("group spec '" + s + "' has no family prefix");
  std::string const fam = body.substr(0, colon);
  std::string const arg = body.substr(colon + 1);

  if (fam == "perm") {
    if (arg.empty())
      throw usage_error("perm: needs a file path");
    spec.family = Family::File;
    spec.path = arg;
    return spec;
  }

  if (fam == "Sn" || fam == "An") {
    spec.family = fam == "Sn" ? Family::Sym : Family::Alt;
    spec.n = detail::parse_uint(arg, s);
    if (spec.n < 1 || (spec.family == Family::Alt && spec.n < 3))
      throw usage_error("degree too small in '" + s + "'");
    return spec;
  }

  if (fam == "D") {
    spec.family = Family::Dih;
    spec.n = detail::parse_uint(arg, s);
    if (spec.n % 2 != 0)
      throw usage_error("dihedral order must be even in '" + s + "'");
    if (spec.n < 4)
      throw usage_error("dihedral order must be at least 4 in '" + s + "'");
    return spec;
  }

  if (fam == "Z") {
    auto const x = arg.find('x');
    if (x == std::string::npos) {
      spec.family = Family::Cyc;
      spec.n = detail::parse_uint(arg, s);
    } else {
      spec.n = detail::parse_uint(std::string_view(arg).substr(0, x), s);
      spec.m = detail::parse_uint(std::string_view(arg).substr(x + 1), s);
      spec.family = spec.n == spec.m ? Family::ZnSq : Family::ZmZn;
    }
    if (spec.n < 1 || (spec.family != Family::Cyc && spec.m < 1))
      throw usage_error("cyclic factors must be positive in '" + s + "'");
    return spec;
  }

  if (fam == "SL2" || fam == "PSL2") {
    spec.family = fam == "SL2" ? Family::SL2 : Family::PSL2;
    spec.n = detail::parse_uint(arg, s);
    if (!detail::is_prime(spec.n))
      throw usage_error("p must be prime in '" + s + "'");
    return spec;
  }

  throw usage_error("unknown group family '" + fam + "'");
}

/// A constructed group with optional outer automorphism generators, given as
/// permutations of the same domain that normalize the group.
struct ResolvedGroup
{
  GroupSpec spec;
  PermGroup group;
  std::optional<std::vector<Permutation>> auts;
};

struct PermFile
{
  std::vector<Permutation> generators;
  std::vector<Permutation> auts;
  bool has_aut_section = false;
};

/// Generator file: one permutation per line in cycle notation, '#' comments,
/// optional trailing section introduced by a line "aut:". The degree is the
/// largest point mentioned anywhere in the file.
inline PermFile
read_perm_file(std::filesystem::path const &path, std::size_t degree = 0)
{
  std::ifstream in(path);
  if (!in)
    throw usage_error("cannot open permutation file " + path.string());

  std::vector<std::string> gen_lines, aut_lines;
  bool in_aut = false;
  PermFile res;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    auto const first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos)
      continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    if (line == "aut:") {
      if (in_aut)
        throw usage_error("duplicate aut: section in " + path.string());
      in_aut = true;
      res.has_aut_section = true;
      continue;
    }
    (in_aut ? aut_lines : gen_lines).push_back(line);
    degree = std::max(degree, Permutation::max_point_in(line));
  }
  if (gen_lines.empty() && !res.has_aut_section)
    throw usage_error("no permutations in " + path.string());
  degree = std::max<std::size_t>(degree, 1);
  for (auto const &l : gen_lines)
    res.generators.push_back(Permutation::from_cycles(l, degree));
  for (auto const &l : aut_lines)
    res.auts.push_back(Permutation::from_cycles(l, degree));
  return res;
}

namespace detail
{

inline Permutation
perm_from_map(std::size_t n, auto &&f)
{
  std::vector<point_t> im(n);
  for (std::size_t i = 0; i < n; ++i)
    im[i] = static_cast<point_t>(f(i));
  return Permutation(std::move(im));
}

inline std::vector<std::uint64_t>
unit_generators(std::uint64_t n)
{
  // All units except 1: small moduli only, so no need for a minimal set.
  std::vector<std::uint64_t> res;
  for (std::uint64_t a = 2; a < n; ++a)
    if (std::gcd(a, n) == 1)
      res.push_back(a);
  return res;
}

struct Built
{
  std::vector<Permutation> gens;
  std::optional<std::vector<Permutation>> natural_auts;
};

inline Built
build_family(GroupSpec const &spec)
{
  Built b;
  auto const n = spec.n;
  switch (spec.family) {
  case Family::Sym: {
    if (n == 1) {
      b.gens = {Permutation(1)};
    } else {
      b.gens = {perm_from_map(n, [](std::size_t i) { return i == 0 ? 1 : i == 1 ? 0 : i; }),
                perm_from_map(n, [n](std::size_t i) { return (i + 1) % n; })};
    }
    b.natural_auts = std::vector<Permutation>{};
    break;
  }
  case Family::Alt: {
    auto three = perm_from_map(n, [](std::size_t i) { return i < 3 ? (i + 1) % 3 : i; });
    Permutation cycle = n % 2 == 1
                            ? perm_from_map(n, [n](std::size_t i) { return (i + 1) % n; })
                            : perm_from_map(n, [n](std::size_t i) {
                                return i == 0 ? 0 : (i == n - 1 ? 1 : i + 1);
                              });
    b.gens = {three, cycle};
    b.natural_auts = std::vector<Permutation>{
        perm_from_map(n, [](std::size_t i) { return i == 0 ? 1 : i == 1 ? 0 : i; })};
    break;
  }
  case Family::Dih: {
    // Regular action: r^i is point i and r^i s is point k + i. Every
    // automorphism r -> r^a, s -> r^b s then permutes the points and
    // normalizes the group, including the outer ones for even k.
    std::uint64_t const k = n / 2;
    auto reg = [k](std::size_t i, std::uint64_t rot, bool refl) -> std::size_t {
      // left multiplication by r^rot s^refl
      std::uint64_t const e = i / k, j = i % k;
      if (!refl)
        return e * k + (j + rot) % k;
      return (1 - e) * k + (rot + k - j) % k;
    };
    b.gens = {perm_from_map(2 * k, [&](std::size_t i) { return reg(i, 1, false); }),
              perm_from_map(2 * k, [&](std::size_t i) { return reg(i, 0, true); })};
    auto affine = [k](std::uint64_t a, std::uint64_t shift) {
      return perm_from_map(2 * k, [=](std::size_t i) -> std::size_t {
        std::uint64_t const e = i / k, j = i % k;
        return e * k + (a * j + e * shift) % k;
      });
    };
    std::vector<Permutation> auts{affine(1, 1)};
    for (auto a : unit_generators(k))
      auts.push_back(affine(a, 0));
    b.natural_auts = auts;
    break;
  }
  case Family::Cyc: {
    if (n == 1) {
      b.gens = {Permutation(1)};
      b.natural_auts = std::vector<Permutation>{};
      break;
    }
    b.gens = {perm_from_map(n, [n](std::size_t i) { return (i + 1) % n; })};
    std::vector<Permutation> auts;
    for (auto a : unit_generators(n))
      auts.push_back(perm_from_map(n, [a, n](std::size_t i) { return a * i % n; }));
    b.natural_auts = auts;
    break;
  }
  case Family::ZnSq:
  case Family::ZmZn: {
    std::uint64_t const m = spec.m;
    std::size_t const deg = n * m;
    // (a, b) with a mod n, b mod m sits at a * m + b.
    b.gens = {perm_from_map(deg, [n, m](std::size_t i) { return ((i / m + 1) % n) * m + i % m; }),
              perm_from_map(deg, [m](std::size_t i) { return (i / m) * m + (i % m + 1) % m; })};
    if (deg == 1)
      b.gens = {Permutation(1)};
    if (spec.family == Family::ZnSq) {
      std::vector<Permutation> auts;
      if (n > 1) {
        // GL_2(Z/n) is generated by an elementary matrix, the swap and the
        // diagonal units.
        auts.push_back(perm_from_map(deg, [n](std::size_t i) {
          return ((i / n + i % n) % n) * n + i % n;
        }));
        auts.push_back(perm_from_map(deg, [n](std::size_t i) { return (i % n) * n + i / n; }));
        for (auto a : unit_generators(n))
          auts.push_back(perm_from_map(deg, [a, n](std::size_t i) {
            return (a * (i / n) % n) * n + i % n;
          }));
      }
      b.natural_auts = auts;
    }
    break;
  }
  case Family::SL2: {
    auto const p = static_cast<std::int64_t>(n);
    b.gens = {vector_action({1, 1, 0, 1}, p), vector_action({1, 0, 1, 1}, p)};
    std::vector<Permutation> auts;
    if (p > 2)
      auts.push_back(vector_action({primitive_root(p), 0, 0, 1}, p));
    b.natural_auts = auts;
    break;
  }
  case Family::PSL2: {
    auto const p = static_cast<std::int64_t>(n);
    b.gens = {projective_action({1, 1, 0, 1}, p), projective_action({1, 0, 1, 1}, p)};
    std::vector<Permutation> auts;
    if (p > 2)
      auts.push_back(projective_action({primitive_root(p), 0, 0, 1}, p));
    b.natural_auts = auts;
    break;
  }
  case Family::File: {
    auto f = read_perm_file(spec.path);
    if (f.generators.empty())
      throw usage_error("no generators in " + spec.path);
    b.gens = std::move(f.generators);
    if (f.has_aut_section)
      b.natural_auts = std::move(f.auts);
    break;
  }
  }
  return b;
}

} // namespace detail

inline PermGroup
standard_groups(GroupSpec const &spec)
{
  return build_group(detail::build_family(spec).gens);
}

/// Throws usage_error unless every element of `auts` normalizes G.
inline void
check_normalizes(PermGroup const &G, std::vector<Permutation> const &auts)
{
  for (auto const &a : auts) {
    if (a.degree() != G.degree())
      throw usage_error("automorphism degree does not match the group");
    for (auto const &g : G.generators())
      if (!G.contains(conjugate(g, a)))
        throw usage_error("automorphism " + a.to_cycles() + " does not normalize the group");
  }
}

inline ResolvedGroup
resolve_group(GroupSpec const &spec)
{
  auto built = detail::build_family(spec);
  ResolvedGroup res{spec, build_group(std::move(built.gens)), std::nullopt};
  switch (spec.aut_source) {
  case AutSource::None:
    break;
  case AutSource::Natural:
    if (!built.natural_auts)
      throw usage_error("no natural automorphisms known for '" + spec.text + "'");
    res.auts = std::move(built.natural_auts);
    break;
  case AutSource::File: {
    auto f = read_perm_file(spec.aut_path, res.group.degree());
    auto auts = f.generators;
    auts.insert(auts.end(), f.auts.begin(), f.auts.end());
    for (auto const &a : auts)
      if (a.degree() != res.group.degree())
        throw usage_error("automorphism file mentions points outside the group's domain");
    res.auts = std::move(auts);
    break;
  }
  }
  if (res.auts)
    check_normalizes(res.group, *res.auts);
  return res;
}

inline ResolvedGroup
resolve_group(std::string const &text)
{
  return resolve_group(parse_group_spec(text));
}

} // namespace gsa
