#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "permutation.hpp"
#include "util.hpp"

namespace gsa
{

struct BuildOptions
{
  /// When nonempty, the caller guarantees that only the identity of the group
  /// fixes these points pointwise (for example the standard basis vectors of a
  /// linear action). Sifting then tracks base images only and the base is
  /// never extended. Membership tests assume the candidate also lies in a
  /// group on which these points form a base.
  std::vector<point_t> known_base;

  /// Stop as soon as the product of basic orbit lengths reaches this value.
  /// That product is a lower bound on the order, so reaching it proves
  /// |group| >= target. The resulting chain is not complete.
  std::optional<BigInt> stop_at_order;
};

/// A permutation group with a base and strong generating set, built by the
/// deterministic Schreier-Sims algorithm. Immutable after construction.
class PermGroup
{
public:
  PermGroup() = default;

  static PermGroup
  build(std::vector<Permutation> generators, BuildOptions const &options = {})
  {
    if (generators.empty())
      throw usage_error("build_group needs at least one generator");
    std::size_t const n = generators.front().degree();
    for (auto const &g : generators)
      if (g.degree() != n)
        throw usage_error("generators have different degrees");

    PermGroup G;
    G.degree_ = n;
    G.generators_ = std::move(generators);
    G.known_base_ = !options.known_base.empty();
    G.schreier_sims(options);
    return G;
  }

  std::size_t
  degree() const
  {
    return degree_;
  }

  std::vector<Permutation> const &
  generators() const
  {
    return generators_;
  }

  std::vector<Permutation> const &
  strong_generators() const
  {
    return strong_;
  }

  std::vector<point_t>
  base() const
  {
    std::vector<point_t> res;
    for (auto const &l : levels_)
      res.push_back(l.base);
    return res;
  }

  std::vector<std::size_t>
  transversal_sizes() const
  {
    std::vector<std::size_t> res;
    for (auto const &l : levels_)
      res.push_back(l.orbit.size());
    return res;
  }

  /// Basic orbit of level i, in discovery order.
  std::span<point_t const>
  basic_orbit(std::size_t i) const
  {
    return levels_[i].orbit;
  }

  BigInt
  order() const
  {
    BigInt res = 1;
    for (auto const &l : levels_)
      res *= l.orbit.size();
    return res;
  }

  /// False when construction stopped early via stop_at_order.
  bool
  complete() const
  {
    return complete_;
  }

  bool
  contains(Permutation const &p) const
  {
    if (p.degree() != degree_)
      throw usage_error("degree mismatch in membership test");
    if (known_base_) {
      // Base images determine the element, so sifting them suffices.
      std::vector<point_t> img(levels_.size());
      for (std::size_t j = 0; j < levels_.size(); ++j)
        img[j] = p[levels_[j].base];
      if (sift_images(img, 0) != levels_.size())
        return false;
      for (std::size_t j = 0; j < levels_.size(); ++j)
        if (img[j] != levels_[j].base)
          return false;
      return true;
    }
    std::vector<point_t> h(p.images().begin(), p.images().end());
    return sift_full(h, 0) == levels_.size() && is_identity(h);
  }

  /// Coset representative u with u(base_i) == beta.
  Permutation
  coset_rep(std::size_t level, point_t beta) const
  {
    auto const &l = levels_[level];
    if (l.label[beta] == kNotInOrbit)
      throw usage_error("point not in basic orbit");
    return Permutation::unchecked(rep_images(l, beta));
  }

  /// Calls fn(const Permutation&) once for every element of the group.
  template<typename Fn>
  void
  for_each_element(Fn &&fn) const
  {
    std::vector<std::vector<Permutation>> reps(levels_.size());
    for (std::size_t i = 0; i < levels_.size(); ++i)
      for (auto beta : levels_[i].orbit)
        reps[i].push_back(Permutation::unchecked(rep_images(levels_[i], beta)));

    Permutation id(degree_);
    enumerate_rec(reps, 0, id, fn);
  }

  /// Points in the orbit of `p` under the generators, sorted.
  std::vector<point_t>
  orbit_of(point_t p) const
  {
    return orbit_under(generators_, p, degree_);
  }

  bool
  is_transitive() const
  {
    return degree_ == 0 || orbit_of(0).size() == degree_;
  }

  static std::vector<point_t>
  orbit_under(std::span<Permutation const> gens, point_t p, std::size_t degree)
  {
    std::vector<bool> seen(degree, false);
    std::vector<point_t> res{p};
    seen[p] = true;
    for (std::size_t k = 0; k < res.size(); ++k)
      for (auto const &g : gens) {
        point_t const q = g[res[k]];
        if (!seen[q]) {
          seen[q] = true;
          res.push_back(q);
        }
      }
    std::sort(res.begin(), res.end());
    return res;
  }

private:
  static constexpr std::int32_t kNotInOrbit = -1;
  static constexpr std::int32_t kRoot = -2;
  // Above this many stored points per level, coset representatives are
  // recomputed from the Schreier vector instead of being cached.
  static constexpr std::size_t kRepCacheBudget = std::size_t{1} << 22;

  struct Level
  {
    point_t base = 0;
    std::vector<std::uint32_t> gens;  // indices into strong_
    std::vector<std::int32_t> label;  // strong_ index that reached the point
    std::vector<point_t> orbit;
    std::vector<std::uint32_t> position;            // point -> index in orbit
    std::vector<std::vector<point_t>> reps;         // cached u_beta, by orbit index
    std::vector<std::vector<point_t>> reps_inverse; // cached u_beta^-1
    std::vector<point_t> base_images; // known-base mode: u_beta(base_j), by orbit index
    std::size_t verified = 0; // Schreier generators (k * gens + gi) below this sift
  };

  std::size_t degree_ = 0;
  std::vector<Permutation> generators_;
  std::vector<Permutation> strong_;
  std::vector<Permutation> strong_inv_;
  std::vector<Level> levels_;
  bool known_base_ = false;
  bool complete_ = true;

  bool
  is_identity(std::vector<point_t> const &h) const
  {
    for (point_t i = 0; i < h.size(); ++i)
      if (h[i] != i)
        return false;
    return true;
  }

  std::vector<point_t>
  rep_images(Level const &l, point_t beta) const
  {
    if (!l.reps.empty())
      return l.reps[l.position[beta]];
    std::vector<std::uint32_t> word;
    for (point_t b = beta; l.label[b] != kRoot;) {
      auto const s = static_cast<std::uint32_t>(l.label[b]);
      word.push_back(s);
      b = strong_inv_[s][b];
    }
    std::vector<point_t> res(degree_);
    for (point_t i = 0; i < degree_; ++i) {
      point_t x = i;
      for (auto it = word.rbegin(); it != word.rend(); ++it)
        x = strong_[*it][x];
      res[i] = x;
    }
    return res;
  }

  // u_beta(x) without materializing u_beta.
  point_t
  rep_apply(Level const &l, point_t beta, point_t x) const
  {
    if (!l.reps.empty())
      return l.reps[l.position[beta]][x];
    std::vector<std::uint32_t> word;
    for (point_t b = beta; l.label[b] != kRoot;) {
      auto const s = static_cast<std::uint32_t>(l.label[b]);
      word.push_back(s);
      b = strong_inv_[s][b];
    }
    for (auto it = word.rbegin(); it != word.rend(); ++it)
      x = strong_[*it][x];
    return x;
  }

  // h <- u_beta^-1 h where beta = h(base of level)
  void
  strip(Level const &l, point_t beta, std::vector<point_t> &h) const
  {
    if (!l.reps_inverse.empty()) {
      auto const &inv = l.reps_inverse[l.position[beta]];
      for (auto &x : h)
        x = inv[x];
      return;
    }
    for (point_t b = beta; l.label[b] != kRoot;) {
      auto const &sinv = strong_inv_[static_cast<std::size_t>(l.label[b])];
      for (auto &x : h)
        x = sinv[x];
      b = sinv[b];
    }
  }

  // Sifts h through levels [from, end). Returns the level where sifting
  // stopped (levels_.size() if it went through).
  std::size_t
  sift_full(std::vector<point_t> &h, std::size_t from) const
  {
    for (std::size_t i = from; i < levels_.size(); ++i) {
      auto const &l = levels_[i];
      point_t const beta = h[l.base];
      if (l.label[beta] == kNotInOrbit)
        return i;
      strip(l, beta, h);
    }
    return levels_.size();
  }

  // Base-image variant for known-base mode: img[k] = h(base_k).
  std::size_t
  sift_images(std::vector<point_t> &img, std::size_t from) const
  {
    for (std::size_t i = from; i < levels_.size(); ++i) {
      auto const &l = levels_[i];
      point_t const beta = img[i];
      if (l.label[beta] == kNotInOrbit)
        return i;
      if (!l.reps_inverse.empty()) {
        auto const &inv = l.reps_inverse[l.position[beta]];
        for (auto &x : img)
          x = inv[x];
      } else {
        for (point_t b = beta; l.label[b] != kRoot;) {
          auto const &sinv = strong_inv_[static_cast<std::size_t>(l.label[b])];
          for (auto &x : img)
            x = sinv[x];
          b = sinv[b];
        }
      }
    }
    return levels_.size();
  }

  void
  compute_orbit(Level &l)
  {
    l.label.assign(degree_, kNotInOrbit);
    l.orbit.clear();
    l.orbit.push_back(l.base);
    l.label[l.base] = kRoot;
    for (std::size_t k = 0; k < l.orbit.size(); ++k) {
      point_t const b = l.orbit[k];
      for (auto s : l.gens) {
        point_t const c = strong_[s][b];
        if (l.label[c] == kNotInOrbit) {
          l.label[c] = static_cast<std::int32_t>(s);
          l.orbit.push_back(c);
        }
      }
    }

    l.verified = 0;
    l.position.assign(degree_, 0);
    for (std::size_t k = 0; k < l.orbit.size(); ++k)
      l.position[l.orbit[k]] = static_cast<std::uint32_t>(k);

    if (known_base_) {
      std::size_t const nb = levels_.size();
      l.base_images.assign(l.orbit.size() * nb, 0);
      for (std::size_t j = 0; j < nb; ++j)
        l.base_images[j] = levels_[j].base;
      for (std::size_t k = 1; k < l.orbit.size(); ++k) {
        point_t const c = l.orbit[k];
        auto const s = static_cast<std::size_t>(l.label[c]);
        std::size_t const parent = l.position[strong_inv_[s][c]];
        for (std::size_t j = 0; j < nb; ++j)
          l.base_images[k * nb + j] = strong_[s][l.base_images[parent * nb + j]];
      }
    }

    l.reps.clear();
    l.reps_inverse.clear();
    if (2 * l.orbit.size() * degree_ <= kRepCacheBudget) {
      l.reps.resize(l.orbit.size());
      l.reps_inverse.resize(l.orbit.size());
      std::vector<point_t> id(degree_);
      std::iota(id.begin(), id.end(), point_t{0});
      l.reps[0] = id;
      l.reps_inverse[0] = id;
      for (std::size_t k = 1; k < l.orbit.size(); ++k) {
        point_t const c = l.orbit[k];
        auto const s = static_cast<std::size_t>(l.label[c]);
        point_t const parent = strong_inv_[s][c];
        // u_c = s u_parent, so u_c^-1 = u_parent^-1 s^-1
        auto const &pu = l.reps[l.position[parent]];
        auto const &pinv = l.reps_inverse[l.position[parent]];
        auto &u = l.reps[k];
        auto &uinv = l.reps_inverse[k];
        u.resize(degree_);
        uinv.resize(degree_);
        for (point_t i = 0; i < degree_; ++i) {
          u[i] = strong_[s][pu[i]];
          uinv[i] = pinv[strong_inv_[s][i]];
        }
      }
    }
  }

  std::uint32_t
  add_strong(std::vector<point_t> images)
  {
    Permutation p = Permutation::unchecked(std::move(images));
    strong_inv_.push_back(p.inverse());
    strong_.push_back(std::move(p));
    return static_cast<std::uint32_t>(strong_.size() - 1);
  }

  bool
  reached(std::optional<BigInt> const &target) const
  {
    return target && order() >= *target;
  }

  void
  schreier_sims(BuildOptions const &options)
  {
    for (auto const &g : generators_)
      if (!g.is_identity())
        add_strong(std::vector<point_t>(g.images().begin(), g.images().end()));

    if (known_base_) {
      for (auto b : options.known_base) {
        if (b >= degree_)
          throw usage_error("known base point out of range");
        Level l;
        l.base = b;
        levels_.push_back(std::move(l));
      }
    } else {
      for (std::uint32_t s = 0; s < strong_.size(); ++s) {
        bool moves_base = false;
        for (auto const &l : levels_)
          moves_base = moves_base || strong_[s][l.base] != l.base;
        if (!moves_base) {
          Level l;
          l.base = strong_[s].first_moved();
          levels_.push_back(std::move(l));
        }
      }
    }

    for (std::size_t i = 0; i < levels_.size(); ++i) {
      for (std::uint32_t s = 0; s < strong_.size(); ++s) {
        bool fixes = true;
        for (std::size_t j = 0; j < i && fixes; ++j)
          fixes = strong_[s][levels_[j].base] == levels_[j].base;
        if (fixes)
          levels_[i].gens.push_back(s);
      }
      compute_orbit(levels_[i]);
    }

    if (reached(options.stop_at_order)) {
      complete_ = false;
      return;
    }

    std::vector<point_t> h(degree_);
    std::vector<point_t> img;

    std::size_t i = levels_.size();
    while (i-- > 0) {
      bool restarted = false;
      std::size_t const ngens = levels_[i].gens.size();
      std::size_t const total = levels_[i].orbit.size() * ngens;

      while (levels_[i].verified < total && !restarted) {
        auto &l = levels_[i];
        std::size_t const k = l.verified / ngens;
        std::uint32_t const s = l.gens[l.verified % ngens];
        point_t const beta = l.orbit[k];

        // Tree edges give trivial Schreier generators.
        point_t const target = strong_[s][beta];
        if (l.label[target] == static_cast<std::int32_t>(s)) {
          ++l.verified;
          continue;
        }

        std::size_t drop;
        if (known_base_) {
          std::size_t const nb = levels_.size();
          img.resize(nb);
          for (std::size_t j = 0; j < nb; ++j)
            img[j] = strong_[s][l.base_images[k * nb + j]];
          drop = sift_images(img, i);
          bool trivial = drop == nb;
          for (std::size_t j = 0; j < nb && trivial; ++j)
            trivial = img[j] == levels_[j].base;
          if (trivial) {
            ++l.verified;
            continue;
          }
        }

        auto u = rep_images(l, beta);
        for (point_t x = 0; x < degree_; ++x)
          h[x] = strong_[s][u[x]];
        drop = sift_full(h, i);
        if (drop == levels_.size() && is_identity(h)) {
          ++l.verified;
          continue;
        }

        if (drop == levels_.size()) {
          if (known_base_)
            throw usage_error("supplied known base is not a base for the group");
          Level nl;
          nl.base = Permutation::unchecked(h).first_moved();
          levels_.push_back(std::move(nl));
        }

        std::uint32_t const r = add_strong(h);
        for (std::size_t j = i + 1; j <= drop; ++j) {
          levels_[j].gens.push_back(r);
          compute_orbit(levels_[j]);
        }

        if (reached(options.stop_at_order)) {
          complete_ = false;
          return;
        }

        // Level i keeps its progress; deeper levels are redone first.
        i = drop + 1; // loop decrement lands on drop
        restarted = true;
      }
    }
  }

  template<typename Fn>
  void
  enumerate_rec(std::vector<std::vector<Permutation>> const &reps, std::size_t level,
                Permutation const &prefix, Fn &fn) const
  {
    if (level == reps.size()) {
      fn(prefix);
      return;
    }
    for (auto const &u : reps[level])
      enumerate_rec(reps, level + 1, prefix * u, fn);
  }
};

inline PermGroup
build_group(std::vector<Permutation> generators, BuildOptions const &options = {})
{
  return PermGroup::build(std::move(generators), options);
}

inline bool
membership(PermGroup const &G, Permutation const &p)
{
  return G.contains(p);
}

/// True iff <x, y> has the full order of G (x, y assumed to lie in G).
inline bool
is_two_generated_by(PermGroup const &G, Permutation const &x, Permutation const &y)
{
  BuildOptions opts;
  opts.stop_at_order = G.order();
  auto const H = PermGroup::build({x, y}, opts);
  return H.order() >= G.order();
}

enum class AltSym
{
  Alt,
  Sym,
  Other
};

inline char const *
to_string(AltSym a)
{
  switch (a) {
  case AltSym::Alt:
    return "Alt";
  case AltSym::Sym:
    return "Sym";
  default:
    return "Other";
  }
}

namespace detail
{

// Smallest block containing {0, k} for the group generated by gens
// (Atkinson's union-find closure). Returns the block size.
inline std::size_t
minimal_block_size(std::span<Permutation const> gens, std::size_t n, point_t k)
{
  std::vector<point_t> parent(n);
  std::iota(parent.begin(), parent.end(), point_t{0});
  auto find = [&](point_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };

  std::vector<std::pair<point_t, point_t>> queue{{0, k}};
  parent[find(k)] = find(0);
  for (std::size_t q = 0; q < queue.size(); ++q) {
    auto const [a, b] = queue[q];
    for (auto const &g : gens) {
      point_t const ra = find(g[a]), rb = find(g[b]);
      if (ra != rb) {
        parent[rb] = ra;
        queue.emplace_back(ra, rb);
      }
    }
  }
  point_t const root = find(0);
  std::size_t size = 0;
  for (point_t i = 0; i < n; ++i)
    size += find(i) == root;
  return size;
}

inline bool
is_primitive(std::span<Permutation const> gens, std::size_t n)
{
  for (point_t k = 1; k < n; ++k)
    if (minimal_block_size(gens, n, k) != n)
      return false;
  return true;
}

// Searches short words in the generators for an element with a single cycle
// of prime length p <= n - 3 whose other cycle lengths are prime to p. A
// suitable power of it is a p-cycle, and a primitive group containing a
// p-cycle with p <= n - 3 contains Alt(n) (Jordan).
inline bool
has_jordan_element(std::span<Permutation const> gens, std::size_t n, std::size_t max_words)
{
  std::vector<Permutation> frontier;
  for (auto const &g : gens)
    frontier.push_back(g);
  std::vector<Permutation> all = frontier;

  while (all.size() < max_words && !frontier.empty()) {
    std::vector<Permutation> next;
    for (auto const &w : frontier)
      for (auto const &g : gens) {
        next.push_back(w * g);
        if (all.size() + next.size() >= max_words)
          break;
      }
    all.insert(all.end(), next.begin(), next.end());
    frontier = std::move(next);
  }

  for (auto const &w : all) {
    auto const ct = w.cycle_type();
    for (auto len : ct) {
      if (len < 2 || len + 3 > n || !is_prime(len))
        continue;
      std::size_t same = 0;
      bool coprime = true;
      for (auto other : ct) {
        if (other == len)
          ++same;
        else if (other % len == 0)
          coprime = false;
      }
      if (same == 1 && coprime)
        return true;
    }
  }
  return false;
}

} // namespace detail

struct AltSymResult
{
  AltSym kind = AltSym::Other;
  std::optional<BigInt> order; // unset when the answer did not need it
};

/// Decides whether the group generated by `gens` on m points is Alt(m),
/// Sym(m) or neither. Imprimitive transitive groups are neither. Small
/// degrees compare the Schreier-Sims order with m!/2 and m!; larger degrees
/// first try a Jordan certificate (a prime cycle) and fall back to the order
/// comparison.
inline AltSymResult
identify_alt_sym_generated(std::span<Permutation const> gens, std::size_t m)
{
  AltSymResult res;
  if (gens.empty()) {
    res.order = 1;
    return res;
  }
  bool const transitive = PermGroup::orbit_under(gens, 0, m).size() == m;
  if (m < 3 || !transitive) {
    // On one or two points a transitive group is the whole of Sym(m).
    res.order = PermGroup::build(std::vector<Permutation>(gens.begin(), gens.end())).order();
    if (transitive)
      res.kind = AltSym::Sym;
    return res;
  }

  if (!detail::is_primitive(gens, m))
    return res;

  bool all_even = true;
  for (auto const &g : gens)
    all_even = all_even && g.is_even();

  constexpr std::size_t kOrderDegreeLimit = 32;
  if (m > kOrderDegreeLimit && detail::has_jordan_element(gens, m, 4096)) {
    res.kind = all_even ? AltSym::Alt : AltSym::Sym;
    res.order = all_even ? detail::factorial(m) / 2 : detail::factorial(m);
    return res;
  }

  auto const G = PermGroup::build(std::vector<Permutation>(gens.begin(), gens.end()));
  res.order = G.order();
  BigInt const full = detail::factorial(m);
  if (*res.order == full)
    res.kind = AltSym::Sym;
  else if (*res.order * 2 == full && all_even)
    res.kind = AltSym::Alt;
  return res;
}

inline AltSym
identify_alt_sym(PermGroup const &G)
{
  return identify_alt_sym_generated(G.generators(), G.degree()).kind;
}

} // namespace gsa
