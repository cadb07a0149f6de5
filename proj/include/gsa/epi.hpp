#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "element_table.hpp"
#include "perm_group.hpp"
#include "util.hpp"

namespace gsa
{

/// A generating pair up to simultaneous conjugation, stored as indices into
/// the element table. (x, y) is the least pair of its orbit: x is the least
/// element of its class and y the least conjugate of y under C(x).
struct EpiClass
{
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint64_t hash_key = 0;

  friend bool
  operator==(EpiClass const &, EpiClass const &) = default;
};

/// Order used for sorted class lists: hash first, indices break ties.
inline bool
hash_order(EpiClass const &a, EpiClass const &b)
{
  if (a.hash_key != b.hash_key)
    return a.hash_key < b.hash_key;
  if (a.x != b.x)
    return a.x < b.x;
  return a.y < b.y;
}

struct HigmanInvariant
{
  std::size_t class_index = 0;
  ConjClass const *commutator_class = nullptr;
  std::uint64_t ramification_index = 1;
};

struct EpiOptions
{
  std::size_t element_cap = ElementTable::kDefaultCap;
  /// Upper bound on candidate pairs (x, y) examined by the enumeration.
  std::uint64_t pair_budget = 200'000'000;
  unsigned threads = 1;
};

/// A group together with its element table and the operations on generating
/// pairs that depend on it.
class EpiContext
{
public:
  EpiContext() = default;

  explicit EpiContext(PermGroup const &G, EpiOptions const &opts = {})
  : table_(ElementTable::build(G, opts.element_cap, opts.threads)),
    transitive_(G.is_transitive()),
    abelian_(is_abelian(G))
  {
  }

  ElementTable const &
  table() const
  {
    return table_;
  }

  PermGroup const &
  group() const
  {
    return table_.group();
  }

  bool
  abelian() const
  {
    return abelian_;
  }

  std::uint64_t
  hash_of(std::uint32_t x, std::uint32_t y) const
  {
    detail::Fnv1a h;
    h.add(table_.images(x));
    h.add(table_.images(y));
    return h.value();
  }

  /// Canonical representative of the class of (x, y). Generation is not
  /// checked here; see canonical_form() for the checked entry point.
  EpiClass
  canonicalize(std::uint32_t x, std::uint32_t y) const
  {
    std::size_t const c = table_.class_of(x);
    std::uint32_t const g = table_.to_rep(x);
    std::uint32_t const x0 = table_.class_rep(c);
    std::uint32_t const y1 = table_.conjugate_index(y, g);
    std::uint32_t const y0 = table_.centralizer_orbit_min(c, y1);
    return {x0, y0, hash_of(x0, y0)};
  }

  bool
  generates(std::uint32_t x, std::uint32_t y) const
  {
    auto const &G = group();
    if (G.order() == 1)
      return true;
    if (!abelian_) {
      // Commuting pairs generate abelian subgroups.
      if (table_.product_index(x, y) == table_.product_index(y, x))
        return false;
    }
    Permutation const px = table_.element(x), py = table_.element(y);
    if (transitive_) {
      std::vector<Permutation> const gens{px, py};
      if (PermGroup::orbit_under(gens, 0, G.degree()).size() != G.degree())
        return false;
    }
    return is_two_generated_by(G, px, py);
  }

  std::pair<Permutation, Permutation>
  pair(EpiClass const &e) const
  {
    return {table_.element(e.x), table_.element(e.y)};
  }

  /// Generating pairs up to conjugation, sorted by hash_key.
  std::vector<EpiClass>
  enumerate(EpiOptions const &opts = {}) const
  {
    std::size_t const k = table_.classes().size();
    std::vector<std::vector<std::uint32_t>> ys(k);
    std::uint64_t candidates = 0;
    for (std::size_t c = 0; c < k; ++c) {
      ys[c] = table_.centralizer_orbit_reps(c);
      candidates += ys[c].size();
    }
    if (candidates > opts.pair_budget)
      throw cap_exceeded("pair budget exceeded: " + std::to_string(candidates) + " candidates");

    // Work items are (class, chunk of y) so large classes spread over workers.
    constexpr std::size_t chunk = 256;
    std::vector<std::pair<std::size_t, std::size_t>> items;
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t s = 0; s < ys[c].size(); s += chunk)
        items.emplace_back(c, s);

    std::vector<std::vector<EpiClass>> found(items.size());
    parallel_for(items.size(), opts.threads, [&](std::size_t w) {
      auto const [c, s] = items[w];
      std::uint32_t const x = table_.class_rep(c);
      std::size_t const end = std::min(ys[c].size(), s + chunk);
      for (std::size_t j = s; j < end; ++j) {
        std::uint32_t const y = ys[c][j];
        if (generates(x, y))
          found[w].push_back({x, y, hash_of(x, y)});
      }
    });

    std::vector<EpiClass> res;
    for (auto &f : found)
      res.insert(res.end(), f.begin(), f.end());
    std::sort(res.begin(), res.end(), hash_order);
    return res;
  }

  /// The class of the commutator [y, x] = y x y^-1 x^-1.
  HigmanInvariant
  higman_invariant(EpiClass const &e) const
  {
    std::uint32_t const yx = table_.product_index(e.y, e.x);
    std::uint32_t const yinv_xinv =
        table_.product_index(table_.inverse_index(e.y), table_.inverse_index(e.x));
    std::uint32_t const comm = table_.product_index(yx, yinv_xinv);
    std::size_t const c = table_.class_of(comm);
    auto const &cls = table_.classes()[c];
    return {c, &cls, cls.element_order};
  }

private:
  ElementTable table_;
  bool transitive_ = false;
  bool abelian_ = false;

  static bool
  is_abelian(PermGroup const &G)
  {
    auto const &gens = G.generators();
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i + 1; j < gens.size(); ++j)
        if (gens[i] * gens[j] != gens[j] * gens[i])
          return false;
    return true;
  }
};

/// Checked canonical form of a pair of permutations.
inline EpiClass
canonical_form(EpiContext const &ctx, Permutation const &x, Permutation const &y)
{
  auto const &t = ctx.table();
  std::uint32_t const xi = t.require(x), yi = t.require(y);
  if (!ctx.generates(xi, yi))
    throw usage_error("pair does not generate the group");
  return ctx.canonicalize(xi, yi);
}

inline std::vector<EpiClass>
enumerate_epi_ext(EpiContext const &ctx, EpiOptions const &opts = {})
{
  return ctx.enumerate(opts);
}

/// Sorted class list with lookup by (x, y).
class EpiSet
{
public:
  EpiSet() = default;

  explicit EpiSet(std::vector<EpiClass> classes)
  : classes_(std::move(classes))
  {
    index_.reserve(classes_.size());
    for (std::uint32_t i = 0; i < classes_.size(); ++i)
      index_.emplace(key(classes_[i]), i);
  }

  std::vector<EpiClass> const &
  classes() const
  {
    return classes_;
  }

  std::size_t
  size() const
  {
    return classes_.size();
  }

  EpiClass const &
  operator[](std::size_t i) const
  {
    return classes_[i];
  }

  std::uint32_t
  index_of(EpiClass const &e) const
  {
    auto it = index_.find(key(e));
    if (it == index_.end())
      throw consistency_error("class missing from enumeration");
    return it->second;
  }

private:
  std::vector<EpiClass> classes_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;

  static std::uint64_t
  key(EpiClass const &e)
  {
    return (std::uint64_t{e.x} << 32) | e.y;
  }
};

/// A surjection q: G -> H given by images of G's generators. Every element's
/// image is tabulated by walking the Cayley graph of G, and each edge is
/// checked, which proves q extends to a homomorphism.
class Quotient
{
public:
  Quotient(EpiContext const &source, EpiContext const &target,
           std::vector<Permutation> const &generator_images)
  : source_(&source), target_(&target)
  {
    auto const &G = source.group();
    auto const &Gt = source.table();
    auto const &Ht = target.table();
    if (generator_images.size() != G.generators().size())
      throw usage_error("need one image per generator");

    std::vector<std::uint32_t> gidx, hidx;
    for (std::size_t i = 0; i < generator_images.size(); ++i) {
      gidx.push_back(Gt.require(G.generators()[i]));
      if (!target.group().contains(generator_images[i]))
        throw usage_error("generator image is not in the target group");
      hidx.push_back(Ht.require(generator_images[i]));
    }

    if (build_group(generator_images).order() != target.group().order())
      throw usage_error("map is not surjective");

    constexpr std::uint32_t unset = ElementTable::npos;
    image_.assign(Gt.size(), unset);
    image_[0] = 0;
    std::vector<std::uint32_t> queue{0};
    for (std::size_t q = 0; q < queue.size(); ++q) {
      std::uint32_t const e = queue[q];
      for (std::size_t i = 0; i < gidx.size(); ++i) {
        std::uint32_t const f = Gt.product_index(e, gidx[i]);
        std::uint32_t const img = Ht.product_index(image_[e], hidx[i]);
        if (image_[f] == unset) {
          image_[f] = img;
          queue.push_back(f);
        } else if (image_[f] != img) {
          throw usage_error("generator images do not define a homomorphism");
        }
      }
    }
  }

  std::uint32_t
  image(std::uint32_t g) const
  {
    return image_[g];
  }

  EpiClass
  push_forward(EpiClass const &e) const
  {
    return target_->canonicalize(image_[e.x], image_[e.y]);
  }

private:
  EpiContext const *source_;
  EpiContext const *target_;
  std::vector<std::uint32_t> image_;
};

inline EpiClass
push_forward(EpiClass const &e, Quotient const &q)
{
  return q.push_forward(e);
}

} // namespace gsa
