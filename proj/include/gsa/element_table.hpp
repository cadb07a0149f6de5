#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "perm_group.hpp"
#include "permutation.hpp"
#include "util.hpp"

namespace gsa
{

struct ConjClass
{
  Permutation representative;
  std::uint64_t size = 0;
  std::uint64_t element_order = 0;
  std::string label;
};

/// Every element of a group, sorted by image array, with conjugacy classes
/// and centralizer orbit data. Element 0 is the identity.
class ElementTable
{
public:
  static constexpr std::size_t kDefaultCap = 1'000'000;
  static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

  ElementTable() = default;

  static ElementTable
  build(PermGroup const &G, std::size_t cap = kDefaultCap, unsigned threads = 1)
  {
    if (G.order() > cap)
      throw cap_exceeded("group order " + G.order().str() + " exceeds element cap " +
                         std::to_string(cap));
    ElementTable t;
    t.group_ = G;
    t.degree_ = G.degree();
    t.collect_elements();
    t.find_classes();
    t.label_classes();
    t.compute_centralizer_orbits(threads);
    return t;
  }

  PermGroup const &
  group() const
  {
    return group_;
  }

  std::size_t
  size() const
  {
    return size_;
  }

  std::size_t
  degree() const
  {
    return degree_;
  }

  std::span<point_t const>
  images(std::uint32_t i) const
  {
    return {flat_.data() + std::size_t{i} * degree_, degree_};
  }

  Permutation
  element(std::uint32_t i) const
  {
    auto const im = images(i);
    return Permutation::unchecked(std::vector<point_t>(im.begin(), im.end()));
  }

  /// Position of the element with these images, or npos.
  std::uint32_t
  index_of(std::span<point_t const> im) const
  {
    std::uint32_t lo = 0, hi = static_cast<std::uint32_t>(size_);
    while (lo < hi) {
      std::uint32_t const mid = lo + (hi - lo) / 2;
      auto const cur = images(mid);
      if (std::lexicographical_compare(cur.begin(), cur.end(), im.begin(), im.end()))
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo < size_ && std::equal(im.begin(), im.end(), images(lo).begin()))
      return lo;
    return npos;
  }

  std::uint32_t
  index_of(Permutation const &p) const
  {
    if (p.degree() != degree_)
      throw usage_error("degree mismatch");
    return index_of(p.images());
  }

  /// Like index_of but throws for non-members.
  std::uint32_t
  require(Permutation const &p) const
  {
    auto const i = index_of(p);
    if (i == npos)
      throw usage_error("permutation " + p.to_cycles() + " is not in the group");
    return i;
  }

  std::vector<ConjClass> const &
  classes() const
  {
    return classes_;
  }

  std::size_t
  class_of(std::uint32_t i) const
  {
    return class_of_[i];
  }

  /// Index of the class representative (its least element).
  std::uint32_t
  class_rep(std::size_t c) const
  {
    return class_rep_[c];
  }

  /// Index of some g with element(i)^g = class representative.
  std::uint32_t
  to_rep(std::uint32_t i) const
  {
    return to_rep_[i];
  }

  /// Least element of the orbit of element i under conjugation by the
  /// centralizer of class c's representative.
  std::uint32_t
  centralizer_orbit_min(std::size_t c, std::uint32_t i) const
  {
    return orbit_min_[c][i];
  }

  /// Elements that are least in their centralizer orbit for class c.
  std::vector<std::uint32_t>
  centralizer_orbit_reps(std::size_t c) const
  {
    std::vector<std::uint32_t> res;
    for (std::uint32_t i = 0; i < size_; ++i)
      if (orbit_min_[c][i] == i)
        res.push_back(i);
    return res;
  }

  std::vector<Permutation> const &
  centralizer_generators(std::size_t c) const
  {
    return centralizer_gens_[c];
  }

  /// Index of x^g.
  std::uint32_t
  conjugate_index(std::uint32_t x, std::uint32_t g) const
  {
    std::vector<point_t> buf(degree_);
    conjugate_into(images(x), images(g), buf);
    return index_of(buf);
  }

  /// Index of a*b.
  std::uint32_t
  product_index(std::uint32_t a, std::uint32_t b) const
  {
    auto const ia = images(a), ib = images(b);
    std::vector<point_t> buf(degree_);
    for (std::size_t k = 0; k < degree_; ++k)
      buf[k] = ia[ib[k]];
    return index_of(buf);
  }

  std::uint32_t
  inverse_index(std::uint32_t a) const
  {
    auto const ia = images(a);
    std::vector<point_t> buf(degree_);
    for (std::size_t k = 0; k < degree_; ++k)
      buf[ia[k]] = static_cast<point_t>(k);
    return index_of(buf);
  }

  /// res = g^-1 x g
  static void
  conjugate_into(std::span<point_t const> x, std::span<point_t const> g, std::vector<point_t> &res)
  {
    std::size_t const n = x.size();
    std::vector<point_t> ginv(n);
    for (std::size_t k = 0; k < n; ++k)
      ginv[g[k]] = static_cast<point_t>(k);
    res.resize(n);
    for (std::size_t k = 0; k < n; ++k)
      res[k] = ginv[x[g[k]]];
  }

private:
  PermGroup group_;
  std::size_t degree_ = 0;
  std::size_t size_ = 0;
  std::vector<point_t> flat_;
  std::vector<ConjClass> classes_;
  std::vector<std::uint32_t> class_rep_;
  std::vector<std::uint32_t> class_of_;
  std::vector<std::uint32_t> to_rep_;
  std::vector<std::vector<Permutation>> centralizer_gens_;
  std::vector<std::vector<std::uint32_t>> orbit_min_;

  void
  collect_elements()
  {
    std::vector<Permutation> all;
    all.reserve(static_cast<std::size_t>(group_.order()));
    group_.for_each_element([&](Permutation const &p) { all.push_back(p); });
    std::sort(all.begin(), all.end());
    size_ = all.size();
    flat_.resize(size_ * degree_);
    for (std::size_t i = 0; i < size_; ++i)
      std::copy(all[i].images().begin(), all[i].images().end(), flat_.begin() + i * degree_);
  }

  // Classes by breadth-first search under conjugation by the generators.
  // Scanning in sorted order makes each class's first element its minimum.
  void
  find_classes()
  {
    auto const &gens = group_.generators();
    std::vector<std::uint32_t> gen_index;
    for (auto const &g : gens)
      gen_index.push_back(require(g));

    constexpr std::uint32_t unset = npos;
    std::vector<std::uint32_t> raw_class(size_, unset);
    std::vector<std::uint32_t> from_rep(size_, unset); // rep^from_rep = element
    std::vector<std::vector<std::uint32_t>> members;
    std::vector<point_t> buf;

    for (std::uint32_t start = 0; start < size_; ++start) {
      if (raw_class[start] != unset)
        continue;
      auto const c = static_cast<std::uint32_t>(members.size());
      members.emplace_back();
      auto &queue = members.back();
      raw_class[start] = c;
      from_rep[start] = 0;
      queue.push_back(start);
      for (std::size_t q = 0; q < queue.size(); ++q) {
        std::uint32_t const e = queue[q];
        for (auto gi : gen_index) {
          conjugate_into(images(e), images(gi), buf);
          std::uint32_t const f = index_of(buf);
          if (raw_class[f] == unset) {
            raw_class[f] = c;
            from_rep[f] = product_index(from_rep[e], gi);
            queue.push_back(f);
          }
        }
      }
    }

    to_rep_.resize(size_);
    for (std::uint32_t i = 0; i < size_; ++i)
      to_rep_[i] = inverse_index(from_rep[i]);

    // Centralizer of each representative from Schreier generators of the
    // conjugation orbit, keeping only those that enlarge the subgroup.
    std::vector<std::vector<Permutation>> cgens(members.size());
    for (std::size_t c = 0; c < members.size(); ++c) {
      BigInt const target = group_.order() / members[c].size();
      auto &chosen = cgens[c];
      PermGroup H;
      bool have = false;
      for (auto e : members[c]) {
        if (have && H.order() == target)
          break;
        for (auto gi : gen_index) {
          conjugate_into(images(e), images(gi), buf);
          std::uint32_t const f = index_of(buf);
          std::uint32_t const s =
              product_index(product_index(from_rep[e], gi), inverse_index(from_rep[f]));
          if (s == 0)
            continue;
          Permutation const sp = element(s);
          if (have && H.contains(sp))
            continue;
          chosen.push_back(sp);
          H = PermGroup::build(chosen);
          have = true;
          if (H.order() == target)
            break;
        }
      }
      if (chosen.empty())
        chosen.push_back(Permutation(degree_));
      if (PermGroup::build(chosen).order() != target)
        throw consistency_error("centralizer order does not match class size");
    }

    // Stash raw data; label_classes() fixes the final order.
    raw_class_ = std::move(raw_class);
    raw_members_ = std::move(members);
    raw_cgens_ = std::move(cgens);
  }

  std::vector<std::uint32_t> raw_class_;
  std::vector<std::vector<std::uint32_t>> raw_members_;
  std::vector<std::vector<Permutation>> raw_cgens_;

  // Sort by (element order, class size, least element); letters by rank among
  // classes of equal element order.
  void
  label_classes()
  {
    std::size_t const k = raw_members_.size();
    std::vector<std::uint64_t> orders(k);
    for (std::size_t c = 0; c < k; ++c)
      orders[c] = element(raw_members_[c].front()).order();

    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      if (orders[a] != orders[b])
        return orders[a] < orders[b];
      if (raw_members_[a].size() != raw_members_[b].size())
        return raw_members_[a].size() < raw_members_[b].size();
      return raw_members_[a].front() < raw_members_[b].front();
    });

    std::vector<std::uint32_t> new_id(k);
    classes_.resize(k);
    class_rep_.resize(k);
    centralizer_gens_.resize(k);
    std::size_t rank = 0;
    for (std::size_t pos = 0; pos < k; ++pos) {
      std::size_t const c = perm[pos];
      new_id[c] = static_cast<std::uint32_t>(pos);
      rank = (pos > 0 && orders[perm[pos - 1]] == orders[c]) ? rank + 1 : 0;
      auto &cls = classes_[pos];
      cls.representative = element(raw_members_[c].front());
      cls.size = raw_members_[c].size();
      cls.element_order = orders[c];
      cls.label = std::to_string(orders[c]) + letters(rank);
      class_rep_[pos] = raw_members_[c].front();
      centralizer_gens_[pos] = std::move(raw_cgens_[c]);
    }

    class_of_.resize(size_);
    for (std::uint32_t i = 0; i < size_; ++i)
      class_of_[i] = new_id[raw_class_[i]];

    raw_class_.clear();
    raw_members_.clear();
    raw_cgens_.clear();
  }

  static std::string
  letters(std::size_t rank)
  {
    std::string s;
    for (std::size_t r = rank + 1; r > 0; r = (r - 1) / 26)
      s.insert(s.begin(), static_cast<char>('A' + (r - 1) % 26));
    return s;
  }

  void
  compute_centralizer_orbits(unsigned threads)
  {
    orbit_min_.assign(classes_.size(), {});
    parallel_for(classes_.size(), threads, [&](std::size_t c) {
      std::vector<std::uint32_t> gidx;
      for (auto const &g : centralizer_gens_[c])
        gidx.push_back(index_of(g));
      auto &om = orbit_min_[c];
      om.assign(size_, npos);
      std::vector<std::uint32_t> queue;
      std::vector<point_t> buf;
      for (std::uint32_t start = 0; start < size_; ++start) {
        if (om[start] != npos)
          continue;
        om[start] = start;
        queue.assign(1, start);
        for (std::size_t q = 0; q < queue.size(); ++q)
          for (auto gi : gidx) {
            conjugate_into(images(queue[q]), images(gi), buf);
            std::uint32_t const f = index_of(buf);
            if (om[f] == npos) {
              om[f] = start;
              queue.push_back(f);
            }
          }
      }
    });
  }
};

inline std::vector<ConjClass>
conjugacy_classes(PermGroup const &G, std::size_t cap = ElementTable::kDefaultCap)
{
  return ElementTable::build(G, cap).classes();
}

/// C_G(x) for x in G.
inline PermGroup
centralizer(ElementTable const &table, Permutation const &x)
{
  std::uint32_t const i = table.require(x);
  std::size_t const c = table.class_of(i);
  // x = rep^h with h = to_rep(i)^-1, so C(x) = C(rep)^h.
  Permutation const h = table.element(table.to_rep(i)).inverse();
  std::vector<Permutation> gens;
  for (auto const &g : table.centralizer_generators(c))
    gens.push_back(conjugate(g, h));
  return build_group(std::move(gens));
}

inline PermGroup
centralizer(PermGroup const &G, Permutation const &x)
{
  return centralizer(ElementTable::build(G), x);
}

} // namespace gsa
