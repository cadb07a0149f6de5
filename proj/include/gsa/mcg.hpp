#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "epi.hpp"
#include "perm_group.hpp"
#include "sl2.hpp"
#include "standard_groups.hpp"
#include "util.hpp"

namespace gsa
{

/// Nielsen moves on pairs. U: (x, y) -> (x, xy), V: (x, y) -> (y, x^-1).
enum class Move : std::uint8_t
{
  U,
  V,
  U_inv,
  V_inv
};

inline constexpr std::array<Move, 4> kMoveOrder{Move::U, Move::V, Move::U_inv, Move::V_inv};

inline char const *
to_string(Move m)
{
  switch (m) {
  case Move::U:
    return "U";
  case Move::V:
    return "V";
  case Move::U_inv:
    return "U_inv";
  case Move::V_inv:
    return "V_inv";
  }
  return "?";
}

inline Move
inverse(Move m)
{
  switch (m) {
  case Move::U:
    return Move::U_inv;
  case Move::V:
    return Move::V_inv;
  case Move::U_inv:
    return Move::U;
  case Move::V_inv:
    return Move::V;
  }
  return m;
}

/// Abelianized matrices: U is T = [[1,1],[0,1]], V is S^-1 = [[0,-1],[1,0]].
inline Mat2
move_matrix(Move m)
{
  switch (m) {
  case Move::U:
    return {1, 1, 0, 1};
  case Move::V:
    return {0, -1, 1, 0};
  case Move::U_inv:
    return {1, -1, 0, 1};
  case Move::V_inv:
    return {0, 1, -1, 0};
  }
  return {};
}

using MoveWord = std::vector<Move>;

/// Word-to-matrix map. Standard multiplies left to right in application
/// order; Mirror reverses the product, which is the other choice of left or
/// right action.
enum class Convention
{
  Standard,
  Mirror
};

inline Mat2
word_matrix(MoveWord const &w, Convention conv = Convention::Standard)
{
  Mat2 res;
  for (auto m : w)
    res = conv == Convention::Standard ? res * move_matrix(m) : move_matrix(m) * res;
  return res;
}

/// The elliptic element T^-1 S = [[1,1],[-1,0]] of order 3 (mod +-I), as a word.
inline MoveWord const &
j0_word()
{
  static MoveWord const w{Move::U_inv, Move::V_inv};
  return w;
}

/// Checks the move matrices against the relations the signature relies on.
/// Throws consistency_error on mismatch.
inline void
verify_move_matrices()
{
  Mat2 const I{1, 0, 0, 1}, minus_I{-1, 0, 0, -1};
  Mat2 const T{1, 1, 0, 1}, S{0, 1, -1, 0};
  bool ok = move_matrix(Move::U) == T && move_matrix(Move::V_inv) == S &&
            move_matrix(Move::U) * move_matrix(Move::U_inv) == I &&
            move_matrix(Move::V) * move_matrix(Move::V_inv) == I &&
            word_matrix({Move::V, Move::V}) == minus_I &&
            word_matrix(j0_word()) == Mat2{1, 1, -1, 0} &&
            word_matrix(j0_word()) == inverse_sl2(T) * S;
  Mat2 const j = word_matrix(j0_word());
  ok = ok && j * j * j == minus_I;
  if (!ok)
    throw consistency_error("Nielsen move matrices violate the expected relations");
}

inline EpiClass
apply_move(EpiContext const &ctx, EpiClass const &e, Move m)
{
  auto const &t = ctx.table();
  switch (m) {
  case Move::U:
    return ctx.canonicalize(e.x, t.product_index(e.x, e.y));
  case Move::V:
    return ctx.canonicalize(e.y, t.inverse_index(e.x));
  case Move::U_inv:
    return ctx.canonicalize(e.x, t.product_index(t.inverse_index(e.x), e.y));
  case Move::V_inv:
    return ctx.canonicalize(t.inverse_index(e.y), e.x);
  }
  return e;
}

/// (x, y) -> (x^-1, y^-1), which is V^2.
inline EpiClass
apply_inversion(EpiContext const &ctx, EpiClass const &e)
{
  auto const &t = ctx.table();
  return ctx.canonicalize(t.inverse_index(e.x), t.inverse_index(e.y));
}

/// Images of every class under U and V, as indices into the class list.
struct MoveTable
{
  std::vector<std::uint32_t> u, v;
};

inline MoveTable
compute_moves(EpiContext const &ctx, EpiSet const &set, unsigned threads = 1)
{
  MoveTable mt;
  mt.u.resize(set.size());
  mt.v.resize(set.size());
  parallel_for(set.size(), threads, [&](std::size_t i) {
    mt.u[i] = set.index_of(apply_move(ctx, set[i], Move::U));
    mt.v[i] = set.index_of(apply_move(ctx, set[i], Move::V));
  });
  return mt;
}

/// One orbit of <U, V> on the classes. Local point k is global class
/// points[k]; points are sorted, so local 0 (the base point) has the least
/// hash. The Schreier tree comes from breadth-first search in move order
/// U, V, U_inv, V_inv.
struct OrbitComponent
{
  std::vector<std::uint32_t> points;
  std::vector<std::uint32_t> u, v, u_inv, v_inv;
  std::vector<std::int32_t> parent; // -1 at the base point
  std::vector<Move> parent_move;    // parent_move applied to parent gives the point
  std::vector<std::uint32_t> bfs_order;

  std::size_t
  size() const
  {
    return points.size();
  }

  std::uint32_t
  apply(std::uint32_t p, Move m) const
  {
    switch (m) {
    case Move::U:
      return u[p];
    case Move::V:
      return v[p];
    case Move::U_inv:
      return u_inv[p];
    case Move::V_inv:
      return v_inv[p];
    }
    return p;
  }

  std::uint32_t
  replay(std::uint32_t p, MoveWord const &w) const
  {
    for (auto m : w)
      p = apply(p, m);
    return p;
  }

  /// Moves leading from the base point to p.
  MoveWord
  word_to(std::uint32_t p) const
  {
    MoveWord w;
    for (auto q = static_cast<std::int32_t>(p); parent[static_cast<std::size_t>(q)] >= 0;
         q = parent[static_cast<std::size_t>(q)])
      w.push_back(parent_move[static_cast<std::size_t>(q)]);
    std::reverse(w.begin(), w.end());
    return w;
  }
};

inline std::vector<OrbitComponent>
decompose_components(EpiSet const &set, MoveTable const &mt)
{
  std::size_t const n = set.size();
  std::vector<std::uint32_t> u_inv(n), v_inv(n);
  {
    std::vector<bool> hit_u(n, false), hit_v(n, false);
    for (std::uint32_t i = 0; i < n; ++i) {
      if (hit_u[mt.u[i]] || hit_v[mt.v[i]])
        throw consistency_error("Nielsen move is not a bijection on classes");
      hit_u[mt.u[i]] = hit_v[mt.v[i]] = true;
      u_inv[mt.u[i]] = i;
      v_inv[mt.v[i]] = i;
    }
  }

  constexpr std::uint32_t unset = ElementTable::npos;
  std::vector<std::uint32_t> comp_of(n, unset);
  std::vector<OrbitComponent> comps;
  for (std::uint32_t start = 0; start < n; ++start) {
    if (comp_of[start] != unset)
      continue;
    auto const id = static_cast<std::uint32_t>(comps.size());
    std::vector<std::uint32_t> members{start};
    comp_of[start] = id;
    for (std::size_t q = 0; q < members.size(); ++q)
      for (auto next : {mt.u[members[q]], mt.v[members[q]], u_inv[members[q]], v_inv[members[q]]})
        if (comp_of[next] == unset) {
          comp_of[next] = id;
          members.push_back(next);
        }
    std::sort(members.begin(), members.end());
    OrbitComponent c;
    c.points = std::move(members);
    comps.push_back(std::move(c));
  }

  std::vector<std::uint32_t> local(n);
  for (auto &c : comps) {
    std::size_t const d = c.points.size();
    for (std::uint32_t k = 0; k < d; ++k)
      local[c.points[k]] = k;
    c.u.resize(d);
    c.v.resize(d);
    c.u_inv.resize(d);
    c.v_inv.resize(d);
    for (std::uint32_t k = 0; k < d; ++k) {
      auto const g = c.points[k];
      c.u[k] = local[mt.u[g]];
      c.v[k] = local[mt.v[g]];
      c.u_inv[k] = local[u_inv[g]];
      c.v_inv[k] = local[v_inv[g]];
    }
    c.parent.assign(d, -2);
    c.parent_move.assign(d, Move::U);
    c.parent[0] = -1;
    c.bfs_order = {0};
    for (std::size_t q = 0; q < c.bfs_order.size(); ++q) {
      std::uint32_t const p = c.bfs_order[q];
      for (auto m : kMoveOrder) {
        std::uint32_t const r = c.apply(p, m);
        if (c.parent[r] == -2) {
          c.parent[r] = static_cast<std::int32_t>(p);
          c.parent_move[r] = m;
          c.bfs_order.push_back(r);
        }
      }
    }
  }

  std::stable_sort(comps.begin(), comps.end(), [&](OrbitComponent const &a, OrbitComponent const &b) {
    if (a.size() != b.size())
      return a.size() < b.size();
    auto const ha = set[a.points[0]].hash_key, hb = set[b.points[0]].hash_key;
    if (ha != hb)
      return ha < hb;
    return a.points[0] < b.points[0];
  });
  return comps;
}

inline std::vector<OrbitComponent>
decompose_components(EpiContext const &ctx, EpiSet const &set, unsigned threads = 1)
{
  verify_move_matrices();
  return decompose_components(set, compute_moves(ctx, set, threads));
}

/// Action of T, S and T^-1 S on the +- coset space: pairs {p, V^2 p}.
struct CosetAction
{
  bool minus_i = true;
  std::vector<std::uint32_t> pm_of; // local point -> +- point
  Permutation T, S, J;
};

inline CosetAction
coset_action(OrbitComponent const &c)
{
  std::size_t const d = c.size();
  CosetAction ca;
  std::vector<std::uint32_t> pi(d);
  for (std::uint32_t k = 0; k < d; ++k)
    pi[k] = c.v[c.v[k]];

  for (std::uint32_t k = 0; k < d; ++k) {
    if (pi[pi[k]] != k)
      throw consistency_error("V^2 is not an involution");
    if (pi[k] != k)
      ca.minus_i = false;
  }
  for (std::uint32_t k = 0; k < d; ++k)
    if (!ca.minus_i && pi[k] == k)
      throw consistency_error("V^2 has fixed points but is not the identity");

  constexpr std::uint32_t unset = ElementTable::npos;
  ca.pm_of.assign(d, unset);
  std::uint32_t next = 0;
  for (std::uint32_t k = 0; k < d; ++k)
    if (ca.pm_of[k] == unset) {
      ca.pm_of[k] = next;
      ca.pm_of[pi[k]] = next;
      ++next;
    }

  auto induced = [&](auto &&step) {
    std::vector<point_t> im(next, 0);
    std::vector<bool> set(next, false);
    for (std::uint32_t k = 0; k < d; ++k) {
      auto const from = ca.pm_of[k], to = ca.pm_of[step(k)];
      if (set[from] && im[from] != to)
        throw consistency_error("move action does not descend to the +- space");
      im[from] = to;
      set[from] = true;
    }
    return Permutation(std::move(im));
  };

  ca.T = induced([&](std::uint32_t k) { return c.u[k]; });
  ca.S = induced([&](std::uint32_t k) { return c.v[k]; });
  ca.J = induced([&](std::uint32_t k) { return c.replay(k, j0_word()); });

  if (!(ca.S * ca.S).is_identity() || !(ca.J * ca.J * ca.J).is_identity())
    throw consistency_error("S^2 or (T^-1 S)^3 acts nontrivially on the +- space");
  return ca;
}

struct Signature
{
  std::uint64_t d = 0;
  bool minus_i = true;
  std::uint64_t d_bar = 0;
  std::uint64_t c2 = 0;
  std::uint64_t c3 = 0;
  std::vector<std::uint64_t> cusp_widths; // ascending
  std::uint64_t genus = 0;
  std::uint64_t level = 1;

  friend bool
  operator==(Signature const &, Signature const &) = default;
};

inline Signature
signature(OrbitComponent const &c, CosetAction const &ca)
{
  Signature sig;
  sig.d = c.size();
  sig.minus_i = ca.minus_i;
  sig.d_bar = ca.T.degree();
  sig.c2 = ca.S.fixed_points();
  sig.c3 = ca.J.fixed_points();
  for (auto len : ca.T.cycle_type())
    sig.cusp_widths.push_back(len);
  for (auto w : sig.cusp_widths)
    sig.level = detail::lcm(sig.level, w);

  auto const twelve_g = 12 + static_cast<std::int64_t>(sig.d_bar) - 3 * static_cast<std::int64_t>(sig.c2) -
                        4 * static_cast<std::int64_t>(sig.c3) -
                        6 * static_cast<std::int64_t>(sig.cusp_widths.size());
  if (twelve_g < 0 || twelve_g % 12 != 0)
    throw consistency_error("genus formula gives a non-integer or negative value (12g = " +
                            std::to_string(twelve_g) + ")");
  sig.genus = static_cast<std::uint64_t>(twelve_g / 12);

  std::uint64_t width_sum = 0;
  for (auto w : sig.cusp_widths)
    width_sum += w;
  if (width_sum != sig.d_bar || (sig.d_bar - sig.c2) % 2 != 0 || (sig.d_bar + 3 - sig.c3 % 3) % 3 != 0 ||
      (!sig.minus_i && sig.d % 2 != 0) || sig.d_bar != (sig.minus_i ? sig.d : sig.d / 2))
    throw consistency_error("signature fails its parity or sum checks");
  return sig;
}

inline Signature
signature(OrbitComponent const &c)
{
  return signature(c, coset_action(c));
}

namespace detail
{

template<typename Mul, typename Inv>
std::vector<Mat2>
schreier_matrices(OrbitComponent const &c, Convention conv, Mat2 const &identity, Mul &&mul, Inv &&inv,
                  auto &&gen_matrix)
{
  std::size_t const d = c.size();
  std::vector<Mat2> at(d, identity);
  for (std::size_t q = 1; q < c.bfs_order.size(); ++q) {
    auto const p = c.bfs_order[q];
    auto const par = static_cast<std::size_t>(c.parent[p]);
    Mat2 const m = gen_matrix(c.parent_move[p]);
    at[p] = conv == Convention::Standard ? mul(at[par], m) : mul(m, at[par]);
  }

  std::set<Mat2> seen;
  std::vector<Mat2> res;
  for (std::uint32_t p = 0; p < d; ++p)
    for (auto m : {Move::U, Move::V}) {
      std::uint32_t const q = c.apply(p, m);
      if (c.parent[q] == static_cast<std::int32_t>(p) && c.parent_move[q] == m)
        continue;
      Mat2 const g = conv == Convention::Standard ? mul(mul(at[p], gen_matrix(m)), inv(at[q]))
                                                  : mul(mul(inv(at[q]), gen_matrix(m)), at[p]);
      if (g == identity)
        continue;
      if (seen.insert(g).second)
        res.push_back(g);
    }
  if (res.empty())
    res.push_back(identity);
  return res;
}

} // namespace detail

/// Generators of the stabilizer of the base point: one matrix
/// word(p) M_m word(q)^-1 per non-tree edge p -m-> q with m in {U, V}.
/// Exact arithmetic; throws cap_exceeded if an entry leaves 64 bits.
inline std::vector<Mat2>
stabilizer_matrices(OrbitComponent const &c, Convention conv = Convention::Standard)
{
  return detail::schreier_matrices(
      c, conv, Mat2{}, [](Mat2 const &a, Mat2 const &b) { return a * b; },
      [](Mat2 const &a) { return inverse_sl2(a); }, [](Move m) { return move_matrix(m); });
}

/// The same generators reduced mod n, computed without leaving [0, n).
inline std::vector<Mat2>
stabilizer_matrices_mod(OrbitComponent const &c, std::int64_t n, Convention conv = Convention::Standard)
{
  Mat2 const id = reduce(Mat2{}, n);
  return detail::schreier_matrices(
      c, conv, id, [n](Mat2 const &a, Mat2 const &b) { return mul_mod(a, b, n); },
      [n](Mat2 const &a) { return inverse_mod(a, n); }, [n](Move m) { return reduce(move_matrix(m), n); });
}

/// Words for the same Schreier generators (including identity ones).
inline std::vector<MoveWord>
stabilizer_words(OrbitComponent const &c)
{
  std::vector<MoveWord> res;
  for (std::uint32_t p = 0; p < c.size(); ++p)
    for (auto m : {Move::U, Move::V}) {
      std::uint32_t const q = c.apply(p, m);
      if (c.parent[q] == static_cast<std::int32_t>(p) && c.parent_move[q] == m)
        continue;
      MoveWord w = c.word_to(p);
      w.push_back(m);
      MoveWord back = c.word_to(q);
      for (auto it = back.rbegin(); it != back.rend(); ++it)
        w.push_back(inverse(*it));
      res.push_back(std::move(w));
    }
  return res;
}

struct MonodromyInfo
{
  std::size_t domain_size = 0;
  AltSym classification = AltSym::Other;
  std::size_t order_digits = 0; // decimal digits of |Mon|; 0 when not computed (imprimitive)
};

inline MonodromyInfo
monodromy_from(Permutation const &T, Permutation const &S)
{
  std::vector<Permutation> const gens{T, S};
  MonodromyInfo mi;
  mi.domain_size = T.degree();
  auto const r = identify_alt_sym_generated(gens, mi.domain_size);
  mi.classification = r.kind;
  if (r.order)
    mi.order_digits = r.order->str().size();
  return mi;
}

inline MonodromyInfo
monodromy_summary(CosetAction const &ca)
{
  return monodromy_from(ca.T, ca.S);
}

inline MonodromyInfo
monodromy_summary(OrbitComponent const &c)
{
  return monodromy_summary(coset_action(c));
}

/// Components merged by outer automorphisms.
struct AbsComponent
{
  std::vector<std::size_t> members; // indices into the component list
  std::size_t abs_degree = 0;       // size of the folded space
  MonodromyInfo monodromy;          // of T, S on the folded space
  bool heuristic = false;           // grouped without automorphisms
};

/// Permutation of the class list induced by conjugating with a normalizing
/// permutation a.
inline std::vector<std::uint32_t>
aut_action(EpiContext const &ctx, EpiSet const &set, Permutation const &a)
{
  auto const &t = ctx.table();
  std::vector<std::uint32_t> res(set.size());
  std::vector<point_t> buf;
  auto image = [&](std::uint32_t i) {
    ElementTable::conjugate_into(t.images(i), a.images(), buf);
    auto const j = t.index_of(buf);
    if (j == ElementTable::npos)
      throw usage_error("automorphism " + a.to_cycles() + " does not normalize the group");
    return j;
  };
  for (std::uint32_t i = 0; i < set.size(); ++i)
    res[i] = set.index_of(ctx.canonicalize(image(set[i].x), image(set[i].y)));
  return res;
}

/// Groups components into Out(G)-orbits. With automorphisms, the folded
/// space is the set of orbits of <auts, V^2> on the union of the member
/// components and carries the induced T and S. Without automorphisms the
/// grouping is by equal signature and Higman order, and flagged heuristic.
inline std::vector<AbsComponent>
abs_components(EpiContext const &ctx, EpiSet const &set, std::vector<OrbitComponent> const &comps,
               std::optional<std::vector<Permutation>> const &auts)
{
  std::vector<AbsComponent> res;
  std::size_t const n = set.size();

  if (!auts) {
    std::map<std::tuple<std::uint64_t, bool, std::uint64_t, std::uint64_t, std::vector<std::uint64_t>,
                        std::uint64_t, std::uint64_t>,
             std::size_t>
        slot;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      auto const ca = coset_action(comps[i]);
      auto const sig = signature(comps[i], ca);
      auto const hig = ctx.higman_invariant(set[comps[i].points[0]]).ramification_index;
      auto key = std::make_tuple(sig.d, sig.minus_i, sig.c2, sig.c3, sig.cusp_widths, sig.genus, hig);
      auto [it, fresh] = slot.emplace(key, res.size());
      if (fresh) {
        AbsComponent ac;
        ac.abs_degree = sig.d_bar;
        ac.monodromy = monodromy_summary(ca);
        ac.heuristic = true;
        res.push_back(std::move(ac));
      }
      res[it->second].members.push_back(i);
    }
    return res;
  }

  check_normalizes(ctx.group(), *auts);
  std::vector<std::vector<std::uint32_t>> actions;
  for (auto const &a : *auts)
    actions.push_back(aut_action(ctx, set, a));

  std::vector<std::size_t> comp_of(n);
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (auto p : comps[i].points)
      comp_of[p] = i;

  std::vector<std::size_t> uf(comps.size());
  std::iota(uf.begin(), uf.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (uf[a] != a)
      a = uf[a] = uf[uf[a]];
    return a;
  };
  for (auto const &act : actions)
    for (std::size_t i = 0; i < comps.size(); ++i) {
      std::size_t const a = find(i), b = find(comp_of[act[comps[i].points[0]]]);
      if (a != b)
        uf[std::max(a, b)] = std::min(a, b);
    }

  std::map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    auto [it, fresh] = slot.emplace(find(i), res.size());
    if (fresh)
      res.emplace_back();
    res[it->second].members.push_back(i);
  }

  // Global U, V images from the component tables.
  std::vector<std::uint32_t> gu(n), gv(n);
  for (auto const &c : comps)
    for (std::uint32_t k = 0; k < c.size(); ++k) {
      gu[c.points[k]] = c.points[c.u[k]];
      gv[c.points[k]] = c.points[c.v[k]];
    }

  constexpr std::uint32_t unset = ElementTable::npos;
  std::vector<std::uint32_t> fold(n, unset);
  for (auto &ac : res) {
    std::vector<std::uint32_t> pts;
    for (auto i : ac.members)
      pts.insert(pts.end(), comps[i].points.begin(), comps[i].points.end());
    std::sort(pts.begin(), pts.end());

    std::uint32_t next = 0;
    std::vector<std::uint32_t> queue;
    for (auto start : pts) {
      if (fold[start] != unset)
        continue;
      fold[start] = next;
      queue.assign(1, start);
      for (std::size_t q = 0; q < queue.size(); ++q) {
        auto const p = queue[q];
        auto visit = [&](std::uint32_t r) {
          if (fold[r] == unset) {
            fold[r] = next;
            queue.push_back(r);
          }
        };
        visit(gv[gv[p]]);
        for (auto const &act : actions)
          visit(act[p]);
      }
      ++next;
    }

    auto induced = [&](std::vector<std::uint32_t> const &step) {
      std::vector<point_t> im(next, 0);
      std::vector<bool> done(next, false);
      for (auto p : pts) {
        auto const from = fold[p], to = fold[step[p]];
        if (done[from] && im[from] != to)
          throw consistency_error("moves do not descend to the automorphism quotient");
        im[from] = to;
        done[from] = true;
      }
      return Permutation(std::move(im));
    };
    ac.abs_degree = next;
    ac.monodromy = monodromy_from(induced(gu), induced(gv));
  }
  return res;
}

} // namespace gsa
