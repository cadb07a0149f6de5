#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "util.hpp"

namespace gsa
{

using point_t = std::uint32_t;

/// A permutation of {0, ..., n-1}. Products compose right to left:
/// (p * q)(i) == p(q(i)).
class Permutation
{
public:
  Permutation() = default;

  explicit Permutation(std::size_t degree)
  : images_(degree)
  {
    std::iota(images_.begin(), images_.end(), point_t{0});
  }

  explicit Permutation(std::vector<point_t> images)
  : images_(std::move(images))
  {
    std::vector<bool> seen(images_.size(), false);
    for (auto im : images_) {
      if (im >= images_.size() || seen[im])
        throw usage_error("image array is not a bijection");
      seen[im] = true;
    }
  }

  /// Wraps an image array known to be a bijection.
  static Permutation
  unchecked(std::vector<point_t> images)
  {
    Permutation res;
    res.images_ = std::move(images);
    return res;
  }

  /// Parses 1-based disjoint cycle notation such as "(1 2 3)(4 5)" or "()".
  /// Commas between points are accepted.
  static Permutation
  from_cycles(std::string_view text, std::size_t degree)
  {
    Permutation res(degree);
    std::vector<bool> used(degree, false);
    std::size_t i = 0;

    auto skip_ws = [&] {
      while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r'))
        ++i;
    };

    skip_ws();
    if (i == text.size())
      throw usage_error("empty permutation text");

    while (i < text.size()) {
      skip_ws();
      if (i == text.size())
        break;
      if (text[i] != '(')
        throw usage_error("expected '(' in cycle notation: " + std::string(text));
      ++i;

      std::vector<point_t> cycle;
      for (;;) {
        skip_ws();
        if (i < text.size() && text[i] == ',') {
          ++i;
          continue;
        }
        if (i < text.size() && text[i] == ')') {
          ++i;
          break;
        }
        std::size_t start = i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9')
          ++i;
        if (start == i)
          throw usage_error("malformed cycle notation: " + std::string(text));
        unsigned long const v = std::stoul(std::string(text.substr(start, i - start)));
        if (v == 0 || v > degree)
          throw usage_error("point " + std::to_string(v) + " outside 1.." + std::to_string(degree));
        if (used[v - 1])
          throw usage_error("cycles are not disjoint: " + std::string(text));
        used[v - 1] = true;
        cycle.push_back(static_cast<point_t>(v - 1));
      }

      for (std::size_t k = 0; k < cycle.size(); ++k)
        res.images_[cycle[k]] = cycle[(k + 1) % cycle.size()];
    }

    return res;
  }

  /// Largest point mentioned in cycle notation (1-based), 0 for "()".
  static std::size_t
  max_point_in(std::string_view text)
  {
    std::size_t best = 0, cur = 0;
    bool in_num = false;
    for (char c : text) {
      if (c >= '0' && c <= '9') {
        cur = cur * 10 + static_cast<std::size_t>(c - '0');
        in_num = true;
      } else {
        if (in_num)
          best = std::max(best, cur);
        cur = 0;
        in_num = false;
      }
    }
    if (in_num)
      best = std::max(best, cur);
    return best;
  }

  std::size_t
  degree() const
  {
    return images_.size();
  }

  point_t
  operator()(point_t i) const
  {
    return images_[i];
  }

  point_t
  operator[](point_t i) const
  {
    return images_[i];
  }

  std::span<point_t const>
  images() const
  {
    return images_;
  }

  bool
  is_identity() const
  {
    for (point_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i)
        return false;
    return true;
  }

  /// First point moved, or degree() for the identity.
  point_t
  first_moved() const
  {
    for (point_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i)
        return i;
    return static_cast<point_t>(images_.size());
  }

  Permutation
  inverse() const
  {
    Permutation res;
    res.images_.resize(images_.size());
    for (point_t i = 0; i < images_.size(); ++i)
      res.images_[images_[i]] = i;
    return res;
  }

  /// Cycle lengths, including fixed points, in ascending order.
  std::vector<std::size_t>
  cycle_type() const
  {
    std::vector<std::size_t> res;
    std::vector<bool> seen(images_.size(), false);
    for (point_t i = 0; i < images_.size(); ++i) {
      if (seen[i])
        continue;
      std::size_t len = 0;
      for (point_t j = i; !seen[j]; j = images_[j]) {
        seen[j] = true;
        ++len;
      }
      res.push_back(len);
    }
    std::sort(res.begin(), res.end());
    return res;
  }

  std::size_t
  fixed_points() const
  {
    std::size_t n = 0;
    for (point_t i = 0; i < images_.size(); ++i)
      n += images_[i] == i;
    return n;
  }

  /// Least k >= 1 with p^k = 1.
  std::uint64_t
  order() const
  {
    std::uint64_t res = 1;
    for (auto len : cycle_type())
      res = detail::lcm(res, len);
    return res;
  }

  bool
  is_even() const
  {
    std::size_t transpositions = 0;
    for (auto len : cycle_type())
      transpositions += len - 1;
    return transpositions % 2 == 0;
  }

  std::string
  to_cycles() const
  {
    std::ostringstream os;
    std::vector<bool> seen(images_.size(), false);
    bool any = false;
    for (point_t i = 0; i < images_.size(); ++i) {
      if (seen[i] || images_[i] == i)
        continue;
      any = true;
      os << '(';
      for (point_t j = i; !seen[j]; j = images_[j]) {
        seen[j] = true;
        if (j != i)
          os << ' ';
        os << j + 1;
      }
      os << ')';
    }
    if (!any)
      os << "()";
    return os.str();
  }

  Permutation
  pow(std::int64_t k) const
  {
    Permutation base = k < 0 ? inverse() : *this;
    std::uint64_t e = static_cast<std::uint64_t>(k < 0 ? -k : k);
    Permutation res(degree());
    while (e > 0) {
      if (e & 1u)
        res = res * base;
      base = base * base;
      e >>= 1u;
    }
    return res;
  }

  friend Permutation
  operator*(Permutation const &p, Permutation const &q)
  {
    if (p.degree() != q.degree())
      throw usage_error("degree mismatch in permutation product");
    Permutation res;
    res.images_.resize(p.images_.size());
    for (point_t i = 0; i < q.images_.size(); ++i)
      res.images_[i] = p.images_[q.images_[i]];
    return res;
  }

  friend bool
  operator==(Permutation const &, Permutation const &) = default;

  friend std::strong_ordering
  operator<=>(Permutation const &a, Permutation const &b)
  {
    return std::lexicographical_compare_three_way(a.images_.begin(), a.images_.end(),
                                                  b.images_.begin(), b.images_.end());
  }

  friend std::ostream &
  operator<<(std::ostream &os, Permutation const &p)
  {
    return os << p.to_cycles();
  }

private:
  std::vector<point_t> images_;
};

/// x^g := g^-1 x g.
inline Permutation
conjugate(Permutation const &x, Permutation const &g)
{
  if (x.degree() != g.degree())
    throw usage_error("degree mismatch in conjugation");
  auto const n = x.degree();
  std::vector<point_t> res(n);
  std::vector<point_t> ginv(n);
  for (point_t i = 0; i < n; ++i)
    ginv[g[i]] = i;
  for (point_t i = 0; i < n; ++i)
    res[i] = ginv[x[g[i]]];
  return Permutation::unchecked(std::move(res));
}

struct PermOps
{
  Permutation product;
  Permutation inverse_of_p;
  std::uint64_t order_of_p;
};

inline PermOps
perm_ops(Permutation const &p, Permutation const &q)
{
  if (p.degree() != q.degree())
    throw usage_error("degree mismatch");
  return {p * q, p.inverse(), p.order()};
}

} // namespace gsa
