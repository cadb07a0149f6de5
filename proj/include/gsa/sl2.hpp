#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "permutation.hpp"
#include "util.hpp"

namespace gsa
{

/// 2x2 integer matrix [[a, b], [c, d]].
struct Mat2
{
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  friend bool
  operator==(Mat2 const &, Mat2 const &) = default;

  friend auto
  operator<=>(Mat2 const &, Mat2 const &) = default;

  std::int64_t
  det() const
  {
    return a * d - b * c;
  }

  std::string
  str() const
  {
    return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) + "," +
           std::to_string(d) + "]]";
  }

  friend std::ostream &
  operator<<(std::ostream &os, Mat2 const &m)
  {
    return os << m.str();
  }
};

namespace detail
{

inline std::int64_t
checked_mul_add(std::int64_t x, std::int64_t y, std::int64_t z, std::int64_t w)
{
  std::int64_t p = 0, q = 0, r = 0;
  if (__builtin_mul_overflow(x, y, &p) || __builtin_mul_overflow(z, w, &q) ||
      __builtin_add_overflow(p, q, &r))
    throw cap_exceeded("matrix entry overflows 64 bits");
  return r;
}

inline std::int64_t
mod(std::int64_t v, std::int64_t n)
{
  std::int64_t const r = v % n;
  return r < 0 ? r + n : r;
}

} // namespace detail

/// Exact product; throws cap_exceeded on overflow.
inline Mat2
operator*(Mat2 const &x, Mat2 const &y)
{
  using detail::checked_mul_add;
  return {checked_mul_add(x.a, y.a, x.b, y.c), checked_mul_add(x.a, y.b, x.b, y.d),
          checked_mul_add(x.c, y.a, x.d, y.c), checked_mul_add(x.c, y.b, x.d, y.d)};
}

/// Inverse of a determinant-one matrix.
inline Mat2
inverse_sl2(Mat2 const &m)
{
  return {m.d, -m.b, -m.c, m.a};
}

inline Mat2
reduce(Mat2 const &m, std::int64_t n)
{
  return {detail::mod(m.a, n), detail::mod(m.b, n), detail::mod(m.c, n), detail::mod(m.d, n)};
}

/// Product of matrices with entries in [0, n), reduced mod n. Requires n < 2^31.
inline Mat2
mul_mod(Mat2 const &x, Mat2 const &y, std::int64_t n)
{
  return {(x.a * y.a + x.b * y.c) % n, (x.a * y.b + x.b * y.d) % n, (x.c * y.a + x.d * y.c) % n,
          (x.c * y.b + x.d * y.d) % n};
}

inline Mat2
inverse_mod(Mat2 const &m, std::int64_t n)
{
  return reduce(inverse_sl2(m), n);
}

/// Index of the nonzero vector (x, y) of (Z/n)^2 in the vector action.
inline point_t
vector_index(std::int64_t x, std::int64_t y, std::int64_t n)
{
  return static_cast<point_t>(x * n + y - 1);
}

/// Permutation of the n^2 - 1 nonzero column vectors of (Z/n)^2 given by
/// v -> m v. The map m -> permutation is a homomorphism and is faithful.
inline Permutation
vector_action(Mat2 const &m, std::int64_t n)
{
  Mat2 const r = reduce(m, n);
  std::vector<point_t> im(static_cast<std::size_t>(n * n - 1));
  for (std::int64_t x = 0; x < n; ++x)
    for (std::int64_t y = 0; y < n; ++y) {
      if (x == 0 && y == 0)
        continue;
      std::int64_t const u = (r.a * x + r.b * y) % n;
      std::int64_t const v = (r.c * x + r.d * y) % n;
      im[vector_index(x, y, n)] = vector_index(u, v, n);
    }
  return Permutation(std::move(im));
}

inline std::int64_t
inverse_mod_prime(std::int64_t v, std::int64_t p)
{
  std::int64_t res = 1, base = detail::mod(v, p), e = p - 2;
  while (e > 0) {
    if (e & 1)
      res = res * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return res;
}

/// Action on the projective line P^1(F_p): [x:1] is point x, [1:0] is point p.
/// The column vector (x, y) maps to m (x, y).
inline Permutation
projective_action(Mat2 const &m, std::int64_t p)
{
  Mat2 const r = reduce(m, p);
  std::vector<point_t> im(static_cast<std::size_t>(p + 1));
  auto to_point = [&](std::int64_t x, std::int64_t y) -> point_t {
    if (y == 0)
      return static_cast<point_t>(p);
    return static_cast<point_t>(x * inverse_mod_prime(y, p) % p);
  };
  for (std::int64_t x = 0; x < p; ++x)
    im[static_cast<std::size_t>(x)] = to_point((r.a * x + r.b) % p, (r.c * x + r.d) % p);
  im[static_cast<std::size_t>(p)] = to_point(r.a, r.c);
  return Permutation(std::move(im));
}

/// |SL_2(Z/n)| = n^3 prod_{p | n} (1 - p^-2).
inline BigInt
sl2_group_order_mod(std::uint64_t n)
{
  if (n < 2)
    throw usage_error("modulus must be at least 2");
  BigInt res = BigInt(n) * n * n;
  for (auto p : detail::prime_divisors(n)) {
    res /= p * p;
    res *= p * p - 1;
  }
  return res;
}

/// Least primitive root modulo a prime p.
inline std::int64_t
primitive_root(std::int64_t p)
{
  if (p == 2)
    return 1;
  auto const factors = detail::prime_divisors(static_cast<std::uint64_t>(p - 1));
  for (std::int64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (auto q : factors) {
      std::int64_t res = 1, base = g, e = (p - 1) / static_cast<std::int64_t>(q);
      while (e > 0) {
        if (e & 1)
          res = res * base % p;
        base = base * base % p;
        e >>= 1;
      }
      ok = ok && res != 1;
    }
    if (ok)
      return g;
  }
  throw usage_error("no primitive root");
}

} // namespace gsa
