#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gsa
{

using BigInt = boost::multiprecision::cpp_int;

/// Input that does not satisfy an operation's precondition (malformed specs,
/// degree mismatches, non-generating pairs, ...).
class usage_error : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// A configured resource cap (group order, pair budget, degree) was exceeded.
class cap_exceeded : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant failed. Only a convention or programming bug can
/// trigger this, so callers abort rather than recover.
class consistency_error : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

namespace detail
{

inline std::uint64_t
gcd(std::uint64_t a, std::uint64_t b)
{
  return std::gcd(a, b);
}

inline std::uint64_t
lcm(std::uint64_t a, std::uint64_t b)
{
  if (a == 0 || b == 0)
    return 0;
  std::uint64_t const g = std::gcd(a, b);
  std::uint64_t res = 0;
  if (__builtin_mul_overflow(a / g, b, &res))
    throw cap_exceeded("lcm overflows 64 bits");
  return res;
}

inline bool
is_prime(std::uint64_t n)
{
  if (n < 2)
    return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

inline std::vector<std::uint64_t>
prime_divisors(std::uint64_t n)
{
  std::vector<std::uint64_t> res;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      res.push_back(d);
      while (n % d == 0)
        n /= d;
    }
  }
  if (n > 1)
    res.push_back(n);
  return res;
}

inline std::uint64_t
euler_phi(std::uint64_t n)
{
  std::uint64_t res = n;
  for (auto p : prime_divisors(n))
    res = res / p * (p - 1);
  return res;
}

inline BigInt
factorial(std::uint64_t n)
{
  BigInt res = 1;
  for (std::uint64_t i = 2; i <= n; ++i)
    res *= i;
  return res;
}

inline std::size_t
decimal_digits(BigInt const &v)
{
  return v.str().size();
}

// FNV-1a, used for EpiClass hash keys. Stable across platforms.
class Fnv1a
{
public:
  void
  add(std::uint32_t v)
  {
    for (int i = 0; i < 4; ++i) {
      h_ ^= (v >> (8 * i)) & 0xffu;
      h_ *= 0x100000001b3ull;
    }
  }

  void
  add(std::span<std::uint32_t const> vs)
  {
    for (auto v : vs)
      add(v);
  }

  std::uint64_t
  value() const
  {
    return h_;
  }

private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

} // namespace detail

inline unsigned
default_threads()
{
  unsigned const hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Work items are
/// claimed from a shared counter; callers write results into slot i so the
/// outcome does not depend on the schedule.
template<typename Fn>
void
parallel_for(std::size_t n, unsigned threads, Fn &&fn)
{
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (;;) {
      std::size_t const i = next.fetch_add(1);
      if (i >= n || failed.load())
        return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true))
          failure = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  unsigned const count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t)
    pool.emplace_back(worker);
  for (auto &t : pool)
    t.join();

  if (failure)
    std::rethrow_exception(failure);
}

} // namespace gsa
