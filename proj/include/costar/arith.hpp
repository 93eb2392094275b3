#pragma once

#include <cstdint>
#include <limits>

namespace costar {

/// Saturating uint64 arithmetic for the worst-case block-count bounds, which
/// overflow quickly while the actual partitions stay small.
constexpr std::uint64_t sat_max = std::numeric_limits<std::uint64_t>::max();

constexpr std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > sat_max - b ? sat_max : a + b;
}

constexpr std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > sat_max / b ? sat_max : a * b;
}

constexpr std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
  if (exp == 0) return 1;
  if (base <= 1) return base;
  if (exp >= 64) return sat_max;  // base >= 2 overflows 64 bits
  std::uint64_t r = 1;
  for (; exp > 0; --exp) {
    r = sat_mul(r, base);
    if (r == sat_max) return sat_max;
  }
  return r;
}

/// Binomial coefficient C(n, k) with saturation, via the Pascal recurrence so
/// every intermediate value stays exact until it saturates.
constexpr std::uint64_t sat_binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  if (k == 0) return 1;
  if (n > 100000) return sat_max;  // row would be enormous anyway
  std::uint64_t row[65];           // C(i, j) for j <= min(k, 64)
  if (k > 64) return sat_max;      // C(n, 65) with n > 130 saturates; n <= 130
                                   // and k > 64 implies k > n - k contradiction
  for (std::uint64_t j = 0; j <= k; ++j) row[j] = (j == 0) ? 1 : 0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    std::uint64_t limit = i < k ? i : k;
    for (std::uint64_t j = limit; j >= 1; --j) row[j] = sat_add(row[j], row[j - 1]);
  }
  return row[k];
}

}  // namespace costar
