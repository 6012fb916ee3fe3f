#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace evoset {

// pi[y] = number of primes <= y for 0 <= y <= n (sieve of Eratosthenes).
inline std::vector<std::int64_t> prime_counts(std::size_t n) {
  std::vector<bool> composite(n + 1, false);
  std::vector<std::int64_t> pi(n + 1, 0);
  std::int64_t count = 0;
  for (std::size_t y = 2; y <= n; ++y) {
    if (!composite[y]) {
      ++count;
      for (std::size_t m = y * y; m <= n; m += y) composite[m] = true;
    }
    pi[y] = count;
  }
  return pi;
}

}  // namespace evoset
