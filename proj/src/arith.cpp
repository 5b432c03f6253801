#include "iwasawa/arith.hpp"

#include <array>

namespace iwasawa::arith {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t reduce(std::int64_t value, std::uint64_t m) {
  if (value >= 0) return static_cast<std::uint64_t>(value) % m;
  // -(value+1) avoids overflow at INT64_MIN.
  std::uint64_t neg = static_cast<std::uint64_t>(-(value + 1)) % m;
  return (m - 1 - neg) % m;
}

std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t m) {
  __int128 old_r = static_cast<__int128>(a % m), r = m;
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    __int128 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) {
    if (m == 1) return 0;
    return std::nullopt;
  }
  __int128 mm = m;
  old_s %= mm;
  if (old_s < 0) old_s += mm;
  return static_cast<std::uint64_t>(old_s);
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::array<std::uint64_t, 12> kBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t q : kBases) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t p, unsigned k) {
  std::uint64_t result = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (result >= kMaxModulus / p) return std::nullopt;
    result *= p;
  }
  return result;
}

}  // namespace iwasawa::arith
