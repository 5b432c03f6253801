#pragma once

#include <cstdint>
#include <optional>

// Word-sized modular helpers shared by the padic, progroup and cyclotomic
// modules. Moduli are kept below 2^62 so that sums of two residues never
// overflow and products go through 128-bit intermediates.

namespace iwasawa::arith {

inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 62;

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  std::uint64_t s = a + b;
  return s >= m ? s - m : s;
}

inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a >= b ? a - b : a + (m - b);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Reduces a signed integer into [0, m).
std::uint64_t reduce(std::int64_t value, std::uint64_t m);

/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t m);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// p^k, or nullopt if the result would reach kMaxModulus.
std::optional<std::uint64_t> checked_pow(std::uint64_t p, unsigned k);

}  // namespace iwasawa::arith
