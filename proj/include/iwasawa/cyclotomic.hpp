#pragma once

#include <cstdint>
#include <optional>
#include <vector>

// Decomposition of rational primes ell != p in the layers Q(mu_{p^n}) of the
// cyclotomic p-tower.

namespace iwasawa::cyclotomic {

struct SplittingLevel {
  unsigned n = 0;
  std::uint64_t e = 1;  // ell != p is unramified
  std::uint64_t f = 0;  // ord(ell mod p^n)
  std::uint64_t g = 0;  // phi(p^n) / f

  friend bool operator==(const SplittingLevel&, const SplittingLevel&) = default;
};

struct SplitProfile {
  std::uint64_t ell = 0;
  std::uint64_t p = 0;
  std::vector<SplittingLevel> levels;  // n = 1 .. n_max
  /// Set once ord(ell mod p^{n+1}) = p * ord(ell mod p^n) is observed; from
  /// that layer on the prime count is constant.
  std::optional<std::uint64_t> stabilized_g;
  std::optional<unsigned> stable_from;
};

/// Least k >= 1 with ell^k = 1 mod modulus. Throws NotCoprime.
std::uint64_t mult_order(std::uint64_t ell, std::uint64_t modulus);

/// phi(p^n) = (p - 1) p^(n-1).
std::uint64_t euler_phi_prime_power(std::uint64_t p, unsigned n);

SplitProfile split_profile(std::uint64_t p, std::uint64_t ell, unsigned n_max);

/// Sum of the stabilized prime counts over `ells`. Throws NotStabilized
/// naming the first ell whose profile has not stabilized by n_max.
std::uint64_t s_cyc_count(std::uint64_t p, const std::vector<std::uint64_t>& ells, unsigned n_max);

/// Like s_cyc_count, raising n_max until every profile stabilizes or p^n
/// would overflow.
std::uint64_t s_cyc_count_adaptive(std::uint64_t p, const std::vector<std::uint64_t>& ells);

/// Number of irreducible factors of the p^n-th cyclotomic polynomial over
/// F_ell, found by Berlekamp's method: the dimension of the kernel of
/// (Frobenius - 1) on F_ell[x]/(Phi).
std::uint64_t split_oracle(std::uint64_t p, unsigned n, std::uint64_t ell);

}  // namespace iwasawa::cyclotomic
