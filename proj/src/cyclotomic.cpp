#include "iwasawa/cyclotomic.hpp"

#include <algorithm>
#include <string>

#include "iwasawa/arith.hpp"
#include "iwasawa/error.hpp"

namespace iwasawa::cyclotomic {

namespace {

// Prime factors of n by trial division; moduli here are prime powers, and
// phi of a prime power factors as (q - 1) * q^k.
std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t result = n;
  for (std::uint64_t q : prime_factors(n)) result = result / q * (q - 1);
  return result;
}

std::uint64_t prime_power(std::uint64_t p, unsigned n) {
  auto m = arith::checked_pow(p, n);
  if (!m) {
    fail(ErrorCode::InvalidArgument,
         std::to_string(p) + "^" + std::to_string(n) + " exceeds the supported modulus range");
  }
  return *m;
}

void require_odd_prime(std::uint64_t p) {
  if (p < 3 || !arith::is_prime(p)) {
    fail(ErrorCode::InvalidArgument, "p must be an odd prime, got " + std::to_string(p));
  }
}

}  // namespace

std::uint64_t mult_order(std::uint64_t ell, std::uint64_t modulus) {
  if (modulus == 0) fail(ErrorCode::InvalidArgument, "modulus must be positive");
  if (arith::gcd(ell % modulus, modulus) != 1) {
    fail(ErrorCode::NotCoprime,
         std::to_string(ell) + " is not coprime to " + std::to_string(modulus));
  }
  if (modulus == 1) return 1;
  const std::uint64_t phi = euler_phi(modulus);
  std::uint64_t order = phi;
  for (std::uint64_t q : prime_factors(phi)) {
    while (order % q == 0 && arith::pow_mod(ell, order / q, modulus) == 1) order /= q;
  }
  return order;
}

std::uint64_t euler_phi_prime_power(std::uint64_t p, unsigned n) {
  if (n == 0) return 1;
  return (p - 1) * prime_power(p, n - 1);
}

SplitProfile split_profile(std::uint64_t p, std::uint64_t ell, unsigned n_max) {
  require_odd_prime(p);
  if (ell == p) {
    fail(ErrorCode::EllEqualsP, "ell must differ from p (only primes away from p are counted)");
  }
  if (!arith::is_prime(ell)) {
    fail(ErrorCode::InvalidArgument, "ell must be prime, got " + std::to_string(ell));
  }
  if (n_max < 2) fail(ErrorCode::InvalidArgument, "n_max must be >= 2");

  SplitProfile profile;
  profile.ell = ell;
  profile.p = p;
  for (unsigned n = 1; n <= n_max; ++n) {
    const std::uint64_t modulus = prime_power(p, n);
    const std::uint64_t f = mult_order(ell % modulus, modulus);
    const std::uint64_t phi = euler_phi_prime_power(p, n);
    profile.levels.push_back({n, 1, f, phi / f});
  }
  for (std::size_t i = 0; i + 1 < profile.levels.size(); ++i) {
    if (profile.levels[i + 1].f == p * profile.levels[i].f) {
      profile.stable_from = profile.levels[i].n;
      profile.stabilized_g = profile.levels[i].g;
      break;
    }
  }
  return profile;
}

std::uint64_t s_cyc_count(std::uint64_t p, const std::vector<std::uint64_t>& ells,
                          unsigned n_max) {
  std::vector<std::uint64_t> seen;
  std::uint64_t total = 0;
  for (std::uint64_t ell : ells) {
    if (std::find(seen.begin(), seen.end(), ell) != seen.end()) {
      fail(ErrorCode::InvalidArgument, "duplicate prime " + std::to_string(ell));
    }
    seen.push_back(ell);
    const auto profile = split_profile(p, ell, n_max);
    if (!profile.stabilized_g) {
      fail(ErrorCode::NotStabilized, "splitting of " + std::to_string(ell) +
                                         " has not stabilized by layer " +
                                         std::to_string(n_max) + "; raise the level count");
    }
    total += *profile.stabilized_g;
  }
  return total;
}

std::uint64_t s_cyc_count_adaptive(std::uint64_t p, const std::vector<std::uint64_t>& ells) {
  require_odd_prime(p);
  unsigned n_max = 2;
  while (true) {
    try {
      return s_cyc_count(p, ells, n_max);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotStabilized || !arith::checked_pow(p, n_max + 1)) throw;
    }
    ++n_max;
  }
}

namespace {

using Poly = std::vector<std::uint32_t>;  // ascending coefficients over F_ell

// Exact quotient of (x^a - 1) by (x^b - 1) for b | a.
Poly cyclotomic_prime_power(std::uint64_t p, unsigned n, std::uint32_t ell) {
  const std::size_t a = prime_power(p, n);
  const std::size_t b = prime_power(p, n - 1);
  Poly num(a + 1, 0);
  num[a] = 1;
  num[0] = ell - 1;
  // Long division by the monic divisor x^b - 1.
  Poly quot(a - b + 1, 0);
  for (std::size_t k = a; k + 1 > b; --k) {
    const std::uint32_t c = num[k];
    if (c == 0) continue;
    quot[k - b] = c;
    num[k] = 0;
    num[k - b] = (num[k - b] + c) % ell;  // subtract c * x^{k-b} * (-1)
  }
  return quot;
}

// Rank over F_ell of a dense square matrix, destroying it.
std::size_t rank_mod(std::vector<std::uint32_t>& mat, std::size_t dim, std::uint32_t ell) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < dim && rank < dim; ++col) {
    std::size_t pivot = dim;
    for (std::size_t r = rank; r < dim; ++r) {
      if (mat[r * dim + col] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot == dim) continue;
    if (pivot != rank) {
      std::swap_ranges(mat.begin() + pivot * dim + col, mat.begin() + pivot * dim + dim,
                       mat.begin() + rank * dim + col);
    }
    std::uint32_t* prow = &mat[rank * dim];
    const std::uint64_t inv = *arith::inverse_mod(prow[col], ell);
    for (std::size_t k = col; k < dim; ++k) prow[k] = static_cast<std::uint32_t>(prow[k] * inv % ell);
    for (std::size_t r = rank + 1; r < dim; ++r) {
      std::uint32_t* row = &mat[r * dim];
      const std::uint32_t factor = row[col];
      if (factor == 0) continue;
      const std::uint32_t neg = ell - factor;
      for (std::size_t k = col; k < dim; ++k) {
        if (prow[k] != 0) row[k] = static_cast<std::uint32_t>((row[k] + std::uint64_t{neg} * prow[k]) % ell);
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::uint64_t split_oracle(std::uint64_t p, unsigned n, std::uint64_t ell) {
  require_odd_prime(p);
  if (n < 1) fail(ErrorCode::InvalidArgument, "layer index must be >= 1");
  if (ell == p) fail(ErrorCode::EllEqualsP, "ell must differ from p");
  if (!arith::is_prime(ell) || ell > 65521) {
    fail(ErrorCode::InvalidArgument, "ell must be a prime below 2^16");
  }
  if (euler_phi_prime_power(p, n) > 20000) {
    fail(ErrorCode::InvalidArgument, "cyclotomic degree too large for the factorization oracle");
  }
  const auto q = static_cast<std::uint32_t>(ell);
  const Poly f = cyclotomic_prime_power(p, n, q);
  const std::size_t dim = f.size() - 1;

  std::vector<std::pair<std::size_t, std::uint32_t>> f_low;  // nonzero terms below the leading one
  for (std::size_t j = 0; j < dim; ++j) {
    if (f[j] != 0) f_low.emplace_back(j, f[j]);
  }

  // Row i of the Berlekamp matrix holds x^{i*ell} mod f, built from row i-1
  // by multiplying with x^ell and reducing from the top.
  std::vector<std::uint32_t> mat(dim * dim, 0);
  Poly row(dim, 0);
  row[0] = 1;
  Poly work(dim + q, 0);
  for (std::size_t i = 0; i < dim; ++i) {
    std::copy(row.begin(), row.end(), mat.begin() + i * dim);
    mat[i * dim + i] = (mat[i * dim + i] + q - 1) % q;  // Q - I
    std::fill(work.begin(), work.end(), 0);
    std::copy(row.begin(), row.end(), work.begin() + q);
    for (std::size_t k = dim + q - 1; k >= dim; --k) {
      const std::uint32_t c = work[k];
      if (c == 0) continue;
      work[k] = 0;
      for (const auto& [j, fj] : f_low) {
        std::size_t idx = k - dim + j;
        work[idx] = static_cast<std::uint32_t>((work[idx] + std::uint64_t{q - c} * fj) % q);
      }
    }
    std::copy(work.begin(), work.begin() + dim, row.begin());
  }
  return dim - rank_mod(mat, dim, q);
}

}  // namespace iwasawa::cyclotomic
