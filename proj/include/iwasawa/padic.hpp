#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Fixed-precision arithmetic in Z/p^K and in the truncated power series ring
// (Z/p^K)[T]/(T^{D+1}), with Weierstrass preparation.

namespace iwasawa::padic {

/// Residue ring Z/p^K for an odd prime p.
class Precision {
 public:
  Precision(std::uint32_t p, std::uint32_t K);

  std::uint32_t p() const { return p_; }
  std::uint32_t K() const { return K_; }
  std::uint64_t modulus() const { return modulus_; }

  friend bool operator==(const Precision&, const Precision&) = default;

 private:
  std::uint32_t p_;
  std::uint32_t K_;
  std::uint64_t modulus_;
};

class PAdicInt {
 public:
  PAdicInt(Precision prec, std::int64_t value);
  static PAdicInt from_residue(Precision prec, std::uint64_t residue);
  /// Reduces an arbitrary decimal integer literal (optional leading '-').
  static PAdicInt from_decimal(Precision prec, std::string_view digits);

  std::uint64_t value() const { return value_; }
  const Precision& precision() const { return prec_; }

  bool is_unit() const { return value_ % prec_.p() != 0; }

  PAdicInt operator+(const PAdicInt& rhs) const;
  PAdicInt operator-(const PAdicInt& rhs) const;
  PAdicInt operator*(const PAdicInt& rhs) const;
  PAdicInt operator-() const;

  friend bool operator==(const PAdicInt&, const PAdicInt&) = default;

 private:
  PAdicInt(Precision prec, std::uint64_t residue, int);

  Precision prec_;
  std::uint64_t value_;
};

/// Largest e <= K with p^e | a; K for zero.
unsigned padic_valuation(const PAdicInt& a);

/// Truncated power series sum_{i<=D} c_i T^i with coefficients in Z/p^K.
class PSeries {
 public:
  /// The zero series.
  PSeries(Precision prec, unsigned D);
  /// Coefficients beyond degree D are dropped; missing ones are zero.
  PSeries(Precision prec, unsigned D, const std::vector<std::int64_t>& coeffs);

  static PSeries from_residues(Precision prec, unsigned D, std::vector<std::uint64_t> residues);
  static PSeries one(Precision prec, unsigned D);

  const Precision& precision() const { return prec_; }
  unsigned degree_bound() const { return D_; }
  PAdicInt coefficient(unsigned i) const;
  const std::vector<std::uint64_t>& residues() const { return coeffs_; }

  friend bool operator==(const PSeries&, const PSeries&) = default;

 private:
  Precision prec_;
  unsigned D_;
  std::vector<std::uint64_t> coeffs_;  // size D+1
};

PSeries ps_add(const PSeries& f, const PSeries& g);
PSeries ps_mul(const PSeries& f, const PSeries& g);

struct Invariants {
  unsigned mu = 0;
  unsigned lambda = 0;

  friend bool operator==(const Invariants&, const Invariants&) = default;
};

/// mu = min coefficient valuation; lambda = first index whose coefficient
/// has valuation exactly mu. Throws ZeroToPrecision on a series that
/// vanishes modulo p^K.
Invariants series_invariants(const PSeries& f);

/// f = p^mu * P(T) * u(T) with P distinguished of degree lambda and u a unit.
///
/// P and u are only meaningful modulo p^{K - mu} (effective_precision); their
/// residues are stored as representatives in [0, p^{effective_precision}).
struct PrepResult {
  unsigned mu = 0;
  unsigned lambda = 0;
  std::vector<PAdicInt> distinguished;  // ascending, leading coefficient 1
  PSeries unit;
  unsigned effective_precision = 0;
};

PrepResult weierstrass_prepare(const PSeries& f);

/// True iff the coefficients form a monic polynomial whose lower
/// coefficients are all divisible by p.
bool is_distinguished(const std::vector<PAdicInt>& poly);

/// Parses `c0 + c1*T + c2*T^2 - T^5 ...`. Coefficients are arbitrary integers
/// reduced mod p^K; powers of T above D are truncated. Repeated powers add.
PSeries parse_series(std::string_view text, Precision prec, unsigned D);

/// Renders the nonzero terms in the same syntax `parse_series` accepts.
std::string format_series(const std::vector<std::uint64_t>& residues);

}  // namespace iwasawa::padic
