#include "iwasawa/padic.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "iwasawa/arith.hpp"
#include "iwasawa/error.hpp"

namespace iwasawa::padic {

using arith::add_mod;
using arith::mul_mod;
using arith::sub_mod;

namespace {

using Coeffs = std::vector<std::uint64_t>;

void require_same(const Precision& a, const Precision& b) {
  if (!(a == b)) {
    fail(ErrorCode::ParameterMismatch,
         "p-adic operands disagree on (p, K): (" + std::to_string(a.p()) + ", " +
             std::to_string(a.K()) + ") vs (" + std::to_string(b.p()) + ", " +
             std::to_string(b.K()) + ")");
  }
}

// Product truncated to `len` coefficients.
Coeffs mul_trunc(const Coeffs& a, const Coeffs& b, std::size_t len, std::uint64_t m) {
  Coeffs out(len, 0);
  for (std::size_t i = 0; i < a.size() && i < len; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j) {
      out[i + j] = add_mod(out[i + j], mul_mod(a[i], b[j], m), m);
    }
  }
  return out;
}

// Inverse of a series with unit constant term, truncated to `len` terms.
Coeffs inverse_trunc(const Coeffs& a, std::size_t len, std::uint64_t m) {
  auto c0_inv = arith::inverse_mod(a.at(0), m);
  if (!c0_inv) fail(ErrorCode::InvalidArgument, "series constant term is not a unit");
  Coeffs inv(len, 0);
  inv[0] = *c0_inv;
  for (std::size_t n = 1; n < len; ++n) {
    std::uint64_t acc = 0;
    for (std::size_t k = 1; k <= n && k < a.size(); ++k) {
      acc = add_mod(acc, mul_mod(a[k], inv[n - k], m), m);
    }
    inv[n] = mul_mod(sub_mod(0, acc, m), *c0_inv, m);
  }
  return inv;
}

unsigned valuation_of(std::uint64_t value, std::uint32_t p, std::uint32_t K) {
  if (value == 0) return K;
  unsigned e = 0;
  while (value % p == 0 && e < K) {
    value /= p;
    ++e;
  }
  return e;
}

}  // namespace

Precision::Precision(std::uint32_t p, std::uint32_t K) : p_(p), K_(K), modulus_(0) {
  if (p < 3 || !arith::is_prime(p)) {
    fail(ErrorCode::InvalidArgument, "p must be an odd prime, got " + std::to_string(p));
  }
  if (K < 1) fail(ErrorCode::InvalidArgument, "precision K must be >= 1");
  auto m = arith::checked_pow(p, K);
  if (!m) {
    fail(ErrorCode::InvalidArgument,
         "p^K = " + std::to_string(p) + "^" + std::to_string(K) + " exceeds 2^62");
  }
  modulus_ = *m;
}

PAdicInt::PAdicInt(Precision prec, std::int64_t value)
    : prec_(prec), value_(arith::reduce(value, prec.modulus())) {}

PAdicInt::PAdicInt(Precision prec, std::uint64_t residue, int) : prec_(prec), value_(residue) {}

PAdicInt PAdicInt::from_residue(Precision prec, std::uint64_t residue) {
  return PAdicInt(prec, residue % prec.modulus(), 0);
}

PAdicInt PAdicInt::from_decimal(Precision prec, std::string_view digits) {
  bool negative = false;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    negative = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (digits.empty()) fail(ErrorCode::ParseError, "empty integer literal");
  const std::uint64_t m = prec.modulus();
  std::uint64_t acc = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      fail(ErrorCode::ParseError, "invalid digit '" + std::string(1, c) + "' in integer literal");
    }
    acc = add_mod(mul_mod(acc, 10 % m, m), static_cast<std::uint64_t>(c - '0') % m, m);
  }
  if (negative) acc = sub_mod(0, acc, m);
  return PAdicInt(prec, acc, 0);
}

PAdicInt PAdicInt::operator+(const PAdicInt& rhs) const {
  require_same(prec_, rhs.prec_);
  return PAdicInt(prec_, add_mod(value_, rhs.value_, prec_.modulus()), 0);
}

PAdicInt PAdicInt::operator-(const PAdicInt& rhs) const {
  require_same(prec_, rhs.prec_);
  return PAdicInt(prec_, sub_mod(value_, rhs.value_, prec_.modulus()), 0);
}

PAdicInt PAdicInt::operator*(const PAdicInt& rhs) const {
  require_same(prec_, rhs.prec_);
  return PAdicInt(prec_, mul_mod(value_, rhs.value_, prec_.modulus()), 0);
}

PAdicInt PAdicInt::operator-() const {
  return PAdicInt(prec_, sub_mod(0, value_, prec_.modulus()), 0);
}

unsigned padic_valuation(const PAdicInt& a) {
  return valuation_of(a.value(), a.precision().p(), a.precision().K());
}

PSeries::PSeries(Precision prec, unsigned D) : prec_(prec), D_(D), coeffs_(D + 1, 0) {
  if (D < 1) fail(ErrorCode::InvalidArgument, "truncation degree D must be >= 1");
}

PSeries::PSeries(Precision prec, unsigned D, const std::vector<std::int64_t>& coeffs)
    : PSeries(prec, D) {
  for (std::size_t i = 0; i < coeffs.size() && i <= D; ++i) {
    coeffs_[i] = arith::reduce(coeffs[i], prec.modulus());
  }
}

PSeries PSeries::from_residues(Precision prec, unsigned D, std::vector<std::uint64_t> residues) {
  PSeries s(prec, D);
  for (std::size_t i = 0; i < residues.size() && i <= D; ++i) {
    s.coeffs_[i] = residues[i] % prec.modulus();
  }
  return s;
}

PSeries PSeries::one(Precision prec, unsigned D) {
  PSeries s(prec, D);
  s.coeffs_[0] = 1 % prec.modulus();
  return s;
}

PAdicInt PSeries::coefficient(unsigned i) const {
  if (i > D_) fail(ErrorCode::InvalidArgument, "coefficient index beyond truncation degree");
  return PAdicInt::from_residue(prec_, coeffs_[i]);
}

namespace {

void require_compatible(const PSeries& f, const PSeries& g) {
  if (!(f.precision() == g.precision()) || f.degree_bound() != g.degree_bound()) {
    fail(ErrorCode::ParameterMismatch,
         "series disagree on (p, K, D): (" + std::to_string(f.precision().p()) + ", " +
             std::to_string(f.precision().K()) + ", " + std::to_string(f.degree_bound()) +
             ") vs (" + std::to_string(g.precision().p()) + ", " +
             std::to_string(g.precision().K()) + ", " + std::to_string(g.degree_bound()) + ")");
  }
}

}  // namespace

PSeries ps_add(const PSeries& f, const PSeries& g) {
  require_compatible(f, g);
  const std::uint64_t m = f.precision().modulus();
  Coeffs out(f.residues().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = add_mod(f.residues()[i], g.residues()[i], m);
  }
  return PSeries::from_residues(f.precision(), f.degree_bound(), std::move(out));
}

PSeries ps_mul(const PSeries& f, const PSeries& g) {
  require_compatible(f, g);
  auto out = mul_trunc(f.residues(), g.residues(), f.degree_bound() + 1, f.precision().modulus());
  return PSeries::from_residues(f.precision(), f.degree_bound(), std::move(out));
}

Invariants series_invariants(const PSeries& f) {
  const auto& prec = f.precision();
  unsigned mu = prec.K();
  unsigned lambda = 0;
  for (unsigned i = 0; i <= f.degree_bound(); ++i) {
    unsigned v = valuation_of(f.residues()[i], prec.p(), prec.K());
    if (v < mu) {
      mu = v;
      lambda = i;
    }
  }
  if (mu == prec.K()) {
    fail(ErrorCode::ZeroToPrecision,
         "series vanishes modulo p^K; mu and lambda are undefined at this precision");
  }
  return {mu, lambda};
}

bool is_distinguished(const std::vector<PAdicInt>& poly) {
  if (poly.empty() || poly.back().value() != 1) return false;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
    if (poly[i].is_unit()) return false;
  }
  return true;
}

PrepResult weierstrass_prepare(const PSeries& f) {
  const auto inv = series_invariants(f);
  const auto& prec = f.precision();
  const unsigned D = f.degree_bound();
  if (inv.mu >= prec.K()) {
    fail(ErrorCode::PrecisionExhausted, "mu >= K leaves no significant digits");
  }
  if (inv.lambda > D) {
    fail(ErrorCode::TruncationTooShort, "lambda exceeds the truncation degree");
  }

  const unsigned eff = prec.K() - inv.mu;
  const std::uint64_t m = *arith::checked_pow(prec.p(), eff);
  const std::uint64_t p_mu = *arith::checked_pow(prec.p(), inv.mu);

  // g = f / p^mu, known modulo p^eff.
  Coeffs g(D + 1);
  for (unsigned i = 0; i <= D; ++i) g[i] = (f.residues()[i] / p_mu) % m;

  PrepResult result{inv.mu, inv.lambda, {}, PSeries(prec, D), eff};
  const unsigned lambda = inv.lambda;

  if (lambda == 0) {
    result.distinguished.push_back(PAdicInt(prec, 1));
    result.unit = PSeries::from_residues(prec, D, g);
    return result;
  }

  // g = A + T^lambda * B with A = 0 mod p and B(0) a unit. Find U with
  // T^{-lambda}(g U) = 1, i.e. the fixed point of U = B^{-1}(1 - T^{-lambda}(A U)).
  // The input is treated as the polynomial it represents; working to length
  // L = D + 1 + lambda*(eff + 1) makes P exact modulo p^eff.
  const std::size_t L = D + 1 + static_cast<std::size_t>(lambda) * (eff + 1);
  Coeffs A(g.begin(), g.begin() + lambda);
  Coeffs B(g.begin() + lambda, g.end());
  const Coeffs B_inv = inverse_trunc(B, L, m);

  Coeffs U = B_inv;
  const std::size_t max_iterations = static_cast<std::size_t>(eff) * (D + 1) + 1;
  bool converged = false;
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    Coeffs AU = mul_trunc(A, U, L + lambda, m);
    Coeffs rhs(L, 0);
    for (std::size_t i = 0; i < L; ++i) rhs[i] = sub_mod(0, AU[i + lambda], m);
    rhs[0] = add_mod(rhs[0], 1 % m, m);
    Coeffs next = mul_trunc(B_inv, rhs, L, m);
    if (next == U) {
      converged = true;
      break;
    }
    U = std::move(next);
  }
  if (!converged) {
    fail(ErrorCode::PrecisionExhausted, "Weierstrass iteration failed to converge");
  }

  Coeffs lower = mul_trunc(A, U, lambda, m);
  for (unsigned i = 0; i < lambda; ++i) {
    result.distinguished.push_back(PAdicInt::from_residue(prec, lower[i]));
  }
  result.distinguished.push_back(PAdicInt(prec, 1));

  U.resize(D + 1);
  result.unit = PSeries::from_residues(prec, D, inverse_trunc(U, D + 1, m));
  return result;
}

namespace {

class SeriesParser {
 public:
  SeriesParser(std::string_view text, Precision prec, unsigned D)
      : text_(text), prec_(prec), out_(D + 1, 0) {}

  Coeffs parse() {
    skip_ws();
    if (pos_ == text_.size()) error("empty series literal");
    bool first = true;
    while (pos_ < text_.size()) {
      bool negative = false;
      if (peek() == '+' || peek() == '-') {
        negative = peek() == '-';
        ++pos_;
        skip_ws();
      } else if (!first) {
        error("expected '+' or '-'");
      }
      parse_term(negative);
      first = false;
      skip_ws();
    }
    return out_;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ParseError,
         "series literal: " + what + " at column " + std::to_string(pos_ + 1) + " in \"" +
             std::string(text_) + "\"");
  }

  std::string_view digits() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void parse_term(bool negative) {
    const std::uint64_t m = prec_.modulus();
    std::uint64_t coeff = 1 % m;
    bool has_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      coeff = PAdicInt::from_decimal(prec_, digits()).value();
      has_coeff = true;
      skip_ws();
    }
    unsigned long long power = 0;
    if (has_coeff && peek() == '*') {
      ++pos_;
      skip_ws();
      if (peek() != 'T') error("expected 'T' after '*'");
    }
    if (peek() == 'T') {
      ++pos_;
      power = 1;
      skip_ws();
      if (peek() == '^') {
        ++pos_;
        skip_ws();
        auto exp = digits();
        if (exp.empty()) error("expected exponent after '^'");
        if (exp.size() > 9) error("exponent too large");
        power = std::stoull(std::string(exp));
      }
    } else if (!has_coeff) {
      error("expected a coefficient or 'T'");
    }
    if (negative) coeff = sub_mod(0, coeff, m);
    if (power < out_.size()) out_[power] = add_mod(out_[power], coeff, m);
  }

  std::string_view text_;
  Precision prec_;
  Coeffs out_;
  std::size_t pos_ = 0;
};

}  // namespace

PSeries parse_series(std::string_view text, Precision prec, unsigned D) {
  if (D < 1) fail(ErrorCode::InvalidArgument, "truncation degree D must be >= 1");
  return PSeries::from_residues(prec, D, SeriesParser(text, prec, D).parse());
}

std::string format_series(const std::vector<std::uint64_t>& residues) {
  std::ostringstream os;
  bool any = false;
  for (std::size_t i = 0; i < residues.size(); ++i) {
    if (residues[i] == 0) continue;
    if (any) os << " + ";
    any = true;
    if (i == 0) {
      os << residues[i];
    } else {
      if (residues[i] != 1) os << residues[i] << "*";
      os << "T";
      if (i > 1) os << "^" << i;
    }
  }
  if (!any) os << "0";
  return os.str();
}

}  // namespace iwasawa::padic
