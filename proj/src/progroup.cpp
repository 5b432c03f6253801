#include "iwasawa/progroup.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

#include "iwasawa/arith.hpp"
#include "iwasawa/error.hpp"

namespace iwasawa::progroup {

MatrixRing::MatrixRing(std::uint32_t p, std::uint32_t K, std::uint32_t m)
    : p_(p), K_(K), m_(m), modulus_(0) {
  if (p < 3 || !arith::is_prime(p)) {
    fail(ErrorCode::InvalidArgument, "p must be an odd prime, got " + std::to_string(p));
  }
  if (K < 1) fail(ErrorCode::InvalidArgument, "precision K must be >= 1");
  if (m < 1) fail(ErrorCode::InvalidArgument, "matrix size must be >= 1");
  auto mod = arith::checked_pow(p, K);
  if (!mod || *mod > 0xFFFFFFFFull) {
    fail(ErrorCode::InvalidArgument, "p^K must stay below 2^32 for matrix groups");
  }
  modulus_ = static_cast<std::uint32_t>(*mod);
}

std::size_t MatElemHash::operator()(const MatElem& e) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint32_t x : e.entries) {
    h ^= x;
    h *= 1099511628211ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

MatElem make_matrix(const MatrixRing& ring, const std::vector<std::vector<std::int64_t>>& rows) {
  const std::uint32_t m = ring.m();
  if (rows.size() != m) {
    fail(ErrorCode::InvalidArgument,
         "expected " + std::to_string(m) + " rows, got " + std::to_string(rows.size()));
  }
  MatElem out;
  out.entries.reserve(static_cast<std::size_t>(m) * m);
  for (const auto& row : rows) {
    if (row.size() != m) {
      fail(ErrorCode::InvalidArgument,
           "expected rows of length " + std::to_string(m) + ", got " + std::to_string(row.size()));
    }
    for (std::int64_t v : row) {
      out.entries.push_back(static_cast<std::uint32_t>(arith::reduce(v, ring.modulus())));
    }
  }
  return out;
}

MatElem identity(const MatrixRing& ring) {
  const std::uint32_t m = ring.m();
  MatElem out{std::vector<std::uint32_t>(static_cast<std::size_t>(m) * m, 0)};
  for (std::uint32_t i = 0; i < m; ++i) out.entries[i * m + i] = 1 % ring.modulus();
  return out;
}

MatElem multiply(const MatrixRing& ring, const MatElem& a, const MatElem& b) {
  const std::uint32_t m = ring.m();
  const std::uint64_t mod = ring.modulus();
  MatElem out{std::vector<std::uint32_t>(static_cast<std::size_t>(m) * m)};
  for (std::uint32_t i = 0; i < m; ++i) {
    for (std::uint32_t j = 0; j < m; ++j) {
      std::uint64_t acc = 0;
      for (std::uint32_t k = 0; k < m; ++k) {
        acc += static_cast<std::uint64_t>(a.entries[i * m + k]) * b.entries[k * m + j] % mod;
      }
      out.entries[i * m + j] = static_cast<std::uint32_t>(acc % mod);
    }
  }
  return out;
}

MatElem power(const MatrixRing& ring, const MatElem& a, std::uint64_t e) {
  MatElem result = identity(ring);
  MatElem base = a;
  while (e > 0) {
    if (e & 1) result = multiply(ring, result, base);
    e >>= 1;
    if (e > 0) base = multiply(ring, base, base);
  }
  return result;
}

namespace {

// Gauss-Jordan over Z/p^K; pivots must be units. Returns nullopt when the
// matrix is singular mod p.
std::optional<MatElem> try_inverse(const MatrixRing& ring, const MatElem& a) {
  const std::uint32_t m = ring.m();
  const std::uint64_t mod = ring.modulus();
  std::vector<std::uint64_t> left(a.entries.begin(), a.entries.end());
  std::vector<std::uint64_t> right(static_cast<std::size_t>(m) * m, 0);
  for (std::uint32_t i = 0; i < m; ++i) right[i * m + i] = 1 % mod;

  for (std::uint32_t col = 0; col < m; ++col) {
    std::uint32_t pivot = m;
    for (std::uint32_t r = col; r < m; ++r) {
      if (left[r * m + col] % ring.p() != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot == m) return std::nullopt;
    if (pivot != col) {
      for (std::uint32_t k = 0; k < m; ++k) {
        std::swap(left[pivot * m + k], left[col * m + k]);
        std::swap(right[pivot * m + k], right[col * m + k]);
      }
    }
    const std::uint64_t inv = *arith::inverse_mod(left[col * m + col], mod);
    for (std::uint32_t k = 0; k < m; ++k) {
      left[col * m + k] = arith::mul_mod(left[col * m + k], inv, mod);
      right[col * m + k] = arith::mul_mod(right[col * m + k], inv, mod);
    }
    for (std::uint32_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const std::uint64_t factor = left[r * m + col];
      if (factor == 0) continue;
      for (std::uint32_t k = 0; k < m; ++k) {
        left[r * m + k] =
            arith::sub_mod(left[r * m + k], arith::mul_mod(factor, left[col * m + k], mod), mod);
        right[r * m + k] =
            arith::sub_mod(right[r * m + k], arith::mul_mod(factor, right[col * m + k], mod), mod);
      }
    }
  }
  MatElem out;
  out.entries.assign(right.begin(), right.end());
  return out;
}

std::string describe(const MatElem& a, std::uint32_t m) {
  std::ostringstream os;
  for (std::uint32_t i = 0; i < m; ++i) {
    if (i) os << ";";
    for (std::uint32_t j = 0; j < m; ++j) {
      if (j) os << ",";
      os << a.entries[i * m + j];
    }
  }
  return os.str();
}

}  // namespace

bool is_invertible(const MatrixRing& ring, const MatElem& a) {
  return try_inverse(ring, a).has_value();
}

MatElem inverse(const MatrixRing& ring, const MatElem& a) {
  auto inv = try_inverse(ring, a);
  if (!inv) {
    fail(ErrorCode::NotInvertible, "matrix " + describe(a, ring.m()) + " is not invertible mod p");
  }
  return *inv;
}

MatElem commutator(const MatrixRing& ring, const MatElem& g, const MatElem& h) {
  MatElem t = multiply(ring, inverse(ring, g), inverse(ring, h));
  t = multiply(ring, t, g);
  return multiply(ring, t, h);
}

MatElem reinterpret(const MatrixRing& to, const MatElem& a) {
  MatElem out = a;
  for (auto& x : out.entries) x %= to.modulus();
  return out;
}

// Incrementally grows <generators> one generator at a time. Each accepted
// generator multiplies the order by at least p, so at most log_p |H| are kept.
class SubgroupBuilder {
 public:
  SubgroupBuilder(const MatrixRing& ring, std::size_t cap) : ring_(ring), cap_(cap) {
    MatElem one = identity(ring);
    set_.insert(one);
    list_.push_back(std::move(one));
  }

  bool contains(const MatElem& g) const { return set_.count(g) != 0; }

  /// Returns false when g is already a member.
  bool add(const MatElem& g) {
    if (contains(g)) return false;
    generators_.push_back(g);
    // Old elements are closed under the old generators, so they only need
    // multiplying by g; newly found elements need every generator.
    const std::size_t old_size = list_.size();
    for (std::size_t i = 0; i < old_size; ++i) visit(multiply(ring_, list_[i], g));
    for (std::size_t i = old_size; i < list_.size(); ++i) {
      for (const auto& gen : generators_) visit(multiply(ring_, list_[i], gen));
    }
    return true;
  }

  const std::vector<MatElem>& generators() const { return generators_; }

  FinitePGroup finish(std::vector<MatElem> reported_generators) && {
    std::sort(list_.begin(), list_.end());
    return FinitePGroup(ring_, std::move(reported_generators), std::move(list_));
  }

  FinitePGroup finish() && {
    auto gens = generators_;
    return std::move(*this).finish(std::move(gens));
  }

 private:
  void visit(MatElem x) {
    if (set_.insert(x).second) {
      list_.push_back(std::move(x));
      if (list_.size() > cap_) {
        fail(ErrorCode::CapExceeded,
             "group closure exceeded the cap of " + std::to_string(cap_) + " elements");
      }
    }
  }

  MatrixRing ring_;
  std::size_t cap_;
  std::vector<MatElem> generators_;
  std::unordered_set<MatElem, MatElemHash> set_;
  std::vector<MatElem> list_;
};

namespace {

bool is_power_of(std::size_t n, std::uint32_t p) {
  if (n == 0) return false;
  while (n % p == 0) n /= p;
  return n == 1;
}

void check_element(const MatrixRing& ring, const MatElem& g) {
  if (g.entries.size() != static_cast<std::size_t>(ring.m()) * ring.m()) {
    fail(ErrorCode::ParameterMismatch, "generator has the wrong matrix size");
  }
  for (std::uint32_t x : g.entries) {
    if (x >= ring.modulus()) fail(ErrorCode::ParameterMismatch, "generator entry not reduced mod p^K");
  }
  if (!is_invertible(ring, g)) {
    fail(ErrorCode::NotInvertible,
         "generator " + describe(g, ring.m()) + " is not invertible mod p");
  }
}

}  // namespace

FinitePGroup closure(const MatrixRing& ring, const std::vector<MatElem>& generators,
                     std::size_t cap) {
  for (const auto& g : generators) check_element(ring, g);
  SubgroupBuilder builder(ring, cap);
  for (const auto& g : generators) builder.add(g);
  FinitePGroup group = std::move(builder).finish(generators);
  if (!is_power_of(group.order(), ring.p())) {
    fail(ErrorCode::NotPGroup, "closure has order " + std::to_string(group.order()) +
                                   ", not a power of " + std::to_string(ring.p()));
  }
  return group;
}

bool FinitePGroup::contains(const MatElem& g) const {
  return std::binary_search(elements_.begin(), elements_.end(), g);
}

unsigned FinitePGroup::log_order() const {
  unsigned e = 0;
  for (std::size_t n = elements_.size(); n > 1; n /= ring_.p()) ++e;
  return e;
}

bool FinitePGroup::is_subgroup_of(const FinitePGroup& other) const {
  if (!(ring_ == other.ring_)) return false;
  return std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(),
                       elements_.end());
}

FinitePGroup next_series_term(const FinitePGroup& G_n, const FinitePGroup& G, std::size_t cap) {
  const MatrixRing& ring = G.ring();
  if (!G_n.is_subgroup_of(G)) {
    fail(ErrorCode::InvalidArgument, "series term is not a subgroup of the ambient group");
  }
  std::vector<MatElem> gen_inverses;
  for (const auto& x : G.generators()) gen_inverses.push_back(inverse(ring, x));

  SubgroupBuilder builder(ring, cap);
  for (const auto& g : G_n.elements()) {
    builder.add(power(ring, g, ring.p()));
    const MatElem g_inv = inverse(ring, g);
    for (std::size_t i = 0; i < G.generators().size(); ++i) {
      MatElem c = multiply(ring, multiply(ring, g_inv, gen_inverses[i]),
                           multiply(ring, g, G.generators()[i]));
      builder.add(c);
    }
  }
  // Normal closure under conjugation by the generators of G.
  for (std::size_t i = 0; i < builder.generators().size(); ++i) {
    for (std::size_t j = 0; j < G.generators().size(); ++j) {
      const MatElem t = builder.generators()[i];
      builder.add(multiply(ring, multiply(ring, gen_inverses[j], t), G.generators()[j]));
    }
  }
  return std::move(builder).finish();
}

namespace {

bool trivial_mod(const MatElem& h, const MatrixRing& coarse) {
  const std::uint32_t m = coarse.m();
  for (std::uint32_t i = 0; i < m; ++i) {
    for (std::uint32_t j = 0; j < m; ++j) {
      std::uint32_t expect = (i == j) ? 1 % coarse.modulus() : 0;
      if (h.entries[i * m + j] % coarse.modulus() != expect) return false;
    }
  }
  return true;
}

}  // namespace

PartialSeries p_central_series_partial(const FinitePGroup& G, unsigned depth, std::size_t cap) {
  const MatrixRing& ring = G.ring();
  const MatrixRing deep = ring.lifted();
  std::vector<MatElem> lifted_gens;
  for (const auto& g : G.generators()) lifted_gens.push_back(reinterpret(deep, g));
  const FinitePGroup G_deep = closure(deep, lifted_gens, cap);

  PartialSeries out;
  out.chain.terms.push_back(G);
  FinitePGroup current_deep = G_deep;
  for (unsigned n = 0; n <= depth; ++n) {
    FinitePGroup next = next_series_term(out.chain.terms.back(), G, cap);
    FinitePGroup next_deep = next_series_term(current_deep, G_deep, cap);
    for (const auto& h : current_deep.elements()) {
      if (trivial_mod(h, ring) && !next_deep.contains(h)) {
        out.floor_at = n;
        return out;
      }
    }
    out.chain.indices.push_back(out.chain.terms.back().order() / next.order());
    out.chain.terms.push_back(std::move(next));
    current_deep = std::move(next_deep);
  }
  return out;
}

SeriesChain p_central_series(const FinitePGroup& G, unsigned depth, std::size_t cap) {
  auto partial = p_central_series_partial(G, depth, cap);
  if (partial.floor_at) {
    fail(ErrorCode::PrecisionFloor,
         "index [G_" + std::to_string(*partial.floor_at) + " : G_" +
             std::to_string(*partial.floor_at + 1) + "] is not determined modulo p^" +
             std::to_string(G.ring().K()) + "; raise K");
  }
  return std::move(partial.chain);
}

bool is_powerful(const FinitePGroup& G) {
  const MatrixRing& ring = G.ring();
  SubgroupBuilder powers(ring, G.order());
  for (const auto& g : G.elements()) powers.add(power(ring, g, ring.p()));
  const auto& gens = G.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (!powers.contains(commutator(ring, gens[i], gens[j]))) return false;
    }
  }
  return true;
}

bool is_uniform(const FinitePGroup& G, unsigned depth, std::size_t cap) {
  if (!is_powerful(G)) return false;
  const auto chain = p_central_series(G, depth, cap);
  return std::all_of(chain.indices.begin(), chain.indices.end(),
                     [&](std::uint64_t idx) { return idx == chain.indices.front(); });
}

unsigned dimension(const FinitePGroup& G, std::size_t cap) {
  if (!is_powerful(G)) fail(ErrorCode::NotUniform, "group is not powerful");
  const auto chain = p_central_series(G, 1, cap);
  if (chain.indices[0] != chain.indices[1]) {
    fail(ErrorCode::NotUniform, "indices [G:G_1] = " + std::to_string(chain.indices[0]) +
                                    " and [G_1:G_2] = " + std::to_string(chain.indices[1]) +
                                    " differ");
  }
  unsigned d = 0;
  for (std::uint64_t idx = chain.indices.front(); idx > 1; idx /= G.ring().p()) ++d;
  return d;
}

std::vector<MatElem> congruence_kernel_generators(const MatrixRing& ring) {
  std::vector<MatElem> gens;
  const std::uint32_t m = ring.m();
  for (std::uint32_t i = 0; i < m; ++i) {
    for (std::uint32_t j = 0; j < m; ++j) {
      MatElem g = identity(ring);
      g.entries[i * m + j] = (g.entries[i * m + j] + ring.p()) % ring.modulus();
      gens.push_back(std::move(g));
    }
  }
  return gens;
}

std::vector<MatElem> false_tate_generators(const MatrixRing& ring) {
  if (ring.m() != 2) fail(ErrorCode::InvalidArgument, "the false-Tate group uses 2x2 matrices");
  const std::int64_t p = ring.p();
  return {make_matrix(ring, {{1 + p, 0}, {0, 1}}), make_matrix(ring, {{1, 1}, {0, 1}})};
}

std::vector<std::vector<std::int64_t>> parse_matrix_rows(const std::string& text) {
  std::vector<std::vector<std::int64_t>> rows;
  std::stringstream rows_in(text);
  std::string row_text;
  while (std::getline(rows_in, row_text, ';')) {
    std::vector<std::int64_t> row;
    std::stringstream cells(row_text);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      auto b = cell.find_first_not_of(" \t");
      auto e = cell.find_last_not_of(" \t");
      if (b == std::string::npos) fail(ErrorCode::ParseError, "empty matrix entry in \"" + text + "\"");
      std::string trimmed = cell.substr(b, e - b + 1);
      std::size_t used = 0;
      std::int64_t v = 0;
      try {
        v = std::stoll(trimmed, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != trimmed.size()) {
        fail(ErrorCode::ParseError, "invalid matrix entry \"" + trimmed + "\"");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::ParseError, "empty matrix literal");
  for (const auto& row : rows) {
    if (row.size() != rows.size()) {
      fail(ErrorCode::ParseError, "matrix \"" + text + "\" is not square");
    }
  }
  return rows;
}

}  // namespace iwasawa::progroup
