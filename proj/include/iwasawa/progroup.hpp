#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Finite quotients G mod p^K of matrix pro-p groups, materialized as explicit
// element sets, and their descending p-central series
//   G_0 = G,  G_{n+1} = G_n^p [G_n, G].

namespace iwasawa::progroup {

/// m x m matrices over Z/p^K. The modulus stays below 2^32 so entry products
/// fit in 64 bits.
class MatrixRing {
 public:
  MatrixRing(std::uint32_t p, std::uint32_t K, std::uint32_t m);

  std::uint32_t p() const { return p_; }
  std::uint32_t K() const { return K_; }
  std::uint32_t m() const { return m_; }
  std::uint32_t modulus() const { return modulus_; }

  /// The same matrix size one p-adic digit deeper.
  MatrixRing lifted() const { return MatrixRing(p_, K_ + 1, m_); }

  friend bool operator==(const MatrixRing&, const MatrixRing&) = default;

 private:
  std::uint32_t p_;
  std::uint32_t K_;
  std::uint32_t m_;
  std::uint32_t modulus_;
};

/// Row-major entries, each in [0, p^K). The ring is carried by the owning
/// group; MatElem itself is a plain value.
struct MatElem {
  std::vector<std::uint32_t> entries;

  friend bool operator==(const MatElem&, const MatElem&) = default;
  friend auto operator<=>(const MatElem&, const MatElem&) = default;
};

struct MatElemHash {
  std::size_t operator()(const MatElem& e) const noexcept;
};

/// Builds a matrix from signed integer rows, reducing entries mod p^K.
MatElem make_matrix(const MatrixRing& ring, const std::vector<std::vector<std::int64_t>>& rows);
MatElem identity(const MatrixRing& ring);
MatElem multiply(const MatrixRing& ring, const MatElem& a, const MatElem& b);
MatElem power(const MatrixRing& ring, const MatElem& a, std::uint64_t e);
/// Throws NotInvertible when the determinant is not a unit mod p.
MatElem inverse(const MatrixRing& ring, const MatElem& a);
/// g^{-1} h^{-1} g h
MatElem commutator(const MatrixRing& ring, const MatElem& g, const MatElem& h);
bool is_invertible(const MatrixRing& ring, const MatElem& a);
/// Entries reinterpreted in another ring of the same size (reduced or lifted
/// by representatives).
MatElem reinterpret(const MatrixRing& to, const MatElem& a);

inline constexpr std::size_t kDefaultCap = 10'000'000;

class FinitePGroup {
 public:
  const MatrixRing& ring() const { return ring_; }
  const std::vector<MatElem>& generators() const { return generators_; }
  /// Sorted lexicographically by entries.
  const std::vector<MatElem>& elements() const { return elements_; }
  std::size_t order() const { return elements_.size(); }
  bool contains(const MatElem& g) const;
  bool is_trivial() const { return elements_.size() == 1; }
  /// log_p of the order.
  unsigned log_order() const;
  bool is_subgroup_of(const FinitePGroup& other) const;

  friend bool operator==(const FinitePGroup& a, const FinitePGroup& b) {
    return a.ring_ == b.ring_ && a.elements_ == b.elements_;
  }

 private:
  friend FinitePGroup closure(const MatrixRing&, const std::vector<MatElem>&, std::size_t);
  friend class SubgroupBuilder;

  FinitePGroup(MatrixRing ring, std::vector<MatElem> generators, std::vector<MatElem> elements)
      : ring_(ring), generators_(std::move(generators)), elements_(std::move(elements)) {}

  MatrixRing ring_;
  std::vector<MatElem> generators_;
  std::vector<MatElem> elements_;
};

/// The subgroup generated by `generators`. Throws NotInvertible on a singular
/// generator, CapExceeded once more than `cap` elements are found, and
/// NotPGroup when the final order is not a power of p.
FinitePGroup closure(const MatrixRing& ring, const std::vector<MatElem>& generators,
                     std::size_t cap = kDefaultCap);

/// G_n^p [G_n, G], computed as the normal closure in G of
/// { g^p, [g, x] : g in G_n, x a generator of G }.
FinitePGroup next_series_term(const FinitePGroup& G_n, const FinitePGroup& G,
                              std::size_t cap = kDefaultCap);

struct SeriesChain {
  std::vector<FinitePGroup> terms;      // G_0 .. G_{depth+1}
  std::vector<std::uint64_t> indices;   // [G_n : G_{n+1}] for n = 0 .. depth
};

/// Indices [G_n : G_{n+1}] for n = 0..depth, each verified to be exact for
/// the underlying pro-p group rather than an artefact of the modulus.
///
/// The index computed in G/N (N the kernel of reduction mod p^K) equals the
/// true index iff G_n ∩ N ⊆ G_{n+1}. That condition is invisible mod p^K, so
/// it is tested in the lift of G one digit deeper: every element of the lifted
/// G_n that is trivial mod p^K must lie in the lifted G_{n+1}. The first index
/// that fails raises PrecisionFloor.
SeriesChain p_central_series(const FinitePGroup& G, unsigned depth,
                             std::size_t cap = kDefaultCap);

/// Like p_central_series but stops at the precision floor instead of
/// throwing. `floor_at` is the first untrusted index, if any.
struct PartialSeries {
  SeriesChain chain;
  std::optional<unsigned> floor_at;
};
PartialSeries p_central_series_partial(const FinitePGroup& G, unsigned depth,
                                       std::size_t cap = kDefaultCap);

/// [G, G] ⊆ G^p.
bool is_powerful(const FinitePGroup& G);

/// Powerful, with all indices up to `depth` equal.
bool is_uniform(const FinitePGroup& G, unsigned depth, std::size_t cap = kDefaultCap);

/// log_p [G : G_1]; throws NotUniform unless is_uniform(G, 1).
unsigned dimension(const FinitePGroup& G, std::size_t cap = kDefaultCap);

// Named groups.

/// Generators I + p E_ij of the congruence kernel of GL_m(Z/p^K) -> GL_m(Z/p).
std::vector<MatElem> congruence_kernel_generators(const MatrixRing& ring);
/// [[1+p, 0], [0, 1]] and [[1, 1], [0, 1]]; requires m = 2.
std::vector<MatElem> false_tate_generators(const MatrixRing& ring);

/// Parses "a,b;c,d" (rows separated by ';', entries by ','). Throws
/// ParseError unless the rows form a square matrix.
std::vector<std::vector<std::int64_t>> parse_matrix_rows(const std::string& text);

}  // namespace iwasawa::progroup
