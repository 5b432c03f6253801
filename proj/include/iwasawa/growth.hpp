#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

// lambda-invariant growth along a uniform pro-p tower. The tower is cut into
// degree-p steps (d - 1 sub-steps per level) and the step formula
//
//   lambda(L) = p lambda(K) + sum_{w !| p} (e(w) - 1) + (p - 1)(h2 - h1)
//
// is applied along the concatenated filtration. All arithmetic is exact.

namespace iwasawa::growth {

using BigInt = mpz_class;

/// One degree-p step. `delta` is h2 - h1; `ram_events` are the ramification
/// indices e(w) (each 1 or p) of the primes w not above p, or nullopt when
/// they are unknown.
struct StepData {
  std::int64_t delta = 0;
  std::optional<std::vector<std::uint64_t>> ram_events;

  friend bool operator==(const StepData&, const StepData&) = default;
};

enum class Fate { Split, Inert, Ramify };

/// Genealogy of the primes above one prime of S(F^cyc). layers[k] lists the
/// fate at step k of every prime alive at depth k, children in parent order:
/// a split node has p children, inert and ramified nodes one each.
struct RamTree {
  std::vector<std::vector<Fate>> layers;

  friend bool operator==(const RamTree&, const RamTree&) = default;
};

/// Throws MalformedTree when layer sizes disagree with the fates above them.
void validate_tree(const RamTree& tree, std::uint64_t p);

/// e(w) list at step k: p per ramified node, 1 per child of inert/split nodes.
std::vector<std::uint64_t> ram_from_tree(const RamTree& tree, std::size_t k, std::uint64_t p);

/// Encodes fates as 's', 'i', 'r' per layer and back.
std::vector<std::string> tree_to_strings(const RamTree& tree);
RamTree tree_from_strings(const std::vector<std::string>& layers);

struct TowerData {
  std::uint64_t p = 3;
  unsigned d = 2;
  std::int64_t lambda0 = 0;
  std::uint64_t s_cyc = 0;
  bool mu0_zero = true;
  unsigned levels = 0;
  /// steps[n][j], n < levels, j < d - 1.
  std::vector<std::vector<StepData>> steps;
  /// When present, one tree per prime of S(F^cyc) (so trees.size() == s_cyc)
  /// and every ram_events list is derived from them.
  std::optional<std::vector<RamTree>> trees;
  /// Free-form provenance shown in report headers, e.g. computed vs. supplied
  /// prime counts.
  std::vector<std::pair<std::string, std::string>> notes;
};

/// Checks every structural invariant (odd prime p, d >= 2, mu = 0 assumption,
/// d - 1 sub-steps per level, e(w) in {1, p}, tree consistency).
void validate(const TowerData& tower);

/// Fills ram_events from the trees, if any.
void apply_trees(TowerData& tower);

BigInt pow_big(std::uint64_t p, std::uint64_t e);

/// One application of the step formula. Throws NegativeLambda, or
/// IncompleteStepData when the ramification data is unknown.
BigInt kida_step(std::uint64_t p, const BigInt& lambda_K, const StepData& step);

/// sum_j p^{d-2-j} deltas[j]; throws LengthMismatch unless deltas has d - 1 entries.
BigInt compute_B(std::uint64_t p, unsigned d, std::span<const std::int64_t> deltas);

/// (p - 1) sum_{i<n} p^{(d-1)(n-1-i)} B_i, with C_0 = 0.
BigInt compute_C(std::uint64_t p, unsigned d, std::span<const BigInt> B_list);

struct XiExtremes {
  std::int64_t minus = 0;
  std::int64_t plus = 0;
};

/// min and max of the recorded sub-step deltas; throws EmptyHistory.
XiExtremes xi_extremes(std::span<const std::int64_t> delta_history);

/// (p^{n(d-1)} - 1) xi^- <= C_n <= (p^{n(d-1)} - 1) xi^+
bool check_c_bounds(std::uint64_t p, unsigned d, unsigned n, const BigInt& C_n,
                    std::int64_t xi_minus, std::int64_t xi_plus);

struct Bounds {
  BigInt lower;
  BigInt upper;
};

/// p^{n(d-1)}(lambda0 + xi^-) - xi^-  and  p^{n(d-1)}(lambda0 + s + xi^+) - xi^+.
Bounds lambda_bounds(std::uint64_t p, unsigned d, unsigned n, std::int64_t lambda0,
                     std::uint64_t s_cyc, std::int64_t xi_minus, std::int64_t xi_plus);

/// p^{n(d-1)} lambda0 + C_n  and  p^{n(d-1)}(lambda0 + s) + C_n.
Bounds proof_bounds(std::uint64_t p, unsigned d, unsigned n, std::int64_t lambda0,
                    std::uint64_t s_cyc, const BigInt& C_n);

/// lambda at levels 0..levels, applying the step formula across the
/// concatenated filtration in sub-step order. Requires complete ram data.
std::vector<BigInt> unroll_lambda(const TowerData& tower);

struct ReportRow {
  unsigned n = 0;
  std::optional<BigInt> lambda_exact;
  std::optional<BigInt> B_n;  // absent on the final level (no step leaves it)
  BigInt C_n;
  std::int64_t xi_minus = 0;
  std::int64_t xi_plus = 0;
  BigInt bound_lower;
  BigInt bound_upper;
  BigInt proof_lower;
  BigInt proof_upper;
  std::optional<double> ratio;  // lambda_exact / p^{n(d-1)}

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct GrowthReport {
  std::uint64_t p = 0;
  unsigned d = 0;
  std::int64_t lambda0 = 0;
  std::uint64_t s_cyc = 0;
  unsigned levels = 0;
  bool ram_from_trees = false;
  std::vector<std::pair<std::string, std::string>> notes;
  std::vector<ReportRow> rows;
  std::vector<std::string> violations;
};

/// Runs the whole pipeline. lambda_exact is filled up to the first level whose
/// steps lack ramification data. Every row is checked against the C_n bounds,
/// the nesting of the two bound pairs, and (where lambda_exact exists) both
/// bound pairs; failures are listed in `violations`, not thrown.
GrowthReport simulate(const TowerData& tower);

}  // namespace iwasawa::growth
