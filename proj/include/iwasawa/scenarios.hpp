#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "iwasawa/growth.hpp"

// Ready-made towers: the false Tate extension (d = 2), the Gamma(p) tower of
// an elliptic curve without CM (d = 4), and seeded random towers whose
// ramification comes from RamTrees.

namespace iwasawa::scenarios {

/// Deterministic generator. Bounded draws use rejection sampling so streams are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t below(std::uint64_t bound);              // uniform in [0, bound)
  std::int64_t in_range(std::int64_t lo, std::int64_t hi);  // uniform in [lo, hi]

 private:
  std::mt19937_64 engine_;
};

/// How the unknown capitulation differences h2 - h1 are filled in.
struct DeltaPolicy {
  enum class Kind { Zero, Constant, List, Uniform };
  Kind kind = Kind::Zero;
  std::int64_t constant = 0;
  std::vector<std::int64_t> values;  // one per sub-step, level-major
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  static DeltaPolicy zero() { return {}; }
  static DeltaPolicy constant_value(std::int64_t k);
  static DeltaPolicy list(std::vector<std::int64_t> values);
  static DeltaPolicy uniform(std::int64_t lo, std::int64_t hi);
};

/// How the ramification of the primes in S(F^cyc) up the tower is modelled.
/// Unknown leaves lambda_exact empty; the other choices build one RamTree per
/// prime (every node inert, every node ramified, or uniformly random fates).
enum class RamPolicy { Unknown, Inert, Ramified, Random };

std::string to_string(DeltaPolicy::Kind kind);
std::string to_string(RamPolicy policy);
RamPolicy ram_policy_from_string(const std::string& name);

struct TowerOptions {
  std::int64_t lambda0 = 0;
  RamPolicy ram = RamPolicy::Unknown;
  std::uint64_t seed = 0;
};

/// d = 2, s_cyc counted from the splitting of ell in Q(mu_{p^infty}) unless
/// overridden. `reference_s_cyc` is an externally quoted count recorded next
/// to the computed one.
growth::TowerData false_tate(std::uint64_t p, std::uint64_t ell, unsigned levels,
                             const DeltaPolicy& deltas, const TowerOptions& options = {},
                             std::optional<std::uint64_t> s_cyc_override = std::nullopt,
                             std::optional<std::uint64_t> reference_s_cyc = std::nullopt);

/// d = 4. The splitting of bad primes in Q(E[p]) is not computed, so s_cyc is
/// required; bad_primes only appear in the report header.
growth::TowerData elliptic_gamma(std::uint64_t p, const std::vector<std::uint64_t>& bad_primes,
                                 std::optional<std::uint64_t> s_cyc, unsigned levels,
                                 const DeltaPolicy& deltas, const TowerOptions& options = {});

/// lambda0 in [0, 5], s_cyc in [0, 3], RamTree fates uniform, deltas uniform in
/// [delta_lo, delta_hi] restricted at every sub-step to values keeping lambda
/// nonnegative. Throws InvalidArgument if no such sequence exists.
growth::TowerData random_tower(std::uint64_t p, unsigned d, unsigned levels,
                               std::int64_t delta_lo, std::int64_t delta_hi, std::uint64_t seed);

growth::RamTree random_tree(std::uint64_t p, std::size_t depth, Rng& rng);

struct ScenarioSpec {
  enum class Kind { FalseTate, EllipticGamma, Custom, Random };
  Kind kind = Kind::Custom;
  std::uint64_t p = 3;
  unsigned d = 2;  // random towers only
  std::optional<std::uint64_t> ell;
  std::vector<std::uint64_t> bad_primes;
  std::optional<std::uint64_t> s_cyc;
  std::optional<std::uint64_t> reference_s_cyc;
  unsigned levels = 3;
  DeltaPolicy deltas;
  TowerOptions options;
  std::optional<growth::TowerData> custom;
};

std::string to_string(ScenarioSpec::Kind kind);

growth::TowerData build(const ScenarioSpec& spec);

}  // namespace iwasawa::scenarios
