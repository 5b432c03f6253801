#include "iwasawa/scenarios.hpp"

#include <algorithm>
#include <limits>

#include "iwasawa/arith.hpp"
#include "iwasawa/cyclotomic.hpp"
#include "iwasawa/error.hpp"

namespace iwasawa::scenarios {

using growth::BigInt;
using growth::Fate;
using growth::RamTree;
using growth::StepData;
using growth::TowerData;

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) fail(ErrorCode::InvalidArgument, "empty sampling range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::int64_t Rng::in_range(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) fail(ErrorCode::InvalidArgument, "empty sampling range");
  const auto width = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (width == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(engine_());
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + below(width + 1));
}

DeltaPolicy DeltaPolicy::constant_value(std::int64_t k) {
  DeltaPolicy out;
  out.kind = Kind::Constant;
  out.constant = k;
  return out;
}

DeltaPolicy DeltaPolicy::list(std::vector<std::int64_t> values) {
  DeltaPolicy out;
  out.kind = Kind::List;
  out.values = std::move(values);
  return out;
}

DeltaPolicy DeltaPolicy::uniform(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) fail(ErrorCode::InvalidArgument, "delta range is empty");
  DeltaPolicy out;
  out.kind = Kind::Uniform;
  out.lo = lo;
  out.hi = hi;
  return out;
}

std::string to_string(DeltaPolicy::Kind kind) {
  switch (kind) {
    case DeltaPolicy::Kind::Zero: return "zero";
    case DeltaPolicy::Kind::Constant: return "constant";
    case DeltaPolicy::Kind::List: return "list";
    case DeltaPolicy::Kind::Uniform: return "uniform";
  }
  return "?";
}

std::string to_string(RamPolicy policy) {
  switch (policy) {
    case RamPolicy::Unknown: return "unknown";
    case RamPolicy::Inert: return "inert";
    case RamPolicy::Ramified: return "ramified";
    case RamPolicy::Random: return "random";
  }
  return "?";
}

RamPolicy ram_policy_from_string(const std::string& name) {
  for (RamPolicy policy : {RamPolicy::Unknown, RamPolicy::Inert, RamPolicy::Ramified, RamPolicy::Random}) {
    if (to_string(policy) == name) return policy;
  }
  fail(ErrorCode::InvalidArgument,
       "unknown ram policy '" + name + "' (expected unknown, inert, ramified or random)");
}

std::string to_string(ScenarioSpec::Kind kind) {
  switch (kind) {
    case ScenarioSpec::Kind::FalseTate: return "false_tate";
    case ScenarioSpec::Kind::EllipticGamma: return "elliptic_gamma";
    case ScenarioSpec::Kind::Custom: return "custom";
    case ScenarioSpec::Kind::Random: return "random";
  }
  return "?";
}

RamTree random_tree(std::uint64_t p, std::size_t depth, Rng& rng) {
  RamTree tree;
  std::size_t alive = 1;
  for (std::size_t k = 0; k < depth; ++k) {
    std::vector<Fate> layer(alive);
    std::size_t next = 0;
    for (auto& fate : layer) {
      fate = static_cast<Fate>(rng.below(3));
      next += fate == Fate::Split ? p : 1;
    }
    tree.layers.push_back(std::move(layer));
    alive = next;
  }
  return tree;
}

namespace {

std::vector<std::int64_t> expand_deltas(const DeltaPolicy& policy, std::size_t count, Rng& rng) {
  switch (policy.kind) {
    case DeltaPolicy::Kind::Zero: return std::vector<std::int64_t>(count, 0);
    case DeltaPolicy::Kind::Constant: return std::vector<std::int64_t>(count, policy.constant);
    case DeltaPolicy::Kind::List:
      if (policy.values.size() != count) {
        fail(ErrorCode::LengthMismatch, "delta list has " + std::to_string(policy.values.size()) +
                                            " entries, the tower has " + std::to_string(count) +
                                            " sub-steps");
      }
      return policy.values;
    case DeltaPolicy::Kind::Uniform: {
      std::vector<std::int64_t> out(count);
      for (auto& v : out) v = rng.in_range(policy.lo, policy.hi);
      return out;
    }
  }
  return {};
}

RamTree uniform_tree(std::size_t depth, Fate fate) {
  RamTree tree;
  for (std::size_t k = 0; k < depth; ++k) tree.layers.push_back({fate});
  return tree;
}

TowerData assemble(std::uint64_t p, unsigned d, std::uint64_t s_cyc, unsigned levels,
                   const DeltaPolicy& deltas, const TowerOptions& options) {
  if (levels < 1) fail(ErrorCode::InvalidArgument, "levels must be >= 1");
  TowerData tower;
  tower.p = p;
  tower.d = d;
  tower.lambda0 = options.lambda0;
  tower.s_cyc = s_cyc;
  tower.levels = levels;

  Rng rng(options.seed);
  const std::size_t per_level = d - 1;
  const auto flat = expand_deltas(deltas, levels * per_level, rng);
  tower.steps.assign(levels, std::vector<StepData>(per_level));
  for (unsigned n = 0; n < levels; ++n) {
    for (std::size_t j = 0; j < per_level; ++j) tower.steps[n][j].delta = flat[n * per_level + j];
  }

  const std::size_t depth = levels * per_level;
  // With no primes to track the ramification data is known to be empty.
  if (options.ram != RamPolicy::Unknown || s_cyc == 0) {
    std::vector<RamTree> trees;
    for (std::uint64_t i = 0; i < s_cyc; ++i) {
      switch (options.ram) {
        case RamPolicy::Inert: trees.push_back(uniform_tree(depth, Fate::Inert)); break;
        case RamPolicy::Ramified: trees.push_back(uniform_tree(depth, Fate::Ramify)); break;
        default: trees.push_back(random_tree(p, depth, rng)); break;
      }
    }
    tower.trees = std::move(trees);
  }

  tower.notes.emplace_back("delta policy", to_string(deltas.kind));
  tower.notes.emplace_back("ram policy", s_cyc == 0 ? "none (no primes)" : to_string(options.ram));
  if (d > 2) tower.notes.emplace_back("B_n", "depends on the order of the sub-step filtration");
  growth::validate(tower);
  return tower;
}

}  // namespace

TowerData false_tate(std::uint64_t p, std::uint64_t ell, unsigned levels, const DeltaPolicy& deltas,
                     const TowerOptions& options, std::optional<std::uint64_t> s_cyc_override,
                     std::optional<std::uint64_t> reference_s_cyc) {
  const std::uint64_t computed = cyclotomic::s_cyc_count_adaptive(p, {ell});
  const std::uint64_t used = s_cyc_override.value_or(computed);
  TowerData tower = assemble(p, 2, used, levels, deltas, options);
  std::vector<std::pair<std::string, std::string>> head{
      {"scenario", "false_tate"},
      {"ell", std::to_string(ell)},
      {"s_cyc computed", std::to_string(computed)},
  };
  if (reference_s_cyc) head.emplace_back("s_cyc reference", std::to_string(*reference_s_cyc));
  head.emplace_back("s_cyc used", std::to_string(used) + (s_cyc_override ? " (override)" : " (computed)"));
  tower.notes.insert(tower.notes.begin(), head.begin(), head.end());
  return tower;
}

TowerData elliptic_gamma(std::uint64_t p, const std::vector<std::uint64_t>& bad_primes,
                         std::optional<std::uint64_t> s_cyc, unsigned levels,
                         const DeltaPolicy& deltas, const TowerOptions& options) {
  if (!s_cyc) {
    fail(ErrorCode::MissingSCyc,
         "elliptic_gamma needs s_cyc: the splitting of bad primes in Q(E[p]) is not computed");
  }
  for (std::uint64_t ell : bad_primes) {
    if (!arith::is_prime(ell)) fail(ErrorCode::InvalidArgument, "bad prime " + std::to_string(ell) + " is not prime");
    if (ell == p) fail(ErrorCode::EllEqualsP, "bad primes must differ from p");
  }
  TowerData tower = assemble(p, 4, *s_cyc, levels, deltas, options);
  std::string listed;
  for (std::uint64_t ell : bad_primes) listed += (listed.empty() ? "" : ",") + std::to_string(ell);
  std::vector<std::pair<std::string, std::string>> head{
      {"scenario", "elliptic_gamma"},
      {"bad primes", listed.empty() ? "(none given)" : listed},
      {"s_cyc used", std::to_string(*s_cyc) + " (supplied)"},
  };
  tower.notes.insert(tower.notes.begin(), head.begin(), head.end());
  return tower;
}

TowerData random_tower(std::uint64_t p, unsigned d, unsigned levels, std::int64_t delta_lo,
                       std::int64_t delta_hi, std::uint64_t seed) {
  if (p < 3 || !arith::is_prime(p)) fail(ErrorCode::InvalidArgument, "p must be an odd prime");
  if (d < 2) fail(ErrorCode::InvalidArgument, "d must be >= 2");
  if (levels < 1) fail(ErrorCode::InvalidArgument, "levels must be >= 1");
  if (delta_lo > delta_hi) fail(ErrorCode::InvalidArgument, "delta range is empty");

  Rng rng(seed);
  constexpr int kAttempts = 1000;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    TowerData tower;
    tower.p = p;
    tower.d = d;
    tower.levels = levels;
    tower.lambda0 = rng.in_range(0, 5);
    tower.s_cyc = rng.below(4);
    const std::size_t per_level = d - 1;
    const std::size_t depth = levels * per_level;
    std::vector<RamTree> trees;
    for (std::uint64_t i = 0; i < tower.s_cyc; ++i) trees.push_back(random_tree(p, depth, rng));
    tower.trees = trees;
    tower.steps.assign(levels, std::vector<StepData>(per_level));
    growth::apply_trees(tower);

    // Uniform over the deltas that keep lambda >= 0, which is what per-step
    // rejection of offending draws would produce.
    BigInt lambda = tower.lambda0;
    bool feasible = true;
    for (auto& level : tower.steps) {
      for (auto& step : level) {
        BigInt ram = 0;
        for (std::uint64_t e : *step.ram_events) ram += e - 1;
        const BigInt base = BigInt(p) * lambda + ram;
        BigInt floor_delta;
        const BigInt neg = -base;
        mpz_cdiv_q_ui(floor_delta.get_mpz_t(), neg.get_mpz_t(), p - 1);
        std::int64_t lo = delta_lo;
        if (floor_delta > lo) {
          if (floor_delta > delta_hi) {
            feasible = false;
            break;
          }
          lo = floor_delta.get_si();
        }
        step.delta = rng.in_range(lo, delta_hi);
        lambda = base + BigInt(p - 1) * BigInt(static_cast<long>(step.delta));
      }
      if (!feasible) break;
    }
    if (!feasible) continue;
    tower.notes.emplace_back("scenario", "random");
    tower.notes.emplace_back("seed", std::to_string(seed));
    growth::validate(tower);
    return tower;
  }
  fail(ErrorCode::InvalidArgument, "no delta sequence in [" + std::to_string(delta_lo) + ", " +
                                       std::to_string(delta_hi) + "] keeps lambda nonnegative");
}

TowerData build(const ScenarioSpec& spec) {
  switch (spec.kind) {
    case ScenarioSpec::Kind::FalseTate:
      if (!spec.ell) fail(ErrorCode::InvalidArgument, "false_tate needs ell");
      return false_tate(spec.p, *spec.ell, spec.levels, spec.deltas, spec.options, spec.s_cyc,
                        spec.reference_s_cyc);
    case ScenarioSpec::Kind::EllipticGamma:
      return elliptic_gamma(spec.p, spec.bad_primes, spec.s_cyc, spec.levels, spec.deltas, spec.options);
    case ScenarioSpec::Kind::Random: {
      std::int64_t lo = 0, hi = 0;
      if (spec.deltas.kind == DeltaPolicy::Kind::Uniform) {
        lo = spec.deltas.lo;
        hi = spec.deltas.hi;
      } else if (spec.deltas.kind == DeltaPolicy::Kind::Constant) {
        lo = hi = spec.deltas.constant;
      } else if (spec.deltas.kind != DeltaPolicy::Kind::Zero) {
        fail(ErrorCode::InvalidArgument, "random towers take a zero, constant or uniform delta policy");
      }
      return random_tower(spec.p, spec.d, spec.levels, lo, hi, spec.options.seed);
    }
    case ScenarioSpec::Kind::Custom:
      if (!spec.custom) fail(ErrorCode::InvalidArgument, "custom scenario without tower data");
      return *spec.custom;
  }
  fail(ErrorCode::InvalidArgument, "unknown scenario kind");
}

}  // namespace iwasawa::scenarios
