#include "iwasawa/growth.hpp"

#include <algorithm>

#include "iwasawa/arith.hpp"
#include "iwasawa/error.hpp"

namespace iwasawa::growth {

namespace {

std::uint64_t children_of(Fate fate, std::uint64_t p) { return fate == Fate::Split ? p : 1; }

std::string step_label(std::size_t k, unsigned d) {
  const std::size_t per_level = d - 1;
  return "level " + std::to_string(k / per_level) + ", sub-step " + std::to_string(k % per_level);
}

}  // namespace

void validate_tree(const RamTree& tree, std::uint64_t p) {
  std::uint64_t expected = 1;
  for (std::size_t k = 0; k < tree.layers.size(); ++k) {
    if (tree.layers[k].size() != expected) {
      fail(ErrorCode::MalformedTree, "tree layer " + std::to_string(k) + " has " +
                                         std::to_string(tree.layers[k].size()) +
                                         " nodes, expected " + std::to_string(expected));
    }
    expected = 0;
    for (Fate fate : tree.layers[k]) expected += children_of(fate, p);
  }
}

std::vector<std::uint64_t> ram_from_tree(const RamTree& tree, std::size_t k, std::uint64_t p) {
  validate_tree(tree, p);
  if (k >= tree.layers.size()) {
    fail(ErrorCode::MalformedTree, "tree has no layer " + std::to_string(k));
  }
  std::vector<std::uint64_t> out;
  for (Fate fate : tree.layers[k]) {
    if (fate == Fate::Ramify) {
      out.push_back(p);
    } else {
      out.insert(out.end(), children_of(fate, p), 1);
    }
  }
  return out;
}

std::vector<std::string> tree_to_strings(const RamTree& tree) {
  std::vector<std::string> out;
  for (const auto& layer : tree.layers) {
    std::string s;
    for (Fate fate : layer) s += fate == Fate::Split ? 's' : fate == Fate::Inert ? 'i' : 'r';
    out.push_back(std::move(s));
  }
  return out;
}

RamTree tree_from_strings(const std::vector<std::string>& layers) {
  RamTree tree;
  for (const auto& s : layers) {
    std::vector<Fate> layer;
    for (char c : s) {
      switch (c) {
        case 's': layer.push_back(Fate::Split); break;
        case 'i': layer.push_back(Fate::Inert); break;
        case 'r': layer.push_back(Fate::Ramify); break;
        default:
          fail(ErrorCode::MalformedTree,
               std::string("unknown fate '") + c + "' (expected s, i or r)");
      }
    }
    tree.layers.push_back(std::move(layer));
  }
  return tree;
}

void validate(const TowerData& tower) {
  if (tower.p < 3 || !arith::is_prime(tower.p)) {
    fail(ErrorCode::InvalidArgument, "p must be an odd prime, got " + std::to_string(tower.p));
  }
  if (tower.d < 2) {
    fail(ErrorCode::InvalidArgument,
         "dimension d must be >= 2; for d = 1 the tower coincides with the cyclotomic one");
  }
  if (!tower.mu0_zero) {
    fail(ErrorCode::InvalidArgument, "the step formula requires mu = 0 at the base (mu0_zero)");
  }
  if (tower.lambda0 < 0) fail(ErrorCode::InvalidArgument, "lambda0 must be >= 0");
  if (tower.levels < 1) fail(ErrorCode::InvalidArgument, "levels must be >= 1");
  if (tower.steps.size() != tower.levels) {
    fail(ErrorCode::LengthMismatch, "expected step data for " + std::to_string(tower.levels) +
                                        " levels, got " + std::to_string(tower.steps.size()));
  }
  for (std::size_t n = 0; n < tower.steps.size(); ++n) {
    if (tower.steps[n].size() != tower.d - 1) {
      fail(ErrorCode::LengthMismatch, "level " + std::to_string(n) + " has " +
                                          std::to_string(tower.steps[n].size()) +
                                          " sub-steps, expected d - 1 = " +
                                          std::to_string(tower.d - 1));
    }
    for (std::size_t j = 0; j < tower.steps[n].size(); ++j) {
      const auto& ram = tower.steps[n][j].ram_events;
      if (!ram) continue;
      for (std::uint64_t e : *ram) {
        if (e != 1 && e != tower.p) {
          fail(ErrorCode::InvalidArgument, "ramification index " + std::to_string(e) + " at " +
                                               step_label(n * (tower.d - 1) + j, tower.d) +
                                               " is neither 1 nor p");
        }
      }
    }
  }
  if (tower.trees) {
    if (tower.trees->size() != tower.s_cyc) {
      fail(ErrorCode::MalformedTree, "expected one tree per prime of S(F^cyc): s_cyc = " +
                                         std::to_string(tower.s_cyc) + ", trees = " +
                                         std::to_string(tower.trees->size()));
    }
    const std::size_t depth = static_cast<std::size_t>(tower.levels) * (tower.d - 1);
    for (const auto& tree : *tower.trees) {
      if (tree.layers.size() != depth) {
        fail(ErrorCode::MalformedTree, "tree depth " + std::to_string(tree.layers.size()) +
                                           " differs from levels * (d - 1) = " +
                                           std::to_string(depth));
      }
      validate_tree(tree, tower.p);
    }
  }
}

void apply_trees(TowerData& tower) {
  if (!tower.trees) return;
  const unsigned per_level = tower.d - 1;
  for (std::size_t n = 0; n < tower.steps.size(); ++n) {
    for (std::size_t j = 0; j < tower.steps[n].size(); ++j) {
      std::vector<std::uint64_t> ram;
      for (const auto& tree : *tower.trees) {
        auto part = ram_from_tree(tree, n * per_level + j, tower.p);
        ram.insert(ram.end(), part.begin(), part.end());
      }
      tower.steps[n][j].ram_events = std::move(ram);
    }
  }
}

BigInt pow_big(std::uint64_t p, std::uint64_t e) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), p, e);
  return out;
}

BigInt kida_step(std::uint64_t p, const BigInt& lambda_K, const StepData& step) {
  if (lambda_K < 0) fail(ErrorCode::NegativeLambda, "input lambda is negative");
  if (!step.ram_events) {
    fail(ErrorCode::IncompleteStepData, "ramification data for the step is unknown");
  }
  BigInt ram_sum = 0;
  for (std::uint64_t e : *step.ram_events) {
    if (e != 1 && e != p) {
      fail(ErrorCode::InvalidArgument, "ramification index " + std::to_string(e) + " is neither 1 nor p");
    }
    ram_sum += e - 1;
  }
  BigInt result = BigInt(p) * lambda_K + ram_sum + BigInt(p - 1) * BigInt(static_cast<long>(step.delta));
  if (result < 0) {
    fail(ErrorCode::NegativeLambda,
         "step produces lambda = " + result.get_str() + " < 0; the capitulation deltas are inconsistent");
  }
  return result;
}

BigInt compute_B(std::uint64_t p, unsigned d, std::span<const std::int64_t> deltas) {
  if (d < 2 || deltas.size() != d - 1) {
    fail(ErrorCode::LengthMismatch, "B_n needs d - 1 = " + std::to_string(d - 1) +
                                        " deltas, got " + std::to_string(deltas.size()));
  }
  BigInt sum = 0;
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    sum += pow_big(p, d - 2 - j) * BigInt(static_cast<long>(deltas[j]));
  }
  return sum;
}

BigInt compute_C(std::uint64_t p, unsigned d, std::span<const BigInt> B_list) {
  const std::size_t n = B_list.size();
  BigInt sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += pow_big(p, static_cast<std::uint64_t>(d - 1) * (n - 1 - i)) * B_list[i];
  }
  return BigInt(p - 1) * sum;
}

XiExtremes xi_extremes(std::span<const std::int64_t> delta_history) {
  if (delta_history.empty()) fail(ErrorCode::EmptyHistory, "no deltas recorded");
  auto [lo, hi] = std::minmax_element(delta_history.begin(), delta_history.end());
  return {*lo, *hi};
}

bool check_c_bounds(std::uint64_t p, unsigned d, unsigned n, const BigInt& C_n,
                    std::int64_t xi_minus, std::int64_t xi_plus) {
  const BigInt span = pow_big(p, static_cast<std::uint64_t>(n) * (d - 1)) - 1;
  return span * BigInt(static_cast<long>(xi_minus)) <= C_n &&
         C_n <= span * BigInt(static_cast<long>(xi_plus));
}

Bounds lambda_bounds(std::uint64_t p, unsigned d, unsigned n, std::int64_t lambda0,
                     std::uint64_t s_cyc, std::int64_t xi_minus, std::int64_t xi_plus) {
  const BigInt growth = pow_big(p, static_cast<std::uint64_t>(n) * (d - 1));
  const BigInt lam(static_cast<long>(lambda0));
  const BigInt lo_xi(static_cast<long>(xi_minus));
  const BigInt hi_xi(static_cast<long>(xi_plus));
  return {growth * (lam + lo_xi) - lo_xi, growth * (lam + BigInt(s_cyc) + hi_xi) - hi_xi};
}

Bounds proof_bounds(std::uint64_t p, unsigned d, unsigned n, std::int64_t lambda0,
                    std::uint64_t s_cyc, const BigInt& C_n) {
  const BigInt growth = pow_big(p, static_cast<std::uint64_t>(n) * (d - 1));
  const BigInt lam(static_cast<long>(lambda0));
  return {growth * lam + C_n, growth * (lam + BigInt(s_cyc)) + C_n};
}

namespace {

// Runs the recursion as far as ramification data allows. Returns lambda at
// each level reached (level 0 always).
std::vector<BigInt> run_recursion(const TowerData& tower, bool require_complete) {
  std::vector<BigInt> out{BigInt(static_cast<long>(tower.lambda0))};
  BigInt lambda = out.front();
  std::size_t k = 0;
  for (const auto& level : tower.steps) {
    for (const auto& step : level) {
      if (!step.ram_events) {
        if (require_complete) {
          fail(ErrorCode::IncompleteStepData,
               "ramification data missing at " + step_label(k, tower.d));
        }
        return out;
      }
      try {
        lambda = kida_step(tower.p, lambda, step);
      } catch (const Error& e) {
        fail(e.code(), std::string(e.what()) + " (at " + step_label(k, tower.d) + ", step " +
                           std::to_string(k) + ")");
      }
      ++k;
    }
    out.push_back(lambda);
  }
  return out;
}

}  // namespace

std::vector<BigInt> unroll_lambda(const TowerData& tower) {
  validate(tower);
  TowerData resolved = tower;
  apply_trees(resolved);
  return run_recursion(resolved, true);
}

GrowthReport simulate(const TowerData& input) {
  validate(input);
  TowerData tower = input;
  apply_trees(tower);

  GrowthReport report;
  report.p = tower.p;
  report.d = tower.d;
  report.lambda0 = tower.lambda0;
  report.s_cyc = tower.s_cyc;
  report.levels = tower.levels;
  report.ram_from_trees = tower.trees.has_value();
  report.notes = tower.notes;

  const std::vector<BigInt> lambdas = run_recursion(tower, false);

  std::vector<BigInt> B_list;
  for (const auto& level : tower.steps) {
    std::vector<std::int64_t> deltas;
    for (const auto& step : level) deltas.push_back(step.delta);
    B_list.push_back(compute_B(tower.p, tower.d, deltas));
  }

  std::vector<std::int64_t> history;
  for (unsigned n = 0; n <= tower.levels; ++n) {
    // xi_n ranges over levels i <= n; the last row has no outgoing steps and
    // reuses the history of the levels below it.
    if (n < tower.levels) {
      for (const auto& step : tower.steps[n]) history.push_back(step.delta);
    }
    const XiExtremes xi = xi_extremes(history);

    ReportRow row;
    row.n = n;
    if (n < lambdas.size()) row.lambda_exact = lambdas[n];
    if (n < tower.levels) row.B_n = B_list[n];
    row.C_n = compute_C(tower.p, tower.d, std::span<const BigInt>(B_list.data(), n));
    row.xi_minus = xi.minus;
    row.xi_plus = xi.plus;
    const Bounds outer = lambda_bounds(tower.p, tower.d, n, tower.lambda0, tower.s_cyc,
                                         xi.minus, xi.plus);
    const Bounds proof = proof_bounds(tower.p, tower.d, n, tower.lambda0, tower.s_cyc, row.C_n);
    row.bound_lower = outer.lower;
    row.bound_upper = outer.upper;
    row.proof_lower = proof.lower;
    row.proof_upper = proof.upper;
    if (row.lambda_exact) {
      mpq_class q(*row.lambda_exact, pow_big(tower.p, static_cast<std::uint64_t>(n) * (tower.d - 1)));
      q.canonicalize();
      row.ratio = q.get_d();
    }

    const std::string at = "n = " + std::to_string(n) + ": ";
    if (!check_c_bounds(tower.p, tower.d, n, row.C_n, xi.minus, xi.plus)) {
      report.violations.push_back(at + "C_n outside the xi bounds");
    }
    if (outer.lower > proof.lower || proof.upper > outer.upper) {
      report.violations.push_back(at + "proof bounds not nested in lambda bounds");
    }
    if (row.lambda_exact) {
      const BigInt& lam = *row.lambda_exact;
      if (lam < proof.lower || lam > proof.upper) {
        report.violations.push_back(at + "lambda = " + lam.get_str() + " outside proof bounds [" +
                                    proof.lower.get_str() + ", " + proof.upper.get_str() + "]");
      }
      if (lam < outer.lower || lam > outer.upper) {
        report.violations.push_back(at + "lambda = " + lam.get_str() +
                                    " outside lambda bounds [" + outer.lower.get_str() + ", " +
                                    outer.upper.get_str() + "]");
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace iwasawa::growth
