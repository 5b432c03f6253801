#include <gtest/gtest.h>

#include <random>

#include "iwasawa/error.hpp"
#include "iwasawa/growth.hpp"
#include "iwasawa/scenarios.hpp"
#include "oracles.hpp"

using namespace iwasawa;
using namespace iwasawa::growth;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

StepData step(std::int64_t delta, std::vector<std::uint64_t> ram) { return {delta, std::move(ram)}; }

TowerData flat_tower(std::uint64_t p, unsigned d, std::int64_t lambda0, std::uint64_t s_cyc, unsigned levels) {
  TowerData t;
  t.p = p;
  t.d = d;
  t.lambda0 = lambda0;
  t.s_cyc = s_cyc;
  t.levels = levels;
  t.steps.assign(levels, std::vector<StepData>(d - 1, step(0, {})));
  return t;
}

}  // namespace

TEST(KidaStep, Examples) {
  EXPECT_EQ(kida_step(3, 0, step(0, {})), 0);
  EXPECT_EQ(kida_step(3, 1, step(0, {3, 3})), 7);
  EXPECT_EQ(code_of([] { kida_step(3, 0, step(-1, {})); }), ErrorCode::NegativeLambda);
  EXPECT_EQ(code_of([] { kida_step(3, 0, StepData{0, std::nullopt}); }), ErrorCode::IncompleteStepData);
  EXPECT_EQ(code_of([] { kida_step(3, 0, step(0, {5})); }), ErrorCode::InvalidArgument);
}

TEST(ComputeB, Examples) {
  EXPECT_EQ(compute_B(3, 2, std::vector<std::int64_t>{-4}), -4);
  EXPECT_EQ(compute_B(3, 4, std::vector<std::int64_t>{1, 1, 1}), 13);
  EXPECT_EQ(compute_B(5, 3, std::vector<std::int64_t>{0, 0}), 0);
  EXPECT_EQ(code_of([] { compute_B(3, 4, std::vector<std::int64_t>{1, 1}); }), ErrorCode::LengthMismatch);
}

TEST(ComputeC, Examples) {
  EXPECT_EQ(compute_C(3, 2, std::vector<BigInt>{}), 0);
  EXPECT_EQ(compute_C(3, 2, std::vector<BigInt>{1}), 2);
  EXPECT_EQ(compute_C(3, 2, std::vector<BigInt>{1, 1}), 8);
}

TEST(ComputeC, MatchesDoubleSum) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t p = trial % 2 ? 3 : 5;
    const unsigned d = 2 + trial % 3;
    const unsigned n = trial % 6;
    std::vector<std::vector<std::int64_t>> deltas(n, std::vector<std::int64_t>(d - 1));
    std::vector<BigInt> B;
    for (auto& level : deltas) {
      for (auto& x : level) x = static_cast<std::int64_t>(rng() % 11) - 5;
      B.push_back(compute_B(p, d, level));
    }
    EXPECT_EQ(compute_C(p, d, B), oracle::c_direct(p, d, deltas, n));
  }
}

TEST(XiExtremes, Examples) {
  EXPECT_EQ(xi_extremes(std::vector<std::int64_t>{0, 0, 0}).plus, 0);
  const auto x = xi_extremes(std::vector<std::int64_t>{-1, 0, 2});
  EXPECT_EQ(x.minus, -1);
  EXPECT_EQ(x.plus, 2);
  const auto y = xi_extremes(std::vector<std::int64_t>{3});
  EXPECT_EQ(y.minus, 3);
  EXPECT_EQ(y.plus, 3);
  EXPECT_EQ(code_of([] { xi_extremes({}); }), ErrorCode::EmptyHistory);
}

TEST(CheckCBounds, ExamplesAndEquality) {
  EXPECT_TRUE(check_c_bounds(3, 2, 0, 0, 0, 0));
  EXPECT_TRUE(check_c_bounds(3, 2, 2, 8, 1, 1));
  EXPECT_FALSE(check_c_bounds(3, 2, 2, 9, 1, 1));
  // All-equal deltas saturate both sides.
  for (std::int64_t delta : {-2, 0, 3}) {
    for (unsigned d : {2u, 3u, 4u}) {
      const unsigned n = 4;
      std::vector<BigInt> B(n, compute_B(5, d, std::vector<std::int64_t>(d - 1, delta)));
      const BigInt C = compute_C(5, d, B);
      EXPECT_EQ(C, (pow_big(5, n * (d - 1)) - 1) * delta);
      EXPECT_TRUE(check_c_bounds(5, d, n, C, delta, delta));
    }
  }
}

TEST(LambdaBounds, Examples) {
  const auto zero = lambda_bounds(3, 2, 0, 4, 2, -3, 5);
  EXPECT_EQ(zero.lower, 4);
  EXPECT_EQ(zero.upper, 6);
  for (unsigned n = 0; n <= 5; ++n) {
    for (std::int64_t lam : {0, 1}) {
      for (std::int64_t xi : {0, 1}) {
        EXPECT_EQ(lambda_bounds(3, 2, n, lam, 2, xi, xi).upper, pow_big(3, n) * (lam + 2 + xi) - xi);
      }
    }
  }
  EXPECT_EQ(lambda_bounds(5, 4, 2, 1, 0, 0, 0).lower, pow_big(5, 6));
}

TEST(ProofBounds, Examples) {
  const auto b = proof_bounds(3, 2, 2, 1, 1, 8);
  EXPECT_EQ(b.lower, 17);
  EXPECT_EQ(b.upper, 26);
  const auto pinned = proof_bounds(5, 3, 3, 2, 0, 0);
  EXPECT_EQ(pinned.lower, pinned.upper);
  const auto zero = proof_bounds(3, 4, 0, 7, 3, 0);
  EXPECT_EQ(zero.lower, 7);
  EXPECT_EQ(zero.upper, 10);
}

TEST(RamFromTree, Examples) {
  const auto inert = tree_from_strings({"i", "i", "i"});
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(ram_from_tree(inert, k, 3), (std::vector<std::uint64_t>{1}));
  const auto ramified_then_inert = tree_from_strings({"r", "i"});
  EXPECT_EQ(ram_from_tree(ramified_then_inert, 0, 5), (std::vector<std::uint64_t>{5}));
  EXPECT_EQ(ram_from_tree(ramified_then_inert, 1, 5), (std::vector<std::uint64_t>{1}));
  const auto split_then_ramify = tree_from_strings({"s", "rrr"});
  EXPECT_EQ(ram_from_tree(split_then_ramify, 0, 3), (std::vector<std::uint64_t>{1, 1, 1}));
  EXPECT_EQ(ram_from_tree(split_then_ramify, 1, 3), (std::vector<std::uint64_t>{3, 3, 3}));
}

TEST(RamFromTree, Malformed) {
  EXPECT_EQ(code_of([] { tree_from_strings({"s", "rr"}); validate_tree(tree_from_strings({"s", "rr"}), 3); }),
            ErrorCode::MalformedTree);
  EXPECT_EQ(code_of([] { tree_from_strings({"x"}); }), ErrorCode::MalformedTree);
  EXPECT_EQ(code_of([] { ram_from_tree(tree_from_strings({"i"}), 1, 3); }), ErrorCode::MalformedTree);
}

TEST(RamTree, StringRoundTrip) {
  scenarios::Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    const auto tree = scenarios::random_tree(3, 4, rng);
    EXPECT_EQ(tree_from_strings(tree_to_strings(tree)), tree);
  }
}

TEST(Validate, RejectsBadTowers) {
  auto t = flat_tower(3, 2, 1, 0, 2);
  EXPECT_NO_THROW(validate(t));
  auto d1 = t;
  d1.d = 1;
  EXPECT_EQ(code_of([&] { validate(d1); }), ErrorCode::InvalidArgument);
  auto mu = t;
  mu.mu0_zero = false;
  EXPECT_EQ(code_of([&] { validate(mu); }), ErrorCode::InvalidArgument);
  auto short_level = t;
  short_level.steps[1].push_back(step(0, {}));
  EXPECT_EQ(code_of([&] { validate(short_level); }), ErrorCode::LengthMismatch);
  auto bad_e = t;
  bad_e.steps[0][0].ram_events = std::vector<std::uint64_t>{2};
  EXPECT_EQ(code_of([&] { validate(bad_e); }), ErrorCode::InvalidArgument);
  auto trees = t;
  trees.s_cyc = 2;
  trees.trees = std::vector<RamTree>{tree_from_strings({"i", "i"})};
  EXPECT_EQ(code_of([&] { validate(trees); }), ErrorCode::MalformedTree);
  auto even = t;
  even.p = 2;
  EXPECT_EQ(code_of([&] { validate(even); }), ErrorCode::InvalidArgument);
}

TEST(UnrollLambda, TrivialTowerMultiplies) {
  const auto t = flat_tower(5, 3, 2, 0, 4);
  const auto lam = unroll_lambda(t);
  ASSERT_EQ(lam.size(), 5u);
  for (unsigned n = 0; n <= 4; ++n) EXPECT_EQ(lam[n], pow_big(5, 2 * n) * 2);
}

TEST(UnrollLambda, SingleRamifiedPrime) {
  auto t = flat_tower(3, 2, 0, 1, 2);
  t.steps[0][0] = step(0, {3});
  t.steps[1][0] = step(0, {1});
  EXPECT_EQ(unroll_lambda(t), (std::vector<BigInt>{0, 2, 6}));
}

TEST(UnrollLambda, NegativeLambdaNamesTheStep) {
  auto t = flat_tower(3, 3, 0, 0, 2);
  t.steps[1][1].delta = -1;
  try {
    unroll_lambda(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeLambda);
    EXPECT_NE(std::string(e.what()).find("level 1, sub-step 1"), std::string::npos) << e.what();
  }
}

TEST(UnrollLambda, NeedsRamificationData) {
  auto t = flat_tower(3, 2, 0, 1, 2);
  t.steps[1][0].ram_events.reset();
  EXPECT_EQ(code_of([&] { unroll_lambda(t); }), ErrorCode::IncompleteStepData);
  const auto rep = simulate(t);
  EXPECT_TRUE(rep.rows[1].lambda_exact.has_value());
  EXPECT_FALSE(rep.rows[2].lambda_exact.has_value());
  EXPECT_FALSE(rep.rows[2].ratio.has_value());
}

TEST(UnrollLambda, MatchesClosedFormOnRawRamLists) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint64_t p = trial % 2 ? 3 : 7;
    const unsigned d = 2 + trial % 3;
    auto t = flat_tower(p, d, static_cast<std::int64_t>(rng() % 6), 0, 1 + trial % 4);
    for (auto& level : t.steps) {
      for (auto& s : level) {
        std::vector<std::uint64_t> ram(rng() % 4);
        for (auto& e : ram) e = rng() % 2 ? p : 1;
        s = step(static_cast<std::int64_t>(rng() % 3), ram);
      }
    }
    EXPECT_EQ(unroll_lambda(t), oracle::closed_form_lambda(t));
  }
}

TEST(Simulate, TrivialTower) {
  const auto rep = simulate(flat_tower(3, 4, 1, 0, 3));
  EXPECT_TRUE(rep.violations.empty());
  for (const auto& row : rep.rows) {
    EXPECT_EQ(*row.lambda_exact, pow_big(3, 3 * row.n));
    EXPECT_EQ(row.bound_lower, row.bound_upper);
    EXPECT_EQ(*row.ratio, 1.0);
  }
  EXPECT_FALSE(rep.rows.back().B_n.has_value());
}

TEST(Simulate, RandomTreeTowersRespectAllBounds) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const std::uint64_t p = seed % 2 ? 3 : 5;
    const unsigned d = 2 + seed % 3;
    const auto t = scenarios::random_tower(p, d, 1 + seed % 4, -2, 2, seed);
    const auto rep = simulate(t);
    EXPECT_TRUE(rep.violations.empty()) << "seed " << seed << ": " << rep.violations.front();
    for (const auto& row : rep.rows) {
      ASSERT_TRUE(row.lambda_exact.has_value());
      EXPECT_LE(row.bound_lower, row.proof_lower);
      EXPECT_LE(row.proof_upper, row.bound_upper);
      EXPECT_LE(row.proof_lower, *row.lambda_exact);
      EXPECT_LE(*row.lambda_exact, row.proof_upper);
    }
  }
}

TEST(Simulate, RatioSettlesOnceStepsGoQuiet) {
  auto t = flat_tower(3, 3, 1, 1, 6);
  t.trees = std::vector<RamTree>{tree_from_strings({"s", "rir", "iii", "iii", "iii", "iii", "iii", "iii", "iii", "iii",
                                                    "iii", "iii"})};
  t.steps[0][0].delta = 2;
  t.steps[1][1].delta = -1;
  const auto rep = simulate(t);
  EXPECT_TRUE(rep.violations.empty());
  for (unsigned n = 3; n <= 6; ++n) EXPECT_EQ(*rep.rows[n].ratio, *rep.rows[2].ratio);
  EXPECT_NE(*rep.rows[1].ratio, *rep.rows[2].ratio);
}

TEST(Simulate, NZeroCollapse) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto t = scenarios::random_tower(3, 2 + seed % 3, 2, -1, 1, seed);
    const auto rep = simulate(t);
    const auto& row = rep.rows.front();
    EXPECT_EQ(row.bound_lower, t.lambda0);
    EXPECT_EQ(row.bound_upper, t.lambda0 + static_cast<long>(t.s_cyc));
  }
}

TEST(Simulate, ReportsViolationsForInconsistentRawData) {
  // Raw ram lists claiming more ramification than s_cyc primes can produce.
  auto t = flat_tower(3, 2, 0, 0, 1);
  t.steps[0][0] = step(0, {3, 3});
  const auto rep = simulate(t);
  EXPECT_FALSE(rep.violations.empty());
}
