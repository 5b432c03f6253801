#include <gtest/gtest.h>

#include <algorithm>

#include "iwasawa/error.hpp"
#include "iwasawa/progroup.hpp"
#include "oracles.hpp"

using namespace iwasawa;
using namespace iwasawa::progroup;

namespace {

std::set<MatElem> as_set(const FinitePGroup& G) { return {G.elements().begin(), G.elements().end()}; }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

FinitePGroup gamma(std::uint32_t p, std::uint32_t K) {
  const MatrixRing ring(p, K, 2);
  return closure(ring, congruence_kernel_generators(ring));
}

FinitePGroup false_tate(std::uint32_t p, std::uint32_t K) {
  const MatrixRing ring(p, K, 2);
  return closure(ring, false_tate_generators(ring));
}

}  // namespace

TEST(MatrixOps, InverseAndCommutator) {
  const MatrixRing ring(3, 3, 2);
  const auto a = make_matrix(ring, {{4, 3}, {9, 1}});
  const auto b = make_matrix(ring, {{1, 1}, {0, 1}});
  EXPECT_EQ(multiply(ring, a, inverse(ring, a)), identity(ring));
  EXPECT_EQ(power(ring, b, 27), identity(ring));
  EXPECT_EQ(power(ring, b, 0), identity(ring));
  const auto c = commutator(ring, a, b);
  // g^{-1} h^{-1} g h
  const auto expected = multiply(ring, multiply(ring, inverse(ring, a), inverse(ring, b)), multiply(ring, a, b));
  EXPECT_EQ(c, expected);
  EXPECT_FALSE(is_invertible(ring, make_matrix(ring, {{3, 0}, {0, 1}})));
  EXPECT_EQ(code_of([&] { inverse(ring, make_matrix(ring, {{3, 0}, {0, 1}})); }), ErrorCode::NotInvertible);
}

TEST(ParseMatrixRows, SquareOnly) {
  EXPECT_EQ(parse_matrix_rows("1,2;3,-4"), (std::vector<std::vector<std::int64_t>>{{1, 2}, {3, -4}}));
  EXPECT_EQ(code_of([] { parse_matrix_rows("1,2;3"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_matrix_rows("1,x;3,4"); }), ErrorCode::ParseError);
}

TEST(Closure, TrivialGroup) {
  const MatrixRing ring(3, 3, 2);
  const auto G = closure(ring, {identity(ring)});
  EXPECT_EQ(G.order(), 1u);
  EXPECT_TRUE(G.is_trivial());
}

TEST(Closure, CongruenceKernelMatchesEnumeration) {
  const auto G = gamma(3, 3);
  EXPECT_EQ(G.order(), 6561u);
  EXPECT_EQ(as_set(G), oracle::congruence_subgroup(G.ring(), 1));
  EXPECT_TRUE(std::is_sorted(G.elements().begin(), G.elements().end()));
}

TEST(Closure, FalseTateGroupMatchesEnumeration) {
  const auto G = false_tate(3, 3);
  EXPECT_EQ(G.order(), 243u);
  std::set<MatElem> expected;
  for (std::int64_t a = 1; a < 27; a += 3) {
    for (std::int64_t b = 0; b < 27; ++b) expected.insert(make_matrix(G.ring(), {{a, b}, {0, 1}}));
  }
  EXPECT_EQ(as_set(G), expected);
}

TEST(Closure, IndependentOfGeneratorOrder) {
  const MatrixRing ring(3, 3, 2);
  auto gens = congruence_kernel_generators(ring);
  gens.push_back(make_matrix(ring, {{1, 0}, {3, 1}}));
  const auto reference = closure(ring, gens);
  std::sort(gens.begin(), gens.end());
  do {
    EXPECT_EQ(closure(ring, gens), reference);
  } while (std::next_permutation(gens.begin(), gens.end()));
}

TEST(Closure, Errors) {
  const MatrixRing ring(3, 2, 2);
  // Upper-triangular invertible matrices mod 9 include the order-2 torus.
  const std::vector<MatElem> borel{make_matrix(ring, {{2, 0}, {0, 1}}), make_matrix(ring, {{1, 1}, {0, 1}}),
                                   make_matrix(ring, {{1, 0}, {0, 2}})};
  EXPECT_EQ(code_of([&] { closure(ring, borel); }), ErrorCode::NotPGroup);
  EXPECT_EQ(code_of([&] { closure(ring, {make_matrix(ring, {{3, 0}, {0, 1}})}); }), ErrorCode::NotInvertible);
  const MatrixRing big(3, 3, 2);
  EXPECT_EQ(code_of([&] { closure(big, congruence_kernel_generators(big), 100); }), ErrorCode::CapExceeded);
}

TEST(NextSeriesTerm, ElementaryAbelianGivesTrivial) {
  const MatrixRing ring(3, 3, 2);
  const auto G = closure(ring, {make_matrix(ring, {{10, 0}, {0, 1}}), make_matrix(ring, {{1, 9}, {0, 1}})});
  EXPECT_EQ(G.order(), 9u);
  EXPECT_TRUE(next_series_term(G, G).is_trivial());
}

TEST(NextSeriesTerm, CongruenceKernelLevelOne) {
  const auto G = gamma(3, 3);
  const auto G1 = next_series_term(G, G);
  EXPECT_EQ(as_set(G1), oracle::congruence_subgroup(G.ring(), 2));
  EXPECT_EQ(G.order() / G1.order(), 81u);
}

TEST(NextSeriesTerm, MatchesBruteForceOnSmallGroups) {
  for (const auto& G : {gamma(3, 2), false_tate(3, 3), false_tate(5, 2)}) {
    const auto G1 = next_series_term(G, G);
    EXPECT_EQ(as_set(G1), oracle::brute_next_term(G.ring(), G.elements(), G.elements()));
    const auto G2 = next_series_term(G1, G);
    EXPECT_EQ(as_set(G2), oracle::brute_next_term(G.ring(), G1.elements(), G.elements()));
  }
}

TEST(NextSeriesTerm, FalseTateIndexNine) {
  const auto G = false_tate(3, 3);
  EXPECT_EQ(G.order() / next_series_term(G, G).order(), 9u);
}

TEST(PCentralSeries, CongruenceKernelThenFloor) {
  const auto G = gamma(3, 3);
  const auto chain = p_central_series(G, 1);
  EXPECT_EQ(chain.indices, (std::vector<std::uint64_t>{81, 81}));
  ASSERT_EQ(chain.terms.size(), 3u);
  EXPECT_TRUE(chain.terms[2].is_trivial());
  EXPECT_EQ(code_of([&] { p_central_series(G, 2); }), ErrorCode::PrecisionFloor);
  const auto partial = p_central_series_partial(G, 4);
  ASSERT_TRUE(partial.floor_at.has_value());
  EXPECT_EQ(*partial.floor_at, 2u);
  EXPECT_EQ(partial.chain.indices, (std::vector<std::uint64_t>{81, 81}));
}

TEST(NextSeriesTerm, TermsMatchCongruenceSubgroups) {
  const auto G = gamma(3, 4);
  FinitePGroup term = G;
  for (unsigned n = 0; n + 1 < 4; ++n) {
    EXPECT_EQ(as_set(term), oracle::congruence_subgroup(G.ring(), n + 1)) << "n = " << n;
    term = next_series_term(term, G);
  }
}

TEST(PCentralSeries, IndexProductIsPowerOfDimension) {
  const auto G = false_tate(3, 5);
  const auto chain = p_central_series(G, 3);
  std::uint64_t product = 1;
  for (unsigned n = 0; n < chain.indices.size(); ++n) {
    product *= chain.indices[n];
    EXPECT_EQ(G.order() / chain.terms[n + 1].order(), product);
    std::uint64_t expected = 1;
    for (unsigned k = 0; k < 2 * (n + 1); ++k) expected *= 3;
    EXPECT_EQ(product, expected);
  }
}

TEST(Predicates, Powerful) {
  const MatrixRing ring(3, 3, 2);
  EXPECT_TRUE(is_powerful(closure(ring, {make_matrix(ring, {{4, 0}, {0, 1}})})));
  EXPECT_TRUE(is_powerful(gamma(3, 3)));
  const MatrixRing heis(3, 1, 3);
  const auto H = closure(heis, {make_matrix(heis, {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}),
                                make_matrix(heis, {{1, 0, 0}, {0, 1, 1}, {0, 0, 1}})});
  EXPECT_EQ(H.order(), 27u);
  EXPECT_FALSE(is_powerful(H));
  EXPECT_FALSE(is_uniform(H, 1));
  EXPECT_EQ(code_of([&] { dimension(H); }), ErrorCode::NotUniform);
}

TEST(Predicates, Uniform) {
  EXPECT_TRUE(is_uniform(gamma(3, 3), 1));
  EXPECT_TRUE(is_uniform(false_tate(3, 4), 2));
  EXPECT_EQ(p_central_series(false_tate(3, 4), 2).indices, (std::vector<std::uint64_t>{9, 9, 9}));
  const MatrixRing ring(3, 3, 2);
  const auto cyclic = closure(ring, {make_matrix(ring, {{4, 0}, {0, 1}})});
  EXPECT_EQ(cyclic.order(), 9u);
  EXPECT_TRUE(is_uniform(cyclic, 1));
  EXPECT_EQ(p_central_series(cyclic, 1).indices, (std::vector<std::uint64_t>{3, 3}));
}

TEST(Dimension, NamedGroups) {
  EXPECT_EQ(dimension(gamma(3, 3)), 4u);
  EXPECT_EQ(dimension(false_tate(3, 3)), 2u);
  const MatrixRing ring(3, 3, 2);
  EXPECT_EQ(dimension(closure(ring, {make_matrix(ring, {{4, 0}, {0, 1}})})), 1u);
}
