#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace wtri;

namespace {

const Field F3 = Field::make(3);

MatSpace T(std::size_t n, const Field& F = F3) { return flag_space(Flag::standard(F, n)); }

}  // namespace

TEST(BaseCase, UpperTriangularGivesFirstLine) {
  auto [flag, trace] = base_case_n2(T(2));
  EXPECT_EQ(flag.level(1), (Subspace{{1, 0}}));
  EXPECT_TRUE(flag.same_chain(Flag::standard(F3, 2)));
  ASSERT_EQ(trace.levels.size(), 1u);
  EXPECT_EQ(*trace.levels[0].beta, 0u);
  EXPECT_EQ(trace.levels[0].v0->trace(), 0u);
  EXPECT_TRUE(trace.ok());
}

TEST(BaseCase, ConjugatesRecoverTheImageFlag) {
  std::mt19937_64 rng(1);
  for (const auto& F : {F3, Field::make(5), Field::make(7), Field::parse("GF(9)")}) {
    for (int t = 0; t < 10; ++t) {
      const Mat P = oracle::random_invertible(F, 2, rng);
      const Flag expect = transform(Flag::standard(F, 2), P);
      auto [flag, trace] = base_case_n2(flag_space(expect));
      EXPECT_TRUE(flag.same_chain(expect));
    }
  }
}

TEST(BaseCase, RejectsNonTriangularizable) {
  const auto sym = MatSpace::span(F3, 2, {Mat::unit(F3, 2, 0, 0), Mat::unit(F3, 2, 1, 1),
                                          Mat::unit(F3, 2, 0, 1) + Mat::unit(F3, 2, 1, 0)});
  try {
    base_case_n2(sym);
    FAIL() << "expected a precondition error";
  } catch (const NotWeaklyTriangularizable& e) {
    EXPECT_FALSE(is_triangularizable(e.witness));
    EXPECT_TRUE(sym.contains(e.witness));
  }
  EXPECT_THROW(base_case_n2(T(3)), PreconditionError);
  EXPECT_THROW(base_case_n2(MatSpace::span(F3, 2, {Mat::identity(F3, 2)})), PreconditionError);
}

TEST(RankOneIdempotent, Examples) {
  EXPECT_EQ(find_rank1_idempotent(T(2), {0, 1}), Mat::unit(F3, 2, 1, 1));
  const auto S = T(3);
  const auto x = *find_adapted_vector(S);
  const Mat pi = find_rank1_idempotent(S, x);
  EXPECT_EQ(pi * pi, pi);
  EXPECT_EQ(pi.rank(), 1u);
  EXPECT_EQ(pi * x, x);
  EXPECT_THROW(find_rank1_idempotent(MatSpace::span(F3, 2, {Mat::identity(F3, 2)}), {1, 0}), TheoremViolation);
}

TEST(Recover, StandardFlagForUpperTriangular) {
  for (std::size_t n = 1; n <= 4; ++n) {
    auto [flag, trace] = recover_flag(T(n));
    EXPECT_TRUE(flag.same_chain(Flag::standard(F3, n))) << n;
    EXPECT_TRUE(trace.ok());
    EXPECT_EQ(trace.levels.size(), std::max<std::size_t>(1, n - 1));
    EXPECT_EQ(trace.levels.front().n, n);
  }
}

TEST(Recover, RoundTripOnRandomConjugates) {
  std::mt19937_64 rng(2);
  const std::vector<Field> fields{F3, Field::make(5), Field::make(7), Field::parse("GF(9)")};
  for (int t = 0; t < 60; ++t) {
    const Field& F = fields[t % 4];
    const std::size_t n = 2 + t % 4;
    const Mat P = oracle::random_invertible(F, n, rng);
    const Flag expect = transform(Flag::standard(F, n), P);
    const auto S = flag_space(expect);
    RecoverOptions opt;
    opt.precondition_budget = 1 << 16;
    auto [flag, trace] = recover_flag(S, opt);
    EXPECT_TRUE(flag.same_chain(expect));
    EXPECT_EQ(flag_space(flag), S);
    opt.reverse_scan = true;
    auto [flag2, trace2] = recover_flag(S, opt);
    EXPECT_TRUE(flag2.same_chain(flag));
  }
}

TEST(Recover, TraceRecordsForcedDimensions) {
  std::mt19937_64 rng(3);
  const auto S = conjugate_space(T(4), oracle::random_invertible(F3, 4, rng));
  auto [flag, trace] = recover_flag(S);
  ASSERT_EQ(trace.levels.size(), 3u);
  for (const auto& l : trace.levels) {
    if (l.kind != "inductive") continue;
    const std::size_t n = l.n;
    EXPECT_EQ(l.dim_range_line, 1u);
    EXPECT_EQ(l.dim_quotient, n * (n - 1) / 2);
    EXPECT_EQ(l.dim_s_prime, n * (n - 1) / 2 + 1);
    EXPECT_EQ(l.rank_sx, n);
    EXPECT_EQ(l.dim_restricted, n * (n - 1) / 2);
    EXPECT_EQ(*l.alpha, 0u);
    EXPECT_TRUE(l.ok());
  }
  EXPECT_EQ(trace.levels.back().kind, "base");
  const std::string text = trace.to_text();
  EXPECT_NE(text.find("[level 1]"), std::string::npos);
  EXPECT_NE(text.find("[level 3]"), std::string::npos);
  EXPECT_NE(text.find("status: ok"), std::string::npos);
  EXPECT_EQ(text.find("FAILED"), std::string::npos);
}

TEST(Recover, Preconditions) {
  EXPECT_THROW(recover_flag(MatSpace::full(F3, 2)), PreconditionError);
  // dimension 6 in M_3 but not weakly triangularizable
  std::vector<Mat> g;
  for (std::size_t j = 0; j < 3; ++j) g.push_back(Mat::unit(F3, 3, 0, j));
  g.push_back(Mat::unit(F3, 3, 1, 0));
  g.push_back(Mat::unit(F3, 3, 1, 1));
  g.push_back(Mat::unit(F3, 3, 2, 2));
  const auto S = MatSpace::span(F3, 3, g);
  ASSERT_EQ(S.dim(), 6u);
  try {
    recover_flag(S);
    FAIL() << "expected a precondition error";
  } catch (const NotWeaklyTriangularizable& e) {
    EXPECT_FALSE(is_triangularizable(e.witness));
  }
}

TEST(StructureMaps, UpperTriangularAllZero) {
  const auto tr = extract_structure_maps(T(3), Flag::standard(F3, 3));
  ASSERT_TRUE(tr.maps);
  EXPECT_TRUE(tr.maps->ok());
  EXPECT_TRUE(tr.maps->all_maps_zero());
  EXPECT_EQ(tr.maps->alpha, 0u);
  EXPECT_NE(tr.to_text().find("all_maps_zero: yes"), std::string::npos);
}

TEST(StructureMaps, RecoveredConjugatesAllZero) {
  std::mt19937_64 rng(4);
  for (const auto& F : {F3, Field::make(5), Field::parse("GF(9)")}) {
    for (std::size_t n = 3; n <= 5; ++n) {
      const auto S = conjugate_space(T(n, F), oracle::random_invertible(F, n, rng));
      RecoverOptions opt;
      opt.precondition_budget = 1 << 12;
      auto [flag, trace] = recover_flag(S, opt);
      const auto maps = extract_structure_maps(S, flag);
      ASSERT_TRUE(maps.maps);
      EXPECT_TRUE(maps.maps->ok());
      EXPECT_TRUE(maps.maps->all_maps_zero());
      EXPECT_EQ(maps.maps->phi.rows, n - 2);
      EXPECT_EQ(maps.maps->h.cols, (n - 2) * (n - 1) / 2);
    }
  }
}

TEST(StructureMaps, Preconditions) {
  EXPECT_THROW(extract_structure_maps(T(2), Flag::standard(F3, 2)), PreconditionError);
  const Flag other(F3, {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});
  EXPECT_THROW(extract_structure_maps(T(3), other), PreconditionError);
}

TEST(Recover, EquivariantUnderConjugation) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 3;
    const auto S = conjugate_space(T(n), oracle::random_invertible(F3, n, rng));
    const Mat P = oracle::random_invertible(F3, n, rng);
    auto [f1, t1] = recover_flag(S);
    auto [f2, t2] = recover_flag(conjugate_space(S, P));
    EXPECT_TRUE(f2.same_chain(transform(f1, P)));
  }
}
