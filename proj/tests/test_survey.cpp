#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <unistd.h>

using namespace wtri;

namespace {

const Field F3 = Field::make(3);

std::set<MatSpace> all_flag_spaces(std::size_t n, const Field& F) {
  std::set<MatSpace> out;
  enumerate_flags(n, F, [&](const std::vector<Subspace>& chain) {
    // basis adapted to the chain: extend level by level
    std::vector<Vec> basis;
    for (const auto& level : chain) {
      for (const auto& v : level) {
        auto rows = basis;
        rows.push_back(v);
        if (rank(Dense::from_rows(rows, n), F) > basis.size()) {
          basis.push_back(v);
          break;
        }
      }
    }
    for (const auto& v : oracle::all_nonzero_vectors(F, n)) {
      auto rows = basis;
      rows.push_back(v);
      if (rank(Dense::from_rows(rows, n), F) > basis.size()) {
        basis.push_back(v);
        break;
      }
    }
    out.insert(flag_space(Flag(F, basis)));
  });
  return out;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("wtri_" + name + "_" + std::to_string(::getpid()))).string();
}

}  // namespace

TEST(Generators, Families) {
  EXPECT_EQ(gen_sym(2, F3).dim(), 3u);
  const auto sl = gen_sl(2, F3);
  EXPECT_EQ(sl.dim(), 3u);
  EXPECT_TRUE(sl.contains(Mat::unit(F3, 2, 0, 1)));
  EXPECT_TRUE(sl.contains(Mat::unit(F3, 2, 1, 0)));
  EXPECT_TRUE(sl.contains(Mat::unit(F3, 2, 0, 0) - Mat::unit(F3, 2, 1, 1)));
  for (const auto& b : gen_sl(4, F3).basis()) EXPECT_EQ(b.trace(), 0u);
  EXPECT_EQ(gen_sl(4, F3).dim(), 15u);
  for (const auto& b : gen_sym(4, F3).basis()) EXPECT_EQ(b, b.transpose());
  EXPECT_EQ(gen_sym(4, F3).dim(), 10u);
}

TEST(Generators, JointOfScalars) {
  const auto M1 = MatSpace::full(F3, 1);
  EXPECT_EQ(gen_joint({M1, M1}), gen_triangular(2, F3));
  const auto J = gen_joint({gen_sym(2, F3), MatSpace::full(F3, 1), gen_sl(2, F3)});
  EXPECT_EQ(J.n(), 5u);
  // sum of block dimensions plus the strictly-above blocks 2*1 + 2*2 + 1*2
  EXPECT_EQ(J.dim(), 3u + 1u + 3u + 2u + 4u + 2u);
  EXPECT_THROW(gen_joint({M1, MatSpace::full(Field::make(5), 1)}), ShapeError);
}

TEST(Generators, TriangularConjugate) {
  std::mt19937_64 rng(1);
  const Mat P = oracle::random_invertible(F3, 3, rng);
  EXPECT_EQ(gen_triangular(3, F3, P), conjugate_space(gen_triangular(3, F3), P));
  EXPECT_THROW(gen_triangular(2, F3, Mat(F3, 2)), PreconditionError);
}

TEST(Generators, RandomIsDeterministic) {
  const auto a = gen_random(3, F3, 4, 99), b = gen_random(3, F3, 4, 99);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.dim(), 4u);
  EXPECT_EQ(gen_random(2, F3, 4, 1), MatSpace::full(F3, 2));
}

TEST(Flags, Counts) {
  EXPECT_EQ(count_flags(2, F3), 4u);
  EXPECT_EQ(count_flags(3, F3), 52u);
  EXPECT_EQ(count_flags(2, Field::make(5)), 6u);
  EXPECT_EQ(count_flags(3, Field::make(5)), 6u * 31u);
  EXPECT_EQ(count_flags(4, F3), 4u * 13u * 40u);
  EXPECT_EQ(all_flag_spaces(3, F3).size(), 52u);
}

TEST(SplitKernel, AgreesWithGenericTest) {
  std::mt19937_64 rng(2);
  for (const auto& F : {F3, Field::make(5), Field::parse("GF(9)"), Field::make(101)}) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const SplitKernel K(F, n);
      for (int t = 0; t < 200; ++t) {
        const Mat M = oracle::random_mat(F, n, rng);
        ASSERT_EQ(K.splits(M.entries().data()), is_triangularizable(M)) << F.descriptor() << " " << M.to_string();
      }
    }
  }
}

TEST(Campaign, TwoByTwoOverF3) {
  CampaignSpec spec;
  spec.n = 2;
  spec.field = F3;
  const auto rep = run_campaign(spec);
  EXPECT_EQ(rep.total, 40u);
  EXPECT_EQ(rep.hits.size(), 4u);
  EXPECT_EQ(*rep.expected_hits, 4u);
  EXPECT_TRUE(rep.all_recovered());
  std::set<MatSpace> hits;
  for (const auto& h : rep.hits) {
    hits.insert(h.space);
    EXPECT_TRUE(h.has_identity);
    EXPECT_TRUE(space_weakly_triangularizable(h.space).certified());
  }
  EXPECT_EQ(hits, all_flag_spaces(2, F3));
  // every candidate checked directly
  std::uint64_t direct = 0;
  enumerate_subspaces(4, 3, F3, {}, [&](const std::vector<Vec>& b) {
    direct += space_weakly_triangularizable(MatSpace::from_vectors(F3, 2, b)).holds();
    return true;
  });
  EXPECT_EQ(direct, 4u);
}

TEST(Campaign, TwoByTwoOverF5) {
  CampaignSpec spec;
  spec.n = 2;
  spec.field = Field::make(5);
  const auto rep = run_campaign(spec);
  EXPECT_EQ(rep.total, 156u);
  EXPECT_EQ(rep.hits.size(), 6u);
  EXPECT_TRUE(rep.all_recovered());
}

TEST(Campaign, ShardsAndThreadsDoNotChangeTheReport) {
  CampaignSpec spec;
  spec.n = 2;
  spec.field = Field::make(7);
  const auto base = run_campaign(spec);
  EXPECT_EQ(base.hits.size(), 8u);
  for (unsigned k : {2u, 5u, 13u}) {
    spec.shards = k;
    spec.threads = k % 3 + 1;
    const auto rep = run_campaign(spec);
    EXPECT_EQ(rep.total, base.total);
    ASSERT_EQ(rep.hits.size(), base.hits.size());
    for (std::size_t i = 0; i < rep.hits.size(); ++i) {
      EXPECT_EQ(rep.hits[i].index, base.hits[i].index);
      EXPECT_EQ(rep.hits[i].space, base.hits[i].space);
    }
  }
}

TEST(Campaign, IdentityConstraintLosesNoHits) {
  for (const auto& F : {F3, Field::make(5)}) {
    CampaignSpec spec;
    spec.n = 2;
    spec.field = F;
    const auto a = run_campaign(spec);
    spec.contains_identity = true;
    const auto b = run_campaign(spec);
    EXPECT_EQ(b.total, grassmann_count(3, 2, F.q()));
    std::set<MatSpace> sa, sb;
    for (const auto& h : a.hits) sa.insert(h.space);
    for (const auto& h : b.hits) sb.insert(h.space);
    EXPECT_EQ(sa, sb);
    EXPECT_NE(b.to_text().find("note: "), std::string::npos);
  }
}

TEST(Campaign, NonOptimalDimensionCountsOnly) {
  // 2-dim subspaces of M_2(F_3) that are weakly triangularizable, against a direct sweep
  CampaignSpec spec;
  spec.n = 2;
  spec.field = F3;
  spec.dim = 2;
  const auto rep = run_campaign(spec);
  std::uint64_t direct = 0;
  enumerate_subspaces(4, 2, F3, {}, [&](const std::vector<Vec>& b) {
    direct += space_weakly_triangularizable(MatSpace::from_vectors(F3, 2, b)).holds();
    return true;
  });
  EXPECT_EQ(rep.hits.size(), direct);
  for (const auto& h : rep.hits) EXPECT_FALSE(h.checked);
  EXPECT_FALSE(rep.expected_hits);
}

TEST(Campaign, ExtraConstraints) {
  // containing E_12 as well as I: hits are the flag spaces whose first line is span(e1)
  CampaignSpec spec;
  spec.n = 2;
  spec.field = F3;
  spec.contains_identity = true;
  spec.constraints = {Mat::unit(F3, 2, 0, 1)};
  const auto rep = run_campaign(spec);
  EXPECT_EQ(rep.total, grassmann_count(2, 1, 3));
  ASSERT_EQ(rep.hits.size(), 1u);
  EXPECT_EQ(rep.hits[0].space, gen_triangular(2, F3));
  spec.constraints = {Mat::identity(F3, 2)};
  EXPECT_THROW(run_campaign(spec), PreconditionError);
}

TEST(Campaign, HitsAreClosedUnderConjugation) {
  CampaignSpec spec;
  spec.n = 2;
  spec.field = Field::make(5);
  const auto rep = run_campaign(spec);
  std::set<MatSpace> hits;
  for (const auto& h : rep.hits) hits.insert(h.space);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto& h = rep.hits[t % rep.hits.size()];
    EXPECT_TRUE(hits.count(conjugate_space(h.space, oracle::random_invertible(spec.field, 2, rng))));
  }
}

TEST(Campaign, RandomModeIsReproducible) {
  CampaignSpec spec;
  spec.n = 3;
  spec.field = F3;
  spec.contains_identity = true;
  spec.mode = CampaignSpec::Mode::Random;
  spec.samples = 20000;
  spec.seed = 5;
  spec.shards = 3;
  const auto a = run_campaign(spec);
  spec.shards = 1;
  const auto b = run_campaign(spec);
  EXPECT_EQ(a.total, 20000u);
  ASSERT_EQ(a.hits.size(), b.hits.size());
  for (std::size_t i = 0; i < a.hits.size(); ++i) EXPECT_EQ(a.hits[i].space, b.hits[i].space);
  EXPECT_TRUE(a.all_recovered());
}

TEST(Campaign, JournalResume) {
  const std::string path = temp_path("journal");
  CampaignSpec spec;
  spec.n = 2;
  spec.field = Field::make(5);
  spec.shards = 4;
  spec.journal = path;
  const auto full = run_campaign(spec);
  // keep the header and the first two shard records
  std::ifstream in(path);
  std::string line, kept;
  int shards = 0;
  while (std::getline(in, line)) {
    if (line.rfind("shard ", 0) == 0 && ++shards > 2) break;
    kept += line + "\n";
  }
  in.close();
  {
    std::ofstream out(path, std::ios::trunc);
    out << kept;
  }
  spec.resume = true;
  const auto resumed = run_campaign(spec);
  std::size_t from_journal = 0;
  for (const auto& s : resumed.shards) from_journal += s.resumed;
  EXPECT_EQ(from_journal, 2u);
  EXPECT_EQ(resumed.total, full.total);
  ASSERT_EQ(resumed.hits.size(), full.hits.size());
  for (std::size_t i = 0; i < full.hits.size(); ++i) EXPECT_EQ(resumed.hits[i].space, full.hits[i].space);
  // after the resume the journal is complete: a second resume runs nothing
  const auto again = run_campaign(spec);
  for (const auto& s : again.shards) EXPECT_TRUE(s.resumed);
  EXPECT_EQ(again.hits.size(), full.hits.size());

  // a journal for a different campaign is refused
  spec.field = Field::make(7);
  EXPECT_THROW(run_campaign(spec), PreconditionError);
  std::remove(path.c_str());
}

TEST(Campaign, Budget) {
  CampaignSpec spec;
  spec.n = 3;
  spec.field = F3;
  spec.budget = 1000;
  EXPECT_THROW(run_campaign(spec), BudgetExceeded);
}

TEST(Survey, SymmetricNeverAHit) {
  for (std::uint64_t q : {3u, 5u, 7u}) {
    const auto F = Field::make(q);
    EXPECT_FALSE(space_weakly_triangularizable(gen_sym(2, F)).holds());
  }
}

TEST(Survey, JointClosure) {
  // every 1+1 and 1+2 joint of weakly triangularizable blocks over GF(3) is weakly triangularizable
  auto wt_spaces = [](std::size_t n) {
    std::vector<MatSpace> out;
    for (std::size_t d = 0; d <= n * n; ++d) {
      enumerate_subspaces(n * n, d, F3, {}, [&](const std::vector<Vec>& b) {
        const auto S = MatSpace::from_vectors(F3, n, b);
        if (space_weakly_triangularizable(S).holds()) out.push_back(S);
        return true;
      });
    }
    return out;
  };
  const auto one = wt_spaces(1), two = wt_spaces(2);
  EXPECT_EQ(one.size(), 2u);
  std::size_t checked = 0;
  for (const auto& a : one) {
    for (const auto& b : one) {
      EXPECT_TRUE(space_weakly_triangularizable(gen_joint({a, b})).holds());
      ++checked;
    }
    for (const auto& b : two) {
      EXPECT_TRUE(space_weakly_triangularizable(gen_joint({a, b})).holds());
      EXPECT_TRUE(space_weakly_triangularizable(gen_joint({b, a})).holds());
      checked += 2;
    }
  }
  EXPECT_EQ(checked, 4 + 4 * two.size());
}
