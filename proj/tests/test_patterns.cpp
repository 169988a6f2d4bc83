#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "permreg/error.hpp"
#include "permreg/patterns.hpp"

using namespace permreg;

namespace {

std::size_t lis_length(const std::vector<int>& a, bool increasing) {
  std::vector<std::size_t> best(a.size(), 1);
  std::size_t out = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (increasing ? a[j] < a[i] : a[j] > a[i]) best[i] = std::max(best[i], best[j] + 1);
    out = std::max(out, best[i]);
  }
  return out;
}

Permutation two_decreasing_runs(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n / 2; ++i) {
    v[static_cast<std::size_t>(2 * i)] = n - 1 - i;
    v[static_cast<std::size_t>(2 * i + 1)] = n / 2 - 1 - i;
  }
  return Permutation(v);
}

}  // namespace

TEST(Pattern, Parse) {
  EXPECT_EQ(parse_pattern("1 0").m(), 2);
  EXPECT_THROW(parse_pattern("0 0"), parse_error);
  EXPECT_EQ(all_patterns(3).size(), 6u);
  EXPECT_EQ(format_permutation(all_patterns(3).front().perm), "0 1 2");
  EXPECT_EQ(format_permutation(all_patterns(3).back().perm), "2 1 0");
  EXPECT_THROW(all_patterns(0), parameter_error);
}

TEST(CountPattern, Examples) {
  EXPECT_EQ(count_pattern(Permutation::identity(5), parse_pattern("0 1")), 10u);
  EXPECT_EQ(count_pattern(generate(GenKind::reverse, 5, 0), parse_pattern("0 1 2")), 0u);
  const Permutation p({1, 0, 3, 2});
  EXPECT_EQ(count_pattern(p, parse_pattern("1 0")), 2u);
  EXPECT_EQ(count_pattern(p, parse_pattern("0 1")), 4u);
  EXPECT_EQ(count_pattern(p, parse_pattern("0 1 2 3 4")), 0u);
  EXPECT_EQ(count_pattern(p, parse_pattern("0")), 4u);
  EXPECT_THROW(count_pattern(Permutation::identity(10), parse_pattern("0 1 2 3 4 5 6")), parameter_error);
}

TEST(CountPattern, MatchesOracleAllSizes) {
  std::mt19937_64 rng(40);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const Permutation p = oracle::random_perm(n, rng);
    for (int m = 1; m <= 6; ++m)
      for (const auto& tau : all_patterns(m))
        ASSERT_EQ(count_pattern(p, tau), oracle::pattern_count(p, tau.perm.images()))
            << format_permutation(p) << " / " << format_permutation(tau.perm);
  }
}

TEST(CountPattern, NaiveMatchesOracle) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 10; ++t) {
    const Permutation p = oracle::random_perm(15, rng);
    for (const auto& tau : all_patterns(3)) EXPECT_EQ(count_pattern_naive(p, tau), oracle::pattern_count(p, tau.perm.images()));
  }
  EXPECT_THROW(count_pattern_naive(Permutation::identity(41), parse_pattern("0 1")), parameter_error);
}

TEST(CountPattern, SumsToBinomial) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 5; ++t) {
    const Permutation p = oracle::random_perm(60, rng);
    for (int m = 2; m <= 5; ++m) {
      std::uint64_t total = 0;
      for (const auto& tau : all_patterns(m)) total += count_pattern(p, tau);
      EXPECT_EQ(total, binomial(60, static_cast<std::uint64_t>(m)));
    }
  }
}

TEST(CountPattern, Restriction) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    const Permutation p = oracle::random_perm(20, rng);
    std::vector<int> members;
    for (int x = 0; x < 20; ++x)
      if (rng() % 2) members.push_back(x);
    if (members.empty()) continue;
    const IndexSet s(members);
    const Permutation r = restrict_to(p, s);
    for (int m = 2; m <= 4; ++m)
      for (const auto& tau : all_patterns(m)) ASSERT_EQ(count_pattern(p, tau, s), oracle::pattern_count(r, tau.perm.images()));
  }
}

TEST(CountPattern, WorkGuard) {
  EXPECT_THROW(count_pattern(Permutation::identity(20000), parse_pattern("0 1 3 2 4 5")), resource_error);
}

TEST(FindPattern, FirstOccurrence) {
  const Permutation p({2, 0, 3, 1});
  const auto hit = find_pattern(p, parse_pattern("1 0"));
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(*hit, (std::vector<int>{0, 1}));
  EXPECT_FALSE(find_pattern(Permutation::identity(6), parse_pattern("1 0")).has_value());
  EXPECT_TRUE(contains_pattern(p, parse_pattern("1 0")));
  EXPECT_FALSE(contains_pattern(generate(GenKind::reverse, 6, 0), parse_pattern("0 1")));
}

TEST(Universality, Examples) {
  const auto r = universality_check(Permutation::identity(10), 2);
  EXPECT_FALSE(r.universal);
  ASSERT_TRUE(r.missing.has_value());
  EXPECT_EQ(format_permutation(r.missing->perm), "1 0");
  EXPECT_TRUE(universality_check(generate(GenKind::random, 64, 1), 3).universal);
  EXPECT_TRUE(universality_check(generate(GenKind::random, 5, 1), 1).universal);
}

TEST(LongestMonotone, MatchesQuadraticDp) {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 50; ++t) {
    std::vector<int> a(static_cast<std::size_t>(rng() % 40));
    for (auto& x : a) x = static_cast<int>(rng() % 15);
    for (bool inc : {true, false}) {
      const auto idx = longest_monotone(a, inc);
      ASSERT_EQ(idx.size(), lis_length(a, inc));
      for (std::size_t i = 1; i < idx.size(); ++i) {
        ASSERT_LT(idx[i - 1], idx[i]);
        if (inc)
          ASSERT_LT(a[static_cast<std::size_t>(idx[i - 1])], a[static_cast<std::size_t>(idx[i])]);
        else
          ASSERT_GT(a[static_cast<std::size_t>(idx[i - 1])], a[static_cast<std::size_t>(idx[i])]);
      }
    }
  }
}

TEST(Scatter, Examples) {
  const auto id = scatter_property(Permutation::identity(200), 0.1, 0.1, 0.9);
  EXPECT_FALSE(id.holds);
  EXPECT_DOUBLE_EQ(id.ratio, 1.0);
  EXPECT_TRUE(scatter_property(generate(GenKind::random, 4096, 2), 0.05, 0.02, 0.5).holds);
  EXPECT_TRUE(scatter_property(Permutation::identity(100), 0.1, 0.2, 1.0).holds);
  EXPECT_THROW(scatter_property(Permutation::identity(10), 0.0, 0.1, 0.5), parameter_error);
}

TEST(Scatter, ExactMatchesBruteForce) {
  std::mt19937_64 rng(45);
  for (int t = 0; t < 10; ++t) {
    const int n = 30;
    const Permutation p = oracle::random_perm(n, rng);
    const double delta = 0.2, eps = 0.1;
    double worst = 0.0;
    for (int x0 = 0; x0 < n; ++x0)
      for (int x1 = x0 + 6; x1 <= n; ++x1)
        for (int y0 = 0; y0 + 3 <= n; ++y0) {
          int hits = 0;
          for (int s = x0; s < x1; ++s) hits += (p(s) >= y0 && p(s) < y0 + 3) ? 1 : 0;
          worst = std::max(worst, static_cast<double>(hits) / (x1 - x0));
        }
    const auto r = scatter_property(p, delta, eps, 0.4);
    EXPECT_NEAR(r.ratio, worst, 1e-12);
    EXPECT_EQ(r.holds, worst <= 0.4);
  }
}

TEST(Sweep, IdentityCdf) {
  const double eps = 0.05;
  const BlockFamily f = concentration_sweep(Cdf::identity(), eps);
  EXPECT_EQ(f.accumulation.size(), 3u);
  for (std::size_t i = 0; i < f.gaps.size(); ++i) {
    const auto [lo, hi] = f.gaps[i];
    if (hi < 1.0) {
      EXPECT_NEAR(hi - lo, 4 * eps, 1e-12);
    }
  }
  ASSERT_EQ(f.intervals.size(), 2u);
  for (std::size_t i = 1; i < f.intervals.size(); ++i) EXPECT_LE(f.intervals[i - 1].second, f.intervals[i].first);
  for (auto [lo, hi] : f.intervals) EXPECT_LE(hi - lo, 6 * eps + 1e-12);
  EXPECT_NEAR(f.covered_mass, 0.6, 1e-12);
}

TEST(Sweep, IntervalsAreDisjointAndShort) {
  std::mt19937_64 rng(46);
  for (int t = 0; t < 50; ++t) {
    const auto a = oracle::lattice_atoms(rng, 1 + static_cast<int>(rng() % 10));
    const double eps = 0.01 + 0.01 * static_cast<double>(rng() % 8);
    const BlockFamily f = concentration_sweep(Cdf::from_atoms(a.atoms), eps);
    for (std::size_t i = 0; i < f.gaps.size(); ++i) {
      const auto [lo, hi] = f.gaps[i];
      EXPECT_NEAR(hi - lo, std::min(4 * eps, 1.0 - lo), 1e-12);
    }
    for (std::size_t i = 1; i < f.accumulation.size(); ++i) EXPECT_LE(f.accumulation[i - 1].second, f.accumulation[i].first);
    for (std::size_t i = 1; i < f.intervals.size(); ++i) EXPECT_LE(f.intervals[i - 1].second, f.intervals[i].first + 1e-12);
    // a heavy atom can make an accumulation interval shorter than 2 eps, and
    // then two pieces merge; the 6 eps bound needs every interior one >= 2 eps
    bool long_enough = true;
    for (auto [lo, hi] : f.accumulation)
      if (lo > 0.0 && hi < 1.0 && hi - lo < 2 * eps) long_enough = false;
    if (long_enough) {
      for (auto [lo, hi] : f.intervals) EXPECT_LE(hi - lo, 6 * eps + 1e-9);
    }
    EXPECT_GE(f.covered_mass, -1e-12);
    EXPECT_LE(f.covered_mass, 1 + 1e-12);
  }
}

TEST(Concentration, AvoidersHaveFewIntervals) {
  const Pattern tau = parse_pattern("0 1 2");
  for (const Permutation& p : {generate(GenKind::reverse, 2000, 0), two_decreasing_runs(2000)}) {
    ASSERT_EQ(count_pattern(p, tau), 0u);
    const UniformPartition u = uniform_partition(p, 1.0 / 12, 3);
    const ConcentrationFamily c = concentration_intervals(p, u, tau);
    ASSERT_TRUE(c.pattern_count.has_value());
    EXPECT_EQ(*c.pattern_count, 0u);
    EXPECT_TRUE(c.certified);
    for (const auto& b : c.blocks) {
      EXPECT_LE(b.intervals.size(), 2u);
      for (auto [lo, hi] : b.intervals) EXPECT_LE(hi - lo, 6.0 / 12 + 1e-12);
    }
  }
}

TEST(Concentration, EpsilonPrecondition) {
  const Permutation p = generate(GenKind::random, 500, 1);
  const UniformPartition u = uniform_partition(p, 0.2, 3);
  EXPECT_THROW(concentration_intervals(p, u, parse_pattern("0 1 2")), parameter_error);
}

TEST(Pseudomonotone, Reverse) {
  const Permutation p = generate(GenKind::reverse, 500, 0);
  const auto r = pseudomonotone_subset(p, parse_pattern("0 1 2"), 0.2);
  EXPECT_GE(r.X.size(), 2);
  EXPECT_EQ(count_pattern(p, parse_pattern("0 1"), r.X), 0u);
  EXPECT_DOUBLE_EQ(r.delta_prime, 0.0);
}

TEST(Pseudomonotone, TwoRuns) {
  const Permutation p = two_decreasing_runs(2000);
  const auto r = pseudomonotone_subset(p, parse_pattern("0 1 2"), 0.2);
  ASSERT_GE(r.X.size(), 2);
  const auto asc = oracle::pattern_count(restrict_to(p, r.X), {0, 1});
  const auto all = oracle::choose(r.X.size(), 2);
  const double want = static_cast<double>(std::min(asc, all - asc)) / static_cast<double>(all);
  EXPECT_NEAR(r.delta_prime, want, 1e-15);
  EXPECT_LE(r.delta_prime, 0.2);
}

TEST(Pseudomonotone, DefinitionalCheckOnRandom) {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 5; ++t) {
    const Permutation p = oracle::random_perm(150, rng);
    const auto r = pseudomonotone_subset(p, parse_pattern("1 0 2"), 0.5);
    if (r.X.size() < 2) continue;
    const auto asc = count_pattern(p, parse_pattern("0 1"), r.X);
    const auto pairs = oracle::choose(r.X.size(), 2);
    EXPECT_TRUE(static_cast<double>(asc) <= r.delta_prime * static_cast<double>(pairs) + 1e-9 ||
                static_cast<double>(pairs - asc) <= r.delta_prime * static_cast<double>(pairs) + 1e-9);
  }
}

TEST(Destroy, InterleaveEndToEnd) {
  const Permutation p = generate(GenKind::interleave, 200, 0);
  const Pattern tau = parse_pattern("1 0");
  const DestroyResult d = destroy_pattern(p, tau, 0.02);
  EXPECT_TRUE(verify_destroyed(p, tau, d.deleted).destroyed);
  EXPECT_LE(static_cast<double>(d.rule_c), 12 * 0.02 * 200 * 200 + 200);
  EXPECT_LE(d.rule_b, static_cast<std::uint64_t>(d.k) * oracle::choose(d.block_length, 2));
  EXPECT_LE(static_cast<double>(d.rule_b), 200.0 * 200 / (2.0 * d.k));
  for (std::size_t i = 1; i < d.deleted.pairs.size(); ++i) EXPECT_LT(d.deleted.pairs[i - 1], d.deleted.pairs[i]);
  for (auto [i, j] : d.deleted.pairs) EXPECT_LT(i, j);
}

TEST(Sweep, SpreadCdfIntervalsAreShort) {
  std::mt19937_64 rng(49);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::pair<double, double>> atoms;
    for (int i = 0; i < 400; ++i) atoms.emplace_back(static_cast<double>(rng() % 4000) / 4000.0, 1.0 / 400);
    const double eps = 0.02 + 0.01 * static_cast<double>(t % 4);
    const BlockFamily f = concentration_sweep(Cdf::from_atoms(atoms), eps);
    for (auto [lo, hi] : f.intervals) {
      EXPECT_LE(hi - lo, 6 * eps + 1e-9);
    }
  }
}

TEST(Destroy, CertifiedInstancesAreDestroyed) {
  const std::vector<std::pair<Permutation, const char*>> cases = {
      {two_decreasing_runs(300), "0 1 2"},
      {generate(GenKind::reverse, 300, 0), "0 1"},
      {generate(GenKind::reverse, 300, 0), "0 2 1"},
      {Permutation::identity(300), "1 0"},
  };
  for (const auto& [p, text] : cases) {
    const Pattern tau = parse_pattern(text);
    const double eps = 1.0 / (2 * tau.m()) - 0.01;
    const UniformPartition u = uniform_partition(p, eps, tau.m());
    ASSERT_TRUE(concentration_intervals(p, u, tau).certified) << text;
    const DestroyResult d = destroy_pattern(p, tau, eps);
    EXPECT_TRUE(verify_destroyed(p, tau, d.deleted).destroyed) << text;
  }
}

TEST(VerifyDestroyed, Trivial) {
  const Permutation p({1, 0, 3, 2});
  const Pattern tau = parse_pattern("1 0");
  DeletionSet all{4, {}};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) all.pairs.push_back({i, j});
  EXPECT_TRUE(verify_destroyed(p, tau, all).destroyed);
  const DestroyCheck none = verify_destroyed(p, tau, DeletionSet{4, {}});
  EXPECT_FALSE(none.destroyed);
  ASSERT_EQ(none.witness.size(), 2u);
  EXPECT_GT(p(none.witness[0]), p(none.witness[1]));
  EXPECT_TRUE(all.contains(2, 1));
  EXPECT_FALSE((DeletionSet{4, {{0, 1}}}.contains(0, 2)));
}

TEST(Destroy, Preconditions) {
  const Permutation p = Permutation::identity(50);
  EXPECT_THROW(destroy_pattern(p, parse_pattern("1 0"), 0.25), parameter_error);
  EXPECT_THROW(destroy_pattern(p, parse_pattern("1 0"), 0.0), parameter_error);
}
