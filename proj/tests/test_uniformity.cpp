#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "permreg/density.hpp"
#include "permreg/error.hpp"
#include "permreg/uniformity.hpp"

using namespace permreg;

namespace {

oracle::Atoms atoms_of(const Permutation& p, Interval s) {
  oracle::Atoms a;
  for (int x = s.lo; x < s.hi; ++x)
    a.atoms.emplace_back(static_cast<double>(p(x)) / p.size(), 1.0 / s.length());
  return a;
}

// Every I inside the block with |I| >= eps |C| against L(C), on the lattice grid.
bool block_uniform_oracle(const Permutation& p, Interval c, double eps) {
  const oracle::Atoms f = atoms_of(p, c);
  const int a = std::max(1, static_cast<int>(std::ceil(eps * c.length() - 1e-9)));
  for (int i0 = c.lo; i0 < c.hi; ++i0)
    for (int i1 = i0 + a; i1 <= c.hi; ++i1)
      if (!oracle::near_on_grid(atoms_of(p, {i0, i1}), f, eps, 1.0 / (8.0 * p.size()))) return false;
  return true;
}

}  // namespace

TEST(VerifyBlock, MatchesBruteForce) {
  std::mt19937_64 rng(30);
  int fails = 0;
  int passes = 0;
  for (int t = 0; t < 80; ++t) {
    const int n = 64;
    const Permutation p = t % 4 == 0 ? Permutation::identity(n) : oracle::random_perm(n, rng);
    const int len = 4 + static_cast<int>(rng() % 20);
    const int lo = static_cast<int>(rng() % static_cast<std::uint64_t>(n - len));
    const Interval c{lo, lo + len};
    // eps on the half lattice so every critical point is a grid point
    const double eps = (static_cast<int>(rng() % 20) + 0.5) / 64.0;
    const bool want = block_uniform_oracle(p, c, eps);
    const UniformCheck got = verify_block(p, c, cdf_L(p, c), eps);
    ASSERT_EQ(got.uniform, want) << "trial " << t;
    if (!got.uniform) {
      EXPECT_GE(got.I.length(), eps * len - 1e-9);
      EXPECT_GE(got.I.lo, c.lo);
      EXPECT_LE(got.I.hi, c.hi);
      EXPECT_FALSE(eps_near(cdf_L(p, got.I), cdf_L(p, c), eps).near);
    }
    (want ? passes : fails)++;
  }
  EXPECT_GT(passes, 10);
  EXPECT_GT(fails, 10);
}

TEST(VerifyBlock, EpsOneIsSelfNear) {
  std::mt19937_64 rng(31);
  const Permutation p = oracle::random_perm(50, rng);
  EXPECT_TRUE(verify_block(p, {10, 30}, cdf_L(p, Interval{10, 30}), 1.0).uniform);
}

TEST(UniformPartition, RandomPassesVerification) {
  const Permutation p = generate(GenKind::random, 4096, 12);
  const UniformPartition u = uniform_partition(p, 0.2, 8);
  EXPECT_GE(u.partition.k(), 1);
  EXPECT_LE(u.partition.exceptional.size(), 0.2 * 4096);
  EXPECT_NO_THROW(check_equitable(u.partition));
  const UniformCheck c = verify_uniform(p, u);
  EXPECT_TRUE(c.uniform);
  EXPECT_TRUE(c.exceptional_ok);
  ASSERT_EQ(u.family.size(), u.partition.blocks.size());
  for (std::size_t s = 0; s < u.family.size(); ++s) {
    const Cdf& f = u.family[s];
    EXPECT_DOUBLE_EQ(f.value(1.0), 1.0);
    EXPECT_GE(f.value(0.0), 0.0);
    EXPECT_LE(f.value(0.0), 1.0);
    double prev = 0.0;
    for (const auto& [x, v] : f.breakpoints()) {
      // jumps of at most 1/|C_s|, values nondecreasing
      EXPECT_LE(v - prev, 1.0 / u.partition.block_length() + 1e-12);
      EXPECT_GE(v, prev - 1e-12);
      prev = v;
    }
  }
}

TEST(UniformPartition, CorruptedFamilyIsCaught) {
  const Permutation p = generate(GenKind::random, 4096, 13);
  UniformPartition u = uniform_partition(p, 0.2, 8);
  ASSERT_GE(u.family.size(), 2u);
  const double eps = 0.2;
  std::vector<double> xs, vs;
  bool inserted = false;
  for (const auto& [x, v] : u.family[1].breakpoints()) {
    if (!inserted && x >= 0.3) {
      if (x > 0.3) {
        xs.push_back(0.3);
        vs.push_back(std::min(1.0, u.family[1].right(0.3) + 3 * eps));
      }
      inserted = true;
    }
    xs.push_back(x);
    vs.push_back(x >= 0.3 ? std::min(1.0, v + 3 * eps) : v);
  }
  u.family[1] = Cdf::step(xs, vs);
  const UniformCheck c = verify_uniform(p, u);
  EXPECT_FALSE(c.uniform);
  EXPECT_EQ(c.block, 1);
  EXPECT_GT(c.gap, 0.0);
}

TEST(UniformPartition, ExceptionalSetTooLargeIsCaught) {
  const Permutation p = generate(GenKind::random, 1000, 3);
  UniformPartition u = uniform_partition(p, 0.25, 4);
  u.partition.blocks.resize(1);
  u.family.resize(1);
  std::vector<int> rest;
  for (int x = u.partition.blocks[0].hi; x < 1000; ++x) rest.push_back(x);
  u.partition.exceptional = IndexSet(rest);
  EXPECT_FALSE(verify_uniform(p, u).exceptional_ok);
}

TEST(UniformPartition, RoundTripAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 4; ++seed)
    for (double eps : {0.15, 0.25}) {
      const Permutation p = generate(GenKind::random, 2048, seed);
      const UniformPartition u = uniform_partition(p, eps, 1);
      EXPECT_TRUE(verify_uniform(p, u).uniform) << seed << " " << eps;
      EXPECT_LE(u.partition.exceptional.size(), eps * 2048);
    }
}

TEST(UniformPartition, StructuredInputs) {
  for (auto kind : {GenKind::identity, GenKind::reverse, GenKind::interleave}) {
    const Permutation p = generate(kind, 1000, 0);
    const UniformPartition u = uniform_partition(p, 0.1, 3);
    EXPECT_TRUE(verify_uniform(p, u).uniform);
    EXPECT_GE(u.partition.k(), 3);
  }
}

TEST(UniformPartition, ViaRegularStrategyOutputIsSound) {
  const Permutation p = Permutation::identity(400);
  UniformPolicy policy;
  policy.strategy = UniformStrategy::via_regular;
  try {
    const UniformPartition u = uniform_partition(p, 0.45, 1, policy);
    EXPECT_LE(u.partition.exceptional.size(), 0.45 * 400);
    EXPECT_GE(u.partition.k(), static_cast<int>(std::ceil(4 / 0.45)) - static_cast<int>(u.discarded.size()));
  } catch (const refinement_exhausted&) {
    SUCCEED();
  }
}

TEST(UniformPartition, Preconditions) {
  const Permutation p = generate(GenKind::random, 100, 1);
  EXPECT_THROW(uniform_partition(p, 0.6, 1), parameter_error);
  EXPECT_THROW(uniform_partition(p, 0.5, 1), parameter_error);
  EXPECT_THROW(uniform_partition(p, 0.0, 1), parameter_error);
  EXPECT_THROW(uniform_partition(p, 0.2, 0), parameter_error);
  EXPECT_THROW(parse_uniform_strategy("lazy"), parameter_error);
}

TEST(UniformPartition, Deterministic) {
  const Permutation p = generate(GenKind::random, 2048, 5);
  const UniformPartition a = uniform_partition(p, 0.2, 4);
  const UniformPartition b = uniform_partition(p, 0.2, 4);
  EXPECT_EQ(a.partition.blocks, b.partition.blocks);
  EXPECT_EQ(a.partition.exceptional, b.partition.exceptional);
  EXPECT_EQ(a.discarded, b.discarded);
}
