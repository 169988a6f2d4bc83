#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "permreg/cdf.hpp"
#include "permreg/core.hpp"
#include "permreg/uniformity.hpp"

namespace permreg {

struct Pattern {
  Permutation perm;

  Pattern() = default;
  explicit Pattern(Permutation p) : perm(std::move(p)) {}
  int m() const { return perm.size(); }
  int operator()(int i) const { return perm(i); }
};

Pattern parse_pattern(std::string_view text);
// All of S_m in lexicographic order.
std::vector<Pattern> all_patterns(int m);

constexpr int max_exact_pattern = 6;

// Lambda^tau(sigma): index sets x_0 < ... < x_{m-1} order-isomorphic to tau.
// m <= 3 uses Fenwick-tree identities; 4 <= m <= 6 enumerates the first m-1
// entries with value-range pruning and counts the last one with a dominance
// rectangle. m > n gives 0; m > 6 throws parameter_error.
std::uint64_t count_pattern(const Permutation& sigma, const Pattern& tau);
// Occurrences inside sigma restricted to the given indices.
std::uint64_t count_pattern(const Permutation& sigma, const Pattern& tau, const IndexSet& restriction);
// m nested loops; n <= 40.
std::uint64_t count_pattern_naive(const Permutation& sigma, const Pattern& tau);

// First occurrence in lexicographic index order, if any.
std::optional<std::vector<int>> find_pattern(const Permutation& sigma, const Pattern& tau);
bool contains_pattern(const Permutation& sigma, const Pattern& tau);

struct UniversalityResult {
  bool universal = true;
  std::optional<Pattern> missing;
};
UniversalityResult universality_check(const Permutation& sigma, int m);

// Indices of a longest strictly increasing (or decreasing) subsequence.
std::vector<int> longest_monotone(const std::vector<int>& seq, bool increasing);

struct ScatterResult {
  bool holds = true;
  Interval I;
  Interval J;
  // |sigma(I) ∩ J| / |I| for the worst pair examined
  double ratio = 0.0;
  bool exact = true;
};

// (delta, eps, gamma)-property: |sigma(I) ∩ J| <= gamma |I| whenever
// |I| >= delta n and |J| <= eps n. Exact for n <= 512, lattice otherwise.
ScatterResult scatter_property(const Permutation& sigma, double delta, double eps, double gamma);

struct BlockFamily {
  // Accumulation intervals [start, r) and the gap intervals [r, r + 4 eps)
  // produced by the sweep.
  std::vector<std::pair<double, double>> accumulation;
  std::vector<std::pair<double, double>> gaps;
  // Complement pieces of the shrunk accumulation intervals that contain a gap.
  std::vector<std::pair<double, double>> intervals;
  double covered_mass = 0.0;
};

// The greedy sweep on one block CDF. The shrink by eps is skipped at 0 and
// at 1 so edge pieces stay within 6 eps.
BlockFamily concentration_sweep(const Cdf& f, double eps);

struct ConcentrationFamily {
  double epsilon = 0.0;
  int m = 0;
  std::vector<BlockFamily> blocks;
  // Lambda^tau(sigma) when it was available
  std::optional<std::uint64_t> pattern_count;
  // (eps n / 2 k m)^m
  double threshold = 0.0;
  // pattern_count < threshold
  bool certified = false;
  // every block: <= m-1 intervals, lengths <= 6 eps, mass >= 1 - 7 m eps
  bool bounds_hold = false;
};

// Requires eps <= 1/(2m). When `count` is absent and m <= 6 the exact count
// is computed for the certificate.
ConcentrationFamily concentration_intervals(const Permutation& sigma, const UniformPartition& u, const Pattern& tau,
                                            std::optional<std::uint64_t> count = std::nullopt);

struct PseudomonotoneResult {
  IndexSet X;
  // min(Lambda^01, Lambda^10) of sigma|X over C(|X|, 2); 0 when |X| < 2
  double delta_prime = 0.0;
  bool increasing = true;
  double eta = 0.0;
  double epsilon = 0.0;
  int k = 0;
  int selected_blocks = 0;
  // no disjoint intervals were found; X is the best single block slice
  bool degenerate = false;
};

PseudomonotoneResult pseudomonotone_subset(const Permutation& sigma, const Pattern& tau, double delta);

struct DeletionSet {
  int n = 0;
  // sorted (i, j) with i < j
  std::vector<std::pair<int, int>> pairs;

  bool contains(int i, int j) const;
};

struct DestroyResult {
  DeletionSet deleted;
  // pairs each rule asks for (rules overlap, so these may sum past the total)
  std::uint64_t rule_a = 0;
  std::uint64_t rule_b = 0;
  std::uint64_t rule_c = 0;
  int k = 0;
  int block_length = 0;
  int exceptional_size = 0;
  double epsilon = 0.0;
};

// eps < 1/(2m)
DestroyResult destroy_pattern(const Permutation& sigma, const Pattern& tau, double eps);

struct DestroyCheck {
  bool destroyed = true;
  std::vector<int> witness;
};

// Every occurrence of tau must contain both ends of some deleted pair. m <= 6.
DestroyCheck verify_destroyed(const Permutation& sigma, const Pattern& tau, const DeletionSet& s);

}  // namespace permreg
