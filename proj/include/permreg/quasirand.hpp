#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "permreg/core.hpp"
#include "permreg/patterns.hpp"

namespace permreg {

// max over (x, y) in {0..n}^2 of |N(x,y) - xy/n|
double discrepancy_star(const Permutation& sigma);

enum class DiscrepancyMode { exact, bounded };

struct DiscrepancyBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
};

constexpr int max_exact_discrepancy = 512;

// Exact D over all interval pairs in O(n^3) (n <= 512): for each I the
// imbalance of J = [y1, y2) is g(y2) - g(y1) with g(y) = #{s in I : sigma(s) < y} - |I| y / n,
// so the best J is the spread max g - min g. Bounded mode returns [D*, 4 D*].
DiscrepancyBounds discrepancy(const Permutation& sigma, DiscrepancyMode mode);

// |#{x in I ∩ K : sigma(x) in J ∩ K'} - |I ∩ K||J ∩ K'| / n|
double separability_value(const Permutation& sigma, Interval i, Interval j, Interval k, Interval k2);
// Maximum of the above over 4-tuples with endpoints on multiples of `grid`
// (and n). Intersections of intervals are intervals, so this is the largest
// grid-aligned rectangle imbalance.
double separability_stat(const Permutation& sigma, int grid);

struct TwoSubseq {
  int size = 0;
  // Lambda^01 - Lambda^10 of sigma restricted to I ∩ sigma^{-1}(J)
  std::int64_t difference = 0;
  // |I|, |J| >= n/2
  bool in_regime = true;
};

TwoSubseq two_subseq_stat(const Permutation& sigma, Interval i, Interval j);

struct MSubseq {
  int size = 0;
  std::uint64_t count = 0;
  double target = 0.0;
  double deviation = 0.0;
};

// m <= 4
MSubseq m_subseq_stat(const Permutation& sigma, const Pattern& tau, Interval i, Interval j);

// |sum over s in sigma(I) of e(-k s / n)| for k = 1..k_max
std::vector<double> eigenvalue_stat(const Permutation& sigma, Interval i, int k_max);

// Sum over cyclic shifts k of (|sigma(I) ∩ (J + k)| - |I||J|/n)^2.
double translation_stat(const Permutation& sigma, Interval i, Interval j);

struct NearIdentity {
  bool near = true;
  int worst_block = -1;
  double worst_gap = 0.0;
  int k = 0;
  int exceptional_size = 0;
  // set by quasirandom_report when no uniform partition could be built
  std::string failure;
};

// Every block CDF of a uniform partition at eps must be 2 eps-near x -> x.
NearIdentity quasirandom_via_uniformity(const Permutation& sigma, double eps, int m = 1);

struct QuasirandomReport {
  int n = 0;
  double D_star = 0.0;
  double D_lower = 0.0;
  double D_upper = 0.0;
  bool D_exact = false;
  int sp_grid = 1;
  double sp_stat = 0.0;
  int two_s_size = 0;
  std::int64_t two_s_stat = 0;
  std::string m_s_pattern;
  double m_s_stat = 0.0;
  double translation_stat = 0.0;
  std::vector<double> eigenvalue_profile;
  double epsilon = 0.0;
  NearIdentity near_id;
};

struct QuasirandomOptions {
  double epsilon = 0.15;
  int eigen_k_max = 16;
  // 0 picks max(1, n / 32)
  int sp_grid = 0;
};

QuasirandomReport quasirandom_report(const Permutation& sigma, const QuasirandomOptions& options = {});

}  // namespace permreg
