#pragma once

#include <string>
#include <vector>

#include "permreg/cdf.hpp"
#include "permreg/core.hpp"
#include "permreg/regularity.hpp"

namespace permreg {

struct UniformPartition {
  EquitablePartition partition;
  // family[s] = L(C_s, .) for each surviving block
  std::vector<Cdf> family;
  double epsilon = 0.0;
  // Blocks of the starting partition that were moved into C_0, by their
  // index in that partition.
  std::vector<int> discarded;
  int starting_k = 0;
  int attempts = 0;
};

enum class UniformStrategy {
  // Equitable start with k = max(m, ceil(1/eps)); blocks that fail the
  // uniformity check go to C_0; while |C_0| > eps n, k doubles (up to
  // `retries` times) and then halves from the start down to m.
  direct,
  // eps^2/4-regular partition first; blocks irregular with more than eps k/2
  // partners go to C_0; m doubles while |C_0| > eps n.
  via_regular,
};

UniformStrategy parse_uniform_strategy(const std::string& name);

struct UniformPolicy {
  UniformStrategy strategy = UniformStrategy::direct;
  int retries = 3;
  RefinePolicy refine;
};

// 0 < eps < 1/2. Throws refinement_exhausted when every retry leaves
// |C_0| > eps n.
UniformPartition uniform_partition(const Permutation& sigma, double eps, int m, const UniformPolicy& policy = {});

struct UniformCheck {
  bool uniform = true;
  bool exceptional_ok = true;
  // Worst offending block (index into partition.blocks), its interval, and
  // the eps_near result for L(I, .) against f_s. The interval is the one with
  // the largest excess count over the sandwich threshold.
  int block = -1;
  Interval I;
  double alpha = 0.0;
  double gap = 0.0;
};

// Exact check of one block against a reference CDF, O(|C|^2).
UniformCheck verify_block(const Permutation& sigma, Interval block, const Cdf& f, double eps);

UniformCheck verify_uniform(const Permutation& sigma, const UniformPartition& u);

}  // namespace permreg
