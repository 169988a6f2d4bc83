#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "permreg/core.hpp"

namespace permreg {

// Interval blocks of one common length plus the exceptional set C_0.
struct EquitablePartition {
  int n = 0;
  std::vector<Interval> blocks;
  IndexSet exceptional;

  int k() const { return static_cast<int>(blocks.size()); }
  int block_length() const { return blocks.empty() ? 0 : blocks.front().length(); }
};

// Throws contract_error unless the blocks are equal-length, sorted, disjoint
// from each other and from C_0, and together with C_0 cover {0..n-1}.
void check_equitable(const EquitablePartition& p);

// k intervals of length floor(n/k) from 0; the n mod k rightmost points form C_0.
EquitablePartition equitable_partition(int n, int k);
EquitablePartition equitable_partition(const Permutation& sigma, int k);

// Sum over ordered pairs of parts of |X||Y| d(X,Y)^2 / n^2 where the parts are
// the given intervals (any lengths) plus every member of `singletons` as its
// own part. The parts must partition {0..n-1}.
double index_q(const Permutation& sigma, const std::vector<Interval>& parts, const IndexSet& singletons);
// C_0 is split into singletons.
double index_q(const Permutation& sigma, const EquitablePartition& p);

// q over the product of two families: sum of |X||Y| d(X,Y)^2 / n^2 for X in cs, Y in ds.
double pair_q(const Permutation& sigma, const std::vector<Interval>& cs, const std::vector<Interval>& ds);

enum class PairMode { exhaustive, grid, automatic };

PairMode parse_pair_mode(const std::string& name);

struct PairCheck {
  bool regular = true;
  double pair_density = 0.0;
  // Largest-gap subinterval pair (only meaningful when gap > 0).
  Interval I;
  Interval J;
  double gap = 0.0;
  bool exhaustive = true;
};

// Does every I ⊂ C, J ⊂ D with |I| >= eps|C|, |J| >= eps|D| keep
// |d(I,J) - d(C,D)| <= eps?
//
// Exhaustive mode is exact in O(|C|^2): for fixed I the map t -> fraction of
// I with image below t is nondecreasing, so d(I,J) over admissible J peaks at
// the shortest suffix of D and bottoms out at the shortest prefix. The
// returned J is that extreme interval; ties between I go to the smallest
// (I.lo, J.lo). Grid mode restricts endpoints to a lattice of step
// ceil(eps*len/4).
PairCheck is_regular_pair(const Permutation& sigma, Interval c, Interval d, double eps,
                          PairMode mode = PairMode::automatic);

struct IrregularPair {
  int s = 0;
  int t = 0;
  Interval I;
  Interval J;
  double gap = 0.0;
};

struct RegularityReport {
  double epsilon = 0.0;
  int k = 0;
  int block_length = 0;
  int exceptional_size = 0;
  double q = 0.0;
  // Ordered pairs (s,t), diagonal included, in (s,t) order.
  std::vector<IrregularPair> irregular_pairs;
  bool regular = false;
};

RegularityReport is_regular_partition(const Permutation& sigma, const EquitablePartition& p, double eps,
                                      PairMode mode = PairMode::automatic);

struct ExploitResult {
  std::vector<Interval> c_parts;
  std::vector<Interval> d_parts;
  double q_before = 0.0;
  double q_after = 0.0;
  // eps^4 |C||D| / n^2
  double required_gain = 0.0;
};

// Splits C into {C1, left rest, right rest} and D likewise (empty pieces
// dropped) and checks the resulting q gain.
ExploitResult exploit_irregular(const Permutation& sigma, Interval c, Interval d, Interval c1, Interval d1,
                                double eps);

// Only the three-way interval split, no checks beyond containment.
std::vector<Interval> tripartition(Interval c, Interval c1);

struct RefinePolicy {
  // Refined cells are cut into chunks of floor(c / divisor^k), at least min_block.
  double divisor = 81.0;
  int min_block = 1;
  int max_parts = 4096;
  // 0 means ceil(2 / eps^5).
  std::int64_t max_iterations = 0;
  PairMode mode = PairMode::automatic;
};

struct RefineResult {
  EquitablePartition partition;
  double q_before = 0.0;
  double q_after = 0.0;
  int chunk = 0;
  // q_after >= q_before + eps^5 / 2
  bool increment_met = false;
};

// One refinement of a partition that is not eps-regular. `report` must be
// is_regular_partition(sigma, p, eps) when supplied.
RefineResult refine_step(const Permutation& sigma, const EquitablePartition& p, double eps,
                         const RefinePolicy& policy, const RegularityReport* report = nullptr);

struct TraceEntry {
  double q = 0.0;
  int k = 0;
  int exceptional_size = 0;
};

enum class RunStatus { success, exhausted };

struct RegularRun {
  RunStatus status = RunStatus::exhausted;
  std::string reason;
  EquitablePartition partition;
  RegularityReport report;
  std::vector<TraceEntry> trace;
};

std::int64_t default_max_iterations(double eps);

RegularRun regular_partition(const Permutation& sigma, double eps, int m, const RefinePolicy& policy = {});

}  // namespace permreg
