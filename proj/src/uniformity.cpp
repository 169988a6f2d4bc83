#include "permreg/uniformity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "permreg/density.hpp"
#include "permreg/error.hpp"
#include "permreg/parallel.hpp"

namespace permreg {

UniformStrategy parse_uniform_strategy(const std::string& name) {
  if (name == "direct") return UniformStrategy::direct;
  if (name == "regular") return UniformStrategy::via_regular;
  throw parameter_error("unknown uniform strategy '" + name + "'");
}

namespace {

struct Excess {
  double sum = -std::numeric_limits<double>::infinity();
  int lo = 0;
  int hi = 0;
};

// Largest sum of w over windows of length >= a.
Excess max_window(const std::vector<double>& w, int a) {
  const int len = static_cast<int>(w.size());
  std::vector<double> pre(w.size() + 1, 0.0);
  for (int i = 0; i < len; ++i) pre[static_cast<std::size_t>(i) + 1] = pre[static_cast<std::size_t>(i)] + w[static_cast<std::size_t>(i)];
  Excess best;
  double min_pre = std::numeric_limits<double>::infinity();
  int min_at = 0;
  for (int hi = a; hi <= len; ++hi) {
    const int lo = hi - a;
    if (pre[static_cast<std::size_t>(lo)] < min_pre) {
      min_pre = pre[static_cast<std::size_t>(lo)];
      min_at = lo;
    }
    const double s = pre[static_cast<std::size_t>(hi)] - min_pre;
    if (s > best.sum) best = {s, min_at, hi};
  }
  return best;
}

}  // namespace

UniformCheck verify_block(const Permutation& sigma, Interval block, const Cdf& f, double eps) {
  check_interval(block, sigma.size());
  if (block.empty()) throw parameter_error("verify_block: empty block");
  const int len = block.length();
  const int a = std::clamp(static_cast<int>(std::ceil(eps * len - 1e-9)), 1, len);
  const double n = sigma.size();
  std::vector<int> values;
  for (int x = block.lo; x < block.hi; ++x) values.push_back(sigma(x));
  std::sort(values.begin(), values.end());

  // For every image v of the block the sandwich at alpha = v/n (and just
  // right of it) is a linear constraint on the counts inside I; together
  // these are exactly the nearness conditions for L(I, .).
  UniformCheck out;
  Excess worst;
  std::vector<double> w(static_cast<std::size_t>(len));
  for (int v : values) {
    const double upper = f.right(v / n + eps) + eps + near_tolerance;
    for (int i = 0; i < len; ++i) w[static_cast<std::size_t>(i)] = (sigma(block.lo + i) <= v ? 1.0 : 0.0) - upper;
    Excess e = max_window(w, a);
    if (e.sum > worst.sum) worst = e;
    const double lower = f.value(v / n - eps) - eps - near_tolerance;
    for (int i = 0; i < len; ++i) w[static_cast<std::size_t>(i)] = lower - (sigma(block.lo + i) < v ? 1.0 : 0.0);
    e = max_window(w, a);
    if (e.sum > worst.sum) worst = e;
  }
  if (worst.sum > 0) {
    out.uniform = false;
    out.I = {block.lo + worst.lo, block.lo + worst.hi};
    const NearResult nr = eps_near(cdf_L(sigma, out.I), f, eps);
    out.alpha = nr.alpha;
    out.gap = nr.gap;
  }
  return out;
}

UniformCheck verify_uniform(const Permutation& sigma, const UniformPartition& u) {
  check_equitable(u.partition);
  if (u.family.size() != u.partition.blocks.size()) throw contract_error("family size differs from block count");
  const auto k = u.partition.blocks.size();
  std::vector<UniformCheck> per(k);
  parallel_for(k, [&](std::size_t s) { per[s] = verify_block(sigma, u.partition.blocks[s], u.family[s], u.epsilon); });
  UniformCheck out;
  for (std::size_t s = 0; s < k; ++s) {
    if (per[s].uniform) continue;
    if (out.uniform || per[s].gap > out.gap) {
      out = per[s];
      out.block = static_cast<int>(s);
    }
    out.uniform = false;
  }
  out.exceptional_ok = u.partition.exceptional.size() <= u.epsilon * sigma.size() + 1e-9;
  if (!out.exceptional_ok) out.uniform = false;
  return out;
}

namespace {

UniformPartition discard_blocks(const Permutation& sigma, const EquitablePartition& p, const std::vector<char>& bad,
                                double eps) {
  UniformPartition u;
  u.epsilon = eps;
  u.starting_k = p.k();
  u.partition.n = p.n;
  std::vector<int> rest = p.exceptional.members();
  for (int s = 0; s < p.k(); ++s) {
    const Interval b = p.blocks[static_cast<std::size_t>(s)];
    if (bad[static_cast<std::size_t>(s)]) {
      u.discarded.push_back(s);
      for (int x = b.lo; x < b.hi; ++x) rest.push_back(x);
    } else {
      u.partition.blocks.push_back(b);
      u.family.push_back(cdf_L(sigma, b));
    }
  }
  u.partition.exceptional = IndexSet(std::move(rest));
  return u;
}

UniformPartition attempt_direct(const Permutation& sigma, double eps, int k) {
  const EquitablePartition p = equitable_partition(sigma, k);
  std::vector<char> bad(static_cast<std::size_t>(k), 0);
  parallel_for(static_cast<std::size_t>(k), [&](std::size_t s) {
    const Interval b = p.blocks[s];
    bad[s] = verify_block(sigma, b, cdf_L(sigma, b), eps).uniform ? 0 : 1;
  });
  return discard_blocks(sigma, p, bad, eps);
}

UniformPartition attempt_via_regular(const Permutation& sigma, double eps, int m, const RefinePolicy& policy) {
  const RegularRun run = regular_partition(sigma, eps * eps / 4, m, policy);
  if (run.status != RunStatus::success)
    throw refinement_exhausted("uniform partition: eps^2/4-regular stage failed: " + run.reason);
  const auto k = static_cast<std::size_t>(run.partition.k());
  std::vector<std::vector<char>> partner(k, std::vector<char>(k, 0));
  for (const auto& ip : run.report.irregular_pairs) {
    partner[static_cast<std::size_t>(ip.s)][static_cast<std::size_t>(ip.t)] = 1;
    partner[static_cast<std::size_t>(ip.t)][static_cast<std::size_t>(ip.s)] = 1;
  }
  std::vector<char> bad(k, 0);
  for (std::size_t s = 0; s < k; ++s) {
    const auto count = std::count(partner[s].begin(), partner[s].end(), 1);
    bad[s] = static_cast<double>(count) > eps * static_cast<double>(k) / 2 ? 1 : 0;
  }
  return discard_blocks(sigma, run.partition, bad, eps);
}

}  // namespace

UniformPartition uniform_partition(const Permutation& sigma, double eps, int m, const UniformPolicy& policy) {
  if (!(eps > 0 && eps < 0.5)) throw parameter_error("uniform_partition needs 0 < eps < 1/2");
  const int n = sigma.size();
  if (m < 1) throw parameter_error("uniform_partition needs m >= 1");
  const int floor_k = static_cast<int>(std::ceil(
      (policy.strategy == UniformStrategy::direct ? 1.0 : 4.0) / eps - 1e-9));
  const int start = std::min(n, std::max(m, floor_k));
  // Direct mode refines first (clustered images need short blocks), then
  // coarsens toward m (noisy images need long ones).
  std::vector<int> ks;
  for (int k = start, i = 0; i <= policy.retries; ++i) {
    ks.push_back(k);
    if (k == n) break;
    k = std::min(n, 2 * k);
  }
  if (policy.strategy == UniformStrategy::direct)
    for (int k = start / 2; k >= m && k >= 1; k /= 2) ks.push_back(k);
  int attempt = 0;
  for (int k : ks) {
    UniformPartition u = policy.strategy == UniformStrategy::direct ? attempt_direct(sigma, eps, k)
                                                                    : attempt_via_regular(sigma, eps, k, policy.refine);
    u.attempts = ++attempt;
    if (u.partition.exceptional.size() <= eps * n + 1e-9) return u;
  }
  throw refinement_exhausted("uniform partition: exceptional set stays above eps*n after " +
                             std::to_string(attempt) + " attempts");
}

}  // namespace permreg
