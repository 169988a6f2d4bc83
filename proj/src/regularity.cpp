#include "permreg/regularity.hpp"

#include <algorithm>
#include <cmath>

#include "permreg/density.hpp"
#include "permreg/error.hpp"
#include "permreg/parallel.hpp"

namespace permreg {

namespace {

constexpr double kTieTol = 1e-13;
constexpr double kGapTol = 1e-12;

int min_length(double eps, int len) {
  auto a = static_cast<int>(std::ceil(eps * len - 1e-9));
  return std::clamp(a, 1, std::max(len, 1));
}

std::int64_t above(int v, Interval t) { return std::max(0, t.hi - std::max(t.lo, v + 1)); }

bool contains(Interval outer, Interval inner) {
  return outer.lo <= inner.lo && inner.hi <= outer.hi && inner.lo <= inner.hi;
}

// Candidate witness ordering: larger gap first, then smaller (I.lo, J.lo).
bool better(double gap, Interval i, Interval j, const PairCheck& cur) {
  if (gap > cur.gap + kTieTol) return true;
  if (gap < cur.gap - kTieTol) return false;
  if (i.lo != cur.I.lo) return i.lo < cur.I.lo;
  return j.lo < cur.J.lo;
}

}  // namespace

void check_equitable(const EquitablePartition& p) {
  if (p.n < 1) throw contract_error("partition with n < 1");
  std::vector<char> seen(static_cast<std::size_t>(p.n), 0);
  const int len = p.block_length();
  int prev_hi = 0;
  for (const auto& b : p.blocks) {
    if (b.lo < 0 || b.hi > p.n || b.length() <= 0) throw contract_error("partition block out of range or empty");
    if (b.length() != len) throw contract_error("partition blocks have unequal lengths");
    if (b.lo < prev_hi) throw contract_error("partition blocks overlap or are unsorted");
    prev_hi = b.hi;
    for (int x = b.lo; x < b.hi; ++x) seen[static_cast<std::size_t>(x)] = 1;
  }
  for (int x : p.exceptional.members()) {
    if (x < 0 || x >= p.n) throw contract_error("exceptional index out of range");
    if (seen[static_cast<std::size_t>(x)]) throw contract_error("exceptional index inside a block");
    seen[static_cast<std::size_t>(x)] = 1;
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw contract_error("partition does not cover {0..n-1}");
}

EquitablePartition equitable_partition(int n, int k) {
  if (n < 1) throw parameter_error("equitable_partition: n must be >= 1");
  if (k < 1 || k > n)
    throw parameter_error("equitable_partition: need 1 <= k <= n, got k=" + std::to_string(k));
  EquitablePartition p;
  p.n = n;
  const int len = n / k;
  for (int s = 0; s < k; ++s) p.blocks.push_back({s * len, (s + 1) * len});
  std::vector<int> rest;
  for (int x = k * len; x < n; ++x) rest.push_back(x);
  p.exceptional = IndexSet(std::move(rest));
  return p;
}

EquitablePartition equitable_partition(const Permutation& sigma, int k) {
  return equitable_partition(sigma.size(), k);
}

double index_q(const Permutation& sigma, const std::vector<Interval>& parts, const IndexSet& singletons) {
  const int n = sigma.size();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  auto mark = [&](int x) {
    if (x < 0 || x >= n) throw parameter_error("index_q: part member out of range");
    if (seen[static_cast<std::size_t>(x)]) throw parameter_error("index_q: parts overlap");
    seen[static_cast<std::size_t>(x)] = 1;
  };
  for (const auto& iv : parts) {
    if (iv.empty()) throw parameter_error("index_q: empty part");
    for (int x = iv.lo; x < iv.hi; ++x) mark(x);
  }
  for (int x : singletons.members()) mark(x);
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw parameter_error("index_q: parts do not cover");

  const auto& single = singletons.members();
  long double total = 0.0L;

  // interval part X against everything
  std::vector<std::int64_t> below(static_cast<std::size_t>(n) + 1);
  std::vector<std::int64_t> cum(static_cast<std::size_t>(n) + 1);
  for (const auto& x : parts) {
    std::fill(below.begin(), below.end(), 0);
    for (int s = x.lo; s < x.hi; ++s) below[static_cast<std::size_t>(sigma(s)) + 1] += 1;
    for (int y = 0; y < n; ++y) below[static_cast<std::size_t>(y) + 1] += below[static_cast<std::size_t>(y)];
    cum[0] = 0;
    for (int y = 0; y < n; ++y) cum[static_cast<std::size_t>(y) + 1] = cum[static_cast<std::size_t>(y)] + below[static_cast<std::size_t>(y)];
    const long double lx = x.length();
    for (const auto& y : parts) {
      const auto p = static_cast<long double>(cum[static_cast<std::size_t>(y.hi)] - cum[static_cast<std::size_t>(y.lo)]);
      total += p * p / (lx * y.length());
    }
    for (int y : single) {
      const auto p = static_cast<long double>(below[static_cast<std::size_t>(y)]);
      total += p * p / lx;
    }
  }
  // singleton X against interval parts and against singletons
  for (int x : single) {
    const int v = sigma(x);
    for (const auto& y : parts) {
      const auto p = static_cast<long double>(above(v, y));
      total += p * p / y.length();
    }
    total += static_cast<long double>(single.end() - std::upper_bound(single.begin(), single.end(), v));
  }
  return static_cast<double>(total / (static_cast<long double>(n) * n));
}

double index_q(const Permutation& sigma, const EquitablePartition& p) {
  return index_q(sigma, p.blocks, p.exceptional);
}

double pair_q(const Permutation& sigma, const std::vector<Interval>& cs, const std::vector<Interval>& ds) {
  const long double n = sigma.size();
  long double total = 0.0L;
  for (const auto& x : cs)
    for (const auto& y : ds) {
      if (x.empty() || y.empty()) continue;
      const auto p = static_cast<long double>(pair_count(sigma, x, y));
      total += p * p / (static_cast<long double>(x.length()) * y.length());
    }
  return static_cast<double>(total / (n * n));
}

PairMode parse_pair_mode(const std::string& name) {
  if (name == "exhaustive") return PairMode::exhaustive;
  if (name == "grid") return PairMode::grid;
  if (name == "auto" || name == "automatic") return PairMode::automatic;
  throw parameter_error("unknown pair mode '" + name + "'");
}

namespace {

// prefix[x] = sum over the first x members of C of #{t in J : t > sigma(s)}
void fill_prefix(const Permutation& sigma, Interval c, Interval j, std::vector<std::int64_t>& prefix) {
  prefix.assign(static_cast<std::size_t>(c.length()) + 1, 0);
  for (int x = 0; x < c.length(); ++x)
    prefix[static_cast<std::size_t>(x) + 1] = prefix[static_cast<std::size_t>(x)] + above(sigma(c.lo + x), j);
}

void scan_exhaustive(const Permutation& sigma, Interval c, Interval d, int a, int b, PairCheck& out) {
  const int len = c.length();
  const Interval suffix{d.hi - b, d.hi};
  const Interval prefix{d.lo, d.lo + b};
  std::vector<std::int64_t> up;
  std::vector<std::int64_t> down;
  fill_prefix(sigma, c, suffix, up);
  fill_prefix(sigma, c, prefix, down);
  double best_up = -1.0;
  double best_down = -1.0;
  Interval i_up, i_down;
  for (int lo = 0; lo + a <= len; ++lo) {
    for (int hi = lo + a; hi <= len; ++hi) {
      const double area = static_cast<double>(hi - lo) * b;
      const double g_up = (up[static_cast<std::size_t>(hi)] - up[static_cast<std::size_t>(lo)]) / area - out.pair_density;
      const double g_down = out.pair_density - (down[static_cast<std::size_t>(hi)] - down[static_cast<std::size_t>(lo)]) / area;
      if (g_up > best_up + kTieTol) {
        best_up = g_up;
        i_up = {c.lo + lo, c.lo + hi};
      }
      if (g_down > best_down + kTieTol) {
        best_down = g_down;
        i_down = {c.lo + lo, c.lo + hi};
      }
    }
  }
  out.gap = -1.0;
  if (better(best_up, i_up, suffix, out)) {
    out.gap = best_up;
    out.I = i_up;
    out.J = suffix;
  }
  if (better(best_down, i_down, prefix, out)) {
    out.gap = best_down;
    out.I = i_down;
    out.J = prefix;
  }
}

std::vector<int> lattice(int len, int step) {
  std::vector<int> pts;
  for (int x = 0; x < len; x += step) pts.push_back(x);
  pts.push_back(len);
  return pts;
}

void scan_grid(const Permutation& sigma, Interval c, Interval d, double eps, int a, int b, PairCheck& out) {
  const int sc = std::max(1, static_cast<int>(std::ceil(eps * c.length() / 4)));
  const int sd = std::max(1, static_cast<int>(std::ceil(eps * d.length() / 4)));
  const auto pc = lattice(c.length(), sc);
  const auto pd = lattice(d.length(), sd);
  std::vector<std::int64_t> pre;
  out.gap = -1.0;
  for (std::size_t jl = 0; jl < pd.size(); ++jl) {
    for (std::size_t jh = jl + 1; jh < pd.size(); ++jh) {
      if (pd[jh] - pd[jl] < b) continue;
      const Interval j{d.lo + pd[jl], d.lo + pd[jh]};
      fill_prefix(sigma, c, j, pre);
      for (std::size_t il = 0; il < pc.size(); ++il) {
        for (std::size_t ih = il + 1; ih < pc.size(); ++ih) {
          if (pc[ih] - pc[il] < a) continue;
          const double dij = (pre[static_cast<std::size_t>(pc[ih])] - pre[static_cast<std::size_t>(pc[il])]) /
                             (static_cast<double>(pc[ih] - pc[il]) * j.length());
          const double gap = std::abs(dij - out.pair_density);
          const Interval i{c.lo + pc[il], c.lo + pc[ih]};
          if (better(gap, i, j, out)) {
            out.gap = gap;
            out.I = i;
            out.J = j;
          }
        }
      }
    }
  }
}

}  // namespace

PairCheck is_regular_pair(const Permutation& sigma, Interval c, Interval d, double eps, PairMode mode) {
  check_interval(c, sigma.size());
  check_interval(d, sigma.size());
  if (c.empty() || d.empty()) throw parameter_error("is_regular_pair: empty block");
  if (!(eps > 0)) throw parameter_error("is_regular_pair: eps must be positive");
  PairCheck out;
  out.pair_density = density(sigma, c, d);
  const int a = min_length(eps, c.length());
  const int b = min_length(eps, d.length());
  if (mode == PairMode::automatic)
    mode = static_cast<std::int64_t>(c.length()) * d.length() <= (std::int64_t{1} << 28) ? PairMode::exhaustive
                                                                                         : PairMode::grid;
  out.exhaustive = mode == PairMode::exhaustive;
  if (out.exhaustive)
    scan_exhaustive(sigma, c, d, a, b, out);
  else
    scan_grid(sigma, c, d, eps, a, b, out);
  out.gap = std::max(out.gap, 0.0);
  out.regular = out.gap <= eps + kGapTol;
  return out;
}

RegularityReport is_regular_partition(const Permutation& sigma, const EquitablePartition& p, double eps,
                                      PairMode mode) {
  check_equitable(p);
  if (p.n != sigma.size()) throw contract_error("partition size does not match the permutation");
  RegularityReport r;
  r.epsilon = eps;
  r.k = p.k();
  r.block_length = p.block_length();
  r.exceptional_size = p.exceptional.size();
  r.q = index_q(sigma, p);
  const auto k = static_cast<std::size_t>(p.k());
  std::vector<PairCheck> checks(k * k);
  parallel_for(k * k, [&](std::size_t idx) {
    checks[idx] = is_regular_pair(sigma, p.blocks[idx / k], p.blocks[idx % k], eps, mode);
  });
  for (std::size_t idx = 0; idx < checks.size(); ++idx) {
    if (checks[idx].regular) continue;
    r.irregular_pairs.push_back(
        {static_cast<int>(idx / k), static_cast<int>(idx % k), checks[idx].I, checks[idx].J, checks[idx].gap});
  }
  const double budget = eps * static_cast<double>(k) * static_cast<double>(k);
  r.regular = static_cast<double>(r.irregular_pairs.size()) <= budget + 1e-9 &&
              r.exceptional_size <= eps * p.n + 1e-9;
  return r;
}

std::vector<Interval> tripartition(Interval c, Interval c1) {
  if (!contains(c, c1) || c1.empty()) throw parameter_error("witness interval must be a nonempty subinterval");
  std::vector<Interval> out{c1};
  if (c1.lo > c.lo) out.push_back({c.lo, c1.lo});
  if (c.hi > c1.hi) out.push_back({c1.hi, c.hi});
  return out;
}

ExploitResult exploit_irregular(const Permutation& sigma, Interval c, Interval d, Interval c1, Interval d1,
                                double eps) {
  check_interval(c, sigma.size());
  check_interval(d, sigma.size());
  if (!contains(c, c1) || !contains(d, d1) || c1.empty() || d1.empty())
    throw contract_error("exploit: witness intervals must lie inside the pair");
  if (c1.length() < eps * c.length() - 1e-9 || d1.length() < eps * d.length() - 1e-9)
    throw contract_error("exploit: witness intervals are too short");
  const double gap = std::abs(density(sigma, c1, d1) - density(sigma, c, d));
  if (!(gap > eps)) throw contract_error("exploit: witness does not violate regularity");
  ExploitResult r;
  r.c_parts = tripartition(c, c1);
  r.d_parts = tripartition(d, d1);
  r.q_before = pair_q(sigma, {c}, {d});
  r.q_after = pair_q(sigma, r.c_parts, r.d_parts);
  const double n = sigma.size();
  r.required_gain = std::pow(eps, 4) * c.length() * d.length() / (n * n);
  if (r.q_after < r.q_before + r.required_gain - kGapTol)
    throw contract_error("exploit: q gain below eps^4 |C||D| / n^2");
  return r;
}

RefineResult refine_step(const Permutation& sigma, const EquitablePartition& p, double eps,
                         const RefinePolicy& policy, const RegularityReport* report) {
  RegularityReport local;
  if (!report) {
    local = is_regular_partition(sigma, p, eps, policy.mode);
    report = &local;
  }
  if (report->regular) throw contract_error("refine_step called on an eps-regular partition");

  const int k = p.k();
  const int c = p.block_length();
  std::vector<std::vector<int>> cuts(static_cast<std::size_t>(k));
  for (int s = 0; s < k; ++s) cuts[static_cast<std::size_t>(s)] = {p.blocks[static_cast<std::size_t>(s)].lo, p.blocks[static_cast<std::size_t>(s)].hi};
  for (const auto& ip : report->irregular_pairs) {
    auto& cs = cuts[static_cast<std::size_t>(ip.s)];
    cs.push_back(ip.I.lo);
    cs.push_back(ip.I.hi);
    auto& ct = cuts[static_cast<std::size_t>(ip.t)];
    ct.push_back(ip.J.lo);
    ct.push_back(ip.J.hi);
  }

  const double scale = std::pow(policy.divisor, k);
  int d = std::isfinite(scale) && scale < static_cast<double>(c) + 1 ? static_cast<int>(std::floor(c / scale)) : 0;
  d = std::max(d, std::max(1, policy.min_block));
  if (d > c)
    throw refinement_exhausted("block length " + std::to_string(c) + " is below the minimum chunk " +
                               std::to_string(d));

  RefineResult r;
  r.chunk = d;
  r.q_before = report->q;
  EquitablePartition out;
  out.n = p.n;
  std::vector<int> rest = p.exceptional.members();
  for (auto& cs : cuts) {
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
      int lo = cs[i];
      while (lo + d <= cs[i + 1]) {
        out.blocks.push_back({lo, lo + d});
        lo += d;
      }
      for (int x = lo; x < cs[i + 1]; ++x) rest.push_back(x);
    }
  }
  out.exceptional = IndexSet(std::move(rest));
  r.q_after = index_q(sigma, out);
  if (r.q_after < r.q_before - kGapTol) throw contract_error("refine_step: index decreased under refinement");
  r.increment_met = r.q_after >= r.q_before + std::pow(eps, 5) / 2 - kGapTol;
  r.partition = std::move(out);
  return r;
}

std::int64_t default_max_iterations(double eps) {
  const double it = std::ceil(2.0 / std::pow(eps, 5));
  return it > 9e18 ? INT64_MAX : static_cast<std::int64_t>(it);
}

RegularRun regular_partition(const Permutation& sigma, double eps, int m, const RefinePolicy& policy) {
  if (!(eps > 0 && eps <= 0.25)) throw parameter_error("regular_partition needs 0 < eps <= 1/4");
  if (m < 1 || m > sigma.size()) throw parameter_error("regular_partition needs 1 <= m <= n");
  const std::int64_t max_it = policy.max_iterations > 0 ? policy.max_iterations : default_max_iterations(eps);
  RegularRun run;
  run.partition = equitable_partition(sigma, m);
  for (std::int64_t it = 0;; ++it) {
    run.report = is_regular_partition(sigma, run.partition, eps, policy.mode);
    run.trace.push_back({run.report.q, run.report.k, run.report.exceptional_size});
    if (run.report.regular) {
      run.status = RunStatus::success;
      return run;
    }
    run.status = RunStatus::exhausted;
    if (it >= max_it) {
      run.reason = "iteration limit reached";
      return run;
    }
    if (run.report.exceptional_size > eps * sigma.size()) {
      run.reason = "exceptional set exceeds eps*n";
      return run;
    }
    RefineResult step;
    try {
      step = refine_step(sigma, run.partition, eps, policy, &run.report);
    } catch (const refinement_exhausted& e) {
      run.reason = e.what();
      return run;
    }
    if (step.partition.k() > policy.max_parts) {
      run.reason = "part limit reached (" + std::to_string(step.partition.k()) + " > " +
                   std::to_string(policy.max_parts) + ")";
      return run;
    }
    run.partition = std::move(step.partition);
  }
}

}  // namespace permreg
