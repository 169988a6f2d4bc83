#include "permreg/quasirand.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "permreg/density.hpp"
#include "permreg/error.hpp"
#include "permreg/uniformity.hpp"

namespace permreg {

double discrepancy_star(const Permutation& sigma) {
  const int n = sigma.size();
  // row[y] = N(x, y) for the current x
  std::vector<int> row(static_cast<std::size_t>(n) + 1, 0);
  double best = 0.0;
  for (int x = 0; x <= n; ++x) {
    if (x > 0)
      for (int y = sigma(x - 1) + 1; y <= n; ++y) ++row[static_cast<std::size_t>(y)];
    for (int y = 0; y <= n; ++y)
      best = std::max(best, std::abs(row[static_cast<std::size_t>(y)] - static_cast<double>(x) * y / n));
  }
  return best;
}

DiscrepancyBounds discrepancy(const Permutation& sigma, DiscrepancyMode mode) {
  const int n = sigma.size();
  DiscrepancyBounds d;
  const double star = discrepancy_star(sigma);
  if (mode == DiscrepancyMode::bounded) {
    d.lower = star;
    d.upper = 4 * star;
    return d;
  }
  if (n > max_exact_discrepancy)
    throw resource_error("exact discrepancy is limited to n <= " + std::to_string(max_exact_discrepancy), 0);
  std::vector<int> h(static_cast<std::size_t>(n) + 1);
  double best = 0.0;
  for (int x1 = 0; x1 < n; ++x1) {
    std::fill(h.begin(), h.end(), 0);
    for (int x2 = x1 + 1; x2 <= n; ++x2) {
      for (int y = sigma(x2 - 1) + 1; y <= n; ++y) ++h[static_cast<std::size_t>(y)];
      const double slope = static_cast<double>(x2 - x1) / n;
      double lo = 0.0, hi = 0.0;
      for (int y = 1; y <= n; ++y) {
        const double g = h[static_cast<std::size_t>(y)] - slope * y;
        lo = std::min(lo, g);
        hi = std::max(hi, g);
      }
      best = std::max(best, hi - lo);
    }
  }
  d.lower = d.upper = best;
  d.exact = true;
  return d;
}

namespace {

Interval meet(Interval a, Interval b) {
  Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  if (r.hi < r.lo) r.hi = r.lo;
  return r;
}

}  // namespace

double separability_value(const Permutation& sigma, Interval i, Interval j, Interval k, Interval k2) {
  const int n = sigma.size();
  for (Interval iv : {i, j, k, k2}) check_interval(iv, n);
  const Interval a = meet(i, k);
  const Interval b = meet(j, k2);
  std::int64_t hits = 0;
  for (int x = a.lo; x < a.hi; ++x) hits += b.contains(sigma(x)) ? 1 : 0;
  return std::abs(static_cast<double>(hits) - static_cast<double>(a.length()) * b.length() / n);
}

double separability_stat(const Permutation& sigma, int grid) {
  if (grid < 1) throw parameter_error("separability grid step must be >= 1");
  const int n = sigma.size();
  std::vector<int> pts;
  for (int x = 0; x < n; x += grid) pts.push_back(x);
  pts.push_back(n);
  const std::size_t g = pts.size();
  // counts at grid corners: c[a][b] = N(pts[a], pts[b])
  std::vector<std::int64_t> c(g * g, 0);
  std::vector<int> row(static_cast<std::size_t>(n) + 1, 0);
  int x = 0;
  for (std::size_t a = 0; a < g; ++a) {
    for (; x < pts[a]; ++x)
      for (int y = sigma(x) + 1; y <= n; ++y) ++row[static_cast<std::size_t>(y)];
    for (std::size_t b = 0; b < g; ++b) c[a * g + b] = row[static_cast<std::size_t>(pts[b])];
  }
  double best = 0.0;
  for (std::size_t a0 = 0; a0 < g; ++a0)
    for (std::size_t a1 = a0 + 1; a1 < g; ++a1)
      for (std::size_t b0 = 0; b0 < g; ++b0)
        for (std::size_t b1 = b0 + 1; b1 < g; ++b1) {
          const auto hits = c[a1 * g + b1] - c[a0 * g + b1] - c[a1 * g + b0] + c[a0 * g + b0];
          const double area = static_cast<double>(pts[a1] - pts[a0]) * (pts[b1] - pts[b0]) / n;
          best = std::max(best, std::abs(static_cast<double>(hits) - area));
        }
  return best;
}

namespace {

IndexSet preimage_slice(const Permutation& sigma, Interval i, Interval j) {
  check_interval(i, sigma.size());
  check_interval(j, sigma.size());
  std::vector<int> x;
  for (int s = i.lo; s < i.hi; ++s)
    if (j.contains(sigma(s))) x.push_back(s);
  return IndexSet(std::move(x));
}

}  // namespace

TwoSubseq two_subseq_stat(const Permutation& sigma, Interval i, Interval j) {
  const IndexSet x = preimage_slice(sigma, i, j);
  TwoSubseq r;
  r.size = x.size();
  r.in_regime = 2 * i.length() >= sigma.size() && 2 * j.length() >= sigma.size();
  if (r.size >= 2) {
    const auto asc = static_cast<std::int64_t>(count_pattern(sigma, parse_pattern("0 1"), x));
    const auto all = static_cast<std::int64_t>(r.size) * (r.size - 1) / 2;
    r.difference = asc - (all - asc);
  }
  return r;
}

MSubseq m_subseq_stat(const Permutation& sigma, const Pattern& tau, Interval i, Interval j) {
  const int m = tau.m();
  if (m > 4) throw parameter_error("m_subseq_stat supports m <= 4");
  const IndexSet x = preimage_slice(sigma, i, j);
  MSubseq r;
  r.size = x.size();
  r.count = count_pattern(sigma, tau, x);
  double fact = 1.0;
  for (int q = 2; q <= m; ++q) fact *= q;
  r.target = static_cast<double>(binomial(static_cast<std::uint64_t>(r.size), static_cast<std::uint64_t>(m))) / fact;
  r.deviation = std::abs(static_cast<double>(r.count) - r.target);
  return r;
}

std::vector<double> eigenvalue_stat(const Permutation& sigma, Interval i, int k_max) {
  const int n = sigma.size();
  check_interval(i, n);
  if (k_max < 1 || k_max >= n) throw parameter_error("eigenvalue_stat needs 1 <= k_max < n");
  std::vector<double> out;
  for (int k = 1; k <= k_max; ++k) {
    double re = 0.0, im = 0.0;
    for (int s = i.lo; s < i.hi; ++s) {
      const auto r = (static_cast<std::int64_t>(k) * sigma(s)) % n;
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / n;
      re += std::cos(angle);
      im += std::sin(angle);
    }
    out.push_back(std::hypot(re, im));
  }
  return out;
}

double translation_stat(const Permutation& sigma, Interval i, Interval j) {
  const int n = sigma.size();
  check_interval(i, n);
  check_interval(j, n);
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (int s = i.lo; s < i.hi; ++s) in[static_cast<std::size_t>(sigma(s))] = 1;
  const long double mean = static_cast<long double>(i.length()) * j.length() / n;
  std::int64_t hits = 0;
  for (int v = j.lo; v < j.hi; ++v) hits += in[static_cast<std::size_t>(v)];
  long double total = 0.0L;
  for (int k = 0; k < n; ++k) {
    const long double d = hits - mean;
    total += d * d;
    // slide J + k to J + k + 1
    if (j.length() > 0 && j.length() < n) {
      hits -= in[static_cast<std::size_t>((j.lo + k) % n)];
      hits += in[static_cast<std::size_t>((j.hi + k) % n)];
    }
  }
  return static_cast<double>(total);
}

NearIdentity quasirandom_via_uniformity(const Permutation& sigma, double eps, int m) {
  const UniformPartition u = uniform_partition(sigma, eps, m);
  NearIdentity r;
  r.k = u.partition.k();
  r.exceptional_size = u.partition.exceptional.size();
  const Cdf id = Cdf::identity();
  r.worst_gap = -1.0;
  for (std::size_t s = 0; s < u.family.size(); ++s) {
    const NearResult nr = eps_near(u.family[s], id, 2 * eps);
    if (nr.gap > r.worst_gap) {
      r.worst_gap = nr.gap;
      r.worst_block = static_cast<int>(s);
    }
    if (!nr.near) r.near = false;
  }
  return r;
}

QuasirandomReport quasirandom_report(const Permutation& sigma, const QuasirandomOptions& options) {
  const int n = sigma.size();
  QuasirandomReport r;
  r.n = n;
  r.D_star = discrepancy_star(sigma);
  const DiscrepancyBounds d =
      discrepancy(sigma, n <= max_exact_discrepancy ? DiscrepancyMode::exact : DiscrepancyMode::bounded);
  r.D_lower = d.lower;
  r.D_upper = d.upper;
  r.D_exact = d.exact;
  r.sp_grid = options.sp_grid > 0 ? options.sp_grid : std::max(1, n / 32);
  r.sp_stat = separability_stat(sigma, r.sp_grid);
  const Interval all{0, n};
  const TwoSubseq two = two_subseq_stat(sigma, all, all);
  r.two_s_size = two.size;
  r.two_s_stat = two.difference;
  const int m = std::min(3, n);
  std::vector<int> id(static_cast<std::size_t>(m));
  for (int q = 0; q < m; ++q) id[static_cast<std::size_t>(q)] = q;
  const Pattern tau{Permutation(id)};
  r.m_s_pattern = format_permutation(tau.perm);
  r.m_s_stat = m_subseq_stat(sigma, tau, all, all).deviation;
  const Interval half{0, n / 2};
  r.translation_stat = translation_stat(sigma, half, half);
  if (n >= 2) r.eigenvalue_profile = eigenvalue_stat(sigma, half, std::min(options.eigen_k_max, n - 1));
  r.epsilon = options.epsilon;
  try {
    r.near_id = quasirandom_via_uniformity(sigma, options.epsilon);
  } catch (const refinement_exhausted& e) {
    r.near_id.near = false;
    r.near_id.failure = e.what();
  }
  return r;
}

}  // namespace permreg
