#pragma once

// Brute-force reference implementations used by the tests. None of these
// call into the library beyond the Permutation container.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "permreg/core.hpp"

namespace oracle {

inline permreg::Permutation random_perm(int n, std::mt19937_64& rng) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  std::shuffle(v.begin(), v.end(), rng);
  return permreg::Permutation(v);
}

// #{(s,t) in [slo,shi) x [tlo,thi) : sigma(s) < t}
inline std::int64_t pair_count(const permreg::Permutation& sigma, int slo, int shi, int tlo, int thi) {
  std::int64_t c = 0;
  for (int s = slo; s < shi; ++s)
    for (int t = tlo; t < thi; ++t) c += sigma(s) < t ? 1 : 0;
  return c;
}

// Occurrences of tau by enumerating all index subsets with a bitmask (n <= 24)
// or nested recursion otherwise.
inline std::uint64_t pattern_count(const permreg::Permutation& sigma, const std::vector<int>& tau) {
  const int n = sigma.size();
  const int m = static_cast<int>(tau.size());
  std::vector<int> pick;
  std::uint64_t total = 0;
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(pick.size()) == m) {
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
          const bool up = sigma(pick[static_cast<std::size_t>(a)]) < sigma(pick[static_cast<std::size_t>(b)]);
          if (up != (tau[static_cast<std::size_t>(a)] < tau[static_cast<std::size_t>(b)])) return;
        }
      ++total;
      return;
    }
    for (int x = from; x < n; ++x) {
      pick.push_back(x);
      rec(x + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return total;
}

inline std::uint64_t choose(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::uint64_t c = 1;
  for (int i = 1; i <= r; ++i) c = c * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
  return c;
}

// Left-continuous step CDF from atoms: F(t) = mass strictly below t.
struct Atoms {
  std::vector<std::pair<double, double>> atoms;

  double operator()(double t) const {
    double s = 0.0;
    for (const auto& [x, w] : atoms)
      if (x < t) s += w;
    return std::min(1.0, s);
  }
};

// Random atoms on the lattice j/64, j in [0, 64), with masses i/total.
inline Atoms lattice_atoms(std::mt19937_64& rng, int count) {
  std::uniform_int_distribution<int> pos(0, 63);
  std::uniform_int_distribution<int> weight(1, 5);
  std::vector<int> ws(static_cast<std::size_t>(count));
  std::vector<int> ps;
  while (static_cast<int>(ps.size()) < count) {
    const int p = pos(rng);
    if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
  }
  std::sort(ps.begin(), ps.end());
  int total = 0;
  for (auto& w : ws) total += (w = weight(rng));
  Atoms a;
  for (int i = 0; i < count; ++i)
    a.atoms.emplace_back(ps[static_cast<std::size_t>(i)] / 64.0,
                         static_cast<double>(ws[static_cast<std::size_t>(i)]) / total);
  return a;
}

// The sandwich g(a - e) - e <= f(a) <= g(a + e) + e checked on a grid of
// step h over [-1, 2]. Exact for lattice step CDFs when every critical point
// lies on the grid and each open cell contains a grid point.
template <class F, class G>
bool near_on_grid(const F& f, const G& g, double eps, double h) {
  for (double a = -1.0; a <= 2.0 + 1e-12; a += h) {
    const double fa = f(a);
    if (g(a - eps) - eps > fa + 1e-12) return false;
    if (fa > g(a + eps) + eps + 1e-12) return false;
  }
  return true;
}

// max over intervals I, J of ||sigma(I) ∩ J| - |I||J|/n|, O(n^4).
inline double interval_discrepancy(const permreg::Permutation& sigma) {
  const int n = sigma.size();
  double best = 0.0;
  for (int x0 = 0; x0 < n; ++x0)
    for (int x1 = x0 + 1; x1 <= n; ++x1)
      for (int y0 = 0; y0 < n; ++y0)
        for (int y1 = y0 + 1; y1 <= n; ++y1) {
          int hits = 0;
          for (int s = x0; s < x1; ++s) hits += (sigma(s) >= y0 && sigma(s) < y1) ? 1 : 0;
          best = std::max(best, std::abs(hits - static_cast<double>(x1 - x0) * (y1 - y0) / n));
        }
  return best;
}

// Quadrature of a left-continuous CDF's sliding average on a fine grid.
template <class F>
double box_average(const F& f, double t, double delta, int steps = 20000) {
  double s = 0.0;
  for (int i = 0; i < steps; ++i) s += f(t - delta + (i + 0.5) * delta / steps);
  return s / steps;
}

}  // namespace oracle
