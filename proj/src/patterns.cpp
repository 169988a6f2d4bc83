#include "permreg/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "permreg/density.hpp"
#include "permreg/error.hpp"
#include "permreg/parallel.hpp"

namespace permreg {

namespace {

class Fenwick {
 public:
  explicit Fenwick(int n) : tree_(static_cast<std::size_t>(n) + 1, 0) {}
  void add(int i) {
    for (++i; i < static_cast<int>(tree_.size()); i += i & -i) ++tree_[static_cast<std::size_t>(i)];
  }
  // number of added indices < i
  std::uint64_t prefix(int i) const {
    std::uint64_t s = 0;
    for (; i > 0; i -= i & -i) s += tree_[static_cast<std::size_t>(i)];
    return s;
  }

 private:
  std::vector<std::uint64_t> tree_;
};

std::uint64_t choose2(std::uint64_t x) { return x < 2 ? 0 : x * (x - 1) / 2; }

// For each slot j < m, the earlier slots holding the nearest smaller and
// nearest larger pattern values (-1 when absent).
struct SlotBounds {
  std::vector<int> below;
  std::vector<int> above;
};

SlotBounds slot_bounds(const Pattern& tau) {
  const int m = tau.m();
  SlotBounds b{std::vector<int>(static_cast<std::size_t>(m), -1), std::vector<int>(static_cast<std::size_t>(m), -1)};
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < j; ++i) {
      if (tau(i) < tau(j) && (b.below[static_cast<std::size_t>(j)] < 0 || tau(i) > tau(b.below[static_cast<std::size_t>(j)])))
        b.below[static_cast<std::size_t>(j)] = i;
      if (tau(i) > tau(j) && (b.above[static_cast<std::size_t>(j)] < 0 || tau(i) < tau(b.above[static_cast<std::size_t>(j)])))
        b.above[static_cast<std::size_t>(j)] = i;
    }
  }
  return b;
}

std::uint64_t count_small(const Permutation& sigma, const Pattern& tau) {
  const int n = sigma.size();
  const int m = tau.m();
  if (m == 1) return static_cast<std::uint64_t>(n);
  // ls = smaller before, ll = larger before, rs = smaller after, rl = larger after
  std::vector<std::uint64_t> ls(static_cast<std::size_t>(n));
  Fenwick fw(n);
  for (int j = 0; j < n; ++j) {
    ls[static_cast<std::size_t>(j)] = fw.prefix(sigma(j));
    fw.add(sigma(j));
  }
  std::uint64_t inversions = 0;
  for (int j = 0; j < n; ++j) inversions += static_cast<std::uint64_t>(j) - ls[static_cast<std::size_t>(j)];
  if (m == 2) return tau(0) == 0 ? choose2(static_cast<std::uint64_t>(n)) - inversions : inversions;

  std::uint64_t s012 = 0, s210 = 0, c_rl = 0, c_ls = 0, ls_rs = 0, ll_rl = 0;
  for (int j = 0; j < n; ++j) {
    const std::uint64_t l_s = ls[static_cast<std::size_t>(j)];
    const std::uint64_t l_l = static_cast<std::uint64_t>(j) - l_s;
    const std::uint64_t r_s = static_cast<std::uint64_t>(sigma(j)) - l_s;
    const std::uint64_t r_l = static_cast<std::uint64_t>(n - 1 - sigma(j)) - l_l;
    s012 += l_s * r_l;
    s210 += l_l * r_s;
    c_rl += choose2(r_l);
    c_ls += choose2(l_s);
    ls_rs += l_s * r_s;
    ll_rl += l_l * r_l;
  }
  const std::uint64_t s021 = c_rl - s012;
  const std::uint64_t s102 = c_ls - s012;
  const int code = tau(0) * 100 + tau(1) * 10 + tau(2);
  switch (code) {
    case 12: return s012;
    case 210: return s210;
    case 21: return s021;
    case 102: return s102;
    case 120: return ls_rs - s021;
    case 201: return ll_rl - s102;
  }
  throw contract_error("unreachable pattern code");
}

constexpr double exact_work_limit = 2e9;

std::uint64_t count_enumerate(const Permutation& sigma, const Pattern& tau) {
  const int n = sigma.size();
  const int m = tau.m();
  if (static_cast<double>(binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(m - 1))) > exact_work_limit)
    throw resource_error("exact count for n=" + std::to_string(n) + ", m=" + std::to_string(m) + " exceeds the work guard",
                         0);
  const DominanceTable table(sigma);
  const SlotBounds sb = slot_bounds(tau);
  std::vector<int> pos(static_cast<std::size_t>(m));
  std::vector<int> val(static_cast<std::size_t>(m));
  auto range = [&](int j) {
    const int b = sb.below[static_cast<std::size_t>(j)];
    const int a = sb.above[static_cast<std::size_t>(j)];
    return std::pair<int, int>{b < 0 ? -1 : val[static_cast<std::size_t>(b)], a < 0 ? n : val[static_cast<std::size_t>(a)]};
  };
  std::uint64_t total = 0;
  auto rec = [&](auto&& self, int j, int from) -> void {
    const auto [lo, hi] = range(j);
    if (j == m - 1) {
      if (hi - lo > 1) total += static_cast<std::uint64_t>(table.rect(from, n, lo + 1, hi));
      return;
    }
    const int last = n - (m - j);
    for (int x = from; x <= last; ++x) {
      const int v = sigma(x);
      if (v <= lo || v >= hi) continue;
      pos[static_cast<std::size_t>(j)] = x;
      val[static_cast<std::size_t>(j)] = v;
      self(self, j + 1, x + 1);
    }
  };
  rec(rec, 0, 0);
  return total;
}

bool order_isomorphic(const Permutation& sigma, const std::vector<int>& idx, const Pattern& tau) {
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b)
      if ((sigma(idx[a]) < sigma(idx[b])) != (tau(static_cast<int>(a)) < tau(static_cast<int>(b)))) return false;
  return true;
}

}  // namespace

Pattern parse_pattern(std::string_view text) { return Pattern(parse_permutation(text)); }

std::vector<Pattern> all_patterns(int m) {
  if (m < 1) throw parameter_error("all_patterns: m must be >= 1");
  std::vector<int> v(static_cast<std::size_t>(m));
  std::iota(v.begin(), v.end(), 0);
  std::vector<Pattern> out;
  do out.emplace_back(Permutation(v));
  while (std::next_permutation(v.begin(), v.end()));
  return out;
}

std::uint64_t count_pattern(const Permutation& sigma, const Pattern& tau) {
  const int m = tau.m();
  if (m > max_exact_pattern)
    throw parameter_error("exact counting supports m <= 6; use the estimator for m=" + std::to_string(m));
  if (m > sigma.size()) return 0;
  return m <= 3 ? count_small(sigma, tau) : count_enumerate(sigma, tau);
}

std::uint64_t count_pattern(const Permutation& sigma, const Pattern& tau, const IndexSet& restriction) {
  check_index_set(restriction, sigma.size());
  if (tau.m() > max_exact_pattern)
    throw parameter_error("exact counting supports m <= 6; use the estimator for m=" + std::to_string(tau.m()));
  if (restriction.size() < tau.m()) return 0;
  return count_pattern(restrict_to(sigma, restriction), tau);
}

std::uint64_t count_pattern_naive(const Permutation& sigma, const Pattern& tau) {
  const int n = sigma.size();
  const int m = tau.m();
  if (n > 40) throw parameter_error("naive counter is limited to n <= 40");
  if (m > n) return 0;
  std::vector<int> idx(static_cast<std::size_t>(m));
  std::uint64_t total = 0;
  auto rec = [&](auto&& self, int j, int from) -> void {
    if (j == m) {
      if (order_isomorphic(sigma, idx, tau)) ++total;
      return;
    }
    for (int x = from; x < n; ++x) {
      idx[static_cast<std::size_t>(j)] = x;
      self(self, j + 1, x + 1);
    }
  };
  rec(rec, 0, 0);
  return total;
}

std::optional<std::vector<int>> find_pattern(const Permutation& sigma, const Pattern& tau) {
  const int n = sigma.size();
  const int m = tau.m();
  if (m > n) return std::nullopt;
  const SlotBounds sb = slot_bounds(tau);
  std::vector<int> pos(static_cast<std::size_t>(m));
  std::vector<int> val(static_cast<std::size_t>(m));
  auto rec = [&](auto&& self, int j, int from) -> bool {
    if (j == m) return true;
    const int b = sb.below[static_cast<std::size_t>(j)];
    const int a = sb.above[static_cast<std::size_t>(j)];
    const int lo = b < 0 ? -1 : val[static_cast<std::size_t>(b)];
    const int hi = a < 0 ? n : val[static_cast<std::size_t>(a)];
    for (int x = from; x <= n - (m - j); ++x) {
      const int v = sigma(x);
      if (v <= lo || v >= hi) continue;
      pos[static_cast<std::size_t>(j)] = x;
      val[static_cast<std::size_t>(j)] = v;
      if (self(self, j + 1, x + 1)) return true;
    }
    return false;
  };
  if (!rec(rec, 0, 0)) return std::nullopt;
  return pos;
}

bool contains_pattern(const Permutation& sigma, const Pattern& tau) { return find_pattern(sigma, tau).has_value(); }

UniversalityResult universality_check(const Permutation& sigma, int m) {
  if (m < 1 || m > max_exact_pattern) throw parameter_error("universality_check needs 1 <= m <= 6");
  UniversalityResult r;
  for (const auto& tau : all_patterns(m)) {
    if (!contains_pattern(sigma, tau)) {
      r.universal = false;
      r.missing = tau;
      return r;
    }
  }
  return r;
}

std::vector<int> longest_monotone(const std::vector<int>& seq, bool increasing) {
  // patience sorting; tails[l] = index ending the best run of length l+1
  std::vector<int> tails;
  std::vector<int> prev(seq.size(), -1);
  auto key = [&](int i) { return increasing ? seq[static_cast<std::size_t>(i)] : -seq[static_cast<std::size_t>(i)]; };
  for (int i = 0; i < static_cast<int>(seq.size()); ++i) {
    auto it = std::lower_bound(tails.begin(), tails.end(), key(i), [&](int t, int v) { return key(t) < v; });
    if (it != tails.begin()) prev[static_cast<std::size_t>(i)] = *(it - 1);
    if (it == tails.end())
      tails.push_back(i);
    else
      *it = i;
  }
  std::vector<int> out;
  for (int i = tails.empty() ? -1 : tails.back(); i >= 0; i = prev[static_cast<std::size_t>(i)]) out.push_back(i);
  std::reverse(out.begin(), out.end());
  return out;
}

ScatterResult scatter_property(const Permutation& sigma, double delta, double eps, double gamma) {
  if (!(delta > 0 && eps > 0 && gamma > 0)) throw parameter_error("scatter_property needs positive delta, eps, gamma");
  const int n = sigma.size();
  ScatterResult r;
  r.exact = n <= 512;
  // a longer J only adds points, so |J| = floor(eps n) suffices
  const int jl = std::min(n, static_cast<int>(std::floor(eps * n + 1e-9)));
  const int il = std::max(1, static_cast<int>(std::ceil(delta * n - 1e-9)));
  if (jl < 1 || il > n) return r;
  const int si = r.exact ? 1 : std::max(1, static_cast<int>(std::ceil(delta * n / 4)));
  const int sj = r.exact ? 1 : std::max(1, static_cast<int>(std::ceil(eps * n / 4)));
  std::vector<int> ends;
  for (int x = 0; x < n; x += si) ends.push_back(x);
  ends.push_back(n);
  std::vector<int> starts;
  for (int y = 0; y + jl <= n; y += sj) starts.push_back(y);
  if (starts.back() != n - jl) starts.push_back(n - jl);

  std::vector<int> pre(static_cast<std::size_t>(n) + 1);
  r.ratio = -1.0;
  for (int y : starts) {
    for (int x = 0; x < n; ++x)
      pre[static_cast<std::size_t>(x) + 1] = pre[static_cast<std::size_t>(x)] + (sigma(x) >= y && sigma(x) < y + jl ? 1 : 0);
    for (std::size_t a = 0; a < ends.size(); ++a) {
      for (std::size_t b = a + 1; b < ends.size(); ++b) {
        const int len = ends[b] - ends[a];
        if (len < il) continue;
        const double ratio = static_cast<double>(pre[static_cast<std::size_t>(ends[b])] - pre[static_cast<std::size_t>(ends[a])]) / len;
        if (ratio > r.ratio + 1e-15) {
          r.ratio = ratio;
          r.I = {ends[a], ends[b]};
          r.J = {y, y + jl};
        }
      }
    }
  }
  r.holds = !(r.ratio > gamma + 1e-12);
  return r;
}

BlockFamily concentration_sweep(const Cdf& f, double eps) {
  if (!(eps > 0)) throw parameter_error("concentration sweep needs eps > 0");
  BlockFamily out;
  double start = 0.0;
  while (start < 1.0) {
    const double target = f.value(start) + 5 * eps;
    double r = target > 1.0 + 1e-12 ? 1.0 : std::min(1.0, f.first_reaching(target - 1e-12));
    r = std::max(r, start);
    out.accumulation.push_back({start, r});
    if (r >= 1.0) break;
    out.gaps.push_back({r, std::min(1.0, r + 4 * eps)});
    start = r + 4 * eps;
  }

  // shrink each accumulation interval by eps (not at 0 or 1); what remains
  // is removed, and the pieces left over that hold a gap form the family
  std::vector<std::pair<double, double>> removed;
  for (auto [lo, hi] : out.accumulation) {
    if (!(hi > lo)) continue;
    const double x = lo <= 0.0 ? 0.0 : std::min(lo + eps, 1.0);
    const double y = hi >= 1.0 ? 1.0 : std::max(hi - eps, 0.0);
    if (x <= y + 1e-12) removed.push_back({x, std::max(x, y)});
  }
  struct Piece {
    double lo, hi;
    bool lo_closed;
  };
  std::vector<Piece> pieces;
  double cursor = 0.0;
  bool closed = true;
  for (auto [x, y] : removed) {
    if (x > cursor) pieces.push_back({cursor, x, closed});
    cursor = y;
    closed = false;
  }
  if (cursor < 1.0) pieces.push_back({cursor, 1.0, closed});
  for (const auto& p : pieces) {
    bool holds_gap = false;
    for (auto [g0, g1] : out.gaps) {
      const double mid = 0.5 * (g0 + g1);
      if (mid > p.lo && mid < p.hi) holds_gap = true;
    }
    if (!holds_gap) continue;
    out.intervals.push_back({p.lo, p.hi});
    out.covered_mass += f.value(p.hi) - (p.lo_closed ? f.value(p.lo) : f.right(p.lo));
  }
  return out;
}

ConcentrationFamily concentration_intervals(const Permutation& sigma, const UniformPartition& u, const Pattern& tau,
                                            std::optional<std::uint64_t> count) {
  const int m = tau.m();
  const double eps = u.epsilon;
  if (eps > 1.0 / (2 * m) + 1e-12) throw parameter_error("concentration_intervals needs eps <= 1/(2m)");
  ConcentrationFamily out;
  out.epsilon = eps;
  out.m = m;
  const auto k = u.family.size();
  out.blocks.resize(k);
  parallel_for(k, [&](std::size_t s) { out.blocks[s] = concentration_sweep(u.family[s], eps); });

  if (!count && m <= max_exact_pattern) {
    try {
      count = count_pattern(sigma, tau);
    } catch (const resource_error&) {
    }
  }
  out.pattern_count = count;
  out.threshold = k == 0 ? 0.0 : std::pow(eps * sigma.size() / (2.0 * static_cast<double>(k) * m), m);
  out.certified = count && static_cast<double>(*count) < out.threshold;
  out.bounds_hold = true;
  for (const auto& b : out.blocks) {
    if (static_cast<int>(b.intervals.size()) > m - 1) out.bounds_hold = false;
    for (auto [lo, hi] : b.intervals)
      if (hi - lo > 6 * eps + 1e-9) out.bounds_hold = false;
    if (b.covered_mass < 1 - 7 * m * eps - 1e-9) out.bounds_hold = false;
  }
  return out;
}

namespace {

std::vector<int> slice(const Permutation& sigma, Interval block, std::pair<double, double> iv) {
  std::vector<int> out;
  const double n = sigma.size();
  for (int x = block.lo; x < block.hi; ++x) {
    // family pieces are open on the left except at 0
    const double a = sigma(x) / n;
    if ((a > iv.first || (iv.first == 0.0 && a == 0.0)) && a < iv.second) out.push_back(x);
  }
  return out;
}

}  // namespace

PseudomonotoneResult pseudomonotone_subset(const Permutation& sigma, const Pattern& tau, double delta) {
  const int m = tau.m();
  if (m < 2) throw parameter_error("pseudomonotone_subset needs m >= 2");
  if (!(delta > 0 && delta <= 1)) throw parameter_error("pseudomonotone_subset needs 0 < delta <= 1");
  PseudomonotoneResult r;
  r.eta = delta * delta / std::pow(m - 1, 4) / 100.0;
  r.epsilon = r.eta / (14.0 * m);
  const UniformPartition u = uniform_partition(sigma, r.epsilon, m);
  const auto& blocks = u.partition.blocks;
  r.k = static_cast<int>(blocks.size());

  // heaviest family interval per block
  std::vector<std::optional<std::pair<double, double>>> best(blocks.size());
  std::vector<double> best_mass(blocks.size(), -1.0);
  parallel_for(blocks.size(), [&](std::size_t s) {
    const BlockFamily fam = concentration_sweep(u.family[s], r.epsilon);
    for (auto iv : fam.intervals) {
      const double mass = u.family[s].value(iv.second) - u.family[s].value(iv.first);
      if (mass > best_mass[s]) {
        best_mass[s] = mass;
        best[s] = iv;
      }
    }
  });

  // greedy pairwise-disjoint selection in block order
  std::map<double, double> taken;
  std::vector<int> chosen;
  for (std::size_t s = 0; s < blocks.size(); ++s) {
    if (!best[s]) continue;
    const auto [lo, hi] = *best[s];
    auto it = taken.lower_bound(lo);
    if (it != taken.end() && it->first < hi) continue;
    if (it != taken.begin() && std::prev(it)->second > lo) continue;
    taken[lo] = hi;
    chosen.push_back(static_cast<int>(s));
  }
  r.selected_blocks = static_cast<int>(chosen.size());

  std::vector<int> members;
  if (chosen.empty()) {
    r.degenerate = true;
    std::size_t pick = 0;
    std::size_t pick_size = 0;
    for (std::size_t s = 0; s < blocks.size(); ++s) {
      if (!best[s]) continue;
      const auto sl = slice(sigma, blocks[s], *best[s]);
      if (sl.size() > pick_size) {
        pick = s;
        pick_size = sl.size();
      }
    }
    if (pick_size > 0) members = slice(sigma, blocks[pick], *best[pick]);
  } else {
    std::vector<double> starts;
    for (int s : chosen) starts.push_back(best[static_cast<std::size_t>(s)]->first);
    std::vector<double> sorted = starts;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> ranks;
    for (double x : starts)
      ranks.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin()));
    const auto inc = longest_monotone(ranks, true);
    const auto dec = longest_monotone(ranks, false);
    r.increasing = inc.size() >= dec.size();
    for (int i : r.increasing ? inc : dec) {
      const auto s = static_cast<std::size_t>(chosen[static_cast<std::size_t>(i)]);
      const auto sl = slice(sigma, blocks[s], *best[s]);
      members.insert(members.end(), sl.begin(), sl.end());
    }
  }
  r.X = IndexSet(std::move(members));
  const auto size = static_cast<std::uint64_t>(r.X.size());
  if (size >= 2) {
    const std::uint64_t asc = count_pattern(sigma, parse_pattern("0 1"), r.X);
    const std::uint64_t all = choose2(size);
    r.delta_prime = static_cast<double>(std::min(asc, all - asc)) / static_cast<double>(all);
  }
  return r;
}

bool DeletionSet::contains(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(pairs.begin(), pairs.end(), std::pair<int, int>{i, j});
}

namespace {

class PairMatrix {
 public:
  explicit PairMatrix(int n) : n_(n) {
    if (n > (1 << 14))
      throw resource_error("pair matrix for n=" + std::to_string(n) + " exceeds the size cap",
                           static_cast<std::size_t>(n) * static_cast<std::size_t>(n) / 8);
    bits_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n) / 64 + 1, 0);
  }
  void set(int i, int j) {
    if (i > j) std::swap(i, j);
    const std::size_t b = idx(i, j);
    bits_[b >> 6] |= std::uint64_t{1} << (b & 63);
  }
  bool get(int i, int j) const {
    if (i > j) std::swap(i, j);
    const std::size_t b = idx(i, j);
    return (bits_[b >> 6] >> (b & 63)) & 1;
  }
  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if (get(i, j)) out.push_back({i, j});
    return out;
  }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j); }
  int n_;
  std::vector<std::uint64_t> bits_;
};

}  // namespace

DestroyResult destroy_pattern(const Permutation& sigma, const Pattern& tau, double eps) {
  const int m = tau.m();
  const int n = sigma.size();
  if (!(eps > 0 && eps < 1.0 / (2 * m))) throw parameter_error("destroy_pattern needs 0 < eps < 1/(2m)");
  const UniformPartition u = uniform_partition(sigma, eps, m);
  const auto& blocks = u.partition.blocks;
  DestroyResult r;
  r.epsilon = eps;
  r.k = u.partition.k();
  r.block_length = u.partition.block_length();
  r.exceptional_size = u.partition.exceptional.size();

  // points whose image lands in a surviving family interval of their block
  std::vector<char> concentrated(static_cast<std::size_t>(n), 0);
  for (std::size_t s = 0; s < blocks.size(); ++s) {
    const BlockFamily fam = concentration_sweep(u.family[s], eps);
    for (auto iv : fam.intervals) {
      const auto sl = slice(sigma, blocks[s], iv);
      if (static_cast<double>(sl.size()) < eps * blocks[s].length()) continue;
      for (int x : sl) concentrated[static_cast<std::size_t>(x)] = 1;
    }
  }

  PairMatrix del(n);
  std::vector<int> loose;
  for (int x = 0; x < n; ++x)
    if (!concentrated[static_cast<std::size_t>(x)]) loose.push_back(x);
  for (int x : loose)
    for (int y = 0; y < n; ++y)
      if (y != x) del.set(x, y);
  const auto b = static_cast<std::uint64_t>(loose.size());
  r.rule_a = b * static_cast<std::uint64_t>(n - 1) - choose2(b);

  for (const auto& blk : blocks)
    for (int x = blk.lo; x < blk.hi; ++x)
      for (int y = x + 1; y < blk.hi; ++y) del.set(x, y);
  r.rule_b = static_cast<std::uint64_t>(blocks.size()) * choose2(static_cast<std::uint64_t>(r.block_length));

  const Permutation inv = sigma.inverse();
  const int reach = static_cast<int>(std::floor(12 * eps * n + 1e-9));
  for (int v = 0; v < n; ++v)
    for (int w = v + 1; w <= std::min(n - 1, v + reach); ++w) {
      del.set(inv(v), inv(w));
      ++r.rule_c;
    }

  r.deleted.n = n;
  r.deleted.pairs = del.pairs();
  return r;
}

DestroyCheck verify_destroyed(const Permutation& sigma, const Pattern& tau, const DeletionSet& s) {
  const int n = sigma.size();
  const int m = tau.m();
  if (m > max_exact_pattern) throw parameter_error("verify_destroyed supports m <= 6");
  PairMatrix del(n);
  for (auto [i, j] : s.pairs) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw parameter_error("deletion pair out of range");
    del.set(i, j);
  }
  DestroyCheck out;
  if (m > n) return out;
  const SlotBounds sb = slot_bounds(tau);
  std::vector<int> pos(static_cast<std::size_t>(m));
  std::vector<int> val(static_cast<std::size_t>(m));
  auto rec = [&](auto&& self, int j, int from) -> bool {
    if (j == m) return true;
    const int bl = sb.below[static_cast<std::size_t>(j)];
    const int ab = sb.above[static_cast<std::size_t>(j)];
    const int lo = bl < 0 ? -1 : val[static_cast<std::size_t>(bl)];
    const int hi = ab < 0 ? n : val[static_cast<std::size_t>(ab)];
    for (int x = from; x <= n - (m - j); ++x) {
      const int v = sigma(x);
      if (v <= lo || v >= hi) continue;
      // a partial set that already holds a deleted pair is destroyed
      bool hit = false;
      for (int i = 0; i < j && !hit; ++i) hit = del.get(pos[static_cast<std::size_t>(i)], x);
      if (hit) continue;
      pos[static_cast<std::size_t>(j)] = x;
      val[static_cast<std::size_t>(j)] = v;
      if (self(self, j + 1, x + 1)) return true;
    }
    return false;
  };
  if (rec(rec, 0, 0)) {
    out.destroyed = false;
    out.witness = pos;
  }
  return out;
}

}  // namespace permreg
