#include "permreg/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "permreg/error.hpp"

namespace permreg {

std::int64_t pair_count(const DominanceTable& table, Interval s, Interval t) {
  check_interval(s, table.size());
  check_interval(t, table.size());
  return table.pair_count(s, t);
}

namespace {

// #{t in T : t > v}
std::int64_t above(int v, Interval t) { return std::max(0, t.hi - std::max(t.lo, v + 1)); }

void check_nonempty(int a, int b) {
  if (a == 0 || b == 0) throw undefined_density("density of a pair with an empty side");
}

}  // namespace

std::int64_t pair_count(const Permutation& sigma, Interval s, Interval t) {
  check_interval(s, sigma.size());
  check_interval(t, sigma.size());
  std::int64_t total = 0;
  for (int x = s.lo; x < s.hi; ++x) total += above(sigma(x), t);
  return total;
}

std::int64_t pair_count(const Permutation& sigma, const IndexSet& s, Interval t) {
  check_index_set(s, sigma.size());
  check_interval(t, sigma.size());
  std::int64_t total = 0;
  for (int x : s.members()) total += above(sigma(x), t);
  return total;
}

double density(const DominanceTable& table, Interval s, Interval t) {
  check_nonempty(s.length(), t.length());
  return static_cast<double>(pair_count(table, s, t)) / (static_cast<double>(s.length()) * t.length());
}

double density(const Permutation& sigma, Interval s, Interval t) {
  check_nonempty(s.length(), t.length());
  return static_cast<double>(pair_count(sigma, s, t)) / (static_cast<double>(s.length()) * t.length());
}

double density(const Permutation& sigma, const IndexSet& s, Interval t) {
  check_nonempty(s.size(), t.length());
  return static_cast<double>(pair_count(sigma, s, t)) / (static_cast<double>(s.size()) * t.length());
}

Cdf cdf_L(const Permutation& sigma, const IndexSet& s) {
  check_index_set(s, sigma.size());
  if (s.empty()) throw parameter_error("cdf of an empty set");
  std::vector<int> images;
  images.reserve(static_cast<std::size_t>(s.size()));
  for (int x : s.members()) images.push_back(sigma(x));
  std::sort(images.begin(), images.end());
  const double n = sigma.size();
  const double len = s.size();
  std::vector<double> pos(images.size());
  std::vector<double> vals(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    pos[i] = images[i] / n;
    vals[i] = static_cast<double>(i + 1) / len;
  }
  return Cdf::step(pos, vals, 1.0);
}

Cdf cdf_L(const Permutation& sigma, Interval s) {
  check_interval(s, sigma.size());
  return cdf_L(sigma, IndexSet::of(s));
}

namespace {

void require_quadratic(const Cdf& f) {
  if (f.degree() > 2) throw parameter_error("exact nearness checks need cells of degree <= 2");
}

// Supremum of h over the real line, where h is piecewise of degree <= 2 with
// breaks only at the given critical points. h(x, right) gives the value at x
// (right = false) or its right limit (right = true).
template <class H>
std::pair<double, double> sup_piecewise(std::vector<double> crit, H h) {
  std::sort(crit.begin(), crit.end());
  crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
  double best = -std::numeric_limits<double>::infinity();
  double arg = crit.empty() ? 0.0 : crit.front();
  auto take = [&](double x, double v) {
    if (v > best) {
      best = v;
      arg = x;
    }
  };
  for (std::size_t i = 0; i < crit.size(); ++i) {
    const double c = crit[i];
    take(c, h(c, false));
    take(c, h(c, true));
    if (i + 1 == crit.size()) break;
    const double lo = c;
    const double hi = crit[i + 1];
    const double w = hi - lo;
    if (!(w > 1e-15)) continue;
    const double q = w / 4;
    const double mid = lo + 2 * q;
    const double y1 = h(lo + q, false);
    const double y2 = h(mid, false);
    const double y3 = h(lo + 3 * q, false);
    take(lo + q, y1);
    take(mid, y2);
    take(lo + 3 * q, y3);
    const double a = (y1 - 2 * y2 + y3) / (2 * q * q);
    const double b = (y3 - y1) / (2 * q);
    if (a < 0) {
      const double xv = mid - b / (2 * a);
      if (xv > lo && xv < hi) take(xv, h(xv, false));
    }
  }
  return {best, arg};
}

}  // namespace

NearResult eps_near(const Cdf& f, const Cdf& g, double eps) {
  if (eps < 0) throw parameter_error("eps_near: eps must be nonnegative");
  require_quadratic(f);
  require_quadratic(g);
  std::vector<double> crit;
  for (double x : f.function().knots()) crit.push_back(x);
  for (double x : g.function().knots()) {
    crit.push_back(x - eps);
    crit.push_back(x + eps);
  }
  auto h = [&](double a, bool right) {
    const double fa = right ? f.right(a) : f.value(a);
    const double up = right ? g.right(a + eps) : g.value(a + eps);
    const double down = right ? g.right(a - eps) : g.value(a - eps);
    return std::max(fa - up - eps, down - eps - fa);
  };
  auto [gap, alpha] = sup_piecewise(std::move(crit), h);
  NearResult r;
  r.gap = gap;
  r.alpha = alpha;
  r.near = gap <= near_tolerance;
  return r;
}

double max_increment(const Cdf& f, double eps) {
  if (!(eps > 0)) throw parameter_error("lipschitz modulus needs eps > 0");
  require_quadratic(f);
  std::vector<double> crit;
  for (double x : f.function().knots()) {
    crit.push_back(x);
    crit.push_back(x - eps);
  }
  auto h = [&](double x, bool right) {
    return right ? f.right(x + eps) - f.right(x) : f.value(x + eps) - f.value(x);
  };
  return std::max(0.0, sup_piecewise(std::move(crit), h).first);
}

double lipschitz_modulus(const Cdf& f, double eps) { return max_increment(f, eps) / eps; }

Cdf convolve_smooth(const Cdf& f, double delta) {
  if (!(delta > 0)) throw parameter_error("convolve_smooth: delta must be positive");
  const auto& x = f.function().knots();
  const auto& cells = f.function().cells();
  const double a = x.back();
  const std::size_t cn = cells.size();

  // antiderivative per cell and F at each knot; index cn is the tail (f = 1)
  std::vector<Poly> anti(cn + 1);
  std::vector<double> base(cn + 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < cn; ++i) {
    anti[i] = cells[i].antiderivative();
    base[i] = acc;
    acc += anti[i](x[i + 1] - x[i]);
  }
  anti[cn] = Poly::linear(0.0, 1.0);
  base[cn] = acc;

  // F(t) near t as a polynomial in local variable u = t - origin
  auto piece = [&](double t, double origin) {
    if (t < 0) return Poly::constant(0.0);
    std::size_t i = cn;
    if (t < a) i = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), t) - x.begin()) - 1;
    const double xi = i == cn ? a : x[i];
    Poly p = anti[i].shifted(origin - xi);
    p.c[0] += base[i];
    return p;
  };

  std::vector<double> knots(x.begin(), x.end());
  for (double v : x) knots.push_back(v + delta);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  std::vector<Poly> out;
  out.reserve(knots.size() - 1);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double u0 = knots[i];
    const double mid = 0.5 * (u0 + knots[i + 1]);
    Poly p = piece(mid, u0) - piece(mid - delta, u0 - delta);
    out.push_back((1.0 / delta) * p);
  }
  return Cdf(Piecewise(std::move(knots), std::move(out), 0.0, 1.0));
}

}  // namespace permreg
