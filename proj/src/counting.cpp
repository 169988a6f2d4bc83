#include "permreg/counting.hpp"

#include <algorithm>
#include <cmath>

#include "permreg/density.hpp"
#include "permreg/error.hpp"

namespace permreg {

namespace {

// p on the cell holding `mid`, in the local variable u = t - origin
Poly local(const Piecewise& p, double origin, double mid) {
  const auto& x = p.knots();
  if (mid <= x.front()) return Poly::constant(p.head());
  if (mid > x.back()) return Poly::constant(p.tail());
  const auto i = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), mid) - x.begin()) - 1;
  return p.cells()[i].shifted(origin - x[i]);
}

std::vector<double> merged_knots(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double jump(const Cdf& f, double x) { return f.right(x) - f.value(x); }

bool is_monotone(const Pattern& tau, bool increasing) {
  for (int i = 0; i < tau.m(); ++i)
    if (tau(i) != (increasing ? i : tau.m() - 1 - i)) return false;
  return true;
}

}  // namespace

Piecewise add(const Piecewise& a, const Piecewise& b) {
  std::vector<double> knots = merged_knots(a.knots(), b.knots());
  std::vector<Poly> cells;
  cells.reserve(knots.size() - 1);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double mid = 0.5 * (knots[i] + knots[i + 1]);
    cells.push_back(local(a, knots[i], mid) + local(b, knots[i], mid));
  }
  return Piecewise(std::move(knots), std::move(cells), a.head() + b.head(), a.tail() + b.tail());
}

Piecewise integrate_against(const Piecewise& phi, const Cdf& f) {
  std::vector<double> knots = merged_knots(phi.knots(), f.function().knots());
  std::vector<Poly> cells;
  cells.reserve(knots.size() - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double u0 = knots[i];
    const double mid = 0.5 * (u0 + knots[i + 1]);
    const double start = acc + phi.value(u0) * jump(f, u0);
    Poly cell = Poly::constant(start);
    const Poly density = local(f.function(), u0, mid).derivative();
    if (!density.is_zero()) cell = cell + (local(phi, u0, mid) * density).antiderivative();
    acc = cell(knots[i + 1] - u0);
    cells.push_back(cell);
  }
  const double tail = acc + phi.value(knots.back()) * jump(f, knots.back());
  return Piecewise(std::move(knots), std::move(cells), 0.0, tail);
}

double integrate_against_at(const Piecewise& phi, const Cdf& f, double t) {
  if (!f.is_step()) return integrate_against(phi, f).value(t);
  double total = 0.0;
  for (double x : f.function().knots()) {
    if (!(x < t)) break;
    const double j = jump(f, x);
    if (j != 0.0) total += phi.value(x) * j;
  }
  return total;
}

double simplex_integral(const SimplexSpec& spec) {
  if (spec.cdfs.empty()) throw parameter_error("simplex_integral needs r >= 1");
  Piecewise phi = spec.weight ? *spec.weight : Piecewise::constant(1.0);
  for (std::size_t i = 0; i + 1 < spec.cdfs.size(); ++i) {
    phi = integrate_against(phi, spec.cdfs[i]);
    if (phi.is_zero()) return 0.0;
  }
  return integrate_against_at(phi, spec.cdfs.back(), spec.beta);
}

namespace {

void check_form(const OmegaForm& form) {
  if (form.tau.m() < 1) throw parameter_error("omega form needs a pattern");
  if (form.block_length < 0) throw parameter_error("omega form needs a block length");
}

// blocks taken in `order`, slot j (in value order) on the j-th chosen block
double omega_chain(const OmegaForm& form, const std::vector<int>& order, double beta) {
  const int m = form.tau.m();
  const auto k = order.size();
  const Piecewise zero = Piecewise::constant(0.0);
  const Piecewise one = Piecewise::constant(1.0);
  std::vector<Piecewise> level(k, zero);
  for (std::size_t i = 0; i < k; ++i)
    level[i] = m == 1 ? one : integrate_against(one, form.family[static_cast<std::size_t>(order[i])]);
  if (m == 1) {
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      total += integrate_against_at(one, form.family[static_cast<std::size_t>(order[i])], beta);
    return total;
  }
  for (int j = 1; j < m; ++j) {
    Piecewise running = zero;
    std::vector<Piecewise> next(k, zero);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const Cdf& f = form.family[static_cast<std::size_t>(order[i])];
      if (static_cast<int>(i) >= j && !running.is_zero()) {
        if (j == m - 1)
          total += integrate_against_at(running, f, beta);
        else
          next[i] = integrate_against(running, f);
      }
      if (!level[i].is_zero()) running = add(running, level[i]);
    }
    if (j == m - 1) return total;
    level = std::move(next);
  }
  return 0.0;
}

double omega_tree(const OmegaForm& form, double beta) {
  const int m = form.tau.m();
  const int k = static_cast<int>(form.family.size());
  std::vector<int> pos_of_value(static_cast<std::size_t>(m));
  for (int p = 0; p < m; ++p) pos_of_value[static_cast<std::size_t>(form.tau(p))] = p;
  std::vector<int> assigned(static_cast<std::size_t>(m), -1);
  double total = 0.0;
  auto rec = [&](auto&& self, int j, const Piecewise& phi) -> void {
    const int p = pos_of_value[static_cast<std::size_t>(j)];
    int lo = p;
    int hi = k - 1 - (m - 1 - p);
    for (int q = p - 1; q >= 0; --q)
      if (assigned[static_cast<std::size_t>(q)] >= 0) {
        lo = assigned[static_cast<std::size_t>(q)] + (p - q);
        break;
      }
    for (int q = p + 1; q < m; ++q)
      if (assigned[static_cast<std::size_t>(q)] >= 0) {
        hi = assigned[static_cast<std::size_t>(q)] - (q - p);
        break;
      }
    for (int s = lo; s <= hi; ++s) {
      const Cdf& f = form.family[static_cast<std::size_t>(s)];
      if (j == m - 1) {
        total += integrate_against_at(phi, f, beta);
        continue;
      }
      Piecewise next = integrate_against(phi, f);
      if (next.is_zero()) continue;
      assigned[static_cast<std::size_t>(p)] = s;
      self(self, j + 1, next);
      assigned[static_cast<std::size_t>(p)] = -1;
    }
  };
  rec(rec, 0, Piecewise::constant(1.0));
  return total;
}

}  // namespace

double omega_integral(const OmegaForm& form, double beta) {
  check_form(form);
  const int m = form.tau.m();
  const int k = static_cast<int>(form.family.size());
  if (m > k) return 0.0;
  const double scale = std::pow(static_cast<double>(form.block_length), m);
  std::vector<int> order(static_cast<std::size_t>(k));
  for (int s = 0; s < k; ++s) order[static_cast<std::size_t>(s)] = s;
  if (is_monotone(form.tau, true)) return scale * omega_chain(form, order, beta);
  if (is_monotone(form.tau, false)) {
    std::reverse(order.begin(), order.end());
    return scale * omega_chain(form, order, beta);
  }
  return scale * omega_tree(form, beta);
}

double omega_integral_enumerate(const OmegaForm& form, double beta) {
  check_form(form);
  const int m = form.tau.m();
  const int k = static_cast<int>(form.family.size());
  if (m > k) return 0.0;
  std::vector<int> s(static_cast<std::size_t>(m));
  double total = 0.0;
  auto rec = [&](auto&& self, int j, int from) -> void {
    if (j == m) {
      SimplexSpec spec;
      spec.beta = beta;
      for (int v = 0; v < m; ++v)
        for (int p = 0; p < m; ++p)
          if (form.tau(p) == v) spec.cdfs.push_back(form.family[static_cast<std::size_t>(s[static_cast<std::size_t>(p)])]);
      total += simplex_integral(spec);
      return;
    }
    for (int b = from; b <= k - (m - j); ++b) {
      s[static_cast<std::size_t>(j)] = b;
      self(self, j + 1, b + 1);
    }
  };
  rec(rec, 0, 0);
  return std::pow(static_cast<double>(form.block_length), m) * total;
}

double estimate_bound(double eps, int m, int k, int n) {
  double fact = 1.0;
  for (int i = 2; i < m; ++i) fact *= i;
  return (20 * std::sqrt(eps) * m * m + 4.0 / k) * std::pow(static_cast<double>(n), m) / fact;
}

Estimate estimate_pattern_count(const Permutation& sigma, const UniformPartition& u, const Pattern& tau,
                                const EstimateOptions& options) {
  if (!(u.epsilon > 0 && u.epsilon <= 0.5)) throw parameter_error("estimator needs 0 < eps <= 1/2");
  if (u.partition.k() < 1) throw parameter_error("estimator needs at least one block");
  Estimate e;
  e.epsilon = u.epsilon;
  e.k = u.partition.k();
  e.m = tau.m();
  OmegaForm form{u.partition.block_length(), tau, u.family};
  e.estimate = omega_integral(form, 1.0);
  e.bound = estimate_bound(u.epsilon, e.m, e.k, sigma.size());
  if (options.smoothed) {
    const double delta = options.delta.value_or(std::sqrt(u.epsilon));
    OmegaForm smooth = form;
    for (auto& f : smooth.family) f = convolve_smooth(f, delta);
    e.delta = delta;
    e.smoothed_estimate = omega_integral(smooth, 1.0 + delta);
  }
  if (options.exact) e.exact = count_pattern(sigma, tau);
  return e;
}

SmoothingComparison compare_under_smoothing(const std::vector<Cdf>& fs, const std::vector<Cdf>& gs, double eps,
                                            double b, double beta, const std::optional<Piecewise>& weight) {
  if (fs.empty() || fs.size() != gs.size()) throw parameter_error("compare_under_smoothing needs matching families");
  SmoothingComparison c;
  double a = 0.0;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    a = std::max({a, fs[j].domain_end(), gs[j].domain_end()});
    if (!eps_near(fs[j], gs[j], eps).near) c.near_ok = false;
    if (lipschitz_modulus(gs[j], eps) > b + 1e-9) c.lipschitz_ok = false;
  }
  c.delta_f = simplex_integral({fs, beta, weight});
  c.delta_g = simplex_integral({gs, beta, weight});
  c.difference = std::abs(c.delta_f - c.delta_g);
  c.bound = static_cast<double>(fs.size()) * (a + 1) * (b + 1) * eps;
  c.certified = c.near_ok && c.lipschitz_ok && c.difference <= c.bound + 1e-12;
  return c;
}

}  // namespace permreg
