#include "permreg/cdf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "permreg/error.hpp"

namespace permreg {

namespace {
constexpr double kTol = 1e-9;
}

Poly Poly::constant(double v) {
  Poly p;
  p.c[0] = v;
  return p;
}

Poly Poly::linear(double c0, double c1) {
  Poly p;
  p.c[0] = c0;
  p.c[1] = c1;
  p.terms = 2;
  return p;
}

double Poly::operator()(double u) const {
  double acc = 0.0;
  for (int k = terms - 1; k >= 0; --k) acc = acc * u + c[static_cast<std::size_t>(k)];
  return acc;
}

int Poly::degree() const {
  for (int k = terms - 1; k > 0; --k)
    if (c[static_cast<std::size_t>(k)] != 0.0) return k;
  return 0;
}

bool Poly::is_zero() const {
  for (int k = 0; k < terms; ++k)
    if (c[static_cast<std::size_t>(k)] != 0.0) return false;
  return true;
}

Poly Poly::derivative() const {
  Poly d;
  d.terms = std::max(1, terms - 1);
  for (int k = 1; k < terms; ++k) d.c[static_cast<std::size_t>(k - 1)] = k * c[static_cast<std::size_t>(k)];
  return d;
}

Poly Poly::antiderivative() const {
  if (terms + 1 > max_terms) throw parameter_error("polynomial degree exceeds supported bound");
  Poly a;
  a.terms = terms + 1;
  for (int k = 0; k < terms; ++k) a.c[static_cast<std::size_t>(k + 1)] = c[static_cast<std::size_t>(k)] / (k + 1);
  return a;
}

Poly Poly::shifted(double d) const {
  if (d == 0.0 || terms == 1) return *this;
  // Horner-style Taylor shift
  Poly q = *this;
  for (int i = 0; i < terms - 1; ++i)
    for (int k = terms - 2; k >= i; --k) q.c[static_cast<std::size_t>(k)] += d * q.c[static_cast<std::size_t>(k + 1)];
  return q;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r;
  r.terms = std::max(a.terms, b.terms);
  for (int k = 0; k < r.terms; ++k) r.c[static_cast<std::size_t>(k)] = a.c[static_cast<std::size_t>(k)] + b.c[static_cast<std::size_t>(k)];
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-1.0) * b; }

Poly operator*(double s, const Poly& a) {
  Poly r = a;
  for (int k = 0; k < r.terms; ++k) r.c[static_cast<std::size_t>(k)] *= s;
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  const int da = a.degree();
  const int db = b.degree();
  if (da + db + 1 > Poly::max_terms) throw parameter_error("polynomial degree exceeds supported bound");
  Poly r;
  r.terms = da + db + 1;
  for (int i = 0; i <= da; ++i)
    for (int j = 0; j <= db; ++j)
      r.c[static_cast<std::size_t>(i + j)] += a.c[static_cast<std::size_t>(i)] * b.c[static_cast<std::size_t>(j)];
  return r;
}

Piecewise::Piecewise(std::vector<double> knots, std::vector<Poly> cells, double head, double tail)
    : knots_(std::move(knots)), cells_(std::move(cells)), head_(head), tail_(tail) {
  if (knots_.empty()) throw parameter_error("piecewise function needs at least one knot");
  if (cells_.size() + 1 != knots_.size()) throw parameter_error("piecewise function: cell count mismatch");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i] > knots_[i - 1])) throw parameter_error("piecewise function: knots must increase");
}

Piecewise Piecewise::constant(double v) { return Piecewise({0.0}, {}, v, v); }

double Piecewise::value(double t) const {
  if (t <= knots_.front()) return head_;
  if (t > knots_.back()) return tail_;
  auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
  auto i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return cells_[i](t - knots_[i]);
}

double Piecewise::right(double t) const {
  if (t < knots_.front()) return head_;
  if (t >= knots_.back()) return tail_;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  auto i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return cells_[i](t - knots_[i]);
}

int Piecewise::max_degree() const {
  int d = 0;
  for (const auto& c : cells_) d = std::max(d, c.degree());
  return d;
}

bool Piecewise::is_zero() const {
  if (head_ != 0.0 || tail_ != 0.0) return false;
  for (const auto& c : cells_)
    if (!c.is_zero()) return false;
  return true;
}

Cdf::Cdf() : f_({0.0, 1.0}, {Poly::linear(0.0, 1.0)}, 0.0, 1.0) {}

Cdf::Cdf(Piecewise f) : f_(std::move(f)) {
  const auto& x = f_.knots();
  const auto& cells = f_.cells();
  if (x.size() < 2 || x.front() != 0.0) throw parameter_error("cdf knots must start at 0 and reach the domain end");
  if (f_.head() != 0.0 || f_.tail() != 1.0) throw parameter_error("cdf must run from 0 to 1");
  double prev = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const double w = x[i + 1] - x[i];
    const Poly& p = cells[i];
    if (p(0.0) < prev - kTol) throw parameter_error("cdf decreases at a knot");
    const Poly d = p.derivative();
    const int samples = p.degree() <= 2 ? 1 : 8;
    for (int s = 0; s <= samples; ++s)
      if (d(w * s / samples) < -kTol) throw parameter_error("cdf decreases inside a cell");
    prev = p(w);
    if (p(0.0) < -kTol || prev > 1.0 + kTol) throw parameter_error("cdf leaves [0,1]");
  }
  if (std::abs(prev - 1.0) > kTol) throw parameter_error("cdf must reach 1 at its domain end without an atom there");
}

Cdf Cdf::step(const std::vector<double>& positions, const std::vector<double>& right_values, double end) {
  if (positions.empty() || positions.size() != right_values.size())
    throw parameter_error("step cdf needs matching positions and values");
  std::vector<double> knots;
  std::vector<Poly> cells;
  if (positions.front() < 0.0) throw parameter_error("step cdf position below 0");
  if (positions.front() > 0.0) {
    knots.push_back(0.0);
    cells.push_back(Poly::constant(0.0));
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i > 0 && !(positions[i] > positions[i - 1])) throw parameter_error("step cdf positions must increase");
    if (!(positions[i] < end)) throw parameter_error("step cdf atom at or beyond the domain end");
    knots.push_back(positions[i]);
    cells.push_back(Poly::constant(right_values[i]));
  }
  knots.push_back(end);
  return Cdf(Piecewise(std::move(knots), std::move(cells), 0.0, 1.0));
}

Cdf Cdf::from_atoms(std::vector<std::pair<double, double>> atoms, double end) {
  std::map<double, double> merged;
  double total = 0.0;
  for (auto [pos, mass] : atoms) {
    if (mass < 0.0) throw parameter_error("negative atom mass");
    if (mass == 0.0) continue;
    merged[pos] += mass;
    total += mass;
  }
  if (merged.empty() || std::abs(total - 1.0) > kTol) throw parameter_error("atom masses must sum to 1");
  std::vector<double> pos;
  std::vector<double> vals;
  double acc = 0.0;
  for (auto [p, m] : merged) {
    acc += m;
    pos.push_back(p);
    vals.push_back(acc);
  }
  vals.back() = 1.0;
  return step(pos, vals, end);
}

Cdf Cdf::piecewise_linear(const std::vector<std::pair<double, double>> & points) {
  if (points.size() < 2) throw parameter_error("piecewise-linear cdf needs two points");
  if (points.front().first != 0.0 || points.front().second != 0.0)
    throw parameter_error("piecewise-linear cdf must start at (0,0)");
  if (std::abs(points.back().second - 1.0) > kTol) throw parameter_error("piecewise-linear cdf must end at 1");
  std::vector<double> knots;
  std::vector<Poly> cells;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto [x0, y0] = points[i];
    const auto [x1, y1] = points[i + 1];
    if (!(x1 > x0)) throw parameter_error("piecewise-linear cdf x must increase");
    knots.push_back(x0);
    cells.push_back(Poly::linear(y0, (y1 - y0) / (x1 - x0)));
  }
  knots.push_back(points.back().first);
  return Cdf(Piecewise(std::move(knots), std::move(cells), 0.0, 1.0));
}

Cdf Cdf::uniform(double lo, double hi, double end) {
  if (!(0.0 <= lo && lo < hi && hi <= end)) throw parameter_error("uniform cdf needs 0 <= lo < hi <= end");
  std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
  if (lo > 0.0) pts.push_back({lo, 0.0});
  pts.push_back({hi, 1.0});
  if (end > hi) pts.push_back({end, 1.0});
  return piecewise_linear(pts);
}

Cdf Cdf::identity() { return Cdf(); }

double Cdf::first_reaching(double target) const {
  if (target <= 0.0) return 0.0;
  const auto& x = f_.knots();
  const auto& cells = f_.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Poly& p = cells[i];
    if (p(0.0) >= target) return x[i];
    const double w = x[i + 1] - x[i];
    if (p(w) >= target) {
      if (p.degree() == 1) return x[i] + std::min(w, (target - p.c[0]) / p.c[1]);
      double lo = 0.0, hi = w;
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (p(mid) >= target ? hi : lo) = mid;
      }
      return x[i] + hi;
    }
  }
  return domain_end();
}

std::vector<std::pair<double, double>> Cdf::breakpoints() const {
  std::vector<std::pair<double, double>> out;
  const auto& x = f_.knots();
  const bool stepwise = is_step();
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double r = f_.right(x[i]);
    if (!stepwise || r != f_.value(x[i])) out.emplace_back(x[i], r);
  }
  if (!stepwise) out.emplace_back(x.back(), 1.0);
  return out;
}

}  // namespace permreg
