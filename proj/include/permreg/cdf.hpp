#pragma once

#include <array>
#include <utility>
#include <vector>

namespace permreg {

// Polynomial in a local variable u, stored by ascending coefficient.
struct Poly {
  static constexpr int max_terms = 16;
  std::array<double, max_terms> c{};
  int terms = 1;

  static Poly constant(double v);
  static Poly linear(double c0, double c1);

  double operator()(double u) const;
  int degree() const;
  bool is_zero() const;
  Poly derivative() const;
  // Zero constant term.
  Poly antiderivative() const;
  // q(u) = p(u + d)
  Poly shifted(double d) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(double s, const Poly& a);
};

// Left-continuous piecewise polynomial on the real line.
//   t <= x_0                 -> head
//   x_i < t <= x_{i+1}       -> cells[i](t - x_i)
//   t > x_{K-1}              -> tail
// The right limit at a knot x_i (i < K-1) is cells[i](0); jumps live at knots.
class Piecewise {
 public:
  Piecewise() = default;
  Piecewise(std::vector<double> knots, std::vector<Poly> cells, double head, double tail);

  static Piecewise constant(double v);

  double value(double t) const;
  double right(double t) const;

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<Poly>& cells() const { return cells_; }
  double head() const { return head_; }
  double tail() const { return tail_; }
  int max_degree() const;
  bool is_zero() const;

 private:
  std::vector<double> knots_{0.0};
  std::vector<Poly> cells_;
  double head_ = 0.0;
  double tail_ = 0.0;
};

// A cumulative distribution function on [0, a]: F(t) = P(X < t), so the
// function is left-continuous with F(t) = 0 for t <= 0 and F(t) = 1 for
// t >= a. Atoms may sit anywhere in [0, a).
class Cdf {
 public:
  Cdf();
  explicit Cdf(Piecewise f);

  // Point masses; positions in [0, end), masses summing to 1.
  static Cdf from_atoms(std::vector<std::pair<double, double>> atoms, double end = 1.0);
  // Step CDF from distinct ascending positions and the value just right of
  // each one (the last value must be 1).
  static Cdf step(const std::vector<double>& positions, const std::vector<double>& right_values,
                  double end = 1.0);
  // Continuous CDF through (x, y) points joined linearly; x from 0 to end,
  // y from 0 to 1.
  static Cdf piecewise_linear(const std::vector<std::pair<double, double>>& points);
  static Cdf uniform(double lo, double hi, double end = 1.0);
  static Cdf identity();

  double value(double t) const { return f_.value(t); }
  double right(double t) const { return f_.right(t); }
  double domain_end() const { return f_.knots().back(); }
  const Piecewise& function() const { return f_; }
  int degree() const { return f_.max_degree(); }
  bool is_step() const { return degree() == 0; }

  // Smallest t with right(t) >= target (targets above 1 give domain_end()).
  double first_reaching(double target) const;

  // (x, right(x)) at every knot where the function jumps or bends, ascending.
  std::vector<std::pair<double, double>> breakpoints() const;

 private:
  Piecewise f_;
};

}  // namespace permreg
