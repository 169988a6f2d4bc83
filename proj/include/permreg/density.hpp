#pragma once

#include <cstdint>

#include "permreg/cdf.hpp"
#include "permreg/core.hpp"

namespace permreg {

// p(S,T) = #{(s,t) in S x T : sigma(s) < t}
std::int64_t pair_count(const DominanceTable& table, Interval s, Interval t);
std::int64_t pair_count(const Permutation& sigma, Interval s, Interval t);
std::int64_t pair_count(const Permutation& sigma, const IndexSet& s, Interval t);

// d(S,T) = p(S,T) / (|S||T|); throws undefined_density for an empty side.
double density(const DominanceTable& table, Interval s, Interval t);
double density(const Permutation& sigma, Interval s, Interval t);
double density(const Permutation& sigma, const IndexSet& s, Interval t);

// L(S, a) = |sigma(S) ∩ [0, a n)| / |S| as a step CDF with atoms at sigma(s)/n.
Cdf cdf_L(const Permutation& sigma, const IndexSet& s);
Cdf cdf_L(const Permutation& sigma, Interval s);

struct NearResult {
  bool near = true;
  // Location and size of the largest violation of the sandwich
  //   g(a - eps) - eps <= f(a) <= g(a + eps) + eps.
  // gap <= 0 means the sandwich holds there with |gap| to spare.
  double alpha = 0.0;
  double gap = 0.0;
};

constexpr double near_tolerance = 1e-9;

// Exact for cells of degree <= 2 (steps, ramps and their smoothings).
NearResult eps_near(const Cdf& f, const Cdf& g, double eps);

// sup over x of f(x + eps) - f(x).
double max_increment(const Cdf& f, double eps);
// Smallest B with f(x + eps) - f(x) <= B eps for all x.
double lipschitz_modulus(const Cdf& f, double eps);

// Sliding box average t -> (1/delta) * integral of f over [t - delta, t],
// a CDF on [0, a + delta]. Exact: cells are antiderivative differences.
Cdf convolve_smooth(const Cdf& f, double delta);

}  // namespace permreg
