#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "permreg/cdf.hpp"
#include "permreg/core.hpp"
#include "permreg/patterns.hpp"
#include "permreg/uniformity.hpp"

namespace permreg {

// Phi(t) = integral over [0, t) of phi(x) df(x), as a left-continuous
// piecewise polynomial. Atoms of f at x are weighted by phi's value at x.
Piecewise integrate_against(const Piecewise& phi, const Cdf& f);
// Same integral evaluated at a single point t only.
double integrate_against_at(const Piecewise& phi, const Cdf& f, double t);

Piecewise add(const Piecewise& a, const Piecewise& b);

struct SimplexSpec {
  std::vector<Cdf> cdfs;
  double beta = 1.0;
  // weight on x_1; constant 1 when absent
  std::optional<Piecewise> weight;
};

// Integral of alpha(x_1) df_1(x_1) ... df_r(x_r) over x_1 < ... < x_r < beta,
// with strict inequalities (coincident atoms contribute nothing).
double simplex_integral(const SimplexSpec& spec);

struct OmegaForm {
  int block_length = 0;
  Pattern tau;
  // one CDF per block, blocks in left-to-right order
  std::vector<Cdf> family;
};

// |C_1|^m times the sum over s_0 < ... < s_{m-1} of the simplex integral in
// which the slot of value j uses f_{s_{tau^{-1}(j)}}.
double omega_integral(const OmegaForm& form, double beta);
// Direct C(k, m) tuple enumeration, for cross-checks.
double omega_integral_enumerate(const OmegaForm& form, double beta);

struct EstimateOptions {
  bool smoothed = false;
  // smoothing width; sqrt(eps) when absent
  std::optional<double> delta;
  bool exact = false;
};

struct Estimate {
  double estimate = 0.0;
  // (20 sqrt(eps) m^2 + 4/k) n^m / (m-1)!
  double bound = 0.0;
  std::optional<std::uint64_t> exact;
  double epsilon = 0.0;
  int k = 0;
  int m = 0;
  std::optional<double> smoothed_estimate;
  std::optional<double> delta;
};

double estimate_bound(double eps, int m, int k, int n);

Estimate estimate_pattern_count(const Permutation& sigma, const UniformPartition& u, const Pattern& tau,
                                const EstimateOptions& options = {});

struct SmoothingComparison {
  double delta_f = 0.0;
  double delta_g = 0.0;
  double difference = 0.0;
  // r (a+1)(B+1) eps
  double bound = 0.0;
  bool near_ok = true;
  bool lipschitz_ok = true;
  // hypotheses verified and difference within the bound
  bool certified = false;
};

// Compares the simplex integrals of two families. Hypotheses: each f_j is
// eps-near g_j and each g_j is (B, eps)-Lipschitz; a is the common domain end.
SmoothingComparison compare_under_smoothing(const std::vector<Cdf>& fs, const std::vector<Cdf>& gs, double eps,
                                            double b, double beta, const std::optional<Piecewise>& weight = {});

}  // namespace permreg
