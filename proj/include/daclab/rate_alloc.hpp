#pragma once

#include <cstdint>

namespace daclab {

// h(q) in bits, with 0 log 0 = 0.
double binary_entropy(double q);

// Entropies of the pair (X, Y) where P(X=0) = p0 and Y = X xor BSC(p).
double joint_entropy(double p0, double p);          // H(X,Y) = h(p0) + h(p)
double side_entropy(double p0, double p);           // H(Y)
double cond_entropy_x_given_y(double p0, double p); // H(X|Y)

// Inverse maps: the crossover probability in [0, 0.5] hitting the requested
// conditional/joint entropy for the given source skew.
double crossover_for_cond_entropy(double p0, double target);
double crossover_for_joint_entropy(double p0, double target);

// Per-symbol enlargement alpha_j = p_j^(-k), so pt_j = p_j^(1-k).
struct OverlapFactors {
  double alpha0 = 1.0;
  double alpha1 = 1.0;
  double pt0 = 0.0;
  double pt1 = 0.0;
};
OverlapFactors overlap_factors(double p0, double k);

// Common enlargement alpha = 2^(H(X) - rate) applied to both symbols.
// fits is false when alpha * max(p0, 1-p0) exceeds 1 and the rule cannot
// realize the requested rate.
struct EqualFactor {
  double alpha = 1.0;
  double pt0 = 0.0;
  double pt1 = 0.0;
  bool fits = true;
};
EqualFactor equal_overlap_factor(double p0, double rate);

// Ideal code length per symbol for enlarged probabilities.
double predicted_rate(double p0, double pt0, double pt1);
// Same under the per-symbol rule: (1 - k) h(p0).
double predicted_rate_k(double p0, double k);

// Overlap exponent whose block rate, with the last t symbols carrying no
// overlap, averages to target_rate:
//   [(n - t)(1 - k) + t] h(p0) = n * target_rate.
// Clamped below at 0; throws Infeasible when k would exceed 0.99.
double solve_k(double p0, double target_rate, uint32_t n, uint32_t t);

// Margin-driven allocation: target rate min(H(X), mu * H(X|Y)).
struct Allocation {
  double k = 0.0;
  double target_rate = 0.0;
};
Allocation allocate_margin(double p0, double p, double mu, uint32_t n,
                           uint32_t t);

// Time-shared pair allocation. Each source overlaps only its active indexes
// (X: even, Y: odd, both below n - t), so the per-stream rate is
//   R'_X = (1 - kX * nX / n) H(X)
// with nX active positions. sw_feasible flags whether (rate_x, rate_y) sits
// inside the admissible region of the pair.
struct SymmetricAllocation {
  double kx = 0.0;
  double ky = 0.0;
  bool sw_feasible = true;
};
SymmetricAllocation allocate_symmetric(double p0x, double p0y, double p,
                                       double rate_x, double rate_y,
                                       uint32_t n, uint32_t t);

}  // namespace daclab
