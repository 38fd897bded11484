#include "daclab/rate_alloc.hpp"

#include <cmath>

#include "daclab/errors.hpp"

namespace daclab {

namespace {

constexpr double kKMax = 0.99;

void check_p0(double p0, const char* who) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw InvalidParam(std::string(who) + ": p0 outside (0, 1)");
}

// Monotone-increasing f on [lo, hi]; returns the abscissa where f = target.
template <typename F>
double bisect(F f, double lo, double hi, double target) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double binary_entropy(double q) {
  if (q <= 0.0 || q >= 1.0) return 0.0;
  return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

double joint_entropy(double p0, double p) {
  return binary_entropy(p0) + binary_entropy(p);
}

double side_entropy(double p0, double p) {
  return binary_entropy(p0 * (1.0 - p) + (1.0 - p0) * p);
}

double cond_entropy_x_given_y(double p0, double p) {
  return joint_entropy(p0, p) - side_entropy(p0, p);
}

double crossover_for_cond_entropy(double p0, double target) {
  check_p0(p0, "crossover_for_cond_entropy");
  if (target < 0.0 || target > binary_entropy(p0) + 1e-12)
    throw InvalidParam("crossover_for_cond_entropy: target outside [0, H(X)]");
  return bisect([p0](double p) { return cond_entropy_x_given_y(p0, p); }, 0.0,
                0.5, target);
}

double crossover_for_joint_entropy(double p0, double target) {
  check_p0(p0, "crossover_for_joint_entropy");
  const double h0 = binary_entropy(p0);
  if (target < h0 - 1e-12 || target > h0 + 1.0 + 1e-12)
    throw InvalidParam("crossover_for_joint_entropy: target outside [H(X), H(X)+1]");
  return bisect([](double p) { return binary_entropy(p); }, 0.0, 0.5,
                target - h0);
}

OverlapFactors overlap_factors(double p0, double k) {
  check_p0(p0, "overlap_factors");
  if (k < 0.0 || k >= 1.0) throw InvalidParam("overlap_factors: k outside [0, 1)");
  OverlapFactors f;
  f.alpha0 = std::pow(p0, -k);
  f.alpha1 = std::pow(1.0 - p0, -k);
  f.pt0 = std::pow(p0, 1.0 - k);
  f.pt1 = std::pow(1.0 - p0, 1.0 - k);
  return f;
}

EqualFactor equal_overlap_factor(double p0, double rate) {
  check_p0(p0, "equal_overlap_factor");
  EqualFactor f;
  f.alpha = std::exp2(binary_entropy(p0) - rate);
  f.pt0 = f.alpha * p0;
  f.pt1 = f.alpha * (1.0 - p0);
  f.fits = f.alpha * std::max(p0, 1.0 - p0) <= 1.0;
  return f;
}

double predicted_rate(double p0, double pt0, double pt1) {
  return -p0 * std::log2(pt0) - (1.0 - p0) * std::log2(pt1);
}

double predicted_rate_k(double p0, double k) {
  return (1.0 - k) * binary_entropy(p0);
}

double solve_k(double p0, double target_rate, uint32_t n, uint32_t t) {
  check_p0(p0, "solve_k");
  if (n == 0 || t > n) throw InvalidParam("solve_k: need 0 < n and t <= n");
  const double h = binary_entropy(p0);
  if (t == n) {
    if (std::abs(target_rate - h) < 1e-9) return 0.0;
    throw Infeasible("solve_k: every symbol terminated, rate pinned at H(X)");
  }
  double k = n * (h - target_rate) / ((n - t) * h);
  if (k <= 0.0) return 0.0;
  if (k > kKMax) throw Infeasible("solve_k: target rate below the k = 0.99 floor");
  return k;
}

Allocation allocate_margin(double p0, double p, double mu, uint32_t n,
                           uint32_t t) {
  if (mu < 1.0) throw InvalidParam("allocate_margin: mu below 1");
  Allocation a;
  a.target_rate = std::min(binary_entropy(p0), mu * cond_entropy_x_given_y(p0, p));
  a.k = solve_k(p0, a.target_rate, n, t);
  return a;
}

SymmetricAllocation allocate_symmetric(double p0x, double p0y, double p,
                                       double rate_x, double rate_y,
                                       uint32_t n, uint32_t t) {
  check_p0(p0x, "allocate_symmetric");
  check_p0(p0y, "allocate_symmetric");
  if (n == 0 || t > n) throw InvalidParam("allocate_symmetric: need 0 < n and t <= n");

  const double hx = binary_entropy(p0x);
  const double hy = binary_entropy(p0y);
  // active overlap positions of each stream below the termination tail
  const uint32_t head = n - t;
  const uint32_t nx = (head + 1) / 2;
  const uint32_t ny = head / 2;

  auto solve_member = [n](double h, double rate, uint32_t active) {
    if (active == 0) {
      if (rate >= h - 1e-9) return 0.0;
      throw Infeasible("allocate_symmetric: no active positions to overlap");
    }
    double k = static_cast<double>(n) * (h - rate) / (active * h);
    if (k <= 0.0) return 0.0;
    if (k > kKMax)
      throw Infeasible("allocate_symmetric: rate below the k = 0.99 floor");
    return k;
  };

  SymmetricAllocation s;
  s.kx = solve_member(hx, rate_x, nx);
  s.ky = solve_member(hy, rate_y, ny);

  const double hxy = hx + binary_entropy(p);
  s.sw_feasible = rate_x + 1e-9 >= hxy - hy &&
                  rate_y + 1e-9 >= binary_entropy(p) &&
                  rate_x + rate_y + 1e-9 >= hxy;
  return s;
}

}  // namespace daclab
