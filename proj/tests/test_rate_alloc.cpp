#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "daclab/errors.hpp"
#include "daclab/rate_alloc.hpp"

using namespace daclab;

TEST_CASE("binary entropy hits the reference points") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.9) == doctest::Approx(0.4690).epsilon(0.001));
  CHECK(binary_entropy(0.110) == doctest::Approx(0.4999).epsilon(0.001));
}

TEST_CASE("pair entropies follow the chain rule") {
  // balanced source: H(Y) = 1 and H(X|Y) = h(p)
  CHECK(cond_entropy_x_given_y(0.5, 0.0417) ==
        doctest::Approx(binary_entropy(0.0417)).epsilon(1e-12));
  CHECK(side_entropy(0.5, 0.3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(joint_entropy(0.5, 0.11) ==
        doctest::Approx(1.0 + binary_entropy(0.11)).epsilon(1e-12));

  // skewed reference point
  CHECK(side_entropy(0.9, 0.121) == doctest::Approx(0.715).epsilon(0.001));
  CHECK(cond_entropy_x_given_y(0.9, 0.121) ==
        doctest::Approx(0.285).epsilon(0.005));

  CHECK(cond_entropy_x_given_y(0.7, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("entropy targets invert back to crossover probabilities") {
  CHECK(crossover_for_cond_entropy(0.5, 0.25) ==
        doctest::Approx(0.0417).epsilon(0.01));
  for (const double p0 : {0.5, 0.7, 0.9}) {
    for (const double p : {0.01, 0.05, 0.121, 0.3, 0.45}) {
      const double hxgy = cond_entropy_x_given_y(p0, p);
      CHECK(crossover_for_cond_entropy(p0, hxgy) ==
            doctest::Approx(p).epsilon(1e-9));
      const double hxy = joint_entropy(p0, p);
      CHECK(crossover_for_joint_entropy(p0, hxy) ==
            doctest::Approx(p).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(crossover_for_cond_entropy(0.5, 2.0), InvalidParam);
}

TEST_CASE("power-rule factors") {
  const auto id = overlap_factors(0.5, 0.0);
  CHECK(id.alpha0 == 1.0);
  CHECK(id.alpha1 == 1.0);

  const auto bal = overlap_factors(0.5, 0.5);
  CHECK(bal.alpha0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(bal.pt0 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(bal.pt1 == bal.pt0);

  const auto skew = overlap_factors(0.9, 0.5);
  CHECK(skew.alpha0 == doctest::Approx(1.0541).epsilon(0.0001));
  CHECK(skew.alpha1 == doctest::Approx(3.1623).epsilon(0.0001));
  CHECK(skew.pt0 == doctest::Approx(0.9487).epsilon(0.0001));
  CHECK(skew.pt1 == doctest::Approx(0.3162).epsilon(0.0001));
}

TEST_CASE("power-rule probabilities always fit") {
  for (double p0 = 0.05; p0 < 1.0; p0 += 0.05) {
    for (double k = 0.0; k < 0.99; k += 0.07) {
      const auto f = overlap_factors(p0, k);
      CHECK(f.pt0 <= 1.0);
      CHECK(f.pt1 <= 1.0);
      CHECK(f.pt0 + f.pt1 >= 1.0);
      CHECK(f.alpha0 >= 1.0);
      CHECK(f.alpha1 >= 1.0);
    }
  }
}

TEST_CASE("common-factor rule and its fit limit") {
  const auto ok = equal_overlap_factor(0.8, 0.5);
  CHECK(ok.alpha == doctest::Approx(1.166).epsilon(0.001));
  CHECK(ok.fits);
  CHECK(ok.alpha * 0.8 <= 1.0);

  const auto tight = equal_overlap_factor(0.9, 0.2);
  CHECK(tight.alpha == doctest::Approx(1.205).epsilon(0.001));
  CHECK_FALSE(tight.fits);

  const auto unit = equal_overlap_factor(0.8, binary_entropy(0.8));
  CHECK(unit.alpha == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(unit.fits);
}

TEST_CASE("predicted rate agrees with the closed form") {
  CHECK(predicted_rate_k(0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(predicted_rate_k(0.7, 0.0) ==
        doctest::Approx(binary_entropy(0.7)).epsilon(1e-12));
  CHECK(predicted_rate_k(0.9, 0.5) == doctest::Approx(0.2345).epsilon(0.001));

  for (double p0 = 0.05; p0 < 1.0; p0 += 0.037) {
    for (double k = 0.0; k < 0.99; k += 0.083) {
      const auto f = overlap_factors(p0, k);
      CHECK(predicted_rate(p0, f.pt0, f.pt1) ==
            doctest::Approx((1.0 - k) * binary_entropy(p0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("solve_k compensates for the termination tail") {
  CHECK(solve_k(0.5, 0.5, 200, 15) == doctest::Approx(100.0 / 185.0).epsilon(1e-12));
  CHECK(solve_k(0.5, 0.5, 200, 15) == doctest::Approx(0.5405).epsilon(0.0001));
  CHECK(solve_k(0.5, 0.7, 100, 0) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(solve_k(0.5, 1.2, 100, 0) == 0.0);  // target above H(X): no overlap
  CHECK_THROWS_AS(solve_k(0.5, 0.05, 200, 15), Infeasible);
  CHECK_THROWS_AS(solve_k(0.5, 0.5, 200, 300), InvalidParam);
}

TEST_CASE("solved schedules reproduce the target rate within quantization") {
  for (const double p0 : {0.5, 0.8, 0.9}) {
    const double h = binary_entropy(p0);
    for (double target = 0.3 * h; target < h; target += 0.11 * h) {
      const uint32_t n = 200, t = 15;
      const double k = solve_k(p0, target, n, t);
      const double kq = std::round(k * 65536.0) / 65536.0;
      const double rate =
          ((n - t) * predicted_rate_k(p0, kq) + t * h) / n;
      CHECK(std::abs(rate - target) < std::exp2(-15) * h);
    }
  }
}

TEST_CASE("margin allocation tracks the correlation bound") {
  const auto loose = allocate_margin(0.5, 0.0417, 2.0, 200, 0);
  CHECK(loose.target_rate == doctest::Approx(0.5).epsilon(0.01));
  CHECK(loose.k == doctest::Approx(0.5).epsilon(0.01));

  // margin above H(X): classical coding suffices
  const auto classical = allocate_margin(0.5, 0.5, 1.5, 200, 0);
  CHECK(classical.k == 0.0);
  CHECK(classical.target_rate == doctest::Approx(1.0).epsilon(1e-12));

  const auto skew = allocate_margin(0.9, 0.121, 1.12, 200, 15);
  CHECK(skew.target_rate == doctest::Approx(0.32).epsilon(0.01));
  CHECK(skew.k ==
        doctest::Approx(solve_k(0.9, skew.target_rate, 200, 15)).epsilon(1e-12));

  CHECK_THROWS_AS(allocate_margin(0.5, 0.1, 0.9, 200, 0), InvalidParam);
}

TEST_CASE("symmetric split allocation") {
  const auto even = allocate_symmetric(0.5, 0.5, 0.11, 0.75, 0.75, 200, 0);
  CHECK(even.kx == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(even.ky == doctest::Approx(0.5).epsilon(1e-9));

  const auto skewed = allocate_symmetric(0.5, 0.5, 0.11, 0.6, 0.9, 200, 0);
  CHECK(skewed.kx == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(skewed.ky == doctest::Approx(0.2).epsilon(1e-9));

  const auto idle = allocate_symmetric(0.5, 0.5, 0.11, 1.0, 1.0, 200, 0);
  CHECK(idle.kx == 0.0);
  CHECK(idle.ky == 0.0);

  // a reachable point below the admissible region only flags
  const auto tight = allocate_symmetric(0.5, 0.5, 0.11, 0.52, 0.52, 200, 0);
  CHECK_FALSE(tight.sw_feasible);
  CHECK(tight.kx == doctest::Approx(0.96).epsilon(1e-9));
  CHECK(even.sw_feasible);

  // but a rate needing k above the cap cannot be allocated at all
  CHECK_THROWS_AS(allocate_symmetric(0.5, 0.5, 0.11, 0.3, 0.75, 200, 0),
                  Infeasible);
}
