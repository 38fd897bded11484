#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace daclab {

// Deterministic per-trial randomness. Every (master, trial, role) triple
// yields an independent stream; role 0 draws source bits, role 1 drives the
// correlation channel.
struct TrialSeed {
  uint64_t master = 0;
  uint64_t trial = 0;

  static constexpr uint64_t kRoleSource = 0;
  static constexpr uint64_t kRoleChannel = 1;

  std::mt19937_64 stream(uint64_t role) const;
};

// n Bernoulli draws; bit i is 0 with probability p0.
std::vector<uint8_t> gen_source(uint32_t n, double p0, const TrialSeed& seed);

// Passes x through a binary symmetric channel with the given crossover
// probability, using the seed's channel stream.
std::vector<uint8_t> apply_bsc(const std::vector<uint8_t>& x, double p,
                               const TrialSeed& seed);

// Bernoulli source X (P(X=0) = p0x) observed through a BSC with crossover
// probability p, plus the log-posterior tables the decoders score with.
struct CorrelationModel {
  static constexpr double kLambdaFloor = -60.0;

  double p0x = 0.5;
  double crossover = 0.0;
  double lx_given_y[2][2] = {};  // log2 P(X=a | Y=b), floored
  double ly_given_x[2][2] = {};  // log2 P(Y=b | X=a), floored

  static CorrelationModel make(double p0x, double crossover);

  double p0y() const { return p0x * (1.0 - crossover) + (1.0 - p0x) * crossover; }
};

}  // namespace daclab
