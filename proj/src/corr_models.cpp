#include "daclab/corr_models.hpp"

#include <cmath>

#include "daclab/errors.hpp"

namespace daclab {

namespace {

uint64_t splitmix64(uint64_t& z) {
  z += 0x9E3779B97F4A7C15ull;
  uint64_t r = z;
  r = (r ^ (r >> 30)) * 0xBF58476D1CE4E5B9ull;
  r = (r ^ (r >> 27)) * 0x94D049BB133111EBull;
  return r ^ (r >> 31);
}

double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double floored_log2(double num, double den) {
  if (num <= 0.0 || den <= 0.0) return CorrelationModel::kLambdaFloor;
  const double v = std::log2(num / den);
  return v < CorrelationModel::kLambdaFloor ? CorrelationModel::kLambdaFloor : v;
}

}  // namespace

std::mt19937_64 TrialSeed::stream(uint64_t role) const {
  uint64_t z = master;
  uint64_t key = splitmix64(z);
  z ^= trial;
  key ^= splitmix64(z);
  z ^= role;
  key ^= splitmix64(z);
  return std::mt19937_64(key);
}

std::vector<uint8_t> gen_source(uint32_t n, double p0, const TrialSeed& seed) {
  if (p0 < 0.0 || p0 > 1.0) throw InvalidParam("gen_source: p0 outside [0, 1]");
  auto rng = seed.stream(TrialSeed::kRoleSource);
  std::vector<uint8_t> x(n);
  for (auto& b : x) b = unit_double(rng) < p0 ? 0 : 1;
  return x;
}

std::vector<uint8_t> apply_bsc(const std::vector<uint8_t>& x, double p,
                               const TrialSeed& seed) {
  if (p < 0.0 || p > 1.0) throw InvalidParam("apply_bsc: p outside [0, 1]");
  auto rng = seed.stream(TrialSeed::kRoleChannel);
  std::vector<uint8_t> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    y[i] = x[i] ^ static_cast<uint8_t>(unit_double(rng) < p);
  }
  return y;
}

CorrelationModel CorrelationModel::make(double p0x, double crossover) {
  if (p0x <= 0.0 || p0x >= 1.0)
    throw InvalidParam("CorrelationModel: p0x outside (0, 1)");
  if (crossover < 0.0 || crossover > 1.0)
    throw InvalidParam("CorrelationModel: crossover outside [0, 1]");

  CorrelationModel m;
  m.p0x = p0x;
  m.crossover = crossover;
  const double px[2] = {p0x, 1.0 - p0x};
  const double py[2] = {m.p0y(), 1.0 - m.p0y()};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double channel = a == b ? 1.0 - crossover : crossover;
      m.ly_given_x[a][b] = floored_log2(channel, 1.0);
      m.lx_given_y[a][b] = floored_log2(channel * px[a], py[b]);
    }
  }
  return m;
}

}  // namespace daclab
