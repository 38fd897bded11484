#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "daclab/corr_models.hpp"
#include "daclab/dac_codec.hpp"

namespace daclab {

enum class OverlapRule { kPower, kEqual };

struct ExperimentConfig {
  uint32_t n = 200;
  uint32_t t = 15;
  uint32_t m = 2048;
  double p0 = 0.5;
  double crossover = 0.11;
  double rate = 0.5;       // target rate of the X stream, bits per symbol
  double rate_x = 0.75;    // symmetric runs: per-stream targets
  double rate_y = 0.75;
  double rate_step = 0.01; // variable-rate re-encoding increment
  OverlapRule rule = OverlapRule::kPower;
  uint64_t seed = 1;
  uint64_t total_bits = 1000000;  // fixed-rate budget (source bits)
  uint32_t realizations = 300;   // variable-rate budget
  // with min_error_blocks > 0 a fixed-rate run keeps going past total_bits
  // until that many erroneous blocks accumulate or max_blocks is reached
  uint64_t min_error_blocks = 0;
  uint64_t max_blocks = 0;
};

struct TrialStats {
  uint64_t blocks = 0;
  uint64_t bits = 0;           // source bits pushed through the channel
  uint64_t bit_errors = 0;
  uint64_t block_errors = 0;
  uint64_t payload_bits = 0;   // total coded payload
  double rate_mean = 0.0;      // per-block payload rate
  double rate_std = 0.0;
  uint64_t rate_ceiling_hits = 0;  // variable rate: sweeps that hit H(X)
  uint64_t first_err_blocks = 0;   // erroneous blocks behind the stats below
  double first_err_mean = 0.0;
  double first_err_std = 0.0;
  double elapsed_ms = 0.0;

  double ber() const { return bits ? static_cast<double>(bit_errors) / bits : 0.0; }
  double fer() const {
    return blocks ? static_cast<double>(block_errors) / blocks : 0.0;
  }
};

// Schedule for one fixed-rate operating point under the configured rule,
// with the termination tail compensated so the block rate meets cfg.rate.
EncoderSchedule schedule_for_rate(const ExperimentConfig& cfg);

// Monte-Carlo drivers. Every block draws its randomness from
// (cfg.seed, block index), so results do not depend on batching.
TrialStats run_fixed_rate(const ExperimentConfig& cfg);
TrialStats run_variable_rate(const ExperimentConfig& cfg);
TrialStats run_symmetric_fixed(const ExperimentConfig& cfg);
TrialStats run_symmetric_variable(const ExperimentConfig& cfg);

std::vector<std::pair<uint32_t, TrialStats>> run_termination_sweep(
    const ExperimentConfig& cfg, const std::vector<uint32_t>& ts);
std::vector<std::pair<uint32_t, TrialStats>> run_m_sweep(
    const ExperimentConfig& cfg, const std::vector<uint32_t>& ms);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// UTF-8, comma separated, one header row, floats at 6 significant digits.
void emit_csv(std::ostream& os, const CsvTable& table);
std::string format_g6(double v);

}  // namespace daclab
