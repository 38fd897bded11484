#include "daclab/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "daclab/errors.hpp"
#include "daclab/rate_alloc.hpp"
#include "daclab/sym_codec.hpp"

namespace daclab {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Welford {
  uint64_t count = 0;
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double v) {
    ++count;
    sum += v;
    sumsq += v * v;
  }
  double mean() const { return count ? sum / count : 0.0; }
  double stddev() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double v = (sumsq - count * m * m) / (count - 1);
    return v > 0.0 ? std::sqrt(v) : 0.0;
  }
};

// index of the first mismatch, or -1
long first_difference(const std::vector<uint8_t>& a,
                      const std::vector<uint8_t>& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return static_cast<long>(i);
  }
  return -1;
}

uint64_t count_differences(const std::vector<uint8_t>& a,
                           const std::vector<uint8_t>& b) {
  uint64_t d = 0;
  for (size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

uint64_t block_budget(const ExperimentConfig& cfg) {
  const uint64_t blocks = (cfg.total_bits + cfg.n - 1) / cfg.n;
  return blocks ? blocks : 1;
}

}  // namespace

EncoderSchedule schedule_for_rate(const ExperimentConfig& cfg) {
  if (cfg.rule == OverlapRule::kPower) {
    const double k = solve_k(cfg.p0, cfg.rate, cfg.n, cfg.t);
    return build_schedule(cfg.n, cfg.t, k, cfg.p0);
  }
  // common-factor rule, compensated the same way: only the n - t leading
  // indexes are widened, so they absorb the whole rate reduction
  const double h = binary_entropy(cfg.p0);
  if (cfg.t >= cfg.n) throw InvalidParam("schedule_for_rate: t exceeds n");
  const double active_rate =
      h - static_cast<double>(cfg.n) * (h - cfg.rate) / (cfg.n - cfg.t);
  const EqualFactor f = equal_overlap_factor(cfg.p0, active_rate);
  if (!f.fits)
    throw DoesNotFit("schedule_for_rate: common factor pushes a probability above 1");
  return build_schedule_probs(cfg.n, cfg.t, f.pt0, f.pt1, cfg.p0);
}

TrialStats run_fixed_rate(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const EncoderSchedule sched = schedule_for_rate(cfg);
  const CorrelationModel corr = CorrelationModel::make(cfg.p0, cfg.crossover);

  TrialStats st;
  Welford rate_acc, first_err;
  const uint64_t base_blocks = block_budget(cfg);
  for (uint64_t b = 0;; ++b) {
    if (cfg.min_error_blocks == 0) {
      if (b >= base_blocks) break;
    } else {
      const bool met = st.block_errors >= cfg.min_error_blocks && b >= base_blocks;
      if (met || (cfg.max_blocks && b >= cfg.max_blocks)) break;
    }
    const TrialSeed ts{cfg.seed, b};
    const auto x = gen_source(cfg.n, cfg.p0, ts);
    const auto y = apply_bsc(x, cfg.crossover, ts);
    const DacBitstream bs = encode(x, sched);
    const DecodeResult res =
        decode_with_schedule(bs.payload_source(), sched, y, corr, cfg.m);

    ++st.blocks;
    st.bits += cfg.n;
    st.payload_bits += bs.payload_bits;
    rate_acc.add(bs.rate());
    const uint64_t diff = count_differences(x, res.x_hat);
    if (diff > 0) {
      st.bit_errors += diff;
      ++st.block_errors;
      first_err.add(static_cast<double>(first_difference(x, res.x_hat)));
    }
  }
  st.rate_mean = rate_acc.mean();
  st.rate_std = rate_acc.stddev();
  st.first_err_blocks = first_err.count;
  st.first_err_mean = first_err.mean();
  st.first_err_std = first_err.stddev();
  st.elapsed_ms = ms_since(t0);
  return st;
}

TrialStats run_variable_rate(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const CorrelationModel corr = CorrelationModel::make(cfg.p0, cfg.crossover);
  const double bound = cond_entropy_x_given_y(cfg.p0, cfg.crossover);
  const double hx = binary_entropy(cfg.p0);

  TrialStats st;
  Welford rate_acc;
  for (uint32_t r = 0; r < cfg.realizations; ++r) {
    const TrialSeed ts{cfg.seed, r};
    const auto x = gen_source(cfg.n, cfg.p0, ts);
    const auto y = apply_bsc(x, cfg.crossover, ts);
    for (double target = bound;; target += cfg.rate_step) {
      if (target >= hx) {
        // ceiling: overlap-free coding is lossless by construction
        const DacBitstream bs = encode(x, build_schedule(cfg.n, cfg.t, 0.0, cfg.p0));
        rate_acc.add(bs.rate());
        st.payload_bits += bs.payload_bits;
        ++st.rate_ceiling_hits;
        break;
      }
      ExperimentConfig point = cfg;
      point.rate = target;
      EncoderSchedule sched;
      try {
        sched = schedule_for_rate(point);
      } catch (const Infeasible&) {
        continue;  // below the overlap cap, no schedule reaches this rate
      } catch (const DoesNotFit&) {
        continue;
      }
      const DacBitstream bs = encode(x, sched);
      const DecodeResult res =
          decode_with_schedule(bs.payload_source(), sched, y, corr, cfg.m);
      if (res.x_hat == x) {
        rate_acc.add(bs.rate());
        st.payload_bits += bs.payload_bits;
        break;
      }
    }
    ++st.blocks;
    st.bits += cfg.n;
  }
  st.rate_mean = rate_acc.mean();
  st.rate_std = rate_acc.stddev();
  st.elapsed_ms = ms_since(t0);
  return st;
}

TrialStats run_symmetric_fixed(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const CorrelationModel corr = CorrelationModel::make(cfg.p0, cfg.crossover);
  const double q = corr.p0y();
  const SymmetricAllocation alloc = allocate_symmetric(
      cfg.p0, q, cfg.crossover, cfg.rate_x, cfg.rate_y, cfg.n, cfg.t);
  const EncoderSchedule sx = build_member_schedule(cfg.n, cfg.t, alloc.kx, cfg.p0, 0);
  const EncoderSchedule sy = build_member_schedule(cfg.n, cfg.t, alloc.ky, q, 1);

  TrialStats st;
  Welford rate_acc, first_err;
  const uint64_t base_blocks = block_budget(cfg);
  for (uint64_t b = 0;; ++b) {
    if (cfg.min_error_blocks == 0) {
      if (b >= base_blocks) break;
    } else {
      const bool met = st.block_errors >= cfg.min_error_blocks && b >= base_blocks;
      if (met || (cfg.max_blocks && b >= cfg.max_blocks)) break;
    }
    const TrialSeed ts{cfg.seed, b};
    const auto x = gen_source(cfg.n, cfg.p0, ts);
    const auto y = apply_bsc(x, cfg.crossover, ts);
    const EncodedPair pair = encode_pair(x, y, sx, sy);
    const JointDecodeResult res = decode_pair(pair.x, pair.y, corr, cfg.m);

    ++st.blocks;
    st.bits += 2 * static_cast<uint64_t>(cfg.n);
    st.payload_bits += pair.x.payload_bits + pair.y.payload_bits;
    rate_acc.add(pair.x.rate() + pair.y.rate());
    const uint64_t diff =
        count_differences(x, res.x_hat) + count_differences(y, res.y_hat);
    if (diff > 0) {
      st.bit_errors += diff;
      ++st.block_errors;
      long fx = first_difference(x, res.x_hat);
      long fy = first_difference(y, res.y_hat);
      if (fx < 0) fx = fy;
      if (fy < 0) fy = fx;
      first_err.add(static_cast<double>(std::min(fx, fy)));
    }
  }
  st.rate_mean = rate_acc.mean();
  st.rate_std = rate_acc.stddev();
  st.first_err_blocks = first_err.count;
  st.first_err_mean = first_err.mean();
  st.first_err_std = first_err.stddev();
  st.elapsed_ms = ms_since(t0);
  return st;
}

TrialStats run_symmetric_variable(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const CorrelationModel corr = CorrelationModel::make(cfg.p0, cfg.crossover);
  const double q = corr.p0y();
  const double hx = binary_entropy(cfg.p0);
  const double hy = binary_entropy(q);
  const double hxy = joint_entropy(cfg.p0, cfg.crossover);
  const double split = cfg.rate_x / (cfg.rate_x + cfg.rate_y);

  TrialStats st;
  Welford rate_acc;
  for (uint32_t r = 0; r < cfg.realizations; ++r) {
    const TrialSeed ts{cfg.seed, r};
    const auto x = gen_source(cfg.n, cfg.p0, ts);
    const auto y = apply_bsc(x, cfg.crossover, ts);
    for (double total = hxy;; total += cfg.rate_step) {
      const double rx = std::min(total * split, hx);
      const double ry = std::min(total - total * split, hy);
      const bool ceiling = rx >= hx && ry >= hy;
      SymmetricAllocation alloc;
      try {
        alloc = allocate_symmetric(cfg.p0, q, cfg.crossover, rx, ry, cfg.n, cfg.t);
      } catch (const Infeasible&) {
        continue;  // a member rate below its overlap cap
      }
      const EncoderSchedule sx =
          build_member_schedule(cfg.n, cfg.t, alloc.kx, cfg.p0, 0);
      const EncoderSchedule sy = build_member_schedule(cfg.n, cfg.t, alloc.ky, q, 1);
      const EncodedPair pair = encode_pair(x, y, sx, sy);
      const JointDecodeResult res = decode_pair(pair.x, pair.y, corr, cfg.m);
      if ((res.x_hat == x && res.y_hat == y) || ceiling) {
        rate_acc.add(pair.x.rate() + pair.y.rate());
        st.payload_bits += pair.x.payload_bits + pair.y.payload_bits;
        if (ceiling) ++st.rate_ceiling_hits;
        if (!(res.x_hat == x && res.y_hat == y)) ++st.block_errors;
        break;
      }
    }
    ++st.blocks;
    st.bits += 2 * static_cast<uint64_t>(cfg.n);
  }
  st.rate_mean = rate_acc.mean();
  st.rate_std = rate_acc.stddev();
  st.elapsed_ms = ms_since(t0);
  return st;
}

std::vector<std::pair<uint32_t, TrialStats>> run_termination_sweep(
    const ExperimentConfig& cfg, const std::vector<uint32_t>& ts) {
  std::vector<std::pair<uint32_t, TrialStats>> out;
  for (uint32_t t : ts) {
    ExperimentConfig point = cfg;
    point.t = t;
    out.emplace_back(t, run_fixed_rate(point));
  }
  return out;
}

std::vector<std::pair<uint32_t, TrialStats>> run_m_sweep(
    const ExperimentConfig& cfg, const std::vector<uint32_t>& ms) {
  std::vector<std::pair<uint32_t, TrialStats>> out;
  for (uint32_t m : ms) {
    ExperimentConfig point = cfg;
    point.m = m;
    out.emplace_back(m, run_fixed_rate(point));
  }
  return out;
}

std::string format_g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void emit_csv(std::ostream& os, const CsvTable& table) {
  for (size_t i = 0; i < table.header.size(); ++i) {
    if (i) os << ',';
    os << table.header[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << '\n';
  }
}

}  // namespace daclab
