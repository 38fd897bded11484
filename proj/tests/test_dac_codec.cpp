#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "daclab/corr_models.hpp"
#include "daclab/dac_codec.hpp"
#include "daclab/errors.hpp"
#include "daclab/rate_alloc.hpp"

using namespace daclab;

namespace {

double path_metric(const std::vector<uint8_t>& x, const std::vector<uint8_t>& y,
                   const CorrelationModel& corr) {
  double m = 0.0;
  for (size_t i = 0; i < x.size(); ++i) m += corr.lx_given_y[x[i]][y[i]];
  return m;
}

}  // namespace

TEST_CASE("probability quantization") {
  CHECK(quantize_p0(0.5) == 32768);
  CHECK(quantize_p0(0.9) == 58982);
  CHECK(quantize_p0(1e-9) == 1);       // clamped away from zero
  CHECK(quantize_p0(0.9999999) == 65535);
  CHECK(quantize_k(0.0) == 0);
  CHECK(quantize_k(100.0 / 185.0) == 35425);
  CHECK_THROWS_AS(quantize_p0(0.0), InvalidParam);
  CHECK_THROWS_AS(quantize_k(1.0), InvalidParam);
}

TEST_CASE("schedule with no overlap is the plain source law everywhere") {
  const auto s = build_schedule(200, 15, 0.0, 0.5);
  for (uint32_t i = 0; i < 200; ++i) {
    CHECK(s.k_at(i) == 0.0);
    CHECK_FALSE(s.overlapped_at(i));
    CHECK(s.probs_at(i).first == 32768);
    CHECK(s.probs_at(i).second == 32768);
  }
}

TEST_CASE("schedule widens every active index before the tail") {
  const double k = 100.0 / 185.0;
  const auto s = build_schedule(200, 15, k, 0.5);
  CHECK(s.probs_at(0).first == 47662);  // 0.5^(1-k) * 2^16 rounded
  CHECK(s.probs_at(0) == s.probs_at(184));
  CHECK(s.probs_at(185).first == 32768);
  CHECK(s.probs_at(199).first == 32768);
  for (uint32_t i = 0; i < 200; ++i)
    CHECK(s.overlapped_at(i) == (i < 185));

  // termination-compensated block rate lands on 0.5 bps
  const double kq = s.k_q / 65536.0;
  const double rate = (185.0 * (1.0 - kq) + 15.0) / 200.0;
  CHECK(rate == doctest::Approx(0.5).epsilon(1e-4));

  const auto half = build_schedule(200, 15, 0.5, 0.5);
  CHECK(half.wide0_q == 46341);
  CHECK(half.wide1_q == 46341);
}

TEST_CASE("schedule honours an explicit active mask") {
  std::vector<uint8_t> mask(8, 0);
  for (uint32_t i = 0; i < 8; i += 2) mask[i] = 1;
  const auto s = build_schedule(8, 0, 0.5, 0.9, mask);
  CHECK(s.probs_at(0).first / 65536.0 == doctest::Approx(0.9487).epsilon(0.0005));
  CHECK(s.probs_at(1).first == 58982);
  CHECK(s.probs_at(2).first == s.probs_at(0).first);
  CHECK(s.overlapped_at(4));
  CHECK_FALSE(s.overlapped_at(5));
}

TEST_CASE("schedule construction rejects bad parameters") {
  CHECK_THROWS_AS(build_schedule(0, 0, 0.0, 0.5), InvalidParam);
  CHECK_THROWS_AS(build_schedule(10, 11, 0.0, 0.5), InvalidParam);
  CHECK_THROWS_AS(build_schedule(10, 0, 1.0, 0.5), InvalidParam);
  CHECK_THROWS_AS(build_schedule(10, 0, -0.1, 0.5), InvalidParam);
  CHECK_THROWS_AS(build_schedule(10, 0, 0.5, 0.0), InvalidParam);
  CHECK_THROWS_AS(build_schedule(10, 0, 0.5, 0.5, std::vector<uint8_t>(9, 1)),
                  InvalidParam);
  CHECK_THROWS_AS(build_schedule_probs(10, 0, 0.4, 0.4, 0.5), InvalidParam);
}

TEST_CASE("a run of near-certain symbols compresses to a few bits") {
  const std::vector<uint8_t> zeros(200, 0);
  const auto bs = encode(zeros, build_schedule(200, 0, 0.0, 0.999));
  CHECK(bs.payload_bits <= 12);
}

TEST_CASE("half overlap halves the balanced payload") {
  const auto x = gen_source(1000, 0.5, TrialSeed{31, 0});
  const auto bs = encode(x, build_schedule(1000, 0, 0.5, 0.5));
  CHECK(bs.payload_bits >= 460);
  CHECK(bs.payload_bits <= 540);
}

TEST_CASE("overlap-free streams decode without side information") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const uint32_t n = 1 + rng() % 400;
    const double p0 = 0.05 + 0.9 * (rng() % 1000) / 1000.0;
    const auto x = gen_source(n, p0, TrialSeed{50, static_cast<uint64_t>(trial)});
    const auto bs = encode(x, build_schedule(n, 0, 0.0, p0));
    CHECK(decode_lossless(bs) == x);
  }
}

TEST_CASE("payload rate follows the widened ideal length") {
  for (const double p0 : {0.5, 0.9}) {
    for (const double k : {0.0, 0.3}) {
      uint64_t bits = 0;
      const uint32_t n = 10000, blocks = 20;
      const auto sched = build_schedule(n, 0, k, p0);
      for (uint32_t b = 0; b < blocks; ++b)
        bits += encode(gen_source(n, p0, TrialSeed{60, b}), sched).payload_bits;
      const double rate = static_cast<double>(bits) / (n * blocks);
      CHECK(std::abs(rate - predicted_rate_k(p0, k)) < 0.02);
    }
  }
}

TEST_CASE("container serialization round trips") {
  const auto x = gen_source(300, 0.8, TrialSeed{70, 0});
  auto bs = encode(x, build_schedule(300, 15, 0.4, 0.8));
  const auto raw = bs.serialize();
  const auto back = DacBitstream::parse(raw);
  CHECK(back.version == bs.version);
  CHECK(back.mode == bs.mode);
  CHECK(back.n == bs.n);
  CHECK(back.t == bs.t);
  CHECK(back.p0_q == bs.p0_q);
  CHECK(back.k_q == bs.k_q);
  CHECK(back.payload_bits == bs.payload_bits);
  CHECK(back.payload == bs.payload);

  const auto s1 = bs.schedule();
  const auto s2 = back.schedule();
  CHECK(s1.base0_q == s2.base0_q);
  CHECK(s1.wide0_q == s2.wide0_q);
  CHECK(s1.wide1_q == s2.wide1_q);
}

TEST_CASE("rebuilt schedules are bit-exact against the encoder's") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const uint32_t n = 1 + rng() % 300;
    const uint32_t t = rng() % (n + 1);
    const double k = (rng() % 990) / 1000.0;
    const double p0 = 0.02 + 0.96 * (rng() % 1000) / 999.0;
    const auto sched = build_schedule(n, t, k, p0);
    const auto x = gen_source(n, p0, TrialSeed{80, static_cast<uint64_t>(trial)});
    const auto rebuilt = encode(x, sched).schedule();
    CHECK(rebuilt.base0_q == sched.base0_q);
    CHECK(rebuilt.base1_q == sched.base1_q);
    CHECK(rebuilt.wide0_q == sched.wide0_q);
    CHECK(rebuilt.wide1_q == sched.wide1_q);
    CHECK(rebuilt.t == sched.t);
  }
}

TEST_CASE("malformed containers are rejected") {
  const auto x = gen_source(64, 0.5, TrialSeed{90, 0});
  const auto raw = encode(x, build_schedule(64, 4, 0.3, 0.5)).serialize();

  SUBCASE("bad magic") {
    auto bad = raw;
    bad[0] ^= 0xFF;
    CHECK_THROWS_AS(DacBitstream::parse(bad), ParseError);
  }
  SUBCASE("unsupported version") {
    auto bad = raw;
    bad[4] = 9;
    CHECK_THROWS_AS(DacBitstream::parse(bad), ParseError);
  }
  SUBCASE("truncation at every prefix length") {
    for (size_t len = 0; len < raw.size(); ++len) {
      std::vector<uint8_t> cut(raw.begin(), raw.begin() + len);
      CHECK_THROWS_AS(DacBitstream::parse(cut), ParseError);
    }
  }
  SUBCASE("trailing garbage") {
    auto bad = raw;
    bad.push_back(0);
    CHECK_THROWS_AS(DacBitstream::parse(bad), ParseError);
  }
  SUBCASE("empty buffer") {
    CHECK_THROWS_AS(DacBitstream::parse({}), ParseError);
  }
}

TEST_CASE("symbol probing distinguishes the three regions") {
  // n=1, p0=0.5, k=0.9: the widened pair covers most of the interval, so of
  // the four 2-bit codeword windows one pins symbol 0 and three stay open.
  const auto sched = build_schedule(1, 0, 0.9, 0.5);
  int zero = 0, amb = 0, one = 0;
  for (int w = 0; w < 4; ++w) {
    BitSource src({static_cast<uint8_t>(w << 6)}, 2);
    const CoderState s = decoder_init(src);
    switch (test_one_symbol(s, sched, 0)) {
      case Region::kZero: ++zero; break;
      case Region::kAmbiguous: ++amb; break;
      case Region::kOne: ++one; break;
    }
  }
  CHECK(zero == 1);
  CHECK(amb == 3);
  CHECK(one == 0);
}

TEST_CASE("probing an overlap-free schedule never reports ambiguity") {
  std::mt19937_64 rng(44);
  const auto sched = build_schedule(32, 0, 0.0, 0.7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = gen_source(32, 0.7, TrialSeed{91, static_cast<uint64_t>(trial)});
    const auto bs = encode(x, sched);
    const auto src = bs.payload_source();
    CoderState s = decoder_init(src);
    for (uint32_t i = 0; i < 32; ++i) {
      const Region r = test_one_symbol(s, sched, i);
      REQUIRE(r != Region::kAmbiguous);
      REQUIRE(r == (x[i] ? Region::kOne : Region::kZero));
      REQUIRE(force_one_symbol(s, sched, i, x[i], src));
    }
  }
}

TEST_CASE("forcing both branches from an ambiguous window keeps the value") {
  const auto sched = build_schedule(4, 0, 0.8, 0.5);
  const std::vector<uint8_t> x{0, 1, 1, 0};
  const auto bs = encode(x, sched);
  const auto src = bs.payload_source();
  const CoderState root = decoder_init(src);
  REQUIRE(test_one_symbol(root, sched, 0) == Region::kAmbiguous);
  CoderState a = root, b = root;
  CHECK(force_one_symbol(a, sched, 0, 0, src));
  CHECK(force_one_symbol(b, sched, 0, 1, src));
  CHECK(a.low <= a.value);
  CHECK(a.value < a.low + a.range);
  CHECK(b.low <= b.value);
  CHECK(b.value < b.low + b.range);
  CHECK(a.low != b.low);
}

TEST_CASE("no branching inside the termination tail") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    const uint32_t n = 30, t = 10;
    const auto sched = build_schedule(n, t, 0.7, 0.5);
    const auto x = gen_source(n, 0.5, TrialSeed{92, static_cast<uint64_t>(trial)});
    const auto bs = encode(x, sched);
    const auto src = bs.payload_source();
    CoderState s = decoder_init(src);
    for (uint32_t i = 0; i < n; ++i) {
      if (i >= n - t) REQUIRE(test_one_symbol(s, sched, i) != Region::kAmbiguous);
      REQUIRE(force_one_symbol(s, sched, i, x[i], src));
    }
  }
}

TEST_CASE("branch metric mirrors the posterior table") {
  const auto corr = CorrelationModel::make(0.9, 0.121);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      CHECK(branch_metric(x, y, corr) == corr.lx_given_y[x][y]);
}

TEST_CASE("overlap-free decode ignores the side information") {
  const auto x = gen_source(100, 0.5, TrialSeed{93, 0});
  const auto y = gen_source(100, 0.5, TrialSeed{94, 0});  // unrelated
  const auto bs = encode(x, build_schedule(100, 0, 0.0, 0.5));
  const auto corr = CorrelationModel::make(0.5, 0.2);
  const auto res = decode(bs, y, corr, 1);
  CHECK(res.x_hat == x);
  CHECK(res.peak_frontier == 1);
}

TEST_CASE("decode validates its inputs") {
  const auto x = gen_source(16, 0.5, TrialSeed{95, 0});
  const auto bs = encode(x, build_schedule(16, 0, 0.5, 0.5));
  const auto corr = CorrelationModel::make(0.5, 0.1);
  CHECK_THROWS_AS(decode(bs, std::vector<uint8_t>(15, 0), corr, 64), InvalidParam);
  CHECK_THROWS_AS(decode(bs, std::vector<uint8_t>(16, 0), corr, 0), InvalidParam);
  CHECK_THROWS_AS(decode_lossless(bs), InvalidParam);
}

TEST_CASE("winner metric equals the rescored output path") {
  std::mt19937_64 rng(46);
  const auto corr = CorrelationModel::make(0.5, 0.1);
  for (int trial = 0; trial < 50; ++trial) {
    const uint32_t n = 40;
    const auto x = gen_source(n, 0.5, TrialSeed{96, static_cast<uint64_t>(trial)});
    const auto y = apply_bsc(x, 0.1, TrialSeed{96, static_cast<uint64_t>(trial)});
    const auto bs = encode(x, build_schedule(n, 5, 0.5, 0.5));
    const auto res = decode(bs, y, corr, 64);
    CHECK(res.metric <= 0.0);
    CHECK(res.metric == path_metric(res.x_hat, y, corr));
    // the true path is consistent, so the winner can never score below it
    CHECK(res.metric >= path_metric(x, y, corr));
  }
}

TEST_CASE("exhaustive oracle agreement on small blocks") {
  uint64_t trial = 0;
  for (const double k : {0.5, 0.8}) {
    for (const double p : {0.05, 0.2}) {
      for (int rep = 0; rep < 50; ++rep, ++trial) {
        const uint32_t n = 10;
        const auto x = gen_source(n, 0.5, TrialSeed{101, trial});
        const auto y = apply_bsc(x, p, TrialSeed{101, trial});
        const auto corr = CorrelationModel::make(0.5, p);
        const auto bs = encode(x, build_schedule(n, 0, k, 0.5));
        const auto oracle = map_oracle(bs, y, corr);
        const auto res = decode(bs, y, corr, 1024);
        REQUIRE(res.x_hat == oracle.x_map);
        REQUIRE(res.metric == oracle.metric);
        REQUIRE(oracle.consistent >= 1);
      }
    }
  }
}

TEST_CASE("medium frontier still matches the oracle at n = 8") {
  for (uint64_t trial = 0; trial < 100; ++trial) {
    const uint32_t n = 8;
    const auto x = gen_source(n, 0.5, TrialSeed{102, trial});
    const auto y = apply_bsc(x, 0.1, TrialSeed{102, trial});
    const auto corr = CorrelationModel::make(0.5, 0.1);
    const auto bs = encode(x, build_schedule(n, 0, 0.5, 0.5));
    const auto res = decode(bs, y, corr, 256);
    const auto oracle = map_oracle(bs, y, corr);
    REQUIRE(res.x_hat == oracle.x_map);
  }
}

TEST_CASE("oracle on an overlap-free stream finds the single survivor") {
  const auto x = gen_source(12, 0.7, TrialSeed{103, 0});
  const auto y = apply_bsc(x, 0.3, TrialSeed{103, 0});
  const auto corr = CorrelationModel::make(0.7, 0.3);
  const auto bs = encode(x, build_schedule(12, 0, 0.0, 0.7));
  const auto oracle = map_oracle(bs, y, corr);
  CHECK(oracle.consistent == 1);
  CHECK(oracle.x_map == x);
}

TEST_CASE("oracle recovers the input under perfect side information") {
  for (uint64_t trial = 0; trial < 20; ++trial) {
    const uint32_t n = 4;
    const auto x = gen_source(n, 0.5, TrialSeed{104, trial});
    const auto corr = CorrelationModel::make(0.5, 0.0);
    const auto bs = encode(x, build_schedule(n, 0, 0.9, 0.5));
    const auto oracle = map_oracle(bs, x, corr);
    CHECK(oracle.x_map == x);
  }
}

TEST_CASE("oracle refuses blocks beyond the exhaustive limit") {
  const auto x = gen_source(21, 0.5, TrialSeed{105, 0});
  const auto bs = encode(x, build_schedule(21, 0, 0.5, 0.5));
  const auto corr = CorrelationModel::make(0.5, 0.1);
  CHECK_THROWS_AS(map_oracle(bs, x, corr), InvalidParam);
}
