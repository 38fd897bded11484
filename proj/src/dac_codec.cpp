#include "daclab/dac_codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include "daclab/errors.hpp"

namespace daclab {

namespace {

constexpr uint32_t kProbOne = FixedPointParams::kProbOne;
constexpr double kProbScale = 65536.0;
constexpr char kMagic[4] = {'D', 'A', 'C', '1'};

uint32_t quantize_prob(double v) {
  long q = std::lround(v * kProbScale);
  if (q < 1) q = 1;
  if (q > static_cast<long>(kProbOne)) q = kProbOne;
  return static_cast<uint32_t>(q);
}

EncoderSchedule make_schedule_q(uint32_t n, uint32_t t, uint16_t p0_q,
                                uint16_t k_q, uint8_t mode, uint8_t role,
                                std::optional<std::vector<uint8_t>> active) {
  if (n == 0) throw InvalidParam("schedule: n must be positive");
  if (t > n) throw InvalidParam("schedule: t exceeds n");
  if (p0_q == 0) throw InvalidParam("schedule: p0_q must be positive");
  if (active && active->size() != n)
    throw InvalidParam("schedule: active mask length differs from n");

  EncoderSchedule s;
  s.n = n;
  s.t = static_cast<uint16_t>(t);
  s.p0_q = p0_q;
  s.k_q = k_q;
  s.mode = mode;
  s.role = role;
  s.active = std::move(active);
  s.base0_q = p0_q;
  s.base1_q = kProbOne - p0_q;
  if (k_q == 0) {
    s.wide0_q = s.base0_q;
    s.wide1_q = s.base1_q;
  } else {
    const double p0 = p0_q / kProbScale;
    const double e = 1.0 - k_q / kProbScale;
    s.wide0_q = quantize_prob(std::pow(p0, e));
    s.wide1_q = quantize_prob(std::pow(1.0 - p0, e));
    if (s.wide0_q + s.wide1_q < kProbOne) s.wide0_q = kProbOne - s.wide1_q;
  }
  return s;
}

void be_put16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

void be_put32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

struct ByteReader {
  const std::vector<uint8_t>& raw;
  size_t pos = 0;

  uint8_t u8() {
    if (pos >= raw.size()) throw ParseError("container: truncated header");
    return raw[pos++];
  }
  uint16_t u16() { return static_cast<uint16_t>(u8() << 8 | u8()); }
  uint32_t u32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | u8();
    return v;
  }
};

// packed decode-tree history record: parent index in the upper bits, the
// decoded symbol (pair) in the lower ones
constexpr uint32_t kHistRoot = 0xFFFFFFFFu;

struct Candidate {
  CoderState st;
  double metric;
  uint32_t parent;
  uint8_t bit;
};

struct Node {
  CoderState st;
  double metric;
  uint32_t hist;
};

std::vector<uint8_t> walk_history(const std::vector<uint32_t>& hist,
                                  uint32_t tail, uint32_t depth) {
  std::vector<uint8_t> path(depth);
  uint32_t at = tail;
  for (uint32_t d = depth; d-- > 0;) {
    path[d] = static_cast<uint8_t>(hist[at] & 1);
    at = hist[at] >> 1;
  }
  return path;
}

// The encoder is deterministic, so the stream identifies its preimages
// exactly: a path explains the codeword iff re-encoding it reproduces every
// payload bit. Window consistency alone admits extra paths whose interval
// merely contains the codeword point (padding included), and with a skewed
// source those impostors can outscore the true path on the posterior metric.
bool reencodes_to_payload(const std::vector<uint8_t>& path,
                          const EncoderSchedule& sched,
                          const BitSource& payload) {
  BitSink sink;
  CoderState st;
  for (uint32_t i = 0; i < sched.n; ++i) {
    const auto [pt0, pt1] = sched.probs_at(i);
    encode_select(st, subdivide(st, pt0, pt1), path[i] & 1, sink);
    if (sink.size_bits() > payload.size_bits()) return false;
  }
  finalize(st, sink);
  if (sink.size_bits() != payload.size_bits()) return false;
  const std::vector<uint8_t>& bytes = sink.bytes();
  for (uint64_t p = 0; p < sink.size_bits(); ++p) {
    if (((bytes[p >> 3] >> (7 - (p & 7))) & 1) != payload.bit_at(p)) return false;
  }
  return true;
}

}  // namespace

uint16_t quantize_p0(double p0) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw InvalidParam("quantize_p0: p0 outside (0, 1)");
  long q = std::lround(p0 * kProbScale);
  if (q < 1) q = 1;
  if (q > 65535) q = 65535;
  return static_cast<uint16_t>(q);
}

uint16_t quantize_k(double k) {
  if (k < 0.0 || k >= 1.0) throw InvalidParam("quantize_k: k outside [0, 1)");
  long q = std::lround(k * kProbScale);
  if (q > 65535) q = 65535;
  return static_cast<uint16_t>(q);
}

EncoderSchedule build_schedule(uint32_t n, uint32_t t, double k, double p0,
                               std::optional<std::vector<uint8_t>> active) {
  return make_schedule_q(n, t, quantize_p0(p0), quantize_k(k), 0, 0,
                         std::move(active));
}

EncoderSchedule build_schedule_probs(uint32_t n, uint32_t t, double pt0,
                                     double pt1, double p0,
                                     std::optional<std::vector<uint8_t>> active) {
  if (!(pt0 > 0.0 && pt0 <= 1.0 && pt1 > 0.0 && pt1 <= 1.0))
    throw InvalidParam("schedule: widened probabilities outside (0, 1]");
  if (pt0 + pt1 < 1.0)
    throw InvalidParam("schedule: widened probabilities sum below 1");
  EncoderSchedule s =
      make_schedule_q(n, t, quantize_p0(p0), 0, 0, 0, std::move(active));
  s.wide0_q = quantize_prob(pt0);
  s.wide1_q = quantize_prob(pt1);
  if (s.wide0_q + s.wide1_q < kProbOne) s.wide0_q = kProbOne - s.wide1_q;
  return s;
}

std::vector<uint8_t> DacBitstream::serialize() const {
  std::vector<uint8_t> out;
  out.reserve(21 + payload.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(version);
  out.push_back(mode);
  be_put32(out, n);
  be_put16(out, t);
  be_put16(out, p0_q);
  be_put16(out, k_q);
  be_put32(out, payload_bits);
  if (mode == 1) out.push_back(role);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

DacBitstream DacBitstream::parse(const std::vector<uint8_t>& raw) {
  ByteReader r{raw};
  for (char c : kMagic) {
    if (r.u8() != static_cast<uint8_t>(c)) throw ParseError("container: bad magic");
  }
  DacBitstream bs;
  bs.version = r.u8();
  if (bs.version != 1) throw ParseError("container: unsupported version");
  bs.mode = r.u8();
  if (bs.mode > 1) throw ParseError("container: unknown mode");
  bs.n = r.u32();
  bs.t = r.u16();
  bs.p0_q = r.u16();
  bs.k_q = r.u16();
  bs.payload_bits = r.u32();
  if (bs.mode == 1) {
    bs.role = r.u8();
    if (bs.role > 1) throw ParseError("container: role out of range");
  }
  if (bs.n == 0) throw ParseError("container: empty block");
  if (bs.t > bs.n) throw ParseError("container: termination longer than block");
  if (bs.p0_q == 0) throw ParseError("container: zero source probability");
  const size_t want = (static_cast<size_t>(bs.payload_bits) + 7) / 8;
  if (raw.size() - r.pos != want) throw ParseError("container: payload size mismatch");
  bs.payload.assign(raw.begin() + static_cast<long>(r.pos), raw.end());
  return bs;
}

EncoderSchedule DacBitstream::schedule() const {
  return make_schedule_q(n, t, p0_q, k_q, mode, role, std::nullopt);
}

DacBitstream encode(const std::vector<uint8_t>& x, const EncoderSchedule& sched) {
  if (x.size() != sched.n) throw InvalidParam("encode: input length differs from n");
  BitSink sink;
  CoderState st;
  for (uint32_t i = 0; i < sched.n; ++i) {
    const auto [pt0, pt1] = sched.probs_at(i);
    encode_select(st, subdivide(st, pt0, pt1), x[i] & 1, sink);
  }
  finalize(st, sink);

  DacBitstream bs;
  bs.mode = sched.mode;
  bs.role = sched.role;
  bs.n = sched.n;
  bs.t = sched.t;
  bs.p0_q = sched.p0_q;
  bs.k_q = sched.k_q;
  if (sink.size_bits() > std::numeric_limits<uint32_t>::max())
    throw InvalidParam("encode: payload exceeds the container bit counter");
  bs.payload_bits = static_cast<uint32_t>(sink.size_bits());
  bs.payload = sink.take_bytes();
  return bs;
}

Region test_one_symbol(const CoderState& s, const EncoderSchedule& sched,
                       uint32_t i) {
  const auto [pt0, pt1] = sched.probs_at(i);
  return classify(s, subdivide(s, pt0, pt1));
}

bool force_one_symbol(CoderState& s, const EncoderSchedule& sched, uint32_t i,
                      int symbol, const BitSource& src) {
  const auto [pt0, pt1] = sched.probs_at(i);
  return decoder_select(s, subdivide(s, pt0, pt1), symbol, src);
}

double branch_metric(int x, int y, const CorrelationModel& corr) {
  return corr.lx_given_y[x & 1][y & 1];
}

DecodeResult decode_with_schedule(const BitSource& payload,
                                  const EncoderSchedule& sched,
                                  const std::vector<uint8_t>& y,
                                  const CorrelationModel& corr, uint32_t m) {
  if (m == 0) throw InvalidParam("decode: m must be positive");
  if (y.size() != sched.n)
    throw InvalidParam("decode: side information length differs from n");

  const double lam[2][2] = {
      {branch_metric(0, 0, corr), branch_metric(0, 1, corr)},
      {branch_metric(1, 0, corr), branch_metric(1, 1, corr)}};

  std::vector<Node> frontier;
  std::vector<Candidate> cand;
  std::vector<uint32_t> order;
  std::vector<uint32_t> hist;
  frontier.push_back({decoder_init(payload), 0.0, kHistRoot});

  DecodeResult res;
  res.peak_frontier = 1;

  for (uint32_t i = 0; i < sched.n; ++i) {
    const auto [pt0, pt1] = sched.probs_at(i);
    const int ybit = y[i] & 1;
    cand.clear();
    for (const Node& node : frontier) {
      const SubdivisionPlan plan = subdivide(node.st, pt0, pt1);
      const Region region = classify(node.st, plan);
      int first = 0, last = 1;
      if (region == Region::kZero) last = 0;
      if (region == Region::kOne) first = 1;
      for (int b = first; b <= last; ++b) {
        Candidate c{node.st, node.metric + lam[b][ybit], node.hist,
                    static_cast<uint8_t>(b)};
        if (decoder_select(c.st, plan, b, payload)) cand.push_back(c);
      }
    }
    if (cand.empty()) throw EmptyFrontier("decode: every path left the codeword");
    res.nodes_expanded += cand.size();

    const size_t keep = std::min<size_t>(cand.size(), m);
    order.resize(cand.size());
    std::iota(order.begin(), order.end(), 0u);
    const auto better = [&cand](uint32_t a, uint32_t b) {
      if (cand[a].metric != cand[b].metric) return cand[a].metric > cand[b].metric;
      return a < b;
    };
    if (keep < cand.size()) {
      // the comparator is a total order, so selection alone pins the exact
      // survivor set; the frontier itself needs no sorted layout
      std::nth_element(order.begin(), order.begin() + static_cast<long>(keep),
                       order.end(), better);
      order.resize(keep);
    }

    frontier.clear();
    for (uint32_t id : order) {
      hist.push_back(cand[id].parent << 1 | cand[id].bit);
      frontier.push_back({cand[id].st, cand[id].metric,
                          static_cast<uint32_t>(hist.size() - 1)});
    }
    res.peak_frontier =
        std::max(res.peak_frontier, static_cast<uint32_t>(frontier.size()));
  }

  // winner: best survivor that re-encodes to the payload, scanning in metric
  // order so the usual case costs one re-encode; survivors that only stay
  // inside the window stand in when the true path was pruned. Exact metric
  // ties resolve lexicographically either way.
  order.resize(frontier.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&frontier](uint32_t a, uint32_t b) {
                     return frontier[a].metric > frontier[b].metric;
                   });
  bool exact = false;
  for (uint32_t id : order) {
    if (exact && frontier[id].metric != res.metric) break;
    auto path = walk_history(hist, frontier[id].hist, sched.n);
    if (!reencodes_to_payload(path, sched, payload)) continue;
    if (!exact || path < res.x_hat) {
      res.metric = frontier[id].metric;
      res.x_hat = std::move(path);
    }
    exact = true;
  }
  if (!exact) {
    size_t best = 0;
    for (size_t j = 1; j < frontier.size(); ++j) {
      if (frontier[j].metric > frontier[best].metric) best = j;
    }
    res.metric = frontier[best].metric;
    res.x_hat = walk_history(hist, frontier[best].hist, sched.n);
    for (size_t j = 0; j < frontier.size(); ++j) {
      if (j == best || frontier[j].metric != res.metric) continue;
      auto path = walk_history(hist, frontier[j].hist, sched.n);
      if (path < res.x_hat) res.x_hat = std::move(path);
    }
  }
  return res;
}

DecodeResult decode(const DacBitstream& bs, const std::vector<uint8_t>& y,
                    const CorrelationModel& corr, uint32_t m) {
  return decode_with_schedule(bs.payload_source(), bs.schedule(), y, corr, m);
}

std::vector<uint8_t> decode_lossless(const DacBitstream& bs) {
  if (bs.k_q != 0 || bs.mode != 0)
    throw InvalidParam("decode_lossless: stream carries overlap");
  const EncoderSchedule sched = bs.schedule();
  const BitSource payload = bs.payload_source();
  CoderState st = decoder_init(payload);
  std::vector<uint8_t> x(sched.n);
  for (uint32_t i = 0; i < sched.n; ++i) {
    const auto [pt0, pt1] = sched.probs_at(i);
    const SubdivisionPlan plan = subdivide(st, pt0, pt1);
    const int b = classify(st, plan) == Region::kOne ? 1 : 0;
    if (!decoder_select(st, plan, b, payload))
      throw EmptyFrontier("decode_lossless: window left the interval");
    x[i] = static_cast<uint8_t>(b);
  }
  return x;
}

OracleResult map_oracle(const DacBitstream& bs, const std::vector<uint8_t>& y,
                        const CorrelationModel& corr) {
  const EncoderSchedule sched = bs.schedule();
  const uint32_t n = sched.n;
  if (n > 20) throw InvalidParam("map_oracle: n above the exhaustive limit");
  if (y.size() != n)
    throw InvalidParam("map_oracle: side information length differs from n");

  const double lam[2][2] = {
      {branch_metric(0, 0, corr), branch_metric(0, 1, corr)},
      {branch_metric(1, 0, corr), branch_metric(1, 1, corr)}};

  const BitSource payload = bs.payload_source();
  const CoderState root = decoder_init(payload);

  OracleResult res;
  res.metric = -std::numeric_limits<double>::infinity();
  double loose_metric = -std::numeric_limits<double>::infinity();
  std::vector<uint8_t> loose_map;
  std::vector<uint8_t> bits(n);
  bool exact = false;
  for (uint64_t u = 0; u < uint64_t{1} << n; ++u) {
    CoderState st = root;
    double metric = 0.0;
    bool ok = true;
    for (uint32_t i = 0; i < n && ok; ++i) {
      const int b = static_cast<int>(u >> (n - 1 - i)) & 1;
      bits[i] = static_cast<uint8_t>(b);
      ok = force_one_symbol(st, sched, i, b, payload);
      metric += lam[b][y[i] & 1];
    }
    if (!ok) continue;
    ++res.consistent;
    if (metric > loose_metric) {
      loose_metric = metric;
      loose_map = bits;
    }
    // ascending enumeration keeps ties at the lexicographically smallest
    if (metric > res.metric && reencodes_to_payload(bits, sched, payload)) {
      res.metric = metric;
      res.x_map = bits;
      exact = true;
    }
  }
  if (!exact) {
    res.metric = loose_metric;
    res.x_map = std::move(loose_map);
  }
  return res;
}

}  // namespace daclab
