#include "daclab/sym_codec.hpp"

#include <algorithm>
#include <numeric>

#include "daclab/errors.hpp"

namespace daclab {

namespace {

constexpr uint32_t kHistRoot = 0xFFFFFFFFu;

struct Candidate {
  CoderState stx;
  CoderState sty;
  double metric;
  uint32_t parent;
  uint8_t xbit, ybit;
};

struct Node {
  CoderState stx;
  CoderState sty;
  double metric;
  uint32_t hist;
};

// interleaved comparison key (x first, then y) for one depth
uint8_t pair_key(uint8_t x, uint8_t y) { return static_cast<uint8_t>(x << 1 | y); }

std::vector<uint8_t> walk_history(const std::vector<uint32_t>& hist,
                                  uint32_t tail, uint32_t depth) {
  std::vector<uint8_t> keys(depth);
  uint32_t at = tail;
  for (uint32_t d = depth; d-- > 0;) {
    keys[d] = static_cast<uint8_t>(hist[at] & 3);
    at = hist[at] >> 2;
  }
  return keys;
}

}  // namespace

std::vector<uint8_t> role_mask(uint32_t n, uint32_t p, uint32_t residue) {
  if (p == 0 || residue >= p) throw InvalidParam("role_mask: residue outside group");
  std::vector<uint8_t> mask(n);
  for (uint32_t i = 0; i < n; ++i) mask[i] = i % p == residue;
  return mask;
}

EncoderSchedule build_member_schedule(uint32_t n, uint32_t t, double k,
                                      double p0, uint8_t role) {
  if (role > 1) throw InvalidParam("build_member_schedule: role must be 0 or 1");
  EncoderSchedule s = build_schedule(n, t, k, p0);
  s.mode = 1;
  s.role = role;
  return s;
}

EncodedPair encode_pair(const std::vector<uint8_t>& x,
                        const std::vector<uint8_t>& y,
                        const EncoderSchedule& sched_x,
                        const EncoderSchedule& sched_y) {
  if (sched_x.mode != 1 || sched_y.mode != 1)
    throw InvalidParam("encode_pair: schedules are not pair members");
  if (sched_x.role == sched_y.role)
    throw RoleViolation("encode_pair: both members claim the same residue");
  if (sched_x.n != sched_y.n || sched_x.t != sched_y.t)
    throw InvalidParam("encode_pair: member geometries differ");
  return {encode(x, sched_x), encode(y, sched_y)};
}

double joint_branch_metric(uint32_t i, int x, int y,
                           const CorrelationModel& corr) {
  if (i % 2 == 0) return corr.lx_given_y[x & 1][y & 1];
  return corr.ly_given_x[x & 1][y & 1];
}

JointDecodeResult decode_pair(const DacBitstream& bx, const DacBitstream& by,
                              const CorrelationModel& corr, uint32_t m) {
  if (m == 0) throw InvalidParam("decode_pair: m must be positive");
  if (bx.mode != 1 || by.mode != 1)
    throw InvalidParam("decode_pair: streams are not pair members");
  if (bx.role == by.role)
    throw RoleViolation("decode_pair: streams claim the same residue");
  if (bx.n != by.n || bx.t != by.t)
    throw InvalidParam("decode_pair: stream geometries differ");

  const EncoderSchedule sx = bx.schedule();
  const EncoderSchedule sy = by.schedule();
  const BitSource px = bx.payload_source();
  const BitSource py = by.payload_source();
  const uint32_t n = bx.n;

  std::vector<Node> frontier;
  std::vector<Candidate> cand;
  std::vector<uint32_t> order;
  std::vector<uint32_t> hist;
  frontier.push_back({decoder_init(px), decoder_init(py), 0.0, kHistRoot});

  JointDecodeResult res;
  res.peak_frontier = 1;

  for (uint32_t i = 0; i < n; ++i) {
    const bool x_active = i % 2 == bx.role;
    cand.clear();
    for (const Node& node : frontier) {
      // the role-inactive stream first: its plan carries no overlap
      const CoderState& sti = x_active ? node.sty : node.stx;
      const EncoderSchedule& schi = x_active ? sy : sx;
      const BitSource& srci = x_active ? py : px;
      const Region ri = test_one_symbol(sti, schi, i);
      if (ri == Region::kAmbiguous)
        throw RoleViolation("decode_pair: inactive stream is ambiguous");
      const int bi = ri == Region::kOne ? 1 : 0;
      CoderState sti2 = sti;
      if (!force_one_symbol(sti2, schi, i, bi, srci)) continue;

      const CoderState& sta = x_active ? node.stx : node.sty;
      const EncoderSchedule& scha = x_active ? sx : sy;
      const BitSource& srca = x_active ? px : py;
      const Region ra = test_one_symbol(sta, scha, i);
      int first = 0, last = 1;
      if (ra == Region::kZero) last = 0;
      if (ra == Region::kOne) first = 1;
      for (int ba = first; ba <= last; ++ba) {
        CoderState sta2 = sta;
        if (!force_one_symbol(sta2, scha, i, ba, srca)) continue;
        const int xb = x_active ? ba : bi;
        const int yb = x_active ? bi : ba;
        const double lam = x_active ? corr.lx_given_y[xb][yb]
                                    : corr.ly_given_x[xb][yb];
        Candidate c{x_active ? sta2 : sti2, x_active ? sti2 : sta2,
                    node.metric + lam, node.hist,
                    static_cast<uint8_t>(xb), static_cast<uint8_t>(yb)};
        cand.push_back(c);
      }
    }
    if (cand.empty())
      throw EmptyFrontier("decode_pair: every path left the codewords");
    res.nodes_expanded += cand.size();

    const size_t keep = std::min<size_t>(cand.size(), m);
    order.resize(cand.size());
    std::iota(order.begin(), order.end(), 0u);
    const auto better = [&cand](uint32_t a, uint32_t b) {
      if (cand[a].metric != cand[b].metric) return cand[a].metric > cand[b].metric;
      return a < b;
    };
    if (keep < cand.size()) {
      // total-order comparator: selection fixes the survivor set exactly
      std::nth_element(order.begin(), order.begin() + static_cast<long>(keep),
                       order.end(), better);
      order.resize(keep);
    }

    frontier.clear();
    for (uint32_t id : order) {
      hist.push_back(cand[id].parent << 2 |
                     static_cast<uint32_t>(pair_key(cand[id].xbit, cand[id].ybit)));
      frontier.push_back({cand[id].stx, cand[id].sty, cand[id].metric,
                          static_cast<uint32_t>(hist.size() - 1)});
    }
    res.peak_frontier =
        std::max(res.peak_frontier, static_cast<uint32_t>(frontier.size()));
  }

  // winner: best survivor pair whose re-encodes reproduce both payloads bit
  // for bit (each stream pins its encoder preimage, as in the asymmetric
  // decoder); survivors that only stay inside the windows stand in when the
  // true pair was pruned. Metric ties resolve toward the smallest key string.
  order.resize(frontier.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&frontier](uint32_t a, uint32_t b) {
                     return frontier[a].metric > frontier[b].metric;
                   });
  std::vector<uint8_t> best;
  std::vector<uint8_t> xs(n), ys(n);
  bool exact = false;
  for (uint32_t id : order) {
    if (exact && frontier[id].metric != res.metric) break;
    auto keys = walk_history(hist, frontier[id].hist, n);
    for (uint32_t i = 0; i < n; ++i) {
      xs[i] = keys[i] >> 1;
      ys[i] = keys[i] & 1;
    }
    const DacBitstream rx = encode(xs, sx);
    if (rx.payload_bits != bx.payload_bits || rx.payload != bx.payload) continue;
    const DacBitstream ry = encode(ys, sy);
    if (ry.payload_bits != by.payload_bits || ry.payload != by.payload) continue;
    if (!exact || keys < best) {
      res.metric = frontier[id].metric;
      best = std::move(keys);
    }
    exact = true;
  }
  if (!exact) {
    size_t lead = 0;
    for (size_t j = 1; j < frontier.size(); ++j) {
      if (frontier[j].metric > frontier[lead].metric) lead = j;
    }
    res.metric = frontier[lead].metric;
    best = walk_history(hist, frontier[lead].hist, n);
    for (size_t j = 0; j < frontier.size(); ++j) {
      if (j == lead || frontier[j].metric != res.metric) continue;
      auto keys = walk_history(hist, frontier[j].hist, n);
      if (keys < best) best = std::move(keys);
    }
  }
  res.x_hat.resize(n);
  res.y_hat.resize(n);
  for (uint32_t i = 0; i < n; ++i) {
    res.x_hat[i] = best[i] >> 1;
    res.y_hat[i] = best[i] & 1;
  }
  return res;
}

}  // namespace daclab
