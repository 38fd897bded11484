// daclab: distributed arithmetic coding workbench for correlated binary
// sources. Subcommands: encode, decode, decode-joint, allocate, experiment.
// Exit codes: 0 success, 2 usage or malformed input, 3 file I/O failure,
// 4 decode failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "daclab/errors.hpp"
#include "daclab/harness.hpp"
#include "daclab/presets.hpp"
#include "daclab/rate_alloc.hpp"
#include "daclab/sym_codec.hpp"

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<uint8_t> data{std::istreambuf_iterator<char>(in),
                            std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("read failed on " + path);
  return data;
}

void write_file(const std::string& path, const std::vector<uint8_t>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed on " + path);
}

// Bit files: 8-byte big-endian bit count, then the bits packed MSB-first.
std::vector<uint8_t> unpack_bits(const std::vector<uint8_t>& raw) {
  if (raw.size() < 8) throw daclab::ParseError("bit file shorter than its length prefix");
  uint64_t nbits = 0;
  for (int i = 0; i < 8; ++i) nbits = nbits << 8 | raw[i];
  if ((nbits + 7) / 8 != raw.size() - 8)
    throw daclab::ParseError("bit file length prefix disagrees with its size");
  std::vector<uint8_t> bits(nbits);
  for (uint64_t i = 0; i < nbits; ++i)
    bits[i] = (raw[8 + (i >> 3)] >> (7 - (i & 7))) & 1;
  return bits;
}

std::vector<uint8_t> pack_bits(const std::vector<uint8_t>& bits) {
  std::vector<uint8_t> raw(8 + (bits.size() + 7) / 8, 0);
  const uint64_t nbits = bits.size();
  for (int i = 0; i < 8; ++i) raw[i] = static_cast<uint8_t>(nbits >> (56 - 8 * i));
  for (uint64_t i = 0; i < nbits; ++i)
    if (bits[i]) raw[8 + (i >> 3)] |= static_cast<uint8_t>(0x80u >> (i & 7));
  return raw;
}

struct CommonOpts {
  uint32_t n = 200;
  uint32_t t = 15;
  uint32_t m = 2048;
  double p0 = 0.5;
  std::optional<double> k;
  std::optional<double> crossover;
  std::optional<double> hxy;   // conditional entropy H(X|Y)
  std::optional<double> rate;
  std::optional<double> mu;
  uint64_t seed = 1;
};

double resolve_crossover(const CommonOpts& o) {
  if (o.crossover) return *o.crossover;
  if (o.hxy) return daclab::crossover_for_cond_entropy(o.p0, *o.hxy);
  throw daclab::InvalidParam("need --crossover or --hxy");
}

double resolve_k(const CommonOpts& o) {
  if (o.k) return *o.k;
  if (o.rate) return daclab::solve_k(o.p0, *o.rate, o.n, o.t);
  if (o.mu) {
    const auto a =
        daclab::allocate_margin(o.p0, resolve_crossover(o), *o.mu, o.n, o.t);
    return a.k;
  }
  throw daclab::InvalidParam("need --k, --rate or --mu");
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_model) {
  cmd->add_option("--n", o.n, "block length")->envname("DACLAB_N");
  cmd->add_option("--t", o.t, "termination symbols")->envname("DACLAB_T");
  cmd->add_option("--m", o.m, "decoder frontier width")->envname("DACLAB_M");
  cmd->add_option("--p0", o.p0, "source probability of 0")->envname("DACLAB_P0");
  cmd->add_option("--k", o.k, "overlap exponent");
  cmd->add_option("--rate", o.rate, "target rate, bits per symbol");
  cmd->add_option("--mu", o.mu, "rate margin over H(X|Y)");
  cmd->add_option("--seed", o.seed, "master seed")->envname("DACLAB_SEED");
  if (with_model) {
    cmd->add_option("--crossover", o.crossover, "correlation crossover probability")
        ->envname("DACLAB_CROSSOVER");
    cmd->add_option("--hxy", o.hxy, "conditional entropy H(X|Y)")
        ->envname("DACLAB_HXY");
  }
}

void echo_config(const std::string& cmd, const std::vector<std::string>& kv) {
  std::cout << "# daclab " << cmd;
  for (const auto& s : kv) std::cout << ' ' << s;
  std::cout << '\n';
}

std::string kv(const std::string& key, double v) {
  return key + "=" + daclab::format_g6(v);
}

int run(int argc, char** argv) {
  CLI::App app{"distributed arithmetic coding workbench"};
  app.require_subcommand(1);

  // encode
  auto* enc = app.add_subcommand("encode", "compress a bit file");
  CommonOpts eo;
  std::string enc_in, enc_in2, enc_out, enc_out2, enc_split = "0.5,0.5";
  std::string enc_mode = "asym";
  add_common(enc, eo, true);
  enc->add_option("--in", enc_in, "input bit file")->required();
  enc->add_option("--in2", enc_in2, "second input bit file (sym mode)");
  enc->add_option("--out", enc_out, "output stream")->required();
  enc->add_option("--out2", enc_out2, "second output stream (sym mode)");
  enc->add_option("--mode", enc_mode, "asym or sym")->check(CLI::IsMember({"asym", "sym"}));
  enc->add_option("--split", enc_split, "sym mode rate split rx,ry");

  // decode
  auto* dec = app.add_subcommand("decode", "decompress one stream");
  CommonOpts dopts;
  std::string dec_in, dec_side, dec_out;
  add_common(dec, dopts, true);
  dec->add_option("--in", dec_in, "input stream")->required();
  dec->add_option("--side", dec_side, "side information bit file");
  dec->add_option("--out", dec_out, "decoded bit file")->required();

  // decode-joint
  auto* dj = app.add_subcommand("decode-joint", "decompress a time-shared pair");
  CommonOpts jopts;
  std::string dj_in, dj_in2, dj_out, dj_out2;
  add_common(dj, jopts, true);
  dj->add_option("--in", dj_in, "x stream")->required();
  dj->add_option("--in2", dj_in2, "y stream")->required();
  dj->add_option("--out", dj_out, "decoded x bit file")->required();
  dj->add_option("--out2", dj_out2, "decoded y bit file")->required();

  // allocate
  auto* alloc = app.add_subcommand("allocate", "print an overlap allocation");
  CommonOpts aopts;
  std::string alloc_mode = "asym";
  std::string alloc_split = "0.75,0.75";
  add_common(alloc, aopts, true);
  alloc->add_option("--mode", alloc_mode, "asym or sym")
      ->check(CLI::IsMember({"asym", "sym"}));
  alloc->add_option("--split", alloc_split, "sym mode rate split rx,ry");

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a named preset");
  CommonOpts xopts;
  std::string preset, exp_out;
  uint64_t exp_bits = 0;
  uint32_t exp_trials = 0;
  exp->add_option("preset", preset, "one of: table1 table2 table3 fig3..fig8")
      ->required();
  add_common(exp, xopts, false);
  exp->add_option("--bits", exp_bits, "source bits per fixed-rate point")
      ->envname("DACLAB_BITS");
  exp->add_option("--trials", exp_trials, "realizations per variable-rate point")
      ->envname("DACLAB_TRIALS");
  exp->add_option("--out", exp_out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 2;
  }

  if (enc->parsed()) {
    const bool sym = enc_mode == "sym";
    const auto x = unpack_bits(read_file(enc_in));
    if (eo.n == 200 && !enc->count("--n")) eo.n = static_cast<uint32_t>(x.size());
    if (x.size() < eo.n) throw daclab::InvalidParam("input shorter than n");
    std::vector<uint8_t> xs(x.begin(), x.begin() + eo.n);
    if (!sym) {
      const double k = resolve_k(eo);
      const auto sched = daclab::build_schedule(eo.n, eo.t, k, eo.p0);
      const auto bs = daclab::encode(xs, sched);
      write_file(enc_out, bs.serialize());
      echo_config("encode", {"mode=asym", kv("n", eo.n), kv("t", eo.t),
                             kv("p0", eo.p0), kv("k", k), kv("seed", double(eo.seed)),
                             kv("rate", bs.rate())});
      return 0;
    }
    if (enc_in2.empty() || enc_out2.empty())
      throw daclab::InvalidParam("sym mode needs --in2 and --out2");
    double rx = 0, ry = 0;
    if (std::sscanf(enc_split.c_str(), "%lf,%lf", &rx, &ry) != 2)
      throw daclab::InvalidParam("--split expects rx,ry");
    const auto yb = unpack_bits(read_file(enc_in2));
    if (yb.size() < eo.n) throw daclab::InvalidParam("second input shorter than n");
    std::vector<uint8_t> ys(yb.begin(), yb.begin() + eo.n);
    const double p = resolve_crossover(eo);
    const auto corr = daclab::CorrelationModel::make(eo.p0, p);
    const auto a = daclab::allocate_symmetric(eo.p0, corr.p0y(), p, rx, ry,
                                              eo.n, eo.t);
    if (!a.sw_feasible)
      std::cerr << "warning: split outside the admissible rate region\n";
    const auto sx = daclab::build_member_schedule(eo.n, eo.t, a.kx, eo.p0, 0);
    const auto sy =
        daclab::build_member_schedule(eo.n, eo.t, a.ky, corr.p0y(), 1);
    const auto pair = daclab::encode_pair(xs, ys, sx, sy);
    write_file(enc_out, pair.x.serialize());
    write_file(enc_out2, pair.y.serialize());
    echo_config("encode", {"mode=sym", kv("n", eo.n), kv("t", eo.t),
                           kv("p0", eo.p0), kv("kx", a.kx), kv("ky", a.ky),
                           kv("rate_x", pair.x.rate()), kv("rate_y", pair.y.rate())});
    return 0;
  }

  if (dec->parsed()) {
    const auto bs = daclab::DacBitstream::parse(read_file(dec_in));
    std::vector<uint8_t> x_hat;
    double metric = 0.0;
    uint32_t peak = 1;
    uint64_t nodes = 0;
    if (dec_side.empty()) {
      if (bs.k_q != 0)
        throw daclab::InvalidParam("stream carries overlap, need --side");
      x_hat = daclab::decode_lossless(bs);
      nodes = bs.n;
    } else {
      const auto y = unpack_bits(read_file(dec_side));
      if (y.size() != bs.n)
        throw daclab::InvalidParam("side information length differs from n");
      const double p0 = bs.p0_q / 65536.0;
      const auto corr = daclab::CorrelationModel::make(p0, resolve_crossover(dopts));
      const auto res = daclab::decode(bs, y, corr, dopts.m);
      x_hat = res.x_hat;
      metric = res.metric;
      peak = res.peak_frontier;
      nodes = res.nodes_expanded;
    }
    write_file(dec_out, pack_bits(x_hat));
    echo_config("decode", {kv("n", bs.n), kv("t", bs.t), kv("k_q", bs.k_q),
                           kv("m", dopts.m), kv("metric", metric),
                           kv("peak_frontier", peak), kv("nodes", double(nodes)),
                           kv("rate", bs.rate())});
    return 0;
  }

  if (dj->parsed()) {
    const auto bx = daclab::DacBitstream::parse(read_file(dj_in));
    const auto by = daclab::DacBitstream::parse(read_file(dj_in2));
    const double p0 = bx.p0_q / 65536.0;
    const auto corr = daclab::CorrelationModel::make(p0, resolve_crossover(jopts));
    const auto res = daclab::decode_pair(bx, by, corr, jopts.m);
    write_file(dj_out, pack_bits(res.x_hat));
    write_file(dj_out2, pack_bits(res.y_hat));
    echo_config("decode-joint",
                {kv("n", bx.n), kv("m", jopts.m), kv("metric", res.metric),
                 kv("peak_frontier", res.peak_frontier),
                 kv("rate_x", bx.rate()), kv("rate_y", by.rate())});
    return 0;
  }

  if (alloc->parsed()) {
    const double p = resolve_crossover(aopts);
    if (alloc_mode == "asym") {
      double k, target;
      if (aopts.mu) {
        const auto a = daclab::allocate_margin(aopts.p0, p, *aopts.mu, aopts.n, aopts.t);
        k = a.k;
        target = a.target_rate;
      } else {
        aopts.crossover = p;
        k = resolve_k(aopts);
        target = aopts.rate ? *aopts.rate : daclab::predicted_rate_k(aopts.p0, k);
      }
      const auto f = daclab::overlap_factors(aopts.p0, k);
      echo_config("allocate",
                  {"mode=asym", kv("p0", aopts.p0), kv("crossover", p),
                   kv("hxgy", daclab::cond_entropy_x_given_y(aopts.p0, p)),
                   kv("target_rate", target), kv("k", k), kv("alpha0", f.alpha0),
                   kv("alpha1", f.alpha1), kv("pt0", f.pt0), kv("pt1", f.pt1),
                   kv("predicted_rate", daclab::predicted_rate_k(aopts.p0, k))});
      return 0;
    }
    double rx = 0, ry = 0;
    if (std::sscanf(alloc_split.c_str(), "%lf,%lf", &rx, &ry) != 2)
      throw daclab::InvalidParam("--split expects rx,ry");
    const auto corr = daclab::CorrelationModel::make(aopts.p0, p);
    const auto a =
        daclab::allocate_symmetric(aopts.p0, corr.p0y(), p, rx, ry, aopts.n, aopts.t);
    echo_config("allocate",
                {"mode=sym", kv("p0x", aopts.p0), kv("p0y", corr.p0y()),
                 kv("crossover", p), kv("rate_x", rx), kv("rate_y", ry),
                 kv("kx", a.kx), kv("ky", a.ky),
                 std::string("sw_feasible=") + (a.sw_feasible ? "1" : "0")});
    return 0;
  }

  // experiment
  daclab::PresetOverrides ov;
  if (exp->count("--n")) ov.n = xopts.n;
  if (exp->count("--t")) ov.t = xopts.t;
  if (exp->count("--m")) ov.m = xopts.m;
  if (exp->count("--seed")) ov.seed = xopts.seed;
  if (exp_bits) ov.total_bits = exp_bits;
  if (exp_trials) ov.realizations = exp_trials;
  const auto table = daclab::run_preset(preset, ov);
  echo_config("experiment", {"preset=" + preset, kv("seed", double(ov.seed ? *ov.seed : 1)),
                             kv("rows", double(table.rows.size()))});
  if (exp_out.empty()) {
    daclab::emit_csv(std::cout, table);
  } else {
    std::ofstream os(exp_out, std::ios::binary);
    if (!os) throw IoError("cannot create " + exp_out);
    daclab::emit_csv(os, table);
    if (!os) throw IoError("write failed on " + exp_out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const daclab::EmptyFrontier& e) {
    std::cerr << "decode failure: " << e.what() << '\n';
    return 4;
  } catch (const daclab::RoleViolation& e) {
    std::cerr << "decode failure: " << e.what() << '\n';
    return 4;
  } catch (const daclab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
