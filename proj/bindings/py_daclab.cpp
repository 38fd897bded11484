// Python bindings for the daclab core. Bitstreams cross the boundary as
// bytes, source blocks as lists of 0/1 ints.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "daclab/errors.hpp"
#include "daclab/harness.hpp"
#include "daclab/presets.hpp"
#include "daclab/rate_alloc.hpp"
#include "daclab/sym_codec.hpp"

namespace py = pybind11;

namespace {

std::vector<uint8_t> to_vec(const py::bytes& b) {
  const std::string s = b;
  return std::vector<uint8_t>(s.begin(), s.end());
}

py::bytes to_bytes(const std::vector<uint8_t>& v) {
  return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

}  // namespace

PYBIND11_MODULE(_daclab, m) {
  m.doc() = "distributed arithmetic coding for correlated binary sources";

  py::register_exception<daclab::InvalidParam>(m, "InvalidParam", PyExc_ValueError);
  py::register_exception<daclab::Infeasible>(m, "Infeasible", PyExc_ValueError);
  py::register_exception<daclab::DoesNotFit>(m, "DoesNotFit", PyExc_ValueError);
  py::register_exception<daclab::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<daclab::EmptyFrontier>(m, "EmptyFrontier", PyExc_RuntimeError);
  py::register_exception<daclab::RoleViolation>(m, "RoleViolation", PyExc_RuntimeError);

  m.def("binary_entropy", &daclab::binary_entropy, py::arg("p0"));
  m.def("joint_entropy", &daclab::joint_entropy, py::arg("p0"), py::arg("crossover"));
  m.def("side_entropy", &daclab::side_entropy, py::arg("p0"), py::arg("crossover"));
  m.def("cond_entropy_x_given_y", &daclab::cond_entropy_x_given_y,
        py::arg("p0"), py::arg("crossover"));
  m.def("crossover_for_cond_entropy", &daclab::crossover_for_cond_entropy,
        py::arg("p0"), py::arg("hxgy"));
  m.def("crossover_for_joint_entropy", &daclab::crossover_for_joint_entropy,
        py::arg("p0"), py::arg("hxy"));
  m.def("predicted_rate", &daclab::predicted_rate, py::arg("p0"),
        py::arg("pt0"), py::arg("pt1"));
  m.def("predicted_rate_k", &daclab::predicted_rate_k, py::arg("p0"), py::arg("k"));
  m.def("solve_k", &daclab::solve_k, py::arg("p0"), py::arg("target_rate"),
        py::arg("n"), py::arg("t"));
  m.def(
      "overlap_factors",
      [](double p0, double k) {
        const auto f = daclab::overlap_factors(p0, k);
        return py::make_tuple(f.alpha0, f.alpha1, f.pt0, f.pt1);
      },
      py::arg("p0"), py::arg("k"),
      "returns (alpha0, alpha1, pt0, pt1)");
  m.def(
      "equal_overlap_factor",
      [](double p0, double rate) {
        const auto f = daclab::equal_overlap_factor(p0, rate);
        return py::make_tuple(f.alpha, f.pt0, f.pt1, f.fits);
      },
      py::arg("p0"), py::arg("rate"), "returns (alpha, pt0, pt1, fits)");
  m.def(
      "allocate_margin",
      [](double p0, double crossover, double mu, uint32_t n, uint32_t t) {
        const auto a = daclab::allocate_margin(p0, crossover, mu, n, t);
        return py::make_tuple(a.k, a.target_rate);
      },
      py::arg("p0"), py::arg("crossover"), py::arg("mu"), py::arg("n"),
      py::arg("t"), "returns (k, target_rate)");
  m.def(
      "allocate_symmetric",
      [](double p0x, double p0y, double crossover, double rate_x,
         double rate_y, uint32_t n, uint32_t t) {
        const auto a = daclab::allocate_symmetric(p0x, p0y, crossover, rate_x,
                                                  rate_y, n, t);
        return py::make_tuple(a.kx, a.ky, a.sw_feasible);
      },
      py::arg("p0x"), py::arg("p0y"), py::arg("crossover"), py::arg("rate_x"),
      py::arg("rate_y"), py::arg("n"), py::arg("t"),
      "returns (kx, ky, sw_feasible)");

  m.def(
      "gen_source",
      [](uint32_t n, double p0, uint64_t master, uint64_t trial) {
        return daclab::gen_source(n, p0, daclab::TrialSeed{master, trial});
      },
      py::arg("n"), py::arg("p0"), py::arg("seed"), py::arg("trial") = 0);
  m.def(
      "apply_bsc",
      [](const std::vector<uint8_t>& x, double crossover, uint64_t master,
         uint64_t trial) {
        return daclab::apply_bsc(x, crossover, daclab::TrialSeed{master, trial});
      },
      py::arg("x"), py::arg("crossover"), py::arg("seed"), py::arg("trial") = 0);

  m.def(
      "encode",
      [](const std::vector<uint8_t>& x, uint32_t t, double k, double p0) {
        const auto sched = daclab::build_schedule(
            static_cast<uint32_t>(x.size()), t, k, p0);
        return to_bytes(daclab::encode(x, sched).serialize());
      },
      py::arg("x"), py::arg("t"), py::arg("k"), py::arg("p0"),
      "compress a 0/1 block, returns the serialized stream");
  m.def(
      "stream_info",
      [](const py::bytes& blob) {
        const auto bs = daclab::DacBitstream::parse(to_vec(blob));
        py::dict d;
        d["mode"] = bs.mode;
        d["n"] = bs.n;
        d["t"] = bs.t;
        d["p0"] = bs.p0_q / 65536.0;
        d["k"] = bs.k_q / 65536.0;
        d["role"] = bs.role;
        d["payload_bits"] = bs.payload_bits;
        d["rate"] = bs.rate();
        return d;
      },
      py::arg("blob"));
  m.def(
      "decode",
      [](const py::bytes& blob, const std::vector<uint8_t>& y,
         double crossover, uint32_t m) {
        const auto bs = daclab::DacBitstream::parse(to_vec(blob));
        const auto corr =
            daclab::CorrelationModel::make(bs.p0_q / 65536.0, crossover);
        const auto r = daclab::decode(bs, y, corr, m);
        return py::make_tuple(r.x_hat, r.metric);
      },
      py::arg("blob"), py::arg("y"), py::arg("crossover"), py::arg("m") = 2048,
      "joint decode against side information, returns (x_hat, metric)");
  m.def(
      "decode_lossless",
      [](const py::bytes& blob) {
        return daclab::decode_lossless(daclab::DacBitstream::parse(to_vec(blob)));
      },
      py::arg("blob"));

  m.def(
      "encode_pair",
      [](const std::vector<uint8_t>& x, const std::vector<uint8_t>& y,
         uint32_t t, double kx, double ky, double p0x, double p0y) {
        const auto n = static_cast<uint32_t>(x.size());
        const auto sx = daclab::build_member_schedule(n, t, kx, p0x, 0);
        const auto sy = daclab::build_member_schedule(n, t, ky, p0y, 1);
        const auto pair = daclab::encode_pair(x, y, sx, sy);
        return py::make_tuple(to_bytes(pair.x.serialize()),
                              to_bytes(pair.y.serialize()));
      },
      py::arg("x"), py::arg("y"), py::arg("t"), py::arg("kx"), py::arg("ky"),
      py::arg("p0x"), py::arg("p0y"),
      "time-shared pair encode, returns (stream_x, stream_y)");
  m.def(
      "decode_pair",
      [](const py::bytes& bx, const py::bytes& by, double crossover,
         uint32_t m) {
        const auto sx = daclab::DacBitstream::parse(to_vec(bx));
        const auto sy = daclab::DacBitstream::parse(to_vec(by));
        const auto corr =
            daclab::CorrelationModel::make(sx.p0_q / 65536.0, crossover);
        const auto r = daclab::decode_pair(sx, sy, corr, m);
        return py::make_tuple(r.x_hat, r.y_hat, r.metric);
      },
      py::arg("stream_x"), py::arg("stream_y"), py::arg("crossover"),
      py::arg("m") = 2048, "returns (x_hat, y_hat, metric)");

  m.def(
      "run_preset",
      [](const std::string& name, py::object n, py::object t, py::object m,
         py::object seed, py::object total_bits, py::object realizations) {
        daclab::PresetOverrides ov;
        if (!n.is_none()) ov.n = n.cast<uint32_t>();
        if (!t.is_none()) ov.t = t.cast<uint32_t>();
        if (!m.is_none()) ov.m = m.cast<uint32_t>();
        if (!seed.is_none()) ov.seed = seed.cast<uint64_t>();
        if (!total_bits.is_none()) ov.total_bits = total_bits.cast<uint64_t>();
        if (!realizations.is_none())
          ov.realizations = realizations.cast<uint32_t>();
        const auto tab = daclab::run_preset(name, ov);
        return py::make_tuple(tab.header, tab.rows);
      },
      py::arg("name"), py::arg("n") = py::none(), py::arg("t") = py::none(),
      py::arg("m") = py::none(), py::arg("seed") = py::none(),
      py::arg("total_bits") = py::none(), py::arg("realizations") = py::none(),
      "run a named experiment preset, returns (header, rows)");
  m.def("preset_names", &daclab::preset_names);
}
