#include "daclab/presets.hpp"

#include <functional>

#include "daclab/errors.hpp"
#include "daclab/rate_alloc.hpp"

namespace daclab {

namespace {

const std::vector<std::string> kHeader = {
    "preset",    "point",     "n",         "t",
    "m",         "p0",        "crossover", "hxy",
    "rate_x",    "rate_y",    "rule",      "blocks",
    "bits",      "payload_bits",           "ber",
    "fer",       "rate_mean", "rate_std",  "ceiling_hits",
    "first_err_mean",         "first_err_std",
    "first_err_blocks",       "seed",      "elapsed_ms"};

void apply_overrides(ExperimentConfig& cfg, const PresetOverrides& ov) {
  if (ov.n) cfg.n = *ov.n;
  if (ov.t) cfg.t = *ov.t;
  if (ov.m) cfg.m = *ov.m;
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.total_bits) cfg.total_bits = *ov.total_bits;
  if (ov.realizations) cfg.realizations = *ov.realizations;
}

std::vector<std::string> make_row(const std::string& preset,
                                  const std::string& point,
                                  const ExperimentConfig& cfg,
                                  const TrialStats& st) {
  return {preset,
          point,
          std::to_string(cfg.n),
          std::to_string(cfg.t),
          std::to_string(cfg.m),
          format_g6(cfg.p0),
          format_g6(cfg.crossover),
          format_g6(joint_entropy(cfg.p0, cfg.crossover)),
          format_g6(cfg.rate_x),
          format_g6(cfg.rate_y),
          cfg.rule == OverlapRule::kPower ? "power" : "equal",
          std::to_string(st.blocks),
          std::to_string(st.bits),
          std::to_string(st.payload_bits),
          format_g6(st.ber()),
          format_g6(st.fer()),
          format_g6(st.rate_mean),
          format_g6(st.rate_std),
          std::to_string(st.rate_ceiling_hits),
          format_g6(st.first_err_mean),
          format_g6(st.first_err_std),
          std::to_string(st.first_err_blocks),
          std::to_string(cfg.seed),
          format_g6(st.elapsed_ms)};
}

ExperimentConfig asym_point(const PresetOverrides& ov, double p0, double rate,
                            double hx_given_y) {
  ExperimentConfig cfg;
  cfg.p0 = p0;
  cfg.rate = rate;
  cfg.rate_x = rate;
  cfg.rate_y = 0.0;
  cfg.crossover = crossover_for_cond_entropy(p0, hx_given_y);
  apply_overrides(cfg, ov);
  return cfg;
}

CsvTable table1(const PresetOverrides& ov) {
  CsvTable out{kHeader, {}};
  for (double hxy : {0.1, 0.01, 0.001}) {
    ExperimentConfig cfg = asym_point(ov, 0.5, 0.1, hxy);
    out.rows.push_back(
        make_row("table1", "hxgy=" + format_g6(hxy), cfg, run_fixed_rate(cfg)));
  }
  return out;
}

CsvTable table2(const PresetOverrides& ov) {
  CsvTable out{kHeader, {}};
  {
    ExperimentConfig cfg;
    cfg.p0 = 0.5;
    cfg.crossover = crossover_for_cond_entropy(0.5, 0.5);
    cfg.realizations = 300;
    apply_overrides(cfg, ov);
    cfg.rate_x = cfg.rate_y = 0.0;
    out.rows.push_back(
        make_row("table2", "p0=0.5", cfg, run_variable_rate(cfg)));
  }
  {
    ExperimentConfig cfg;
    cfg.p0 = 0.9;
    cfg.crossover = crossover_for_joint_entropy(0.9, 1.0);
    cfg.realizations = 300;
    apply_overrides(cfg, ov);
    cfg.rate_x = cfg.rate_y = 0.0;
    out.rows.push_back(
        make_row("table2", "p0=0.9", cfg, run_variable_rate(cfg)));
  }
  return out;
}

CsvTable table3(const PresetOverrides& ov) {
  ExperimentConfig cfg = asym_point(ov, 0.5, 0.5, 0.25);
  CsvTable out{kHeader, {}};
  for (auto& [m, st] : run_m_sweep(cfg, {64, 256, 512, 1024, 2048})) {
    ExperimentConfig point = cfg;
    point.m = m;
    out.rows.push_back(make_row("table3", "m=" + std::to_string(m), point, st));
  }
  return out;
}

CsvTable fig3(const PresetOverrides& ov) {
  ExperimentConfig cfg = asym_point(ov, 0.5, 0.5, 0.25);
  CsvTable out{kHeader, {}};
  for (auto& [t, st] : run_termination_sweep(cfg, {0, 5, 10, 15, 20})) {
    ExperimentConfig point = cfg;
    point.t = t;
    out.rows.push_back(make_row("fig3", "t=" + std::to_string(t), point, st));
  }
  return out;
}

CsvTable fig4(const PresetOverrides& ov) {
  CsvTable out{kHeader, {}};
  for (int i = 0; i < 8; ++i) {
    const double hxy = 1.15 + 0.05 * i;  // joint entropy abscissa
    ExperimentConfig cfg = asym_point(ov, 0.5, 0.5, hxy - 1.0);
    out.rows.push_back(
        make_row("fig4", "hxy=" + format_g6(hxy), cfg, run_fixed_rate(cfg)));
  }
  return out;
}

CsvTable fig5(const PresetOverrides& ov) {
  CsvTable out{kHeader, {}};
  for (double hxgy : {0.25, 0.30, 0.35}) {
    for (OverlapRule rule : {OverlapRule::kPower, OverlapRule::kEqual}) {
      ExperimentConfig cfg = asym_point(ov, 0.8, 0.5, hxgy);
      cfg.rule = rule;
      const char* tag = rule == OverlapRule::kPower ? "power" : "equal";
      out.rows.push_back(make_row(
          "fig5", "hxgy=" + format_g6(hxgy) + ";rule=" + tag, cfg,
          run_fixed_rate(cfg)));
    }
  }
  return out;
}

CsvTable fig6(const PresetOverrides& ov) {
  CsvTable out{kHeader, {}};
  const double total = 1.5;
  for (int i = 0; i < 8; ++i) {
    const double hxy = 1.16 + 0.048 * i;
    const double p = crossover_for_joint_entropy(0.8, hxy);
    const double rate = total - side_entropy(0.8, p);
    ExperimentConfig cfg;
    cfg.p0 = 0.8;
    cfg.crossover = p;
    cfg.rate = rate;
    cfg.rate_x = rate;
    cfg.rate_y = total - rate;
    apply_overrides(cfg, ov);
    out.rows.push_back(
        make_row("fig6", "hxy=" + format_g6(hxy), cfg, run_fixed_rate(cfg)));
  }
  return out;
}

CsvTable fig7(const PresetOverrides& ov) {
  CsvTable out{kHeader, {}};
  const double total = 1.5;
  const std::pair<double, double> splits[] = {{0.75, 0.75}, {0.6, 0.9}};
  for (double hxy : {1.15, 1.25, 1.35}) {
    for (auto [rx, ry] : splits) {
      ExperimentConfig cfg;
      cfg.p0 = 0.5;
      cfg.crossover = crossover_for_joint_entropy(0.5, hxy);
      cfg.rate_x = rx * total / (rx + ry);
      cfg.rate_y = ry * total / (rx + ry);
      apply_overrides(cfg, ov);
      out.rows.push_back(make_row(
          "fig7",
          "hxy=" + format_g6(hxy) + ";split=" + format_g6(rx) + ":" + format_g6(ry),
          cfg, run_symmetric_fixed(cfg)));
    }
  }
  return out;
}

CsvTable fig8(const PresetOverrides& ov) {
  CsvTable out{kHeader, {}};
  {
    ExperimentConfig cfg;
    cfg.p0 = 0.5;
    cfg.crossover = crossover_for_cond_entropy(0.5, 0.5);
    cfg.rate_x = cfg.rate_y = 0.5;
    cfg.realizations = 100;
    apply_overrides(cfg, ov);
    out.rows.push_back(
        make_row("fig8", "p0=0.5", cfg, run_symmetric_variable(cfg)));
  }
  {
    ExperimentConfig cfg;
    cfg.p0 = 0.9;
    cfg.crossover = crossover_for_joint_entropy(0.9, 1.0);
    cfg.rate_x = cfg.rate_y = 0.5;
    cfg.realizations = 100;
    apply_overrides(cfg, ov);
    out.rows.push_back(
        make_row("fig8", "p0=0.9", cfg, run_symmetric_variable(cfg)));
  }
  return out;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"table1", "table2", "table3", "fig3", "fig4",
          "fig5",   "fig6",   "fig7",   "fig8"};
}

CsvTable run_preset(const std::string& name, const PresetOverrides& ov) {
  if (name == "table1") return table1(ov);
  if (name == "table2") return table2(ov);
  if (name == "table3") return table3(ov);
  if (name == "fig3") return fig3(ov);
  if (name == "fig4") return fig4(ov);
  if (name == "fig5") return fig5(ov);
  if (name == "fig6") return fig6(ov);
  if (name == "fig7") return fig7(ov);
  if (name == "fig8") return fig8(ov);
  throw InvalidParam("run_preset: unknown preset " + name);
}

}  // namespace daclab
