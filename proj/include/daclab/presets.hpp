#pragma once

#include <optional>
#include <string>
#include <vector>

#include "daclab/harness.hpp"

namespace daclab {

// Budget knobs a caller may override; everything else a preset pins.
struct PresetOverrides {
  std::optional<uint32_t> n;
  std::optional<uint32_t> t;
  std::optional<uint32_t> m;
  std::optional<uint64_t> seed;
  std::optional<uint64_t> total_bits;
  std::optional<uint32_t> realizations;
};

std::vector<std::string> preset_names();

// Runs a named experiment preset and returns its result table. Throws
// InvalidParam for unknown names.
CsvTable run_preset(const std::string& name, const PresetOverrides& ov);

}  // namespace daclab
