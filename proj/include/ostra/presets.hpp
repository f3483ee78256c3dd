#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ostra {

/// Named configuration for a quadratic irrational and base.  Expected
/// values are recorded only where published.
struct PresetConfig {
    std::string name;
    std::string alpha_text;
    int base;
    std::optional<int> expected_states;
    std::optional<int> digit_set_size;
    std::optional<int> expected_candidates;
};

const std::vector<PresetConfig>& presets();
const PresetConfig* find_preset(const std::string& name);

}  // namespace ostra
