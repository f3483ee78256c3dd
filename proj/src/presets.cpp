#include "ostra/presets.hpp"

namespace ostra {

const std::vector<PresetConfig>& presets() {
    static const std::vector<PresetConfig> table = {
        {"phi-b2", "(1+sqrt(5))/2", 2, 8, 54, 1},
        {"phi-b3", "(1+sqrt(5))/2", 3, 13, 197, 3},
        {"phi-b10", "(1+sqrt(5))/2", 10, 97, std::nullopt, std::nullopt},
        {"sqrt2-b2", "sqrt(2)", 2, 6, 29, 1},
        {"sqrt2-b3", "sqrt(2)", 3, 14, std::nullopt, std::nullopt},
        {"bronze-b2", "(3+sqrt(13))/2", 2, 7, 64, 3},
        {"bronze-b3", "(3+sqrt(13))/2", 3, 8, 64, 7},
        {"sqrt3m1o2-b2", "(sqrt(3)-1)/2", 2, 12, 27, 1},
        {"sqrt3p1-b2", "1+sqrt(3)", 2, std::nullopt, std::nullopt, std::nullopt},
        {"sqrt17m3o4-b2", "(sqrt(17)-3)/4", 2, 16, 57, 9},
        {"sqrt17p3o2-b2", "(3+sqrt(17))/2", 2, std::nullopt, std::nullopt, std::nullopt},
    };
    return table;
}

const PresetConfig* find_preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name) return &p;
    return nullptr;
}

}  // namespace ostra
