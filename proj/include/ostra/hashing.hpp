#pragma once

#include <cstdint>
#include <vector>

namespace ostra {

inline uint64_t hash_mix(uint64_t h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
    return h ^ (h >> 33);
}

struct IntVecHash {
    size_t operator()(const std::vector<int>& v) const {
        uint64_t h = 0x2545f4914f6cdd1dULL;
        for (int x : v) h = hash_mix(h, (uint64_t)(uint32_t)x);
        return (size_t)h;
    }
};

struct IntPairHash {
    size_t operator()(const std::pair<int, int>& p) const {
        return (size_t)hash_mix((uint64_t)(uint32_t)p.first,
                                (uint64_t)(uint32_t)p.second);
    }
};

}  // namespace ostra
