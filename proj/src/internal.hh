#pragma once

#include <cstdint>
#include <vector>

namespace strauto::detail {

inline uint64_t hash_mix(uint64_t h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

struct U32VecHash {
    size_t operator()(const std::vector<uint32_t>& v) const {
        uint64_t h = v.size();
        for (uint32_t x : v) h = hash_mix(h, x);
        return static_cast<size_t>(h);
    }
};

struct U64Hash {
    size_t operator()(uint64_t v) const {
        v ^= v >> 33;
        v *= 0xff51afd7ed558ccdull;
        v ^= v >> 33;
        return static_cast<size_t>(v);
    }
};

}  // namespace strauto::detail
