#pragma once

#include "strauto/nfa.hh"

namespace strauto {

/// Maximum out-degree of a 2-track relation: max over left words u of the
/// number of distinct right words v with (u,v) accepted. Counts saturate at
/// cap+1; an infinite image (padding-phase cycle) also saturates.
struct OutDegreeResult {
    uint64_t value = 0;                // exact maximum when !exceeds_cap
    bool exceeds_cap = false;
    std::optional<Word> witness;       // a u attaining the maximum (or beating the cap)
};

OutDegreeResult max_out_degree(const MultiTrackNfa& rel, uint64_t cap,
                               const ExploreLimits& lim = {});

}  // namespace strauto
