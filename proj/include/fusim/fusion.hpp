#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fusim/photon.hpp"
#include "fusim/radar.hpp"

namespace fusim::fusion {

enum class FuseMode { fusion, photon_only, radar_only };

/// Model input vector: normalized photon histogram followed by the
/// normalized range profile. Ablation modes zero one segment but keep the
/// total length fixed, so every mode feeds the same architecture.
struct FusedVector {
    std::size_t photon_len = 0;
    std::size_t radar_len = 0;
    std::vector<double> values;  // photon_len + radar_len entries in [0, 1]
};

/// Peak normalization: divides by the maximum. All-zero input passes
/// through unchanged; negative or non-finite entries are an error.
std::vector<double> normalize(const std::vector<double>& values);

FusedVector fuse(const photon::TemporalHistogram& hist, const radar::RangeProfile& profile,
                 FuseMode mode);

const char* mode_name(FuseMode mode);
FuseMode mode_from_name(const std::string& name);

}  // namespace fusim::fusion
