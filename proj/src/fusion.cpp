#include "fusim/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "fusim/common.hpp"

namespace fusim::fusion {

std::vector<double> normalize(const std::vector<double>& values) {
    double peak = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) throw Error("normalize: non-finite value");
        if (v < 0.0) throw Error("normalize: negative value");
        peak = std::max(peak, v);
    }
    if (peak == 0.0) return values;
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] / peak;
    return out;
}

FusedVector fuse(const photon::TemporalHistogram& hist, const radar::RangeProfile& profile,
                 FuseMode mode) {
    if (hist.counts.empty()) throw Error("fuse: photon histogram is empty");

    FusedVector out;
    out.photon_len = hist.counts.size();
    out.radar_len = profile.magnitudes.size();
    out.values.assign(out.photon_len + out.radar_len, 0.0);

    if (mode != FuseMode::radar_only) {
        const auto ph = normalize(hist.counts);
        std::copy(ph.begin(), ph.end(), out.values.begin());
    }
    if (mode != FuseMode::photon_only) {
        const auto ra = normalize(profile.magnitudes);
        std::copy(ra.begin(), ra.end(), out.values.begin() + out.photon_len);
    }
    return out;
}

const char* mode_name(FuseMode mode) {
    switch (mode) {
        case FuseMode::fusion: return "fusion";
        case FuseMode::photon_only: return "photon_only";
        case FuseMode::radar_only: return "radar_only";
    }
    return "unknown";
}

FuseMode mode_from_name(const std::string& name) {
    if (name == "fusion") return FuseMode::fusion;
    if (name == "photon_only") return FuseMode::photon_only;
    if (name == "radar_only") return FuseMode::radar_only;
    throw Error("unknown fusion mode '" + name + "'");
}

}  // namespace fusim::fusion
