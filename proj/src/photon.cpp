#include "fusim/photon.hpp"

#include <algorithm>
#include <cmath>

#include "fusim/common.hpp"
#include "fusim/rng.hpp"

namespace fusim::photon {

double TemporalHistogram::total() const {
    double s = 0.0;
    for (double c : counts) s += c;
    return s;
}

std::vector<Arrival> ideal_arrival_times(const std::vector<scene::ScenePoint>& points,
                                         const Vec3& spd_pos,
                                         const PhotonSimParams& params) {
    if (points.empty()) {
        throw Error("ideal_arrival_times: empty point cloud");
    }
    if (params.trip_factor != 1 && params.trip_factor != 2) {
        throw Error("ideal_arrival_times: trip_factor must be 1 or 2");
    }
    if (params.falloff_exponent < 0.0) {
        throw Error("ideal_arrival_times: falloff exponent must be non-negative");
    }
    std::vector<Arrival> arrivals;
    arrivals.reserve(points.size());
    for (const auto& p : points) {
        const double r = distance(p.position, spd_pos);
        if (r == 0.0) {
            throw Error("ideal_arrival_times: point coincides with the detector");
        }
        Arrival a;
        a.t = params.trip_factor * r / kSpeedOfLight;
        a.weight = p.reflectivity / std::pow(r, params.falloff_exponent);
        arrivals.push_back(a);
    }
    return arrivals;
}

BinnedArrivals bin_histogram(const std::vector<Arrival>& arrivals,
                             const HistogramBinning& binning) {
    if (!(binning.bin_width > 0.0)) {
        throw Error("bin_histogram: bin width must be positive");
    }
    if (binning.n_bins <= 0) {
        throw Error("bin_histogram: bin count must be positive");
    }
    // Canonical accumulation order: equal multisets of arrivals sum in the
    // same sequence regardless of the order they were produced in.
    std::vector<Arrival> sorted = arrivals;
    std::sort(sorted.begin(), sorted.end(), [](const Arrival& a, const Arrival& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.weight < b.weight;
    });

    BinnedArrivals out;
    out.hist.t_start = binning.t_start;
    out.hist.bin_width = binning.bin_width;
    out.hist.counts.assign(static_cast<std::size_t>(binning.n_bins), 0.0);
    for (const auto& a : sorted) {
        const double pos = std::floor((a.t - binning.t_start) / binning.bin_width);
        if (pos < 0.0 || pos >= static_cast<double>(binning.n_bins)) {
            ++out.dropped;
            continue;
        }
        out.hist.counts[static_cast<std::size_t>(pos)] += a.weight;
    }
    return out;
}

TemporalHistogram convolve_irf(const TemporalHistogram& h, const IrfModel& irf) {
    if (!(irf.fwhm > 0.0)) {
        throw Error("convolve_irf: fwhm must be positive");
    }
    if (irf.fwhm < h.bin_width / 10.0) {
        return h;  // blur far below bin scale: identity
    }
    const double sigma = irf.fwhm / 2.3548;
    const int radius = static_cast<int>(std::ceil(4.0 * sigma / h.bin_width));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double ksum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double t = k * h.bin_width;
        kernel[static_cast<std::size_t>(k + radius)] =
            std::exp(-t * t / (2.0 * sigma * sigma));
        ksum += kernel[static_cast<std::size_t>(k + radius)];
    }
    for (auto& v : kernel) v /= ksum;

    const int n = static_cast<int>(h.counts.size());
    TemporalHistogram out;
    out.t_start = h.t_start;
    out.bin_width = h.bin_width;
    out.counts.assign(h.counts.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        const double c = h.counts[static_cast<std::size_t>(i)];
        if (c == 0.0) continue;
        for (int k = -radius; k <= radius; ++k) {
            // Mass spreading past either end is clamped into the boundary
            // bin; the window captures the full response.
            int j = i + k;
            if (j < 0) j = 0;
            if (j >= n) j = n - 1;
            out.counts[static_cast<std::size_t>(j)] +=
                c * kernel[static_cast<std::size_t>(k + radius)];
        }
    }
    return out;
}

TemporalHistogram apply_shot_noise(const TemporalHistogram& h,
                                   double total_expected_photons,
                                   std::uint64_t rng_seed) {
    if (!(total_expected_photons > 0.0)) {
        throw Error("apply_shot_noise: photon budget must be positive");
    }
    const double sum = h.total();
    if (sum <= 0.0) {
        throw Error("apply_shot_noise: histogram carries no signal to scale");
    }
    const double scale = total_expected_photons / sum;
    Rng rng(rng_seed);
    TemporalHistogram out;
    out.t_start = h.t_start;
    out.bin_width = h.bin_width;
    out.counts.resize(h.counts.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        out.counts[i] = static_cast<double>(rng.poisson(h.counts[i] * scale));
    }
    return out;
}

TemporalHistogram simulate_photon_histogram(const scene::SceneSpec& scene_spec,
                                            const scene::RenderParams& render_params,
                                            const PhotonSimParams& params,
                                            const HistogramBinning& binning,
                                            const IrfModel& irf,
                                            std::uint64_t noise_seed) {
    const scene::DepthMap dm = scene::render_depth_map(scene_spec, render_params);
    const auto cloud = scene::point_cloud(dm, scene_spec.rig.camera_pos);
    if (cloud.empty()) {
        // Nothing in view means a dark detector; shot noise on a zero
        // rate is identically zero, so skip it rather than fail.
        TemporalHistogram h;
        h.t_start = binning.t_start;
        h.bin_width = binning.bin_width;
        h.counts.assign(static_cast<std::size_t>(binning.n_bins), 0.0);
        return h;
    }
    const auto arrivals = ideal_arrival_times(cloud, scene_spec.rig.spd_pos, params);
    const BinnedArrivals binned = bin_histogram(arrivals, binning);
    TemporalHistogram h = convolve_irf(binned.hist, irf);
    if (params.noise_enabled) {
        h = apply_shot_noise(h, params.total_expected_photons, noise_seed);
    }
    return h;
}

}  // namespace fusim::photon
