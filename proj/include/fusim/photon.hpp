#pragma once

#include <cstdint>
#include <vector>

#include "fusim/scene.hpp"
#include "fusim/vec3.hpp"

namespace fusim::photon {

/// Temporal histogram of photon arrivals. `counts` holds expected weights
/// before shot noise and integer draws after it.
struct TemporalHistogram {
    double t_start = 0.0;
    double bin_width = 100e-12;  // seconds
    std::vector<double> counts;

    double total() const;
};

/// Gaussian instrument response, parameterized by full width at half max.
struct IrfModel {
    double fwhm = 200e-12;  // seconds
};

struct PhotonSimParams {
    int trip_factor = 2;            // 1 = one-way timing, 2 = round trip
    double falloff_exponent = 4.0;  // weight = reflectivity / r^exponent
    double total_expected_photons = 1e4;
    bool noise_enabled = true;
};

struct HistogramBinning {
    double t_start = 0.0;
    double bin_width = 100e-12;
    int n_bins = 512;
};

struct Arrival {
    double t = 0.0;       // seconds
    double weight = 0.0;  // expected photon weight
};

/// Arrival time and weight per scene point, viewed from the detector:
/// t = trip_factor * |p - spd_pos| / c, weight = rho / r^falloff.
/// Points coincident with the detector are an error.
std::vector<Arrival> ideal_arrival_times(const std::vector<scene::ScenePoint>& points,
                                         const Vec3& spd_pos,
                                         const PhotonSimParams& params);

struct BinnedArrivals {
    TemporalHistogram hist;
    std::size_t dropped = 0;  // arrivals outside the histogram window
};

/// Accumulates arrival weights into floor((t - t_start) / bin_width) bins.
/// Accumulation order is canonicalized by sorting on (t, weight), so any
/// permutation of the same arrival multiset produces a bit-identical
/// histogram.
BinnedArrivals bin_histogram(const std::vector<Arrival>& arrivals,
                             const HistogramBinning& binning);

/// Convolution with a unit-sum Gaussian kernel (sigma = fwhm / 2.3548,
/// truncated at +-4 sigma). Kernel mass that would fall outside the window
/// is accumulated into the boundary bins so the total is conserved.
/// IRFs narrower than bin_width / 10 are treated as identity.
TemporalHistogram convolve_irf(const TemporalHistogram& h, const IrfModel& irf);

/// Per-bin Poisson draws after scaling the histogram to
/// `total_expected_photons` expected counts. All-zero input is an error.
TemporalHistogram apply_shot_noise(const TemporalHistogram& h,
                                   double total_expected_photons,
                                   std::uint64_t rng_seed);

/// Full pipeline: render -> point cloud -> arrivals -> binning -> IRF ->
/// optional shot noise. The depth map is rendered from rig.camera_pos.
TemporalHistogram simulate_photon_histogram(const scene::SceneSpec& scene_spec,
                                            const scene::RenderParams& render_params,
                                            const PhotonSimParams& params,
                                            const HistogramBinning& binning,
                                            const IrfModel& irf,
                                            std::uint64_t noise_seed);

}  // namespace fusim::photon
