#pragma once

#include <cstddef>
#include <vector>

#include "fusim/fusion.hpp"
#include "fusim/io.hpp"

namespace fusim::model {
struct MlpModel;
}

namespace fusim::metrics {

// Mean test SSIM of the reference hardware benchmark (fusion, photon-only,
// radar-only). Desk-scale simulation is not expected to reproduce the
// absolute values, only the strict ordering.
inline constexpr double kReferenceMeanSsimFusion = 0.6576;
inline constexpr double kReferenceMeanSsimPhotonOnly = 0.6389;
inline constexpr double kReferenceMeanSsimRadarOnly = 0.5266;

/// Stabilization constants for the structural similarity index over a
/// luminance range L: c1 = (k1 L)^2, c2 = (k2 L)^2, c3 = c2 / 2.
/// The exponents weight the luminance / contrast / structure terms.
struct SsimConstants {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;

    static SsimConstants make(double luminance_range = 1.0, double k1 = 0.01,
                              double k2 = 0.03);
};

struct SsimComponents {
    double luminance = 0.0;
    double contrast = 0.0;
    double structure = 0.0;
};

/// Whole-image statistics (population variance). Inputs must be the same
/// length and hold at least 4 values.
SsimComponents ssim_components(const std::vector<double>& x, const std::vector<double>& y,
                               const SsimConstants& k);

/// SSIM over whole-image statistics. With unit exponents and c3 = c2/2 the
/// combined closed form is used; otherwise the three components are
/// exponentiated and multiplied.
double ssim(const std::vector<double>& x, const std::vector<double>& y,
            const SsimConstants& k);

inline constexpr int kSsimWindow = 8;

/// Mean SSIM over sliding 8x8 windows (stride 1), for localized comparison.
double ssim_windowed(const std::vector<double>& x, const std::vector<double>& y, int width,
                     int height, const SsimConstants& k);

double mse(const std::vector<double>& x, const std::vector<double>& y);

/// Per-model evaluation over a sample set.
struct EvalEntry {
    fusion::FuseMode mode = fusion::FuseMode::fusion;
    std::vector<double> ssim_values;  // one per sample
    std::vector<double> mse_values;
    double mean_ssim = 0.0;
    double mean_mse = 0.0;
};

struct EvalReport {
    std::vector<EvalEntry> entries;  // one per supplied model
};

/// Runs each model over the samples (masking the fused input according to
/// the model's own ablation mode) and reports per-sample and mean SSIM/MSE
/// against the stored depth maps. With `windowed` the sliding-window SSIM
/// variant is used instead of whole-image statistics.
EvalReport evaluate_suite(const std::vector<const model::MlpModel*>& models,
                          const std::vector<io::Sample>& samples, const SsimConstants& k,
                          bool windowed = false);

}  // namespace fusim::metrics
