#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "fusim/scene.hpp"
#include "fusim/vec3.hpp"

namespace fusim::radar {

/// Sampled linear-FM pulse at complex baseband. Samples cover
/// t in [-N/2, N/2) / sample_rate with N = round(pulse_width * sample_rate);
/// the carrier enters only through per-echo phase rotation.
struct LfmWaveform {
    double pulse_width = 10e-6;  // seconds
    double center_freq = 60e9;   // Hz
    // Swept bandwidth K * T_p = 299.792458 MHz, which makes the nominal
    // range resolution c / (2B) exactly 0.50 m.
    double chirp_rate = 2.99792458e13;  // Hz/s
    double sample_rate = 1e9;           // complex baseband samples per second
    std::vector<std::complex<double>> samples;

    double bandwidth() const { return std::abs(chirp_rate) * pulse_width; }

    /// Analytic pulse value at arbitrary time; exact fractional-delay
    /// evaluation of the band-limited chirp (zero outside the pulse).
    std::complex<double> sample_at(double t) const;
};

/// Builds the baseband pulse s[n] = exp(j pi K t_n^2). The sample rate must
/// be at least 2.5x the swept bandwidth |K| * T_p; the error names the
/// minimum when it is not.
LfmWaveform synthesize_lfm(double pulse_width, double center_freq, double chirp_rate,
                           double sample_rate);

struct RadarParams {
    double falloff_exponent = 4.0;  // amplitude = rho / r^exponent
    double max_range = 7.0;         // meters; farther points are dropped
    double noise_floor = 0.0;       // complex-noise std per sample
    bool coherent = true;           // false: sum per-point envelope magnitudes
    double range_bin_m = 7.0 / 64;  // output profile bin width
    double view_fov = 1.6;          // radians; radar's own field of view
    // Side length of the radar's own back-projection grid. Must be fine
    // enough that the narrowest glyph stroke spans at least one ray; at
    // 160 the ray spacing is 0.01 rad, 4 cm at the far end of the default
    // placement range.
    int view_grid = 160;
    std::uint64_t rng_seed = 0;
};

/// Received baseband window. Sample m sits at t = (m - N/2) / sample_rate,
/// so a scatterer delayed by t0 = 2R/c first appears at index t0 * f_s.
struct EchoResult {
    std::vector<std::complex<double>> samples;
    std::size_t dropped = 0;  // points beyond max_range
    double t_start = 0.0;     // time of sample 0
};

/// Coherent echo: sum over points of
/// amplitude * s(t - t0) * exp(-j 2 pi f_c t0), t0 = 2|p - radar_pos|/c.
/// A point coincident with the radar is an error. The window spans
/// 2*max_range/c + pulse_width; optional additive complex Gaussian noise.
EchoResult simulate_echo(const std::vector<scene::ScenePoint>& points,
                         const Vec3& radar_pos, const LfmWaveform& wf,
                         const RadarParams& params);

struct RangeProfile {
    double range_bin_m = 0.0;
    double max_range = 0.0;
    std::vector<double> magnitudes;
};

/// Pulse compression by cross-correlation against the transmit replica,
/// then magnitude resampling onto range bins of width range_bin_m covering
/// [0, max_range). The echo must be at least as long as the replica.
RangeProfile matched_filter(const EchoResult& echo, const LfmWaveform& wf,
                            double range_bin_m, double max_range);

/// Nominal range resolution c / (2B) for swept bandwidth B.
double range_resolution(double bandwidth_hz);

/// Full pipeline viewed from the radar position: render from
/// rig.radar_pos with the radar's field of view, back-project, then either
/// coherent echo + matched filter or (incoherent mode) a sum of per-point
/// compressed-envelope magnitudes.
RangeProfile simulate_range_profile(const scene::SceneSpec& scene_spec,
                                    const scene::RenderParams& render_params,
                                    const LfmWaveform& wf, const RadarParams& params);

}  // namespace fusim::radar
