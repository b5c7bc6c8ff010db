#include "fusim/radar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fusim/common.hpp"
#include "fusim/rng.hpp"

namespace fusim::radar {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::size_t pulse_samples(const LfmWaveform& wf) { return wf.samples.size(); }

// Magnitude of the pulse autocorrelation at integer lags, used by the
// incoherent profile mode. Index i holds lag i - (N - 1).
std::vector<double> autocorr_magnitude(const LfmWaveform& wf) {
    const std::size_t n = wf.samples.size();
    std::vector<double> acf(2 * n - 1, 0.0);
    for (std::size_t li = 0; li < acf.size(); ++li) {
        const long lag = static_cast<long>(li) - static_cast<long>(n - 1);
        std::complex<double> acc{0.0, 0.0};
        const std::size_t lo = lag < 0 ? static_cast<std::size_t>(-lag) : 0;
        const std::size_t hi = lag < 0 ? n : n - static_cast<std::size_t>(lag);
        for (std::size_t i = lo; i < hi; ++i) {
            acc += std::conj(wf.samples[i]) *
                   wf.samples[static_cast<std::size_t>(static_cast<long>(i) + lag)];
        }
        acf[li] = std::abs(acc);
    }
    return acf;
}

double interp_linear(const std::vector<double>& v, double x) {
    if (x <= 0.0) return x == 0.0 ? v.front() : (x > -1.0 ? v.front() * (1.0 + x) : 0.0);
    if (x >= static_cast<double>(v.size() - 1)) {
        const double over = x - static_cast<double>(v.size() - 1);
        return over < 1.0 ? v.back() * (1.0 - over) : 0.0;
    }
    const std::size_t i = static_cast<std::size_t>(x);
    const double f = x - static_cast<double>(i);
    return v[i] * (1.0 - f) + v[i + 1] * f;
}

}  // namespace

std::complex<double> LfmWaveform::sample_at(double t) const {
    const double half = 0.5 * static_cast<double>(samples.size()) / sample_rate;
    if (t < -half || t >= half) return {0.0, 0.0};
    return std::polar(1.0, kPi * chirp_rate * t * t);
}

LfmWaveform synthesize_lfm(double pulse_width, double center_freq, double chirp_rate,
                           double sample_rate) {
    if (!(pulse_width > 0.0)) throw Error("synthesize_lfm: pulse width must be positive");
    if (!(sample_rate > 0.0)) throw Error("synthesize_lfm: sample rate must be positive");
    if (chirp_rate == 0.0) throw Error("synthesize_lfm: chirp rate must be non-zero");
    const double bandwidth = std::abs(chirp_rate) * pulse_width;
    const double min_fs = 2.5 * bandwidth;
    if (sample_rate < min_fs) {
        std::ostringstream msg;
        msg << "synthesize_lfm: sample rate " << sample_rate
            << " Hz undersamples the chirp; minimum is " << min_fs
            << " Hz (2.5x the swept bandwidth)";
        throw Error(msg.str());
    }

    LfmWaveform wf;
    wf.pulse_width = pulse_width;
    wf.center_freq = center_freq;
    wf.chirp_rate = chirp_rate;
    wf.sample_rate = sample_rate;
    const std::size_t n = static_cast<std::size_t>(std::llround(pulse_width * sample_rate));
    if (n < 2) throw Error("synthesize_lfm: pulse shorter than two samples");
    wf.samples.resize(n);
    const double half = 0.5 * static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) - half) / sample_rate;
        wf.samples[i] = std::polar(1.0, kPi * chirp_rate * t * t);
    }
    return wf;
}

EchoResult simulate_echo(const std::vector<scene::ScenePoint>& points,
                         const Vec3& radar_pos, const LfmWaveform& wf,
                         const RadarParams& params) {
    if (points.empty()) throw Error("simulate_echo: empty point cloud");
    if (wf.samples.empty()) throw Error("simulate_echo: waveform has no samples");
    if (!(params.max_range > 0.0)) throw Error("simulate_echo: max_range must be positive");

    const std::size_t n = pulse_samples(wf);
    const double fs = wf.sample_rate;
    const double dt = 1.0 / fs;
    const double half = 0.5 * static_cast<double>(n);
    const std::size_t window =
        static_cast<std::size_t>(std::ceil(2.0 * params.max_range / kSpeedOfLight * fs)) +
        n + 1;

    EchoResult out;
    out.t_start = -half * dt;
    out.samples.assign(window, {0.0, 0.0});

    for (const auto& p : points) {
        const double r = distance(p.position, radar_pos);
        if (r == 0.0) throw Error("simulate_echo: point coincides with the radar");
        if (r > params.max_range) {
            ++out.dropped;
            continue;
        }
        const double t0 = 2.0 * r / kSpeedOfLight;
        const double amp = p.reflectivity / std::pow(r, params.falloff_exponent);
        const double carrier_phase = -2.0 * kPi * wf.center_freq * t0;

        // Quadratic-phase recurrence: evaluates the delayed chirp exactly at
        // each sample time without a trig call per sample.
        const std::size_t m0 = static_cast<std::size_t>(std::ceil(t0 * fs));
        const double tau0 = (static_cast<double>(m0) - half) * dt - t0;
        std::complex<double> z =
            std::polar(amp, kPi * wf.chirp_rate * tau0 * tau0 + carrier_phase);
        std::complex<double> w =
            std::polar(1.0, kPi * wf.chirp_rate * dt * (2.0 * tau0 + dt));
        const std::complex<double> w2 =
            std::polar(1.0, 2.0 * kPi * wf.chirp_rate * dt * dt);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t m = m0 + i;
            if (m >= window) break;
            out.samples[m] += z;
            z *= w;
            w *= w2;
            if ((i & 1023u) == 1023u) {
                z *= amp / std::abs(z);  // keep recurrence drift below noise
                w /= std::abs(w);
            }
        }
    }

    if (params.noise_floor > 0.0) {
        Rng rng(derive_seed(params.rng_seed, 0x7ada7ull));
        const double s = params.noise_floor / std::sqrt(2.0);
        for (auto& v : out.samples) {
            v += std::complex<double>(s * rng.normal(), s * rng.normal());
        }
    }
    return out;
}

RangeProfile matched_filter(const EchoResult& echo, const LfmWaveform& wf,
                            double range_bin_m, double max_range) {
    const std::size_t n = pulse_samples(wf);
    if (n == 0) throw Error("matched_filter: waveform has no samples");
    if (echo.samples.size() < n) {
        throw ShapeError("matched_filter: echo window shorter than the replica");
    }
    if (!(range_bin_m > 0.0) || !(max_range > 0.0)) {
        throw Error("matched_filter: range_bin_m and max_range must be positive");
    }

    const std::size_t lags = echo.samples.size() - n + 1;
    std::vector<double> mag(lags, 0.0);
    for (std::size_t k = 0; k < lags; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            acc += std::conj(wf.samples[i]) * echo.samples[i + k];
        }
        mag[k] = std::abs(acc);
    }

    // Lag k corresponds to delay k / f_s, i.e. range k * c / (2 f_s).
    const double meters_per_lag = kSpeedOfLight / (2.0 * wf.sample_rate);
    const std::size_t n_bins =
        static_cast<std::size_t>(std::llround(max_range / range_bin_m));
    RangeProfile profile;
    profile.range_bin_m = range_bin_m;
    profile.max_range = max_range;
    profile.magnitudes.resize(n_bins);
    for (std::size_t j = 0; j < n_bins; ++j) {
        const double r = (static_cast<double>(j) + 0.5) * range_bin_m;
        profile.magnitudes[j] = interp_linear(mag, r / meters_per_lag);
    }
    return profile;
}

double range_resolution(double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) throw Error("range_resolution: bandwidth must be positive");
    return kSpeedOfLight / (2.0 * bandwidth_hz);
}

RangeProfile simulate_range_profile(const scene::SceneSpec& scene_spec,
                                    const scene::RenderParams& render_params,
                                    const LfmWaveform& wf, const RadarParams& params) {
    scene::RenderParams view = render_params;
    view.width = params.view_grid;
    view.height = params.view_grid;
    view.fov_x = params.view_fov;
    view.fov_y = params.view_fov;
    view.no_return = params.max_range;
    const scene::DepthMap dm =
        scene::render_depth_map(scene_spec, view, scene_spec.rig.radar_pos);
    const auto cloud = scene::point_cloud(dm, scene_spec.rig.radar_pos);

    // Nothing in view means nothing echoes; an empty profile, not an error.
    if (cloud.empty()) {
        RangeProfile profile;
        profile.range_bin_m = params.range_bin_m;
        profile.max_range = params.max_range;
        profile.magnitudes.assign(
            static_cast<std::size_t>(std::llround(params.max_range / params.range_bin_m)), 0.0);
        return profile;
    }

    if (params.coherent) {
        const EchoResult echo = simulate_echo(cloud, scene_spec.rig.radar_pos, wf, params);
        return matched_filter(echo, wf, params.range_bin_m, params.max_range);
    }

    // Incoherent mode: sum of per-point compressed-envelope magnitudes,
    // evaluated from the tabulated pulse autocorrelation.
    if (cloud.empty()) throw Error("simulate_range_profile: empty point cloud");
    const std::vector<double> acf = autocorr_magnitude(wf);
    const double fs = wf.sample_rate;
    const double meters_per_lag = kSpeedOfLight / (2.0 * fs);
    const std::size_t n_bins =
        static_cast<std::size_t>(std::llround(params.max_range / params.range_bin_m));
    const double center = static_cast<double>(pulse_samples(wf) - 1);

    RangeProfile profile;
    profile.range_bin_m = params.range_bin_m;
    profile.max_range = params.max_range;
    profile.magnitudes.assign(n_bins, 0.0);
    for (const auto& p : cloud) {
        const double r = distance(p.position, scene_spec.rig.radar_pos);
        if (r == 0.0) throw Error("simulate_range_profile: point coincides with the radar");
        if (r > params.max_range) continue;
        const double amp = p.reflectivity / std::pow(r, params.falloff_exponent);
        const double delay_samples = 2.0 * r / kSpeedOfLight * fs;
        for (std::size_t j = 0; j < n_bins; ++j) {
            const double bin_r = (static_cast<double>(j) + 0.5) * params.range_bin_m;
            const double x = center + bin_r / meters_per_lag - delay_samples;
            profile.magnitudes[j] += amp * interp_linear(acf, x);
        }
    }
    return profile;
}

}  // namespace fusim::radar
