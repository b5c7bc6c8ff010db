#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "fusim/common.hpp"
#include "fusim/radar.hpp"

using namespace fusim;
using namespace fusim::radar;

namespace {

// Short pulse with the exact 0.50 m resolution bandwidth; keeps the
// cross-correlations in these tests cheap.
LfmWaveform short_pulse(double center_freq = 60e9) {
    return synthesize_lfm(1e-6, center_freq, 2.99792458e14, 1e9);
}

double energy(const std::vector<std::complex<double>>& v) {
    double e = 0.0;
    for (const auto& s : v) e += std::norm(s);
    return e;
}

RadarParams clean_params() {
    RadarParams p;
    p.falloff_exponent = 0.0;
    p.noise_floor = 0.0;
    return p;
}

std::size_t argmax_bin(const RangeProfile& p) {
    return std::max_element(p.magnitudes.begin(), p.magnitudes.end()) - p.magnitudes.begin();
}

scene::RenderParams rp_default() {
    scene::RenderParams rp;
    rp.width = 32;
    rp.height = 32;
    return rp;
}

}  // namespace

TEST_CASE("lfm samples are pure phase with a unit center sample") {
    const LfmWaveform wf = short_pulse();
    REQUIRE(wf.samples.size() == 1000);
    for (const auto& s : wf.samples) {
        CHECK(std::abs(s) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // t = 0 falls on sample N/2.
    CHECK(wf.samples[500].real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(wf.samples[500].imag() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("undersampled sweep is rejected naming the minimum rate") {
    // B = 400 MHz needs f_s >= 1 GHz at the 2.5x rule.
    CHECK_THROWS_AS((void)synthesize_lfm(1e-6, 60e9, 4e14, 0.9e9), Error);
    try {
        (void)synthesize_lfm(1e-6, 60e9, 4e14, 0.9e9);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("1e+09") != std::string::npos);
    }
}

TEST_CASE("instantaneous frequency sweeps -B/2 to +B/2") {
    // Oracle: the phase difference of adjacent samples estimates
    // f(t) = K * t, which reaches -B/2 and +B/2 at the pulse edges.
    const LfmWaveform wf = short_pulse();
    const double B = wf.bandwidth();
    const double dt = 1.0 / wf.sample_rate;
    auto freq_at = [&](std::size_t n) {
        const std::complex<double> r = wf.samples[n + 1] * std::conj(wf.samples[n]);
        return std::arg(r) / (2.0 * 3.14159265358979323846 * dt);
    };
    const std::size_t last = wf.samples.size() - 2;
    CHECK(freq_at(0) == doctest::Approx(-B / 2).epsilon(0.01));
    CHECK(freq_at(last) == doctest::Approx(B / 2).epsilon(0.01));
    // Mid-pulse the sweep passes zero; check the local slope matches K.
    const std::size_t mid = wf.samples.size() / 2;
    const double slope = (freq_at(mid + 5) - freq_at(mid - 5)) / (10.0 * dt);
    CHECK(slope == doctest::Approx(wf.chirp_rate).epsilon(0.01));
}

TEST_CASE("echo onset sits at the round-trip delay") {
    const LfmWaveform wf = short_pulse();
    RadarParams params = clean_params();
    const std::vector<scene::ScenePoint> pts = {{{0.0, 0.0, 3.0}, 1.0}};
    const EchoResult echo = simulate_echo(pts, {0, 0, 0}, wf, params);
    CHECK(echo.dropped == 0);

    const double t0 = 2.0 * 3.0 / kSpeedOfLight;
    std::size_t first = echo.samples.size();
    for (std::size_t i = 0; i < echo.samples.size(); ++i) {
        if (std::abs(echo.samples[i]) > 1e-12) {
            first = i;
            break;
        }
    }
    REQUIRE(first < echo.samples.size());
    const double onset_index = t0 * wf.sample_rate;  // 20.01 samples
    CHECK(first >= static_cast<std::size_t>(std::floor(onset_index)));
    CHECK(first <= static_cast<std::size_t>(std::ceil(onset_index)) + 1);
}

TEST_CASE("target beyond max_range gives a zero echo and a drop report") {
    const LfmWaveform wf = short_pulse();
    RadarParams params = clean_params();
    params.max_range = 7.0;
    const std::vector<scene::ScenePoint> pts = {{{0.0, 0.0, 8.0}, 1.0}};
    const EchoResult echo = simulate_echo(pts, {0, 0, 0}, wf, params);
    CHECK(echo.dropped == 1);
    CHECK(energy(echo.samples) == 0.0);
}

TEST_CASE("echo is linear in reflectivity") {
    const LfmWaveform wf = short_pulse();
    RadarParams params;
    params.noise_floor = 0.0;
    const std::vector<scene::ScenePoint> full = {{{0.1, 0.0, 3.3}, 1.0}};
    const std::vector<scene::ScenePoint> half = {{{0.1, 0.0, 3.3}, 0.5}};
    const EchoResult a = simulate_echo(full, {0, 0, 0}, wf, params);
    const EchoResult b = simulate_echo(half, {0, 0, 0}, wf, params);
    REQUIRE(a.samples.size() == b.samples.size());
    double max_err = 0.0, max_mag = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        max_err = std::max(max_err, std::abs(a.samples[i] * 0.5 - b.samples[i]));
        max_mag = std::max(max_mag, std::abs(b.samples[i]));
    }
    REQUIRE(max_mag > 0.0);
    CHECK(max_err <= 1e-9 * max_mag);
}

TEST_CASE("two-phasor interference follows the carrier phase") {
    // Oracle: equal-amplitude scatterers with two-way carrier phase
    // difference theta combine to |1 + e^{j theta}|^2 = 2 + 2 cos(theta)
    // times the single-point energy. Half-wavelength spacing gives
    // theta = 2 pi (factor 4); quarter-wavelength gives theta = pi
    // (cancellation), far from the incoherent factor 2.
    const LfmWaveform wf = short_pulse();
    const double lambda = kSpeedOfLight / wf.center_freq;
    RadarParams params = clean_params();

    const std::vector<scene::ScenePoint> single = {{{0.0, 0.0, 3.0}, 1.0}};
    const double e1 = energy(simulate_echo(single, {0, 0, 0}, wf, params).samples);
    REQUIRE(e1 > 0.0);

    const std::vector<scene::ScenePoint> half_wave = {{{0.0, 0.0, 3.0}, 1.0},
                                                      {{0.0, 0.0, 3.0 + lambda / 2}, 1.0}};
    const double e_half = energy(simulate_echo(half_wave, {0, 0, 0}, wf, params).samples);
    CHECK(e_half / e1 == doctest::Approx(4.0).epsilon(0.01));

    const std::vector<scene::ScenePoint> quarter_wave = {{{0.0, 0.0, 3.0}, 1.0},
                                                         {{0.0, 0.0, 3.0 + lambda / 4}, 1.0}};
    const double e_quarter = energy(simulate_echo(quarter_wave, {0, 0, 0}, wf, params).samples);
    CHECK(e_quarter / e1 < 0.01);  // destructive, nowhere near the incoherent 2.0
}

TEST_CASE("zero echo filters to an all-zero profile") {
    const LfmWaveform wf = short_pulse();
    EchoResult echo;
    echo.samples.assign(wf.samples.size() + 50, {0.0, 0.0});
    const RangeProfile p = matched_filter(echo, wf, 7.0 / 64, 7.0);
    CHECK(p.magnitudes.size() == 64);
    for (double m : p.magnitudes) CHECK(m == 0.0);
}

TEST_CASE("lone point peaks within one range bin") {
    const LfmWaveform wf = short_pulse();
    for (double r : {2.0, 3.5, 5.0}) {
        RadarParams params = clean_params();
        const std::vector<scene::ScenePoint> pts = {{{0.0, 0.0, r}, 1.0}};
        const EchoResult echo = simulate_echo(pts, {0, 0, 0}, wf, params);
        const RangeProfile p = matched_filter(echo, wf, params.range_bin_m, params.max_range);
        const std::size_t peak = argmax_bin(p);
        const double center = (static_cast<double>(peak) + 0.5) * p.range_bin_m;
        CHECK(std::abs(center - r) <= p.range_bin_m + 1e-12);
    }
}

TEST_CASE("resolution threshold separates and merges point pairs") {
    // Geometry chosen so the two-way carrier phase at the tested spacing
    // is destructive (f_c = 200.5 B): the resolved pair then shows a deep
    // valley, while quarter-resolution spacing still merges into one lobe.
    const double B = 2.99792458e14 * 1e-6;
    const LfmWaveform wf = short_pulse(200.5 * B);
    const double res = range_resolution(B);
    REQUIRE(res == doctest::Approx(0.5).epsilon(1e-12));
    RadarParams params = clean_params();

    auto profile_for = [&](double separation) {
        const std::vector<scene::ScenePoint> pts = {
            {{0.0, 0.0, 3.0}, 1.0}, {{0.0, 0.0, 3.0 + separation}, 1.0}};
        const EchoResult echo = simulate_echo(pts, {0, 0, 0}, wf, params);
        return matched_filter(echo, wf, params.range_bin_m, params.max_range);
    };

    // Separation exactly c/(2B): two maxima with a >= 3 dB valley.
    {
        const RangeProfile p = profile_for(res);
        const std::size_t lo = static_cast<std::size_t>(2.5 / p.range_bin_m);
        const std::size_t hi = static_cast<std::size_t>(4.2 / p.range_bin_m);
        std::vector<std::size_t> maxima;
        for (std::size_t i = lo; i <= hi; ++i) {
            if (p.magnitudes[i] >= p.magnitudes[i - 1] && p.magnitudes[i] > p.magnitudes[i + 1]) {
                maxima.push_back(i);
            }
        }
        std::sort(maxima.begin(), maxima.end(),
                  [&](std::size_t a, std::size_t b) { return p.magnitudes[a] > p.magnitudes[b]; });
        REQUIRE(maxima.size() >= 2);
        const std::size_t first = std::min(maxima[0], maxima[1]);
        const std::size_t second = std::max(maxima[0], maxima[1]);
        double valley = p.magnitudes[first];
        for (std::size_t i = first; i <= second; ++i) valley = std::min(valley, p.magnitudes[i]);
        const double smaller_peak = std::min(p.magnitudes[first], p.magnitudes[second]);
        REQUIRE(valley > 0.0);
        const double valley_db = 20.0 * std::log10(smaller_peak / valley);
        CHECK(valley_db >= 3.0);
    }

    // Separation c/(4B): a single merged lobe, no interior dip.
    {
        const RangeProfile p = profile_for(res / 2);
        const std::size_t peak = argmax_bin(p);
        const double half = p.magnitudes[peak] / 2;
        std::size_t lo = peak, hi = peak;
        while (lo > 0 && p.magnitudes[lo - 1] >= half) --lo;
        while (hi + 1 < p.magnitudes.size() && p.magnitudes[hi + 1] >= half) ++hi;
        int maxima = 0;
        for (std::size_t i = std::max<std::size_t>(lo, 1); i <= hi; ++i) {
            if (p.magnitudes[i] >= p.magnitudes[i - 1] && p.magnitudes[i] > p.magnitudes[i + 1]) {
                ++maxima;
            }
        }
        CHECK(maxima == 1);
    }
}

TEST_CASE("range_resolution returns c over twice the bandwidth") {
    CHECK(range_resolution(299.792458e6) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(range_resolution(2.0 * 299.792458e6) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK_THROWS_AS((void)range_resolution(0.0), Error);
}

TEST_CASE("default waveform hits the half-meter resolution exactly") {
    const LfmWaveform defaults;
    const double res = range_resolution(defaults.bandwidth());
    CHECK(std::abs(res - 0.5) <= 1e-9);
}

TEST_CASE("profile rebinned to half-meter bins covers 7 m in 14 bins") {
    scene::SceneSpec s;
    scene::TargetPrimitive t;
    t.kind = scene::TargetKind::box;
    t.center = {0.0, 0.0, 3.5};
    t.width = 0.5;
    t.height = 0.5;
    t.depth = 0.2;
    t.reflectivity = 0.9;
    s.targets.push_back(t);
    s.rig = scene::make_default_rig();

    const LfmWaveform wf = short_pulse();
    RadarParams params = clean_params();
    params.range_bin_m = 0.5;
    params.max_range = 7.0;
    scene::RenderParams rp;
    const RangeProfile p = simulate_range_profile(s, rp, wf, params);
    REQUIRE(p.magnitudes.size() == 14);
    const std::size_t peak = argmax_bin(p);
    CHECK(std::abs((static_cast<double>(peak) + 0.5) * 0.5 - 3.5) <= 0.5 + 1e-12);
}

TEST_CASE("incoherent profile also peaks at the target range") {
    scene::SceneSpec s;
    scene::TargetPrimitive t;
    t.kind = scene::TargetKind::box;
    t.center = {0.0, 0.0, 3.2};
    t.width = 0.4;
    t.height = 0.4;
    t.depth = 0.2;
    t.reflectivity = 0.9;
    s.targets.push_back(t);
    s.rig = scene::make_default_rig();

    const LfmWaveform wf = short_pulse();
    RadarParams params = clean_params();
    params.coherent = false;
    const RangeProfile p = simulate_range_profile(s, rp_default(), wf, params);
    const std::size_t peak = argmax_bin(p);
    const double center = (static_cast<double>(peak) + 0.5) * p.range_bin_m;
    CHECK(std::abs(center - 3.2) <= 3.0 * p.range_bin_m);
}

TEST_CASE("mirror pairs produce different profiles when off-plane") {
    scene::GenerationParams gen;
    gen.x_min = 0.15;  // keep the center well off the detector plane
    gen.x_max = 0.8;
    gen.kinds = {scene::TargetKind::box};
    const LfmWaveform wf = short_pulse();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const scene::SceneSpec s = scene::generate_scene(seed, gen);
        const scene::SceneSpec m = scene::mirror_scene(s, s.rig.spd_pos.x);
        RadarParams params = clean_params();
        const RangeProfile ps = simulate_range_profile(s, rp_default(), wf, params);
        const RangeProfile pm = simulate_range_profile(m, rp_default(), wf, params);
        double peak = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < ps.magnitudes.size(); ++i) {
            peak = std::max(peak, ps.magnitudes[i]);
            diff = std::max(diff, std::abs(ps.magnitudes[i] - pm.magnitudes[i]));
        }
        REQUIRE(peak > 0.0);
        CHECK(diff > 1e-3 * peak);
    }
}

TEST_CASE("noise is deterministic per seed") {
    const LfmWaveform wf = short_pulse();
    RadarParams params;
    params.noise_floor = 0.05;
    params.rng_seed = 123;
    const std::vector<scene::ScenePoint> pts = {{{0.0, 0.0, 3.0}, 1.0}};
    const EchoResult a = simulate_echo(pts, {0, 0, 0}, wf, params);
    const EchoResult b = simulate_echo(pts, {0, 0, 0}, wf, params);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i] == b.samples[i]);
    }
    params.rng_seed = 124;
    const EchoResult c = simulate_echo(pts, {0, 0, 0}, wf, params);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        diff = std::max(diff, std::abs(a.samples[i] - c.samples[i]));
    }
    CHECK(diff > 0.0);
}
