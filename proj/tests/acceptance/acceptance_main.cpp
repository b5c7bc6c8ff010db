// End-to-end acceptance checks for the fused photon/radar imaging stack.
// Each numbered check prints exactly one [PASS]/[FAIL] line; the process
// exits nonzero if any check fails. argv[1] is the path to the fusim CLI
// binary, used by the reproducibility checks.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fusim/common.hpp"
#include "fusim/config.hpp"
#include "fusim/fusion.hpp"
#include "fusim/io.hpp"
#include "fusim/metrics.hpp"
#include "fusim/model.hpp"
#include "fusim/photon.hpp"
#include "fusim/pipeline.hpp"
#include "fusim/radar.hpp"
#include "fusim/rng.hpp"
#include "fusim/scene.hpp"

namespace fs = std::filesystem;
using namespace fusim;

namespace {

// Benchmark knobs: sized so the three trainings finish well inside the
// runtime budget on one desktop core while leaving a clear quality gap
// between the fused model and the single-sensor ablations.
constexpr std::size_t kBenchSamples = 2000;
constexpr int kBenchEpochs = 160;
constexpr std::size_t kBenchPairs = 50;
const std::vector<std::size_t> kBenchHidden = {256, 256};

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

bool report(int index, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] %d. %s (%s; %.1f s)\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
    return pass;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

int run_cmd(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    if (rc == -1 || !WIFEXITED(rc)) return -1;
    return WEXITSTATUS(rc);
}

// Forward pass through a checkpointed model on a stored sample, giving the
// normalized depth image the model believes in.
std::vector<double> predict_normalized(const model::MlpModel& m, const std::vector<float>& fused) {
    return model::forward(m, model::mask_for_mode(m, fused));
}

std::vector<double> truth_normalized(const io::Sample& s) {
    return std::vector<double>(s.truth.begin(), s.truth.end());
}

config::RunConfig noise_free_config() {
    config::RunConfig cfg = config::default_config();
    cfg.photon.noise_enabled = false;
    cfg.radar.noise_floor = 0.0;
    return cfg;
}

// ---------------------------------------------------------------------------
// 1. Mirror invariance of the single-detector histogram, and radar contrast.

bool check_mirror_invariance() {
    Timer timer;
    const config::RunConfig cfg = noise_free_config();
    const radar::LfmWaveform wf = cfg.make_waveform();

    double hist_max_diff = 0.0;
    double min_radar_rel_diff = 1e300;
    int off_plane = 0;
    bool radar_ok = true;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const scene::SceneSpec spec = scene::generate_scene(seed, cfg.generation);
        const scene::SceneSpec twin =
            scene::mirror_scene(spec, cfg.generation.rig.spd_pos.x);
        const pipeline::SampleRecord a = pipeline::simulate_scene(cfg, wf, spec, seed);
        const pipeline::SampleRecord b = pipeline::simulate_scene(cfg, wf, twin, seed);

        hist_max_diff =
            std::max(hist_max_diff, max_abs_diff(a.histogram.counts, b.histogram.counts));

        const double off =
            std::abs(spec.targets[0].center.x - cfg.generation.rig.spd_pos.x);
        if (off < 0.05) continue;
        ++off_plane;
        const std::size_t p_len = a.fused.photon_len;
        double peak = 0.0;
        double diff = 0.0;
        for (std::size_t i = p_len; i < a.fused.values.size(); ++i) {
            peak = std::max({peak, a.fused.values[i], b.fused.values[i]});
            diff = std::max(diff, std::abs(a.fused.values[i] - b.fused.values[i]));
        }
        const double rel = peak > 0.0 ? diff / peak : 0.0;
        min_radar_rel_diff = std::min(min_radar_rel_diff, rel);
        if (!(rel > 1e-3)) radar_ok = false;
    }

    const double secs = timer.seconds();
    const bool pass = hist_max_diff == 0.0 && radar_ok && off_plane > 0 && secs < 60.0;
    return report(1, "mirrored scenes: identical histograms, distinct radar segments", pass,
                  "50 scenes, " + std::to_string(off_plane) +
                      " off-plane, hist max diff " + fmt(hist_max_diff) +
                      ", min radar rel diff " + fmt(min_radar_rel_diff),
                  secs);
}

// ---------------------------------------------------------------------------
// 2 & 3. The training benchmark: three models on one dataset, then held-out
// mirror pairs.

struct Benchmark {
    model::MlpModel fusion_model, photon_model, radar_model;
    double ssim_fusion = 0.0, ssim_photon = 0.0, ssim_radar = 0.0;
    double pair_mse_max = 0.0;       // photon-only prediction gap within a pair
    double discrimination = 0.0;     // fraction of members preferring own truth
    std::size_t pairs = 0;
    double seconds = 0.0;
    bool ran = false;
    std::string error;
};

Benchmark run_benchmark() {
    Benchmark bench;
    Timer timer;
    try {
        config::RunConfig cfg = noise_free_config();
        cfg.training.epochs = kBenchEpochs;
        cfg.training.seed = 1;
        cfg.hidden_dims = kBenchHidden;

        std::fprintf(stderr, "benchmark: generating %zu samples\n", kBenchSamples);
        const std::vector<io::Sample> samples =
            pipeline::generate_dataset(cfg, kBenchSamples, 1);

        auto train_mode = [&](fusion::FuseMode mode) {
            std::fprintf(stderr, "benchmark: training %s\n", fusion::mode_name(mode));
            const model::ModelMeta meta = pipeline::model_meta(cfg, mode);
            return model::train(samples, cfg.training, cfg.hidden_dims, meta);
        };
        auto [fm, fr] = train_mode(fusion::FuseMode::fusion);
        auto [pm, pr] = train_mode(fusion::FuseMode::photon_only);
        auto [rm, rr] = train_mode(fusion::FuseMode::radar_only);
        bench.fusion_model = std::move(fm);
        bench.photon_model = std::move(pm);
        bench.radar_model = std::move(rm);
        bench.ssim_fusion = fr.test_ssim.back();
        bench.ssim_photon = pr.test_ssim.back();
        bench.ssim_radar = rr.test_ssim.back();

        // Held-out mirror pairs, kept clearly off the detector plane so the
        // two members have genuinely different ground truth.
        std::fprintf(stderr, "benchmark: evaluating mirror pairs\n");
        const radar::LfmWaveform wf = cfg.make_waveform();
        const metrics::SsimConstants k = metrics::SsimConstants::make();
        std::size_t own_preferred = 0;
        std::size_t members = 0;
        for (std::uint64_t seed = 5000; seed < 6600 && bench.pairs < kBenchPairs; ++seed) {
            const scene::SceneSpec spec = scene::generate_scene(seed, cfg.generation);
            if (std::abs(spec.targets[0].center.x) < 0.15) continue;
            ++bench.pairs;
            const scene::SceneSpec twin = scene::mirror_scene(spec, 0.0);
            const pipeline::SampleRecord a = pipeline::simulate_scene(cfg, wf, spec, seed);
            const pipeline::SampleRecord b = pipeline::simulate_scene(cfg, wf, twin, seed);

            const std::vector<double> photon_a =
                predict_normalized(bench.photon_model, a.sample.fused);
            const std::vector<double> photon_b =
                predict_normalized(bench.photon_model, b.sample.fused);
            bench.pair_mse_max = std::max(bench.pair_mse_max, metrics::mse(photon_a, photon_b));

            const std::vector<double> truth_a = truth_normalized(a.sample);
            const std::vector<double> truth_b = truth_normalized(b.sample);
            const std::vector<double> fused_a =
                predict_normalized(bench.fusion_model, a.sample.fused);
            const std::vector<double> fused_b =
                predict_normalized(bench.fusion_model, b.sample.fused);
            members += 2;
            if (metrics::ssim(fused_a, truth_a, k) > metrics::ssim(fused_a, truth_b, k)) {
                ++own_preferred;
            }
            if (metrics::ssim(fused_b, truth_b, k) > metrics::ssim(fused_b, truth_a, k)) {
                ++own_preferred;
            }
        }
        bench.discrimination =
            members > 0 ? static_cast<double>(own_preferred) / static_cast<double>(members) : 0.0;
        bench.ran = true;
    } catch (const std::exception& e) {
        bench.error = e.what();
    }
    bench.seconds = timer.seconds();
    return bench;
}

bool check_pair_separation(const Benchmark& bench) {
    if (!bench.ran) {
        return report(2, "held-out mirror pairs: ambiguity is broken by the fused model", false,
                      "benchmark failed: " + bench.error, bench.seconds);
    }
    const bool pass = bench.pairs == kBenchPairs && bench.pair_mse_max < 1e-12 &&
                      bench.discrimination >= 0.90 && bench.seconds < 1200.0;
    return report(2, "held-out mirror pairs: ambiguity is broken by the fused model", pass,
                  std::to_string(bench.pairs) + " pairs, single-detector pred gap " +
                      fmt(bench.pair_mse_max) + ", own-truth preference " +
                      fmt(100.0 * bench.discrimination, 3) + "%",
                  bench.seconds);
}

bool check_ssim_ordering(const Benchmark& bench) {
    if (!bench.ran) {
        return report(3, "fused model leads both ablations by 0.02 mean SSIM", false,
                      "benchmark failed: " + bench.error, 0.0);
    }
    const bool pass = bench.ssim_fusion >= bench.ssim_photon + 0.02 &&
                      bench.ssim_fusion >= bench.ssim_radar + 0.02;
    return report(3, "fused model leads both ablations by 0.02 mean SSIM", pass,
                  "fusion " + fmt(bench.ssim_fusion) + ", photon " + fmt(bench.ssim_photon) +
                      ", radar " + fmt(bench.ssim_radar),
                  0.0);
}

// ---------------------------------------------------------------------------
// 4. Matched-filter placement, two-point resolution, nominal resolution.

struct PeakScan {
    std::vector<std::size_t> maxima;  // local maxima above the floor
    double valley_ratio = 1.0;        // valley / smaller(two largest peaks)
};

PeakScan scan_peaks(const radar::RangeProfile& p, double floor_frac) {
    PeakScan scan;
    const double peak = *std::max_element(p.magnitudes.begin(), p.magnitudes.end());
    for (std::size_t i = 1; i + 1 < p.magnitudes.size(); ++i) {
        if (p.magnitudes[i] >= p.magnitudes[i - 1] && p.magnitudes[i] > p.magnitudes[i + 1] &&
            p.magnitudes[i] > floor_frac * peak) {
            scan.maxima.push_back(i);
        }
    }
    if (scan.maxima.size() >= 2) {
        // Two largest maxima, then the deepest point between them.
        std::vector<std::size_t> by_height = scan.maxima;
        std::sort(by_height.begin(), by_height.end(), [&](std::size_t a, std::size_t b) {
            return p.magnitudes[a] > p.magnitudes[b];
        });
        std::size_t lo = std::min(by_height[0], by_height[1]);
        std::size_t hi = std::max(by_height[0], by_height[1]);
        double valley = p.magnitudes[lo];
        for (std::size_t i = lo; i <= hi; ++i) valley = std::min(valley, p.magnitudes[i]);
        scan.valley_ratio = valley / p.magnitudes[by_height[1]];
    }
    return scan;
}

bool check_matched_filter() {
    Timer timer;
    std::ostringstream detail;
    bool pass = true;

    radar::RadarParams params;
    params.falloff_exponent = 0.0;  // equal-amplitude returns
    params.noise_floor = 0.0;

    // Point placement on the default range grid.
    const radar::LfmWaveform wf = radar::synthesize_lfm(10e-6, 60e9, 2.99792458e13, 1e9);
    const double bin_m = 7.0 / 64.0;
    double worst_err = 0.0;
    for (double r : {2.0, 3.5, 5.0}) {
        const std::vector<scene::ScenePoint> cloud = {{{0.0, 0.0, r}, 1.0}};
        const radar::EchoResult echo = radar::simulate_echo(cloud, {0.0, 0.0, 0.0}, wf, params);
        const radar::RangeProfile p = radar::matched_filter(echo, wf, bin_m, 7.0);
        const std::size_t arg =
            std::max_element(p.magnitudes.begin(), p.magnitudes.end()) - p.magnitudes.begin();
        const double center = (static_cast<double>(arg) + 0.5) * bin_m;
        worst_err = std::max(worst_err, std::abs(center - r));
    }
    if (worst_err > bin_m) pass = false;
    detail << "peak error " << fmt(worst_err, 3) << " m";

    // Two-point separation. The carrier sits at an odd multiple of a
    // quarter wavelength across the resolved spacing, so the resolvable
    // pair interferes destructively between the lobes.
    const double bandwidth = 299.792458e6;
    const double res = radar::range_resolution(bandwidth);
    const radar::LfmWaveform wf_fine =
        radar::synthesize_lfm(10e-6, 201.25 * bandwidth, 2.99792458e13, 1e9);
    auto two_point_profile = [&](double separation) {
        const std::vector<scene::ScenePoint> cloud = {{{0.0, 0.0, 3.0}, 1.0},
                                                      {{0.0, 0.0, 3.0 + separation}, 1.0}};
        const radar::EchoResult echo =
            radar::simulate_echo(cloud, {0.0, 0.0, 0.0}, wf_fine, params);
        return radar::matched_filter(echo, wf_fine, 0.02, 7.0);
    };
    const PeakScan wide = scan_peaks(two_point_profile(1.2 * res), 0.5);
    const double kMinus3Db = std::pow(10.0, -3.0 / 20.0);
    const bool resolved = wide.maxima.size() == 2 && wide.valley_ratio <= kMinus3Db;
    if (!resolved) pass = false;
    detail << ", wide pair " << wide.maxima.size() << " peaks valley "
           << fmt(20.0 * std::log10(std::max(wide.valley_ratio, 1e-30)), 3) << " dB";

    const PeakScan narrow = scan_peaks(two_point_profile(0.9 * res), 0.5);
    const bool merged = narrow.maxima.size() < 2 || narrow.valley_ratio > kMinus3Db;
    if (!merged) pass = false;
    detail << ", narrow pair " << narrow.maxima.size() << " peak(s)";

    // Nominal resolution lands exactly on half a meter.
    if (std::abs(res - 0.5) > 1e-9) pass = false;
    if (std::abs(radar::range_resolution(wf.bandwidth()) - 0.5) > 1e-9) pass = false;
    detail << ", c/(2B) = " << fmt(res, 10) << " m";

    const double secs = timer.seconds();
    if (secs >= 60.0) pass = false;
    return report(4, "matched filter: placement, two-point resolution, 0.50 m nominal", pass,
                  detail.str(), secs);
}

// ---------------------------------------------------------------------------
// 5. Backpropagation against central finite differences.

bool check_gradients() {
    Timer timer;
    double max_rel = 0.0;
    const double eps = 1e-4;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        model::ModelMeta meta;
        meta.photon_len = 4;
        meta.radar_len = 4;
        meta.map_width = 2;
        meta.map_height = 2;
        model::MlpModel m = model::init_model({8, 6, 4}, seed, meta);
        Rng rng(seed + 500);
        std::vector<double> x(8), truth(4);
        for (double& v : x) v = rng.uniform01();
        for (double& v : truth) v = rng.uniform01();
        const model::Gradients g = model::backward(m, x, truth);

        auto probe = [&](double* p, double analytic) {
            const double save = *p;
            *p = save + eps;
            const double up = model::loss_mse(model::forward(m, x), truth);
            *p = save - eps;
            const double down = model::loss_mse(model::forward(m, x), truth);
            *p = save;
            const double fd = (up - down) / (2.0 * eps);
            const double denom = std::max({std::abs(fd), std::abs(analytic), 1e-8});
            max_rel = std::max(max_rel, std::abs(fd - analytic) / denom);
        };
        for (std::size_t l = 0; l < m.weights.size(); ++l) {
            for (std::size_t i = 0; i < m.weights[l].a.size(); ++i) {
                probe(&m.weights[l].a[i], g.dw[l].a[i]);
            }
            for (std::size_t i = 0; i < m.biases[l].size(); ++i) {
                probe(&m.biases[l][i], g.db[l][i]);
            }
        }
    }
    const double secs = timer.seconds();
    const bool pass = max_rel < 1e-4 && secs < 60.0;
    return report(5, "analytic gradients match central finite differences", pass,
                  "20 seeds, max relative error " + fmt(max_rel), secs);
}

// ---------------------------------------------------------------------------
// 6. SSIM against a direct-formula oracle.

bool check_ssim_oracle() {
    Timer timer;
    const metrics::SsimConstants k = metrics::SsimConstants::make();
    Rng rng(77);
    double max_err = 0.0;
    double max_identity_err = 0.0;
    bool symmetric = true;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(64), y(64);
        for (double& v : x) v = rng.uniform01();
        for (double& v : y) v = rng.uniform01();

        double mx = 0.0, my = 0.0;
        for (int i = 0; i < 64; ++i) {
            mx += x[i];
            my += y[i];
        }
        mx /= 64.0;
        my /= 64.0;
        double vx = 0.0, vy = 0.0, cov = 0.0;
        for (int i = 0; i < 64; ++i) {
            vx += (x[i] - mx) * (x[i] - mx);
            vy += (y[i] - my) * (y[i] - my);
            cov += (x[i] - mx) * (y[i] - my);
        }
        vx /= 64.0;
        vy /= 64.0;
        cov /= 64.0;
        const double oracle = (2.0 * mx * my + k.c1) * (2.0 * cov + k.c2) /
                              ((mx * mx + my * my + k.c1) * (vx + vy + k.c2));

        const double got = metrics::ssim(x, y, k);
        max_err = std::max(max_err, std::abs(got - oracle));
        max_identity_err = std::max(max_identity_err, std::abs(metrics::ssim(x, x, k) - 1.0));
        if (metrics::ssim(x, y, k) != metrics::ssim(y, x, k)) symmetric = false;
    }
    const double secs = timer.seconds();
    const bool pass = max_err <= 1e-10 && max_identity_err <= 1e-9 && symmetric && secs < 60.0;
    return report(6, "SSIM matches the closed-form oracle, identity, symmetry", pass,
                  "100 pairs, max oracle gap " + fmt(max_err) + ", identity gap " +
                      fmt(max_identity_err) + (symmetric ? ", symmetric" : ", NOT symmetric"),
                  secs);
}

// ---------------------------------------------------------------------------
// 7. Conservation and bit-level reproducibility, through the CLI.

bool check_conservation_determinism(const std::string& cli) {
    Timer timer;
    std::ostringstream detail;
    bool pass = true;

    // IRF smoothing must conserve total counts.
    double worst_rel = 0.0;
    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        photon::TemporalHistogram h;
        h.bin_width = 100e-12;
        h.counts.resize(512, 0.0);
        const int spikes = 1 + static_cast<int>(rng.index(8));
        for (int s = 0; s < spikes; ++s) {
            h.counts[rng.index(512)] += rng.uniform(0.5, 100.0);
        }
        photon::IrfModel irf;
        irf.fwhm = rng.uniform(50e-12, 800e-12);
        const photon::TemporalHistogram out = photon::convolve_irf(h, irf);
        double before = 0.0, after = 0.0;
        for (double v : h.counts) before += v;
        for (double v : out.counts) after += v;
        worst_rel = std::max(worst_rel, std::abs(after - before) / before);
    }
    if (worst_rel > 1e-9) pass = false;
    detail << "irf total drift " << fmt(worst_rel);

    // CLI generation and training, twice each, must produce identical bytes.
    const fs::path dir = fs::temp_directory_path() / "fusim_acceptance";
    std::error_code ec;
    fs::remove_all(dir, ec);
    fs::create_directories(dir);
    const std::string ini = (dir / "tiny.ini").string();
    io::write_text_file(ini,
                        "[render]\nmap_width = 16\nmap_height = 16\n"
                        "[photon]\nn_bins = 64\nbin_width = 1e-9\n"
                        "[radar]\nn_bins = 16\nview_grid = 64\n"
                        "pulse_width = 1e-6\nchirp_rate = 2.99792458e14\n"
                        "[train]\nhidden_dims = 32\nepochs = 5\nbatch_size = 8\n");
    const std::string log = (dir / "cli.log").string();
    auto cli_run = [&](const std::string& args) {
        return run_cmd("'" + cli + "' " + args + " >> '" + log + "' 2>&1");
    };
    const std::string g1 = (dir / "g1.ftds").string();
    const std::string g2 = (dir / "g2.ftds").string();
    const std::string gen_args = "gen --config '" + ini + "' --count 12 --seed 9 --out '";
    if (cli_run(gen_args + g1 + "'") != 0) pass = false;
    if (cli_run(gen_args + g2 + "'") != 0) pass = false;
    const std::string bytes_g1 = io::read_text_file(g1);
    if (bytes_g1 != io::read_text_file(g2)) pass = false;
    detail << ", gen rerun " << (bytes_g1 == io::read_text_file(g2) ? "identical" : "DIFFERS");

    const std::string m1 = (dir / "m1.ftmk").string();
    const std::string m2 = (dir / "m2.ftmk").string();
    const std::string train_args =
        "train --data '" + g1 + "' --config '" + ini + "' --out-model '";
    if (cli_run(train_args + m1 + "'") != 0) pass = false;
    if (cli_run(train_args + m2 + "'") != 0) pass = false;
    const std::string bytes_m1 = io::read_text_file(m1);
    if (bytes_m1 != io::read_text_file(m2)) pass = false;
    detail << ", train rerun " << (bytes_m1 == io::read_text_file(m2) ? "identical" : "DIFFERS");

    // Evaluation and single-sample inference must run cleanly on those
    // artifacts.
    if (cli_run("eval --model '" + m1 + "' --data '" + g1 + "'") != 0) pass = false;
    const config::RunConfig tiny = config::load_config(ini);
    const pipeline::SampleRecord rec =
        pipeline::simulate_sample(tiny, tiny.make_waveform(), 3);
    const std::string hcsv = (dir / "h.csv").string();
    const std::string pcsv = (dir / "p.csv").string();
    io::write_histogram_csv(rec.histogram, hcsv);
    io::write_profile_csv(rec.profile, pcsv);
    const std::string pgm = (dir / "pred.pgm").string();
    if (cli_run("infer --model '" + m1 + "' --histogram-csv '" + hcsv + "' --profile-csv '" +
                pcsv + "' --out-pgm '" + pgm + "'") != 0) {
        pass = false;
    }
    if (io::read_text_file(pgm).rfind("P5\n", 0) != 0) pass = false;

    // Round trips are value-exact; a corrupted byte is caught by checksum.
    const auto [gh, gsamples] = io::read_dataset(g1);
    const std::string g3 = (dir / "g3.ftds").string();
    io::write_dataset(g3, gh, gsamples);
    if (io::read_text_file(g3) != bytes_g1) pass = false;
    std::string corrupted = bytes_g1;
    corrupted[60] = static_cast<char>(corrupted[60] ^ 0x04);
    const std::string gbad = (dir / "gbad.ftds").string();
    io::write_text_file(gbad, corrupted);
    bool caught = false;
    try {
        (void)io::read_dataset(gbad);
    } catch (const ChecksumError&) {
        caught = true;
    }
    if (!caught) pass = false;
    detail << ", corruption " << (caught ? "caught" : "MISSED");

    const model::MlpModel loaded = model::load_model(m1);
    const std::string m3 = (dir / "m3.ftmk").string();
    model::save_model(loaded, m3);
    if (io::read_text_file(m3) != bytes_m1) pass = false;

    fs::remove_all(dir, ec);
    return report(7, "conservation and bit-exact reproducibility through the CLI", pass,
                  detail.str(), timer.seconds());
}

// ---------------------------------------------------------------------------
// 8. A tiny training run can drive the loss into the floor.

bool check_overfit() {
    Timer timer;
    config::RunConfig cfg = noise_free_config();
    const std::vector<io::Sample> samples = pipeline::generate_dataset(cfg, 10, 77);
    model::TrainConfig tc;
    tc.learning_rate = 3e-3;
    tc.epochs = 2000;
    tc.batch_size = 4;
    tc.split_ratio = 0.9;
    tc.seed = 1;
    const model::ModelMeta meta = pipeline::model_meta(cfg, fusion::FuseMode::fusion);
    const auto [m, rep] = model::train(samples, tc, {64}, meta);
    double best = 1e300;
    int at = -1;
    for (std::size_t e = 0; e < rep.train_loss.size(); ++e) {
        if (rep.train_loss[e] < best) {
            best = rep.train_loss[e];
            at = static_cast<int>(e) + 1;
        }
    }
    const double secs = timer.seconds();
    const bool pass = best < 1e-3 && secs < 60.0;
    return report(8, "ten-sample training reaches the memorization floor", pass,
                  "best loss " + fmt(best) + " at epoch " + std::to_string(at), secs);
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    std::printf("fused imaging acceptance checks\n");
    std::fflush(stdout);

    int passed = 0;
    int total = 0;
    auto tally = [&](bool ok) {
        ++total;
        if (ok) ++passed;
    };

    tally(check_mirror_invariance());
    const Benchmark bench = run_benchmark();
    tally(check_pair_separation(bench));
    tally(check_ssim_ordering(bench));
    tally(check_matched_filter());
    tally(check_gradients());
    tally(check_ssim_oracle());
    if (cli.empty()) {
        tally(report(7, "conservation and bit-exact reproducibility through the CLI", false,
                     "no CLI binary path on the command line", 0.0));
    } else {
        tally(check_conservation_determinism(cli));
    }
    tally(check_overfit());

    std::printf("%d/%d criteria passed\n", passed, total);
    return passed == total ? 0 : 1;
}
