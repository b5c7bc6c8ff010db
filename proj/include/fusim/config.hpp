#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fusim/model.hpp"
#include "fusim/photon.hpp"
#include "fusim/radar.hpp"
#include "fusim/scene.hpp"

namespace fusim::config {

/// Every tunable of the end-to-end pipeline in one record. The defaults
/// reproduce the bench experiment: 0.5 m radar baseline, 100 ps bins over
/// 51.2 ns, 200 ps detector response, 60 GHz radar with 0.50 m range
/// resolution rebinned to 64 cells over 7 m, 32x32 depth maps, and an MLP
/// with two 1024-unit hidden layers.
struct RunConfig {
    scene::GenerationParams generation;
    scene::RenderParams render{32, 32, 0.5, 0.5, 6.0};
    photon::PhotonSimParams photon;
    photon::HistogramBinning binning;
    photon::IrfModel irf{200e-12};
    double pulse_width = 10e-6;
    double center_freq = 60e9;
    double chirp_rate = 2.99792458e13;
    double sample_rate = 1e9;
    radar::RadarParams radar;
    std::size_t radar_bins = 64;
    double baseline_m = 0.5;
    Vec3 camera_offset{0.0, 0.0, 0.0};
    model::TrainConfig training;
    std::vector<std::size_t> hidden_dims{1024, 1024};

    std::size_t photon_len() const { return static_cast<std::size_t>(binning.n_bins); }
    std::size_t radar_len() const { return radar_bins; }

    /// Synthesizes the configured transmit pulse.
    radar::LfmWaveform make_waveform() const;
};

/// The experiment preset: RunConfig defaults with derived fields (rig,
/// radar bin width) filled in.
RunConfig default_config();

/// Parses a flat key/value document with [section] headers and # comments.
/// Absent keys keep their defaults; an empty document yields
/// default_config(). Unknown sections or keys are rejected with their line
/// number; invalid values are rejected with the offending key name.
RunConfig parse_config(const std::string& text);

/// parse_config over the contents of `path`.
RunConfig load_config(const std::string& path);

}  // namespace fusim::config
