#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fusim/config.hpp"
#include "fusim/fusion.hpp"
#include "fusim/io.hpp"

namespace fusim::pipeline {

/// Everything produced while simulating one sample. `sample` is the
/// persisted form: the fused vector and normalized truth map quantized to
/// 32-bit floats, exactly as a dataset file stores them.
struct SampleRecord {
    scene::SceneSpec scene_spec;
    scene::DepthMap truth;
    photon::TemporalHistogram histogram;
    radar::RangeProfile profile;
    fusion::FusedVector fused;
    io::Sample sample;
};

/// Quantizes a fused vector and truth map into the dataset's 32-bit form.
io::Sample to_sample(const fusion::FusedVector& fused, const scene::DepthMap& truth);

/// Simulates one sample end to end from an already built scene. Noise
/// seeds are derived from scene_seed, so a record is a pure function of
/// (config, scene, scene_seed).
SampleRecord simulate_scene(const config::RunConfig& cfg, const radar::LfmWaveform& wf,
                            const scene::SceneSpec& scene_spec, std::uint64_t scene_seed);

/// generate_scene + simulate_scene for one derived sample seed.
SampleRecord simulate_sample(const config::RunConfig& cfg, const radar::LfmWaveform& wf,
                             std::uint64_t sample_seed);

/// Simulates `count` samples with per-sample seeds derive_seed(seed, index),
/// so the result is independent of evaluation order. `progress`, when set,
/// is called after each completed sample.
std::vector<io::Sample> generate_dataset(
    const config::RunConfig& cfg, std::size_t count, std::uint64_t seed,
    const std::function<void(std::size_t done, std::size_t total)>& progress = nullptr);

/// Dataset header describing samples produced by `cfg`.
io::DatasetHeader dataset_header(const config::RunConfig& cfg, std::size_t count);

/// Model metadata matching `cfg` for a given ablation mode.
model::ModelMeta model_meta(const config::RunConfig& cfg, fusion::FuseMode mode);

}  // namespace fusim::pipeline
