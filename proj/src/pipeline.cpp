#include "fusim/pipeline.hpp"

#include "fusim/common.hpp"
#include "fusim/rng.hpp"

namespace fusim::pipeline {

namespace {

// Distinct stream tags for the per-sample noise sources.
constexpr std::uint64_t kPhotonNoiseStream = 0x90701;
constexpr std::uint64_t kRadarNoiseStream = 0x4ada4;

}  // namespace

io::Sample to_sample(const fusion::FusedVector& fused, const scene::DepthMap& truth) {
    io::Sample s;
    s.fused.reserve(fused.values.size());
    for (double v : fused.values) s.fused.push_back(static_cast<float>(v));
    s.truth.reserve(truth.depth.size());
    for (double d : truth.depth) s.truth.push_back(static_cast<float>(d / truth.no_return));
    return s;
}

SampleRecord simulate_scene(const config::RunConfig& cfg, const radar::LfmWaveform& wf,
                            const scene::SceneSpec& scene_spec, std::uint64_t scene_seed) {
    SampleRecord rec;
    rec.scene_spec = scene_spec;
    rec.truth = scene::render_depth_map(scene_spec, cfg.render);
    rec.histogram = photon::simulate_photon_histogram(
        scene_spec, cfg.render, cfg.photon, cfg.binning, cfg.irf,
        derive_seed(scene_seed, kPhotonNoiseStream));
    radar::RadarParams radar_params = cfg.radar;
    radar_params.rng_seed = derive_seed(scene_seed, kRadarNoiseStream);
    rec.profile = radar::simulate_range_profile(scene_spec, cfg.render, wf, radar_params);
    rec.fused = fusion::fuse(rec.histogram, rec.profile, fusion::FuseMode::fusion);
    rec.sample = to_sample(rec.fused, rec.truth);
    return rec;
}

SampleRecord simulate_sample(const config::RunConfig& cfg, const radar::LfmWaveform& wf,
                             std::uint64_t sample_seed) {
    const scene::SceneSpec scene_spec = scene::generate_scene(sample_seed, cfg.generation);
    return simulate_scene(cfg, wf, scene_spec, sample_seed);
}

std::vector<io::Sample> generate_dataset(
    const config::RunConfig& cfg, std::size_t count, std::uint64_t seed,
    const std::function<void(std::size_t done, std::size_t total)>& progress) {
    if (count == 0) throw ConfigError("dataset sample count must be >= 1");
    const radar::LfmWaveform wf = cfg.make_waveform();
    std::vector<io::Sample> samples(count);
    for (std::size_t i = 0; i < count; ++i) {
        samples[i] = simulate_sample(cfg, wf, derive_seed(seed, i)).sample;
        if (progress) progress(i + 1, count);
    }
    return samples;
}

io::DatasetHeader dataset_header(const config::RunConfig& cfg, std::size_t count) {
    io::DatasetHeader h;
    h.count = count;
    h.photon_len = static_cast<std::uint32_t>(cfg.photon_len());
    h.radar_len = static_cast<std::uint32_t>(cfg.radar_len());
    h.map_width = static_cast<std::uint32_t>(cfg.render.width);
    h.map_height = static_cast<std::uint32_t>(cfg.render.height);
    h.flags = cfg.photon.noise_enabled ? io::kDatasetFlagNoise : 0u;
    // Mode bits stay at fusion (0): generation always stores both segments.
    return h;
}

model::ModelMeta model_meta(const config::RunConfig& cfg, fusion::FuseMode mode) {
    model::ModelMeta meta;
    meta.photon_len = static_cast<std::uint32_t>(cfg.photon_len());
    meta.radar_len = static_cast<std::uint32_t>(cfg.radar_len());
    meta.map_width = static_cast<std::uint32_t>(cfg.render.width);
    meta.map_height = static_cast<std::uint32_t>(cfg.render.height);
    meta.depth_norm = cfg.render.no_return;
    meta.fov_x = cfg.render.fov_x;
    meta.fov_y = cfg.render.fov_y;
    meta.mode = mode;
    return meta;
}

}  // namespace fusim::pipeline
