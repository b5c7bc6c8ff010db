#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fusim/photon.hpp"
#include "fusim/radar.hpp"
#include "fusim/scene.hpp"

namespace fusim::io {

/// One training record: fused measurement vector plus the normalized depth
/// map it was simulated from. Stored at 32-bit precision; the simulation
/// pipeline quantizes through the same precision so that values survive a
/// write/read cycle exactly.
struct Sample {
    std::vector<float> fused;  // photon_len + radar_len
    std::vector<float> truth;  // map_width * map_height, depth / no_return
};

inline constexpr char kDatasetMagic[4] = {'F', 'T', 'D', 'S'};
inline constexpr std::uint32_t kDatasetVersion = 1;

struct DatasetHeader {
    std::uint32_t version = kDatasetVersion;
    std::uint64_t count = 0;
    std::uint32_t photon_len = 0;
    std::uint32_t radar_len = 0;
    std::uint32_t map_width = 0;
    std::uint32_t map_height = 0;
    std::uint32_t flags = 0;  // bit 0: shot noise was enabled during generation

    std::size_t sample_floats() const {
        return static_cast<std::size_t>(photon_len) + radar_len +
               static_cast<std::size_t>(map_width) * map_height;
    }
};

inline constexpr std::uint32_t kDatasetFlagNoise = 1u;
// Bits 1-2 hold the fuse mode of the stored vectors (0 fusion,
// 1 photon_only, 2 radar_only). Generation always writes full fusion
// vectors; ablation masking happens at training and evaluation time.
inline constexpr std::uint32_t kDatasetFlagModeShift = 1u;
inline constexpr std::uint32_t kDatasetFlagModeMask = 0x6u;

/// Layout: magic, header fields, little-endian float32 payload (per sample:
/// fused values then depth map), trailing 64-bit payload checksum.
void write_dataset(const std::string& path, const DatasetHeader& header,
                   const std::vector<Sample>& samples);

std::pair<DatasetHeader, std::vector<Sample>> read_dataset(const std::string& path);

/// 16-bit binary PGM (P5, maxval 65535, big-endian pixels). Pixel value =
/// round(65535 * depth / no_return), clamped.
void export_pgm(const scene::DepthMap& dm, const std::string& path);

/// Same encoding for an already normalized map in [0, 1].
void export_pgm_normalized(const std::vector<double>& values, int width, int height,
                           const std::string& path);

void write_histogram_csv(const photon::TemporalHistogram& h, const std::string& path);
photon::TemporalHistogram read_histogram_csv(const std::string& path);

void write_profile_csv(const radar::RangeProfile& p, const std::string& path);
radar::RangeProfile read_profile_csv(const std::string& path);

/// Key/value scene description, one value per line, grouped in sections.
/// Numbers are printed at full precision so a parse round trip reproduces
/// the scene bit for bit.
std::string scene_to_text(const scene::SceneSpec& scene);
scene::SceneSpec scene_from_text(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace fusim::io
