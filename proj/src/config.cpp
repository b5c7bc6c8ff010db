#include "fusim/config.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "fusim/io.hpp"
#include "fusim/common.hpp"

namespace fusim::config {

namespace {

double parse_double(const std::string& key, const std::string& value, int line_no) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || end == nullptr || *end != '\0') {
        throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                          "' has a malformed number '" + value + "'");
    }
    return v;
}

long long parse_int(const std::string& key, const std::string& value, int line_no) {
    const double v = parse_double(key, value, line_no);
    const long long i = static_cast<long long>(v);
    if (static_cast<double>(i) != v) {
        throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                          "' needs an integer, got '" + value + "'");
    }
    return i;
}

bool parse_bool(const std::string& key, const std::string& value, int line_no) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                      "' needs on/off, got '" + value + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else if (c != ' ' && c != '\t') {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::vector<std::size_t> parse_dims(const std::string& key, const std::string& value,
                                    int line_no) {
    std::vector<std::size_t> dims;
    for (const std::string& part : split(value, ',')) {
        const long long v = parse_int(key, part, line_no);
        if (v < 1) {
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                              "' entries must be >= 1");
        }
        dims.push_back(static_cast<std::size_t>(v));
    }
    return dims;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError("config: " + key + " " + what);
}

void finalize(RunConfig& cfg) {
    require(cfg.baseline_m > 0.0, "scene.baseline_m", "must be > 0");
    cfg.generation.rig = scene::make_default_rig(cfg.baseline_m);
    cfg.generation.rig.camera_pos = cfg.generation.rig.spd_pos + cfg.camera_offset;
    require(cfg.radar_bins >= 1, "radar.n_bins", "must be >= 1");
    require(cfg.radar.max_range > 0.0, "radar.max_range", "must be > 0");
    cfg.radar.range_bin_m = cfg.radar.max_range / static_cast<double>(cfg.radar_bins);
}

void validate(const RunConfig& cfg) {
    const scene::GenerationParams& g = cfg.generation;
    require(!g.kinds.empty(), "scene.kinds", "may not be empty");
    for (char c : g.letters) {
        require(c == 'C' || c == 'T' || c == 'L' || c == 'U' || c == 'H', "scene.letters",
                "contains an unsupported letter (known: CTLUH)");
    }
    require(g.x_min <= g.x_max, "scene.x_min/x_max", "must be ordered");
    require(g.y_min <= g.y_max, "scene.y_min/y_max", "must be ordered");
    require(g.z_min <= g.z_max, "scene.z_min/z_max", "must be ordered");
    require(g.width_min > 0.0 && g.width_min <= g.width_max, "scene.width_min/width_max",
            "must be positive and ordered");
    require(g.height_min > 0.0 && g.height_min <= g.height_max, "scene.height_min/height_max",
            "must be positive and ordered");
    require(g.box_depth_min > 0.0 && g.box_depth_min <= g.box_depth_max,
            "scene.box_depth_min/box_depth_max", "must be positive and ordered");
    require(g.plate_depth > 0.0, "scene.plate_depth", "must be > 0");
    require(g.humanoid_height_min > 0.0 && g.humanoid_height_min <= g.humanoid_height_max,
            "scene.humanoid_height_min/humanoid_height_max", "must be positive and ordered");
    require(g.humanoid_aspect > 0.0, "scene.humanoid_aspect", "must be > 0");
    require(g.humanoid_y_min <= g.humanoid_y_max, "scene.humanoid_y_min/humanoid_y_max",
            "must be ordered");
    require(g.reflectivity_min > 0.0 && g.reflectivity_max <= 1.0 &&
                g.reflectivity_min <= g.reflectivity_max,
            "scene.reflectivity_min/reflectivity_max", "must lie in (0, 1] and be ordered");
    if (g.background) g.room.validate();

    const scene::RenderParams& r = cfg.render;
    require(r.width >= 8 && r.height >= 8, "render.map_width/map_height", "must be >= 8");
    require(r.fov_x > 0.0 && r.fov_x < 3.141592653589793 && r.fov_y > 0.0 &&
                r.fov_y < 3.141592653589793,
            "render.fov_x/fov_y", "must lie in (0, pi)");
    require(r.no_return > 0.0, "render.no_return", "must be > 0");

    require(cfg.photon.trip_factor == 1 || cfg.photon.trip_factor == 2, "photon.trip_factor",
            "must be 1 or 2");
    require(cfg.photon.falloff_exponent >= 0.0, "photon.falloff_exponent", "must be >= 0");
    require(cfg.photon.total_expected_photons > 0.0, "photon.total_expected_photons",
            "must be > 0");
    require(cfg.binning.bin_width > 0.0, "photon.bin_width", "must be > 0");
    require(cfg.binning.n_bins >= 1, "photon.n_bins", "must be >= 1");
    require(cfg.irf.fwhm > 0.0, "photon.irf_fwhm", "must be > 0");

    require(cfg.pulse_width > 0.0, "radar.pulse_width", "must be > 0");
    require(cfg.sample_rate > 0.0, "radar.sample_rate", "must be > 0");
    require(cfg.chirp_rate != 0.0, "radar.chirp_rate", "must be nonzero");
    require(cfg.radar.falloff_exponent >= 0.0, "radar.falloff_exponent", "must be >= 0");
    require(cfg.radar.noise_floor >= 0.0, "radar.noise_floor", "must be >= 0");
    require(cfg.radar.view_fov > 0.0 && cfg.radar.view_fov < 3.141592653589793,
            "radar.view_fov", "must lie in (0, pi)");

    require(cfg.training.learning_rate > 0.0, "train.learning_rate", "must be > 0");
    require(cfg.training.epochs >= 1, "train.epochs", "must be >= 1");
    require(cfg.training.batch_size >= 1, "train.batch_size", "must be >= 1");
    require(cfg.training.split_ratio > 0.0 && cfg.training.split_ratio < 1.0,
            "train.split_ratio", "must lie in (0, 1)");
    require(!cfg.hidden_dims.empty(), "train.hidden_dims", "may not be empty");
}

void apply_scene_key(RunConfig& cfg, const std::string& key, const std::string& value,
                     int line_no) {
    scene::GenerationParams& g = cfg.generation;
    if (key == "kinds") {
        g.kinds.clear();
        for (const std::string& part : split(value, ',')) {
            g.kinds.push_back(scene::kind_from_name(part));
        }
    } else if (key == "letters") {
        g.letters = value;
    } else if (key == "x_min") {
        g.x_min = parse_double(key, value, line_no);
    } else if (key == "x_max") {
        g.x_max = parse_double(key, value, line_no);
    } else if (key == "y_min") {
        g.y_min = parse_double(key, value, line_no);
    } else if (key == "y_max") {
        g.y_max = parse_double(key, value, line_no);
    } else if (key == "z_min") {
        g.z_min = parse_double(key, value, line_no);
    } else if (key == "z_max") {
        g.z_max = parse_double(key, value, line_no);
    } else if (key == "width_min") {
        g.width_min = parse_double(key, value, line_no);
    } else if (key == "width_max") {
        g.width_max = parse_double(key, value, line_no);
    } else if (key == "height_min") {
        g.height_min = parse_double(key, value, line_no);
    } else if (key == "height_max") {
        g.height_max = parse_double(key, value, line_no);
    } else if (key == "box_depth_min") {
        g.box_depth_min = parse_double(key, value, line_no);
    } else if (key == "box_depth_max") {
        g.box_depth_max = parse_double(key, value, line_no);
    } else if (key == "plate_depth") {
        g.plate_depth = parse_double(key, value, line_no);
    } else if (key == "humanoid_height_min") {
        g.humanoid_height_min = parse_double(key, value, line_no);
    } else if (key == "humanoid_height_max") {
        g.humanoid_height_max = parse_double(key, value, line_no);
    } else if (key == "humanoid_aspect") {
        g.humanoid_aspect = parse_double(key, value, line_no);
    } else if (key == "humanoid_y_min") {
        g.humanoid_y_min = parse_double(key, value, line_no);
    } else if (key == "humanoid_y_max") {
        g.humanoid_y_max = parse_double(key, value, line_no);
    } else if (key == "reflectivity_min") {
        g.reflectivity_min = parse_double(key, value, line_no);
    } else if (key == "reflectivity_max") {
        g.reflectivity_max = parse_double(key, value, line_no);
    } else if (key == "background") {
        g.background = parse_bool(key, value, line_no);
    } else if (key == "room_width") {
        g.room.width = parse_double(key, value, line_no);
    } else if (key == "room_depth") {
        g.room.depth = parse_double(key, value, line_no);
    } else if (key == "room_height") {
        g.room.height = parse_double(key, value, line_no);
    } else if (key == "wall_reflectivity") {
        g.room.wall_reflectivity = parse_double(key, value, line_no);
    } else if (key == "baseline_m") {
        cfg.baseline_m = parse_double(key, value, line_no);
    } else if (key == "camera_offset_x") {
        cfg.camera_offset.x = parse_double(key, value, line_no);
    } else if (key == "camera_offset_y") {
        cfg.camera_offset.y = parse_double(key, value, line_no);
    } else if (key == "camera_offset_z") {
        cfg.camera_offset.z = parse_double(key, value, line_no);
    } else {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                          "' in [scene]");
    }
}

void apply_render_key(RunConfig& cfg, const std::string& key, const std::string& value,
                      int line_no) {
    if (key == "map_width") {
        cfg.render.width = static_cast<int>(parse_int(key, value, line_no));
    } else if (key == "map_height") {
        cfg.render.height = static_cast<int>(parse_int(key, value, line_no));
    } else if (key == "fov_x") {
        cfg.render.fov_x = parse_double(key, value, line_no);
    } else if (key == "fov_y") {
        cfg.render.fov_y = parse_double(key, value, line_no);
    } else if (key == "no_return") {
        cfg.render.no_return = parse_double(key, value, line_no);
    } else {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                          "' in [render]");
    }
}

void apply_photon_key(RunConfig& cfg, const std::string& key, const std::string& value,
                      int line_no) {
    if (key == "trip_factor") {
        cfg.photon.trip_factor = static_cast<int>(parse_int(key, value, line_no));
    } else if (key == "falloff_exponent") {
        cfg.photon.falloff_exponent = parse_double(key, value, line_no);
    } else if (key == "total_expected_photons") {
        cfg.photon.total_expected_photons = parse_double(key, value, line_no);
    } else if (key == "noise") {
        cfg.photon.noise_enabled = parse_bool(key, value, line_no);
    } else if (key == "t_start") {
        cfg.binning.t_start = parse_double(key, value, line_no);
    } else if (key == "bin_width") {
        cfg.binning.bin_width = parse_double(key, value, line_no);
    } else if (key == "n_bins") {
        cfg.binning.n_bins = static_cast<int>(parse_int(key, value, line_no));
    } else if (key == "irf_fwhm") {
        cfg.irf.fwhm = parse_double(key, value, line_no);
    } else {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                          "' in [photon]");
    }
}

void apply_radar_key(RunConfig& cfg, const std::string& key, const std::string& value,
                     int line_no) {
    if (key == "pulse_width") {
        cfg.pulse_width = parse_double(key, value, line_no);
    } else if (key == "center_freq") {
        cfg.center_freq = parse_double(key, value, line_no);
    } else if (key == "chirp_rate") {
        cfg.chirp_rate = parse_double(key, value, line_no);
    } else if (key == "sample_rate") {
        cfg.sample_rate = parse_double(key, value, line_no);
    } else if (key == "falloff_exponent") {
        cfg.radar.falloff_exponent = parse_double(key, value, line_no);
    } else if (key == "max_range") {
        cfg.radar.max_range = parse_double(key, value, line_no);
    } else if (key == "noise_floor") {
        cfg.radar.noise_floor = parse_double(key, value, line_no);
    } else if (key == "coherent") {
        cfg.radar.coherent = parse_bool(key, value, line_no);
    } else if (key == "n_bins") {
        const long long v = parse_int(key, value, line_no);
        if (v < 1) {
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                              "' must be >= 1");
        }
        cfg.radar_bins = static_cast<std::size_t>(v);
    } else if (key == "view_fov") {
        cfg.radar.view_fov = parse_double(key, value, line_no);
    } else if (key == "view_grid") {
        const long long v = parse_int(key, value, line_no);
        if (v < 1) {
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                              "' must be >= 1");
        }
        cfg.radar.view_grid = static_cast<int>(v);
    } else {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                          "' in [radar]");
    }
}

void apply_train_key(RunConfig& cfg, const std::string& key, const std::string& value,
                     int line_no) {
    if (key == "hidden_dims") {
        cfg.hidden_dims = parse_dims(key, value, line_no);
    } else if (key == "learning_rate") {
        cfg.training.learning_rate = parse_double(key, value, line_no);
    } else if (key == "epochs") {
        cfg.training.epochs = static_cast<int>(parse_int(key, value, line_no));
    } else if (key == "batch_size") {
        cfg.training.batch_size = static_cast<int>(parse_int(key, value, line_no));
    } else if (key == "split_ratio") {
        cfg.training.split_ratio = parse_double(key, value, line_no);
    } else if (key == "seed") {
        cfg.training.seed = static_cast<std::uint64_t>(parse_int(key, value, line_no));
    } else if (key == "optimizer") {
        if (value == "adam") {
            cfg.training.optimizer = model::Optimizer::adam;
        } else if (value == "sgd_momentum") {
            cfg.training.optimizer = model::Optimizer::sgd_momentum;
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                              "' must be adam or sgd_momentum, got '" + value + "'");
        }
    } else {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                          "' in [train]");
    }
}

}  // namespace

radar::LfmWaveform RunConfig::make_waveform() const {
    return radar::synthesize_lfm(pulse_width, center_freq, chirp_rate, sample_rate);
}

RunConfig default_config() {
    RunConfig cfg;
    finalize(cfg);
    validate(cfg);
    return cfg;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    enum class Section { none, scene, render, photon, radar, train };
    Section section = Section::none;
    std::istringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
            }
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name == "scene") {
                section = Section::scene;
            } else if (name == "render") {
                section = Section::render;
            } else if (name == "photon") {
                section = Section::photon;
            } else if (name == "radar") {
                section = Section::radar;
            } else if (name == "train") {
                section = Section::train;
            } else {
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section '" +
                                  name + "'");
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        try {
            switch (section) {
                case Section::none:
                    throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                                      "' appears before any [section]");
                case Section::scene:
                    apply_scene_key(cfg, key, value, line_no);
                    break;
                case Section::render:
                    apply_render_key(cfg, key, value, line_no);
                    break;
                case Section::photon:
                    apply_photon_key(cfg, key, value, line_no);
                    break;
                case Section::radar:
                    apply_radar_key(cfg, key, value, line_no);
                    break;
                case Section::train:
                    apply_train_key(cfg, key, value, line_no);
                    break;
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "': " +
                              e.what());
        }
    }
    finalize(cfg);
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    try {
        return parse_config(io::read_text_file(path));
    } catch (const ConfigError& e) {
        throw ConfigError("'" + path + "': " + e.what());
    }
}

}  // namespace fusim::config
