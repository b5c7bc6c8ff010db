#include "fusim/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "binary_io.hpp"
#include "fusim/common.hpp"
#include "fusim/rng.hpp"

namespace fusim::io {

namespace {

// Full shortest-round-trip precision; every value printed here survives a
// parse back to the identical double.
std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_vec(const Vec3& v) {
    return fmt(v.x) + " " + fmt(v.y) + " " + fmt(v.z);
}

double parse_double(const std::string& s, int line_no) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end != nullptr && *end == ' ') ++end;
    if (end == begin || end == nullptr || *end != '\0') {
        throw ConfigError("line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
}

Vec3 parse_vec3(const std::string& s, int line_no) {
    std::istringstream ss(s);
    Vec3 v;
    if (!(ss >> v.x >> v.y >> v.z)) {
        throw ConfigError("line " + std::to_string(line_no) + ": expected three numbers, got '" +
                          s + "'");
    }
    std::string rest;
    if (ss >> rest) {
        throw ConfigError("line " + std::to_string(line_no) + ": trailing content '" + rest + "'");
    }
    return v;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

void put_u16_be(std::vector<unsigned char>& buf, unsigned v) {
    buf.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
    buf.push_back(static_cast<unsigned char>(v & 0xff));
}

std::vector<unsigned char> encode_pgm(const std::vector<double>& normalized, int width,
                                      int height) {
    std::string header = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n65535\n";
    std::vector<unsigned char> buf(header.begin(), header.end());
    buf.reserve(buf.size() + normalized.size() * 2);
    for (double v : normalized) {
        double scaled = std::round(65535.0 * v);
        if (!(scaled >= 0.0)) scaled = 0.0;  // also catches NaN
        if (scaled > 65535.0) scaled = 65535.0;
        put_u16_be(buf, static_cast<unsigned>(scaled));
    }
    return buf;
}

}  // namespace

void write_dataset(const std::string& path, const DatasetHeader& header,
                   const std::vector<Sample>& samples) {
    if (samples.size() != header.count) {
        throw ShapeError("dataset header count " + std::to_string(header.count) +
                         " does not match " + std::to_string(samples.size()) + " samples");
    }
    const std::size_t fused_len = static_cast<std::size_t>(header.photon_len) + header.radar_len;
    const std::size_t truth_len =
        static_cast<std::size_t>(header.map_width) * header.map_height;
    std::vector<unsigned char> buf;
    buf.insert(buf.end(), kDatasetMagic, kDatasetMagic + 4);
    detail::put_u32(buf, header.version);
    detail::put_u64(buf, header.count);
    detail::put_u32(buf, header.photon_len);
    detail::put_u32(buf, header.radar_len);
    detail::put_u32(buf, header.map_width);
    detail::put_u32(buf, header.map_height);
    detail::put_u32(buf, header.flags);
    const std::size_t payload_start = buf.size();
    for (std::size_t s = 0; s < samples.size(); ++s) {
        if (samples[s].fused.size() != fused_len || samples[s].truth.size() != truth_len) {
            throw ShapeError("sample " + std::to_string(s) + " shape does not match header");
        }
        for (float v : samples[s].fused) detail::put_f32(buf, v);
        for (float v : samples[s].truth) detail::put_f32(buf, v);
    }
    const std::uint64_t checksum = fnv1a64(buf.data() + payload_start, buf.size() - payload_start);
    detail::put_u64(buf, checksum);
    detail::write_file_bytes(path, buf);
}

std::pair<DatasetHeader, std::vector<Sample>> read_dataset(const std::string& path) {
    const std::vector<unsigned char> buf = detail::read_file_bytes(path);
    detail::Reader r(buf.data(), buf.size(), path);
    unsigned char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kDatasetMagic, 4) != 0) {
        throw BadMagicError("'" + path + "' is not a dataset file");
    }
    DatasetHeader h;
    h.version = r.u32();
    if (h.version != kDatasetVersion) {
        throw BadVersionError("'" + path + "': dataset version " + std::to_string(h.version) +
                              ", expected " + std::to_string(kDatasetVersion));
    }
    h.count = r.u64();
    h.photon_len = r.u32();
    h.radar_len = r.u32();
    h.map_width = r.u32();
    h.map_height = r.u32();
    h.flags = r.u32();
    if (h.map_width == 0 || h.map_height == 0) {
        throw FormatError("'" + path + "': zero map dimensions");
    }
    const std::size_t per_sample = h.sample_floats();
    const std::size_t payload_bytes = r.remaining() >= 8 ? r.remaining() - 8 : 0;
    const std::uint64_t expected_bytes =
        static_cast<std::uint64_t>(h.count) * per_sample * 4;
    if (payload_bytes != expected_bytes) {
        throw TruncatedError("'" + path + "': payload holds " + std::to_string(payload_bytes) +
                             " bytes, header implies " + std::to_string(expected_bytes));
    }
    const std::uint64_t checksum = fnv1a64(r.cursor(), payload_bytes);
    const std::size_t fused_len = static_cast<std::size_t>(h.photon_len) + h.radar_len;
    const std::size_t truth_len = static_cast<std::size_t>(h.map_width) * h.map_height;
    std::vector<Sample> samples(static_cast<std::size_t>(h.count));
    for (Sample& s : samples) {
        s.fused.resize(fused_len);
        s.truth.resize(truth_len);
        for (float& v : s.fused) v = r.f32();
        for (float& v : s.truth) v = r.f32();
    }
    const std::uint64_t stored = r.u64();
    if (stored != checksum) {
        throw ChecksumError("'" + path + "': payload checksum mismatch");
    }
    return {h, std::move(samples)};
}

void export_pgm(const scene::DepthMap& dm, const std::string& path) {
    if (dm.width <= 0 || dm.height <= 0 ||
        dm.depth.size() != static_cast<std::size_t>(dm.width) * dm.height) {
        throw ShapeError("depth map shape is inconsistent");
    }
    if (!(dm.no_return > 0.0)) throw ShapeError("depth map no_return must be positive");
    std::vector<double> normalized(dm.depth.size());
    for (std::size_t i = 0; i < dm.depth.size(); ++i) normalized[i] = dm.depth[i] / dm.no_return;
    detail::write_file_bytes(path, encode_pgm(normalized, dm.width, dm.height));
}

void export_pgm_normalized(const std::vector<double>& values, int width, int height,
                           const std::string& path) {
    if (width <= 0 || height <= 0 ||
        values.size() != static_cast<std::size_t>(width) * height) {
        throw ShapeError("image shape is inconsistent");
    }
    detail::write_file_bytes(path, encode_pgm(values, width, height));
}

void write_histogram_csv(const photon::TemporalHistogram& h, const std::string& path) {
    std::string out = "# temporal histogram\n";
    out += "# t_start," + fmt(h.t_start) + "\n";
    out += "# bin_width," + fmt(h.bin_width) + "\n";
    out += "bin,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        out += std::to_string(i) + "," + fmt(h.counts[i]) + "\n";
    }
    write_text_file(path, out);
}

namespace {

struct CsvTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<double> values;  // second column of data rows, in order
};

CsvTable read_csv(const std::string& path, const std::string& expected_kind,
                  const std::string& value_column) {
    const std::string text = read_text_file(path);
    std::istringstream ss(text);
    std::string line;
    CsvTable table;
    int line_no = 0;
    bool saw_kind = false;
    bool saw_columns = false;
    std::size_t next_index = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = trim(line.substr(1));
            if (!saw_kind) {
                if (body != expected_kind) {
                    throw FormatError("'" + path + "' line " + std::to_string(line_no) +
                                      ": expected '" + expected_kind + "' header, got '" + body +
                                      "'");
                }
                saw_kind = true;
                continue;
            }
            const std::size_t comma = body.find(',');
            if (comma == std::string::npos) {
                throw FormatError("'" + path + "' line " + std::to_string(line_no) +
                                  ": metadata needs 'key,value'");
            }
            table.metadata.emplace_back(trim(body.substr(0, comma)),
                                        trim(body.substr(comma + 1)));
            continue;
        }
        if (!saw_columns) {
            if (line != "bin," + value_column) {
                throw FormatError("'" + path + "' line " + std::to_string(line_no) +
                                  ": expected column header 'bin," + value_column + "'");
            }
            saw_columns = true;
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw FormatError("'" + path + "' line " + std::to_string(line_no) +
                              ": expected 'bin,value' row");
        }
        const std::size_t idx =
            static_cast<std::size_t>(parse_double(trim(line.substr(0, comma)), line_no));
        if (idx != next_index) {
            throw FormatError("'" + path + "' line " + std::to_string(line_no) +
                              ": bin indices must be consecutive from 0");
        }
        ++next_index;
        table.values.push_back(parse_double(trim(line.substr(comma + 1)), line_no));
    }
    if (!saw_kind) throw FormatError("'" + path + "': missing '" + expected_kind + "' header");
    return table;
}

double metadata_value(const CsvTable& table, const std::string& key, const std::string& path) {
    for (const auto& [k, v] : table.metadata) {
        if (k == key) return parse_double(v, 0);
    }
    throw FormatError("'" + path + "': missing metadata '" + key + "'");
}

}  // namespace

photon::TemporalHistogram read_histogram_csv(const std::string& path) {
    const CsvTable table = read_csv(path, "temporal histogram", "count");
    photon::TemporalHistogram h;
    h.t_start = metadata_value(table, "t_start", path);
    h.bin_width = metadata_value(table, "bin_width", path);
    h.counts = table.values;
    return h;
}

void write_profile_csv(const radar::RangeProfile& p, const std::string& path) {
    std::string out = "# range profile\n";
    out += "# range_bin_m," + fmt(p.range_bin_m) + "\n";
    out += "# max_range," + fmt(p.max_range) + "\n";
    out += "bin,magnitude\n";
    for (std::size_t i = 0; i < p.magnitudes.size(); ++i) {
        out += std::to_string(i) + "," + fmt(p.magnitudes[i]) + "\n";
    }
    write_text_file(path, out);
}

radar::RangeProfile read_profile_csv(const std::string& path) {
    const CsvTable table = read_csv(path, "range profile", "magnitude");
    radar::RangeProfile p;
    p.range_bin_m = metadata_value(table, "range_bin_m", path);
    p.max_range = metadata_value(table, "max_range", path);
    p.magnitudes = table.values;
    return p;
}

std::string scene_to_text(const scene::SceneSpec& scene_spec) {
    std::string out = "scene_version = 1\n";
    out += "rng_seed = " + std::to_string(scene_spec.rng_seed) + "\n";
    out += "\n[rig]\n";
    out += "spd_pos = " + fmt_vec(scene_spec.rig.spd_pos) + "\n";
    out += "radar_pos = " + fmt_vec(scene_spec.rig.radar_pos) + "\n";
    out += "camera_pos = " + fmt_vec(scene_spec.rig.camera_pos) + "\n";
    out += "optical_axis = " + fmt_vec(scene_spec.rig.optical_axis) + "\n";
    out += "baseline_m = " + fmt(scene_spec.rig.baseline_m) + "\n";
    if (scene_spec.background.has_value()) {
        const scene::Room& room = *scene_spec.background;
        out += "\n[room]\n";
        out += "width = " + fmt(room.width) + "\n";
        out += "depth = " + fmt(room.depth) + "\n";
        out += "height = " + fmt(room.height) + "\n";
        out += "wall_reflectivity = " + fmt(room.wall_reflectivity) + "\n";
    }
    for (std::size_t i = 0; i < scene_spec.targets.size(); ++i) {
        const scene::TargetPrimitive& t = scene_spec.targets[i];
        out += "\n[target " + std::to_string(i) + "]\n";
        out += "kind = " + std::string(scene::kind_name(t.kind)) + "\n";
        out += "center = " + fmt_vec(t.center) + "\n";
        out += "width = " + fmt(t.width) + "\n";
        out += "height = " + fmt(t.height) + "\n";
        out += "depth = " + fmt(t.depth) + "\n";
        out += "reflectivity = " + fmt(t.reflectivity) + "\n";
        if (t.kind == scene::TargetKind::letter) {
            out += "letter = " + std::string(1, t.letter) + "\n";
        }
        out += "mirrored = " + std::string(t.mirrored ? "1" : "0") + "\n";
    }
    return out;
}

scene::SceneSpec scene_from_text(const std::string& text) {
    scene::SceneSpec spec;
    spec.targets.clear();
    enum class Section { top, rig, room, target };
    Section section = Section::top;
    scene::Room room;
    bool has_room = false;
    std::istringstream ss(text);
    std::string line;
    int line_no = 0;
    auto current_target = [&]() -> scene::TargetPrimitive& {
        if (spec.targets.empty() || section != Section::target) {
            throw ConfigError("line " + std::to_string(line_no) + ": key outside target section");
        }
        return spec.targets.back();
    };
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
            if (name == "rig") {
                section = Section::rig;
            } else if (name == "room") {
                section = Section::room;
                has_room = true;
            } else if (name.rfind("target", 0) == 0) {
                const std::string idx_str = trim(name.substr(6));
                const std::size_t idx =
                    static_cast<std::size_t>(parse_double(idx_str, line_no));
                if (idx != spec.targets.size()) {
                    throw ConfigError("line " + std::to_string(line_no) +
                                      ": target sections must be consecutive from 0");
                }
                spec.targets.emplace_back();
                section = Section::target;
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
        switch (section) {
            case Section::top:
                if (key == "scene_version") {
                    if (value != "1") {
                        throw ConfigError("line " + std::to_string(line_no) +
                                          ": unsupported scene_version '" + value + "'");
                    }
                } else if (key == "rng_seed") {
                    spec.rng_seed = std::strtoull(value.c_str(), nullptr, 10);
                } else {
                    throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                                      "'");
                }
                break;
            case Section::rig:
                if (key == "spd_pos") {
                    spec.rig.spd_pos = parse_vec3(value, line_no);
                } else if (key == "radar_pos") {
                    spec.rig.radar_pos = parse_vec3(value, line_no);
                } else if (key == "camera_pos") {
                    spec.rig.camera_pos = parse_vec3(value, line_no);
                } else if (key == "optical_axis") {
                    spec.rig.optical_axis = parse_vec3(value, line_no);
                } else if (key == "baseline_m") {
                    spec.rig.baseline_m = parse_double(value, line_no);
                } else {
                    throw ConfigError("line " + std::to_string(line_no) + ": unknown rig key '" +
                                      key + "'");
                }
                break;
            case Section::room:
                if (key == "width") {
                    room.width = parse_double(value, line_no);
                } else if (key == "depth") {
                    room.depth = parse_double(value, line_no);
                } else if (key == "height") {
                    room.height = parse_double(value, line_no);
                } else if (key == "wall_reflectivity") {
                    room.wall_reflectivity = parse_double(value, line_no);
                } else {
                    throw ConfigError("line " + std::to_string(line_no) + ": unknown room key '" +
                                      key + "'");
                }
                break;
            case Section::target: {
                scene::TargetPrimitive& t = current_target();
                if (key == "kind") {
                    t.kind = scene::kind_from_name(value);
                } else if (key == "center") {
                    t.center = parse_vec3(value, line_no);
                } else if (key == "width") {
                    t.width = parse_double(value, line_no);
                } else if (key == "height") {
                    t.height = parse_double(value, line_no);
                } else if (key == "depth") {
                    t.depth = parse_double(value, line_no);
                } else if (key == "reflectivity") {
                    t.reflectivity = parse_double(value, line_no);
                } else if (key == "letter") {
                    if (value.size() != 1) {
                        throw ConfigError("line " + std::to_string(line_no) +
                                          ": letter must be a single character");
                    }
                    t.letter = value[0];
                } else if (key == "mirrored") {
                    if (value != "0" && value != "1") {
                        throw ConfigError("line " + std::to_string(line_no) +
                                          ": mirrored must be 0 or 1");
                    }
                    t.mirrored = value == "1";
                } else {
                    throw ConfigError("line " + std::to_string(line_no) +
                                      ": unknown target key '" + key + "'");
                }
                break;
            }
        }
    }
    if (has_room) spec.background = room;
    spec.validate();
    return spec;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path + "'");
    return ss.str();
}

}  // namespace fusim::io
