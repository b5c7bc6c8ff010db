#include "fusim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "fusim/common.hpp"
#include "fusim/rng.hpp"

namespace fusim::scene {

namespace {

constexpr double kTinyT = 1e-9;  // minimum hit distance in front of the camera

bool valid_letter(char c) {
    return c == 'C' || c == 'T' || c == 'L' || c == 'U' || c == 'H';
}

struct Rect {
    double u0, v0, u1, v1;
    bool contains(double u, double v) const {
        return u >= u0 && u <= u1 && v >= v0 && v <= v1;
    }
};

// Blocky glyphs on the unit square, u left-to-right, v bottom-to-top.
// Stroke width 0.22 of the plate extent.
bool letter_mask(char letter, double u, double v) {
    constexpr double s = 0.22;
    switch (letter) {
        case 'C': {
            static const Rect r[] = {{0, 0, s, 1}, {0, 1 - s, 1, 1}, {0, 0, 1, s}};
            return r[0].contains(u, v) || r[1].contains(u, v) || r[2].contains(u, v);
        }
        case 'T': {
            static const Rect r[] = {{0, 1 - s, 1, 1}, {0.5 - s / 2, 0, 0.5 + s / 2, 1 - s}};
            return r[0].contains(u, v) || r[1].contains(u, v);
        }
        case 'L': {
            static const Rect r[] = {{0, 0, s, 1}, {0, 0, 1, s}};
            return r[0].contains(u, v) || r[1].contains(u, v);
        }
        case 'U': {
            static const Rect r[] = {{0, 0, s, 1}, {1 - s, 0, 1, 1}, {0, 0, 1, s}};
            return r[0].contains(u, v) || r[1].contains(u, v) || r[2].contains(u, v);
        }
        case 'H': {
            static const Rect r[] = {{0, 0, s, 1}, {1 - s, 0, 1, 1},
                                     {0, 0.5 - s / 2, 1, 0.5 + s / 2}};
            return r[0].contains(u, v) || r[1].contains(u, v) || r[2].contains(u, v);
        }
        default:
            return false;
    }
}

// Head, torso, arms and legs as simple unit-square shapes.
bool humanoid_mask(double u, double v) {
    const double du = (u - 0.5) / 0.12;
    const double dv = (v - 0.875) / 0.115;
    if (du * du + dv * dv <= 1.0) return true;                      // head
    static const Rect torso{0.30, 0.35, 0.70, 0.76};
    static const Rect leg_l{0.32, 0.0, 0.46, 0.35};
    static const Rect leg_r{0.54, 0.0, 0.68, 0.35};
    static const Rect arm_l{0.16, 0.42, 0.30, 0.72};
    static const Rect arm_r{0.70, 0.42, 0.84, 0.72};
    return torso.contains(u, v) || leg_l.contains(u, v) || leg_r.contains(u, v) ||
           arm_l.contains(u, v) || arm_r.contains(u, v);
}

struct RayHit {
    double t = std::numeric_limits<double>::infinity();
    double reflectivity = 0.0;
};

// Axis-aligned slab test for solid boxes; returns the entry distance.
bool hit_box(const TargetPrimitive& p, const Vec3& o, const Vec3& d, RayHit* hit) {
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    const double lo[3] = {p.center.x - p.width / 2, p.center.y - p.height / 2,
                          p.center.z - p.depth / 2};
    const double hi[3] = {p.center.x + p.width / 2, p.center.y + p.height / 2,
                          p.center.z + p.depth / 2};
    const double org[3] = {o.x, o.y, o.z};
    const double dir[3] = {d.x, d.y, d.z};
    for (int i = 0; i < 3; ++i) {
        if (dir[i] == 0.0) {
            if (org[i] < lo[i] || org[i] > hi[i]) return false;
            continue;
        }
        double t0 = (lo[i] - org[i]) / dir[i];
        double t1 = (hi[i] - org[i]) / dir[i];
        if (t0 > t1) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
        if (tmin > tmax) return false;
    }
    if (tmax <= kTinyT || tmin <= kTinyT) return false;  // behind or inside
    hit->t = tmin;
    hit->reflectivity = p.reflectivity;
    return true;
}

// Plate targets: slab test along z, silhouette evaluated where the ray
// crosses the entry plane. Thin-plate approximation; side entry through a
// stroke edge is below pixel scale for the plate depths in use.
//
// The silhouette is evaluated in the plate's canonical (unmirrored) frame:
// for mirrored plates the local x offset is negated before the lookup.
// Negation is exact in floating point, which keeps reflected renders
// bit-identical to column-flipped originals.
bool hit_plate(const TargetPrimitive& p, const Vec3& o, const Vec3& d, RayHit* hit) {
    if (d.z == 0.0) return false;
    const double z_lo = p.center.z - p.depth / 2;
    const double z_hi = p.center.z + p.depth / 2;
    double t0 = (z_lo - o.z) / d.z;
    double t1 = (z_hi - o.z) / d.z;
    if (t0 > t1) std::swap(t0, t1);
    if (t0 <= kTinyT) return false;
    const double x = o.x + t0 * d.x;
    const double y = o.y + t0 * d.y;
    double x_local = x - p.center.x;
    if (p.mirrored) x_local = -x_local;
    const double y_local = y - p.center.y;
    if (std::abs(x_local) > p.width / 2 || std::abs(y_local) > p.height / 2) return false;
    const double u = x_local / p.width + 0.5;
    const double v = y_local / p.height + 0.5;
    const bool inside = (p.kind == TargetKind::letter) ? letter_mask(p.letter, u, v)
                                                       : humanoid_mask(u, v);
    if (!inside) return false;
    hit->t = t0;
    hit->reflectivity = p.reflectivity;
    return true;
}

// Ray exit distance through the room interior (camera is inside).
bool hit_room(const Room& room, const Vec3& o, const Vec3& d, RayHit* hit) {
    double tmax = std::numeric_limits<double>::infinity();
    const double lo[3] = {-room.width / 2, -room.height / 2, 0.0};
    const double hi[3] = {room.width / 2, room.height / 2, room.depth};
    const double org[3] = {o.x, o.y, o.z};
    const double dir[3] = {d.x, d.y, d.z};
    for (int i = 0; i < 3; ++i) {
        if (dir[i] == 0.0) continue;
        double t0 = (lo[i] - org[i]) / dir[i];
        double t1 = (hi[i] - org[i]) / dir[i];
        if (t0 > t1) std::swap(t0, t1);
        tmax = std::min(tmax, t1);
    }
    if (!(tmax > kTinyT) || !std::isfinite(tmax)) return false;
    hit->t = tmax;
    hit->reflectivity = room.wall_reflectivity;
    return true;
}

struct CameraBasis {
    Vec3 forward, right, up;
};

CameraBasis make_basis(const Vec3& axis) {
    const Vec3 world_up{0.0, 1.0, 0.0};
    const Vec3 forward = axis;
    const Vec3 r = world_up.cross(forward);
    if (r.norm2() < 1e-12) {
        throw Error("render: optical axis may not be parallel to the vertical");
    }
    const Vec3 right = r.normalized();
    const Vec3 up = forward.cross(right);
    return {forward, right, up};
}

void check_render_params(const RenderParams& rp) {
    if (rp.width < 8 || rp.height < 8) {
        throw Error("render: resolution must be at least 8x8");
    }
    if (!(rp.fov_x > 0.0 && rp.fov_x < 3.14159265358979323846) ||
        !(rp.fov_y > 0.0 && rp.fov_y < 3.14159265358979323846)) {
        throw Error("render: fov must lie in (0, pi)");
    }
    if (!(rp.no_return > 0.0)) {
        throw Error("render: no_return sentinel must be positive");
    }
}

double sample_fitting(Rng& rng, double lo, double hi, double extent, const char* axis) {
    const double half = extent / 2;
    if (hi - lo < extent) {
        std::ostringstream msg;
        msg << "generate_scene: placement bounds on " << axis << " span " << (hi - lo)
            << " m, smaller than the target extent " << extent << " m";
        throw Error(msg.str());
    }
    return rng.uniform(lo + half, hi - half);
}

}  // namespace

void TargetPrimitive::validate() const {
    if (!(width > 0.0 && height > 0.0 && depth > 0.0)) {
        throw Error("target: width/height/depth must be positive");
    }
    if (!(reflectivity > 0.0 && reflectivity <= 1.0)) {
        throw Error("target: reflectivity must lie in (0, 1]");
    }
    if (!center.finite()) {
        throw Error("target: center must be finite");
    }
    if (kind == TargetKind::letter && !valid_letter(letter)) {
        throw Error(std::string("target: unsupported letter '") + letter + "'");
    }
}

void Room::validate() const {
    if (!(width > 0.0 && depth > 0.0 && height > 0.0)) {
        throw Error("room: dimensions must be positive");
    }
    if (!(wall_reflectivity > 0.0 && wall_reflectivity <= 1.0)) {
        throw Error("room: wall reflectivity must lie in (0, 1]");
    }
}

void SensorRig::validate() const {
    if (!spd_pos.finite() || !radar_pos.finite() || !camera_pos.finite()) {
        throw Error("rig: positions must be finite");
    }
    const double base = distance(spd_pos, radar_pos);
    if (!(base > 0.0)) {
        throw Error("rig: radar must be offset from the SPD (baseline > 0)");
    }
    if (std::abs(base - baseline_m) > 1e-9) {
        throw Error("rig: baseline_m does not match |spd_pos - radar_pos|");
    }
    if (std::abs(optical_axis.norm() - 1.0) > 1e-9) {
        throw Error("rig: optical_axis must be a unit vector");
    }
}

SensorRig make_default_rig(double baseline_m) {
    if (!(baseline_m > 0.0)) {
        throw Error("rig: baseline must be positive");
    }
    SensorRig rig;
    rig.spd_pos = {0.0, 0.0, 0.0};
    rig.radar_pos = {-baseline_m, 0.0, 0.0};
    rig.camera_pos = rig.spd_pos;
    rig.optical_axis = {0.0, 0.0, 1.0};
    rig.baseline_m = baseline_m;
    return rig;
}

void SceneSpec::validate() const {
    if (targets.empty()) {
        throw Error("scene: target list may not be empty");
    }
    for (const auto& t : targets) t.validate();
    rig.validate();
    if (background) {
        background->validate();
        for (const auto& t : targets) {
            if (std::abs(t.center.x) + t.width / 2 > background->width / 2 ||
                std::abs(t.center.y) + t.height / 2 > background->height / 2 ||
                t.center.z - t.depth / 2 < 0.0 ||
                t.center.z + t.depth / 2 > background->depth) {
                throw Error("scene: target extends outside the room");
            }
        }
    }
}

SceneSpec generate_scene(std::uint64_t seed, const GenerationParams& params) {
    if (params.kinds.empty()) {
        throw Error("generate_scene: no target kinds to choose from");
    }
    Rng rng(derive_seed(seed, 0x5ce9e5ull));

    TargetPrimitive t;
    t.kind = params.kinds[rng.index(params.kinds.size())];
    switch (t.kind) {
        case TargetKind::letter: {
            if (params.letters.empty()) {
                throw Error("generate_scene: letter kind requested with empty letter set");
            }
            t.letter = params.letters[rng.index(params.letters.size())];
            // Fixed plate sizes for the reference letters; the rest draw
            // from the configured ranges.
            if (t.letter == 'C') {
                t.width = 0.40;
                t.height = 0.30;
            } else if (t.letter == 'T') {
                t.width = 0.30;
                t.height = 0.20;
            } else {
                t.width = rng.uniform(params.width_min, params.width_max);
                t.height = rng.uniform(params.height_min, params.height_max);
            }
            t.depth = params.plate_depth;
            break;
        }
        case TargetKind::humanoid: {
            t.height = rng.uniform(params.humanoid_height_min, params.humanoid_height_max);
            t.width = params.humanoid_aspect * t.height;
            t.depth = params.plate_depth;
            break;
        }
        case TargetKind::box: {
            t.width = rng.uniform(params.width_min, params.width_max);
            t.height = rng.uniform(params.height_min, params.height_max);
            t.depth = rng.uniform(params.box_depth_min, params.box_depth_max);
            break;
        }
    }
    t.center.x = sample_fitting(rng, params.x_min, params.x_max, t.width, "x");
    if (t.kind == TargetKind::humanoid) {
        if (params.humanoid_y_max < params.humanoid_y_min) {
            throw Error("generate_scene: humanoid y bounds are inverted");
        }
        t.center.y = rng.uniform(params.humanoid_y_min, params.humanoid_y_max);
    } else {
        t.center.y = sample_fitting(rng, params.y_min, params.y_max, t.height, "y");
    }
    t.center.z = sample_fitting(rng, params.z_min, params.z_max, t.depth, "z");
    t.reflectivity = rng.uniform(params.reflectivity_min, params.reflectivity_max);

    SceneSpec scene;
    scene.targets.push_back(t);
    if (params.background) scene.background = params.room;
    scene.rig = params.rig;
    scene.rng_seed = seed;
    scene.validate();
    return scene;
}

DepthMap render_depth_map(const SceneSpec& scene, const RenderParams& rp,
                          const Vec3& camera_pos) {
    scene.validate();
    check_render_params(rp);
    const CameraBasis basis = make_basis(scene.rig.optical_axis);

    DepthMap dm;
    dm.width = rp.width;
    dm.height = rp.height;
    dm.fov_x = rp.fov_x;
    dm.fov_y = rp.fov_y;
    dm.optical_axis = scene.rig.optical_axis;
    dm.no_return = rp.no_return;
    dm.depth.assign(static_cast<std::size_t>(rp.width) * rp.height, rp.no_return);
    dm.reflectivity.assign(static_cast<std::size_t>(rp.width) * rp.height, 0.0);

    // Pixel centers as exact symmetric offsets about the axis: column i maps
    // to (i - (W-1)/2) * (2/W) * tan(fov/2). The offset factors are exact in
    // floating point, so column W-1-i is the exact negation of column i.
    const double sx = std::tan(rp.fov_x / 2) * (2.0 / rp.width);
    const double sy = std::tan(rp.fov_y / 2) * (2.0 / rp.height);
    const double cx = 0.5 * (rp.width - 1);
    const double cy = 0.5 * (rp.height - 1);

    for (int row = 0; row < rp.height; ++row) {
        const double py = (cy - row) * sy;
        for (int col = 0; col < rp.width; ++col) {
            const double px = (col - cx) * sx;
            const Vec3 dir =
                (basis.forward + basis.right * px + basis.up * py).normalized();

            RayHit best;
            RayHit h;
            for (const auto& target : scene.targets) {
                const bool got = (target.kind == TargetKind::box)
                                     ? hit_box(target, camera_pos, dir, &h)
                                     : hit_plate(target, camera_pos, dir, &h);
                if (got && h.t < best.t) best = h;
            }
            if (scene.background && hit_room(*scene.background, camera_pos, dir, &h) &&
                h.t < best.t) {
                best = h;
            }
            const std::size_t idx = static_cast<std::size_t>(row) * rp.width + col;
            if (best.t < rp.no_return) {
                dm.depth[idx] = best.t;
                dm.reflectivity[idx] = best.reflectivity;
            }
            // anything at or beyond the sentinel stays a no-return pixel
        }
    }
    return dm;
}

DepthMap render_depth_map(const SceneSpec& scene, const RenderParams& rp) {
    return render_depth_map(scene, rp, scene.rig.camera_pos);
}

SceneSpec mirror_scene(const SceneSpec& scene, double plane_x) {
    scene.validate();
    if (plane_x != scene.rig.spd_pos.x) {
        throw Error("mirror_scene: plane must contain the SPD position");
    }
    if (std::abs(scene.rig.optical_axis.x) > 1e-12) {
        throw Error("mirror_scene: plane must contain the optical axis");
    }
    SceneSpec out = scene;
    for (auto& t : out.targets) {
        // 2*p - x, arranged so the plane-at-origin case is an exact negation.
        t.center.x = plane_x + (plane_x - t.center.x);
        t.mirrored = !t.mirrored;
    }
    out.validate();
    return out;
}

std::vector<ScenePoint> point_cloud(const DepthMap& dm, const Vec3& camera_pos) {
    const CameraBasis basis = make_basis(dm.optical_axis);
    const double sx = std::tan(dm.fov_x / 2) * (2.0 / dm.width);
    const double sy = std::tan(dm.fov_y / 2) * (2.0 / dm.height);
    const double cx = 0.5 * (dm.width - 1);
    const double cy = 0.5 * (dm.height - 1);

    std::vector<ScenePoint> points;
    points.reserve(dm.depth.size());
    for (int row = 0; row < dm.height; ++row) {
        const double py = (cy - row) * sy;
        for (int col = 0; col < dm.width; ++col) {
            const std::size_t idx = static_cast<std::size_t>(row) * dm.width + col;
            const double d = dm.depth[idx];
            if (d >= dm.no_return) continue;
            const double px = (col - cx) * sx;
            const Vec3 dir =
                (basis.forward + basis.right * px + basis.up * py).normalized();
            points.push_back({camera_pos + dir * d, dm.reflectivity[idx]});
        }
    }
    return points;
}

const char* kind_name(TargetKind kind) {
    switch (kind) {
        case TargetKind::box: return "box";
        case TargetKind::letter: return "letter";
        case TargetKind::humanoid: return "humanoid";
    }
    return "unknown";
}

TargetKind kind_from_name(const std::string& name) {
    if (name == "box") return TargetKind::box;
    if (name == "letter") return TargetKind::letter;
    if (name == "humanoid") return TargetKind::humanoid;
    throw Error("unknown target kind '" + name + "'");
}

}  // namespace fusim::scene
