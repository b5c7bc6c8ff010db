#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fusim/vec3.hpp"

namespace fusim::scene {

enum class TargetKind { box, letter, humanoid };

/// A single scene object. Boxes are solid axis-aligned cuboids; letter and
/// humanoid targets are flat extruded plates facing the sensors, with a 2-D
/// silhouette evaluated on the plate's front plane.
///
/// `mirrored` flips the silhouette left/right. reflect_x() toggles it so
/// that a reflected scene renders the exact point-for-point reflection of
/// the original, including asymmetric glyphs such as 'C'.
struct TargetPrimitive {
    TargetKind kind = TargetKind::box;
    Vec3 center;
    double width = 0.0;   // extent along x
    double height = 0.0;  // extent along y
    double depth = 0.0;   // extent along z
    double reflectivity = 1.0;  // in (0, 1]
    char letter = 'T';          // letter targets only; one of CTLUH
    bool mirrored = false;

    void validate() const;
};

/// Optional enclosing room. Axis-aligned: x in [-width/2, width/2],
/// y in [-height/2, height/2], z in [0, depth]. Sensors sit inside near z=0.
struct Room {
    double width = 6.0;
    double depth = 6.0;
    double height = 3.0;
    double wall_reflectivity = 0.8;

    void validate() const;
};

/// Sensor geometry. The radar sits at a lateral baseline from the
/// single-photon detector; that offset is what breaks left/right symmetry
/// in the range channel. baseline_m must equal |spd_pos - radar_pos|.
struct SensorRig {
    Vec3 spd_pos{0.0, 0.0, 0.0};
    Vec3 radar_pos{-0.5, 0.0, 0.0};
    Vec3 camera_pos{0.0, 0.0, 0.0};
    Vec3 optical_axis{0.0, 0.0, 1.0};  // unit vector
    double baseline_m = 0.5;

    void validate() const;
};

/// Builds the standard rig: detector at the origin, radar `baseline_m` to
/// its left, depth camera co-located with the detector, axis +z.
SensorRig make_default_rig(double baseline_m = 0.5);

struct SceneSpec {
    std::vector<TargetPrimitive> targets;  // non-empty
    std::optional<Room> background;
    SensorRig rig;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/// Rendered depth image. `depth` and `reflectivity` are row-major height x
/// width. Pixels with no return hold exactly `no_return` in the depth
/// channel and 0 in the reflectivity channel. Hits beyond `no_return` are
/// treated as no-return (range-limited camera).
struct DepthMap {
    int width = 0;
    int height = 0;
    double fov_x = 0.0;
    double fov_y = 0.0;
    Vec3 optical_axis{0.0, 0.0, 1.0};
    double no_return = 6.0;
    std::vector<double> depth;
    std::vector<double> reflectivity;

    double& at(int row, int col) { return depth[static_cast<std::size_t>(row) * width + col]; }
    double at(int row, int col) const { return depth[static_cast<std::size_t>(row) * width + col]; }
};

struct RenderParams {
    int width = 64;
    int height = 64;
    double fov_x = 0.5;  // radians, full angle
    double fov_y = 0.5;
    double no_return = 6.0;
};

/// Randomized scene generation controls. Placement bounds contain the whole
/// target, so centers are sampled from the bounds shrunk by half the target
/// extent; bounds too tight for the target size are an error. Humanoids are
/// the exception on the vertical axis: they are far taller than any useful
/// y bound, so their y *centers* draw from [humanoid_y_min, humanoid_y_max]
/// directly.
struct GenerationParams {
    std::vector<TargetKind> kinds{TargetKind::box, TargetKind::letter, TargetKind::humanoid};
    std::string letters = "CTLUH";
    double x_min = -0.5, x_max = 0.5;
    double y_min = -0.5, y_max = 0.5;
    double z_min = 3.0, z_max = 4.0;
    double width_min = 0.2, width_max = 0.5;
    double height_min = 0.2, height_max = 0.5;
    double box_depth_min = 0.2, box_depth_max = 0.5;
    double plate_depth = 0.05;
    double humanoid_height_min = 1.55, humanoid_height_max = 1.85;
    double humanoid_aspect = 0.33;  // width = aspect * height
    double humanoid_y_min = -0.1, humanoid_y_max = 0.1;
    double reflectivity_min = 0.4, reflectivity_max = 1.0;
    bool background = false;
    Room room;
    SensorRig rig = make_default_rig();
};

/// Deterministic single-target scene draw. Identical (seed, params) produce
/// bit-identical scenes.
SceneSpec generate_scene(std::uint64_t seed, const GenerationParams& params);

/// Pinhole render from `camera_pos` looking along the rig's optical axis.
/// Per pixel: distance to the nearest intersection, or the no-return
/// sentinel. Resolution must be at least 8x8 and fov components in (0, pi).
///
/// Pixel rays are laid out symmetrically about the axis, so a scene
/// reflected about a vertical plane through a camera on that plane renders
/// to the exact column-flipped image, bit for bit.
DepthMap render_depth_map(const SceneSpec& scene, const RenderParams& params,
                          const Vec3& camera_pos);

/// Convenience overload: renders from rig.camera_pos.
DepthMap render_depth_map(const SceneSpec& scene, const RenderParams& params);

/// Reflects every target about the vertical plane x = plane_x. The plane
/// must contain the SPD position and the optical axis; the rig itself is
/// left untouched. Applying the operation twice returns the original scene.
SceneSpec mirror_scene(const SceneSpec& scene, double plane_x);

struct ScenePoint {
    Vec3 position;
    double reflectivity = 0.0;
};

/// Back-projects every returned pixel to a 3-D point at its recorded depth
/// along the pixel ray. |point - camera_pos| equals the stored depth.
std::vector<ScenePoint> point_cloud(const DepthMap& dm, const Vec3& camera_pos);

const char* kind_name(TargetKind kind);
TargetKind kind_from_name(const std::string& name);

}  // namespace fusim::scene
