#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "graspbench/errors.hpp"

namespace graspbench {

// Grasp geometry conventions
// --------------------------
// Image coordinates: x rightward, y downward, units are pixels.
// theta is the angle (degrees) between the gripper closing axis and the
// horizontal image axis, normalized to [-90, 90) -- grasps are symmetric
// under 180 degree rotation, so a half-open 180 degree range is canonical.
// w is the gripper opening (measured along the closing axis), h is the
// plate size (perpendicular to it).
//
// Quad vertex convention: edge v0->v1 is a plate edge (length h), edge
// v1->v2 spans the opening (length w). This fixes an unambiguous bijection
// between the quad and pose forms.

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

struct GraspPose5D {
    double x = 0.0;      // center, pixels
    double y = 0.0;
    double theta = 0.0;  // degrees in [-90, 90)
    double h = 1.0;      // plate size, pixels > 0
    double w = 1.0;      // gripper opening, pixels > 0
};

struct GraspQuad {
    std::array<Vec2, 4> v{};
};

// Horizontal-box-plus-angle form: the axis-aligned box of the grasp after
// de-rotating the closing axis onto +x, with theta carried alongside.
struct GraspAngled {
    double theta = 0.0;
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;
};

// Normalizes an angle in degrees to [-90, 90); -90 included, +90 excluded.
double normalize_angle_deg(double theta);

// Minimal absolute angular difference modulo 180 degrees, in [0, 90].
double angle_diff_deg(double a, double b);

// Throws out_of_range / degenerate_box when the pose invariants fail.
void validate(const GraspPose5D& pose);

// Rectangle test: opposite edge lengths equal within rel_tol relative,
// adjacent edges orthogonal within rel_tol after normalization.
bool is_rectangle(const GraspQuad& quad, double rel_tol = 1e-6);

GraspPose5D quad_to_pose(const GraspQuad& quad, double rel_tol = 1e-6);
GraspQuad pose_to_quad(const GraspPose5D& pose);

GraspAngled pose_to_angled(const GraspPose5D& pose);
GraspPose5D angled_to_pose(const GraspAngled& angled);

// Rigid transform of a point / pose: rotate by rot_deg about (cx, cy),
// then translate by (dx, dy). Poses keep h and w; theta advances by rot_deg.
Vec2 transform_point(Vec2 p, double rot_deg, double dx, double dy,
                     double cx = 0.0, double cy = 0.0);
GraspPose5D transform_pose(const GraspPose5D& pose, double rot_deg, double dx,
                           double dy, double cx = 0.0, double cy = 0.0);

using Polygon = std::vector<Vec2>;

double polygon_area(const Polygon& poly);

// Sutherland-Hodgman clip of a convex subject against a convex clip polygon.
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

double quad_area(const GraspQuad& quad);

// Area of the convex polygon a intersect b; 0 when disjoint or degenerate.
double convex_intersection_area(const GraspQuad& a, const GraspQuad& b);

enum class JaccardMode {
    rotated,       // true rotated-polygon overlap
    axis_aligned,  // overlap of the axis-aligned bounding boxes, for
                   // comparison with implementations that used plain boxes
};

// |a intersect b| / |a union b| of the two grasp rectangles, in [0, 1].
double jaccard(const GraspPose5D& a, const GraspPose5D& b,
               JaccardMode mode = JaccardMode::rotated);

}  // namespace graspbench
