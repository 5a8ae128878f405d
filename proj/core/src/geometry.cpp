#include "graspbench/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace graspbench {

namespace {

constexpr double kPi = 3.14159265358979323846;

double deg_to_rad(double deg) { return deg * kPi / 180.0; }

double atan2_deg(double dy, double dx) {
    return std::atan2(dy, dx) * 180.0 / kPi;
}

}  // namespace

double normalize_angle_deg(double theta) {
    double t = std::fmod(theta + 90.0, 180.0);
    if (t < 0.0) t += 180.0;
    return t - 90.0;
}

double angle_diff_deg(double a, double b) {
    double d = std::fmod(std::fabs(a - b), 180.0);
    if (d > 90.0) d = 180.0 - d;
    return d;
}

void validate(const GraspPose5D& pose) {
    if (!(pose.theta >= -90.0 && pose.theta < 90.0)) {
        raise(Errc::out_of_range,
              "pose theta " + std::to_string(pose.theta) + " outside [-90, 90)");
    }
    if (!(pose.h > 0.0) || !(pose.w > 0.0)) {
        raise(Errc::degenerate_box, "pose requires h > 0 and w > 0");
    }
    if (!std::isfinite(pose.x) || !std::isfinite(pose.y) ||
        !std::isfinite(pose.h) || !std::isfinite(pose.w)) {
        raise(Errc::non_finite, "pose has non-finite fields");
    }
}

bool is_rectangle(const GraspQuad& quad, double rel_tol) {
    std::array<Vec2, 4> e;
    std::array<double, 4> len;
    for (int i = 0; i < 4; ++i) {
        e[i] = quad.v[(i + 1) % 4] - quad.v[i];
        len[i] = norm(e[i]);
        if (!(len[i] > 0.0) || !std::isfinite(len[i])) return false;
    }
    for (int i = 0; i < 2; ++i) {
        const double a = len[i], b = len[i + 2];
        if (std::fabs(a - b) > rel_tol * std::max(a, b)) return false;
    }
    for (int i = 0; i < 4; ++i) {
        const int j = (i + 1) % 4;
        const double cosine = dot(e[i], e[j]) / (len[i] * len[j]);
        if (std::fabs(cosine) > rel_tol) return false;
    }
    return true;
}

GraspPose5D quad_to_pose(const GraspQuad& quad, double rel_tol) {
    if (!is_rectangle(quad, rel_tol)) {
        raise(Errc::non_rectangle, "quad vertices do not form a rectangle");
    }
    const Vec2 c = (quad.v[0] + quad.v[1] + quad.v[2] + quad.v[3]) * 0.25;
    const Vec2 opening = quad.v[2] - quad.v[1];  // closing axis, length w
    GraspPose5D pose;
    pose.x = c.x;
    pose.y = c.y;
    pose.theta = normalize_angle_deg(atan2_deg(opening.y, opening.x));
    pose.w = norm(opening);
    pose.h = norm(quad.v[1] - quad.v[0]);
    return pose;
}

GraspQuad pose_to_quad(const GraspPose5D& pose) {
    validate(pose);
    const double rad = deg_to_rad(pose.theta);
    const Vec2 u{std::cos(rad), std::sin(rad)};   // closing axis
    const Vec2 n{-std::sin(rad), std::cos(rad)};  // plate direction
    const Vec2 c{pose.x, pose.y};
    const Vec2 half_u = u * (pose.w * 0.5);
    const Vec2 half_n = n * (pose.h * 0.5);
    GraspQuad quad;
    quad.v[0] = c - half_u - half_n;
    quad.v[1] = c - half_u + half_n;
    quad.v[2] = c + half_u + half_n;
    quad.v[3] = c + half_u - half_n;
    return quad;
}

GraspAngled pose_to_angled(const GraspPose5D& pose) {
    validate(pose);
    GraspAngled a;
    a.theta = pose.theta;
    a.x_min = pose.x - pose.w * 0.5;
    a.x_max = pose.x + pose.w * 0.5;
    a.y_min = pose.y - pose.h * 0.5;
    a.y_max = pose.y + pose.h * 0.5;
    return a;
}

GraspPose5D angled_to_pose(const GraspAngled& angled) {
    if (!(angled.x_min < angled.x_max) || !(angled.y_min < angled.y_max)) {
        raise(Errc::degenerate_box, "angled box requires x_min < x_max and y_min < y_max");
    }
    GraspPose5D pose;
    pose.theta = angled.theta;
    pose.x = 0.5 * (angled.x_min + angled.x_max);
    pose.y = 0.5 * (angled.y_min + angled.y_max);
    pose.w = angled.x_max - angled.x_min;
    pose.h = angled.y_max - angled.y_min;
    validate(pose);
    return pose;
}

Vec2 transform_point(Vec2 p, double rot_deg, double dx, double dy, double cx,
                     double cy) {
    const double rad = deg_to_rad(rot_deg);
    const double c = std::cos(rad), s = std::sin(rad);
    const double rx = p.x - cx, ry = p.y - cy;
    return {cx + c * rx - s * ry + dx, cy + s * rx + c * ry + dy};
}

GraspPose5D transform_pose(const GraspPose5D& pose, double rot_deg, double dx,
                           double dy, double cx, double cy) {
    const Vec2 center = transform_point({pose.x, pose.y}, rot_deg, dx, dy, cx, cy);
    GraspPose5D out = pose;
    out.x = center.x;
    out.y = center.y;
    out.theta = normalize_angle_deg(pose.theta + rot_deg);
    return out;
}

double polygon_area(const Polygon& poly) {
    if (poly.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        twice += p.x * q.y - q.x * p.y;
    }
    return std::fabs(twice) * 0.5;
}

namespace {

double signed_area_twice(const Polygon& poly) {
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        twice += p.x * q.y - q.x * p.y;
    }
    return twice;
}

Polygon as_ccw(Polygon poly) {
    if (signed_area_twice(poly) < 0.0) {
        std::reverse(poly.begin(), poly.end());
    }
    return poly;
}

}  // namespace

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
    Polygon output = subject;
    const Polygon ccw_clip = as_ccw(clip);
    const std::size_t m = ccw_clip.size();
    for (std::size_t i = 0; i < m && !output.empty(); ++i) {
        const Vec2 a = ccw_clip[i];
        const Vec2 b = ccw_clip[(i + 1) % m];
        const Vec2 edge = b - a;
        Polygon input;
        input.swap(output);
        const std::size_t n = input.size();
        for (std::size_t j = 0; j < n; ++j) {
            const Vec2 p = input[j];
            const Vec2 q = input[(j + 1) % n];
            const double sp = cross(edge, p - a);
            const double sq = cross(edge, q - a);
            const bool p_in = sp >= 0.0;
            const bool q_in = sq >= 0.0;
            if (p_in != q_in) {
                const double t = sp / (sp - sq);
                output.push_back(p + (q - p) * t);
            }
            if (q_in) output.push_back(q);
        }
    }
    return output;
}

double quad_area(const GraspQuad& quad) {
    return polygon_area(Polygon(quad.v.begin(), quad.v.end()));
}

double convex_intersection_area(const GraspQuad& a, const GraspQuad& b) {
    const Polygon pa(a.v.begin(), a.v.end());
    const Polygon pb(b.v.begin(), b.v.end());
    const Polygon inter = clip_convex(pa, pb);
    if (inter.size() < 3) return 0.0;
    // The true intersection can never exceed either operand; clamping removes
    // last-ulp clipping noise that would otherwise violate that bound.
    const double bound = std::min(polygon_area(pa), polygon_area(pb));
    return std::clamp(polygon_area(inter), 0.0, bound);
}

double jaccard(const GraspPose5D& a, const GraspPose5D& b, JaccardMode mode) {
    validate(a);
    validate(b);
    if (mode == JaccardMode::axis_aligned) {
        const GraspQuad qa = pose_to_quad(a);
        const GraspQuad qb = pose_to_quad(b);
        double ax0 = qa.v[0].x, ax1 = qa.v[0].x, ay0 = qa.v[0].y, ay1 = qa.v[0].y;
        double bx0 = qb.v[0].x, bx1 = qb.v[0].x, by0 = qb.v[0].y, by1 = qb.v[0].y;
        for (int i = 1; i < 4; ++i) {
            ax0 = std::min(ax0, qa.v[i].x); ax1 = std::max(ax1, qa.v[i].x);
            ay0 = std::min(ay0, qa.v[i].y); ay1 = std::max(ay1, qa.v[i].y);
            bx0 = std::min(bx0, qb.v[i].x); bx1 = std::max(bx1, qb.v[i].x);
            by0 = std::min(by0, qb.v[i].y); by1 = std::max(by1, qb.v[i].y);
        }
        const double iw = std::max(0.0, std::min(ax1, bx1) - std::max(ax0, bx0));
        const double ih = std::max(0.0, std::min(ay1, by1) - std::max(ay0, by0));
        const double inter = iw * ih;
        const double uni = (ax1 - ax0) * (ay1 - ay0) + (bx1 - bx0) * (by1 - by0) - inter;
        return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
    }
    const GraspQuad qa = pose_to_quad(a);
    const GraspQuad qb = pose_to_quad(b);
    const double inter = convex_intersection_area(qa, qb);
    const double uni = quad_area(qa) + quad_area(qb) - inter;
    if (!(uni > 0.0)) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace graspbench
