#pragma once

#include <vector>

#include "tofcover/geom.hpp"

namespace tofcover {

/// One piece of a robot pose curve: a straight chord or a quadratic Bezier
/// corner blend.
struct CurveSegment {
    enum class Kind { Straight, Bezier };
    Kind kind = Kind::Straight;
    Vec3 a;     // start
    Vec3 ctrl;  // Bezier control point (the original corner); unused for Straight
    Vec3 b;     // end

    Vec3 eval(double u) const;
    Vec3 derivative(double u) const;
    Vec3 second_derivative() const;
};

/// Robot-pose centerline through the link endpoints P_0..P_n.
///
/// Corners where the incident directions deviate by more than the
/// collinearity tolerance get a quadratic blend with the corner as control
/// point; collinear corners stay straight. The curve is parameterized by
/// normalized arclength t in [0,1] via a per-segment sample table.
class PiecewiseBezierCurve {
  public:
    static constexpr double kCollinearToleranceRad = deg_to_rad(0.5);

    /// Builds the blended curve. interpolation_factor is the fraction of each
    /// incident leg consumed by a corner blend, in (0, 0.5].
    static PiecewiseBezierCurve build(const std::vector<Vec3>& points,
                                      double interpolation_factor = 0.25,
                                      int samples_per_segment = 64);

    double arclength() const { return total_length_; }

    /// Position at normalized-arclength parameter t in [0,1].
    Vec3 eval(double t) const;

    struct Frame {
        Vec3 tangent;
        Vec3 normal;
    };
    /// Unit tangent and unit normal at t. On straight pieces (and degenerate
    /// blends) the normal is the deterministic perpendicular from
    /// any_perpendicular().
    Frame frenet_frame(double t) const;

    struct ClosestPoint {
        double distance = 0.0;
        double t = 0.0;     // normalized-arclength parameter of the closest point
        bool in_domain = true;  // false when p lies beyond either curve end
    };
    /// Distance from p to the curve: nearest sample located via per-segment
    /// pruning, then golden-section refinement on the exact segment within
    /// one sample window. in_domain is false only when the minimizer sits at
    /// a curve end and p projects beyond it.
    ClosestPoint closest(const Vec3& p) const;

    /// Smallest radius of curvature over the blends; +inf for straight-only
    /// curves.
    double min_curvature_radius() const;

    const std::vector<Vec3>& control_points() const { return control_points_; }
    const std::vector<CurveSegment>& segments() const { return segments_; }
    double interpolation_factor() const { return interpolation_factor_; }
    int samples_per_segment() const { return samples_per_segment_; }
    Aabb bounding_box() const { return bbox_; }

    Vec3 start() const { return segments_.front().a; }
    Vec3 end() const { return segments_.back().b; }

  private:
    PiecewiseBezierCurve() = default;
    void build_tables();
    struct Local {
        int segment;
        double u;
    };
    Local locate(double t) const;

    std::vector<Vec3> control_points_;
    std::vector<CurveSegment> segments_;
    double interpolation_factor_ = 0.25;
    int samples_per_segment_ = 64;

    // Sample table over all segments, in order: exact positions, owning
    // segment, local parameter, cumulative chord arclength.
    std::vector<Vec3> sample_pos_;
    std::vector<int> sample_seg_;
    std::vector<double> sample_u_;
    std::vector<double> sample_s_;
    double total_length_ = 0.0;

    // Per-segment pruning spheres for distance queries.
    std::vector<Vec3> seg_center_;
    std::vector<double> seg_radius_;
    std::vector<int> seg_first_sample_;
    std::vector<int> seg_last_sample_;

    Aabb bbox_ = Aabb::empty_box();
};

}  // namespace tofcover
