#include "tofcover/bezier.hpp"

#include <algorithm>
#include <limits>

namespace tofcover {

Vec3 CurveSegment::eval(double u) const {
    if (kind == Kind::Straight) return a + (b - a) * u;
    const double w = 1.0 - u;
    return a * (w * w) + ctrl * (2.0 * w * u) + b * (u * u);
}

Vec3 CurveSegment::derivative(double u) const {
    if (kind == Kind::Straight) return b - a;
    return (ctrl - a) * (2.0 * (1.0 - u)) + (b - ctrl) * (2.0 * u);
}

Vec3 CurveSegment::second_derivative() const {
    if (kind == Kind::Straight) return Vec3{};
    return (b - ctrl * 2.0 + a) * 2.0;
}

PiecewiseBezierCurve PiecewiseBezierCurve::build(const std::vector<Vec3>& points,
                                                 double interpolation_factor,
                                                 int samples_per_segment) {
    if (points.size() < 2)
        throw std::invalid_argument("PiecewiseBezierCurve: need at least 2 points");
    if (!(interpolation_factor > 0.0 && interpolation_factor <= 0.5))
        throw std::invalid_argument("PiecewiseBezierCurve: interpolation_factor outside (0, 0.5]");
    if (samples_per_segment < 1)
        throw std::invalid_argument("PiecewiseBezierCurve: samples_per_segment must be >= 1");
    for (size_t i = 1; i < points.size(); ++i)
        if (distance(points[i - 1], points[i]) <= 1e-9)
            throw std::invalid_argument("PiecewiseBezierCurve: duplicate consecutive points");

    PiecewiseBezierCurve c;
    c.control_points_ = points;
    c.interpolation_factor_ = interpolation_factor;
    c.samples_per_segment_ = samples_per_segment;

    const double f = interpolation_factor;
    Vec3 cursor = points.front();
    for (size_t k = 1; k + 1 < points.size(); ++k) {
        const Vec3 v_in = points[k] - points[k - 1];
        const Vec3 v_out = points[k + 1] - points[k];
        const double cos_angle = std::clamp(
            v_in.normalized().dot(v_out.normalized()), -1.0, 1.0);
        if (std::acos(cos_angle) < kCollinearToleranceRad) {
            // Collinear corner: split into straight pieces, no blend.
            c.segments_.push_back({CurveSegment::Kind::Straight, cursor, Vec3{}, points[k]});
            cursor = points[k];
            continue;
        }
        const Vec3 blend_start = points[k] - v_in * f;
        const Vec3 blend_end = points[k] + v_out * f;
        if (distance(cursor, blend_start) > 1e-12)
            c.segments_.push_back({CurveSegment::Kind::Straight, cursor, Vec3{}, blend_start});
        c.segments_.push_back({CurveSegment::Kind::Bezier, blend_start, points[k], blend_end});
        cursor = blend_end;
    }
    c.segments_.push_back({CurveSegment::Kind::Straight, cursor, Vec3{}, points.back()});

    c.build_tables();
    return c;
}

void PiecewiseBezierCurve::build_tables() {
    const int n = samples_per_segment_;
    sample_pos_.clear();
    sample_seg_.clear();
    sample_u_.clear();
    sample_s_.clear();
    seg_center_.assign(segments_.size(), Vec3{});
    seg_radius_.assign(segments_.size(), 0.0);
    seg_first_sample_.assign(segments_.size(), 0);
    seg_last_sample_.assign(segments_.size(), 0);

    double s = 0.0;
    for (size_t k = 0; k < segments_.size(); ++k) {
        const CurveSegment& seg = segments_[k];
        seg_first_sample_[k] = static_cast<int>(sample_pos_.size());
        if (k == 0) {
            // Junction samples belong to the preceding segment; only the very
            // first sample is emitted here.
            sample_pos_.push_back(seg.eval(0.0));
            sample_seg_.push_back(0);
            sample_u_.push_back(0.0);
            sample_s_.push_back(0.0);
        }
        // Straight segments contribute exact length; blends a chord sum.
        if (seg.kind == CurveSegment::Kind::Straight) {
            const double len = distance(seg.a, seg.b);
            for (int j = 1; j <= n; ++j) {
                const double u = static_cast<double>(j) / n;
                sample_pos_.push_back(seg.eval(u));
                sample_seg_.push_back(static_cast<int>(k));
                sample_u_.push_back(u);
                sample_s_.push_back(s + len * u);
            }
            s += len;
        } else {
            Vec3 prev = seg.a;
            for (int j = 1; j <= n; ++j) {
                const double u = static_cast<double>(j) / n;
                const Vec3 p = seg.eval(u);
                s += distance(prev, p);
                prev = p;
                sample_pos_.push_back(p);
                sample_seg_.push_back(static_cast<int>(k));
                sample_u_.push_back(u);
                sample_s_.push_back(s);
            }
        }
        seg_last_sample_[k] = static_cast<int>(sample_pos_.size()) - 1;

        // Pruning sphere and bounding box from the segment hull (a, ctrl, b
        // bound a quadratic Bezier).
        Aabb hull = Aabb::empty_box();
        hull.expand(seg.a);
        hull.expand(seg.b);
        if (seg.kind == CurveSegment::Kind::Bezier) hull.expand(seg.ctrl);
        bbox_.expand(hull);
        const Vec3 center = (hull.lo + hull.hi) * 0.5;
        seg_center_[k] = center;
        seg_radius_[k] = distance(center, hull.hi);
    }
    total_length_ = s;
}

PiecewiseBezierCurve::Local PiecewiseBezierCurve::locate(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    const double target = t * total_length_;
    const auto it = std::lower_bound(sample_s_.begin(), sample_s_.end(), target);
    size_t hi = std::min<size_t>(std::distance(sample_s_.begin(), it), sample_s_.size() - 1);
    if (hi == 0) return {sample_seg_[0], sample_u_[0]};
    const size_t lo = hi - 1;
    const double span = sample_s_[hi] - sample_s_[lo];
    const double frac = (span > 0.0) ? (target - sample_s_[lo]) / span : 0.0;
    const int seg = sample_seg_[hi];
    const double u_lo = (sample_seg_[lo] == seg) ? sample_u_[lo] : 0.0;
    return {seg, u_lo + (sample_u_[hi] - u_lo) * frac};
}

Vec3 PiecewiseBezierCurve::eval(double t) const {
    const Local loc = locate(t);
    return segments_[loc.segment].eval(loc.u);
}

PiecewiseBezierCurve::Frame PiecewiseBezierCurve::frenet_frame(double t) const {
    const Local loc = locate(t);
    const CurveSegment& seg = segments_[loc.segment];
    const Vec3 tangent = seg.derivative(loc.u).normalized();
    Vec3 normal;
    const Vec3 dd = seg.second_derivative();
    const Vec3 perp = dd - tangent * dd.dot(tangent);
    if (perp.norm2() > 1e-18) {
        normal = perp.normalized();
    } else {
        normal = any_perpendicular(tangent);
    }
    return {tangent, normal};
}

PiecewiseBezierCurve::ClosestPoint PiecewiseBezierCurve::closest(const Vec3& p) const {
    // Nearest sample, with per-segment sphere pruning.
    double best_d2 = std::numeric_limits<double>::infinity();
    int best_sample = 0;
    for (size_t k = 0; k < segments_.size(); ++k) {
        const double lower = distance(p, seg_center_[k]) - seg_radius_[k];
        if (lower > 0.0 && lower * lower >= best_d2) continue;
        const int first = (k == 0) ? seg_first_sample_[k] : seg_first_sample_[k] - 1;
        for (int i = first; i <= seg_last_sample_[k]; ++i) {
            const double d2 = (p - sample_pos_[i]).norm2();
            if (d2 < best_d2) {
                best_d2 = d2;
                best_sample = i;
            }
        }
    }

    // Golden-section refinement on the exact segment, one sample window to
    // each side of the nearest sample.
    const double h = 1.0 / samples_per_segment_;
    struct Window {
        int seg;
        double u_lo, u_hi;
    };
    Window windows[3];
    int n_windows = 0;
    const int seg = sample_seg_[best_sample];
    const double u = sample_u_[best_sample];
    windows[n_windows++] = {seg, std::max(0.0, u - h), std::min(1.0, u + h)};
    if (u - h < 0.0 && seg > 0) windows[n_windows++] = {seg - 1, 1.0 - h, 1.0};
    if (u + h > 1.0 && seg + 1 < static_cast<int>(segments_.size()))
        windows[n_windows++] = {seg + 1, 0.0, h};

    constexpr double kGolden = 0.6180339887498949;
    double best_dist2 = best_d2;
    int best_seg = seg;
    double best_u = u;
    for (int w = 0; w < n_windows; ++w) {
        const CurveSegment& sgm = segments_[windows[w].seg];
        double lo = windows[w].u_lo, hi = windows[w].u_hi;
        double x1 = hi - kGolden * (hi - lo);
        double x2 = lo + kGolden * (hi - lo);
        double f1 = (p - sgm.eval(x1)).norm2();
        double f2 = (p - sgm.eval(x2)).norm2();
        for (int it = 0; it < 48; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - kGolden * (hi - lo);
                f1 = (p - sgm.eval(x1)).norm2();
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + kGolden * (hi - lo);
                f2 = (p - sgm.eval(x2)).norm2();
            }
        }
        const double um = 0.5 * (lo + hi);
        const double fm = (p - sgm.eval(um)).norm2();
        if (fm < best_dist2) {
            best_dist2 = fm;
            best_seg = windows[w].seg;
            best_u = um;
        }
    }

    ClosestPoint out;
    out.distance = std::sqrt(best_dist2);

    // Normalized-arclength parameter of the refined point.
    const int first = seg_first_sample_[best_seg];
    const double s0 = (first > 0) ? sample_s_[first - 1] : 0.0;
    const double seg_len = sample_s_[seg_last_sample_[best_seg]] - s0;
    out.t = (total_length_ > 0.0) ? (s0 + best_u * seg_len) / total_length_ : 0.0;

    // Beyond-the-end test: only the two curve endpoints bound the domain.
    out.in_domain = true;
    const double kEndU = 1e-9;
    if (best_seg == 0 && best_u <= kEndU) {
        const Vec3 d = segments_.front().derivative(0.0);
        if ((p - segments_.front().a).dot(d) < 0.0) out.in_domain = false;
    } else if (best_seg + 1 == static_cast<int>(segments_.size()) && best_u >= 1.0 - kEndU) {
        const Vec3 d = segments_.back().derivative(1.0);
        if ((p - segments_.back().b).dot(d) > 0.0) out.in_domain = false;
    }
    return out;
}

double PiecewiseBezierCurve::min_curvature_radius() const {
    double min_r = std::numeric_limits<double>::infinity();
    for (const CurveSegment& seg : segments_) {
        if (seg.kind != CurveSegment::Kind::Bezier) continue;
        const Vec3 dd = seg.second_derivative();
        for (int j = 0; j <= samples_per_segment_; ++j) {
            const double u = static_cast<double>(j) / samples_per_segment_;
            const Vec3 d = seg.derivative(u);
            const double speed2 = d.norm2();
            if (speed2 < 1e-18) continue;
            const double kappa = d.cross(dd).norm() / (speed2 * std::sqrt(speed2));
            if (kappa > 1e-12) min_r = std::min(min_r, 1.0 / kappa);
        }
    }
    return min_r;
}

}  // namespace tofcover
