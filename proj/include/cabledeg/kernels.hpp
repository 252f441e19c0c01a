#pragma once

// Scalar-generic geometric primitives shared by the 3D and planar code.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace cabledeg {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

/// Relative tolerance for barycentric closeness to an edge and for
/// near-tangential incidence (cosine between direction and normal).
inline constexpr double kCrossingTolerance = 1e-9;

/// Signed solid angle subtended at `p` by triangle (a, b, c), positive when
/// `p` lies on the side opposite the normal (b - a) x (c - a).
/// Van Oosterom & Strackee.
template <typename Scalar>
Scalar signed_solid_angle(const Vector3<Scalar>& p, const Vector3<Scalar>& a,
                          const Vector3<Scalar>& b, const Vector3<Scalar>& c) {
    const Vector3<Scalar> ra = a - p;
    const Vector3<Scalar> rb = b - p;
    const Vector3<Scalar> rc = c - p;
    const Scalar la = ra.norm();
    const Scalar lb = rb.norm();
    const Scalar lc = rc.norm();
    const Scalar num = ra.dot(rb.cross(rc));
    const Scalar den = la * lb * lc + ra.dot(rb) * lc + ra.dot(rc) * lb + rb.dot(rc) * la;
    return Scalar(2) * std::atan2(num, den);
}

enum class HitKind { None, Transverse, Degenerate };

template <typename Scalar>
struct SegmentTriangleHit {
    HitKind kind = HitKind::None;
    Scalar t = 0;     ///< segment parameter in [0, 1]
    int sign = 0;     ///< sign of <segment direction, triangle normal>
};

/// Segment p0->p1 against triangle (a, b, c) (Moller-Trumbore).
/// Hits within `tol` (barycentric) of the triangle boundary, at a segment
/// endpoint, or with |cos(direction, normal)| < tol are Degenerate.
template <typename Scalar>
SegmentTriangleHit<Scalar> intersect_segment_triangle(const Vector3<Scalar>& p0,
                                                      const Vector3<Scalar>& p1,
                                                      const Vector3<Scalar>& a,
                                                      const Vector3<Scalar>& b,
                                                      const Vector3<Scalar>& c,
                                                      Scalar tol = Scalar(kCrossingTolerance)) {
    SegmentTriangleHit<Scalar> hit;
    const Vector3<Scalar> d = p1 - p0;
    const Vector3<Scalar> e1 = b - a;
    const Vector3<Scalar> e2 = c - a;
    const Vector3<Scalar> n = e1.cross(e2);
    const Scalar dn = d.norm() * n.norm();
    if (dn == Scalar(0)) return hit;
    const Scalar cosine = d.dot(n) / dn;

    if (std::abs(cosine) < tol) {
        // Near-parallel: degenerate only if the segment actually touches the
        // triangle's neighbourhood.
        const Scalar nn = n.norm();
        const Scalar s0 = (p0 - a).dot(n) / nn;
        const Scalar s1 = (p1 - a).dot(n) / nn;
        const Scalar scale = std::max({e1.norm(), e2.norm(), d.norm()});
        if ((s0 > tol * scale && s1 > tol * scale) || (s0 < -tol * scale && s1 < -tol * scale)) {
            return hit;
        }
        Eigen::AlignedBox<Scalar, 3> tri_box;
        tri_box.extend(a).extend(b).extend(c);
        Eigen::AlignedBox<Scalar, 3> seg_box;
        seg_box.extend(p0).extend(p1);
        tri_box.min().array() -= tol * scale;
        tri_box.max().array() += tol * scale;
        if (tri_box.intersects(seg_box)) hit.kind = HitKind::Degenerate;
        return hit;
    }

    const Vector3<Scalar> pv = d.cross(e2);
    const Scalar det = e1.dot(pv);
    const Scalar inv = Scalar(1) / det;
    const Vector3<Scalar> tv = p0 - a;
    const Scalar u = tv.dot(pv) * inv;
    const Vector3<Scalar> qv = tv.cross(e1);
    const Scalar v = d.dot(qv) * inv;
    const Scalar w = Scalar(1) - u - v;
    const Scalar t = e2.dot(qv) * inv;

    if (u < -tol || v < -tol || w < -tol) return hit;
    const Scalar tlen = tol * std::max(Scalar(1), (e1.norm() + e2.norm()) / d.norm());
    if (t < -tlen || t > Scalar(1) + tlen) return hit;

    hit.t = t;
    hit.sign = cosine > 0 ? 1 : -1;
    if (u < tol || v < tol || w < tol || t < tlen || t > Scalar(1) - tlen) {
        hit.kind = HitKind::Degenerate;
    } else {
        hit.kind = HitKind::Transverse;
    }
    return hit;
}

/// Triangle / axis-aligned box overlap by separating axes (Akenine-Moller).
/// Touching counts as overlap.
template <typename Scalar>
bool triangle_box_overlap(const Eigen::AlignedBox<Scalar, 3>& box, const Vector3<Scalar>& a,
                          const Vector3<Scalar>& b, const Vector3<Scalar>& c) {
    const Vector3<Scalar> center = box.center();
    const Vector3<Scalar> half = box.sizes() / Scalar(2);
    const Vector3<Scalar> v0 = a - center;
    const Vector3<Scalar> v1 = b - center;
    const Vector3<Scalar> v2 = c - center;
    const Vector3<Scalar> f[3] = {v1 - v0, v2 - v1, v0 - v2};

    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) {
            const Vector3<Scalar> axis = Vector3<Scalar>::Unit(i).cross(f[k]);
            const Scalar p0 = v0.dot(axis);
            const Scalar p1 = v1.dot(axis);
            const Scalar p2 = v2.dot(axis);
            const Scalar r = half.dot(axis.cwiseAbs());
            if (std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r) return false;
        }
    }
    for (int i = 0; i < 3; ++i) {
        if (std::min({v0[i], v1[i], v2[i]}) > half[i] || std::max({v0[i], v1[i], v2[i]}) < -half[i]) {
            return false;
        }
    }
    const Vector3<Scalar> normal = f[0].cross(f[1]);
    const Scalar dist = normal.dot(v0);
    const Scalar r = half.dot(normal.cwiseAbs());
    return std::abs(dist) <= r;
}

template <typename Scalar>
Scalar cross2(const Vector2<Scalar>& a, const Vector2<Scalar>& b) {
    return a.x() * b.y() - a.y() * b.x();
}

template <typename Scalar>
struct SegmentSegmentHit {
    HitKind kind = HitKind::None;
    Scalar t = 0;  ///< parameter along the first segment
    int sign = 0;  ///< sign of cross(first direction, second direction)
};

/// Planar analogue of intersect_segment_triangle: first segment p0->p1 is the
/// probe, second segment a->b is the curve edge.
template <typename Scalar>
SegmentSegmentHit<Scalar> intersect_segments(const Vector2<Scalar>& p0, const Vector2<Scalar>& p1,
                                             const Vector2<Scalar>& a, const Vector2<Scalar>& b,
                                             Scalar tol = Scalar(kCrossingTolerance)) {
    SegmentSegmentHit<Scalar> hit;
    const Vector2<Scalar> d = p1 - p0;
    const Vector2<Scalar> e = b - a;
    const Scalar de = d.norm() * e.norm();
    if (de == Scalar(0)) return hit;
    const Scalar denom = cross2(d, e);
    const Scalar sine = denom / de;

    if (std::abs(sine) < tol) {
        const Scalar dist = std::abs(cross2<Scalar>(e, p0 - a)) / e.norm();
        const Scalar scale = std::max(d.norm(), e.norm());
        if (dist > tol * scale) return hit;
        Eigen::AlignedBox<Scalar, 2> eb;
        eb.extend(a).extend(b);
        Eigen::AlignedBox<Scalar, 2> sb;
        sb.extend(p0).extend(p1);
        eb.min().array() -= tol * scale;
        eb.max().array() += tol * scale;
        if (eb.intersects(sb)) hit.kind = HitKind::Degenerate;
        return hit;
    }

    const Vector2<Scalar> ap = a - p0;
    const Scalar t = cross2(ap, e) / denom;
    const Scalar s = cross2(ap, d) / denom;
    const Scalar tlen = tol * std::max(Scalar(1), e.norm() / d.norm());
    if (s < -tol || s > Scalar(1) + tol || t < -tlen || t > Scalar(1) + tlen) return hit;

    hit.t = t;
    hit.sign = denom > 0 ? 1 : -1;
    if (s < tol || s > Scalar(1) - tol || t < tlen || t > Scalar(1) - tlen) {
        hit.kind = HitKind::Degenerate;
    } else {
        hit.kind = HitKind::Transverse;
    }
    return hit;
}

/// Segment / axis-aligned box overlap in the plane (touching counts).
template <typename Scalar>
bool segment_box_overlap(const Eigen::AlignedBox<Scalar, 2>& box, const Vector2<Scalar>& a,
                         const Vector2<Scalar>& b) {
    Eigen::AlignedBox<Scalar, 2> sb;
    sb.extend(a).extend(b);
    if (!box.intersects(sb)) return false;
    const Vector2<Scalar> e = b - a;
    const Vector2<Scalar> corners[4] = {box.corner(Eigen::AlignedBox<Scalar, 2>::BottomLeft),
                                        box.corner(Eigen::AlignedBox<Scalar, 2>::BottomRight),
                                        box.corner(Eigen::AlignedBox<Scalar, 2>::TopLeft),
                                        box.corner(Eigen::AlignedBox<Scalar, 2>::TopRight)};
    bool pos = false;
    bool neg = false;
    for (const auto& c : corners) {
        const Scalar s = cross2<Scalar>(e, c - a);
        pos = pos || s >= 0;
        neg = neg || s <= 0;
    }
    return pos && neg;
}

/// Signed turning angle from direction `a` to direction `b`, in (-pi, pi].
template <typename Scalar>
Scalar turning_angle(const Vector2<Scalar>& a, const Vector2<Scalar>& b) {
    return std::atan2(cross2(a, b), a.dot(b));
}

}  // namespace cabledeg
