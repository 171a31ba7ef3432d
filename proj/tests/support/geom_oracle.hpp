#pragma once

// Independent geometric helpers for oracle-style checks: exact point-to-face
// distances (used to brute-force d_i), plus builders for test polytopes.
// Deliberately written against the public Polytope interface only, so they do
// not share code with the library internals they are checking.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "spectral/geometry.hpp"

namespace testutil {

using Vec3 = std::array<double, 3>;

inline Vec3 vsub(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 vadd(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 vmul(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
inline double vdot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline Vec3 vcross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double vnorm(const Vec3& a) { return std::sqrt(vdot(a, a)); }

inline double point_to_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
    Vec3 ab = vsub(b, a);
    double den = vdot(ab, ab);
    double t = den > 0 ? std::clamp(vdot(vsub(p, a), ab) / den, 0.0, 1.0) : 0.0;
    return vnorm(vsub(p, vadd(a, vmul(ab, t))));
}

// Exact distance from a point to a planar simple polygon (any simple ring):
// plane distance when the projection falls inside (even-odd test in-plane),
// otherwise the closest ring edge.
inline double point_to_planar_polygon(const Vec3& p, const std::vector<Vec3>& ring) {
    if (ring.size() == 2) return point_to_segment(p, ring[0], ring[1]);
    Vec3 nsum{0, 0, 0};
    for (size_t i = 0; i < ring.size(); ++i)
        nsum = vadd(nsum, vcross(ring[i], ring[(i + 1) % ring.size()]));
    double nn = vnorm(nsum);
    double edge_best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < ring.size(); ++i)
        edge_best = std::min(edge_best, point_to_segment(p, ring[i], ring[(i + 1) % ring.size()]));
    if (nn <= 0) return edge_best;
    Vec3 n = vmul(nsum, 1.0 / nn);
    double d = vdot(vsub(p, ring[0]), n);
    Vec3 proj = vsub(p, vmul(n, d));
    // 2D even-odd in an in-plane frame.
    Vec3 u = vsub(ring[1], ring[0]);
    u = vmul(u, 1.0 / vnorm(u));
    Vec3 w = vcross(n, u);
    auto to2 = [&](const Vec3& q) {
        Vec3 r = vsub(q, ring[0]);
        return std::array<double, 2>{vdot(r, u), vdot(r, w)};
    };
    auto pp = to2(proj);
    bool inside = false;
    for (size_t i = 0; i < ring.size(); ++i) {
        auto a = to2(ring[i]);
        auto b = to2(ring[(i + 1) % ring.size()]);
        if ((a[1] <= pp[1]) == (b[1] <= pp[1])) continue;
        double xint = a[0] + (pp[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
        if (pp[0] < xint) inside = !inside;
    }
    return inside ? std::abs(d) : edge_best;
}

// The ambient-space vertex ring of face fi of a general polytope.
inline std::vector<Vec3> face_ring(const spectral::Polytope& P, size_t fi) {
    std::vector<Vec3> ring;
    for (int idx : P.faces[fi]) {
        const auto& v = P.vertices[static_cast<size_t>(idx)];
        ring.push_back({v[0], v[1], P.dimension == 3 ? v[2] : 0.0});
    }
    return ring;
}

// Face rings of a 2D/3D box in the same order face_decomposition emits them
// (axis 0 low, axis 0 high, axis 1 low, ...).
inline std::vector<std::vector<Vec3>> box_face_rings(const spectral::Polytope& P) {
    std::vector<std::vector<Vec3>> rings;
    const int n = P.dimension;
    for (int axis = 0; axis < n; ++axis) {
        for (int side = 0; side < 2; ++side) {
            double wall = side == 0 ? 0.0 : P.lengths[static_cast<size_t>(axis)];
            std::vector<Vec3> ring;
            if (n == 2) {
                int o = 1 - axis;
                Vec3 p0{0, 0, 0}, p1{0, 0, 0};
                p0[static_cast<size_t>(axis)] = p1[static_cast<size_t>(axis)] = wall;
                p1[static_cast<size_t>(o)] = P.lengths[static_cast<size_t>(o)];
                ring = {p0, p1};
            } else {
                int o1 = axis == 0 ? 1 : 0;
                int o2 = axis == 2 ? 1 : 2;
                double L1 = P.lengths[static_cast<size_t>(o1)];
                double L2 = P.lengths[static_cast<size_t>(o2)];
                for (auto [a, b] : {std::pair{0.0, 0.0}, {L1, 0.0}, {L1, L2}, {0.0, L2}}) {
                    Vec3 p{0, 0, 0};
                    p[static_cast<size_t>(axis)] = wall;
                    p[static_cast<size_t>(o1)] = a;
                    p[static_cast<size_t>(o2)] = b;
                    ring.push_back(p);
                }
            }
            rings.push_back(std::move(ring));
        }
    }
    return rings;
}

inline std::vector<std::vector<Vec3>> all_face_rings(const spectral::Polytope& P) {
    if (P.kind == spectral::PolytopeKind::box) return box_face_rings(P);
    std::vector<std::vector<Vec3>> rings;
    for (size_t fi = 0; fi < P.faces.size(); ++fi) rings.push_back(face_ring(P, fi));
    return rings;
}

// Brute-force d_i: sample `samples` points along the boundary of every patch
// of face fi (inclusive of endpoints/corners) and take the exact minimum
// distance to every other face.
inline double brute_face_distance(const spectral::Polytope& P,
                                  const spectral::FaceDecomposition& D, size_t fi,
                                  int samples) {
    auto rings = all_face_rings(P);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& patch : D.faces[fi].patches) {
        const auto& ring = patch.ring;
        if (ring.empty()) continue;
        size_t edges = ring.size() == 2 ? 1 : ring.size();
        int per_edge = std::max(2, static_cast<int>(samples / std::max<size_t>(1, edges)));
        for (size_t e = 0; e < edges; ++e) {
            Vec3 a = ring[e];
            Vec3 b = ring[(e + 1) % ring.size()];
            for (int s = 0; s < per_edge; ++s) {
                double t = static_cast<double>(s) / (per_edge - 1);
                Vec3 p = vadd(a, vmul(vsub(b, a), t));
                for (size_t fj = 0; fj < rings.size(); ++fj) {
                    if (fj == fi) continue;
                    best = std::min(best, point_to_planar_polygon(p, rings[fj]));
                }
            }
        }
    }
    return best;
}

// --------------------------------------------------------------- builders

inline spectral::Polytope make_tetrahedron(const std::array<Vec3, 4>& v,
                                           std::string id = "tetra") {
    Vec3 d1 = vsub(v[1], v[0]), d2 = vsub(v[2], v[0]), d3 = vsub(v[3], v[0]);
    bool positive = vdot(d1, vcross(d2, d3)) > 0;
    spectral::Polytope P;
    P.dimension = 3;
    P.kind = spectral::PolytopeKind::general;
    P.id = std::move(id);
    for (const auto& p : v) P.vertices.push_back({p[0], p[1], p[2]});
    if (positive)
        P.faces = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
    else
        P.faces = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {2, 1, 3}};
    spectral::validate(P);
    return P;
}

// Right prism over a CCW simple polygon ring, extruded from z=0 to z=height.
inline spectral::Polytope make_prism(const std::vector<std::array<double, 2>>& ring,
                                     double height, std::string id = "prism") {
    spectral::Polytope P;
    P.dimension = 3;
    P.kind = spectral::PolytopeKind::general;
    P.id = std::move(id);
    const int m = static_cast<int>(ring.size());
    for (const auto& v : ring) P.vertices.push_back({v[0], v[1], 0.0});
    for (const auto& v : ring) P.vertices.push_back({v[0], v[1], height});
    std::vector<int> bottom, top;
    for (int i = m - 1; i >= 0; --i) bottom.push_back(i); // CW from above -> outward -z
    for (int i = 0; i < m; ++i) top.push_back(m + i);     // CCW from above -> outward +z
    P.faces.push_back(bottom);
    P.faces.push_back(top);
    for (int i = 0; i < m; ++i) {
        int j = (i + 1) % m;
        P.faces.push_back({i, j, m + j, m + i});
    }
    spectral::validate(P);
    return P;
}

inline spectral::Polytope scaled(const spectral::Polytope& P, double t) {
    spectral::Polytope Q = P;
    for (auto& v : Q.vertices)
        for (auto& c : v) c *= t;
    for (auto& L : Q.lengths) L *= t;
    return Q;
}

inline spectral::Polytope translated(const spectral::Polytope& P,
                                     const std::vector<double>& shift) {
    spectral::Polytope Q = P;
    for (auto& v : Q.vertices)
        for (size_t i = 0; i < v.size(); ++i) v[i] += shift[i];
    return Q; // box kind has no vertices; translation is a no-op there
}

inline std::vector<std::array<double, 2>> lshape_ring() {
    return {{{0, 0}}, {{2, 0}}, {{2, 1}}, {{1, 1}}, {{1, 2}}, {{0, 2}}};
}

inline std::vector<std::array<double, 2>> equilateral_ring(double side) {
    return {{{0, 0}}, {{side, 0}}, {{side / 2, side * 0.86602540378443865}}};
}

} // namespace testutil
