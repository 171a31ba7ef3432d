#include "spectral/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace spectral {

namespace {

constexpr double kCoordTol = 1e-12; // absolute predicate tolerance on coordinates

struct V2 {
    double x = 0, y = 0;
};
struct V3 {
    double x = 0, y = 0, z = 0;
};

V2 sub(V2 a, V2 b) { return {a.x - b.x, a.y - b.y}; }
V2 add(V2 a, V2 b) { return {a.x + b.x, a.y + b.y}; }
V2 mul(V2 a, double s) { return {a.x * s, a.y * s}; }
double dot(V2 a, V2 b) { return a.x * b.x + a.y * b.y; }
double cross(V2 a, V2 b) { return a.x * b.y - a.y * b.x; }
double norm(V2 a) { return std::sqrt(dot(a, a)); }

V3 sub(V3 a, V3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
V3 add(V3 a, V3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
V3 mul(V3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
double dot(V3 a, V3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
V3 cross(V3 a, V3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(V3 a) { return std::sqrt(dot(a, a)); }

V3 vertex3(const Polytope& P, int i) {
    const auto& v = P.vertices[static_cast<size_t>(i)];
    return {v[0], v[1], P.dimension == 3 ? v[2] : 0.0};
}
V2 vertex2(const Polytope& P, int i) {
    const auto& v = P.vertices[static_cast<size_t>(i)];
    return {v[0], v[1]};
}

// ------------------------------------------------------------------ 2D rings

double ring_area(const std::vector<V2>& r) {
    double s = 0;
    for (size_t i = 0; i < r.size(); ++i) {
        const V2& a = r[i];
        const V2& b = r[(i + 1) % r.size()];
        s += cross(a, b);
    }
    return 0.5 * s;
}

bool ring_convex(const std::vector<V2>& r) {
    const size_t m = r.size();
    for (size_t i = 0; i < m; ++i) {
        V2 e1 = sub(r[(i + 1) % m], r[i]);
        V2 e2 = sub(r[(i + 2) % m], r[(i + 1) % m]);
        if (cross(e1, e2) < -kCoordTol) return false;
    }
    return true;
}

bool point_in_triangle(V2 p, V2 a, V2 b, V2 c, double tol) {
    double d1 = cross(sub(b, a), sub(p, a));
    double d2 = cross(sub(c, b), sub(p, b));
    double d3 = cross(sub(a, c), sub(p, c));
    return d1 >= -tol && d2 >= -tol && d3 >= -tol;
}

// Ear clipping of a simple CCW ring into triangles. O(m^2), m is tiny here.
std::vector<std::array<V2, 3>> ear_clip(std::vector<V2> ring) {
    std::vector<std::array<V2, 3>> tris;
    if (ring.size() < 3) return tris;
    size_t guard = ring.size() * ring.size() + 16;
    while (ring.size() > 3 && guard-- > 0) {
        bool clipped = false;
        const size_t m = ring.size();
        for (size_t i = 0; i < m; ++i) {
            V2 prev = ring[(i + m - 1) % m];
            V2 cur = ring[i];
            V2 next = ring[(i + 1) % m];
            if (cross(sub(cur, prev), sub(next, cur)) <= kCoordTol) continue; // reflex/flat
            bool empty = true;
            for (size_t j = 0; j < m && empty; ++j) {
                if (j == i || j == (i + m - 1) % m || j == (i + 1) % m) continue;
                // Inclusive test: a ring vertex exactly on the candidate ear's
                // boundary must block it (clipping through it would fold the ring).
                if (point_in_triangle(ring[j], prev, cur, next, kCoordTol)) empty = false;
            }
            if (!empty) continue;
            tris.push_back({prev, cur, next});
            ring.erase(ring.begin() + static_cast<long>(i));
            clipped = true;
            break;
        }
        if (!clipped)
            throw InvalidGeometryError("ear clipping failed: ring is not a simple CCW polygon");
    }
    if (ring.size() == 3) tris.push_back({ring[0], ring[1], ring[2]});
    return tris;
}

// Keep the part of a convex polygon with n.x <= c (Sutherland-Hodgman step).
std::vector<V2> clip_halfplane(const std::vector<V2>& poly, V2 n, double c) {
    std::vector<V2> out;
    const size_t m = poly.size();
    for (size_t i = 0; i < m; ++i) {
        V2 a = poly[i];
        V2 b = poly[(i + 1) % m];
        double da = dot(n, a) - c;
        double db = dot(n, b) - c;
        if (da <= 0) out.push_back(a);
        if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
            double t = da / (da - db);
            out.push_back(add(a, mul(sub(b, a), t)));
        }
    }
    return out;
}

// Inward erosion of a convex CCW polygon by delta: clip by every edge's
// inward-offset half-plane.
std::vector<V2> erode_convex(const std::vector<V2>& ring, double delta) {
    std::vector<V2> poly = ring;
    const size_t m = ring.size();
    for (size_t i = 0; i < m && !poly.empty(); ++i) {
        V2 a = ring[i];
        V2 b = ring[(i + 1) % m];
        V2 e = sub(b, a);
        double len = norm(e);
        if (len <= kCoordTol) continue;
        V2 outward{e.y / len, -e.x / len}; // CCW ring: interior on the left
        poly = clip_halfplane(poly, outward, dot(outward, a) - delta);
    }
    if (poly.size() < 3) poly.clear();
    return poly;
}

// Erosion pieces of a simple CCW ring: convex rings erode to one convex piece;
// non-convex rings are triangulated first and each triangle eroded on its own
// (each piece then keeps distance >= delta from the full ring boundary).
std::vector<std::vector<V2>> erode_pieces(const std::vector<V2>& ring, double delta,
                                          bool convex) {
    std::vector<std::vector<V2>> pieces;
    if (convex) {
        auto p = erode_convex(ring, delta);
        if (!p.empty()) pieces.push_back(std::move(p));
        return pieces;
    }
    for (const auto& t : ear_clip(ring)) {
        std::vector<V2> tri{t[0], t[1], t[2]};
        if (ring_area(tri) <= kCoordTol) continue;
        auto p = erode_convex(tri, delta);
        if (!p.empty()) pieces.push_back(std::move(p));
    }
    return pieces;
}

// ----------------------------------------------------------------- distances

double point_seg2(V2 p, V2 a, V2 b) {
    V2 ab = sub(b, a);
    double den = dot(ab, ab);
    double t = den > 0 ? std::clamp(dot(sub(p, a), ab) / den, 0.0, 1.0) : 0.0;
    return norm(sub(p, add(a, mul(ab, t))));
}

double seg_seg2(V2 a0, V2 a1, V2 b0, V2 b1) {
    // Proper intersection means distance zero.
    V2 r = sub(a1, a0), s = sub(b1, b0);
    double rxs = cross(r, s);
    V2 qp = sub(b0, a0);
    if (std::abs(rxs) > kCoordTol) {
        double t = cross(qp, s) / rxs;
        double u = cross(qp, r) / rxs;
        if (t >= 0 && t <= 1 && u >= 0 && u <= 1) return 0.0;
    }
    return std::min(std::min(point_seg2(a0, b0, b1), point_seg2(a1, b0, b1)),
                    std::min(point_seg2(b0, a0, a1), point_seg2(b1, a0, a1)));
}

double point_seg3(V3 p, V3 a, V3 b) {
    V3 ab = sub(b, a);
    double den = dot(ab, ab);
    double t = den > 0 ? std::clamp(dot(sub(p, a), ab) / den, 0.0, 1.0) : 0.0;
    return norm(sub(p, add(a, mul(ab, t))));
}

// Closest distance between two 3D segments (clamped closest-parameter form).
double seg_seg3(V3 p1, V3 q1, V3 p2, V3 q2) {
    V3 d1 = sub(q1, p1), d2 = sub(q2, p2), r = sub(p1, p2);
    double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
    double s = 0, t = 0;
    if (a <= kCoordTol && e <= kCoordTol) return norm(sub(p1, p2));
    if (a <= kCoordTol) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        double c = dot(d1, r);
        if (e <= kCoordTol) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            double b = dot(d1, d2);
            double den = a * e - b * b;
            s = den > kCoordTol ? std::clamp((b * f - c * e) / den, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0) {
                t = 0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1) {
                t = 1;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return norm(sub(add(p1, mul(d1, s)), add(p2, mul(d2, t))));
}

double point_tri3(V3 p, V3 a, V3 b, V3 c) {
    V3 n = cross(sub(b, a), sub(c, a));
    double nn = dot(n, n);
    if (nn > kCoordTol * kCoordTol) {
        double d = dot(sub(p, a), n) / nn;
        V3 proj = sub(p, mul(n, d));
        // Barycentric containment of the projection.
        V3 v0 = sub(b, a), v1 = sub(c, a), v2 = sub(proj, a);
        double d00 = dot(v0, v0), d01 = dot(v0, v1), d11 = dot(v1, v1);
        double d20 = dot(v2, v0), d21 = dot(v2, v1);
        double den = d00 * d11 - d01 * d01;
        if (den > 0) {
            double v = (d11 * d20 - d01 * d21) / den;
            double w = (d00 * d21 - d01 * d20) / den;
            if (v >= 0 && w >= 0 && v + w <= 1) return std::abs(d) * std::sqrt(nn);
        }
    }
    return std::min({point_seg3(p, a, b), point_seg3(p, b, c), point_seg3(p, c, a)});
}

double tri_tri3(const std::array<V3, 3>& t1, const std::array<V3, 3>& t2) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            best = std::min(best, seg_seg3(t1[i], t1[(i + 1) % 3], t2[j], t2[(j + 1) % 3]));
    for (int i = 0; i < 3; ++i) {
        best = std::min(best, point_tri3(t1[i], t2[0], t2[1], t2[2]));
        best = std::min(best, point_tri3(t2[i], t1[0], t1[1], t1[2]));
    }
    return best;
}

// ------------------------------------------------------------- face framing

struct FaceFrame {
    V3 origin, u, v, normal; // orthonormal in-plane basis, normal = outward
    std::vector<V2> ring2;   // CCW in (u,v) coordinates
    double area = 0;
};

FaceFrame face_frame3(const Polytope& P, size_t fi) {
    const auto& f = P.faces[fi];
    if (f.size() < 3)
        throw InvalidGeometryError("face " + std::to_string(fi) + " has fewer than 3 vertices");
    std::vector<V3> ring;
    ring.reserve(f.size());
    for (int idx : f) ring.push_back(vertex3(P, idx));
    V3 nsum{0, 0, 0};
    for (size_t i = 0; i < ring.size(); ++i)
        nsum = add(nsum, cross(ring[i], ring[(i + 1) % ring.size()]));
    double a2 = norm(nsum);
    if (a2 <= kCoordTol)
        throw InvalidGeometryError("face " + std::to_string(fi) + " is degenerate (area 0)");
    FaceFrame fr;
    fr.area = 0.5 * a2;
    fr.normal = mul(nsum, 1.0 / a2);
    fr.origin = ring[0];
    V3 e = sub(ring[1], ring[0]);
    double elen = norm(e);
    if (elen <= kCoordTol)
        throw InvalidGeometryError("face " + std::to_string(fi) + " repeats a vertex");
    fr.u = mul(e, 1.0 / elen);
    fr.v = cross(fr.normal, fr.u);
    double scale = 1.0;
    for (const auto& r : ring)
        scale = std::max({scale, std::abs(r.x), std::abs(r.y), std::abs(r.z)});
    fr.ring2.reserve(ring.size());
    for (const auto& r : ring) {
        V3 d = sub(r, fr.origin);
        if (std::abs(dot(d, fr.normal)) > kCoordTol * scale * 100)
            throw InvalidGeometryError("face " + std::to_string(fi) + " is not planar");
        fr.ring2.push_back({dot(d, fr.u), dot(d, fr.v)});
    }
    return fr;
}

V3 unproject(const FaceFrame& fr, V2 p) {
    return add(fr.origin, add(mul(fr.u, p.x), mul(fr.v, p.y)));
}

std::vector<std::array<V3, 3>> face_triangles(const Polytope& P, size_t fi) {
    FaceFrame fr = face_frame3(P, fi);
    std::vector<std::array<V3, 3>> out;
    auto emit = [&](const std::array<V2, 3>& t) {
        out.push_back({unproject(fr, t[0]), unproject(fr, t[1]), unproject(fr, t[2])});
    };
    if (ring_convex(fr.ring2)) {
        for (size_t i = 1; i + 1 < fr.ring2.size(); ++i)
            emit({fr.ring2[0], fr.ring2[i], fr.ring2[i + 1]});
    } else {
        for (const auto& t : ear_clip(fr.ring2)) emit(t);
    }
    return out;
}

// ---------------------------------------------------------------- validation

void validate_general(const Polytope& P) {
    if (P.dimension != 2 && P.dimension != 3)
        throw InvalidGeometryError("general polytopes must be 2D or 3D");
    const int nv = static_cast<int>(P.vertices.size());
    if (nv < P.dimension + 1) throw InvalidGeometryError("not enough vertices");
    for (const auto& v : P.vertices)
        if (static_cast<int>(v.size()) != P.dimension)
            throw InvalidGeometryError("vertex dimensionality mismatch");
    if (P.faces.empty()) throw InvalidGeometryError("no faces");
    for (const auto& f : P.faces)
        for (int idx : f)
            if (idx < 0 || idx >= nv) throw InvalidGeometryError("face vertex index out of range");

    if (P.dimension == 2) {
        // Edges must chain into closed loops: every vertex used appears exactly
        // once as a tail and once as a head.
        std::vector<int> head(P.vertices.size(), 0), tail(P.vertices.size(), 0);
        for (size_t fi = 0; fi < P.faces.size(); ++fi) {
            const auto& f = P.faces[fi];
            if (f.size() != 2) throw InvalidGeometryError("2D faces must be vertex pairs");
            if (norm(sub(vertex2(P, f[1]), vertex2(P, f[0]))) <= kCoordTol)
                throw InvalidGeometryError("face " + std::to_string(fi) +
                                           " is degenerate (area 0)");
            tail[static_cast<size_t>(f[0])]++;
            head[static_cast<size_t>(f[1])]++;
        }
        for (size_t i = 0; i < P.vertices.size(); ++i) {
            bool used = head[i] + tail[i] > 0;
            if (used && (head[i] != 1 || tail[i] != 1))
                throw InvalidGeometryError("boundary is not watertight at vertex " +
                                           std::to_string(i));
        }
    } else {
        // Each undirected edge shared by exactly two faces, in opposite directions.
        std::map<std::pair<int, int>, int> directed;
        for (size_t fi = 0; fi < P.faces.size(); ++fi) {
            face_frame3(P, fi); // throws on non-planar / degenerate
            const auto& f = P.faces[fi];
            for (size_t i = 0; i < f.size(); ++i) {
                int a = f[i], b = f[(i + 1) % f.size()];
                if (a == b) throw InvalidGeometryError("face repeats a vertex");
                directed[{a, b}]++;
            }
        }
        for (const auto& [e, c] : directed) {
            auto rev = directed.find({e.second, e.first});
            if (c != 1 || rev == directed.end() || rev->second != 1)
                throw InvalidGeometryError("boundary is not watertight (edge " +
                                           std::to_string(e.first) + "-" +
                                           std::to_string(e.second) + ")");
        }
    }
}

// ------------------------------------------------------ signed decomposition

struct Moments {
    double volume = 0;
    std::vector<double> centroid;
    double second_origin = 0; // integral of |x|^2
};

Moments signed_moments(const Polytope& P) {
    Moments M;
    if (P.kind == PolytopeKind::box) {
        M.volume = 1;
        for (double L : P.lengths) M.volume *= L;
        M.centroid.resize(P.lengths.size());
        double s = 0;
        for (size_t i = 0; i < P.lengths.size(); ++i) {
            M.centroid[i] = P.lengths[i] / 2;
            // integral of x_i^2 over the box = V * L_i^2 / 3
            s += M.volume * P.lengths[i] * P.lengths[i] / 3.0;
        }
        M.second_origin = s;
        return M;
    }
    if (P.dimension == 2) {
        double V = 0, cx = 0, cy = 0, I = 0;
        for (const auto& f : P.faces) {
            V2 a = vertex2(P, f[0]), b = vertex2(P, f[1]);
            double c = cross(a, b);
            V += c / 2;
            cx += c * (a.x + b.x) / 6;
            cy += c * (a.y + b.y) / 6;
            I += c * (dot(a, a) + dot(b, b) + dot(a, b)) / 12;
        }
        M.volume = V;
        M.centroid = {V != 0 ? cx / V : 0, V != 0 ? cy / V : 0};
        M.second_origin = I;
    } else {
        double V = 0, I = 0;
        V3 c{0, 0, 0};
        for (size_t fi = 0; fi < P.faces.size(); ++fi) {
            const auto& f = P.faces[fi];
            V3 r0 = vertex3(P, f[0]);
            for (size_t i = 1; i + 1 < f.size(); ++i) {
                V3 a = r0, b = vertex3(P, f[i]), d = vertex3(P, f[i + 1]);
                double vt = dot(a, cross(b, d)) / 6.0;
                V += vt;
                c = add(c, mul(add(add(a, b), d), vt / 4.0));
                I += vt *
                     ((dot(a, a) + dot(b, b) + dot(d, d)) + (dot(a, b) + dot(a, d) + dot(b, d))) /
                     10.0;
            }
        }
        M.volume = V;
        M.centroid = {V != 0 ? c.x / V : 0, V != 0 ? c.y / V : 0, V != 0 ? c.z / V : 0};
        M.second_origin = I;
    }
    return M;
}

void validate_box(const Polytope& P) {
    if (P.dimension < 2) throw InvalidGeometryError("box dimension must be >= 2");
    if (static_cast<int>(P.lengths.size()) != P.dimension)
        throw InvalidGeometryError("box needs one side length per dimension");
    for (double L : P.lengths)
        if (!(L > 0)) throw InvalidGeometryError("box side lengths must be positive");
}

} // namespace

// ------------------------------------------------------------- constructors

Polytope make_box(std::vector<double> lengths, std::string id, bool tiling) {
    Polytope P;
    P.dimension = static_cast<int>(lengths.size());
    P.kind = PolytopeKind::box;
    P.lengths = std::move(lengths);
    P.id = std::move(id);
    P.tiling = tiling;
    validate(P);
    return P;
}

Polytope make_polygon(const std::vector<std::array<double, 2>>& ring, std::string id,
                      bool tiling) {
    Polytope P;
    P.dimension = 2;
    P.kind = PolytopeKind::general;
    P.id = std::move(id);
    P.tiling = tiling;
    const int m = static_cast<int>(ring.size());
    for (const auto& v : ring) P.vertices.push_back({v[0], v[1]});
    for (int i = 0; i < m; ++i) P.faces.push_back({i, (i + 1) % m});
    validate(P);
    return P;
}

void validate(const Polytope& P) {
    if (P.kind == PolytopeKind::box) {
        validate_box(P);
        return;
    }
    validate_general(P);
    double V = signed_moments(P).volume;
    if (V <= kCoordTol)
        throw InvalidGeometryError(V < -kCoordTol
                                       ? "negative volume: faces are oriented inward"
                                       : "degenerate polytope (zero volume)");
}

// ------------------------------------------------------------------ measures

double volume(const Polytope& P) {
    double V = signed_moments(P).volume;
    if (V <= kCoordTol) throw InvalidGeometryError("degenerate polytope (zero volume)");
    return V;
}

std::vector<double> face_areas(const Polytope& P) {
    std::vector<double> areas;
    if (P.kind == PolytopeKind::box) {
        // Face order: (axis 0 low, axis 0 high, axis 1 low, ...) collapsed to
        // one entry per wall.
        double V = 1;
        for (double L : P.lengths) V *= L;
        for (double L : P.lengths) {
            areas.push_back(V / L);
            areas.push_back(V / L);
        }
        return areas;
    }
    if (P.dimension == 2) {
        for (const auto& f : P.faces)
            areas.push_back(norm(sub(vertex2(P, f[1]), vertex2(P, f[0]))));
    } else {
        for (size_t fi = 0; fi < P.faces.size(); ++fi) areas.push_back(face_frame3(P, fi).area);
    }
    return areas;
}

double surface_area(const Polytope& P) {
    double s = 0;
    for (double a : face_areas(P)) s += a;
    return s;
}

std::vector<double> centroid(const Polytope& P) { return signed_moments(P).centroid; }

double moment_of_inertia(const Polytope& P) {
    Moments M = signed_moments(P);
    double c2 = 0;
    for (double c : M.centroid) c2 += c * c;
    return M.second_origin - M.volume * c2;
}

double unit_ball_volume(int n) {
    if (n < 1) throw std::domain_error("unit_ball_volume requires n >= 1");
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

// --------------------------------------------------------- face decomposition

double FaceDecomposition::min_distance() const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& f : faces) d = std::min(d, f.distance);
    return d;
}

double FaceDecomposition::min_face_area() const {
    double a = std::numeric_limits<double>::infinity();
    for (const auto& f : faces) a = std::min(a, f.face_area);
    return a;
}

namespace {

// Largest delta in [0, hi] with area(delta) >= target, by 64-step bisection.
// area() must be non-increasing, area(0) >= target and area(hi) < target.
template <class AreaFn>
double bisect_margin(AreaFn area, double hi, double target) {
    double lo = 0.0;
    if (area(hi) >= target) return hi;
    for (int it = 0; it < 64; ++it) {
        double mid = 0.5 * (lo + hi);
        (area(mid) >= target ? lo : hi) = mid;
    }
    return lo;
}

FaceDecomposition decompose_box(const Polytope& P, double fraction) {
    FaceDecomposition D;
    const int n = P.dimension;
    for (int axis = 0; axis < n; ++axis) {
        std::vector<double> sides; // the face's own (n-1) side lengths
        for (int j = 0; j < n; ++j)
            if (j != axis) sides.push_back(P.lengths[static_cast<size_t>(j)]);
        double A = 1;
        for (double s : sides) A *= s;
        double min_side = *std::min_element(sides.begin(), sides.end());
        auto eroded_area = [&](double d) {
            double a = 1;
            for (double s : sides) a *= std::max(0.0, s - 2 * d);
            return a;
        };
        double delta = bisect_margin(eroded_area, min_side / 2, fraction * A);
        if (!(delta > kCoordTol))
            throw DecompositionError("face of axis " + std::to_string(axis) +
                                     " cannot support a positive erosion margin");
        double d_i = std::min(delta, P.lengths[static_cast<size_t>(axis)]);
        for (int side = 0; side < 2; ++side) {
            FaceDecomposition::Face F;
            F.face_area = A;
            F.erosion_margin = delta;
            F.distance = d_i;
            FacePatch patch;
            patch.area = eroded_area(delta);
            if (n <= 3) {
                // Materialize the eroded rectangle/segment on the wall.
                double wall = side == 0 ? 0.0 : P.lengths[static_cast<size_t>(axis)];
                std::vector<std::array<double, 3>> ring;
                if (n == 2) {
                    int other = 1 - axis;
                    std::array<double, 3> p0{{0, 0, 0}}, p1{{0, 0, 0}};
                    p0[static_cast<size_t>(axis)] = wall;
                    p1[static_cast<size_t>(axis)] = wall;
                    p0[static_cast<size_t>(other)] = delta;
                    p1[static_cast<size_t>(other)] = P.lengths[static_cast<size_t>(other)] - delta;
                    ring = {p0, p1};
                } else {
                    int o1 = axis == 0 ? 1 : 0;
                    int o2 = axis == 2 ? 1 : 2;
                    double a0 = delta, a1 = P.lengths[static_cast<size_t>(o1)] - delta;
                    double b0 = delta, b1 = P.lengths[static_cast<size_t>(o2)] - delta;
                    for (auto [pa, pb] : {std::pair{a0, b0}, {a1, b0}, {a1, b1}, {a0, b1}}) {
                        std::array<double, 3> p{{0, 0, 0}};
                        p[static_cast<size_t>(axis)] = wall;
                        p[static_cast<size_t>(o1)] = pa;
                        p[static_cast<size_t>(o2)] = pb;
                        ring.push_back(p);
                    }
                }
                patch.ring = std::move(ring);
            }
            F.patches.push_back(patch);
            F.patch_area_total = patch.area;
            D.faces.push_back(std::move(F));
        }
    }
    return D;
}

FaceDecomposition decompose_2d(const Polytope& P, double fraction) {
    FaceDecomposition D;
    const size_t nf = P.faces.size();
    for (size_t fi = 0; fi < nf; ++fi) {
        V2 a = vertex2(P, P.faces[fi][0]);
        V2 b = vertex2(P, P.faces[fi][1]);
        double len = norm(sub(b, a));
        auto eroded_len = [&](double d) { return std::max(0.0, len - 2 * d); };
        double delta = bisect_margin(eroded_len, len / 2, fraction * len);
        if (!(delta > kCoordTol))
            throw DecompositionError("face " + std::to_string(fi) +
                                     " cannot support a positive erosion margin");
        V2 t = mul(sub(b, a), 1.0 / len);
        V2 p0 = add(a, mul(t, delta));
        V2 p1 = sub(b, mul(t, delta));
        double d = std::numeric_limits<double>::infinity();
        for (size_t fj = 0; fj < nf; ++fj) {
            if (fj == fi) continue;
            d = std::min(d, seg_seg2(p0, p1, vertex2(P, P.faces[fj][0]),
                                     vertex2(P, P.faces[fj][1])));
        }
        if (!(d > kCoordTol))
            throw DecompositionError("face " + std::to_string(fi) +
                                     " patch touches the rest of the boundary");
        FaceDecomposition::Face F;
        F.face_area = len;
        F.erosion_margin = delta;
        F.distance = d;
        FacePatch patch;
        patch.ring = {{{p0.x, p0.y, 0}}, {{p1.x, p1.y, 0}}};
        patch.area = eroded_len(delta);
        F.patch_area_total = patch.area;
        F.patches.push_back(std::move(patch));
        D.faces.push_back(std::move(F));
    }
    return D;
}

FaceDecomposition decompose_3d(const Polytope& P, double fraction) {
    FaceDecomposition D;
    const size_t nf = P.faces.size();
    std::vector<std::vector<std::array<V3, 3>>> boundary_tris(nf);
    for (size_t fi = 0; fi < nf; ++fi) boundary_tris[fi] = face_triangles(P, fi);

    for (size_t fi = 0; fi < nf; ++fi) {
        FaceFrame fr = face_frame3(P, fi);
        bool convex = ring_convex(fr.ring2);
        double diameter = 0;
        for (const auto& p : fr.ring2)
            for (const auto& q : fr.ring2) diameter = std::max(diameter, norm(sub(p, q)));
        auto eroded_area = [&](double d) {
            double a = 0;
            for (const auto& piece : erode_pieces(fr.ring2, d, convex)) a += ring_area(piece);
            return a;
        };
        double delta = bisect_margin(eroded_area, diameter, fraction * fr.area);
        if (!(delta > kCoordTol))
            throw DecompositionError("face " + std::to_string(fi) +
                                     " cannot support a positive erosion margin");
        auto pieces = erode_pieces(fr.ring2, delta, convex);
        FaceDecomposition::Face F;
        F.face_area = fr.area;
        F.erosion_margin = delta;
        double d = std::numeric_limits<double>::infinity();
        for (const auto& piece : pieces) {
            FacePatch patch;
            patch.area = ring_area(piece);
            if (patch.area <= kCoordTol) continue;
            for (const auto& p : piece) {
                V3 q = unproject(fr, p);
                patch.ring.push_back({{q.x, q.y, q.z}});
            }
            // Exact patch -> other-face distance over triangulated pieces.
            std::vector<std::array<V3, 3>> ptris;
            for (size_t i = 1; i + 1 < piece.size(); ++i)
                ptris.push_back({unproject(fr, piece[0]), unproject(fr, piece[i]),
                                 unproject(fr, piece[i + 1])});
            for (size_t fj = 0; fj < nf; ++fj) {
                if (fj == fi) continue;
                for (const auto& t1 : ptris)
                    for (const auto& t2 : boundary_tris[fj]) d = std::min(d, tri_tri3(t1, t2));
            }
            F.patch_area_total += patch.area;
            F.patches.push_back(std::move(patch));
        }
        if (!(d > kCoordTol))
            throw DecompositionError("face " + std::to_string(fi) +
                                     " patch touches the rest of the boundary");
        F.distance = d;
        D.faces.push_back(std::move(F));
    }
    return D;
}

} // namespace

FaceDecomposition face_decomposition(const Polytope& P, double fraction) {
    if (!(fraction > 0 && fraction < 1))
        throw DecompositionError("area fraction must lie strictly between 0 and 1");
    validate(P);
    if (P.kind == PolytopeKind::box) return decompose_box(P, fraction);
    return P.dimension == 2 ? decompose_2d(P, fraction) : decompose_3d(P, fraction);
}

// ------------------------------------------------------------ point location

PointLocator::PointLocator(const Polytope& P) : n_(P.dimension) {
    validate(P);
    if (P.kind == PolytopeKind::box) {
        is_box_ = true;
        lengths_ = P.lengths;
        for (int i = 0; i < std::min(n_, 3); ++i)
            bbox_max_[static_cast<size_t>(i)] = P.lengths[static_cast<size_t>(i)];
        return;
    }
    if (n_ == 2) {
        for (const auto& f : P.faces) {
            V2 a = vertex2(P, f[0]), b = vertex2(P, f[1]);
            edges_.push_back({a.x, a.y, b.x, b.y});
        }
    } else {
        for (size_t fi = 0; fi < P.faces.size(); ++fi)
            for (const auto& t : face_triangles(P, fi))
                tris_.push_back({t[0].x, t[0].y, t[0].z, t[1].x, t[1].y, t[1].z, t[2].x, t[2].y,
                                 t[2].z});
    }
    bbox_min_ = {std::numeric_limits<double>::infinity(),
                 std::numeric_limits<double>::infinity(),
                 std::numeric_limits<double>::infinity()};
    bbox_max_ = {-bbox_min_[0], -bbox_min_[1], -bbox_min_[2]};
    for (const auto& v : P.vertices)
        for (int i = 0; i < n_; ++i) {
            bbox_min_[static_cast<size_t>(i)] =
                std::min(bbox_min_[static_cast<size_t>(i)], v[static_cast<size_t>(i)]);
            bbox_max_[static_cast<size_t>(i)] =
                std::max(bbox_max_[static_cast<size_t>(i)], v[static_cast<size_t>(i)]);
        }
    if (n_ == 2) bbox_min_[2] = bbox_max_[2] = 0;
}

bool PointLocator::contains(const double* x) const {
    if (is_box_) {
        for (int i = 0; i < n_; ++i)
            if (x[i] <= kCoordTol || x[i] >= lengths_[static_cast<size_t>(i)] - kCoordTol)
                return false;
        return true;
    }
    if (n_ == 2) {
        V2 p{x[0], x[1]};
        for (const auto& e : edges_)
            if (point_seg2(p, {e[0], e[1]}, {e[2], e[3]}) <= kCoordTol) return false;
        bool inside = false;
        for (const auto& e : edges_) {
            double y0 = e[1], y1 = e[3];
            if ((y0 <= p.y) == (y1 <= p.y)) continue;
            double xint = e[0] + (p.y - y0) * (e[2] - e[0]) / (y1 - y0);
            if (p.x < xint) inside = !inside;
        }
        return inside;
    }
    V3 p{x[0], x[1], x[2]};
    for (const auto& t : tris_)
        if (point_tri3(p, {t[0], t[1], t[2]}, {t[3], t[4], t[5]}, {t[6], t[7], t[8]}) <= kCoordTol)
            return false;
    // Even-odd ray casting; retry with a rotated direction on any marginal hit.
    static const std::array<V3, 6> dirs = {{{0.5377397762, 0.7123889156, 0.4510327340},
                                            {0.8121008374, 0.2104077812, 0.5442045996},
                                            {0.1699434407, 0.9093129318, 0.3797182044},
                                            {0.6312158378, 0.4413572100, 0.6378813030},
                                            {0.2561330533, 0.6487806366, 0.7165838391},
                                            {0.9308354902, 0.3200151896, 0.1754543441}}};
    for (const auto& dir : dirs) {
        int crossings = 0;
        bool marginal = false;
        for (const auto& t : tris_) {
            V3 a{t[0], t[1], t[2]}, b{t[3], t[4], t[5]}, c{t[6], t[7], t[8]};
            V3 e1 = sub(b, a), e2 = sub(c, a);
            V3 pv = cross(dir, e2);
            double det = dot(e1, pv);
            if (std::abs(det) < 1e-14) continue;
            V3 tv = sub(p, a);
            double u = dot(tv, pv) / det;
            V3 qv = cross(tv, e1);
            double v = dot(dir, qv) / det;
            double tt = dot(e2, qv) / det;
            if (tt <= 1e-14) continue;
            if (u < -1e-10 || v < -1e-10 || u + v > 1 + 1e-10) continue;
            if (u < 1e-10 || v < 1e-10 || u + v > 1 - 1e-10) {
                marginal = true;
                break;
            }
            ++crossings;
        }
        if (!marginal) return crossings % 2 == 1;
    }
    throw ConsistencyError("point classification failed for every ray direction");
}

double PointLocator::boundary_hit_axis(const double* x, int axis, int sign, double tmax) const {
    const double miss = tmax + 1;
    double best = miss;
    const double hi = tmax * (1 + 1e-6);
    if (is_box_) {
        double t = sign > 0 ? lengths_[static_cast<size_t>(axis)] - x[axis] : x[axis];
        return (t > 0 && t <= hi) ? std::min(t, tmax) : miss;
    }
    if (n_ == 2) {
        V2 p{x[0], x[1]};
        int other = 1 - axis;
        for (const auto& e : edges_) {
            double a[2] = {e[0], e[1]}, b[2] = {e[2], e[3]};
            double den = b[other] - a[other];
            if (std::abs(den) <= kCoordTol) continue; // parallel to the ray
            double s = (((other == 0) ? p.x : p.y) - a[other]) / den;
            if (s < -kCoordTol || s > 1 + kCoordTol) continue;
            double hitc = a[axis] + s * (b[axis] - a[axis]);
            double t = (hitc - x[axis]) * sign;
            if (t > kCoordTol && t <= hi) best = std::min(best, t);
        }
        return best == miss ? miss : std::min(best, tmax);
    }
    V3 p{x[0], x[1], x[2]};
    for (const auto& t : tris_) {
        V3 a{t[0], t[1], t[2]}, b{t[3], t[4], t[5]}, c{t[6], t[7], t[8]};
        V3 n = cross(sub(b, a), sub(c, a));
        double ncomp = (axis == 0 ? n.x : axis == 1 ? n.y : n.z) * sign;
        if (std::abs(ncomp) <= kCoordTol) continue;
        double tt = dot(n, sub(a, p)) / ncomp;
        if (tt <= kCoordTol || tt > hi) continue;
        V3 hit = p;
        (axis == 0 ? hit.x : axis == 1 ? hit.y : hit.z) += sign * tt;
        if (point_tri3(hit, a, b, c) <= 1e-9) best = std::min(best, tt);
    }
    return best == miss ? miss : std::min(best, tmax);
}

bool contains(const Polytope& P, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != P.dimension)
        throw InvalidGeometryError("query point dimensionality mismatch");
    return PointLocator(P).contains(x.data());
}

// -------------------------------------------------------------- JSON loading

Polytope parse_polytope(const std::string& json_text, const std::string& id) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("domain file is not valid JSON: " + std::string(e.what()));
    }
    Polytope P;
    P.id = id;
    try {
        P.dimension = j.at("dimension").get<int>();
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "box")
            P.kind = PolytopeKind::box;
        else if (kind == "general")
            P.kind = PolytopeKind::general;
        else
            throw ConfigError("unknown polytope kind '" + kind + "'");
        bool has_lengths = j.contains("lengths");
        bool has_mesh = j.contains("vertices") || j.contains("faces");
        if (P.kind == PolytopeKind::box) {
            if (!has_lengths || has_mesh)
                throw ConfigError("box domains carry 'lengths' and no vertices/faces");
            P.lengths = j.at("lengths").get<std::vector<double>>();
        } else {
            if (has_lengths || !j.contains("vertices") || !j.contains("faces"))
                throw ConfigError("general domains carry 'vertices' and 'faces' only");
            P.vertices = j.at("vertices").get<std::vector<std::vector<double>>>();
            P.faces = j.at("faces").get<std::vector<std::vector<int>>>();
        }
        P.tiling = j.value("tiling", false);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("domain file is malformed: " + std::string(e.what()));
    }
    validate(P);
    return P;
}

Polytope load_polytope(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open domain file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_polytope(ss.str(), std::filesystem::path(path).stem().string());
}

} // namespace spectral
