#pragma once

#include <array>
#include <string>
#include <vector>

#include "spectral/errors.hpp"

namespace spectral {

enum class PolytopeKind { general, box };

// Vertex/face representation of an n-dimensional polytope. 2D faces are edges
// (index pairs), 3D faces are planar polygons given as ordered vertex-index
// cycles with outward orientation. Axis-aligned boxes carry side lengths
// instead of explicit faces and work in any dimension n >= 2.
struct Polytope {
    int dimension = 0;
    PolytopeKind kind = PolytopeKind::general;
    std::vector<std::vector<double>> vertices; // general only
    std::vector<std::vector<int>> faces;       // general only
    std::vector<double> lengths;               // box only
    std::string id;                            // domain identifier (file stem)
    bool tiling = false;                       // congruent copies tile R^n
};

Polytope make_box(std::vector<double> lengths, std::string id = "box",
                  bool tiling = true);
// Simple polygon from a counter-clockwise vertex ring; edges are consecutive pairs.
Polytope make_polygon(const std::vector<std::array<double, 2>>& ring,
                      std::string id = "polygon", bool tiling = false);

// Parse the JSON domain format:
//   {"dimension": n, "kind": "general"|"box", "vertices": [[..],..],
//    "faces": [[i,j,..],..], "lengths": [..], "tiling": bool}
// Exactly one of vertices+faces or lengths must be present, matching kind.
// "tiling" is optional (default false). The id is the file stem.
Polytope load_polytope(const std::string& path);
Polytope parse_polytope(const std::string& json_text, const std::string& id);

// Throws InvalidGeometryError unless every face is planar and non-degenerate,
// the boundary is watertight (each ridge shared by exactly two faces), and the
// signed volume is strictly positive (outward orientation).
void validate(const Polytope& P);

double volume(const Polytope& P);
double surface_area(const Polytope& P);
std::vector<double> face_areas(const Polytope& P);
std::vector<double> centroid(const Polytope& P);
// Minimal second moment:  integral of |x - c|^2 over P, c the centroid.
double moment_of_inertia(const Polytope& P);
// pi^{n/2} / Gamma(n/2 + 1); throws std::domain_error for n < 1.
double unit_ball_volume(int n);

// One convex piece of an eroded face, with its ambient-space vertex ring
// (2 points for a 2D edge patch; empty for box faces with n > 3 where only
// the measure is representable) and its (n-1)-dimensional measure.
struct FacePatch {
    std::vector<std::array<double, 3>> ring;
    double area = 0.0;
};

// Per face: convex patches strictly inside the face, covering at least the
// requested area fraction, together with the erosion margin delta and the
// exact distance d from the patch union to the rest of the boundary.
struct FaceDecomposition {
    struct Face {
        double face_area = 0.0;
        std::vector<FacePatch> patches;
        double patch_area_total = 0.0;
        double distance = 0.0;        // d_i > 0
        double erosion_margin = 0.0;  // delta_i
    };
    std::vector<Face> faces;

    double min_distance() const;
    double min_face_area() const;
};

// Erode every face inward by the largest margin delta_i keeping the eroded
// area >= fraction * A_i (64-step bisection on delta), split non-convex
// leftovers into convex pieces, and measure each d_i exactly.
// Throws DecompositionError when a face cannot support a positive margin.
FaceDecomposition face_decomposition(const Polytope& P, double fraction = 1.0 / 3.0);

// Open-interior membership; boundary points (within 1e-12) classify exterior.
bool contains(const Polytope& P, const std::vector<double>& x);

// Cached acceleration structure for repeated point queries against one
// polytope (grid masking, boundary arm lengths for embedded-boundary stencils).
class PointLocator {
  public:
    explicit PointLocator(const Polytope& P);

    int dimension() const { return n_; }
    bool contains(const double* x) const;
    // First boundary crossing along sign*e_axis within (0, tmax]; returns
    // tmax + 1 when that open segment never meets the boundary.
    double boundary_hit_axis(const double* x, int axis, int sign, double tmax) const;

    const std::array<double, 3>& bbox_min() const { return bbox_min_; }
    const std::array<double, 3>& bbox_max() const { return bbox_max_; }

  private:
    int n_ = 0;
    bool is_box_ = false;
    std::vector<double> lengths_;
    std::vector<std::array<double, 4>> edges_; // 2D: x0,y0,x1,y1
    std::vector<std::array<double, 9>> tris_;  // 3D: triangulated boundary
    std::array<double, 3> bbox_min_{{0, 0, 0}};
    std::array<double, 3> bbox_max_{{0, 0, 0}};
};

} // namespace spectral
