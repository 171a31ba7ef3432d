#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "spectral/geometry.hpp"
#include "support/geom_oracle.hpp"
#include "support/test_util.hpp"

using namespace spectral;
using namespace testutil;

namespace {

Polytope unit_square_mesh() {
    return make_polygon({{{0, 0}}, {{1, 0}}, {{1, 1}}, {{0, 1}}}, "square", true);
}

Polytope cube_mesh() {
    Polytope P;
    P.dimension = 3;
    P.kind = PolytopeKind::general;
    P.id = "cube_mesh";
    P.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                  {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    P.faces = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
               {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
    validate(P);
    return P;
}

std::vector<Polytope> property_domains() {
    std::vector<Polytope> out;
    out.push_back(unit_square_mesh());
    out.push_back(make_polygon(lshape_ring(), "lshape", true));
    out.push_back(make_polygon(equilateral_ring(1.0), "eqtri", true));
    out.push_back(make_box({1, 2, 3}, "box123"));
    out.push_back(make_box({1, 1}, "box11"));
    out.push_back(cube_mesh());
    out.push_back(make_tetrahedron({{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}));
    out.push_back(make_prism(lshape_ring(), 0.75, "lprism"));
    return out;
}

} // namespace

TEST_CASE("volume of reference shapes") {
    CHECK(volume(unit_square_mesh()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(volume(make_box({1, 2, 3})) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(volume(make_polygon(equilateral_ring(1.0))) ==
          doctest::Approx(0.43301270189221932).epsilon(1e-14));
    CHECK(volume(make_box({1, 2, 3, 4})) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(volume(cube_mesh()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(volume(make_tetrahedron({{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}})) ==
          doctest::Approx(1.0 / 6).epsilon(1e-14));
    CHECK(volume(make_prism(lshape_ring(), 0.75)) == doctest::Approx(2.25).epsilon(1e-14));
}

TEST_CASE("surface area of reference shapes") {
    CHECK(surface_area(unit_square_mesh()) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(surface_area(make_box({1, 1, 1})) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(surface_area(cube_mesh()) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(surface_area(make_polygon(equilateral_ring(1.0))) ==
          doctest::Approx(3.0).epsilon(1e-14));
    CHECK(surface_area(make_box({1, 2, 3, 4})) == doctest::Approx(100.0).epsilon(1e-14));
}

TEST_CASE("per-face areas") {
    auto sq = face_areas(unit_square_mesh());
    REQUIRE(sq.size() == 4);
    for (double a : sq) CHECK(a == doctest::Approx(1.0).epsilon(1e-14));

    auto box = face_areas(make_box({1, 2, 3}));
    std::vector<double> want{6, 6, 3, 3, 2, 2};
    REQUIRE(box.size() == want.size());
    for (size_t i = 0; i < want.size(); ++i)
        CHECK(box[i] == doctest::Approx(want[i]).epsilon(1e-14));

    auto tri = face_areas(make_polygon({{{0, 0}}, {{1, 0}}, {{0, 1}}}, "rt"));
    REQUIRE(tri.size() == 3);
    CHECK(tri[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tri[1] == doctest::Approx(std::numbers::sqrt2).epsilon(1e-14));
    CHECK(tri[2] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("moment of inertia: exact references") {
    CHECK(moment_of_inertia(unit_square_mesh()) == doctest::Approx(1.0 / 6).epsilon(1e-13));
    CHECK(moment_of_inertia(make_box({1, 1})) == doctest::Approx(1.0 / 6).epsilon(1e-13));
    CHECK(moment_of_inertia(make_box({1, 1, 1})) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(moment_of_inertia(cube_mesh()) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(moment_of_inertia(make_box({1, 2, 3})) == doctest::Approx(7.0).epsilon(1e-13));
    // Unit right triangle: second moment 1/6 about the origin, centroid (1/3,1/3).
    CHECK(moment_of_inertia(make_polygon({{{0, 0}}, {{1, 0}}, {{0, 1}}}, "rt")) ==
          doctest::Approx(1.0 / 18).epsilon(1e-13));
    // Unit right tetrahedron: 1/20 - (1/6)(3/16) = 3/160.
    CHECK(moment_of_inertia(make_tetrahedron({{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}})) ==
          doctest::Approx(3.0 / 160).epsilon(1e-13));
}

TEST_CASE("unit ball volumes") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.1887902047863910).epsilon(1e-15));
    CHECK(unit_ball_volume(4) == doctest::Approx(4.9348022005446793).epsilon(1e-15));
    CHECK_THROWS_AS(unit_ball_volume(0), std::domain_error);
}

TEST_CASE("scaling and translation invariance") {
    Rng rng(42);
    for (const auto& P : property_domains()) {
        const int n = P.dimension;
        double V = volume(P), A = surface_area(P), I = moment_of_inertia(P);
        for (int trial = 0; trial < 4; ++trial) {
            double t = uniform(rng, 0.1, 10.0);
            Polytope Q = scaled(P, t);
            CHECK(approx_rel(volume(Q), std::pow(t, n) * V, 1e-12));
            CHECK(approx_rel(surface_area(Q), std::pow(t, n - 1) * A, 1e-12));
            CHECK(approx_rel(moment_of_inertia(Q), std::pow(t, n + 2) * I, 1e-12));
        }
        if (P.kind == PolytopeKind::general) {
            std::vector<double> shift;
            for (int i = 0; i < n; ++i) shift.push_back(uniform(rng, -5, 5));
            Polytope Q = translated(P, shift);
            CHECK(approx_rel(volume(Q), V, 1e-12));
            CHECK(approx_rel(surface_area(Q), A, 1e-12));
            CHECK(approx_rel(moment_of_inertia(Q), I, 1e-10));
            auto fa = face_areas(P), fb = face_areas(Q);
            for (size_t i = 0; i < fa.size(); ++i) CHECK(approx_rel(fa[i], fb[i], 1e-12));
        }
    }
}

TEST_CASE("isoperimetric sanity: A^n > n^n B_n V^(n-1), strict for polytopes") {
    for (const auto& P : property_domains()) {
        const int n = P.dimension;
        double lhs = std::pow(surface_area(P), n);
        double rhs = std::pow(n, n) * unit_ball_volume(n) * std::pow(volume(P), n - 1);
        CHECK(lhs > rhs);
    }
    CHECK(std::pow(surface_area(make_box({1, 2, 3, 4})), 4) >
          std::pow(4, 4) * unit_ball_volume(4) * std::pow(24.0, 3));
}

TEST_CASE("face decomposition: unit square erodes each edge to its central third") {
    auto D = face_decomposition(unit_square_mesh(), 1.0 / 3.0);
    REQUIRE(D.faces.size() == 4);
    for (const auto& f : D.faces) {
        CHECK(f.face_area == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(f.erosion_margin == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(f.distance == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(f.patch_area_total == doctest::Approx(1.0 / 3).epsilon(1e-12));
        REQUIRE(f.patches.size() == 1);
    }
    CHECK(D.min_distance() == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(D.min_face_area() == doctest::Approx(1.0).epsilon(1e-14));
    // Bottom edge patch is the central segment.
    const auto& ring = D.faces[0].patches[0].ring;
    REQUIRE(ring.size() == 2);
    CHECK(ring[0][0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(ring[1][0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
}

TEST_CASE("face decomposition: box (1,2,3) margins match the quadratic closed form") {
    auto D = face_decomposition(make_box({1, 2, 3}), 1.0 / 3.0);
    REQUIRE(D.faces.size() == 6);
    // Solving (a-2d)(b-2d) = ab/3 per wall pair.
    std::vector<double> want_delta{0.5, 0.5, 0.29289321881345248, 0.29289321881345248,
                                   0.27128644612183095, 0.27128644612183095};
    for (size_t i = 0; i < 6; ++i) {
        CHECK(D.faces[i].erosion_margin == doctest::Approx(want_delta[i]).epsilon(1e-12));
        // Adjacent faces meet at right angles: d_i is the in-plane margin.
        CHECK(D.faces[i].distance == doctest::Approx(want_delta[i]).epsilon(1e-12));
        CHECK(D.faces[i].patch_area_total >=
              D.faces[i].face_area / 3 * (1 - 1e-12));
    }
    CHECK(D.min_distance() == doctest::Approx(0.27128644612183095).epsilon(1e-12));
}

TEST_CASE("face decomposition: equilateral triangle distance = (1/3) sin 60") {
    auto D = face_decomposition(make_polygon(equilateral_ring(1.0), "eqtri"), 1.0 / 3.0);
    REQUIRE(D.faces.size() == 3);
    for (const auto& f : D.faces) {
        CHECK(f.erosion_margin == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(f.distance == doctest::Approx(0.28867513459481288).epsilon(1e-11));
    }
}

TEST_CASE("face decomposition: L-shape") {
    auto D = face_decomposition(make_polygon(lshape_ring(), "lshape"), 1.0 / 3.0);
    REQUIRE(D.faces.size() == 6);
    CHECK(D.min_distance() == doctest::Approx(1.0 / 3).epsilon(1e-11));
    // Bottom edge (length 2) patch keeps distance 2/3 from both vertical walls.
    CHECK(D.faces[0].distance == doctest::Approx(2.0 / 3).epsilon(1e-11));
}

TEST_CASE("face decomposition: fraction limits") {
    CHECK_THROWS_AS(face_decomposition(unit_square_mesh(), 1.0), DecompositionError);
    CHECK_THROWS_AS(face_decomposition(unit_square_mesh(), 0.0), DecompositionError);
    // Fraction near 1 still yields a strictly positive margin and distance.
    auto D = face_decomposition(unit_square_mesh(), 0.999);
    for (const auto& f : D.faces) {
        CHECK(f.erosion_margin > 0);
        CHECK(f.distance > 0);
        CHECK(f.erosion_margin == doctest::Approx(5e-4).epsilon(1e-6));
    }
}

TEST_CASE("face decomposition: patch area fraction and exact distances (brute oracle)") {
    std::vector<Polytope> domains = property_domains();
    for (const auto& P : domains) {
        auto D = face_decomposition(P, 1.0 / 3.0);
        for (size_t fi = 0; fi < D.faces.size(); ++fi) {
            const auto& f = D.faces[fi];
            CHECK(f.patch_area_total >= f.face_area / 3 * (1 - 1e-12));
            CHECK(f.distance > 0);
            double brute = brute_face_distance(P, D, fi, 10000);
            // Sampled minimum can only overestimate; extrema sit at patch
            // corners which the inclusive sampling hits exactly.
            CHECK(brute >= f.distance - 1e-12);
            CHECK(brute - f.distance <= 1e-9);
        }
    }
}

TEST_CASE("containment: open interior, boundary exterior") {
    auto sq = unit_square_mesh();
    CHECK(contains(sq, {0.5, 0.5}));
    CHECK_FALSE(contains(sq, {1.0, 0.5}));
    CHECK_FALSE(contains(sq, {0.0, 0.0}));
    CHECK_FALSE(contains(sq, {1.5, 0.5}));

    auto lsh = make_polygon(lshape_ring(), "lshape");
    CHECK_FALSE(contains(lsh, {1.5, 1.5}));
    CHECK(contains(lsh, {0.5, 1.5}));
    CHECK(contains(lsh, {1.5, 0.5}));
    CHECK_FALSE(contains(lsh, {1.0, 1.5})); // on the notch wall

    auto box = make_box({1, 2, 3});
    CHECK(contains(box, {0.5, 1.0, 1.5}));
    CHECK_FALSE(contains(box, {1.0, 1.0, 1.5}));

    auto prism = make_prism(lshape_ring(), 0.75);
    CHECK(contains(prism, {0.5, 0.5, 0.4}));
    CHECK_FALSE(contains(prism, {1.5, 1.5, 0.4}));
    CHECK_FALSE(contains(prism, {0.5, 0.5, 0.75}));

    CHECK_THROWS_AS(contains(sq, {0.5, 0.5, 0.5}), InvalidGeometryError);
}

TEST_CASE("point locator: axis boundary hits") {
    auto sq = unit_square_mesh();
    PointLocator loc(sq);
    double p[2] = {0.25, 0.5};
    CHECK(loc.boundary_hit_axis(p, 0, -1, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(loc.boundary_hit_axis(p, 0, +1, 0.5) == doctest::Approx(1.5)); // miss: wall at 0.75
    CHECK(loc.boundary_hit_axis(p, 1, -1, 0.75) == doctest::Approx(0.5).epsilon(1e-12));

    auto tri = make_polygon({{{0, 0}}, {{1, 0}}, {{0, 1}}}, "rt");
    PointLocator tloc(tri);
    double q[2] = {0.4, 0.4};
    CHECK(tloc.boundary_hit_axis(q, 0, +1, 0.3) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(tloc.boundary_hit_axis(q, 1, +1, 0.3) == doctest::Approx(0.2).epsilon(1e-12));

    PointLocator bloc(make_box({1, 2, 3}));
    double r[3] = {0.25, 1.0, 2.9};
    CHECK(bloc.boundary_hit_axis(r, 2, +1, 0.2) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(bloc.boundary_hit_axis(r, 1, +1, 0.2) == doctest::Approx(1.2)); // miss

    PointLocator ploc(make_prism(lshape_ring(), 0.75));
    double s[3] = {0.9, 1.5, 0.4};
    CHECK(ploc.boundary_hit_axis(s, 0, +1, 0.2) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(ploc.boundary_hit_axis(s, 2, +1, 0.5) == doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("point locator agrees with contains() on random points") {
    Rng rng(314);
    for (const auto& P : property_domains()) {
        PointLocator loc(P);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> x;
            for (int i = 0; i < P.dimension; ++i)
                x.push_back(uniform(rng, loc.bbox_min()[static_cast<size_t>(std::min(i, 2))] - 0.2,
                                    loc.bbox_max()[static_cast<size_t>(std::min(i, 2))] + 0.2));
            if (P.dimension <= 3) CHECK(loc.contains(x.data()) == contains(P, x));
        }
    }
}

TEST_CASE("monte carlo cross-check of volume and moment of inertia") {
    struct Case {
        Polytope P;
        double lo[3], hi[3];
    };
    // Sampling boxes strictly larger than the domains so rejection happens and
    // the binomial error bar is meaningful.
    std::vector<Case> cases;
    cases.push_back({unit_square_mesh(), {-0.25, -0.25, 0}, {1.25, 1.25, 0}});
    cases.push_back({cube_mesh(), {-0.25, -0.25, -0.25}, {1.25, 1.25, 1.25}});
    cases.push_back({make_polygon(lshape_ring(), "lshape"), {0, 0, 0}, {2, 2, 0}});
    for (auto& c : cases) {
        const int n = c.P.dimension;
        const int N = 1000000;
        Rng rng(7);
        PointLocator loc(c.P);
        auto cen = centroid(c.P);
        double bbox_vol = 1;
        for (int i = 0; i < n; ++i) bbox_vol *= c.hi[i] - c.lo[i];
        long hits = 0;
        double sum_r2 = 0, sum_r4 = 0;
        for (int s = 0; s < N; ++s) {
            double x[3] = {0, 0, 0};
            for (int i = 0; i < n; ++i) x[i] = uniform(rng, c.lo[i], c.hi[i]);
            if (!loc.contains(x)) continue;
            ++hits;
            double r2 = 0;
            for (int i = 0; i < n; ++i) r2 += (x[i] - cen[static_cast<size_t>(i)]) *
                                              (x[i] - cen[static_cast<size_t>(i)]);
            sum_r2 += r2;
            sum_r4 += r2 * r2;
        }
        double p = static_cast<double>(hits) / N;
        double v_est = bbox_vol * p;
        double v_sigma = bbox_vol * std::sqrt(p * (1 - p) / N);
        CHECK(std::abs(v_est - volume(c.P)) <= 3 * v_sigma);

        double mean_r2 = sum_r2 / N; // of the indicator-weighted integrand
        double i_est = bbox_vol * mean_r2;
        double var = sum_r4 / N - mean_r2 * mean_r2;
        double i_sigma = bbox_vol * std::sqrt(var / N);
        CHECK(std::abs(i_est - moment_of_inertia(c.P)) <= 3 * i_sigma);
    }
}

TEST_CASE("validation rejects broken inputs") {
    // Reversed orientation: negative signed volume.
    Polytope rev;
    rev.dimension = 2;
    rev.kind = PolytopeKind::general;
    rev.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    rev.faces = {{1, 0}, {2, 1}, {3, 2}, {0, 3}};
    CHECK_THROWS_AS(validate(rev), InvalidGeometryError);

    // Open boundary: cube missing a face.
    Polytope open_cube = cube_mesh();
    open_cube.faces.pop_back();
    CHECK_THROWS_AS(validate(open_cube), InvalidGeometryError);

    // Degenerate edge.
    Polytope degen;
    degen.dimension = 2;
    degen.kind = PolytopeKind::general;
    degen.vertices = {{0, 0}, {0, 0}, {1, 1}};
    degen.faces = {{0, 1}, {1, 2}, {2, 0}};
    CHECK_THROWS_AS(validate(degen), InvalidGeometryError);

    CHECK_THROWS_AS(make_box({1, -2}), InvalidGeometryError);
    CHECK_THROWS_AS(make_box({0, 1}), InvalidGeometryError);

    // Non-planar 3D face.
    Polytope bent = cube_mesh();
    bent.vertices[6][2] = 1.5;
    CHECK_THROWS_AS(validate(bent), InvalidGeometryError);
}

TEST_CASE("JSON domain files") {
    const char* box_json = R"({"dimension": 3, "kind": "box", "lengths": [1, 2, 3],
                               "tiling": true})";
    Polytope box = parse_polytope(box_json, "box123");
    CHECK(box.kind == PolytopeKind::box);
    CHECK(box.tiling);
    CHECK(volume(box) == doctest::Approx(6.0));

    const char* sq_json = R"({"dimension": 2, "kind": "general",
        "vertices": [[0,0],[1,0],[1,1],[0,1]],
        "faces": [[0,1],[1,2],[2,3],[3,0]], "tiling": true})";
    Polytope sq = parse_polytope(sq_json, "square");
    CHECK(volume(sq) == doctest::Approx(1.0));
    CHECK(sq.tiling);

    CHECK_THROWS_AS(parse_polytope("{not json", "x"), ConfigError);
    CHECK_THROWS_AS(parse_polytope(R"({"dimension": 2, "kind": "box",
        "lengths": [1,1], "vertices": [[0,0]]})", "x"), ConfigError);
    CHECK_THROWS_AS(parse_polytope(R"({"dimension": 2, "kind": "general",
        "lengths": [1,1]})", "x"), ConfigError);
    CHECK_THROWS_AS(parse_polytope(R"({"dimension": 2, "kind": "pyramid",
        "lengths": [1,1]})", "x"), ConfigError);

    // Round-trip through a file: id is the stem.
    auto tmp = std::filesystem::temp_directory_path() / "sb_square_roundtrip.json";
    {
        std::ofstream out(tmp);
        out << sq_json;
    }
    Polytope loaded = load_polytope(tmp.string());
    CHECK(loaded.id == "sb_square_roundtrip");
    CHECK(volume(loaded) == doctest::Approx(1.0));
    std::filesystem::remove(tmp);
    CHECK_THROWS_AS(load_polytope("/nonexistent/file.json"), ConfigError);
}
