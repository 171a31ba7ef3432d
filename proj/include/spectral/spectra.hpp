#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "spectral/geometry.hpp"

namespace spectral {

// How a Spectrum was produced.  Exact enumerators use closed-form eigenvalue
// formulas; the finite-difference path discretizes the Laplacian on a grid.
enum class SpectrumMethod {
    exact_box,
    exact_triangle,
    finite_difference,
};

// A sorted prefix of the Dirichlet spectrum of one domain.
//
// `eigenvalues` holds the smallest `eigenvalues.size()` eigenvalues in
// non-decreasing order, repeated according to multiplicity.  `certified_upper`
// is an exclusive threshold: the list is guaranteed to contain every
// eigenvalue strictly below it, so counting queries are only answered for
// lambda < certified_upper.  Exact enumerators set it to the next eigenvalue
// beyond the requested prefix; the finite-difference solver sets it to the
// largest converged value (counting strictly below the last computed
// eigenvalue is complete once the solver has converged to the true bottom of
// the spectrum).
struct Spectrum {
    std::vector<double> eigenvalues;
    SpectrumMethod method = SpectrumMethod::exact_box;
    double resolution = 0.0;  // grid spacing h; 0 for exact methods
    std::string domain_id;
    double certified_upper = std::numeric_limits<double>::infinity();
};

// First `count` Dirichlet eigenvalues of an axis-aligned box with the given
// side lengths: sums pi^2 * (m_i / L_i)^2 over positive integer tuples.
// Works in any dimension >= 1.  Throws ConfigError for empty/non-positive
// lengths or count < 1, RangeError if the lattice sweep would be too large.
Spectrum box_spectrum_exact(const std::vector<double>& lengths, int count,
                            const std::string& domain_id = "box");

// First `count` Dirichlet eigenvalues of an equilateral triangle with the
// given side length: (16 pi^2 / (9 side^2)) * (m^2 + m n + n^2) over ordered
// pairs m, n >= 1.
Spectrum equilateral_triangle_spectrum_exact(double side, int count,
                                             const std::string& domain_id = "equilateral_triangle");

// Number of eigenvalues <= lambda (with multiplicity).  Requires lambda >= 0
// and lambda < certified_upper; outside that window the prefix cannot answer
// the query and a RangeError is thrown.
int counting_function(const Spectrum& spectrum, double lambda);

// Mean of the first k eigenvalues.  Throws RangeError unless 1 <= k <= size.
double eigenvalue_average(const Spectrum& spectrum, int k);

// Richardson extrapolation of two finite-difference spectra computed on grids
// with spacings h and h/2.  Assuming an error expansion lambda_h = lambda +
// c h^order + o(h^order), returns (2^order * lambda_{h/2} - lambda_h) /
// (2^order - 1) per index.  Both inputs must describe the same domain, hold
// the same number of eigenvalues, and have a 2:1 resolution ratio.
Spectrum richardson_extrapolate(const Spectrum& coarse, const Spectrum& fine,
                                int order = 2);

// Discrete Laplacian stencil variant.  `standard` drops neighbors outside the
// domain (plain 5/7-point stencil, second-order on grid-aligned boundaries);
// `shortley_weller` shortens boundary arms to the actual boundary intersection
// and symmetrizes the resulting operator.
enum class StencilKind {
    standard,
    shortley_weller,
};

// Sparse symmetric discretization of -Laplace on the interior grid nodes of a
// polytope.  Node i lives at grid_origin + h * node_coords[i] (lattice
// coordinates, dimension entries used).
struct GridOperator {
    double h = 0.0;
    int dimension = 0;
    StencilKind stencil = StencilKind::standard;
    std::string domain_id;
    std::vector<std::array<std::int64_t, 3>> node_coords;
    std::array<double, 3> grid_origin{};
    Eigen::SparseMatrix<double> matrix;
};

// Assembles the finite-difference operator for a 2-D or 3-D polytope on a
// uniform grid of spacing h anchored at the bounding-box corner.  Throws
// ResolutionError when the grid captures no interior nodes (h too coarse) or
// would be unreasonably large, ConfigError for h <= 0.
GridOperator fd_assemble(const Polytope& polytope, double h,
                         StencilKind stencil = StencilKind::standard);

// Smallest `count` eigenvalues of the assembled operator.  Small problems are
// solved densely; larger ones use shift-invert subspace iteration seeded by
// `seed` (deterministic: the same seed reproduces bit-identical output).
// Every returned eigenvalue satisfies ||A v - lambda v|| <= 1e-8 * lambda.
// Throws RangeError if count exceeds the matrix size, ConvergenceError if the
// iteration stalls.
Spectrum fd_spectrum(const GridOperator& op, int count,
                     std::uint64_t seed = 1);

}  // namespace spectral
