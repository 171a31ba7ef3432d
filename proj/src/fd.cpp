#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "spectral/errors.hpp"
#include "spectral/spectra.hpp"

namespace spectral {

namespace {

// Hard cap on lattice cells scanned during assembly, keeping the dense
// node-index map at a sane memory footprint.
constexpr std::int64_t kMaxGridCells = 60'000'000;

// Boundary arms shorter than this fraction of h are clamped: the node is then
// effectively glued to the boundary, and shorter arms only feed roundoff into
// the operator without improving accuracy.
constexpr double kMinArmFraction = 1e-6;

struct ArmInfo {
    // arm[d][0] toward -d, arm[d][1] toward +d, as fractions of h in (0, 1].
    double arm[3][2];
    // neighbor[d][s] is the node index across that arm, or -1 for a boundary
    // arm (the neighbor lattice point is not an interior node).
    std::int32_t neighbor[3][2];
};

}  // namespace

GridOperator fd_assemble(const Polytope& polytope, double h,
                         StencilKind stencil) {
    if (!(h > 0.0)) throw ConfigError("fd assemble: spacing h must be positive");
    const int n = polytope.dimension;
    if (n != 2 && n != 3)
        throw ConfigError("fd assemble: only 2-D and 3-D domains are supported");

    PointLocator locator(polytope);
    const auto& lo = locator.bbox_min();
    const auto& hi = locator.bbox_max();

    // Lattice spans the bounding box inclusively; points on or outside the
    // boundary are filtered by the locator.
    std::int64_t counts[3] = {1, 1, 1};
    std::int64_t total_cells = 1;
    for (int d = 0; d < n; ++d) {
        counts[d] = static_cast<std::int64_t>(std::floor((hi[d] - lo[d]) / h + 1e-9)) + 1;
        total_cells *= counts[d];
        if (total_cells > kMaxGridCells)
            throw ResolutionError("fd assemble: grid too large at this spacing");
    }

    std::vector<std::int32_t> index(static_cast<std::size_t>(total_cells), -1);
    std::vector<std::array<std::int64_t, 3>> coords;
    const auto flat = [&](std::int64_t ix, std::int64_t iy, std::int64_t iz) {
        return ix + counts[0] * (iy + counts[1] * iz);
    };
    const auto in_lattice = [&](const std::int64_t c[3]) {
        for (int d = 0; d < n; ++d)
            if (c[d] < 0 || c[d] >= counts[d]) return false;
        return true;
    };

    double point[3] = {0.0, 0.0, 0.0};
    for (std::int64_t iz = 0; iz < counts[2]; ++iz) {
        for (std::int64_t iy = 0; iy < counts[1]; ++iy) {
            for (std::int64_t ix = 0; ix < counts[0]; ++ix) {
                point[0] = lo[0] + h * static_cast<double>(ix);
                point[1] = lo[1] + h * static_cast<double>(iy);
                if (n == 3) point[2] = lo[2] + h * static_cast<double>(iz);
                if (!locator.contains(point)) continue;
                index[static_cast<std::size_t>(flat(ix, iy, iz))] =
                    static_cast<std::int32_t>(coords.size());
                coords.push_back({ix, iy, iz});
            }
        }
    }

    const auto node_count = static_cast<std::int32_t>(coords.size());
    if (node_count == 0)
        throw ResolutionError("fd assemble: no interior grid nodes at this spacing");

    // Per-node arm lengths and neighbor links.  Standard stencil keeps every
    // arm at the full spacing (missing neighbors act as homogeneous Dirichlet
    // values at distance h); Shortley-Weller shortens boundary arms to the
    // actual boundary hit.
    std::vector<ArmInfo> arms(static_cast<std::size_t>(node_count));
    for (std::int32_t node = 0; node < node_count; ++node) {
        const auto& c = coords[static_cast<std::size_t>(node)];
        point[0] = lo[0] + h * static_cast<double>(c[0]);
        point[1] = lo[1] + h * static_cast<double>(c[1]);
        point[2] = n == 3 ? lo[2] + h * static_cast<double>(c[2]) : 0.0;
        auto& info = arms[static_cast<std::size_t>(node)];
        for (int d = 0; d < n; ++d) {
            for (int s = 0; s < 2; ++s) {
                const int sign = s == 0 ? -1 : +1;
                std::int64_t nb[3] = {c[0], c[1], c[2]};
                nb[d] += sign;
                std::int32_t nb_node = -1;
                if (in_lattice(nb))
                    nb_node = index[static_cast<std::size_t>(flat(nb[0], nb[1], nb[2]))];
                info.neighbor[d][s] = nb_node;
                if (nb_node >= 0 || stencil == StencilKind::standard) {
                    info.arm[d][s] = 1.0;
                    continue;
                }
                // A boundary arm: cast along the axis for the first hit.  A
                // miss within h (possible only through degenerate grazing of
                // an edge) falls back to the full spacing.
                const double hit = locator.boundary_hit_axis(point, d, sign, h);
                double a = hit / h;
                if (!(a <= 1.0)) a = 1.0;
                if (a < kMinArmFraction) a = kMinArmFraction;
                info.arm[d][s] = a;
            }
        }
    }

    // Assemble the symmetrized operator.  Row i of the raw one-sided stencil
    // reads, per axis: diag 2 / (h^2 a- a+), neighbor s gets
    // -2 / (h^2 a_s (a- + a+)).  That matrix A is non-symmetric when arms are
    // shortened; scaling rows by the finite-volume weights
    // w_i = prod_d (a- + a+)/2, averaging with the transpose, and undoing the
    // scaling symmetrically gives B = W^{-1/2} (WA + (WA)^T)/2 W^{-1/2},
    // which keeps the diagonal and stays consistent with the same boundary
    // value problem.  With all arms equal to 1 this reduces exactly to the
    // standard stencil.
    std::vector<double> weight(static_cast<std::size_t>(node_count), 1.0);
    for (std::int32_t node = 0; node < node_count; ++node) {
        double w = 1.0;
        const auto& info = arms[static_cast<std::size_t>(node)];
        for (int d = 0; d < n; ++d) w *= (info.arm[d][0] + info.arm[d][1]) / 2.0;
        weight[static_cast<std::size_t>(node)] = w;
    }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(node_count) * (2 * n + 1));
    const double h2 = h * h;
    for (std::int32_t node = 0; node < node_count; ++node) {
        const auto& info = arms[static_cast<std::size_t>(node)];
        double diag = 0.0;
        for (int d = 0; d < n; ++d) {
            const double am = info.arm[d][0];
            const double ap = info.arm[d][1];
            diag += 2.0 / (h2 * am * ap);
            for (int s = 0; s < 2; ++s) {
                const std::int32_t nb = info.neighbor[d][s];
                if (nb < 0) continue;
                const double a_ij = -2.0 / (h2 * info.arm[d][s] * (am + ap));
                // The neighbor's matching entry uses its own arms; across an
                // interior link its arm back toward us is 1.
                const auto& nb_info = arms[static_cast<std::size_t>(nb)];
                const double nb_am = nb_info.arm[d][0];
                const double nb_ap = nb_info.arm[d][1];
                const double a_ji =
                    -2.0 / (h2 * nb_info.arm[d][1 - s] * (nb_am + nb_ap));
                const double wi = weight[static_cast<std::size_t>(node)];
                const double wj = weight[static_cast<std::size_t>(nb)];
                const double value =
                    (wi * a_ij + wj * a_ji) / (2.0 * std::sqrt(wi * wj));
                triplets.emplace_back(node, nb, value);
            }
        }
        triplets.emplace_back(node, node, diag);
    }

    GridOperator op;
    op.h = h;
    op.dimension = n;
    op.stencil = stencil;
    op.domain_id = polytope.id;
    op.node_coords = std::move(coords);
    op.grid_origin = {lo[0], lo[1], n == 3 ? lo[2] : 0.0};
    op.matrix.resize(node_count, node_count);
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    op.matrix.makeCompressed();
    return op;
}

namespace {

// Deterministic standard normals: explicit Box-Muller over the raw mt19937_64
// stream, so results do not depend on the standard library's distribution
// implementations.
class NormalSource {
  public:
    explicit NormalSource(std::uint64_t seed) : gen_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
        const double u2 = (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        have_spare_ = true;
        return r * std::cos(angle);
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

constexpr double kResidualTolerance = 1e-8;
constexpr int kMaxIterations = 500;
constexpr int kDenseCutoff = 400;

Spectrum make_fd_spectrum(const GridOperator& op, const Eigen::VectorXd& values,
                          int count, double certified_upper) {
    Spectrum s;
    s.eigenvalues.assign(values.data(), values.data() + count);
    s.method = SpectrumMethod::finite_difference;
    s.resolution = op.h;
    s.domain_id = op.domain_id;
    s.certified_upper = certified_upper;
    if (s.eigenvalues.front() <= 0.0)
        throw ConsistencyError(
            "fd spectrum: operator is not positive definite (smallest "
            "eigenvalue <= 0)");
    return s;
}

}  // namespace

Spectrum fd_spectrum(const GridOperator& op, int count, std::uint64_t seed) {
    const auto size = static_cast<std::int64_t>(op.matrix.rows());
    if (count < 1 || count > size)
        throw RangeError("fd spectrum: count outside [1, matrix size]");

    if (size <= kDenseCutoff) {
        Eigen::MatrixXd dense = Eigen::MatrixXd(op.matrix);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
        if (solver.info() != Eigen::Success)
            throw ConvergenceError("fd spectrum: dense eigensolver failed");
        const Eigen::VectorXd& values = solver.eigenvalues();
        // With the full discrete spectrum in hand counting is certified
        // everywhere; otherwise strictly below the first omitted eigenvalue.
        const double upper = count == size
                                 ? std::numeric_limits<double>::infinity()
                                 : values[count];
        return make_fd_spectrum(op, values, count, upper);
    }

    const int block =
        static_cast<int>(std::min<std::int64_t>(size, count + 10));

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(op.matrix);
    if (factor.info() != Eigen::Success)
        throw ConvergenceError("fd spectrum: sparse factorization failed");

    NormalSource normal(seed);
    Eigen::MatrixXd basis(size, block);
    for (std::int64_t j = 0; j < block; ++j)
        for (std::int64_t i = 0; i < size; ++i) basis(i, j) = normal();
    {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
        basis = qr.householderQ() * Eigen::MatrixXd::Identity(size, block);
    }

    double worst_residual = std::numeric_limits<double>::infinity();
    for (int iteration = 0; iteration < kMaxIterations; ++iteration) {
        // One step of shift-invert subspace iteration at shift zero, followed
        // by Rayleigh-Ritz extraction in the refined subspace.
        Eigen::MatrixXd refined = factor.solve(basis);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(refined);
        basis = qr.householderQ() * Eigen::MatrixXd::Identity(size, block);

        Eigen::MatrixXd image = op.matrix * basis;
        Eigen::MatrixXd projected = basis.transpose() * image;
        projected = 0.5 * (projected + projected.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(projected);
        if (small.info() != Eigen::Success)
            throw ConvergenceError("fd spectrum: projected eigensolver failed");

        basis = (basis * small.eigenvectors()).eval();
        image = (image * small.eigenvectors()).eval();
        const Eigen::VectorXd& ritz = small.eigenvalues();

        worst_residual = 0.0;
        bool converged = true;
        for (int j = 0; j < count; ++j) {
            const double residual =
                (image.col(j) - ritz[j] * basis.col(j)).norm();
            worst_residual = std::max(worst_residual, residual);
            if (!(ritz[j] > 0.0) ||
                residual > kResidualTolerance * ritz[j]) {
                converged = false;
                break;
            }
        }
        if (converged)
            return make_fd_spectrum(op, ritz, count, ritz[count - 1]);
    }

    std::ostringstream msg;
    msg << "fd spectrum: subspace iteration did not converge within "
        << kMaxIterations << " iterations (last residual " << worst_residual
        << ")";
    throw ConvergenceError(msg.str());
}

}  // namespace spectral
