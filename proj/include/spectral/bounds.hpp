#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spectral/geometry.hpp"
#include "spectral/spectra.hpp"

namespace spectral {

// Geometric data consumed by the eigenvalue bounds, extracted once from a
// polytope and its face decomposition.
struct DomainSummary {
    int dimension = 0;
    double volume = 0.0;          // V
    double surface_area = 0.0;    // A
    double moment_of_inertia = 0.0;  // I, about the centroid
    double min_face_distance = 0.0;  // min_i d_i from the decomposition
    double min_face_area = 0.0;      // min_i A_i over the faces
    double ball_volume = 0.0;        // B_n
};

// Builds the summary from an already-computed decomposition, or convenience
// overload that decomposes with the given area fraction.  Throws
// ConsistencyError if any derived quantity fails to be strictly positive.
DomainSummary summarize(const Polytope& polytope, const FaceDecomposition& decomposition);
DomainSummary summarize(const Polytope& polytope, double fraction = 1.0 / 3.0);

// Leading Weyl term for the k-th eigenvalue: 4 pi^2 (k / (B_n V))^{2/n}.
double weyl_kth(int k, int n, double volume);

// Leading Weyl term for the average of the first k eigenvalues:
// n/(n+2) times weyl_kth.
double weyl_average(int k, int n, double volume);

// Polya's lower bound for lambda_k: same expression as weyl_kth.  A theorem
// for domains that tile space, a conjecture otherwise.
double polya_bound(int k, int n, double volume);

// Berezin-Li-Yau bounds: the average of the first k eigenvalues, and hence
// lambda_k itself, is at least n/(n+2) times the Weyl term.
double liyau_average_bound(int k, int n, double volume);
double liyau_kth_bound(int k, int n, double volume);

// Melas's improvement: Li-Yau average bound plus melas_constant * V / I.
// The dimensional constant is supplied by configuration; throws ConfigError
// unless it is strictly positive.
double melas_bound(int k, int n, double volume, double moment_of_inertia,
                   double melas_constant);

// alpha_1 = sqrt((3 / B_n) (4 n pi^2 / (n+2))^{n/2}).  Requires n >= 2.
double alpha1(int n);

// Eigenvalue threshold above which the geometric correction term activates:
// max of 4n/min_d^2, (alpha_1/V)^{2/n}, 2^{2(n+12)/n} (alpha_1/V)^{2(n-1)/n},
// and (12/min_A)^{2/(n-1)}.
double lambda0(int n, double volume, double min_face_distance,
               double min_face_area);

// epsilon(k) = 1 / floor(sqrt(log2((V/alpha_1)^{n-1} lambda_k^{n/2}) /
// (n+12))), or nullopt when the floor is below 1 (including a non-positive
// log argument).
std::optional<double> epsilon_k(int n, double volume, double lambda_k);

// Average-eigenvalue lower bound with the surface-area correction term:
// weyl_average plus
//   3^{-4} 2^{3-n} pi^2 / ((n+2) B_n^{2/n}) * (A / V^{1+2/n}) *
//   (V lambda_k / alpha_1)^{-n eps(k)} * k^{2/n} * lambda_k^{-1/2}
// when lambda_k > lambda0 (strictly); exactly weyl_average otherwise.
// Throws ConsistencyError if the correction is active yet epsilon is
// undefined (provably impossible; kept as an internal check).
double theorem1_bound(int k, double lambda_k, const DomainSummary& domain);

// Spectrum-free variant of the corrected average bound, applicable once k is
// large enough that its own epsilon (with the Weyl expression standing in for
// lambda_k) is defined; nullopt below that threshold.
std::optional<double> corollary1_bound(int k, const DomainSummary& domain);

// Per-k verification record; field order mirrors the CSV schema.
struct BoundReport {
    int k = 0;
    double lambda_k = 0.0;
    double avg_k = 0.0;
    double weyl_kth = 0.0;
    double weyl_avg = 0.0;
    double polya = 0.0;
    double liyau_avg = 0.0;
    double liyau_kth = 0.0;
    double melas = 0.0;
    double theorem1 = 0.0;
    std::optional<double> corollary1;
    int theta = 0;
    std::optional<double> epsilon;
    std::vector<std::string> violations;  // bound names exceeding measured + slack
};

struct VerifyConfig {
    double melas_constant = 0.0;  // required, strictly positive
    int threads = 1;              // worker threads for the k sweep
};

// Evaluates every bound against the measured spectrum for k = 1..k_max.
// A bound is flagged when it exceeds its measured quantity (lambda_k for the
// per-eigenvalue bounds, the running average for the averaged ones) by more
// than 1e-9 relative slack.  Reports are returned in k order regardless of
// thread count.
std::vector<BoundReport> verify(const Spectrum& spectrum,
                                const DomainSummary& domain, int k_max,
                                const VerifyConfig& config);

}  // namespace spectral
