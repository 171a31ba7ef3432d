#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "spectral/bounds.hpp"

namespace spectral {

// Value of a scalar function together with its first two derivatives.
struct Jet2 {
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
};

// C^2 taper polynomial 1 - 6x^4 + 8x^6 - 3x^8 on [0, 1].  Descends from
// (1, 0, 0) at x = 0 to (0, 0, 0) at x = 1, so piecewise extensions by a
// constant on either side stay twice differentiable.
Jet2 taper_jet(double x);

// Even plateau profile used to localize test functions: 1 on
// [0, (2p-q)/(2p)], the taper ramp on [(2p-q)/(2p), (2p-q+1)/(2p)], and 0
// beyond; mirrored for t < 0.  Requires p >= 1 and 0 <= q <= p - 1.
// Satisfies |value| <= 1, |first| < 5p, |second| < 44 p^2.
Jet2 plateau_jet(int q, int p, double t);

struct BumpSample {
    double value = 0.0;
    double gradient_norm = 0.0;
    double laplacian = 0.0;
};

// Separable bump W(x) = prod_d plateau(sqrt(lambda) * x_d), with gradient
// norm and Laplacian assembled analytically via the product/chain rule.
// Satisfies |W| <= 1, |grad W| < 5 sqrt(n) sqrt(lambda) p,
// |Lap W| < 44 n lambda p^2, and W == 1 on the sub-box where every
// coordinate has |sqrt(lambda) x_d| <= (2p-q-1)/(2p).
BumpSample separable_bump(int q, int p, double lambda,
                          const std::vector<double>& point);

// log2 of the derivative-growth coefficients D_0..D_{p+1} that bound how
// repeated differentiation inflates localized L^2 mass:
//   D_0 = 1,
//   D_1 = 3 (1 + 1936 n^2 p^4 + 100 n p^2),
//   D_q = 3 (1 + 1936 n^2 p^4) D_{q-2} + 300 n p^2 D_{q-1}.
// Computed entirely in log space; the raw integers overflow doubles
// already near p = 5 for n = 2.
std::vector<double> derivative_coefficients_log2(int n, int p);

// Whether log2(D_p) < (2n + 18) p^2, the growth cap the eigenvalue bound
// relies on when trading the D-coefficients for powers of two.
bool derivative_coefficient_bound_holds(int n, int p);

// log2 of beta_q^2 = ((n+2)/(4 n pi^2))^{n/2} * B_n * V^2 * D_{q-1}, the
// coefficient bounding the q-th directional-derivative mass of a spectral
// cluster on one lattice cell.  q must be p or p + 1.
double beta_squared_log2(int q, int n, double volume, int p);

// exp2 of the above; overflows for large p, intended for small cases.
double beta_squared(int q, int n, double volume, int p);

// Derivative order p = floor(sqrt(log2((V/alpha1)^{n-1} lambda^{n/2})
// / (n + 12))) used by the sharpened eigenvalue-average bound; undefined
// (nullopt) when the floor would drop below 1.  The epsilon exponent of
// the average bound equals 1/p whenever this is defined.
std::optional<int> choose_p(int n, double volume, double lambda);

struct CellDefectBound {
    double value = 0.0;     // min of the two branches, prefactor included
    double branch1 = 0.0;   // (1/(9*2^{n-1})) * 2^{-2p-5} lambda^{-n/2}
    double branch2 = 0.0;   // (1/(9*2^{n-1})) * 2^{-p-2} 6^{1/(2p)}
                            //   * (beta_p^2+beta_{p+1}^2)^{-1/(2p)}
                            //   * lambda^{-n/2-n/(2p)}
    int active_branch = 0;  // 1 or 2, whichever attains the min
};

// Lower bound on the squared L^2 distance between a normalized spectral
// cluster and a pure plane wave over a single lattice cell.  Evaluated in
// log space since both branches underflow rapidly in lambda.
CellDefectBound cell_defect_lower_bound(int n, double volume, double lambda,
                                        int p);

// Sharp bound ((n+2)/n)^{n/(n+2)} * M2^{n/(n+2)} * (M1 * B_n)^{2/(n+2)} on
// the integral of any F : R^n -> [0, M1] with second moment at most M2.
// Equality holds exactly for scaled ball indicators.
double liyau_functional_bound(double m1, double m2, int n);

struct DichotomyResult {
    bool first_holds = false;   // m1 <= 2^{p-1} mp^{1/p} m0^{1-1/p}
    bool second_holds = false;  // m1 <  4^{p+1} sqrt(lambda) m0
    bool violation = false;     // neither held, confirmed after refinement
    double m0 = 0.0;            // grid max of |f|
    double m1 = 0.0;            // grid max of |f'|
    double mp = 0.0;            // grid max of |f^(p)|
};

// Checks the gradient-maximum dichotomy for a smooth function on
// [0, 1/(2 sqrt(lambda))]: at least one of the two recorded inequalities
// must hold.  `f(t, order)` evaluates the order-th derivative at t.
// Maxima are taken over a grid of 10^4 intervals plus endpoints; since
// grid maxima only under-estimate the true ones, an apparent violation is
// re-checked on a 10x finer grid before being flagged.
DichotomyResult derivative_dichotomy_check(
    const std::function<double(double, int)>& f, int p, double lambda);

// Number of disjoint boundary cells a face of area `face_area` supports at
// frequency lambda: floor(face_area * lambda^{(n-1)/2} / 6).
std::int64_t rectangle_count(double face_area, double lambda, int n);

// Smallest lambda for which the cell construction fits inside the domain:
// 4 n / min_distance^2, where min_distance separates the shrunken faces
// from the rest of the boundary.
double admissible_lambda_threshold(double min_distance, int n);

// Upper bound M(lambda) on the phase-space density of the spectral
// cluster below lambda:
//   (V/(2 pi)^n) * [1 - alpha2 V^{-1/2} A (V lambda / alpha1)^{-1/2-n/p}]
// once lambda clears the activation threshold, and exactly V/(2 pi)^n
// below it.  The bracket is provably positive past the threshold, so a
// non-positive bracket raises ConsistencyError.
double density_upper_bound(double lambda, const DomainSummary& domain,
                           int p);

// Companion constant to alpha1: alpha2 = alpha1^{-1/2} / (81 * 2^n).
double alpha2(int n);

// Bundle of every constant the sharpened average bound consumes for one
// (domain, lambda) pair; lambda must be large enough for choose_p.
struct ProofConstants {
    int n = 0;
    int p = 0;
    std::vector<double> d_log2;     // log2(D_0..D_{p+1})
    double beta_p_sq_log2 = 0.0;    // log2(beta_p^2)
    double beta_p1_sq_log2 = 0.0;   // log2(beta_{p+1}^2)
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double lambda0 = 0.0;
    double epsilon = 0.0;           // 1/p
};

ProofConstants proof_constants(const DomainSummary& domain, double lambda);

}  // namespace spectral
