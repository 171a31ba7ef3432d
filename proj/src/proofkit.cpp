#include "spectral/proofkit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "spectral/errors.hpp"
#include "spectral/geometry.hpp"

namespace spectral {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// log2(2^a + 2^b) without leaving log space.
double log2_add(double a, double b) {
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log2(1.0 + std::exp2(lo - hi));
}

void require(bool condition, const char* message) {
    if (!condition) throw std::domain_error(message);
}

void require_positive(double value, const char* message) {
    require(value > 0.0 && std::isfinite(value), message);
}

}  // namespace

Jet2 taper_jet(double x) {
    require(x >= 0.0 && x <= 1.0, "taper_jet: argument must lie in [0, 1]");
    const double x2 = x * x;
    const double x3 = x2 * x;
    const double x4 = x2 * x2;
    const double x5 = x4 * x;
    const double x6 = x4 * x2;
    const double x7 = x6 * x;
    const double x8 = x4 * x4;
    Jet2 jet;
    jet.value = 1.0 - 6.0 * x4 + 8.0 * x6 - 3.0 * x8;
    jet.first = -24.0 * x3 + 48.0 * x5 - 24.0 * x7;
    jet.second = -72.0 * x2 + 240.0 * x4 - 168.0 * x6;
    return jet;
}

Jet2 plateau_jet(int q, int p, double t) {
    require(p >= 1, "plateau_jet: p must be >= 1");
    require(q >= 0 && q < p, "plateau_jet: q must satisfy 0 <= q <= p - 1");
    const double s = std::abs(t);
    const double plateau_end = static_cast<double>(2 * p - q) / (2 * p);
    const double support_end = static_cast<double>(2 * p - q + 1) / (2 * p);
    if (s <= plateau_end) return {1.0, 0.0, 0.0};
    if (s >= support_end) return {0.0, 0.0, 0.0};
    const Jet2 g = taper_jet(2.0 * p * s - 2.0 * p + q);
    const double chain = 2.0 * p;
    const double sign = t < 0.0 ? -1.0 : 1.0;
    return {g.value, sign * chain * g.first, chain * chain * g.second};
}

BumpSample separable_bump(int q, int p, double lambda,
                          const std::vector<double>& point) {
    require_positive(lambda, "separable_bump: lambda must be positive");
    require(!point.empty(), "separable_bump: point must be non-empty");
    const std::size_t n = point.size();
    const double root = std::sqrt(lambda);

    std::vector<Jet2> jets(n);
    for (std::size_t d = 0; d < n; ++d) {
        jets[d] = plateau_jet(q, p, root * point[d]);
    }

    // Leave-one-out products of the factor values, via prefix/suffix scans.
    std::vector<double> prefix(n + 1, 1.0);
    std::vector<double> suffix(n + 1, 1.0);
    for (std::size_t d = 0; d < n; ++d) prefix[d + 1] = prefix[d] * jets[d].value;
    for (std::size_t d = n; d-- > 0;) suffix[d] = suffix[d + 1] * jets[d].value;

    double gradient_sq = 0.0;
    double laplacian = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
        const double rest = prefix[d] * suffix[d + 1];
        const double partial = root * jets[d].first * rest;
        gradient_sq += partial * partial;
        laplacian += lambda * jets[d].second * rest;
    }
    return {prefix[n], std::sqrt(gradient_sq), laplacian};
}

std::vector<double> derivative_coefficients_log2(int n, int p) {
    require(n >= 2, "derivative_coefficients_log2: dimension must be >= 2");
    require(p >= 1, "derivative_coefficients_log2: p must be >= 1");
    const double np = static_cast<double>(n);
    const double pp = static_cast<double>(p);
    const double quartic = 1936.0 * np * np * pp * pp * pp * pp;
    const double quadratic = 100.0 * np * pp * pp;

    std::vector<double> log_d(static_cast<std::size_t>(p) + 2);
    log_d[0] = 0.0;
    log_d[1] = std::log2(3.0 * (1.0 + quartic + quadratic));
    const double log_even = std::log2(3.0 * (1.0 + quartic));
    const double log_odd = std::log2(3.0 * quadratic);
    for (std::size_t q = 2; q < log_d.size(); ++q) {
        log_d[q] = log2_add(log_even + log_d[q - 2], log_odd + log_d[q - 1]);
    }
    return log_d;
}

bool derivative_coefficient_bound_holds(int n, int p) {
    const std::vector<double> log_d = derivative_coefficients_log2(n, p);
    return log_d[static_cast<std::size_t>(p)] <
           (2.0 * n + 18.0) * static_cast<double>(p) * p;
}

double beta_squared_log2(int q, int n, double volume, int p) {
    require(p >= 1, "beta_squared_log2: p must be >= 1");
    require(q == p || q == p + 1,
            "beta_squared_log2: q must be p or p + 1");
    require_positive(volume, "beta_squared_log2: volume must be positive");
    const std::vector<double> log_d = derivative_coefficients_log2(n, p);
    const double kinetic = (n + 2.0) / (4.0 * n * std::numbers::pi *
                                        std::numbers::pi);
    return 0.5 * n * std::log2(kinetic) + std::log2(unit_ball_volume(n)) +
           2.0 * std::log2(volume) + log_d[static_cast<std::size_t>(q) - 1];
}

double beta_squared(int q, int n, double volume, int p) {
    return std::exp2(beta_squared_log2(q, n, volume, p));
}

std::optional<int> choose_p(int n, double volume, double lambda) {
    require(n >= 2, "choose_p: dimension must be >= 2");
    require_positive(volume, "choose_p: volume must be positive");
    require_positive(lambda, "choose_p: lambda must be positive");
    const double log_arg = (n - 1) * std::log2(volume / alpha1(n)) +
                           0.5 * n * std::log2(lambda);
    if (!(log_arg > 0.0)) return std::nullopt;
    const double t = std::floor(std::sqrt(log_arg / (n + 12)));
    if (t < 1.0) return std::nullopt;
    return static_cast<int>(t);
}

CellDefectBound cell_defect_lower_bound(int n, double volume, double lambda,
                                        int p) {
    require(p >= 1, "cell_defect_lower_bound: p must be >= 1");
    require_positive(lambda, "cell_defect_lower_bound: lambda must be positive");
    const double log_lambda = std::log2(lambda);
    const double log_prefactor = -std::log2(9.0) - (n - 1.0);
    const double log_branch1 =
        log_prefactor - (2.0 * p + 5.0) - 0.5 * n * log_lambda;
    const double log_beta_sum =
        log2_add(beta_squared_log2(p, n, volume, p),
                 beta_squared_log2(p + 1, n, volume, p));
    const double log_branch2 = log_prefactor - (p + 2.0) +
                               std::log2(6.0) / (2.0 * p) -
                               log_beta_sum / (2.0 * p) -
                               (0.5 * n + 0.5 * n / p) * log_lambda;
    CellDefectBound out;
    out.branch1 = std::exp2(log_branch1);
    out.branch2 = std::exp2(log_branch2);
    out.active_branch = log_branch2 < log_branch1 ? 2 : 1;
    out.value = out.active_branch == 2 ? out.branch2 : out.branch1;
    return out;
}

double liyau_functional_bound(double m1, double m2, int n) {
    require(n >= 1, "liyau_functional_bound: dimension must be >= 1");
    require_positive(m1, "liyau_functional_bound: m1 must be positive");
    require_positive(m2, "liyau_functional_bound: m2 must be positive");
    const double ratio = (n + 2.0) / n;
    return std::pow(ratio, n / (n + 2.0)) * std::pow(m2, n / (n + 2.0)) *
           std::pow(m1 * unit_ball_volume(n), 2.0 / (n + 2.0));
}

namespace {

struct GridMaxima {
    double m0 = 0.0;
    double m1 = 0.0;
    double mp = 0.0;
};

GridMaxima grid_maxima(const std::function<double(double, int)>& f, int p,
                       double length, std::size_t intervals) {
    GridMaxima m;
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double t =
            length * static_cast<double>(i) / static_cast<double>(intervals);
        m.m0 = std::max(m.m0, std::abs(f(t, 0)));
        m.m1 = std::max(m.m1, std::abs(f(t, 1)));
        m.mp = std::max(m.mp, std::abs(f(t, p)));
    }
    return m;
}

std::pair<bool, bool> dichotomy_holds(const GridMaxima& m, int p,
                                      double lambda) {
    const bool first =
        m.m1 <= std::exp2(p - 1.0) * std::pow(m.mp, 1.0 / p) *
                    std::pow(m.m0, 1.0 - 1.0 / p);
    const bool second =
        m.m1 < std::pow(4.0, p + 1.0) * std::sqrt(lambda) * m.m0;
    return {first, second};
}

}  // namespace

DichotomyResult derivative_dichotomy_check(
    const std::function<double(double, int)>& f, int p, double lambda) {
    require(static_cast<bool>(f),
            "derivative_dichotomy_check: callable required");
    require(p >= 1, "derivative_dichotomy_check: p must be >= 1");
    require_positive(lambda,
                     "derivative_dichotomy_check: lambda must be positive");
    const double length = 0.5 / std::sqrt(lambda);

    GridMaxima m = grid_maxima(f, p, length, 10'000);
    if (m.mp == 0.0) {
        throw std::domain_error(
            "derivative_dichotomy_check: order-p derivative vanishes at every "
            "sampled point");
    }
    auto [first, second] = dichotomy_holds(m, p, lambda);
    bool violation = false;
    if (!first && !second) {
        // Grid maxima only under-estimate the true suprema, so confirm an
        // apparent violation on a 10x finer grid before reporting it.
        m = grid_maxima(f, p, length, 100'000);
        std::tie(first, second) = dichotomy_holds(m, p, lambda);
        violation = !first && !second;
    }
    DichotomyResult result;
    result.first_holds = first;
    result.second_holds = second;
    result.violation = violation;
    result.m0 = m.m0;
    result.m1 = m.m1;
    result.mp = m.mp;
    return result;
}

std::int64_t rectangle_count(double face_area, double lambda, int n) {
    require(n >= 2, "rectangle_count: dimension must be >= 2");
    require_positive(face_area, "rectangle_count: face area must be positive");
    require_positive(lambda, "rectangle_count: lambda must be positive");
    const double raw =
        face_area * std::pow(lambda, 0.5 * (n - 1)) / 6.0;
    if (raw >= 9.0e18) {
        std::ostringstream msg;
        msg << "rectangle_count: count " << raw
            << " exceeds the 64-bit integer range";
        throw RangeError(msg.str());
    }
    return static_cast<std::int64_t>(std::floor(raw));
}

double admissible_lambda_threshold(double min_distance, int n) {
    require(n >= 1, "admissible_lambda_threshold: dimension must be >= 1");
    require_positive(min_distance,
                     "admissible_lambda_threshold: distance must be positive");
    return 4.0 * n / (min_distance * min_distance);
}

double density_upper_bound(double lambda, const DomainSummary& domain,
                           int p) {
    require(p >= 1, "density_upper_bound: p must be >= 1");
    require_positive(lambda, "density_upper_bound: lambda must be positive");
    const int n = domain.dimension;
    const double base = domain.volume / std::pow(kTwoPi, n);
    const double threshold = lambda0(n, domain.volume,
                                     domain.min_face_distance,
                                     domain.min_face_area);
    if (!(lambda > threshold)) return base;

    const double decay =
        std::exp2((-0.5 - static_cast<double>(n) / p) *
                  std::log2(domain.volume * lambda / alpha1(n)));
    const double bracket = 1.0 - alpha2(n) * domain.surface_area * decay /
                                     std::sqrt(domain.volume);
    if (!(bracket > 0.0)) {
        std::ostringstream msg;
        msg << "density_upper_bound: bracket " << bracket
            << " is not positive although lambda = " << lambda
            << " exceeds the activation threshold " << threshold
            << " (volume " << domain.volume << ", surface area "
            << domain.surface_area << ", p " << p << ")";
        throw ConsistencyError(msg.str());
    }
    return base * bracket;
}

double alpha2(int n) {
    return std::pow(alpha1(n), -0.5) / (81.0 * std::exp2(static_cast<double>(n)));
}

ProofConstants proof_constants(const DomainSummary& domain, double lambda) {
    require_positive(lambda, "proof_constants: lambda must be positive");
    const std::optional<int> p = choose_p(domain.dimension, domain.volume,
                                          lambda);
    if (!p) {
        std::ostringstream msg;
        msg << "proof_constants: derivative order is undefined at lambda = "
            << lambda << " (too small for the refinement to engage)";
        throw ConsistencyError(msg.str());
    }
    ProofConstants constants;
    constants.n = domain.dimension;
    constants.p = *p;
    constants.d_log2 = derivative_coefficients_log2(domain.dimension, *p);
    constants.beta_p_sq_log2 =
        beta_squared_log2(*p, domain.dimension, domain.volume, *p);
    constants.beta_p1_sq_log2 =
        beta_squared_log2(*p + 1, domain.dimension, domain.volume, *p);
    constants.alpha1 = alpha1(domain.dimension);
    constants.alpha2 = alpha2(domain.dimension);
    constants.lambda0 = lambda0(domain.dimension, domain.volume,
                                domain.min_face_distance,
                                domain.min_face_area);
    constants.epsilon = 1.0 / static_cast<double>(*p);
    return constants;
}

}  // namespace spectral
