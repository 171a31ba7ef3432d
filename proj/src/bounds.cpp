#include "spectral/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "spectral/errors.hpp"

namespace spectral {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSlack = 1e-9;  // relative slack for violation checks

void require_k(int k) {
    if (k < 1) throw std::domain_error("bounds: k must be >= 1");
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) {
        std::ostringstream msg;
        msg << "bounds: " << what << " must be strictly positive";
        throw std::domain_error(msg.str());
    }
}

}  // namespace

DomainSummary summarize(const Polytope& polytope,
                        const FaceDecomposition& decomposition) {
    DomainSummary d;
    d.dimension = polytope.dimension;
    d.volume = volume(polytope);
    d.surface_area = surface_area(polytope);
    d.moment_of_inertia = moment_of_inertia(polytope);
    d.min_face_distance = decomposition.min_distance();
    d.min_face_area = decomposition.min_face_area();
    d.ball_volume = unit_ball_volume(polytope.dimension);
    if (!(d.volume > 0.0) || !(d.surface_area > 0.0) ||
        !(d.moment_of_inertia > 0.0) || !(d.min_face_distance > 0.0) ||
        !(d.min_face_area > 0.0))
        throw ConsistencyError(
            "domain summary: a derived geometric quantity is not strictly "
            "positive");
    return d;
}

DomainSummary summarize(const Polytope& polytope, double fraction) {
    return summarize(polytope, face_decomposition(polytope, fraction));
}

double weyl_kth(int k, int n, double volume) {
    require_k(k);
    require_positive(volume, "volume");
    return 4.0 * kPi * kPi *
           std::pow(static_cast<double>(k) / (unit_ball_volume(n) * volume),
                    2.0 / n);
}

double weyl_average(int k, int n, double volume) {
    return static_cast<double>(n) / (n + 2) * weyl_kth(k, n, volume);
}

double polya_bound(int k, int n, double volume) {
    return weyl_kth(k, n, volume);
}

double liyau_average_bound(int k, int n, double volume) {
    return weyl_average(k, n, volume);
}

double liyau_kth_bound(int k, int n, double volume) {
    return weyl_average(k, n, volume);
}

double melas_bound(int k, int n, double volume, double moment_of_inertia,
                   double melas_constant) {
    if (!(melas_constant > 0.0))
        throw ConfigError("melas bound: the dimensional constant must be > 0");
    require_positive(moment_of_inertia, "moment of inertia");
    return liyau_average_bound(k, n, volume) +
           melas_constant * volume / moment_of_inertia;
}

double alpha1(int n) {
    if (n < 2) throw std::domain_error("alpha1: dimension must be >= 2");
    return std::sqrt(3.0 / unit_ball_volume(n) *
                     std::pow(4.0 * n * kPi * kPi / (n + 2), n / 2.0));
}

double lambda0(int n, double volume, double min_face_distance,
               double min_face_area) {
    require_positive(volume, "volume");
    require_positive(min_face_distance, "min face distance");
    require_positive(min_face_area, "min face area");
    const double a1 = alpha1(n);
    const double ratio = a1 / volume;
    const double entries[4] = {
        4.0 * n / (min_face_distance * min_face_distance),
        std::pow(ratio, 2.0 / n),
        std::exp2(2.0 * (n + 12) / n) * std::pow(ratio, 2.0 * (n - 1) / n),
        std::pow(12.0 / min_face_area, 2.0 / (n - 1)),
    };
    return *std::max_element(entries, entries + 4);
}

std::optional<double> epsilon_k(int n, double volume, double lambda_k) {
    require_positive(lambda_k, "lambda_k");
    const double a1 = alpha1(n);
    // log2((V/alpha_1)^{n-1} lambda^{n/2}), assembled in log space
    const double log_arg =
        (n - 1) * std::log2(volume / a1) + 0.5 * n * std::log2(lambda_k);
    if (!(log_arg > 0.0)) return std::nullopt;
    const double t = std::floor(std::sqrt(log_arg / (n + 12)));
    if (t < 1.0) return std::nullopt;
    return 1.0 / t;
}

double theorem1_bound(int k, double lambda_k, const DomainSummary& domain) {
    require_k(k);
    require_positive(lambda_k, "lambda_k");
    const int n = domain.dimension;
    const double base = weyl_average(k, n, domain.volume);

    const double threshold = lambda0(n, domain.volume, domain.min_face_distance,
                                     domain.min_face_area);
    if (!(lambda_k > threshold)) return base;  // correction off at the threshold

    const std::optional<double> eps = epsilon_k(n, domain.volume, lambda_k);
    if (!eps) {
        std::ostringstream msg;
        msg << "theorem1 bound: correction active (lambda_k = " << lambda_k
            << " > lambda0 = " << threshold
            << ") yet epsilon is undefined; this contradicts the activation "
               "threshold algebra";
        throw ConsistencyError(msg.str());
    }

    const double a1 = alpha1(n);
    const double constant = std::exp2(3.0 - n) * kPi * kPi /
                            (81.0 * (n + 2) *
                             std::pow(unit_ball_volume(n), 2.0 / n));
    // (V lambda_k / alpha_1)^{-n eps}, computed in log space: the base can be
    // astronomically large while the result underflows gracefully.
    const double decay =
        std::exp2(-static_cast<double>(n) * *eps *
                  std::log2(domain.volume * lambda_k / a1));
    const double second = constant *
                          (domain.surface_area /
                           std::pow(domain.volume, 1.0 + 2.0 / n)) *
                          decay * std::pow(static_cast<double>(k), 2.0 / n) /
                          std::sqrt(lambda_k);
    return base + second;
}

std::optional<double> corollary1_bound(int k, const DomainSummary& domain) {
    require_k(k);
    const int n = domain.dimension;
    const double a1 = alpha1(n);
    // The spectrum-free epsilon replaces lambda_k by the Weyl expression:
    // log2((V/alpha_1)^{n-1} (4 n pi^2/(n+2))^{n/2} k / (B_n V)).
    const double log_arg =
        (n - 1) * std::log2(domain.volume / a1) +
        0.5 * n * std::log2(4.0 * n * kPi * kPi / (n + 2)) +
        std::log2(static_cast<double>(k)) -
        std::log2(domain.ball_volume * domain.volume);
    if (!(log_arg > 0.0)) return std::nullopt;
    const double t = std::floor(std::sqrt(log_arg / (n + 12)));
    if (t < 1.0) return std::nullopt;
    const double eps = 1.0 / t;

    const double constant =
        kPi / (81.0 * std::exp2(n - 1.0) * (n + 2) *
               std::pow(domain.ball_volume, 1.0 / n));
    const double second =
        constant *
        (domain.surface_area / std::pow(domain.volume, 1.0 + 1.0 / n)) *
        std::pow(static_cast<double>(k), 1.0 / n - 2.0 * eps);
    return weyl_average(k, n, domain.volume) + second;
}

namespace {

// Fills reports[lo..hi) given precomputed prefix averages.
void verify_range(const Spectrum& spectrum, const DomainSummary& domain,
                  const VerifyConfig& config, const std::vector<double>& averages,
                  double threshold, int lo, int hi,
                  std::vector<BoundReport>* reports) {
    const int n = domain.dimension;
    for (int k = lo + 1; k <= hi; ++k) {
        BoundReport r;
        r.k = k;
        r.lambda_k = spectrum.eigenvalues[static_cast<std::size_t>(k - 1)];
        r.avg_k = averages[static_cast<std::size_t>(k - 1)];
        r.weyl_kth = weyl_kth(k, n, domain.volume);
        r.weyl_avg = weyl_average(k, n, domain.volume);
        r.polya = polya_bound(k, n, domain.volume);
        r.liyau_avg = liyau_average_bound(k, n, domain.volume);
        r.liyau_kth = liyau_kth_bound(k, n, domain.volume);
        r.melas = melas_bound(k, n, domain.volume, domain.moment_of_inertia,
                              config.melas_constant);
        r.theorem1 = theorem1_bound(k, r.lambda_k, domain);
        r.corollary1 = corollary1_bound(k, domain);
        r.theta = r.lambda_k > threshold ? 1 : 0;
        if (r.theta == 1) r.epsilon = epsilon_k(n, domain.volume, r.lambda_k);

        const auto violated = [](double bound, double measured) {
            return bound > measured * (1.0 + kSlack);
        };
        if (violated(r.polya, r.lambda_k)) r.violations.push_back("polya");
        if (violated(r.liyau_kth, r.lambda_k)) r.violations.push_back("liyau_kth");
        if (violated(r.liyau_avg, r.avg_k)) r.violations.push_back("liyau_avg");
        if (violated(r.melas, r.avg_k)) r.violations.push_back("melas");
        if (violated(r.theorem1, r.avg_k)) r.violations.push_back("theorem1");
        if (r.corollary1 && violated(*r.corollary1, r.avg_k))
            r.violations.push_back("corollary1");
        (*reports)[static_cast<std::size_t>(k - 1)] = std::move(r);
    }
}

}  // namespace

std::vector<BoundReport> verify(const Spectrum& spectrum,
                                const DomainSummary& domain, int k_max,
                                const VerifyConfig& config) {
    if (k_max < 1 ||
        static_cast<std::size_t>(k_max) > spectrum.eigenvalues.size())
        throw RangeError("verify: k_max outside the computed spectrum prefix");
    if (!(config.melas_constant > 0.0))
        throw ConfigError("verify: melas constant must be > 0");

    // Prefix averages once, serially: the k sweep then reads them in place.
    std::vector<double> averages(static_cast<std::size_t>(k_max));
    long double running = 0.0L;
    for (int k = 1; k <= k_max; ++k) {
        running += spectrum.eigenvalues[static_cast<std::size_t>(k - 1)];
        averages[static_cast<std::size_t>(k - 1)] =
            static_cast<double>(running / k);
    }

    const double threshold = lambda0(domain.dimension, domain.volume,
                                     domain.min_face_distance,
                                     domain.min_face_area);

    std::vector<BoundReport> reports(static_cast<std::size_t>(k_max));
    const int threads = std::max(1, config.threads);
    if (threads == 1 || k_max < 2048) {
        verify_range(spectrum, domain, config, averages, threshold, 0, k_max,
                     &reports);
        return reports;
    }

    // Deterministic parallel sweep: fixed contiguous chunks, each k writes
    // only its own slot, so the merged result is independent of scheduling.
    std::vector<std::thread> pool;
    const int chunk = (k_max + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(k_max, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(verify_range, std::cref(spectrum), std::cref(domain),
                          std::cref(config), std::cref(averages), threshold,
                          lo, hi, &reports);
    }
    for (std::thread& worker : pool) worker.join();
    return reports;
}

}  // namespace spectral
