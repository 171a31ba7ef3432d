#include "spectral/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "spectral/errors.hpp"

namespace spectral {

namespace {

constexpr double kPi = std::numbers::pi;

// Multiplicative guard band on the enumeration cutoff.  The sweep is accepted
// only once the cutoff clears the last requested eigenvalue by this factor, so
// a tie group straddling the requested prefix is never truncated by roundoff.
constexpr double kGuardBand = 1.0 + 1e-9;

// Recursively enumerates every positive-integer lattice tuple whose weighted
// square sum stays below `cutoff`, appending the eigenvalue of each tuple.
// `coeff[d]` holds pi^2 / L_d^2.
void sweep_box_lattice(const std::vector<double>& coeff, std::size_t axis,
                       double partial, double cutoff,
                       std::vector<double>& out) {
    if (axis + 1 == coeff.size()) {
        const double budget = cutoff - partial;
        if (budget < coeff[axis]) return;
        const auto m_max = static_cast<std::int64_t>(std::sqrt(budget / coeff[axis]));
        for (std::int64_t m = 1; m <= m_max; ++m) {
            const double value = partial + coeff[axis] * static_cast<double>(m * m);
            if (value <= cutoff) out.push_back(value);
        }
        return;
    }
    for (std::int64_t m = 1;; ++m) {
        const double value = partial + coeff[axis] * static_cast<double>(m * m);
        if (value > cutoff) break;
        sweep_box_lattice(coeff, axis + 1, value, cutoff, out);
    }
}

// Upper bound on the number of lattice tuples a sweep up to `cutoff` can
// visit, used to refuse absurd enumerations before allocating.
double sweep_size_estimate(const std::vector<double>& coeff, double cutoff) {
    double product = 1.0;
    for (double c : coeff) product *= std::sqrt(std::max(cutoff, 0.0) / c) + 1.0;
    return product;
}

Spectrum finish_exact(std::vector<double> values, int count,
                      SpectrumMethod method, const std::string& domain_id) {
    std::sort(values.begin(), values.end());
    Spectrum s;
    s.eigenvalues.assign(values.begin(), values.begin() + count);
    s.method = method;
    s.resolution = 0.0;
    s.domain_id = domain_id;
    // The sweep enumerated everything up to the cutoff, so the first value it
    // omits is values[count]; counting is certified strictly below it.
    s.certified_upper = values[static_cast<std::size_t>(count)];
    return s;
}

}  // namespace

Spectrum box_spectrum_exact(const std::vector<double>& lengths, int count,
                            const std::string& domain_id) {
    if (lengths.empty())
        throw ConfigError("box spectrum: side lengths must be non-empty");
    for (double len : lengths)
        if (!(len > 0.0))
            throw ConfigError("box spectrum: side lengths must be positive");
    if (count < 1) throw ConfigError("box spectrum: count must be >= 1");

    const auto n = lengths.size();
    std::vector<double> coeff(n);
    double ground = 0.0;  // eigenvalue of the all-ones tuple
    for (std::size_t d = 0; d < n; ++d) {
        coeff[d] = kPi * kPi / (lengths[d] * lengths[d]);
        ground += coeff[d];
    }

    // Initial cutoff from the smooth eigenvalue count: N(lambda) is roughly
    // B_n * prod(L) * lambda^{n/2} / (4 pi^2)^{n/2}, solved for count + 1 and
    // padded.  The sweep retries with a larger cutoff if the guess is short.
    double volume = 1.0;
    for (double len : lengths) volume *= len;
    const double bn = unit_ball_volume(static_cast<int>(n));
    double cutoff =
        4.0 * kPi * kPi *
            std::pow((count + 1.0) / (bn * volume), 2.0 / static_cast<double>(n)) +
        2.0 * ground;

    std::vector<double> values;
    for (int attempt = 0; attempt < 200; ++attempt) {
        if (sweep_size_estimate(coeff, cutoff) > 5e8)
            throw RangeError("box spectrum: lattice sweep too large for requested count");
        values.clear();
        sweep_box_lattice(coeff, 0, 0.0, cutoff, values);
        if (values.size() > static_cast<std::size_t>(count)) {
            std::nth_element(values.begin(), values.begin() + count, values.end());
            if (values[static_cast<std::size_t>(count)] * kGuardBand <= cutoff)
                return finish_exact(std::move(values), count,
                                    SpectrumMethod::exact_box, domain_id);
        }
        cutoff *= 1.5;
    }
    throw ConvergenceError("box spectrum: enumeration cutoff failed to stabilize");
}

Spectrum equilateral_triangle_spectrum_exact(double side, int count,
                                             const std::string& domain_id) {
    if (!(side > 0.0))
        throw ConfigError("triangle spectrum: side length must be positive");
    if (count < 1) throw ConfigError("triangle spectrum: count must be >= 1");

    const double scale = 16.0 * kPi * kPi / (9.0 * side * side);

    // m^2 + m n + n^2 >= 3 max(m, n)^2 / ... more simply >= m^2, so the sweep
    // over ordered pairs below `cutoff` is finite with m, n <= sqrt(cutoff).
    double cutoff = scale * (3.0 + 3.0 * static_cast<double>(count));
    std::vector<double> values;
    for (int attempt = 0; attempt < 200; ++attempt) {
        const double q_max = cutoff / scale;
        if ((std::sqrt(q_max) + 1.0) * (std::sqrt(q_max) + 1.0) > 5e8)
            throw RangeError("triangle spectrum: lattice sweep too large for requested count");
        values.clear();
        const auto m_max = static_cast<std::int64_t>(std::sqrt(q_max));
        for (std::int64_t m = 1; m <= m_max; ++m) {
            for (std::int64_t n = 1;; ++n) {
                const double value =
                    scale * static_cast<double>(m * m + m * n + n * n);
                if (value > cutoff) break;
                values.push_back(value);
            }
        }
        if (values.size() > static_cast<std::size_t>(count)) {
            std::nth_element(values.begin(), values.begin() + count, values.end());
            if (values[static_cast<std::size_t>(count)] * kGuardBand <= cutoff)
                return finish_exact(std::move(values), count,
                                    SpectrumMethod::exact_triangle, domain_id);
        }
        cutoff *= 1.5;
    }
    throw ConvergenceError("triangle spectrum: enumeration cutoff failed to stabilize");
}

int counting_function(const Spectrum& spectrum, double lambda) {
    if (!(lambda >= 0.0))
        throw std::domain_error("counting function: lambda must be >= 0");
    if (lambda >= spectrum.certified_upper)
        throw RangeError(
            "counting function: lambda reaches beyond the certified range of "
            "this spectrum prefix");
    const auto& ev = spectrum.eigenvalues;
    return static_cast<int>(std::upper_bound(ev.begin(), ev.end(), lambda) -
                            ev.begin());
}

double eigenvalue_average(const Spectrum& spectrum, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > spectrum.eigenvalues.size())
        throw RangeError("eigenvalue average: k outside the computed prefix");
    long double sum = 0.0L;  // extended precision keeps long prefixes exact enough
    for (int i = 0; i < k; ++i) sum += spectrum.eigenvalues[static_cast<std::size_t>(i)];
    return static_cast<double>(sum / k);
}

Spectrum richardson_extrapolate(const Spectrum& coarse, const Spectrum& fine,
                                int order) {
    if (order < 1)
        throw ConfigError("richardson: order must be >= 1");
    if (coarse.domain_id != fine.domain_id)
        throw ConfigError("richardson: spectra describe different domains");
    if (coarse.eigenvalues.size() != fine.eigenvalues.size())
        throw ConfigError("richardson: spectra hold different eigenvalue counts");
    if (!(coarse.resolution > 0.0) || !(fine.resolution > 0.0))
        throw ConfigError("richardson: both spectra must come from grids");
    if (std::abs(coarse.resolution - 2.0 * fine.resolution) >
        1e-9 * coarse.resolution)
        throw ConfigError("richardson: grid spacings must have a 2:1 ratio");

    const double weight = std::pow(2.0, order);
    Spectrum out;
    out.eigenvalues.resize(fine.eigenvalues.size());
    for (std::size_t i = 0; i < fine.eigenvalues.size(); ++i)
        out.eigenvalues[i] =
            (weight * fine.eigenvalues[i] - coarse.eigenvalues[i]) / (weight - 1.0);
    // Extrapolation can reorder near-degenerate pairs by roundoff; restore the
    // sorted invariant.
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    out.method = SpectrumMethod::finite_difference;
    out.resolution = fine.resolution;
    out.domain_id = fine.domain_id;
    out.certified_upper =
        out.eigenvalues.empty() ? 0.0 : out.eigenvalues.back();
    return out;
}

}  // namespace spectral
