#include "spectral/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "spectral/bounds.hpp"
#include "spectral/errors.hpp"
#include "spectral/geometry.hpp"
#include "spectral/proofkit.hpp"
#include "spectral/spectra.hpp"

namespace spectral {
namespace {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Verification campaign
// ---------------------------------------------------------------------------

// Side length when the polytope is an equilateral triangle (the only general
// polytope with a closed-form spectrum here); nullopt otherwise.
std::optional<double> equilateral_side(const Polytope& P) {
    if (P.dimension != 2 || P.vertices.size() != 3 || P.faces.size() != 3)
        return std::nullopt;
    double lengths[3];
    for (int i = 0; i < 3; ++i) {
        const auto& edge = P.faces[static_cast<std::size_t>(i)];
        if (edge.size() != 2) return std::nullopt;
        const auto& a = P.vertices[static_cast<std::size_t>(edge[0])];
        const auto& b = P.vertices[static_cast<std::size_t>(edge[1])];
        lengths[i] = std::hypot(b[0] - a[0], b[1] - a[1]);
    }
    const double lo = std::min({lengths[0], lengths[1], lengths[2]});
    const double hi = std::max({lengths[0], lengths[1], lengths[2]});
    if (hi - lo > 1e-9 * hi) return std::nullopt;
    return (lengths[0] + lengths[1] + lengths[2]) / 3.0;
}

Spectrum exact_spectrum(const Polytope& P, int count) {
    if (P.kind == PolytopeKind::box)
        return box_spectrum_exact(P.lengths, count, P.id);
    if (const auto side = equilateral_side(P))
        return equilateral_triangle_spectrum_exact(*side, count, P.id);
    throw ConfigError("domain '" + P.id +
                      "' has no exact spectrum oracle (only boxes and "
                      "equilateral triangles do); use the finite-difference "
                      "method instead");
}

// The plain stencil is second-order only when every boundary face lies on a
// grid plane; otherwise the boundary-fitted variant is required.
bool faces_axis_aligned(const Polytope& P) {
    if (P.kind == PolytopeKind::box) return true;
    if (P.dimension == 2) {
        for (const auto& edge : P.faces) {
            const auto& a = P.vertices[static_cast<std::size_t>(edge[0])];
            const auto& b = P.vertices[static_cast<std::size_t>(edge[1])];
            const double dx = std::abs(b[0] - a[0]);
            const double dy = std::abs(b[1] - a[1]);
            if (std::min(dx, dy) > 1e-12 * std::max(dx, dy)) return false;
        }
        return true;
    }
    for (const auto& face : P.faces) {
        // Newell normal of the face ring.
        double n[3] = {0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < face.size(); ++i) {
            const auto& a = P.vertices[static_cast<std::size_t>(face[i])];
            const auto& b =
                P.vertices[static_cast<std::size_t>(face[(i + 1) % face.size()])];
            n[0] += (a[1] - b[1]) * (a[2] + b[2]);
            n[1] += (a[2] - b[2]) * (a[0] + b[0]);
            n[2] += (a[0] - b[0]) * (a[1] + b[1]);
        }
        const double mx = std::max({std::abs(n[0]), std::abs(n[1]), std::abs(n[2])});
        int significant = 0;
        for (double c : n)
            if (std::abs(c) > 1e-12 * mx) ++significant;
        if (significant != 1) return false;
    }
    return true;
}

void write_csv(const std::string& path, const std::vector<BoundReport>& reports) {
    const std::filesystem::path target(path);
    if (target.has_parent_path())
        std::filesystem::create_directories(target.parent_path());
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open CSV output file: " + path);
    out << "k,lambda_k,avg_k,weyl_kth,weyl_avg,polya,liyau_avg,liyau_kth,"
           "melas,theorem1,corollary1,theta,epsilon,violations\n";
    for (const auto& r : reports) {
        out << r.k << ',' << format_g17(r.lambda_k) << ',' << format_g17(r.avg_k)
            << ',' << format_g17(r.weyl_kth) << ',' << format_g17(r.weyl_avg)
            << ',' << format_g17(r.polya) << ',' << format_g17(r.liyau_avg)
            << ',' << format_g17(r.liyau_kth) << ',' << format_g17(r.melas)
            << ',' << format_g17(r.theorem1) << ','
            << (r.corollary1 ? format_g17(*r.corollary1) : std::string("na"))
            << ',' << r.theta << ','
            << (r.epsilon ? format_g17(*r.epsilon) : std::string("na")) << ',';
        for (std::size_t i = 0; i < r.violations.size(); ++i) {
            if (i) out << ';';
            out << r.violations[i];
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw ConfigError("failed while writing CSV: " + path);
}

DomainVerifyResult process_domain(const CampaignConfig& cfg,
                                  const std::string& file,
                                  const std::string& csv_path,
                                  int verify_threads) {
    Polytope poly = load_polytope(file);
    if (cfg.tiling_override) poly.tiling = *cfg.tiling_override;
    const DomainSummary domain = summarize(poly, cfg.fraction);

    Spectrum spectrum;
    std::string source;
    if (cfg.method == "exact") {
        spectrum = exact_spectrum(poly, cfg.k_max);
        source = spectrum.method == SpectrumMethod::exact_box
                     ? "exact box oracle"
                     : "exact triangle oracle";
    } else {
        const StencilKind stencil = faces_axis_aligned(poly)
                                        ? StencilKind::standard
                                        : StencilKind::shortley_weller;
        const GridOperator op = fd_assemble(poly, cfg.h, stencil);
        spectrum = fd_spectrum(op, cfg.k_max, cfg.seed);
        source = "finite differences h=" + format_g17(cfg.h) +
                 (stencil == StencilKind::standard ? ", plain stencil"
                                                   : ", boundary-fitted stencil");
    }
    if (cfg.halve_first_eigenvalue && !spectrum.eigenvalues.empty())
        spectrum.eigenvalues.front() *= 0.5;

    VerifyConfig vc;
    vc.melas_constant = cfg.melas_constant;
    vc.threads = verify_threads;
    std::vector<BoundReport> reports = verify(spectrum, domain, cfg.k_max, vc);

    DomainVerifyResult res;
    res.domain_id = poly.id;
    res.spectrum_source = source;
    res.tiling = poly.tiling;
    res.lambda0 = lambda0(domain.dimension, domain.volume,
                          domain.min_face_distance, domain.min_face_area);
    for (const auto& r : reports) {
        if (r.theta == 1) {
            res.first_active_k = r.k;
            break;
        }
    }
    for (const auto& r : reports) {
        res.violation_count += static_cast<int>(r.violations.size());
        for (const auto& name : r.violations)
            if (name != "polya" || poly.tiling) ++res.flagged_violation_count;
    }
    res.csv_path = csv_path;
    write_csv(csv_path, reports);
    res.reports = std::move(reports);
    return res;
}

void print_domain_summary(std::ostream& out, const DomainVerifyResult& r) {
    out << "domain: " << r.domain_id << '\n';
    out << "  spectrum: " << r.spectrum_source << " (" << r.reports.size()
        << " eigenvalues)\n";
    out << "  lambda0: " << format_g17(r.lambda0) << '\n';
    out << "  polya status: " << (r.tiling ? "theorem" : "conjecture") << '\n';
    if (r.first_active_k)
        out << "  first k with theta=1: " << *r.first_active_k << '\n';
    else
        out << "  first k with theta=1: never within k_max\n";
    out << "  violations: " << r.violation_count;
    if (r.violation_count > r.flagged_violation_count)
        out << " (" << r.violation_count - r.flagged_violation_count
            << " conjectural, excluded from the exit code)";
    out << '\n';
    out << "  csv: " << r.csv_path << '\n';
}

// ---------------------------------------------------------------------------
// Proof-machinery audit
// ---------------------------------------------------------------------------

// Exact integer version of the derivative-coefficient recursion, used to
// cross-check the log-space evaluation.
std::vector<mpz_class> exact_coefficients(int n, int p) {
    const mpz_class quartic = mpz_class(1936) * n * n * mpz_class(p) * p * p * p;
    const mpz_class quadratic = mpz_class(100) * n * mpz_class(p) * p;
    std::vector<mpz_class> d(static_cast<std::size_t>(p) + 2);
    d[0] = 1;
    d[1] = 3 * (1 + quartic + quadratic);
    for (int q = 2; q <= p + 1; ++q)
        d[static_cast<std::size_t>(q)] =
            3 * (1 + quartic) * d[static_cast<std::size_t>(q - 2)] +
            3 * quadratic * d[static_cast<std::size_t>(q - 1)];
    return d;
}

double log2_mpz(const mpz_class& v) {
    signed long exponent = 0;
    const double mantissa = mpz_get_d_2exp(&exponent, v.get_mpz_t());
    return std::log2(mantissa) + static_cast<double>(exponent);
}

struct AuditState {
    std::ostream& out;
    bool failed = false;

    void pass(const std::string& check, const std::string& detail) {
        out << "  " << check << ": ok (" << detail << ")\n";
        out.flush();
    }
    void skip(const std::string& check, const std::string& why) {
        out << "  " << check << ": skipped (" << why << ")\n";
        out.flush();
    }
    void fail(const std::string& check, const std::string& where) {
        failed = true;
        out << "  " << check << ": FAILED at " << where << '\n';
        out.flush();
    }
};

// Polynomial with coefficients c[0..6]; evaluates the requested derivative.
double poly_derivative(const std::array<double, 7>& c, double t, int order) {
    double acc = 0.0;
    for (int j = 6; j >= order; --j) {
        double weight = 1.0;
        for (int m = j; m > j - order; --m) weight *= m;
        acc = acc * t + weight * c[static_cast<std::size_t>(j)];
    }
    return acc;
}

void audit_growth_cap(AuditState& st, const AuditConfig& cfg) {
    const std::string check = "derivative-coefficient growth cap";
    int pairs = 0;
    for (int n = cfg.n_min; n <= cfg.n_max; ++n)
        for (int p = cfg.p_min; p <= cfg.p_max; ++p) {
            ++pairs;
            if (!derivative_coefficient_bound_holds(n, p)) {
                std::ostringstream where;
                where << "n=" << n << " p=" << p;
                st.fail(check, where.str());
                return;
            }
        }
    std::ostringstream detail;
    detail << pairs << " (n, p) pairs";
    st.pass(check, detail.str());
}

void audit_integer_cross_check(AuditState& st, const AuditConfig& cfg) {
    const std::string check = "integer cross-check of the log-space recursion";
    const int n_hi = std::min(cfg.n_max, 4);
    const int p_hi = std::min(cfg.p_max, 10);
    if (cfg.n_min > n_hi || cfg.p_min > p_hi) {
        st.skip(check, "ranges do not intersect n <= 4, p <= 10");
        return;
    }
    int pairs = 0;
    for (int n = cfg.n_min; n <= n_hi; ++n)
        for (int p = cfg.p_min; p <= p_hi; ++p) {
            ++pairs;
            const auto exact = exact_coefficients(n, p);
            const auto logs = derivative_coefficients_log2(n, p);
            for (std::size_t q = 0; q < exact.size(); ++q) {
                const double reference = log2_mpz(exact[q]);
                const double tol = 1e-12 * std::max(1.0, std::abs(reference));
                if (std::abs(logs[q] - reference) > tol) {
                    std::ostringstream where;
                    where << "n=" << n << " p=" << p << " q=" << q
                          << " (log2 " << format_g17(logs[q]) << " vs exact "
                          << format_g17(reference) << ")";
                    st.fail(check, where.str());
                    return;
                }
            }
        }
    std::ostringstream detail;
    detail << pairs << " (n, p) pairs, every coefficient within 1e-12";
    st.pass(check, detail.str());
}

void audit_profile_caps(AuditState& st, const AuditConfig& cfg,
                        std::mt19937_64& rng) {
    const std::string check = "profile derivative caps";
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Taper piece: |g| <= 1, |g'| < 5/2, |g''| < 11.  (The value can round a
    // few ulp below zero near the flat endpoint; the cap is on |g|.)
    for (int i = 0; i < cfg.sample_count; ++i) {
        const double t = unit(rng);
        const Jet2 g = taper_jet(t);
        if (!(std::abs(g.value) <= 1.0 && std::abs(g.first) < 2.5 &&
              std::abs(g.second) < 11.0)) {
            st.fail(check, "taper t=" + format_g17(t));
            return;
        }
    }

    const int p_lo = std::max(cfg.p_min, 1);
    const int p_hi = std::min(cfg.p_max, 5);
    const int n_lo = std::max(cfg.n_min, 2);
    const int n_hi = std::min(cfg.n_max, 4);
    if (p_lo > p_hi) {
        st.skip(check, "p range does not intersect [1, 5]");
        return;
    }

    // Plateau profile: |v| <= 1, |v'| < 5p, |v''| < 44p^2 on the whole line.
    std::uniform_real_distribution<double> wide(-1.2, 1.2);
    for (int p = p_lo; p <= p_hi; ++p)
        for (int q = 0; q < p; ++q)
            for (int i = 0; i < cfg.sample_count; ++i) {
                const double t = wide(rng);
                const Jet2 v = plateau_jet(q, p, t);
                if (!(std::abs(v.value) <= 1.0 && std::abs(v.first) < 5.0 * p &&
                      std::abs(v.second) < 44.0 * p * p)) {
                    std::ostringstream where;
                    where << "plateau q=" << q << " p=" << p
                          << " t=" << format_g17(t);
                    st.fail(check, where.str());
                    return;
                }
            }

    if (n_lo > n_hi) {
        st.skip(check, "n range does not intersect [2, 4]");
        return;
    }

    // Separable bump: |W| <= 1, |grad W| < 5 sqrt(n lambda) p,
    // |Delta W| < 44 n lambda p^2; identically one on the inner sub-box.
    const double lambdas[] = {1.0, 100.0, 1e6};
    int sets = 0;
    for (int n = n_lo; n <= n_hi; ++n)
        for (int p = p_lo; p <= p_hi; ++p)
            for (int q = 0; q < p; ++q)
                for (const double lambda : lambdas) {
                    ++sets;
                    const double support =
                        (2.0 * p - q + 1.0) / (2.0 * p) / std::sqrt(lambda);
                    const double plateau =
                        (2.0 * p - q - 1.0) / (2.0 * p) / std::sqrt(lambda);
                    const double grad_cap =
                        5.0 * std::sqrt(static_cast<double>(n)) *
                        std::sqrt(lambda) * p;
                    const double lap_cap = 44.0 * n * lambda * p * p;
                    std::uniform_real_distribution<double> box(-support, support);
                    std::uniform_real_distribution<double> inner(-plateau, plateau);
                    std::vector<double> x(static_cast<std::size_t>(n));
                    for (int i = 0; i < cfg.sample_count; ++i) {
                        for (auto& c : x) c = box(rng);
                        const BumpSample w = separable_bump(q, p, lambda, x);
                        if (!(std::abs(w.value) <= 1.0 &&
                              w.gradient_norm < grad_cap &&
                              std::abs(w.laplacian) < lap_cap)) {
                            std::ostringstream where;
                            where << "bump n=" << n << " p=" << p << " q=" << q
                                  << " lambda=" << format_g17(lambda);
                            st.fail(check, where.str());
                            return;
                        }
                    }
                    for (int i = 0; i < 100; ++i) {
                        for (auto& c : x) c = inner(rng);
                        const BumpSample w = separable_bump(q, p, lambda, x);
                        if (w.value != 1.0 || w.gradient_norm != 0.0 ||
                            w.laplacian != 0.0) {
                            std::ostringstream where;
                            where << "bump plateau n=" << n << " p=" << p
                                  << " q=" << q
                                  << " lambda=" << format_g17(lambda);
                            st.fail(check, where.str());
                            return;
                        }
                    }
                }
    std::ostringstream detail;
    detail << sets << " bump parameter sets, " << cfg.sample_count
           << " samples each";
    st.pass(check, detail.str());
}

void audit_functional_equality(AuditState& st, const AuditConfig& cfg) {
    const std::string check = "functional bound equality on ball densities";
    const int n_lo = std::max(cfg.n_min, 2);
    const int n_hi = std::min(cfg.n_max, 4);
    if (n_lo > n_hi) {
        st.skip(check, "n range does not intersect [2, 4]");
        return;
    }
    int cases = 0;
    for (int n = n_lo; n <= n_hi; ++n)
        for (const double radius : {0.1, 1.0, 10.0})
            for (const double height : {0.5, 2.0}) {
                ++cases;
                const double bn = unit_ball_volume(n);
                const double m2 = height * bn * std::pow(radius, n + 2) * n /
                                  (n + 2.0);
                const double expected = height * bn * std::pow(radius, n);
                const double got = liyau_functional_bound(height, m2, n);
                if (std::abs(got - expected) > 1e-9 * expected) {
                    std::ostringstream where;
                    where << "n=" << n << " R=" << format_g17(radius)
                          << " height=" << format_g17(height);
                    st.fail(check, where.str());
                    return;
                }
            }
    std::ostringstream detail;
    detail << cases << " (n, radius, height) cases within 1e-9";
    st.pass(check, detail.str());
}

void audit_dichotomy(AuditState& st, const AuditConfig& cfg,
                     std::mt19937_64& rng) {
    (void)cfg;
    const std::string check = "derivative dichotomy";
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_real_distribution<double> log_lambda(std::log(0.5),
                                                      std::log(1e4));
    for (int trial = 0; trial < 1000; ++trial) {
        const int p = 2 + trial % 3;
        std::array<double, 7> c{};
        for (auto& v : c) v = coeff(rng);
        if (std::abs(c[static_cast<std::size_t>(p)]) < 0.2)
            c[static_cast<std::size_t>(p)] =
                std::copysign(0.2, c[static_cast<std::size_t>(p)]);
        const double lambda = std::exp(log_lambda(rng));
        const auto f = [&c](double t, int order) {
            return poly_derivative(c, t, order);
        };
        const DichotomyResult r = derivative_dichotomy_check(f, p, lambda);
        if (r.violation) {
            std::ostringstream where;
            where << "polynomial trial " << trial << " p=" << p
                  << " lambda=" << format_g17(lambda);
            st.fail(check, where.str());
            return;
        }
    }
    std::uniform_real_distribution<double> log_omega(std::log(0.1),
                                                     std::log(60.0));
    std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
    std::uniform_real_distribution<double> wave_lambda(std::log(1.0),
                                                       std::log(1e4));
    for (int trial = 0; trial < 100; ++trial) {
        const int p = 2 + trial % 2;
        const double omega = std::exp(log_omega(rng));
        const double shift = phase(rng);
        const double lambda = std::exp(wave_lambda(rng));
        const auto f = [omega, shift](double t, int order) {
            return std::pow(omega, order) *
                   std::sin(omega * t + shift +
                            order * 1.5707963267948966);
        };
        const DichotomyResult r = derivative_dichotomy_check(f, p, lambda);
        if (r.violation) {
            std::ostringstream where;
            where << "wave trial " << trial << " p=" << p
                  << " omega=" << format_g17(omega)
                  << " lambda=" << format_g17(lambda);
            st.fail(check, where.str());
            return;
        }
    }
    st.pass(check, "1000 polynomials, 100 waves");
}

void audit_reconstruction(AuditState& st, const AuditConfig& cfg,
                          std::mt19937_64& rng) {
    const std::string check = "sharpened-average reconstruction";
    struct Case {
        std::vector<double> lengths;
        std::string id;
        int count;
    };
    const Case cases[] = {
        {{1.0, 1.0}, "unit_square", 20000},
        {{1.0, 2.0, 3.0}, "box123", 9000},
    };
    int total = 0;
    for (const auto& c : cases) {
        const Polytope poly = make_box(c.lengths, c.id);
        const DomainSummary domain = summarize(poly);
        const Spectrum spectrum = box_spectrum_exact(c.lengths, c.count, c.id);
        const int n = domain.dimension;
        const double threshold =
            lambda0(n, domain.volume, domain.min_face_distance,
                    domain.min_face_area);
        const int first_active = counting_function(spectrum, threshold) + 1;
        if (first_active > c.count) {
            st.fail(check, "domain " + c.id +
                               " has no active eigenvalues in the prefix");
            return;
        }
        std::uniform_int_distribution<int> pick(first_active, c.count);
        const double bn = domain.ball_volume;
        for (int trial = 0; trial < 50; ++trial) {
            ++total;
            const int k = pick(rng);
            const double lam =
                spectrum.eigenvalues[static_cast<std::size_t>(k - 1)];
            const auto p = choose_p(n, domain.volume, lam);
            if (!p) {
                std::ostringstream where;
                where << c.id << " k=" << k
                      << " (derivative order undefined above the threshold)";
                st.fail(check, where.str());
                return;
            }
            const double cap = density_upper_bound(lam, domain, *p);
            const double flat =
                domain.volume / std::pow(6.283185307179586, n);
            const double deficit = 1.0 - cap / flat;
            const double reassembled =
                weyl_average(k, n, domain.volume) *
                (1.0 + (2.0 / n) * deficit);
            const double direct = theorem1_bound(k, lam, domain);
            if (std::abs(reassembled - direct) > 1e-9 * direct) {
                std::ostringstream where;
                where << c.id << " k=" << k << " (reassembled "
                      << format_g17(reassembled) << " vs direct "
                      << format_g17(direct) << ")";
                st.fail(check, where.str());
                return;
            }
            // The same density cap must also recover k through the sharp
            // functional bound, and dominate the direct average bound.
            const double functional =
                (n / (n + 2.0)) * std::pow(bn, -2.0 / n) *
                std::pow(static_cast<double>(k), 2.0 / n) *
                std::pow(cap, -2.0 / n);
            const double recovered =
                liyau_functional_bound(cap, k * functional, n);
            if (functional < direct * (1.0 - 1e-12) ||
                std::abs(recovered - k) > 1e-12 * k) {
                std::ostringstream where;
                where << c.id << " k=" << k << " (functional route "
                      << format_g17(functional) << ", recovered k "
                      << format_g17(recovered) << ")";
                st.fail(check, where.str());
                return;
            }
        }
    }
    (void)cfg;
    std::ostringstream detail;
    detail << total << " (domain, k) cases within 1e-9";
    st.pass(check, detail.str());
}

// ---------------------------------------------------------------------------
// Asymptotics
// ---------------------------------------------------------------------------

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit least_squares(const std::vector<std::pair<double, double>>& pts) {
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += static_cast<long double>(x) * x;
        sxy += static_cast<long double>(x) * y;
    }
    const long double count = static_cast<long double>(pts.size());
    const long double denom = count * sxx - sx * sx;
    LineFit fit;
    fit.slope = static_cast<double>((count * sxy - sx * sy) / denom);
    fit.intercept = static_cast<double>((sy - fit.slope * sx) / count);
    return fit;
}

}  // namespace

VerifyOutcome run_verify(const CampaignConfig& config, std::ostream& out) {
    if (config.domain_files.empty())
        throw ConfigError("verify: at least one domain file is required");
    if (config.method != "exact" && config.method != "fd")
        throw ConfigError("verify: method must be 'exact' or 'fd', got '" +
                          config.method + "'");
    if (config.method == "fd" && !(config.h > 0.0))
        throw ConfigError("verify: the finite-difference method needs h > 0");
    if (config.k_max < 1) throw ConfigError("verify: k_max must be >= 1");
    if (!(config.melas_constant > 0.0))
        throw ConfigError(
            "verify: the melas constant must be strictly positive");
    if (config.output.empty())
        throw ConfigError("verify: an output path is required");

    const int n_jobs = static_cast<int>(config.domain_files.size());

    std::vector<std::string> csv_paths(static_cast<std::size_t>(n_jobs));
    if (n_jobs == 1) {
        csv_paths[0] = config.output;
    } else {
        std::filesystem::create_directories(config.output);
        std::set<std::string> seen;
        for (int i = 0; i < n_jobs; ++i) {
            const std::string stem =
                std::filesystem::path(config.domain_files[static_cast<std::size_t>(i)])
                    .stem()
                    .string();
            if (!seen.insert(stem).second)
                throw ConfigError(
                    "verify: two domain files share the name '" + stem +
                    "'; their CSV outputs would collide");
            csv_paths[static_cast<std::size_t>(i)] =
                (std::filesystem::path(config.output) / (stem + ".csv"))
                    .string();
        }
    }

    VerifyOutcome outcome;
    outcome.domains.resize(static_cast<std::size_t>(n_jobs));

    const int pool = std::clamp(config.threads, 1, n_jobs);
    if (pool <= 1) {
        for (int i = 0; i < n_jobs; ++i)
            outcome.domains[static_cast<std::size_t>(i)] = process_domain(
                config, config.domain_files[static_cast<std::size_t>(i)],
                csv_paths[static_cast<std::size_t>(i)],
                n_jobs == 1 ? std::max(config.threads, 1) : 1);
    } else {
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_jobs));
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (int i = next.fetch_add(1); i < n_jobs; i = next.fetch_add(1)) {
                try {
                    outcome.domains[static_cast<std::size_t>(i)] =
                        process_domain(
                            config,
                            config.domain_files[static_cast<std::size_t>(i)],
                            csv_paths[static_cast<std::size_t>(i)], 1);
                } catch (...) {
                    errors[static_cast<std::size_t>(i)] =
                        std::current_exception();
                }
            }
        };
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(pool));
        for (int t = 0; t < pool; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    for (const auto& r : outcome.domains) {
        print_domain_summary(out, r);
        if (r.flagged_violation_count > 0) outcome.exit_code = 1;
    }
    out << (outcome.exit_code == 0 ? "verification: PASS"
                                   : "verification: FAIL")
        << '\n';
    return outcome;
}

int run_proofkit_audit(const AuditConfig& config, std::ostream& out) {
    if (config.n_min > config.n_max || config.p_min > config.p_max) {
        out << "proofkit audit: empty parameter range (n in [" << config.n_min
            << ", " << config.n_max << "], p in [" << config.p_min << ", "
            << config.p_max << "])\n";
        return 2;
    }
    if (config.n_min < 2) {
        out << "proofkit audit: the dimension range must start at 2 or above\n";
        return 2;
    }
    if (config.p_min < 1) {
        out << "proofkit audit: the derivative-order range must start at 1 or "
               "above\n";
        return 2;
    }
    if (config.sample_count < 1) {
        out << "proofkit audit: sample_count must be >= 1\n";
        return 2;
    }

    out << "proofkit audit: n in [" << config.n_min << ", " << config.n_max
        << "], p in [" << config.p_min << ", " << config.p_max << "], "
        << config.sample_count << " samples per sweep, seed " << config.seed
        << '\n';

    AuditState st{out};
    std::mt19937_64 rng(config.seed);
    audit_growth_cap(st, config);
    audit_integer_cross_check(st, config);
    audit_profile_caps(st, config, rng);
    audit_functional_equality(st, config);
    audit_dichotomy(st, config, rng);
    audit_reconstruction(st, config, rng);

    out << "result: " << (st.failed ? "FAIL" : "PASS") << '\n';
    return st.failed ? 1 : 0;
}

AsymptoticsResult run_asymptotics(const std::string& domain_file, int k_max,
                                  std::ostream& out) {
    if (k_max < 100)
        throw ConfigError("asymptotics: k_max must be >= 100 for a stable fit");
    const Polytope poly = load_polytope(domain_file);
    const DomainSummary domain = summarize(poly);
    const Spectrum spectrum = exact_spectrum(poly, k_max);
    const int n = domain.dimension;

    const int k_lo = k_max / 10;
    std::vector<std::pair<double, double>> pts;
    pts.reserve(static_cast<std::size_t>(k_max - k_lo + 1));
    long double running = 0.0L;
    for (int k = 1; k <= k_max; ++k) {
        running += spectrum.eigenvalues[static_cast<std::size_t>(k - 1)];
        if (k < k_lo) continue;
        const double residual = static_cast<double>(running / k) -
                                weyl_average(k, n, domain.volume);
        if (residual > 0.0)
            pts.emplace_back(std::log(static_cast<double>(k)),
                             std::log(residual));
    }
    if (pts.size() < 2)
        throw ConsistencyError(
            "asymptotics: fewer than two positive residuals in the fit "
            "window; the average does not exceed its leading term here");

    const LineFit fit = least_squares(pts);
    AsymptoticsResult result;
    result.domain_id = poly.id;
    result.fit_points = static_cast<int>(pts.size());
    result.slope = fit.slope;
    result.coefficient = std::exp(fit.intercept);

    out << "asymptotics domain: " << result.domain_id << '\n';
    out << "  fit window: k in [" << k_lo << ", " << k_max << "] ("
        << result.fit_points << " positive residuals)\n";
    out << "  slope: " << format_g17(result.slope) << '\n';
    out << "  coefficient: " << format_g17(result.coefficient) << '\n';
    return result;
}

}  // namespace spectral
