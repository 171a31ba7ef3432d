#include <algorithm>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "spectral/errors.hpp"
#include "spectral/harness.hpp"

namespace {

// Worker-pool cap: SPECTRAL_BOUNDS_THREADS when set to a positive integer,
// otherwise the hardware concurrency (at least 1).
int thread_cap_from_env() {
    const unsigned hw = std::thread::hardware_concurrency();
    const int fallback = hw > 0 ? static_cast<int>(hw) : 1;
    const char* raw = std::getenv("SPECTRAL_BOUNDS_THREADS");
    if (raw == nullptr || *raw == '\0') return fallback;
    char* end = nullptr;
    const long parsed = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || parsed < 1) return fallback;
    return static_cast<int>(std::min(parsed, 256L));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dirichlet eigenvalue lower-bound verification for polytopes"};
    // The grid-spacing option is spelled --h, so the help flag keeps only its
    // long form.
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);

    spectral::CampaignConfig verify_cfg;
    verify_cfg.threads = thread_cap_from_env();
    bool tiling_on = false;
    bool tiling_off = false;
    auto* verify = app.add_subcommand(
        "verify", "Check every eigenvalue bound against a measured spectrum");
    verify
        ->add_option("--domain-file", verify_cfg.domain_files,
                     "Domain description (JSON); repeat for a campaign")
        ->required()
        ->check(CLI::ExistingFile);
    verify
        ->add_option("--method", verify_cfg.method,
                     "Spectrum source: exact oracle or finite differences")
        ->check(CLI::IsMember({"exact", "fd"}));
    verify->add_option("--h", verify_cfg.h,
                       "Grid spacing (finite differences only)");
    verify->add_option("--k-max", verify_cfg.k_max,
                       "Number of eigenvalues to verify");
    verify
        ->add_option("--melas-constant", verify_cfg.melas_constant,
                     "Dimensional constant for the moment-corrected bound")
        ->required();
    verify->add_option("--fraction", verify_cfg.fraction,
                       "Face-decomposition area fraction");
    verify->add_option("--seed", verify_cfg.seed,
                       "Eigensolver start-vector seed");
    verify
        ->add_option("--output", verify_cfg.output,
                     "CSV file (one domain) or directory (campaign)")
        ->required();
    verify->add_flag("--tiling", tiling_on,
                     "Treat every domain as space-tiling");
    verify->add_flag("--no-tiling", tiling_off,
                     "Treat every domain as non-tiling");
    verify
        ->add_flag("--halve-first-eigenvalue",
                   verify_cfg.halve_first_eigenvalue)
        ->group("");  // fault-injection hook for tests, hidden from help

    spectral::AuditConfig audit_cfg;
    auto* audit = app.add_subcommand(
        "proofkit-audit", "Sweep the proof-machinery invariants");
    audit->add_option("--n-min", audit_cfg.n_min, "Smallest dimension");
    audit->add_option("--n-max", audit_cfg.n_max, "Largest dimension");
    audit->add_option("--p-min", audit_cfg.p_min,
                      "Smallest derivative order");
    audit->add_option("--p-max", audit_cfg.p_max, "Largest derivative order");
    audit->add_option("--sample-count", audit_cfg.sample_count,
                      "Samples per profile sweep");
    audit->add_option("--seed", audit_cfg.seed, "Sampling seed");

    std::string asym_file;
    int asym_k_max = 10000;
    auto* asym = app.add_subcommand(
        "asymptotics",
        "Fit the decay rate of the average-minus-Weyl residual");
    asym->add_option("--domain-file", asym_file,
                     "Domain description (JSON), exact oracle required")
        ->required()
        ->check(CLI::ExistingFile);
    asym->add_option("--k-max", asym_k_max, "Top of the fit window");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) {
            if (tiling_on && tiling_off) {
                std::cerr << "error: --tiling and --no-tiling are mutually "
                             "exclusive\n";
                return 2;
            }
            if (tiling_on) verify_cfg.tiling_override = true;
            if (tiling_off) verify_cfg.tiling_override = false;
            return spectral::run_verify(verify_cfg, std::cout).exit_code;
        }
        if (audit->parsed())
            return spectral::run_proofkit_audit(audit_cfg, std::cout);
        if (asym->parsed()) {
            spectral::run_asymptotics(asym_file, asym_k_max, std::cout);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
