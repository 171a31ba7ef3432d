#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spectral/bounds.hpp"

namespace spectral {

// Configuration for one verification campaign over one or more domains.
struct CampaignConfig {
    std::vector<std::string> domain_files;
    std::string method = "exact";         // "exact" or "fd"
    double h = 0.0;                       // grid spacing, fd only
    int k_max = 100;
    double melas_constant = 0.0;          // required, strictly positive
    double fraction = 1.0 / 3.0;          // face-decomposition area fraction
    std::uint64_t seed = 1;               // eigensolver start vectors
    std::string output;                   // CSV file; directory when several
                                          // domains are given
    std::optional<bool> tiling_override;  // replaces the domain file's flag
    bool halve_first_eigenvalue = false;  // fault-injection hook (test only)
    int threads = 1;                      // worker-pool cap
};

struct DomainVerifyResult {
    std::string domain_id;
    std::string spectrum_source;  // oracle or grid description
    bool tiling = false;
    double lambda0 = 0.0;
    std::optional<int> first_active_k;  // first k with theta == 1
    int violation_count = 0;            // every recorded violation
    int flagged_violation_count = 0;    // the ones that drive the exit code
    std::string csv_path;
    std::vector<BoundReport> reports;
};

struct VerifyOutcome {
    std::vector<DomainVerifyResult> domains;  // in input order
    int exit_code = 0;  // 0 clean, 1 flagged violations
};

// Full pipeline per domain: load, summarize geometry, compute the spectrum,
// verify every bound, write one CSV, and print a summary block to `out`.
// Configuration and geometry problems throw; the CLI maps them to exit 2.
// Violations of conjectural bounds (Polya on a non-tiling domain) are
// reported but do not affect the exit code.
VerifyOutcome run_verify(const CampaignConfig& config, std::ostream& out);

struct AuditConfig {
    int n_min = 2;
    int n_max = 10;
    int p_min = 1;
    int p_max = 30;
    int sample_count = 100000;  // per parameter set in the profile sweeps
    std::uint64_t seed = 1;
};

// Sweeps every proof-machinery invariant: the derivative-coefficient growth
// cap, log-space vs exact integer recursion, profile derivative caps, the
// functional-bound equality family, the derivative dichotomy, and the
// reassembly of the sharpened average bound. Returns 0 when everything
// holds, 1 when any check fails (offending parameters are printed), and
// 2 when a parameter range is empty.
int run_proofkit_audit(const AuditConfig& config, std::ostream& out);

struct AsymptoticsResult {
    std::string domain_id;
    int fit_points = 0;
    double slope = 0.0;
    double coefficient = 0.0;
};

// Fits log(avg_k - weyl_average(k)) against log(k) over k in
// [k_max/10, k_max] on an exact-oracle spectrum (boxes and equilateral
// triangles); requires k_max >= 100 and an exact oracle, else ConfigError.
AsymptoticsResult run_asymptotics(const std::string& domain_file, int k_max,
                                  std::ostream& out);

}  // namespace spectral
