#ifndef IMS_EXPERIMENTS_HPP
#define IMS_EXPERIMENTS_HPP

#include "ims/families.hpp"
#include "ims/norms.hpp"
#include "ims/spectrum.hpp"

#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace ims {

enum class CheckStatus { Pass, Fail, Inconclusive, Informational };
const char* check_status_name(CheckStatus s);

struct CheckReport {
    std::string check_id;
    std::map<std::string, double> premises;
    double bound = 0.0;
    double observed = 0.0;
    double margin = 0.0;  // bound - observed
    bool pass = true;     // false only for Fail
    CheckStatus status = CheckStatus::Pass;
    std::string notes;
};

struct LabOptions {
    SpectrumOptions spectrum{};
    GridSpec grid{};
    double beta_tol = 0.06;           // estimator tolerance; doubled near kinks
    double kink_window = 0.05;
    double little_o_threshold = 0.05;
    double sup_inflation = 1.05;      // sampled sups enter premises inflated
};

struct BRow {
    std::string label;
    double value = 0.0;
    bool proven = false;   // proven equality rows arm the violation flag
    bool violated = false;
};

struct SearchResult {
    double param_star = 0.0;
    double beta_star = 0.0;
    double family_sup = 0.0;  // linear extrapolation to the range boundary
    std::vector<std::pair<double, double>> evaluations;  // (param, beta)
    std::vector<BRow> comparison;
    bool violation = false;
};

// Shared driver for the verification experiments: memoizes spectrum
// estimates per (map, t) and carries the common tolerances.
class Lab {
public:
    explicit Lab(LabOptions opts = {});

    const LabOptions& options() const { return opts_; }
    SpectrumEstimate beta(const AnalyticMap& map, double t);

    // |beta_g(t) - beta_f(t)| <= |t| eps + slack, eps the inflated tail
    // deviation of the pre-Schwarzians beyond radius r.
    CheckReport check_stability(const AnalyticMap& f, const AnalyticMap& g, double t, double r,
                                const std::string& label = "");

    // Two-sided bound on |g'/f'| with exponent eps/2 and constants fitted on
    // the circle |z| = r.
    CheckReport check_growth_bounds(const AnalyticMap& f, const AnalyticMap& g, double r,
                                    const std::string& label = "");

    // Spectrum continuity along a parameter sequence: each |beta_n - beta_0|
    // stays below |t| * ||N_n - N_0||_{E_1} + slack and both sequences shrink.
    CheckReport check_continuity(FamilyKind kind, const std::vector<double>& params,
                                 double param0, double t);

    // Equal spectra whenever N_g - N_f is little-o; informational otherwise.
    CheckReport check_asymptotic_equivalence(const AnalyticMap& f, const AnalyticMap& g,
                                             const std::vector<double>& t_grid,
                                             const std::string& label = "");

    // F with F' = (f')^{1+eps}: beta_F(t) = beta_f(t(1+eps)), strictly above
    // beta_f(t) with margin eps*beta/(3 max(|t|,1))/2 when beta_f(t) > 0.1.
    CheckReport perturb_spectrum(const AnalyticMap& f, double eps, double t,
                                 const std::string& label = "");

    // First t1 > 0 with beta > 0.1 starts a strictly increasing run; mirrored
    // for t < 0.
    CheckReport check_monotonicity(const AnalyticMap& f, const std::vector<double>& t_grid,
                                   const std::string& label = "");

    // Golden-section maximization of beta over the family parameter, with the
    // known universal-spectrum rows for comparison. `bounded` selects which
    // rows are proven equalities for this family.
    SearchResult search_lower_bound(FamilyKind kind, double lo, double hi, double t,
                                    int budget = 24);

private:
    LabOptions opts_;
    std::mutex mutex_;
    std::map<std::pair<std::string, double>, SpectrumEstimate> memo_;
    SampleStore store_{6};
};

// Named suites: stability, bounds, continuity, asymeq, perturb, monotone,
// search, norms. Empty name runs everything.
std::vector<CheckReport> run_verify_suite(Lab& lab, const std::string& suite = "");

std::string check_reports_json(const std::vector<CheckReport>& reports);
bool all_pass(const std::vector<CheckReport>& reports);

} // namespace ims

#endif
