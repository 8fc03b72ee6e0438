#include "ims/experiments.hpp"
#include "ims/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ims {

using nlohmann::json;

const char* check_status_name(CheckStatus s) {
    switch (s) {
    case CheckStatus::Pass: return "Pass";
    case CheckStatus::Fail: return "Fail";
    case CheckStatus::Inconclusive: return "Inconclusive";
    case CheckStatus::Informational: return "Informational";
    }
    return "?";
}

namespace {

constexpr double kGrowthSlack = 1e-9;      // sampled-inequality slack
constexpr double kIncrementTol = 0.02;     // strict-monotonicity increment
constexpr double kActiveBeta = 0.1;        // spectrum counts as positive above this

void finish(CheckReport& rep, CheckStatus status) {
    rep.status = status;
    rep.pass = status != CheckStatus::Fail;
}

void finish_by_margin(CheckReport& rep, double slack = 0.0) {
    rep.margin = rep.bound - rep.observed;
    finish(rep, rep.margin >= -slack ? CheckStatus::Pass : CheckStatus::Fail);
}

// Max modulus of the continuous log of (g'/f')(z) on |z| = r, phase
// unwrapped around the circle from the principal value at theta = 0.
double max_log_modulus_on_circle(const AnalyticMap& ratio, double r, int samples) {
    std::vector<Complex> vals(samples);
    for (int j = 0; j < samples; ++j) {
        double theta = 2.0 * M_PI * j / samples;
        vals[j] = ratio.eval(Complex(r * std::cos(theta), r * std::sin(theta)));
        if (std::abs(vals[j]) < 1e-300)
            throw EvaluationError("derivative ratio vanished on the fitting circle");
    }
    double arg = std::arg(vals[0]);
    double best = std::hypot(std::log(std::abs(vals[0])), arg);
    for (int j = 1; j <= samples; ++j) {
        Complex cur = vals[j % samples], prev = vals[j - 1];
        arg += std::arg(cur / prev);
        if (j == samples) break;
        best = std::max(best, std::hypot(std::log(std::abs(cur)), arg));
    }
    return best;
}

AnalyticMap family_with_limit(FamilyKind kind, double param) {
    if (kind == FamilyKind::PowerMapF && param == 1.0)
        return make_family(FamilySpec::log_map());
    if (kind == FamilyKind::PowerMapG && param == 1.0)
        return make_family(FamilySpec::g_map());
    FamilySpec spec;
    spec.kind = kind;
    spec.param = param;
    return make_family(spec);
}

} // namespace

Lab::Lab(LabOptions opts) : opts_(std::move(opts)) {}

SpectrumEstimate Lab::beta(const AnalyticMap& map, double t) {
    auto key = std::make_pair(map.content_hash(), t);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    SpectrumOptions sopts = opts_.spectrum;
    if (!sopts.store) sopts.store = &store_;
    SpectrumEstimate est = estimate_beta(map, t, sopts);
    std::lock_guard<std::mutex> lock(mutex_);
    return memo_.emplace(key, std::move(est)).first->second;
}

CheckReport Lab::check_stability(const AnalyticMap& f, const AnalyticMap& g, double t, double r,
                                 const std::string& label) {
    if (t == 0.0) throw RangeError("stability check requires t != 0");
    CheckReport rep;
    rep.check_id = "stability" + (label.empty() ? "" : "[" + label + "]");
    double eps = opts_.sup_inflation * tail_deviation(f, g, r, opts_.grid);
    SpectrumEstimate bf = beta(f, t), bg = beta(g, t);
    rep.premises = {{"eps", eps}, {"r", r}, {"t", t},
                    {"beta_f", bf.beta_hat}, {"beta_g", bg.beta_hat}};
    rep.observed = std::abs(bg.beta_hat - bf.beta_hat);
    rep.bound = std::abs(t) * eps + 2.0 * opts_.beta_tol;
    if (bf.regime == Regime::Irregular || bg.regime == Regime::Irregular) {
        rep.margin = rep.bound - rep.observed;
        rep.notes = "spectrum estimate flagged irregular";
        finish(rep, CheckStatus::Inconclusive);
        return rep;
    }
    finish_by_margin(rep);
    return rep;
}

CheckReport Lab::check_growth_bounds(const AnalyticMap& f, const AnalyticMap& g, double r,
                                     const std::string& label) {
    CheckReport rep;
    rep.check_id = "growth_bounds" + (label.empty() ? "" : "[" + label + "]");
    double eps = opts_.sup_inflation * tail_deviation(f, g, r, opts_.grid);
    AnalyticMap ratio = AnalyticMap::quotient(g.derivative(), f.derivative());
    double m0 = max_log_modulus_on_circle(ratio, r, 1024);
    // constants fitted on |z| = r
    double log_c1 = -m0 + 0.5 * eps * std::log((1.0 + r) / (1.0 - r));
    double log_c2 = m0 + 0.5 * eps * std::log((1.0 - r) / (1.0 + r));
    rep.premises = {{"eps", eps}, {"r", r}, {"M0", m0},
                    {"C1", std::exp(log_c1)}, {"C2", std::exp(log_c2)}};

    double worst = 0.0;  // largest violation of either side, in log units
    for (int k = 3; k <= 14; ++k) {
        double rho = 1.0 - std::ldexp(1.0, -k);
        if (rho <= r) continue;
        double envelope = 0.5 * eps * std::log((1.0 + rho) / (1.0 - rho));
        for (int j = 0; j < 256; ++j) {
            double theta = 2.0 * M_PI * j / 256;
            Complex z(rho * std::cos(theta), rho * std::sin(theta));
            double lv = std::log(std::abs(ratio.eval(z)));
            double upper = log_c2 + envelope;
            double lower = log_c1 - envelope;
            worst = std::max({worst, lv - upper, lower - lv});
        }
    }
    rep.observed = worst;
    rep.bound = kGrowthSlack;
    rep.notes = "two-sided |g'/f'| envelope with exponent eps/2, log-scale violation";
    finish_by_margin(rep);
    return rep;
}

CheckReport Lab::check_continuity(FamilyKind kind, const std::vector<double>& params,
                                  double param0, double t) {
    CheckReport rep;
    FamilySpec tmpl;
    tmpl.kind = kind;
    tmpl.param = param0;
    rep.check_id = "continuity[" + tmpl.name() + "]";
    AnalyticMap f0 = family_with_limit(kind, param0);
    AnalyticMap n0 = f0.pre_schwarzian();
    double b0 = beta(f0, t).beta_hat;
    rep.premises = {{"param0", param0}, {"t", t}, {"beta0", b0}};

    double worst = -1e300;
    double prev_delta = 1e300, prev_dbeta = 1e300;
    bool shrinking = true;
    for (std::size_t i = 0; i < params.size(); ++i) {
        AnalyticMap fn = family_with_limit(kind, params[i]);
        AnalyticMap diff = AnalyticMap::sum(
            fn.pre_schwarzian(), AnalyticMap::product(AnalyticMap::constant(-1.0), n0));
        double delta = growth_norm(diff, 1, opts_.grid).value;
        double dbeta = std::abs(beta(fn, t).beta_hat - b0);
        std::string tag = std::to_string(i);
        rep.premises["delta_" + tag] = delta;
        rep.premises["dbeta_" + tag] = dbeta;
        worst = std::max(worst, dbeta - std::abs(t) * delta);
        if (delta > prev_delta + kGrowthSlack) shrinking = false;
        if (dbeta > prev_dbeta + 1e-3) shrinking = false;  // estimator noise slack
        prev_delta = delta;
        prev_dbeta = dbeta;
    }
    rep.observed = worst;
    rep.bound = 2.0 * opts_.beta_tol;
    rep.notes = shrinking ? "deviation and spectrum gap both shrink along the sequence"
                          : "sequence failed to shrink monotonically";
    rep.margin = rep.bound - rep.observed;
    finish(rep, (rep.margin >= 0.0 && shrinking) ? CheckStatus::Pass : CheckStatus::Fail);
    return rep;
}

CheckReport Lab::check_asymptotic_equivalence(const AnalyticMap& f, const AnalyticMap& g,
                                              const std::vector<double>& t_grid,
                                              const std::string& label) {
    CheckReport rep;
    rep.check_id = "asymptotic_equivalence" + (label.empty() ? "" : "[" + label + "]");
    AnalyticMap diff = AnalyticMap::sum(
        g.pre_schwarzian(), AnalyticMap::product(AnalyticMap::constant(-1.0), f.pre_schwarzian()));
    LittleOReport littleo = little_o_test(diff, 1, opts_.little_o_threshold, opts_.grid);
    rep.premises = {{"little_o_threshold", opts_.little_o_threshold},
                    {"profile_tail", littleo.profile.empty() ? 0.0 : littleo.profile.back().second}};
    if (!littleo.is_little_o) {
        rep.notes = "pre-Schwarzian difference is not little-o; equality of spectra not claimed";
        finish(rep, CheckStatus::Informational);
        return rep;
    }
    double worst = 0.0;
    for (double t : t_grid) {
        double d = std::abs(beta(f, t).beta_hat - beta(g, t).beta_hat);
        rep.premises["dbeta_t=" + detail::format_double(t)] = d;
        worst = std::max(worst, d);
    }
    rep.observed = worst;
    rep.bound = 2.0 * opts_.beta_tol;
    rep.notes = "little-o difference forces equal spectra on the grid";
    finish_by_margin(rep);
    return rep;
}

CheckReport Lab::perturb_spectrum(const AnalyticMap& f, double eps, double t,
                                  const std::string& label) {
    if (!(eps > 0.0 && eps <= 1.0 / 24.0))
        throw RangeError("perturbation exponent must lie in (0, 1/24]");
    if (t == 0.0) throw RangeError("perturbation check requires t != 0");
    CheckReport rep;
    rep.check_id = "perturbation" + (label.empty() ? "" : "[" + label + "]");
    AnalyticMap F = AnalyticMap::deriv_power(f, 1.0 + eps);
    double bF = beta(F, t).beta_hat;
    double bshift = beta(f, t * (1.0 + eps)).beta_hat;
    double b0 = beta(f, t).beta_hat;
    rep.premises = {{"eps", eps}, {"t", t}, {"beta_F", bF},
                    {"beta_shifted", bshift}, {"beta_f", b0}};

    // |F'|^t = |f'|^{t(1+eps)} pointwise, so the spectra must agree
    double equality_gap = std::abs(bF - bshift);
    double equality_margin = 2.0 * opts_.beta_tol - equality_gap;

    // strict gain: half the proof margin eps*beta/(3 t1)
    double strict_margin = 0.0;
    bool strict_applies = b0 > kActiveBeta;
    if (strict_applies) {
        double required = 0.5 * eps * b0 / (3.0 * std::max(std::abs(t), 1.0));
        strict_margin = (bF - b0) - required;
        rep.premises["required_gain"] = required;
        rep.premises["gain"] = bF - b0;
    }
    rep.observed = equality_gap;
    rep.bound = 2.0 * opts_.beta_tol;
    rep.margin = strict_applies ? std::min(equality_margin, strict_margin) : equality_margin;
    rep.notes = strict_applies ? "equality and strict-increase clauses both checked"
                               : "zero-spectrum branch: only the equality clause applies";
    finish(rep, rep.margin >= 0.0 ? CheckStatus::Pass : CheckStatus::Fail);
    return rep;
}

CheckReport Lab::check_monotonicity(const AnalyticMap& f, const std::vector<double>& t_grid,
                                    const std::string& label) {
    CheckReport rep;
    rep.check_id = "monotonicity" + (label.empty() ? "" : "[" + label + "]");
    std::vector<double> grid = t_grid;
    std::sort(grid.begin(), grid.end());
    std::vector<std::pair<double, double>> pos, neg;  // (t, beta)
    for (double t : grid) {
        double b = beta(f, t).beta_hat;
        rep.premises["beta_t=" + detail::format_double(t)] = b;
        if (t > 0.0) pos.emplace_back(t, b);
        else if (t < 0.0) neg.emplace_back(t, b);
    }
    double min_increment = 1e300;
    bool found = false;
    // increasing run from the first positive t with beta > threshold
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (pos[i].second <= kActiveBeta) continue;
        for (std::size_t j = i + 1; j < pos.size(); ++j)
            min_increment = std::min(min_increment, pos[j].second - pos[j - 1].second);
        found = found || i + 1 < pos.size();
        break;
    }
    // mirrored decreasing run toward the largest negative t with beta > threshold
    for (std::size_t i = neg.size(); i-- > 0;) {
        if (neg[i].second <= kActiveBeta) continue;
        for (std::size_t j = i; j-- > 0;)
            min_increment = std::min(min_increment, neg[j].second - neg[j + 1].second);
        found = found || i > 0;
        break;
    }
    if (!found) {
        rep.notes = "no grid point with beta above " + detail::format_double(kActiveBeta);
        finish(rep, CheckStatus::Inconclusive);
        return rep;
    }
    rep.observed = -min_increment;
    rep.bound = -kIncrementTol;
    rep.notes = "smallest consecutive spectrum increment along the active runs";
    finish_by_margin(rep);
    return rep;
}

SearchResult Lab::search_lower_bound(FamilyKind kind, double lo, double hi, double t,
                                     int budget) {
    if (budget < 8) throw RangeError("search budget must be at least 8");
    if (!(lo < hi)) throw RangeError("empty search interval");
    if (kind == FamilyKind::PowerMapF || kind == FamilyKind::PowerMapG ||
        kind == FamilyKind::KoebeScaled) {
        if (!(lo > 0.0 && hi < 1.0)) throw RangeError("search interval outside the validity range");
    }

    SearchResult result;
    auto eval = [&](double param) {
        try {
            return beta(family_with_limit(kind, param), t).beta_hat;
        } catch (const std::exception&) {
            return -1e300;  // shrinks the interval away from the failure
        }
    };
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = eval(x1), f2 = eval(x2);
    result.evaluations = {{x1, f1}, {x2, f2}};
    int evals = 2;
    while (evals < budget && (b - a) > 1e-4) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2);
            result.evaluations.emplace_back(x2, f2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1);
            result.evaluations.emplace_back(x1, f1);
        }
        ++evals;
    }
    for (const auto& [p, v] : result.evaluations) {
        if (v > result.beta_star) {
            result.beta_star = v;
            result.param_star = p;
        }
    }

    // family sup by linear extrapolation to the validity boundary
    double boundary =
        (kind == FamilyKind::PowerMapF || kind == FamilyKind::PowerMapG ||
         kind == FamilyKind::KoebeScaled) ? 1.0 : hi;
    {
        auto pts = result.evaluations;
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end(),
                              [](auto& u, auto& v) { return std::abs(u.first - v.first) < 1e-12; }),
                  pts.end());
        std::size_t m = std::min<std::size_t>(4, pts.size());
        if (m >= 2) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (std::size_t i = pts.size() - m; i < pts.size(); ++i) {
                sx += pts[i].first;
                sy += pts[i].second;
                sxx += pts[i].first * pts[i].first;
                sxy += pts[i].first * pts[i].second;
            }
            double denom = m * sxx - sx * sx;
            if (std::abs(denom) > 1e-14) {
                double slope = (m * sxy - sx * sy) / denom;
                double intercept = (sy - slope * sx) / m;
                result.family_sup = slope * boundary + intercept;
            } else {
                result.family_sup = result.beta_star;
            }
        } else {
            result.family_sup = result.beta_star;
        }
    }

    // universal-spectrum comparison rows; proven equalities arm the flag
    bool bounded_family = kind != FamilyKind::Koebe;
    double flag_tol = 3.0 * opts_.beta_tol;
    auto add_row = [&](std::string label, double value, bool proven) {
        BRow row{std::move(label), value, proven, false};
        if (proven && result.beta_star > value + flag_tol) row.violated = true;
        result.comparison.push_back(std::move(row));
    };
    if (t >= 0.4) add_row("B(t) = 3t-1 for t >= 2/5", 3.0 * t - 1.0, true);
    if (t >= 2.0 && bounded_family) add_row("B_b(t) = t-1 for t >= 2", t - 1.0, true);
    if (t <= -2.0) add_row("B_b(t) = |t|-1 for t <= t0 (conjectured floor at -2)", -t - 1.0, false);
    if (std::abs(t) <= 2.0) add_row("Kraetzer conjecture B_b(t) = t^2/4", t * t / 4.0, false);
    for (const auto& row : result.comparison) result.violation |= row.violated;
    return result;
}

// ---- verification suites ------------------------------------------------

namespace {

void run_stability_suite(Lab& lab, std::vector<CheckReport>& out) {
    // ten-point gamma grid on [0.2, 0.9]: 45 unordered pairs
    std::vector<double> gammas;
    for (int i = 0; i < 10; ++i) gammas.push_back(0.2 + 0.7 * i / 9.0);
    const std::vector<double> ts = {-2.0, -1.0, 1.0, 2.0, 4.0};
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        for (std::size_t j = i + 1; j < gammas.size(); ++j) {
            AnalyticMap f = make_family(FamilySpec::power_f(gammas[i]));
            AnalyticMap g = make_family(FamilySpec::power_f(gammas[j]));
            for (double t : ts) {
                std::ostringstream label;
                label << "fgamma " << gammas[i] << " vs " << gammas[j] << ", t=" << t;
                out.push_back(lab.check_stability(f, g, t, 0.5, label.str()));
            }
        }
    }
}

void run_bounds_suite(Lab& lab, std::vector<CheckReport>& out) {
    AnalyticMap f05 = make_family(FamilySpec::power_f(0.5));
    AnalyticMap f06 = make_family(FamilySpec::power_f(0.6));
    AnalyticMap f03 = make_family(FamilySpec::power_f(0.3));
    AnalyticMap f08 = make_family(FamilySpec::power_f(0.8));
    AnalyticMap koebe = make_family(FamilySpec::koebe());
    out.push_back(lab.check_growth_bounds(f05, f05, 0.5, "identical pair"));
    out.push_back(lab.check_growth_bounds(f05, f06, 0.5, "fgamma 0.5 vs 0.6"));
    out.push_back(lab.check_growth_bounds(f03, f08, 0.5, "fgamma 0.3 vs 0.8"));
    out.push_back(lab.check_growth_bounds(koebe, f05, 0.5, "koebe vs fgamma 0.5"));
}

void run_continuity_suite(Lab& lab, std::vector<CheckReport>& out) {
    out.push_back(lab.check_continuity(FamilyKind::PowerMapF, {0.6, 0.55, 0.52, 0.51}, 0.5, 4.0));
    out.push_back(lab.check_continuity(FamilyKind::PowerMapF, {0.8, 0.9, 0.95}, 1.0, 2.0));
    out.push_back(lab.check_continuity(FamilyKind::PowerMapG, {0.7, 0.75, 0.78}, 0.8, -3.0));
}

void run_asymeq_suite(Lab& lab, std::vector<CheckReport>& out) {
    AnalyticMap f05 = make_family(FamilySpec::power_f(0.5));
    AnalyticMap shifted = AnalyticMap::sum(
        AnalyticMap::product(AnalyticMap::constant(Complex(2.0, 0.0)), f05),
        AnalyticMap::constant(Complex(0.25, 0.0)));
    out.push_back(lab.check_asymptotic_equivalence(f05, shifted, {1.0, 4.0},
                                                   "fgamma 0.5 vs affine image"));
    out.push_back(lab.check_asymptotic_equivalence(
        AnalyticMap::identity(), make_family(FamilySpec::koebe_scaled(0.9)), {-2.0, 1.0, 2.0},
        "kscaled 0.9 vs identity"));
    out.push_back(lab.check_asymptotic_equivalence(
        make_family(FamilySpec::log_map()), f05, {2.0, 4.0}, "fgamma 0.5 vs logmap"));
}

void run_perturb_suite(Lab& lab, std::vector<CheckReport>& out) {
    out.push_back(lab.perturb_spectrum(make_family(FamilySpec::power_f(0.5)), 0.04, 4.0,
                                       "fgamma 0.5, t=4"));
    out.push_back(lab.perturb_spectrum(make_family(FamilySpec::koebe()), 0.04, 1.0, "koebe, t=1"));
    out.push_back(lab.perturb_spectrum(make_family(FamilySpec::power_g(0.8)), 0.04, -3.0,
                                       "ggamma 0.8, t=-3"));
}

void run_monotone_suite(Lab& lab, std::vector<CheckReport>& out) {
    out.push_back(lab.check_monotonicity(make_family(FamilySpec::koebe()), {0.4, 0.6, 1.0, 2.0},
                                         "koebe"));
    out.push_back(lab.check_monotonicity(AnalyticMap::identity(), {0.5, 1.0, 2.0}, "identity"));
    out.push_back(lab.check_monotonicity(make_family(FamilySpec::power_g(0.8)),
                                         {-3.0, -2.5, -2.0, -1.5}, "ggamma 0.8"));
}

void run_search_suite(Lab& lab, std::vector<CheckReport>& out) {
    {
        SearchResult res = lab.search_lower_bound(FamilyKind::PowerMapF, 0.1, 0.9, 2.0);
        CheckReport rep;
        rep.check_id = "search[fgamma, t=2]";
        rep.premises = {{"param_star", res.param_star}, {"beta_star", res.beta_star},
                        {"family_sup", res.family_sup}, {"t", 2.0}};
        rep.observed = std::abs(res.family_sup - 1.0);
        rep.bound = 0.1;
        bool ok = !res.violation && res.param_star >= 0.88 && rep.observed <= rep.bound;
        rep.margin = rep.bound - rep.observed;
        rep.notes = res.violation ? "a proven universal-spectrum row was exceeded"
                                  : "family sup extrapolates to the universal value";
        finish(rep, ok ? CheckStatus::Pass : CheckStatus::Fail);
        out.push_back(std::move(rep));
    }
    {
        SearchResult res = lab.search_lower_bound(FamilyKind::PowerMapG, 0.1, 0.9, -3.0);
        CheckReport rep;
        rep.check_id = "search[ggamma, t=-3]";
        rep.premises = {{"param_star", res.param_star}, {"beta_star", res.beta_star},
                        {"family_sup", res.family_sup}, {"t", -3.0}};
        rep.observed = std::abs(res.family_sup - 2.0);
        rep.bound = 0.15;
        bool ok = !res.violation && rep.observed <= rep.bound;
        rep.margin = rep.bound - rep.observed;
        rep.notes = "family sup should extrapolate to |t|-1";
        finish(rep, ok ? CheckStatus::Pass : CheckStatus::Fail);
        out.push_back(std::move(rep));
    }
}

void run_norms_suite(Lab& lab, std::vector<CheckReport>& out) {
    struct Item {
        std::string name;
        AnalyticMap map;
    };
    std::vector<Item> items;
    items.push_back({"koebe", make_family(FamilySpec::koebe())});
    items.push_back({"logmap", make_family(FamilySpec::log_map())});
    items.push_back({"gmap", make_family(FamilySpec::g_map())});
    items.push_back({"kscaled(0.5)", make_family(FamilySpec::koebe_scaled(0.5))});
    items.push_back({"kscaled(0.9)", make_family(FamilySpec::koebe_scaled(0.9))});
    for (double g : {0.2, 0.5, 0.8})
        items.push_back({"fgamma(" + detail::format_double(g) + ")",
                         make_family(FamilySpec::power_f(g))});
    for (double g : {0.3, 0.7})
        items.push_back({"ggamma(" + detail::format_double(g) + ")",
                         make_family(FamilySpec::power_g(g))});
    items.push_back({"derivpow(fgamma(0.5),1.04)",
                     make_family(FamilySpec::deriv_power_of(FamilySpec::power_f(0.5), 1.04))});

    double worst_n = 0.0, worst_s = 0.0;
    CheckReport rep;
    rep.check_id = "norm_bounds[certified catalog]";
    for (const auto& item : items) {
        if (item.map.univalence() != Univalence::CatalogCertified) continue;
        double vn = growth_norm(item.map.pre_schwarzian(), 1, lab.options().grid).value;
        double vs = growth_norm(item.map.schwarzian(), 2, lab.options().grid).value;
        rep.premises["N[" + item.name + "]"] = vn;
        rep.premises["S[" + item.name + "]"] = vs;
        worst_n = std::max(worst_n, vn);
        worst_s = std::max(worst_s, vs);
    }
    rep.observed = std::max(worst_n, worst_s);
    rep.bound = 6.0 + 1e-6;
    rep.notes = "pre-Schwarzian and Schwarzian growth norms stay below the universal bound 6";
    finish_by_margin(rep);
    out.push_back(std::move(rep));
}

} // namespace

std::vector<CheckReport> run_verify_suite(Lab& lab, const std::string& suite) {
    std::vector<CheckReport> out;
    bool all = suite.empty() || suite == "all";
    if (all || suite == "stability") run_stability_suite(lab, out);
    if (all || suite == "bounds") run_bounds_suite(lab, out);
    if (all || suite == "continuity") run_continuity_suite(lab, out);
    if (all || suite == "asymeq") run_asymeq_suite(lab, out);
    if (all || suite == "perturb") run_perturb_suite(lab, out);
    if (all || suite == "monotone") run_monotone_suite(lab, out);
    if (all || suite == "search") run_search_suite(lab, out);
    if (all || suite == "norms") run_norms_suite(lab, out);
    if (out.empty()) throw RangeError("unknown verification suite: " + suite);
    return out;
}

std::string check_reports_json(const std::vector<CheckReport>& reports) {
    json arr = json::array();
    for (const auto& rep : reports) {
        json premises = json::object();
        for (const auto& [k, v] : rep.premises) premises[k] = v;
        arr.push_back(json{{"check_id", rep.check_id},
                           {"premises", premises},
                           {"bound", rep.bound},
                           {"observed", rep.observed},
                           {"margin", rep.margin},
                           {"pass", rep.pass},
                           {"status", check_status_name(rep.status)},
                           {"notes", rep.notes}});
    }
    json doc{{"schema_version", 1}, {"reports", arr}};
    return doc.dump(2);
}

bool all_pass(const std::vector<CheckReport>& reports) {
    for (const auto& rep : reports)
        if (rep.status == CheckStatus::Fail) return false;
    return true;
}

} // namespace ims
