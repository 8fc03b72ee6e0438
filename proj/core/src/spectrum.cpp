#include "ims/spectrum.hpp"
#include "ims/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace ims {

const char* regime_name(Regime r) {
    switch (r) {
    case Regime::PowerLaw: return "PowerLaw";
    case Regime::Logarithmic: return "Logarithmic";
    case Regime::Bounded: return "Bounded";
    case Regime::Irregular: return "Irregular";
    }
    return "?";
}

namespace {

constexpr double kLogSlopeBand = 0.05;    // |slope| below this is not a power law
constexpr double kIrregularSpread = 0.1;  // windowed slope spread flagging a limsup gap
constexpr double kBoundedRatio = 4.0;     // max/min of I over the window
constexpr double kLogSlopeCap = 0.3;      // log growth cannot present steeper slopes here
constexpr double kLogSignatureTol = 0.15; // band around s*x = const, the 1/x decay mark

struct Fit {
    double slope, intercept, rms;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t n = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    Fit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double res = y[i] - f.intercept - f.slope * x[i];
        ss += res * res;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

bool monotone_within(const std::vector<double>& v, double slack) {
    bool up = true, down = true;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] < v[i - 1] - slack) up = false;
        if (v[i] > v[i - 1] + slack) down = false;
    }
    return up || down;
}

} // namespace

SpectrumEstimate estimate_beta(const AnalyticMap& map, double t, const SpectrumOptions& opts) {
    if (opts.window < 3) throw RangeError("regression window must be at least 3");
    if (opts.window > opts.ladder.size())
        throw LadderTooShort("regression window exceeds the radius ladder");

    SpectrumEstimate est;
    est.t = t;
    est.window = opts.window;

    if (t == 0.0) {
        est.beta_hat = 0.0;
        est.regime = Regime::Bounded;
        est.series.map_id = map.content_hash();
        est.series.t = 0.0;
        return est;
    }

    CircleOptions circ = opts.circle;
    est.series = mean_series(map, t, opts.ladder, opts.rtol, opts.cache, circ, opts.store);

    const auto& entries = est.series.entries;
    std::vector<double> x, y;
    x.reserve(entries.size());
    y.reserve(entries.size());
    for (const auto& e : entries) {
        x.push_back(-std::log(1.0 - e.r));  // log 1/(1-r)
        y.push_back(std::log(e.value));
    }
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        est.incremental_slopes.push_back((y[i + 1] - y[i]) / (x[i + 1] - x[i]));

    std::size_t w = static_cast<std::size_t>(opts.window);
    std::vector<double> xw(x.end() - w, x.end()), yw(y.end() - w, y.end());
    Fit fit = least_squares(xw, yw);
    est.fit_residual = fit.rms;

    std::vector<double> win_slopes(est.incremental_slopes.end() - (w - 1),
                                   est.incremental_slopes.end());
    est.slope_min = *std::min_element(win_slopes.begin(), win_slopes.end());
    est.slope_max = *std::max_element(win_slopes.begin(), win_slopes.end());
    double spread = est.slope_max - est.slope_min;

    double ratio = 0.0;
    {
        double ymin = *std::min_element(yw.begin(), yw.end());
        double ymax = *std::max_element(yw.begin(), yw.end());
        ratio = std::exp(ymax - ymin);
    }
    bool increasing = true;
    for (std::size_t i = 1; i < yw.size(); ++i)
        if (yw[i] <= yw[i - 1]) increasing = false;

    // Growth slower than any power leaves incremental slopes decaying like
    // 1/x, so s*x stays flat across the window while a genuine power law
    // keeps s itself flat. Compare at the increment midpoints.
    bool log_signature = false;
    if (increasing && est.slope_max < kLogSlopeCap && est.slope_min > 0.0) {
        bool decreasing_s = true;
        for (std::size_t i = 1; i < win_slopes.size(); ++i)
            if (win_slopes[i] >= win_slopes[i - 1]) decreasing_s = false;
        double first = win_slopes.front() * 0.5 * (xw[0] + xw[1]);
        double last = win_slopes.back() * 0.5 * (xw[w - 2] + xw[w - 1]);
        double sx_ratio = last / first;
        log_signature = decreasing_s && std::abs(sx_ratio - 1.0) < kLogSignatureTol;
    }

    if (spread > kIrregularSpread && !monotone_within(win_slopes, 1e-3)) {
        est.regime = Regime::Irregular;
        est.beta_hat = std::max(est.slope_max, 0.0);
    } else if (log_signature) {
        est.regime = Regime::Logarithmic;
        est.beta_hat = 0.0;
    } else if (std::abs(fit.slope) < kLogSlopeBand) {
        // small slope with log I still climbing at the top also counts as
        // slower-than-power growth
        bool still_growing = increasing && (yw.back() - yw[yw.size() - 2]) > 0.01;
        if (still_growing) {
            est.regime = Regime::Logarithmic;
            est.beta_hat = 0.0;
        } else if (ratio < kBoundedRatio) {
            est.regime = Regime::Bounded;
            est.beta_hat = 0.0;
        } else {
            est.regime = Regime::Irregular;
            est.beta_hat = std::max(est.slope_max, 0.0);
        }
    } else {
        est.regime = Regime::PowerLaw;
        est.beta_hat = std::max(fit.slope, 0.0);
    }
    return est;
}

double estimate_beta_area(const AnalyticMap& map, double t, double alpha_lo, double alpha_hi,
                          const SpectrumOptions& opts) {
    if (!(alpha_lo > -1.0)) throw RangeError("alpha_lo must exceed -1");
    if (!(alpha_hi > alpha_lo)) throw RangeError("alpha bracket is empty");

    // Circle means do not depend on alpha; sample the radial nodes once and
    // re-weight during the bisection.
    const auto radii = opts.ladder.radii();
    const auto& rule = detail::gauss_rule(8);
    struct Node {
        double rho, mean;
    };
    std::vector<std::vector<Node>> annuli(radii.size() - 1);
    for (std::size_t k = 0; k + 1 < radii.size(); ++k) {
        double lo = radii[k], hi = radii[k + 1];
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            double rho = mid + half * rule.x[i];
            double mean =
                mean_integral(map, t, rho, opts.rtol, opts.cache, opts.circle, opts.store).value;
            annuli[k].push_back(Node{rho, mean});
        }
    }
    auto divergent = [&](double alpha) {
        double prev = 0.0, last = 0.0;
        for (std::size_t k = 0; k < annuli.size(); ++k) {
            double lo = radii[k], hi = radii[k + 1];
            double half = 0.5 * (hi - lo);
            long double acc = 0.0L;
            for (std::size_t i = 0; i < annuli[k].size(); ++i) {
                const Node& nd = annuli[k][i];
                acc += static_cast<long double>(rule.w[i]) * nd.mean *
                       std::pow(1.0 - nd.rho * nd.rho, alpha) * nd.rho;
            }
            prev = last;
            last = double(acc * half / M_PI);
        }
        return prev > 0.0 && last / prev >= 1.0 - 1e-3;
    };

    double lo = alpha_lo, hi = alpha_hi;
    if (divergent(hi)) throw BracketError("tail still divergent at alpha_hi; no sign change");
    if (!divergent(lo)) lo = -1.0;  // weight (1-|z|^2)^{-1} always diverges
    for (int it = 0; it < 12; ++it) {
        double mid = 0.5 * (lo + hi);
        if (divergent(mid)) lo = mid;
        else hi = mid;
    }
    return std::max(0.0, 0.5 * (lo + hi) + 1.0);
}

std::vector<CurveRow> spectrum_curve(const AnalyticMap& map, const std::vector<double>& ts,
                                     const SpectrumOptions& opts) {
    SampleStore shared(4);
    SpectrumOptions local = opts;
    if (!local.store) local.store = &shared;

    std::vector<double> sorted = ts;
    std::sort(sorted.begin(), sorted.end());
    std::vector<CurveRow> rows;
    rows.reserve(sorted.size());
    for (double t : sorted) {
        CurveRow row;
        row.t = t;
        try {
            row.estimate = estimate_beta(map, t, local);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
    out << "t,beta_hat,regime,window,fit_residual,slope_min,slope_max\n";
    for (const auto& row : rows) {
        if (!row.estimate) {
            out << detail::format_double(row.t) << ",failed,,,,,\n";
            continue;
        }
        const auto& e = *row.estimate;
        out << detail::format_double(row.t) << ',' << detail::format_double(e.beta_hat) << ','
            << regime_name(e.regime) << ',' << e.window << ','
            << detail::format_double(e.fit_residual) << ',' << detail::format_double(e.slope_min)
            << ',' << detail::format_double(e.slope_max) << '\n';
    }
}

} // namespace ims
