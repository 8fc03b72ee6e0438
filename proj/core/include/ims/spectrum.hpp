#ifndef IMS_SPECTRUM_HPP
#define IMS_SPECTRUM_HPP

#include "ims/quadrature.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ims {

enum class Regime { PowerLaw, Logarithmic, Bounded, Irregular };

const char* regime_name(Regime r);

struct SpectrumEstimate {
    double beta_hat = 0.0;
    int window = 0;
    std::vector<double> incremental_slopes;  // between every consecutive rung pair
    double fit_residual = 0.0;               // rms residual of the window fit
    Regime regime = Regime::Bounded;
    double t = 0.0;
    double slope_min = 0.0, slope_max = 0.0;  // over the window
    MeanSeries series;
};

struct SpectrumOptions {
    RadiusLadder ladder{};
    int window = 6;
    double rtol = 1e-8;
    CircleOptions circle{};
    ResultCache* cache = nullptr;
    SampleStore* store = nullptr;
};

// Least-squares slope of log I against log 1/(1-r) over the last `window`
// rungs. Flat series report Bounded with beta 0; slow monotone growth under
// the 0.05 slope threshold reports Logarithmic; oscillating incremental
// slopes with spread above 0.1 report Irregular (the estimate is then the
// max windowed slope, a finite stand-in for the limsup).
SpectrumEstimate estimate_beta(const AnalyticMap& map, double t,
                               const SpectrumOptions& opts = {});

// Second estimator: bisection on the weight exponent alpha of the divergence
// of iint |f'|^t (1-|z|^2)^alpha dA, returning alpha* + 1. The bracket must
// be divergent at alpha_lo (otherwise the virtual bound alpha = -1 is used)
// and convergent at alpha_hi.
double estimate_beta_area(const AnalyticMap& map, double t, double alpha_lo,
                          double alpha_hi, const SpectrumOptions& opts = {});

struct CurveRow {
    double t = 0.0;
    std::optional<SpectrumEstimate> estimate;
    std::string error;  // set when this row failed
};

std::vector<CurveRow> spectrum_curve(const AnalyticMap& map, const std::vector<double>& ts,
                                     const SpectrumOptions& opts = {});

// CSV columns: t,beta_hat,regime,window,fit_residual,slope_min,slope_max
void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows);

} // namespace ims

#endif
