#ifndef IMS_NORMS_HPP
#define IMS_NORMS_HPP

#include "ims/analytic_map.hpp"

#include <utility>
#include <vector>

namespace ims {

// Sampling grid for disk sups: radii geometric in (1-r) so dyadic rungs
// 1 - 2^{-k} land exactly on grid points, times equispaced angles. A center
// point at z = 0 is always included.
struct GridSpec {
    double r_min = 0.1591035847462855;  // 1 - 2^{-1/4}
    double r_max = 1.0 - 0x1p-15;        // 1 - 2^{-15}
    int radial_steps = 60;               // quarter-octave ladder by default
    int angular_steps = 4096;

    std::vector<double> radii() const;
};

struct GrowthReport {
    double value = 0.0;    // sampled sup of |phi(z)| (1-|z|^2)^j; a lower bound
    Complex witness{};     // argmax sample point
    int j = 1;
    GridSpec grid{};
    // per-radius restriction sups: tail_profile[i] = (r_i, sup over |z| > r_i)
    std::vector<std::pair<double, double>> tail_profile;
};

// Grid sup with one local refinement pass (3x finer around the best cell).
GrowthReport growth_norm(const AnalyticMap& phi, int j, const GridSpec& grid = {});

// sup over sampled |z| in (r, r_max] of |N_g - N_f| (1-|z|^2).
double tail_deviation(const AnalyticMap& f, const AnalyticMap& g, double r,
                      const GridSpec& grid = {});

// Tail sups at the dyadic rungs r = 1 - 2^{-k}, k = 3..12. The last entry is
// an upper-bound proxy for the quotient seminorm modulo little-o functions;
// equality with the true quotient norm is not claimed.
std::vector<std::pair<double, double>> asymptotic_seminorm(const AnalyticMap& phi, int j,
                                                           const GridSpec& grid = {});

struct LittleOReport {
    bool is_little_o = false;
    double threshold = 0.0;
    std::vector<std::pair<double, double>> profile;  // dyadic rungs k = 3..14
};

// phi (1-|z|^2)^j -> 0 as |z| -> 1, decided on the last three profile entries
// (each below the threshold and decreasing).
LittleOReport little_o_test(const AnalyticMap& phi, int j, double threshold,
                            const GridSpec& grid = {});

} // namespace ims

#endif
