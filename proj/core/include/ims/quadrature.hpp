#ifndef IMS_QUADRATURE_HPP
#define IMS_QUADRATURE_HPP

#include "ims/analytic_map.hpp"
#include "ims/cache.hpp"
#include "ims/ladder.hpp"

#include <cstdint>
#include <list>
#include <mutex>
#include <vector>

namespace ims {

// Circle-integral controls. The point floor scales like density/(1-r) so the
// boundary peak of width ~(1-r) keeps `density` sample points across it.
struct CircleOptions {
    double density = 64.0;
    std::int64_t n_min = 256;
    std::int64_t n_max = std::int64_t(1) << 22;
};

// |f'| samples shared between integrals of the same map and radius (different
// exponents t reuse one sampling pass). Keeps the few largest circles.
class SampleStore {
public:
    explicit SampleStore(std::size_t capacity = 4) : capacity_(capacity) {}
    // Returns |f'(r e^{2 pi i j / n})| for j = 0..n-1.
    std::vector<double> abs_derivative(const AnalyticMap& map, double r, std::int64_t n);

private:
    struct Entry {
        std::string key;
        std::int64_t n;
        std::vector<double> values;
    };
    std::mutex mutex_;
    std::size_t capacity_;
    std::list<Entry> entries_;
};

struct MeanEntry {
    double r;
    std::int64_t n_points;
    double value;        // integral over [0, 2pi], finite and positive
    double est_rel_err;  // relative change across the last point-count doubling
};

struct MeanSeries {
    std::vector<MeanEntry> entries;  // strictly increasing in r
    std::string map_id;
    double t = 0.0;
};

struct MeanResult {
    double value;
    std::int64_t n_used;
    double est_rel_err;
    std::int64_t underflow_count = 0;  // |f'|^t clamped to 0 below exp(-700)
};

// Values of derivative(map) at the n equispaced points r e^{2 pi i j / n}.
// n must be a power of two, n >= 8.
std::vector<Complex> circle_eval(const AnalyticMap& map, double r, std::int64_t n);

// Trapezoid integral of |f'|^t over the circle of radius r, with the point
// count doubled from its peak-resolving floor until the relative change drops
// below rtol. Results are cached under (map_id, t, r, n).
MeanResult mean_integral(const AnalyticMap& map, double t, double r, double rtol,
                         ResultCache* cache = nullptr, const CircleOptions& opts = {},
                         SampleStore* store = nullptr);

MeanSeries mean_series(const AnalyticMap& map, double t, const RadiusLadder& ladder,
                       double rtol, ResultCache* cache = nullptr,
                       const CircleOptions& opts = {}, SampleStore* store = nullptr);

// Per-annulus weighted area integrals
//   A_k = (1/pi) * iint_{r_k < |z| < r_{k+1}} |f'|^t (1-|z|^2)^alpha dA,
// one value per consecutive ladder pair, by radial Gauss-Legendre over circle
// means. Their tail ratio decides square-integrability against the weight.
std::vector<double> area_tail_integral(const AnalyticMap& map, double t, double alpha,
                                       const RadiusLadder& ladder, double rtol = 1e-6,
                                       ResultCache* cache = nullptr,
                                       const CircleOptions& opts = {},
                                       SampleStore* store = nullptr);

namespace detail {
// Complex values of `map` itself (not its derivative) on the circle.
// Primitive nodes are continued incrementally around the circle from a single
// radial anchor, which evaluates the same path integrals as the radial
// definition at a fraction of the cost.
std::vector<Complex> circle_values(const MapNode& node, double r, std::int64_t n);
std::int64_t initial_point_count(double r, const CircleOptions& opts);
} // namespace detail

} // namespace ims

#endif
