#include "ims/norms.hpp"
#include "ims/errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>

namespace ims {

std::vector<double> GridSpec::radii() const {
    if (!(r_min >= 0.0 && r_min < r_max && r_max <= 1.0 - 0x1p-15 + 1e-12))
        throw RangeError("grid radii must satisfy 0 <= r_min < r_max <= 1 - 2^-15");
    std::vector<double> out;
    out.reserve(radial_steps);
    double q = std::pow((1.0 - r_max) / (1.0 - r_min), 1.0 / (radial_steps - 1));
    for (int i = 0; i < radial_steps; ++i)
        out.push_back(1.0 - (1.0 - r_min) * std::pow(q, i));
    out.back() = r_max;
    return out;
}

namespace {

double weighted(const MapNode& node, Complex z, int j) {
    double w = 1.0 - std::norm(z);
    double v = std::abs(eval_node(node, z));
    return j == 1 ? v * w : v * w * w;
}

struct GridMax {
    double value = -1.0;
    Complex witness{};
};

// Row maxima of the weighted modulus over radii x angles; rows evaluated
// concurrently, reduced in radial order.
std::vector<GridMax> row_maxima(const MapNode& node, const std::vector<double>& radii,
                                int angular, int j) {
    std::vector<GridMax> rows(radii.size());
    detail::parallel_chunks(static_cast<std::int64_t>(radii.size()), 1,
                            [&](std::int64_t, std::int64_t b, std::int64_t e) {
        for (std::int64_t i = b; i < e; ++i) {
            GridMax best;
            double r = radii[static_cast<std::size_t>(i)];
            for (int a = 0; a < angular; ++a) {
                double theta = 2.0 * M_PI * a / angular;
                Complex z(r * std::cos(theta), r * std::sin(theta));
                double v = weighted(node, z, j);
                if (v > best.value) {
                    best.value = v;
                    best.witness = z;
                }
            }
            rows[static_cast<std::size_t>(i)] = best;
        }
    });
    return rows;
}

GridMax refine_around(const MapNode& node, const GridSpec& grid, int j, Complex witness,
                      GridMax best) {
    double r0 = std::abs(witness);
    if (r0 == 0.0) return best;
    double theta0 = std::arg(witness);
    // one cell in each direction at 3x the grid density
    double lr = std::log(1.0 - grid.r_min) , hr = std::log(1.0 - grid.r_max);
    double dstep = (hr - lr) / (grid.radial_steps - 1);  // log(1-r) spacing (negative)
    double astep = 2.0 * M_PI / grid.angular_steps;
    double l0 = std::log(1.0 - r0);
    for (int ir = -3; ir <= 3; ++ir) {
        double l = l0 + dstep * ir / 3.0;
        double r = 1.0 - std::exp(l);
        if (r < 0.0 || r > grid.r_max) continue;
        for (int ia = -3; ia <= 3; ++ia) {
            double theta = theta0 + astep * ia / 3.0;
            Complex z(r * std::cos(theta), r * std::sin(theta));
            double v = weighted(node, z, j);
            if (v > best.value) {
                best.value = v;
                best.witness = z;
            }
        }
    }
    return best;
}

std::vector<std::pair<double, double>> dyadic_tail(const std::vector<double>& radii,
                                                   const std::vector<GridMax>& rows,
                                                   int k_lo, int k_hi) {
    // suffix maxima over the radial rows, then read off at the dyadic rungs
    std::vector<double> suffix(rows.size());
    double acc = -1.0;
    for (std::size_t i = rows.size(); i-- > 0;) {
        acc = std::max(acc, rows[i].value);
        suffix[i] = acc;
    }
    std::vector<std::pair<double, double>> profile;
    for (int k = k_lo; k <= k_hi; ++k) {
        double rk = 1.0 - std::ldexp(1.0, -k);
        // strictly beyond the rung
        std::size_t idx = rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (radii[i] > rk + 1e-15) {
                idx = i;
                break;
            }
        }
        if (idx == rows.size()) break;
        profile.emplace_back(rk, suffix[idx]);
    }
    return profile;
}

} // namespace

GrowthReport growth_norm(const AnalyticMap& phi, int j, const GridSpec& grid) {
    if (j != 1 && j != 2) throw RangeError("growth norm order j must be 1 or 2");
    GrowthReport rep;
    rep.j = j;
    rep.grid = grid;

    auto radii = grid.radii();
    const MapNode& node = *phi.node();
    auto rows = row_maxima(node, radii, grid.angular_steps, j);

    GridMax best;
    best.value = weighted(node, Complex(0.0, 0.0), j);  // center point
    best.witness = Complex(0.0, 0.0);
    for (const auto& row : rows)
        if (row.value > best.value) best = row;
    best = refine_around(node, grid, j, best.witness, best);

    rep.value = best.value;
    rep.witness = best.witness;
    rep.tail_profile = dyadic_tail(radii, rows, 3, 14);
    return rep;
}

double tail_deviation(const AnalyticMap& f, const AnalyticMap& g, double r,
                      const GridSpec& grid) {
    if (!(r > 0.0 && r < grid.r_max))
        throw RangeError("tail deviation start radius must lie in (0, r_max)");
    AnalyticMap diff = AnalyticMap::sum(
        g.pre_schwarzian(),
        AnalyticMap::product(AnalyticMap::constant(-1.0), f.pre_schwarzian()));
    auto radii = grid.radii();
    std::vector<double> tail;
    for (double rr : radii)
        if (rr > r) tail.push_back(rr);
    if (tail.empty()) tail.push_back(grid.r_max);
    auto rows = row_maxima(*diff.node(), tail, grid.angular_steps, 1);
    GridMax best;
    for (const auto& row : rows)
        if (row.value > best.value) best = row;
    best = refine_around(*diff.node(), grid, 1, best.witness, best);
    return std::max(best.value, 0.0);
}

std::vector<std::pair<double, double>> asymptotic_seminorm(const AnalyticMap& phi, int j,
                                                           const GridSpec& grid) {
    if (j != 1 && j != 2) throw RangeError("growth norm order j must be 1 or 2");
    auto radii = grid.radii();
    auto rows = row_maxima(*phi.node(), radii, grid.angular_steps, j);
    return dyadic_tail(radii, rows, 3, 12);
}

LittleOReport little_o_test(const AnalyticMap& phi, int j, double threshold,
                            const GridSpec& grid) {
    if (j != 1 && j != 2) throw RangeError("growth norm order j must be 1 or 2");
    LittleOReport rep;
    rep.threshold = threshold;
    auto radii = grid.radii();
    auto rows = row_maxima(*phi.node(), radii, grid.angular_steps, j);
    rep.profile = dyadic_tail(radii, rows, 3, 14);
    if (rep.profile.size() < 3) return rep;
    std::size_t n = rep.profile.size();
    bool ok = true;
    for (std::size_t i = n - 3; i < n; ++i)
        if (!(rep.profile[i].second < threshold)) ok = false;
    for (std::size_t i = n - 2; i < n; ++i)
        if (!(rep.profile[i].second <= rep.profile[i - 1].second)) ok = false;
    rep.is_little_o = ok;
    return rep;
}

} // namespace ims
