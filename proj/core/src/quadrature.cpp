#include "ims/quadrature.hpp"
#include "ims/errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>

namespace ims {

namespace {

constexpr std::int64_t kChunk = 1 << 16;

bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

Complex circle_point(double r, double theta) {
    return Complex(r * std::cos(theta), r * std::sin(theta));
}

// Arc integral of g along |z| = r from angle t0 to t1; bisection against a
// two-panel estimate, recursing where the integrand is locally hard.
Complex arc_integral(const MapNode& g, double r, double t0, double t1, double tol,
                     int depth = 0) {
    const auto& rule = detail::gauss_rule(8);
    auto gl = [&](double a, double b) {
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        Complex acc = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            double theta = mid + half * rule.x[i];
            Complex z = circle_point(r, theta);
            acc += rule.w[i] * eval_node(g, z) * Complex(0.0, 1.0) * z;
        }
        return acc * half;
    };
    Complex whole = gl(t0, t1);
    double tm = 0.5 * (t0 + t1);
    Complex left = gl(t0, tm), right = gl(tm, t1);
    if (std::abs(left + right - whole) <= tol || depth >= 28) return left + right;
    return arc_integral(g, r, t0, tm, 0.5 * tol, depth + 1) +
           arc_integral(g, r, tm, t1, 0.5 * tol, depth + 1);
}

std::vector<Complex> pointwise_circle(const MapNode& node, double r, std::int64_t n) {
    std::vector<Complex> out(static_cast<std::size_t>(n));
    detail::parallel_chunks(n, kChunk, [&](std::int64_t, std::int64_t b, std::int64_t e) {
        for (std::int64_t j = b; j < e; ++j) {
            double theta = 2.0 * M_PI * double(j) / double(n);
            out[static_cast<std::size_t>(j)] = eval_node(node, circle_point(r, theta));
        }
    });
    return out;
}

// Phase-unwrapped log of the given circle values, anchored at the principal
// log continued radially from 0. log f' is single-valued on the disk, so the
// unwrapped branch must close around the circle.
std::vector<Complex> unwrapped_log(const MapNode& base_deriv, const std::vector<Complex>& w,
                                   double r) {
    Complex anchor;
    for (int steps = 64;; steps *= 2) {
        if (steps > (1 << 22))
            throw QuadratureError("branch anchor continuation failed on the radius");
        Complex prev = eval_node(base_deriv, 0.0);
        if (std::abs(prev) < 1e-300)
            throw EvaluationError("derivative vanishes at the branch anchor");
        Complex acc = std::log(prev);
        bool ok = true;
        for (int k = 1; k <= steps; ++k) {
            Complex v = eval_node(base_deriv, Complex(r * double(k) / steps, 0.0));
            if (std::abs(v) < 1e-300)
                throw EvaluationError("derivative vanishes on the radius");
            Complex ratio = v / prev;
            if (std::abs(ratio - Complex(1.0, 0.0)) > 0.7) {
                ok = false;
                break;
            }
            acc += std::log(ratio);
            prev = v;
        }
        if (ok) {
            anchor = acc;
            break;
        }
    }
    std::vector<Complex> logs(w.size());
    logs[0] = anchor;
    for (std::size_t j = 1; j < w.size(); ++j) {
        Complex ratio = w[j] / w[j - 1];
        if (!(std::abs(ratio) > 0.0) || std::abs(ratio - Complex(1.0, 0.0)) > 0.95)
            throw QuadratureError("circle sampling too coarse to track the branch");
        logs[j] = logs[j - 1] + std::log(ratio);
    }
    Complex back = logs.back() + std::log(w[0] / w.back());
    if (std::abs(back - logs[0]) > 1e-6)
        throw QuadratureError("branch continuation did not close around the circle");
    return logs;
}

} // namespace

namespace detail {

std::int64_t initial_point_count(double r, const CircleOptions& opts) {
    double needed = opts.density * 2.0 * M_PI / (1.0 - r);
    std::int64_t n = opts.n_min;
    while (double(n) < needed) n <<= 1;
    return n;
}

std::vector<Complex> circle_values(const MapNode& node, double r, std::int64_t n) {
    switch (node.kind) {
    case NodeKind::Sum: {
        auto a = circle_values(*node.lhs, r, n);
        auto b = circle_values(*node.rhs, r, n);
        for (std::int64_t j = 0; j < n; ++j) a[j] += b[j];
        return a;
    }
    case NodeKind::Product: {
        auto a = circle_values(*node.lhs, r, n);
        auto b = circle_values(*node.rhs, r, n);
        for (std::int64_t j = 0; j < n; ++j) a[j] *= b[j];
        return a;
    }
    case NodeKind::Quotient: {
        auto a = circle_values(*node.lhs, r, n);
        auto b = circle_values(*node.rhs, r, n);
        for (std::int64_t j = 0; j < n; ++j) {
            if (std::abs(b[j]) < 1e-14)
                throw EvaluationError("denominator within 1e-14 of zero on the circle");
            a[j] /= b[j];
        }
        return a;
    }
    case NodeKind::Exp: {
        auto a = circle_values(*node.lhs, r, n);
        for (std::int64_t j = 0; j < n; ++j) a[j] = std::exp(a[j]);
        return a;
    }
    case NodeKind::ScaleArg:
        return circle_values(*node.lhs, node.a.real() * r, n);
    case NodeKind::Primitive: {
        // one radial anchor at theta = 0, then arc steps between neighbours;
        // the closure defect measures the accumulated drift
        const MapNode& g = *node.lhs;
        std::vector<Complex> vals(static_cast<std::size_t>(n));
        vals[0] = eval_node(node, Complex(r, 0.0));
        double scale = std::max(1.0, std::abs(vals[0]));
        double step_tol = std::max(node.quad.rtol / double(n), 1e-16) * scale;
        double dtheta = 2.0 * M_PI / double(n);
        for (std::int64_t j = 1; j < n; ++j)
            vals[j] = vals[j - 1] + arc_integral(g, r, (j - 1) * dtheta, j * dtheta, step_tol);
        Complex closure =
            vals.back() + arc_integral(g, r, (n - 1) * dtheta, 2.0 * M_PI, step_tol) - vals[0];
        if (std::abs(closure) > 1e-8 * scale)
            throw QuadratureError("circle continuation of a primitive did not close");
        return vals;
    }
    case NodeKind::DerivPowFn: {
        auto w = circle_values(*node.rhs, r, n);
        auto logs = unwrapped_log(*node.rhs, w, r);
        std::vector<Complex> out(w.size());
        for (std::size_t j = 0; j < w.size(); ++j)
            out[j] = std::exp(node.a.real() * logs[j]);
        return out;
    }
    default:
        return pointwise_circle(node, r, n);
    }
}

} // namespace detail

std::vector<Complex> circle_eval(const AnalyticMap& map, double r, std::int64_t n) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("circle radius must lie in (0, 1)");
    if (n < 8 || !is_power_of_two(n))
        throw RangeError("circle point count must be a power of two, n >= 8");
    AnalyticMap d = map.derivative();
    return detail::circle_values(*d.node(), r, n);
}

std::vector<double> SampleStore::abs_derivative(const AnalyticMap& map, double r,
                                                std::int64_t n) {
    std::string key = map.content_hash() + "|r=" + detail::format_double(r);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        for (auto it = entries_.begin(); it != entries_.end(); ++it) {
            if (it->key == key && it->n >= n && it->n % n == 0) {
                std::int64_t stride = it->n / n;
                std::vector<double> out(static_cast<std::size_t>(n));
                for (std::int64_t j = 0; j < n; ++j)
                    out[static_cast<std::size_t>(j)] =
                        it->values[static_cast<std::size_t>(j * stride)];
                entries_.splice(entries_.begin(), entries_, it);
                return out;
            }
        }
    }
    AnalyticMap d = map.derivative();
    auto vals = detail::circle_values(*d.node(), r, n);
    std::vector<double> abs_vals(vals.size());
    for (std::size_t j = 0; j < vals.size(); ++j) abs_vals[j] = std::abs(vals[j]);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        entries_.remove_if([&](const Entry& e) { return e.key == key && e.n < n; });
        entries_.push_front(Entry{std::move(key), n, abs_vals});
        while (entries_.size() > capacity_) entries_.pop_back();
    }
    return abs_vals;
}

namespace {

// |f'|^t with the documented underflow clamp: exponents below -700 flush to
// zero and are counted.
std::vector<double> power_values(const std::vector<double>& abs_vals, double t,
                                 std::int64_t* underflow) {
    std::int64_t n = static_cast<std::int64_t>(abs_vals.size());
    std::vector<double> p(abs_vals.size());
    std::int64_t nchunks = (n + kChunk - 1) / kChunk;
    std::vector<std::int64_t> uf(nchunks, 0);
    detail::parallel_chunks(n, kChunk, [&](std::int64_t c, std::int64_t b, std::int64_t e) {
        std::int64_t local = 0;
        for (std::int64_t j = b; j < e; ++j) {
            double a = abs_vals[static_cast<std::size_t>(j)];
            if (a <= 0.0) {
                if (t > 0.0) {
                    p[static_cast<std::size_t>(j)] = 0.0;
                    continue;
                }
                throw EvaluationError("|f'| vanished on the circle with t <= 0");
            }
            double lp = t * std::log(a);
            if (lp < -700.0) {
                p[static_cast<std::size_t>(j)] = 0.0;
                ++local;
            } else {
                p[static_cast<std::size_t>(j)] = std::exp(lp);
            }
        }
        uf[c] = local;
    });
    for (auto u : uf) *underflow += u;
    return p;
}

// Equispaced trapezoid sum over every `stride`-th sample. Chunk boundaries
// live in the subsample's own index space, so the result is bit-identical to
// a direct computation on the coarser grid.
double trapezoid_level(const std::vector<double>& p, std::int64_t stride) {
    std::int64_t m = static_cast<std::int64_t>(p.size()) / stride;
    std::int64_t nchunks = (m + kChunk - 1) / kChunk;
    std::vector<long double> partial(nchunks, 0.0L);
    detail::parallel_chunks(m, kChunk, [&](std::int64_t c, std::int64_t b, std::int64_t e) {
        long double acc = 0.0L;
        for (std::int64_t jj = b; jj < e; ++jj)
            acc += p[static_cast<std::size_t>(jj * stride)];
        partial[c] = acc;
    });
    long double total = 0.0L;
    for (auto v : partial) total += v;
    return double(total * (2.0 * M_PI / double(m)));
}

} // namespace

MeanResult mean_integral(const AnalyticMap& map, double t, double r, double rtol,
                         ResultCache* cache, const CircleOptions& opts, SampleStore* store) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("circle radius must lie in (0, 1)");
    if (!(rtol > 1e-14 && rtol < 1e-2)) throw RangeError("rtol must lie in (1e-14, 1e-2)");
    const std::string map_id = map.content_hash();

    std::int64_t n0 = detail::initial_point_count(r, opts);
    if (n0 > opts.n_max)
        throw NonConvergence("rung deeper than the configured point budget allows");

    if (t == 0.0) {
        double tau = 2.0 * M_PI;
        if (cache) cache->store(ResultCache::key(map_id, t, r, n0), tau);
        return MeanResult{tau, n0, 0.0, 0};
    }

    SampleStore local(1);
    SampleStore* st = store ? store : &local;

    auto cached = [&](std::int64_t n) -> std::optional<double> {
        if (!cache) return std::nullopt;
        return cache->lookup(ResultCache::key(map_id, t, r, n));
    };
    auto remember = [&](std::int64_t n, double v) {
        if (cache) cache->store(ResultCache::key(map_id, t, r, n), v);
    };

    double prev = -1.0;  // value at the previous doubling level
    std::int64_t underflow = 0;
    for (std::int64_t n = n0;; n <<= 1) {
        double value, base;
        auto hit = cached(n);
        auto hit_half = cached(n / 2);
        if (hit && (prev >= 0.0 || hit_half)) {
            value = *hit;
            base = prev >= 0.0 ? prev : *hit_half;
        } else {
            auto abs_vals = st->abs_derivative(map, r, n);
            auto p = power_values(abs_vals, t, &underflow);
            value = trapezoid_level(p, 1);
            double half = trapezoid_level(p, 2);
            remember(n / 2, half);
            remember(n / 4, trapezoid_level(p, 4));
            base = prev >= 0.0 ? prev : half;
        }
        remember(n, value);
        if (!(value > 0.0) || !std::isfinite(value))
            throw EvaluationError("circle integral is not finite and positive");
        double est = std::abs(value - base) / value;
        if (est < rtol) return MeanResult{value, n, est, underflow};
        if ((n << 1) > opts.n_max) {
            if (est <= 10.0 * rtol) return MeanResult{value, n, est, underflow};
            throw NonConvergence("circle integral still changing at the point budget");
        }
        prev = value;
    }
}

MeanSeries mean_series(const AnalyticMap& map, double t, const RadiusLadder& ladder,
                       double rtol, ResultCache* cache, const CircleOptions& opts,
                       SampleStore* store) {
    MeanSeries series;
    series.map_id = map.content_hash();
    series.t = t;
    for (double r : ladder.radii()) {
        MeanResult res = mean_integral(map, t, r, rtol, cache, opts, store);
        series.entries.push_back(MeanEntry{r, res.n_used, res.value, res.est_rel_err});
    }
    return series;
}

std::vector<double> area_tail_integral(const AnalyticMap& map, double t, double alpha,
                                       const RadiusLadder& ladder, double rtol,
                                       ResultCache* cache, const CircleOptions& opts,
                                       SampleStore* store) {
    if (!(alpha > -1.0)) throw RangeError("area weight exponent must exceed -1");
    const auto radii = ladder.radii();
    const auto& rule = detail::gauss_rule(8);
    std::vector<double> annuli;
    annuli.reserve(radii.size() - 1);
    for (std::size_t k = 0; k + 1 < radii.size(); ++k) {
        double lo = radii[k], hi = radii[k + 1];
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        long double acc = 0.0L;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            double rho = mid + half * rule.x[i];
            double mean = mean_integral(map, t, rho, rtol, cache, opts, store).value;
            double weight = std::pow(1.0 - rho * rho, alpha);
            acc += static_cast<long double>(rule.w[i]) * mean * weight * rho;
        }
        annuli.push_back(double(acc * half / M_PI));
    }
    return annuli;
}

} // namespace ims
