#include "ims/analytic_map.hpp"
#include "ims/errors.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>

namespace ims {

namespace detail {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Nodes and weights by Newton iteration on the Legendre recurrence.
static GaussRule compute_gauss(int n) {
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p0 = 0, p1 = 0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        rule.x[i] = x;
        rule.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const GaussRule& gauss_rule(int n) {
    static std::mutex m;
    static std::map<int, GaussRule> rules;
    std::lock_guard<std::mutex> lock(m);
    auto it = rules.find(n);
    if (it == rules.end()) it = rules.emplace(n, compute_gauss(n)).first;
    return it->second;
}

} // namespace detail

namespace {

std::string fmt_c(Complex c) {
    return detail::format_double(c.real()) + "," + detail::format_double(c.imag());
}

bool is_const(const NodePtr& n, Complex* c = nullptr) {
    if (n->kind != NodeKind::Constant) return false;
    if (c) *c = n->a;
    return true;
}

bool is_const_value(const NodePtr& n, double v) {
    return n->kind == NodeKind::Constant && n->a == Complex(v, 0.0);
}

// Matches c*(1-z)^p, with c possibly the implicit 1.
bool match_pow(const NodePtr& n, Complex* coeff, Complex* power) {
    if (n->kind == NodeKind::PowOneMinusZ) {
        *coeff = 1.0;
        *power = n->a;
        return true;
    }
    if (n->kind == NodeKind::Product && n->lhs->kind == NodeKind::Constant &&
        n->rhs->kind == NodeKind::PowOneMinusZ) {
        *coeff = n->lhs->a;
        *power = n->rhs->a;
        return true;
    }
    return false;
}

NodePtr make_node(MapNode&& n) { return std::make_shared<const MapNode>(std::move(n)); }

NodePtr n_const(Complex c) {
    MapNode n;
    n.kind = NodeKind::Constant;
    n.a = c;
    n.nowhere_zero = (c != Complex(0.0, 0.0));
    n.canon = "c(" + fmt_c(c) + ")";
    return make_node(std::move(n));
}

NodePtr n_identity() {
    MapNode n;
    n.kind = NodeKind::Identity;
    n.cert = Univalence::CatalogCertified;
    n.canon = "id";
    return make_node(std::move(n));
}

NodePtr n_affine(Complex a, Complex b) {
    if (a == Complex(0.0, 0.0)) return n_const(b);
    if (a == Complex(1.0, 0.0) && b == Complex(0.0, 0.0)) return n_identity();
    MapNode n;
    n.kind = NodeKind::Affine;
    n.a = a;
    n.b = b;
    n.cert = Univalence::CatalogCertified;
    n.nowhere_zero = std::abs(b) >= std::abs(a);  // zero at -b/a lies outside the open disk
    n.canon = "aff(" + fmt_c(a) + ";" + fmt_c(b) + ")";
    return make_node(std::move(n));
}

NodePtr n_pow(Complex s) {
    if (s == Complex(0.0, 0.0)) return n_const(1.0);
    MapNode n;
    n.kind = NodeKind::PowOneMinusZ;
    n.a = s;
    n.nowhere_zero = true;  // Re(1-z) > 0 on the disk
    n.canon = "pow1mz(" + fmt_c(s) + ")";
    return make_node(std::move(n));
}

NodePtr n_log1mz() {
    MapNode n;
    n.kind = NodeKind::Log1mZ;
    n.cert = Univalence::CatalogCertified;
    n.canon = "log1mz";
    return make_node(std::move(n));
}

NodePtr n_koebe() {
    MapNode n;
    n.kind = NodeKind::Koebe;
    n.cert = Univalence::CatalogCertified;
    n.canon = "koebe";
    return make_node(std::move(n));
}

NodePtr n_sum(NodePtr l, NodePtr r) {
    Complex cl, cr;
    if (is_const(l, &cl) && is_const(r, &cr)) return n_const(cl + cr);
    if (is_const_value(l, 0.0)) return r;
    if (is_const_value(r, 0.0)) return l;
    // affine translate of a certified map stays univalent
    MapNode n;
    n.kind = NodeKind::Sum;
    if (r->kind == NodeKind::Constant) n.cert = l->cert;
    if (l->kind == NodeKind::Constant) n.cert = r->cert;
    n.lhs = std::move(l);
    n.rhs = std::move(r);
    n.canon = "sum(" + n.lhs->canon + "," + n.rhs->canon + ")";
    return make_node(std::move(n));
}

NodePtr n_product(NodePtr l, NodePtr r) {
    Complex cl, cr;
    if (is_const(l, &cl) && is_const(r, &cr)) return n_const(cl * cr);
    if (is_const_value(l, 0.0) || is_const_value(r, 0.0)) return n_const(0.0);
    if (is_const_value(l, 1.0)) return r;
    if (is_const_value(r, 1.0)) return l;
    if (is_const(r)) std::swap(l, r);  // constants collect on the left
    // c * (d * X) -> (c d) * X
    if (is_const(l, &cl) && r->kind == NodeKind::Product && is_const(r->lhs, &cr))
        return n_product(n_const(cl * cr), r->rhs);
    // (1-z)^p * (1-z)^q -> (1-z)^{p+q}
    {
        Complex c1, p1, c2, p2;
        if (match_pow(l, &c1, &p1) && match_pow(r, &c2, &p2))
            return n_product(n_const(c1 * c2), n_pow(p1 + p2));
    }
    MapNode n;
    n.kind = NodeKind::Product;
    n.nowhere_zero = l->nowhere_zero && r->nowhere_zero;
    if (is_const(l, &cl) && cl != Complex(0.0, 0.0)) n.cert = r->cert;  // affine rescale
    n.lhs = std::move(l);
    n.rhs = std::move(r);
    n.canon = "prod(" + n.lhs->canon + "," + n.rhs->canon + ")";
    return make_node(std::move(n));
}

NodePtr n_quotient(NodePtr l, NodePtr r) {
    Complex cl, cr;
    if (is_const(r, &cr)) {
        if (cr == Complex(0.0, 0.0)) throw EvaluationError("division by constant zero");
        return n_product(n_const(Complex(1.0, 0.0) / cr), std::move(l));
    }
    if (is_const_value(l, 0.0)) return n_const(0.0);
    // identical analytic expressions cancel (any zero is removable)
    if (l->canon == r->canon) return n_const(1.0);
    // (c X)/(d Y) -> (c/d)(X/Y)
    {
        NodePtr nl = l, nr = r;
        Complex num = 1.0, den = 1.0;
        if (nl->kind == NodeKind::Product && is_const(nl->lhs, &cl)) {
            num = cl;
            nl = nl->rhs;
        }
        if (nr->kind == NodeKind::Product && is_const(nr->lhs, &cr)) {
            den = cr;
            nr = nr->rhs;
        }
        if (num != Complex(1.0, 0.0) || den != Complex(1.0, 0.0))
            return n_product(n_const(num / den), n_quotient(nl, nr));
    }
    // power cancellation
    {
        Complex c1, p1, c2, p2;
        if (match_pow(l, &c1, &p1) && match_pow(r, &c2, &p2))
            return n_product(n_const(c1 / c2), n_pow(p1 - p2));
    }
    // (A X)/X -> A when X is zero-free
    if (l->kind == NodeKind::Product && l->rhs->canon == r->canon && r->nowhere_zero)
        return l->lhs;
    if (l->kind == NodeKind::Product && l->lhs->canon == r->canon && r->nowhere_zero)
        return l->rhs;
    MapNode n;
    n.kind = NodeKind::Quotient;
    n.nowhere_zero = l->nowhere_zero;
    n.lhs = std::move(l);
    n.rhs = std::move(r);
    n.canon = "quot(" + n.lhs->canon + "," + n.rhs->canon + ")";
    return make_node(std::move(n));
}

NodePtr n_scale(double rho, NodePtr inner) {
    if (rho <= 0.0 || rho > 1.0) throw RangeError("scale factor must lie in (0, 1]");
    if (rho == 1.0) return inner;
    if (inner->kind == NodeKind::ScaleArg)
        return n_scale(rho * inner->a.real(), inner->lhs);
    if (inner->kind == NodeKind::Constant) return inner;
    MapNode n;
    n.kind = NodeKind::ScaleArg;
    n.a = rho;
    n.cert = inner->cert;  // precomposition with z -> rho z preserves injectivity
    n.nowhere_zero = inner->nowhere_zero;
    n.lhs = std::move(inner);
    n.canon = "scale(" + detail::format_double(rho) + "," + n.lhs->canon + ")";
    return make_node(std::move(n));
}

NodePtr n_exp(NodePtr inner) {
    Complex c;
    if (is_const(inner, &c)) return n_const(std::exp(c));
    MapNode n;
    n.kind = NodeKind::Exp;
    n.nowhere_zero = true;
    n.lhs = std::move(inner);
    n.canon = "exp(" + n.lhs->canon + ")";
    return make_node(std::move(n));
}

NodePtr n_primitive(NodePtr integrand, const PrimitiveQuadrature& quad) {
    MapNode n;
    n.kind = NodeKind::Primitive;
    n.quad = quad;
    n.lhs = std::move(integrand);
    n.canon = "prim[" + detail::format_double(quad.rtol) + "," +
              std::to_string(quad.panel_nodes) + "](" + n.lhs->canon + ")";
    return make_node(std::move(n));
}

NodePtr derivative_node(const NodePtr& f);  // fwd

NodePtr n_derivpowfn(NodePtr base, double s) {
    MapNode n;
    n.kind = NodeKind::DerivPowFn;
    n.a = s;
    n.rhs = derivative_node(base);
    n.lhs = std::move(base);
    n.nowhere_zero = true;
    n.canon = "dpowfn(" + n.lhs->canon + ";" + detail::format_double(s) + ")";
    return make_node(std::move(n));
}

NodePtr n_compose(NodePtr outer, NodePtr inner) {
    if (inner->kind == NodeKind::Identity) return outer;
    if (outer->kind == NodeKind::Identity) return inner;
    if (outer->kind == NodeKind::Constant) return outer;
    // z -> rho z folds into a ScaleArg node
    if (inner->kind == NodeKind::Affine && inner->b == Complex(0.0, 0.0) &&
        inner->a.imag() == 0.0 && inner->a.real() > 0.0 && inner->a.real() <= 1.0)
        return n_scale(inner->a.real(), outer);
    // affine postcomposition is an exact tree
    if (outer->kind == NodeKind::Affine)
        return n_sum(n_product(n_const(outer->a), inner), n_const(outer->b));
    MapNode n;
    n.kind = NodeKind::Compose;
    n.lhs = std::move(outer);
    n.rhs = std::move(inner);
    n.canon = "comp(" + n.lhs->canon + "," + n.rhs->canon + ")";
    return make_node(std::move(n));
}

// ---- derivatives ------------------------------------------------------------

NodePtr derivative_node(const NodePtr& f) {
    switch (f->kind) {
    case NodeKind::Identity:
        return n_const(1.0);
    case NodeKind::Constant:
        return n_const(0.0);
    case NodeKind::Affine:
        return n_const(f->a);
    case NodeKind::Log1mZ:
        return n_pow(-1.0);  // 1/(1-z)
    case NodeKind::PowOneMinusZ:
        return n_product(n_const(-f->a), n_pow(f->a - Complex(1.0, 0.0)));
    case NodeKind::Koebe:
        // (1+z)/(1-z)^3
        return n_quotient(n_affine(1.0, 1.0), n_pow(3.0));
    case NodeKind::Sum:
        return n_sum(derivative_node(f->lhs), derivative_node(f->rhs));
    case NodeKind::Product:
        return n_sum(n_product(derivative_node(f->lhs), f->rhs),
                     n_product(f->lhs, derivative_node(f->rhs)));
    case NodeKind::Quotient:
        return n_quotient(n_sum(n_product(derivative_node(f->lhs), f->rhs),
                                n_product(n_const(-1.0),
                                          n_product(f->lhs, derivative_node(f->rhs)))),
                          n_product(f->rhs, f->rhs));
    case NodeKind::ScaleArg:
        return n_product(n_const(f->a), n_scale(f->a.real(), derivative_node(f->lhs)));
    case NodeKind::DerivPower:
        return n_derivpowfn(f->lhs, f->a.real());
    case NodeKind::DerivPowFn: {
        // d/dz (base')^s = s * (base''/base') * (base')^s
        NodePtr nbase = n_quotient(derivative_node(f->rhs), f->rhs);
        return n_product(n_product(n_const(f->a), nbase), f);
    }
    case NodeKind::Primitive:
        return f->lhs;
    case NodeKind::Exp:
        return n_product(derivative_node(f->lhs), f);
    case NodeKind::Compose:
        return n_product(n_compose(derivative_node(f->lhs), f->rhs),
                         derivative_node(f->rhs));
    }
    throw std::logic_error("unknown node kind");
}

// ---- evaluation -------------------------------------------------------------

Complex primitive_eval(const MapNode& g, Complex z, const PrimitiveQuadrature& quad) {
    if (z == Complex(0.0, 0.0)) return 0.0;
    const auto& rule = detail::gauss_rule(quad.panel_nodes);
    auto integrate = [&](int panels) {
        Complex total = 0.0;
        for (int p = 0; p < panels; ++p) {
            Complex z0 = z * (double(p) / panels);
            Complex z1 = z * (double(p + 1) / panels);
            Complex mid = 0.5 * (z0 + z1), half = 0.5 * (z1 - z0);
            Complex acc = 0.0;
            for (std::size_t i = 0; i < rule.x.size(); ++i)
                acc += rule.w[i] * eval_node(g, mid + half * rule.x[i]);
            total += acc * half;
        }
        return total;
    };
    Complex prev = integrate(1);
    for (int panels = 2; panels <= quad.max_panels; panels *= 2) {
        Complex cur = integrate(panels);
        double scale = std::max(std::abs(cur), 1e-300);
        if (std::abs(cur - prev) <= quad.rtol * scale) return cur;
        prev = cur;
    }
    throw QuadratureError("primitive did not converge to rtol along [0, z]");
}

// Continuous branch of log base' along [0, z], anchored at the principal
// logarithm of base'(0).
Complex continuous_log_deriv(const MapNode& base_deriv, Complex z) {
    int steps = 8;
    while (true) {
        Complex w_prev = eval_node(base_deriv, 0.0);
        if (std::abs(w_prev) < 1e-300)
            throw EvaluationError("derivative vanishes at the branch anchor");
        Complex logv = std::log(w_prev);
        bool ok = true;
        for (int k = 1; k <= steps; ++k) {
            Complex w = eval_node(base_deriv, z * (double(k) / steps));
            if (std::abs(w) < 1e-300) throw EvaluationError("derivative vanishes on the path");
            Complex ratio = w / w_prev;
            if (std::abs(ratio - Complex(1.0, 0.0)) > 0.7) {
                ok = false;
                break;
            }
            logv += std::log(ratio);
            w_prev = w;
        }
        if (ok) return logv;
        steps *= 2;
        if (steps > (1 << 20))
            throw EvaluationError("branch continuation failed; derivative nearly vanishes on the path");
    }
}

} // namespace

Complex eval_node(const MapNode& n, Complex z) {
    switch (n.kind) {
    case NodeKind::Identity:
        return z;
    case NodeKind::Constant:
        return n.a;
    case NodeKind::Affine:
        return n.a * z + n.b;
    case NodeKind::Log1mZ:
        return -std::log(Complex(1.0, 0.0) - z);
    case NodeKind::PowOneMinusZ:
        return std::exp(n.a * std::log(Complex(1.0, 0.0) - z));
    case NodeKind::Koebe: {
        Complex d = Complex(1.0, 0.0) - z;
        return z / (d * d);
    }
    case NodeKind::Sum:
        return eval_node(*n.lhs, z) + eval_node(*n.rhs, z);
    case NodeKind::Product:
        return eval_node(*n.lhs, z) * eval_node(*n.rhs, z);
    case NodeKind::Quotient: {
        Complex den = eval_node(*n.rhs, z);
        if (std::abs(den) < 1e-14)
            throw EvaluationError("denominator within 1e-14 of zero at the queried point");
        return eval_node(*n.lhs, z) / den;
    }
    case NodeKind::ScaleArg:
        return eval_node(*n.lhs, n.a.real() * z);
    case NodeKind::DerivPower: {
        // integral of (base')^s from 0 to z
        NodePtr fn = n_derivpowfn(n.lhs, n.a.real());
        return primitive_eval(*fn, z, n.quad);
    }
    case NodeKind::DerivPowFn:
        return std::exp(n.a.real() * continuous_log_deriv(*n.rhs, z));
    case NodeKind::Primitive:
        return primitive_eval(*n.lhs, z, n.quad);
    case NodeKind::Exp:
        return std::exp(eval_node(*n.lhs, z));
    case NodeKind::Compose: {
        Complex w = eval_node(*n.rhs, z);
        if (std::abs(w) >= 1.0)
            throw DomainError("inner map left the unit disk at the queried point");
        return eval_node(*n.lhs, w);
    }
    }
    throw std::logic_error("unknown node kind");
}

// ---- public surface ---------------------------------------------------------

AnalyticMap AnalyticMap::identity() { return AnalyticMap(n_identity()); }
AnalyticMap AnalyticMap::constant(Complex c) { return AnalyticMap(n_const(c)); }
AnalyticMap AnalyticMap::affine(Complex a, Complex b) { return AnalyticMap(n_affine(a, b)); }
AnalyticMap AnalyticMap::log_one_minus() { return AnalyticMap(n_log1mz()); }
AnalyticMap AnalyticMap::pow_one_minus(Complex s) { return AnalyticMap(n_pow(s)); }
AnalyticMap AnalyticMap::koebe() { return AnalyticMap(n_koebe()); }

AnalyticMap AnalyticMap::sum(const AnalyticMap& l, const AnalyticMap& r) {
    return AnalyticMap(n_sum(l.node_, r.node_));
}
AnalyticMap AnalyticMap::product(const AnalyticMap& l, const AnalyticMap& r) {
    return AnalyticMap(n_product(l.node_, r.node_));
}
AnalyticMap AnalyticMap::quotient(const AnalyticMap& l, const AnalyticMap& r) {
    return AnalyticMap(n_quotient(l.node_, r.node_));
}
AnalyticMap AnalyticMap::scale_arg(double rho, const AnalyticMap& inner) {
    return AnalyticMap(n_scale(rho, inner.node_));
}
AnalyticMap AnalyticMap::primitive(const AnalyticMap& integrand, const PrimitiveQuadrature& quad) {
    return AnalyticMap(n_primitive(integrand.node_, quad));
}
AnalyticMap AnalyticMap::exponential(const AnalyticMap& inner) {
    return AnalyticMap(n_exp(inner.node_));
}

AnalyticMap AnalyticMap::power_primitive(double q) {
    if (q == -1.0) return log_one_minus();
    // [1 - (1-z)^{q+1}]/(q+1)
    NodePtr tree = n_sum(n_const(1.0 / (q + 1.0)),
                         n_product(n_const(-1.0 / (q + 1.0)), n_pow(q + 1.0)));
    MapNode wrapped = *tree;
    // Re (1-z)^q > 0 for |q| <= 1, so the map is univalent by Noshiro-Warschawski
    if (q >= -1.0 && q <= 1.0) wrapped.cert = Univalence::CatalogCertified;
    return AnalyticMap(make_node(std::move(wrapped)));
}

AnalyticMap AnalyticMap::deriv_power(const AnalyticMap& base, double s,
                                     const PrimitiveQuadrature& quad) {
    // base' a pure power of (1-z): (c (1-w)^p)^s integrates in closed form,
    // branch anchored by the principal c^s
    NodePtr d = derivative_node(base.node_);
    Complex coeff, p;
    if (match_pow(d, &coeff, &p) && p.imag() == 0.0) {
        double q = p.real() * s;
        Complex cs = std::exp(s * std::log(coeff));
        AnalyticMap body = power_primitive(q);
        if (cs == Complex(1.0, 0.0)) return body;
        return product(constant(cs), body);  // cert propagates through the rescale
    }
    MapNode n;
    n.kind = NodeKind::DerivPower;
    n.a = s;
    n.quad = quad;
    n.lhs = base.node_;
    n.canon = "dpow(" + n.lhs->canon + ";" + detail::format_double(s) + ")";
    return AnalyticMap(make_node(std::move(n)));
}

AnalyticMap AnalyticMap::from_pre_schwarzian(const AnalyticMap& phi,
                                             const PrimitiveQuadrature& quad) {
    return primitive(exponential(primitive(phi, quad)), quad);
}

Complex AnalyticMap::eval(Complex z) const {
    if (std::abs(z) >= 1.0) throw DomainError("evaluation point outside the open unit disk");
    return eval_node(*node_, z);
}

AnalyticMap AnalyticMap::derivative() const { return AnalyticMap(derivative_node(node_)); }

AnalyticMap AnalyticMap::compose_with(const AnalyticMap& inner) const {
    return AnalyticMap(n_compose(node_, inner.node_));
}

AnalyticMap compose(const AnalyticMap& outer, const AnalyticMap& inner) {
    return outer.compose_with(inner);
}

AnalyticMap AnalyticMap::pre_schwarzian() const {
    switch (node_->kind) {
    case NodeKind::Koebe:
        // log k' = log(1+z) - 3 log(1-z), so N = 1/(1+z) + 3/(1-z)
        return AnalyticMap(n_sum(n_quotient(n_const(1.0), n_affine(1.0, 1.0)),
                                 n_product(n_const(3.0), n_pow(-1.0))));
    case NodeKind::DerivPower:
        // F' = (base')^s gives N_F = s N_base
        return AnalyticMap(n_product(n_const(node_->a),
                                     AnalyticMap(node_->lhs).pre_schwarzian().node_));
    default: {
        NodePtr d = derivative_node(node_);
        return AnalyticMap(n_quotient(derivative_node(d), d));
    }
    }
}

AnalyticMap AnalyticMap::schwarzian() const {
    AnalyticMap n = pre_schwarzian();
    NodePtr nn = n.node_;
    return AnalyticMap(n_sum(derivative_node(nn),
                             n_product(n_const(-0.5), n_product(nn, nn))));
}

bool AnalyticMap::nonvanishing_derivative() const {
    return derivative_node(node_)->nowhere_zero;
}

std::string AnalyticMap::content_hash() const {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a(node_->canon)));
    return buf;
}

} // namespace ims
