#ifndef IMS_ANALYTIC_MAP_HPP
#define IMS_ANALYTIC_MAP_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ims {

using Complex = std::complex<double>;

enum class Univalence { CatalogCertified, Unknown };

// How Primitive nodes integrate along the radial segment [0, z]:
// composite Gauss-Legendre, panel count doubled until the relative change
// between successive refinements drops below rtol.
struct PrimitiveQuadrature {
    double rtol = 1e-10;
    int panel_nodes = 32;
    int max_panels = 1 << 12;
};

enum class NodeKind {
    Identity,      // z
    Constant,      // c
    Affine,        // a*z + b
    Log1mZ,        // -log(1-z), principal branch
    PowOneMinusZ,  // (1-z)^s, principal branch
    Koebe,         // z/(1-z)^2
    Sum,
    Product,
    Quotient,
    ScaleArg,      // inner(rho*z), rho in (0,1]
    DerivPower,    // G with G(0)=0 and G' = (base')^s, branch anchored at 0
    DerivPowFn,    // (base'(z))^s itself, the derivative of DerivPower
    Primitive,     // z -> integral of the child from 0 to z (radial path)
    Exp,           // exp(child)
    Compose        // outer(inner(z)); checks |inner(z)| < 1 at evaluation
};

struct MapNode;
using NodePtr = std::shared_ptr<const MapNode>;

// Immutable expression-tree node. Shared freely across threads.
struct MapNode {
    NodeKind kind;
    Complex a{0.0, 0.0};          // Constant c / Affine a / power s / ScaleArg rho
    Complex b{0.0, 0.0};          // Affine b
    NodePtr lhs, rhs;             // children (rhs used by binary kinds; DerivPowFn
                                  // keeps the base in lhs and base' in rhs)
    PrimitiveQuadrature quad{};   // Primitive and DerivPower only
    Univalence cert = Univalence::Unknown;
    bool nowhere_zero = false;    // the represented function has no zero in the disk
    std::string canon;            // canonical serialization, built on construction
};

// Value-semantic handle for an analytic map of the unit disk.
//
// Every node defines a function analytic on |z| < 1; eval rejects |z| >= 1.
// All operations are pure functions of the tree, so instances are safe to
// share between concurrent evaluators.
class AnalyticMap {
public:
    AnalyticMap() : AnalyticMap(identity()) {}

    // catalog constructors
    static AnalyticMap identity();
    static AnalyticMap constant(Complex c);
    static AnalyticMap affine(Complex a, Complex b);
    static AnalyticMap log_one_minus();                 // -log(1-z)
    static AnalyticMap pow_one_minus(Complex s);        // (1-z)^s
    static AnalyticMap koebe();
    static AnalyticMap sum(const AnalyticMap&, const AnalyticMap&);
    static AnalyticMap product(const AnalyticMap&, const AnalyticMap&);
    static AnalyticMap quotient(const AnalyticMap&, const AnalyticMap&);
    static AnalyticMap scale_arg(double rho, const AnalyticMap& inner);
    static AnalyticMap deriv_power(const AnalyticMap& base, double s,
                                   const PrimitiveQuadrature& quad = {});
    static AnalyticMap primitive(const AnalyticMap& integrand,
                                 const PrimitiveQuadrature& quad = {});
    static AnalyticMap exponential(const AnalyticMap& inner);

    // The map with derivative (1-z)^q and value 0 at 0. Closed form
    // [1-(1-z)^{q+1}]/(q+1) for q != -1, and -log(1-z) for q = -1.
    // Hosts the power families (q = -gamma and q = +gamma) and their limits.
    static AnalyticMap power_primitive(double q);

    // f_phi(z) = int_0^z exp(int_0^zeta phi(w) dw) dzeta; f(0)=0, f'(0)=1.
    static AnalyticMap from_pre_schwarzian(const AnalyticMap& phi,
                                           const PrimitiveQuadrature& quad = {});

    Complex eval(Complex z) const;           // DomainError if |z| >= 1
    AnalyticMap derivative() const;          // exact tree (integrand for Primitive)
    AnalyticMap compose_with(const AnalyticMap& inner) const;  // this(inner(z))
    AnalyticMap pre_schwarzian() const;      // f''/f'
    AnalyticMap schwarzian() const;          // N' - N^2/2

    Univalence univalence() const { return node_->cert; }
    bool nonvanishing_derivative() const;    // derivative has no zero in the disk
    NodeKind kind() const { return node_->kind; }
    const std::string& canonical() const { return node_->canon; }
    std::string content_hash() const;        // 16 hex chars, stable across runs

    const NodePtr& node() const { return node_; }
    explicit AnalyticMap(NodePtr node) : node_(std::move(node)) {}

private:
    NodePtr node_;
};

AnalyticMap compose(const AnalyticMap& outer, const AnalyticMap& inner);

// Pointwise evaluation of an arbitrary node (assumes z already inside the disk).
Complex eval_node(const MapNode& node, Complex z);

namespace detail {
// Gauss-Legendre rule on [-1, 1]; cached per node count.
struct GaussRule {
    std::vector<double> x, w;
};
const GaussRule& gauss_rule(int n);
std::uint64_t fnv1a(const std::string& s);
std::string format_double(double v);        // %.17g, canonical
} // namespace detail

} // namespace ims

#endif
