#include "ims/families.hpp"
#include "ims/errors.hpp"

#include <cmath>

namespace ims {

FamilySpec FamilySpec::deriv_power_of(FamilySpec base, double s) {
    FamilySpec spec;
    spec.kind = FamilyKind::DerivPowerOf;
    spec.base = std::make_shared<FamilySpec>(std::move(base));
    spec.power = s;
    return spec;
}

std::string FamilySpec::name() const {
    switch (kind) {
    case FamilyKind::Koebe: return "koebe";
    case FamilyKind::KoebeScaled: return "kscaled(" + detail::format_double(param) + ")";
    case FamilyKind::LogMap: return "logmap";
    case FamilyKind::GMap: return "gmap";
    case FamilyKind::PowerMapF: return "fgamma(" + detail::format_double(param) + ")";
    case FamilyKind::PowerMapG: return "ggamma(" + detail::format_double(param) + ")";
    case FamilyKind::DerivPowerOf:
        return "derivpow(" + base->name() + "," + detail::format_double(power) + ")";
    }
    return "?";
}

namespace {

void check_range(const FamilySpec& spec) {
    if (spec.unchecked) return;
    switch (spec.kind) {
    case FamilyKind::KoebeScaled:
        if (!(spec.param > 0.0 && spec.param < 1.0))
            throw RangeError("kscaled requires rho in (0, 1)");
        break;
    case FamilyKind::PowerMapF:
        if (!(spec.param > 0.0 && spec.param < 1.0))
            throw RangeError("fgamma requires gamma in (0, 1); the gamma = 1 limit is logmap");
        break;
    case FamilyKind::PowerMapG:
        if (!(spec.param > 0.0 && spec.param < 1.0))
            throw RangeError("ggamma requires gamma in (0, 1); the gamma = 1 limit is gmap");
        break;
    default:
        break;
    }
}

// Catalog E_1 norm bounds of the pre-Schwarzian, used by the Becker-type
// univalence certificate for derivative powers.
std::optional<double> pre_schwarzian_norm_bound(const FamilySpec& spec) {
    switch (spec.kind) {
    case FamilyKind::Koebe: return 6.0;
    case FamilyKind::LogMap: return 2.0;      // (1-|z|^2)/|1-z| <= 1+|z|
    case FamilyKind::GMap: return 2.0;
    case FamilyKind::PowerMapF: return 2.0 * spec.param;
    case FamilyKind::PowerMapG: return 2.0 * spec.param;
    default: return std::nullopt;  // KoebeScaled measured numerically on demand
    }
}

} // namespace

AnalyticMap make_family(const FamilySpec& spec) {
    check_range(spec);
    switch (spec.kind) {
    case FamilyKind::Koebe:
        return AnalyticMap::koebe();
    case FamilyKind::KoebeScaled:
        // koebe(rho z)/rho keeps f(0) = 0, f'(0) = 1
        return AnalyticMap::product(AnalyticMap::constant(1.0 / spec.param),
                                    AnalyticMap::scale_arg(spec.param, AnalyticMap::koebe()));
    case FamilyKind::LogMap:
        return AnalyticMap::log_one_minus();
    case FamilyKind::GMap:
        return AnalyticMap::power_primitive(1.0);
    case FamilyKind::PowerMapF:
        return AnalyticMap::power_primitive(-spec.param);
    case FamilyKind::PowerMapG:
        return AnalyticMap::power_primitive(spec.param);
    case FamilyKind::DerivPowerOf: {
        if (!spec.base) throw RangeError("derivpow needs a base family");
        AnalyticMap base = make_family(*spec.base);
        AnalyticMap f = AnalyticMap::deriv_power(base, spec.power);
        if (f.univalence() == Univalence::CatalogCertified) return f;
        // Becker disk criterion: s * ||N_base||_{E_1} <= 1 certifies injectivity
        auto bound = pre_schwarzian_norm_bound(*spec.base);
        if (bound && std::abs(spec.power) * *bound <= 1.0) {
            MapNode certified = *f.node();
            certified.cert = Univalence::CatalogCertified;
            return AnalyticMap(std::make_shared<const MapNode>(std::move(certified)));
        }
        return f;
    }
    }
    throw RangeError("unknown family");
}

std::optional<double> reference_beta(const FamilySpec& spec, double t) {
    switch (spec.kind) {
    case FamilyKind::Koebe:
        if (t >= 1.0 / 3.0) return 3.0 * t - 1.0;
        if (t >= -1.0) return 0.0;
        return -t - 1.0;
    case FamilyKind::KoebeScaled:
        return 0.0;
    case FamilyKind::LogMap:
        return t >= 0.0 ? std::max(t - 1.0, 0.0) : 0.0;
    case FamilyKind::GMap:
        return t <= 0.0 ? std::max(-t - 1.0, 0.0) : 0.0;
    case FamilyKind::PowerMapF:
        return t >= 0.0 ? std::max(spec.param * t - 1.0, 0.0) : 0.0;
    case FamilyKind::PowerMapG:
        return t <= 0.0 ? std::max(spec.param * -t - 1.0, 0.0) : 0.0;
    case FamilyKind::DerivPowerOf:
        // |F'|^t = |f'|^{s t}
        if (!spec.base) return std::nullopt;
        return reference_beta(*spec.base, spec.power * t);
    }
    return std::nullopt;
}

std::vector<double> reference_kinks(const FamilySpec& spec) {
    switch (spec.kind) {
    case FamilyKind::Koebe: return {-1.0, 1.0 / 3.0};
    case FamilyKind::KoebeScaled: return {};
    case FamilyKind::LogMap: return {1.0};
    case FamilyKind::GMap: return {-1.0};
    case FamilyKind::PowerMapF: return {1.0 / spec.param};
    case FamilyKind::PowerMapG: return {-1.0 / spec.param};
    case FamilyKind::DerivPowerOf: {
        if (!spec.base) return {};
        std::vector<double> kinks = reference_kinks(*spec.base);
        for (double& k : kinks) k /= spec.power;
        return kinks;
    }
    }
    return {};
}

std::vector<FamilyInfo> family_catalog() {
    return {
        {"koebe", "(no parameter)", "3t-1 for t>=1/3; 0 on [-1,1/3); |t|-1 for t<-1"},
        {"kscaled(rho)", "rho in (0,1)", "0 for all t"},
        {"logmap", "(no parameter)", "max(t-1, 0); 0 for t<0"},
        {"gmap", "(no parameter)", "max(|t|-1, 0) for t<=0; 0 for t>0"},
        {"fgamma(gamma)", "gamma in (0,1)", "max(gamma t - 1, 0); 0 for t<0"},
        {"ggamma(gamma)", "gamma in (0,1)", "max(gamma |t| - 1, 0) for t<=0; 0 for t>0"},
        {"derivpow(base,s)", "s in (0, 25/24] certified via base",
         "base reference at s*t where known"},
    };
}

FamilySpec family_from_name(const std::string& name, std::optional<double> param) {
    auto need = [&](const char* what) {
        if (!param) throw RangeError(std::string("family ") + name + " needs a " + what);
        return *param;
    };
    if (name == "koebe") return FamilySpec::koebe();
    if (name == "logmap") return FamilySpec::log_map();
    if (name == "gmap") return FamilySpec::g_map();
    if (name == "kscaled") return FamilySpec::koebe_scaled(need("rho"));
    if (name == "fgamma") return FamilySpec::power_f(need("gamma"));
    if (name == "ggamma") return FamilySpec::power_g(need("gamma"));
    throw RangeError("unknown family name: " + name);
}

} // namespace ims
