#ifndef IMS_FAMILIES_HPP
#define IMS_FAMILIES_HPP

#include "ims/analytic_map.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ims {

enum class FamilyKind {
    Koebe,        // z/(1-z)^2
    KoebeScaled,  // koebe(rho z)/rho, rho in (0,1)
    LogMap,       // -log(1-z)
    GMap,         // -[(1-z)^2 - 1]/2, the gamma -> 1 limit of PowerMapG
    PowerMapF,    // [(1-z)^{1-g} - 1]/(g-1), g in (0,1)
    PowerMapG,    // [(1-z)^{1+g} - 1]/(-g-1), g in (0,1)
    DerivPowerOf  // base map with derivative raised to the power s
};

struct FamilySpec {
    FamilyKind kind = FamilyKind::Koebe;
    double param = 0.0;                 // gamma or rho
    std::shared_ptr<FamilySpec> base;   // DerivPowerOf only
    double power = 1.0;                 // DerivPowerOf only
    bool unchecked = false;             // bypass the validity-range check

    static FamilySpec of(FamilyKind kind, double param = 0.0) {
        FamilySpec spec;
        spec.kind = kind;
        spec.param = param;
        return spec;
    }
    static FamilySpec koebe() { return of(FamilyKind::Koebe); }
    static FamilySpec koebe_scaled(double rho) { return of(FamilyKind::KoebeScaled, rho); }
    static FamilySpec log_map() { return of(FamilyKind::LogMap); }
    static FamilySpec g_map() { return of(FamilyKind::GMap); }
    static FamilySpec power_f(double gamma) { return of(FamilyKind::PowerMapF, gamma); }
    static FamilySpec power_g(double gamma) { return of(FamilyKind::PowerMapG, gamma); }
    static FamilySpec deriv_power_of(FamilySpec base, double s);

    std::string name() const;
};

// Closed-form map, univalence-certified inside the validity range, f(0) = 0.
// Throws RangeError outside the range unless spec.unchecked is set.
AnalyticMap make_family(const FamilySpec& spec);

// Closed-form reference spectrum where one is known; nullopt otherwise.
//   Koebe:       3t-1 for t >= 1/3; 0 on [-1, 1/3); |t|-1 for t < -1
//   KoebeScaled: 0 (analytic across the boundary circle)
//   LogMap:      max(t-1, 0), and 0 for t < 0 (bounded integrand)
//   PowerMapF:   max(gamma t - 1, 0), and 0 for t < 0
//   PowerMapG:   max(gamma |t| - 1, 0) for t <= 0, and 0 for t > 0
//   GMap:        max(|t|-1, 0) for t <= 0, and 0 for t > 0
//   DerivPowerOf(base, s): base reference evaluated at s*t
std::optional<double> reference_beta(const FamilySpec& spec, double t);

// t-locations where the reference spectrum is non-smooth; estimator
// tolerances double within 0.05 of these.
std::vector<double> reference_kinks(const FamilySpec& spec);

struct FamilyInfo {
    std::string name;
    std::string parameter_range;
    std::string reference;
};
std::vector<FamilyInfo> family_catalog();

// Parses the CLI family token (koebe, kscaled, logmap, gmap, fgamma, ggamma).
FamilySpec family_from_name(const std::string& name, std::optional<double> param);

} // namespace ims

#endif
