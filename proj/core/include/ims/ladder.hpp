#ifndef IMS_LADDER_HPP
#define IMS_LADDER_HPP

#include "ims/errors.hpp"

#include <cmath>
#include <vector>

namespace ims {

// Dyadic radius ladder r_k = 1 - 2^{-k} probing the r -> 1 limit.
struct RadiusLadder {
    int k_min = 3;
    int k_max = 13;

    RadiusLadder() = default;
    RadiusLadder(int kmin, int kmax) : k_min(kmin), k_max(kmax) {
        if (!(2 <= k_min && k_min < k_max && k_max <= 15))
            throw RangeError("radius ladder requires 2 <= k_min < k_max <= 15");
    }

    static double radius(int k) { return 1.0 - std::ldexp(1.0, -k); }

    int size() const { return k_max - k_min + 1; }

    std::vector<double> radii() const {
        std::vector<double> r;
        r.reserve(size());
        for (int k = k_min; k <= k_max; ++k) r.push_back(radius(k));
        return r;
    }
};

} // namespace ims

#endif
