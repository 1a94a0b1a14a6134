#ifndef CMC_FAMILY_HPP
#define CMC_FAMILY_HPP

#include <cmath>
#include <string>

#include "cmc/errors.hpp"

namespace cmc {

enum class FamilyKind { Gaussian, Binomial, Poisson };

/// Response distribution plus canonical link. Binomial carries the common
/// trial count m; the other families ignore it.
struct Family {
    FamilyKind kind = FamilyKind::Gaussian;
    int trials = 1;  // Binomial only

    static Family gaussian() { return {FamilyKind::Gaussian, 1}; }
    static Family binomial(int m) {
        if (m < 1) throw Error("Family: binomial trials must be >= 1");
        return {FamilyKind::Binomial, m};
    }
    static Family poisson() { return {FamilyKind::Poisson, 1}; }

    std::string name() const {
        switch (kind) {
            case FamilyKind::Gaussian: return "gaussian";
            case FamilyKind::Binomial: return "binomial";
            case FamilyKind::Poisson: return "poisson";
        }
        return "?";
    }
};

inline Family family_from_name(const std::string& name, int trials = 1) {
    if (name == "gaussian") return Family::gaussian();
    if (name == "binomial") return Family::binomial(trials);
    if (name == "poisson") return Family::poisson();
    throw Error("unknown family '" + name + "' (expected gaussian|binomial|poisson)");
}

/// log(1 + e^x) without overflow.
inline double log1pexp(double x) {
    if (x > 37.0) return x + std::exp(-x);
    if (x < -37.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

/// Inverse logit.
inline double logistic(double x) {
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

} // namespace cmc

#endif // CMC_FAMILY_HPP
