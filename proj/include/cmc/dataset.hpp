#ifndef CMC_DATASET_HPP
#define CMC_DATASET_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cmc/errors.hpp"
#include "cmc/family.hpp"

namespace cmc {

/// Subset of the p candidate predictors, bit i set = predictor i included.
/// The intercept is always part of every model and is not represented here.
struct SubsetMask {
    std::uint32_t bits = 0;

    SubsetMask() = default;
    explicit SubsetMask(std::uint32_t b) : bits(b) {}

    static SubsetMask full(int p) {
        return SubsetMask(p >= 32 ? ~0u : ((1u << p) - 1u));
    }
    static SubsetMask empty() { return SubsetMask(0); }

    bool test(int i) const { return (bits >> i) & 1u; }
    void set(int i) { bits |= (1u << i); }
    int size() const { return __builtin_popcount(bits); }

    /// Included predictor indices, ascending.
    std::vector<int> indices(int p) const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size()));
        for (int i = 0; i < p; ++i)
            if (test(i)) out.push_back(i);
        return out;
    }

    friend bool operator==(SubsetMask a, SubsetMask b) { return a.bits == b.bits; }
    friend bool operator!=(SubsetMask a, SubsetMask b) { return a.bits != b.bits; }
};

/// Response vector plus predictor matrix. The intercept column is implicit:
/// every fitted model contains it in addition to the masked predictors.
struct Dataset {
    Eigen::MatrixXd x;  // n x p
    Eigen::VectorXd y;  // n
    Family family;

    Eigen::Index n() const { return x.rows(); }
    Eigen::Index p() const { return x.cols(); }

    /// Checks the structural invariants; throws Error on violation.
    void validate() const {
        if (y.size() != x.rows()) throw Error("Dataset: y length does not match x rows");
        if (n() <= p() + 1) {
            throw Error("Dataset: need n > p + 1 (got n=" + std::to_string(n()) +
                        ", p=" + std::to_string(p()) + ")");
        }
        if (family.kind == FamilyKind::Binomial) {
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                const double v = y(i);
                if (v != std::floor(v) || v < 0.0 || v > family.trials) {
                    throw Error("Dataset: binomial response at row " + std::to_string(i) +
                                " is not an integer in [0, m]");
                }
            }
        } else if (family.kind == FamilyKind::Poisson) {
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                const double v = y(i);
                if (v != std::floor(v) || v < 0.0) {
                    throw Error("Dataset: poisson response at row " + std::to_string(i) +
                                " is not a nonnegative integer");
                }
            }
        }
    }
};

} // namespace cmc

#endif // CMC_DATASET_HPP
