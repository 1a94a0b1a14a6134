#ifndef CMC_SUBSET_SEARCH_HPP
#define CMC_SUBSET_SEARCH_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "cmc/dataset.hpp"
#include "cmc/errors.hpp"
#include "cmc/glm.hpp"
#include "cmc/linalg.hpp"

namespace cmc {

/// For each size d in {0,...,p}, the maximum-likelihood model among all
/// C(p,d) subsets of that size. This is a sufficient statistic for AIC, BIC
/// and CMC selection, since each criterion depends on a model only through
/// (loglik, size).
struct PerSizeBests {
    std::vector<FitResult> entries;  // entries[d] = best model of size d
    Eigen::Index n = 0;
    int p = 0;
    std::uint64_t masks_visited = 0;
    std::uint64_t masks_skipped = 0;     // collinear subsets excluded from the ranking
    std::uint64_t nonconverged_fits = 0;

    const FitResult& full() const { return entries.back(); }
};

namespace detail {

/// Exhaustive Gaussian scan over all 2^p subsets using an incrementally
/// maintained Cholesky factor of the selected sub-block of the cross-product
/// matrix [1 X y]^T [1 X y]. Pushing a column costs O(k^2) and the residual
/// sum of squares falls out of the forward-substituted y column, so no
/// per-subset refactorization or pass over the n rows is needed.
class GaussianSubsetScan {
public:
    GaussianSubsetScan(const Eigen::MatrixXd& x, const Eigen::VectorXd& y)
        : p_(static_cast<int>(x.cols())), dim_(p_ + 2), gram_(dim_, dim_) {
        const Eigen::Index n = x.rows();
        Eigen::MatrixXd aug(n, dim_);
        aug.col(0).setOnes();
        aug.middleCols(1, p_) = x;
        aug.col(dim_ - 1) = y;
        gram_.noalias() = aug.transpose() * aug;

        factor_.assign(static_cast<std::size_t>(dim_ * dim_), 0.0);
        ysolve_.assign(static_cast<std::size_t>(dim_), 0.0);
        selected_.reserve(static_cast<std::size_t>(dim_));
        best_rss_.assign(static_cast<std::size_t>(p_ + 1),
                         std::numeric_limits<double>::infinity());
        best_mask_.assign(static_cast<std::size_t>(p_ + 1), 0u);
    }

    /// Runs the scan. Throws Collinear when the full design itself is
    /// rank-deficient; numerically singular proper subsets are skipped.
    void run() {
        // Surface full-model collinearity before enumerating.
        {
            Eigen::MatrixXd head = gram_.topLeftCorner(p_ + 1, p_ + 1);
            try {
                cholesky_lower(head, p_ + 1);
            } catch (const NotPositiveDefinite& e) {
                throw Collinear(std::string("full model design: ") + e.what());
            }
        }
        rss_ = gram_(dim_ - 1, dim_ - 1);
        if (!push(0)) throw Collinear("intercept column is degenerate");
        descend(0, 0u);
        pop();
    }

    double best_rss(int d) const { return best_rss_[static_cast<std::size_t>(d)]; }
    SubsetMask best_mask(int d) const {
        return SubsetMask(best_mask_[static_cast<std::size_t>(d)]);
    }
    std::uint64_t visited() const { return visited_; }
    std::uint64_t skipped() const { return skipped_; }

    /// Coefficients of a subset model straight from the cross-product matrix.
    std::pair<Eigen::VectorXd, double> refit(SubsetMask mask) const {
        std::vector<int> idx{0};
        for (int j = 0; j < p_; ++j)
            if (mask.test(j)) idx.push_back(j + 1);
        const int k = static_cast<int>(idx.size());
        Eigen::MatrixXd sub(k, k);
        Eigen::VectorXd rhs(k);
        for (int a = 0; a < k; ++a) {
            rhs(a) = gram_(idx[a], dim_ - 1);
            for (int b = 0; b < k; ++b) sub(a, b) = gram_(idx[a], idx[b]);
        }
        Eigen::VectorXd beta;
        try {
            beta = solve_spd(sub, rhs);
        } catch (const NotPositiveDefinite& e) {
            throw Collinear(std::string("subset refit: ") + e.what());
        }
        const double rss = gram_(dim_ - 1, dim_ - 1) - beta.dot(rhs);
        return {std::move(beta), rss};
    }

private:
    double& fac(int r, int c) { return factor_[static_cast<std::size_t>(r * dim_ + c)]; }

    bool push(int gram_index) {
        const int k = static_cast<int>(selected_.size());
        double* row = &factor_[static_cast<std::size_t>(k * dim_)];
        for (int i = 0; i < k; ++i) {
            double s = gram_(selected_[static_cast<std::size_t>(i)], gram_index);
            const double* ri = &factor_[static_cast<std::size_t>(i * dim_)];
            for (int t = 0; t < i; ++t) s -= ri[t] * row[t];
            row[i] = s / ri[i];
        }
        double piv2 = gram_(gram_index, gram_index);
        for (int t = 0; t < k; ++t) piv2 -= row[t] * row[t];
        if (!(piv2 > 0.0)) return false;
        row[k] = std::sqrt(piv2);
        double cy = gram_(gram_index, dim_ - 1);
        for (int t = 0; t < k; ++t) cy -= row[t] * ysolve_[static_cast<std::size_t>(t)];
        cy /= row[k];
        ysolve_[static_cast<std::size_t>(k)] = cy;
        rss_ -= cy * cy;
        selected_.push_back(gram_index);
        return true;
    }

    void pop() {
        const int k = static_cast<int>(selected_.size()) - 1;
        const double cy = ysolve_[static_cast<std::size_t>(k)];
        rss_ += cy * cy;
        selected_.pop_back();
    }

    void record(std::uint32_t mask) {
        ++visited_;
        const int d = __builtin_popcount(mask);
        double& best = best_rss_[static_cast<std::size_t>(d)];
        std::uint32_t& bm = best_mask_[static_cast<std::size_t>(d)];
        if (rss_ < best || (rss_ == best && mask < bm)) {
            best = rss_;
            bm = mask;
        }
    }

    void descend(int j, std::uint32_t mask) {
        if (j == p_) {
            record(mask);
            return;
        }
        descend(j + 1, mask);
        if (push(j + 1)) {
            descend(j + 1, mask | (1u << j));
            pop();
        } else {
            const std::uint64_t subtree = 1ull << (p_ - 1 - j);
            visited_ += subtree;
            skipped_ += subtree;
        }
    }

    int p_;
    int dim_;
    Eigen::MatrixXd gram_;
    std::vector<double> factor_;   // row k holds the k-th factor row by position
    std::vector<double> ysolve_;   // forward-substituted y column
    std::vector<int> selected_;    // gram indices of the current columns
    double rss_ = 0.0;
    std::vector<double> best_rss_;
    std::vector<std::uint32_t> best_mask_;
    std::uint64_t visited_ = 0;
    std::uint64_t skipped_ = 0;
};

} // namespace detail

/// Fits all 2^p subsets and keeps the maximum-likelihood model per size.
/// Ties are broken toward the lowest mask value. Non-converged GLM fits
/// participate with their achieved log-likelihood and stay flagged in the
/// result. Guarded at p <= 20.
inline PerSizeBests best_per_size(const Dataset& data) {
    data.validate();
    const int p = static_cast<int>(data.p());
    if (p > 20) {
        throw TooManyPredictors("best_per_size: p = " + std::to_string(p) +
                                " exceeds the exhaustive-enumeration guard of 20");
    }

    PerSizeBests out;
    out.n = data.n();
    out.p = p;
    out.entries.resize(static_cast<std::size_t>(p) + 1);

    if (data.family.kind == FamilyKind::Gaussian) {
        detail::GaussianSubsetScan scan(data.x, data.y);
        scan.run();
        for (int d = 0; d <= p; ++d) {
            const SubsetMask mask = scan.best_mask(d);
            auto [beta, rss] = scan.refit(mask);
            FitResult fr;
            fr.mask = mask;
            fr.beta_aug = detail::augment_beta(beta, mask, p);
            fr.loglik = detail::gaussian_loglik_from_rss(rss, data.n());
            fr.converged = true;
            out.entries[static_cast<std::size_t>(d)] = std::move(fr);
        }
        out.masks_visited = scan.visited();
        out.masks_skipped = scan.skipped();
        return out;
    }

    const auto consts = detail::loglik_constants(data.family, data.y);
    const std::uint32_t full_bits = SubsetMask::full(p).bits;

    // The full model's collinearity propagates; subsets only skip.
    FitResult full_fit = detail::fit_impl(data, SubsetMask(full_bits), consts);

    std::vector<bool> seen(static_cast<std::size_t>(p) + 1, false);
    for (std::uint32_t bits = 0; bits <= full_bits; ++bits) {
        ++out.masks_visited;
        const SubsetMask mask(bits);
        const int d = mask.size();
        FitResult fr;
        if (bits == full_bits) {
            fr = full_fit;
        } else {
            try {
                fr = detail::fit_impl(data, mask, consts);
            } catch (const Collinear&) {
                ++out.masks_skipped;
                continue;
            }
        }
        if (!fr.converged) ++out.nonconverged_fits;
        auto& slot = out.entries[static_cast<std::size_t>(d)];
        if (!seen[static_cast<std::size_t>(d)] || fr.loglik > slot.loglik) {
            slot = std::move(fr);
            seen[static_cast<std::size_t>(d)] = true;
        }
    }
    for (int d = 0; d <= p; ++d) {
        if (!seen[static_cast<std::size_t>(d)]) {
            throw Collinear("best_per_size: every size-" + std::to_string(d) +
                            " subset failed to fit");
        }
    }
    return out;
}

} // namespace cmc

#endif // CMC_SUBSET_SEARCH_HPP
