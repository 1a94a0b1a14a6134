#ifndef CMC_GLM_HPP
#define CMC_GLM_HPP

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "cmc/dataset.hpp"
#include "cmc/errors.hpp"
#include "cmc/family.hpp"
#include "cmc/linalg.hpp"

namespace cmc {

/// Maximum-likelihood fit of one subset model. beta_aug always has p+1
/// entries: intercept first, then one slot per candidate predictor, with
/// exact zeros in the excluded positions.
struct FitResult {
    SubsetMask mask;
    Eigen::VectorXd beta_aug;
    double loglik = 0.0;
    int iterations = 0;
    bool converged = true;

    int size() const { return mask.size(); }
};

namespace detail {

/// n x (d+1) design for the masked predictors, intercept column first.
inline Eigen::MatrixXd build_design(const Eigen::MatrixXd& x, SubsetMask mask) {
    const Eigen::Index n = x.rows();
    const int p = static_cast<int>(x.cols());
    const int d = mask.size();
    Eigen::MatrixXd design(n, d + 1);
    design.col(0).setOnes();
    int col = 1;
    for (int j = 0; j < p; ++j) {
        if (mask.test(j)) design.col(col++) = x.col(j);
    }
    return design;
}

/// Scatters subset coefficients (intercept first) into the augmented layout.
inline Eigen::VectorXd augment_beta(const Eigen::VectorXd& beta_sub, SubsetMask mask, int p) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(p + 1);
    out(0) = beta_sub(0);
    int col = 1;
    for (int j = 0; j < p; ++j) {
        if (mask.test(j)) out(j + 1) = beta_sub(col++);
    }
    return out;
}

inline double gaussian_loglik_from_rss(double rss, Eigen::Index n) {
    if (!(rss > 0.0)) {
        throw DomainError("gaussian log-likelihood: residual sum of squares is not positive");
    }
    const double nn = static_cast<double>(n);
    return -0.5 * nn * (std::log(2.0 * M_PI * rss / nn) + 1.0);
}

/// Per-dataset constants that do not change across subsets.
struct LoglikConstants {
    double constant = 0.0;       // sum of log binomial coefficients / -log y!
    double saturated_core = 0.0; // saturated log-likelihood without the constant
};

inline LoglikConstants loglik_constants(const Family& family, const Eigen::VectorXd& y) {
    LoglikConstants out;
    const double m = static_cast<double>(family.trials);
    switch (family.kind) {
        case FamilyKind::Gaussian:
            break;
        case FamilyKind::Binomial:
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                const double yi = y(i);
                out.constant += std::lgamma(m + 1.0) - std::lgamma(yi + 1.0) -
                                std::lgamma(m - yi + 1.0);
                if (yi > 0.0) out.saturated_core += yi * std::log(yi / m);
                if (yi < m) out.saturated_core += (m - yi) * std::log(1.0 - yi / m);
            }
            break;
        case FamilyKind::Poisson:
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                const double yi = y(i);
                out.constant -= std::lgamma(yi + 1.0);
                if (yi > 0.0) out.saturated_core += yi * std::log(yi) - yi;
            }
            break;
    }
    return out;
}

/// Log-likelihood minus per-dataset constant, evaluated from the linear
/// predictor. Stable for any finite eta.
inline double loglik_core(const Family& family, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& eta) {
    double ll = 0.0;
    const double m = static_cast<double>(family.trials);
    switch (family.kind) {
        case FamilyKind::Gaussian: {
            const double rss = (y - eta).squaredNorm();
            return gaussian_loglik_from_rss(rss, y.size());
        }
        case FamilyKind::Binomial:
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                ll += y(i) * eta(i) - m * log1pexp(eta(i));
            }
            return ll;
        case FamilyKind::Poisson:
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                ll += y(i) * eta(i) - std::exp(eta(i));
            }
            return ll;
    }
    return ll;
}

/// Gaussian least squares on an explicit design; returns (beta, rss).
inline std::pair<Eigen::VectorXd, double> least_squares(const Eigen::MatrixXd& design,
                                                        const Eigen::VectorXd& z) {
    Eigen::MatrixXd gram = design.transpose() * design;
    Eigen::VectorXd rhs = design.transpose() * z;
    Eigen::VectorXd beta;
    try {
        beta = solve_spd(gram, rhs);
    } catch (const NotPositiveDefinite& e) {
        throw Collinear(std::string("least squares: ") + e.what());
    }
    const double rss = (z - design * beta).squaredNorm();
    return {std::move(beta), rss};
}

inline FitResult fit_gaussian(const Dataset& data, SubsetMask mask) {
    const Eigen::MatrixXd design = build_design(data.x, mask);
    auto [beta, rss] = least_squares(design, data.y);
    FitResult out;
    out.mask = mask;
    out.beta_aug = augment_beta(beta, mask, static_cast<int>(data.p()));
    out.loglik = gaussian_loglik_from_rss(rss, data.n());
    out.iterations = 0;
    out.converged = true;
    return out;
}

/// Fisher-scoring IRLS for Binomial (logit) and Poisson (log). Starts from a
/// least-squares fit of the link-transformed, boundary-adjusted response.
/// Convergence: relative deviance change < 1e-8 within 50 iterations; on
/// stagnation the last iterate is returned with converged = false.
inline FitResult fit_irls(const Dataset& data, SubsetMask mask,
                          const LoglikConstants& consts) {
    constexpr int kMaxIter = 50;
    constexpr double kTol = 1e-8;
    const Eigen::Index n = data.n();
    const double m = static_cast<double>(data.family.trials);
    const bool binomial = data.family.kind == FamilyKind::Binomial;

    const Eigen::MatrixXd design = build_design(data.x, mask);
    const Eigen::Index q = design.cols();

    // Link-transformed adjusted response for the starting value.
    Eigen::VectorXd z0(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (binomial) {
            const double pi0 = (data.y(i) + 0.5) / (m + 1.0);
            z0(i) = std::log(pi0 / (1.0 - pi0));
        } else {
            z0(i) = std::log(data.y(i) + 0.1);
        }
    }
    Eigen::VectorXd beta = least_squares(design, z0).first;
    Eigen::VectorXd eta = design * beta;

    auto deviance = [&](const Eigen::VectorXd& e) {
        return 2.0 * (consts.saturated_core - loglik_core(data.family, data.y, e));
    };
    double dev = deviance(eta);

    bool converged = false;
    int iter = 0;
    Eigen::VectorXd w(n), z(n);
    Eigen::MatrixXd gram(q, q);
    Eigen::VectorXd rhs(q);
    for (; iter < kMaxIter; ++iter) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double e = eta(i);
            double mu, dmu;
            if (binomial) {
                const double pi = std::clamp(logistic(e), 1e-10, 1.0 - 1e-10);
                mu = m * pi;
                dmu = m * pi * (1.0 - pi);
            } else {
                mu = std::exp(std::min(e, 300.0));
                dmu = mu;
            }
            w(i) = dmu;  // canonical link: weight equals dmu/deta
            z(i) = e + (data.y(i) - mu) / dmu;
        }
        gram.noalias() = design.transpose() * w.asDiagonal() * design;
        rhs.noalias() = design.transpose() * (w.array() * z.array()).matrix();
        Eigen::VectorXd beta_next;
        try {
            beta_next = solve_spd(gram, rhs);
        } catch (const NotPositiveDefinite& e) {
            throw Collinear(std::string("irls: ") + e.what());
        }

        // Step halving keeps the deviance finite and non-increasing.
        Eigen::VectorXd step = beta_next - beta;
        double scale = 1.0;
        Eigen::VectorXd eta_next = design * beta_next;
        double dev_next = deviance(eta_next);
        for (int h = 0; h < 30 && !(dev_next <= dev + 1e-10); ++h) {
            scale *= 0.5;
            eta_next = design * (beta + scale * step);
            dev_next = deviance(eta_next);
        }
        beta += scale * step;
        eta = eta_next;

        const double change = std::abs(dev - dev_next);
        dev = dev_next;
        if (change < kTol * (std::abs(dev) + 0.1)) {
            converged = true;
            ++iter;
            break;
        }
    }

    FitResult out;
    out.mask = mask;
    out.beta_aug = augment_beta(beta, mask, static_cast<int>(data.p()));
    out.loglik = loglik_core(data.family, data.y, eta) + consts.constant;
    out.iterations = iter;
    out.converged = converged;
    return out;
}

inline FitResult fit_impl(const Dataset& data, SubsetMask mask,
                          const LoglikConstants& consts) {
    if (data.family.kind == FamilyKind::Gaussian) return fit_gaussian(data, mask);
    return fit_irls(data, mask, consts);
}

} // namespace detail

/// Maximum-likelihood fit of the subset model given by `mask`.
/// Gaussian uses the closed-form least-squares solution with the variance
/// profiled at RSS/n; Binomial and Poisson use Fisher-scoring IRLS.
inline FitResult fit(const Dataset& data, SubsetMask mask) {
    data.validate();
    return detail::fit_impl(data, mask, detail::loglik_constants(data.family, data.y));
}

/// Log-likelihood of an augmented coefficient vector (intercept + p slots)
/// under the given family. All normalizing constants are included: Gaussian
/// profiles the variance at RSS/n, Binomial adds log C(m, y), Poisson adds
/// -log y!.
inline double log_likelihood(const Family& family, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& beta_aug, const Eigen::MatrixXd& x) {
    if (beta_aug.size() != x.cols() + 1 || y.size() != x.rows()) {
        throw Error("log_likelihood: dimension mismatch");
    }
    Eigen::VectorXd eta = Eigen::VectorXd::Constant(y.size(), beta_aug(0));
    eta.noalias() += x * beta_aug.tail(x.cols());

    const auto consts = detail::loglik_constants(family, y);
    const double ll = detail::loglik_core(family, y, eta) + consts.constant;
    if (!std::isfinite(ll)) {
        throw DomainError("log_likelihood: fitted mean at an invalid boundary");
    }
    return ll;
}

/// The maximum log-likelihood ratio lambda = -2 (l_sub - l_full), clamped to
/// zero when rounding produces a value in (-1e-8, 0).
inline double loglik_ratio(const FitResult& sub, const FitResult& full) {
    if (sub.beta_aug.size() != full.beta_aug.size()) {
        throw InvalidComparison("loglik_ratio: fits are not from the same dataset");
    }
    const int p = static_cast<int>(full.beta_aug.size()) - 1;
    if (full.mask != SubsetMask::full(p)) {
        throw InvalidComparison("loglik_ratio: reference fit is not the full model");
    }
    double lambda = -2.0 * (sub.loglik - full.loglik);
    if (lambda <= 0.0 && lambda > -1e-8) lambda = 0.0;  // includes negative zero
    return lambda;
}

} // namespace cmc

#endif // CMC_GLM_HPP
