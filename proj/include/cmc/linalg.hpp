#ifndef CMC_LINALG_HPP
#define CMC_LINALG_HPP

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "cmc/errors.hpp"

namespace cmc {

/// Dense symmetric positive definite matrix. Symmetry is validated on
/// construction (1e-12 relative); positive definiteness is established only
/// when a factorization succeeds.
class SpdMatrix {
public:
    explicit SpdMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) {
            throw Error("SpdMatrix: matrix must be square");
        }
        const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
        const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-12 * scale) {
            throw Error("SpdMatrix: matrix is not symmetric (relative asymmetry " +
                        std::to_string(asym / scale) + ")");
        }
    }

    Eigen::Index dim() const { return m_.rows(); }
    const Eigen::MatrixXd& matrix() const { return m_; }

private:
    Eigen::MatrixXd m_;
};

namespace detail {

/// In-place lower Cholesky of the top-left k x k block of `a`.
/// Throws NotPositiveDefinite when a pivot is <= 0.
inline void cholesky_lower(Eigen::MatrixXd& a, Eigen::Index k) {
    for (Eigen::Index j = 0; j < k; ++j) {
        double d = a(j, j);
        for (Eigen::Index t = 0; t < j; ++t) d -= a(j, t) * a(j, t);
        if (!(d > 0.0)) {
            throw NotPositiveDefinite("cholesky: nonpositive pivot at index " +
                                      std::to_string(j));
        }
        const double ljj = std::sqrt(d);
        a(j, j) = ljj;
        for (Eigen::Index i = j + 1; i < k; ++i) {
            double s = a(i, j);
            for (Eigen::Index t = 0; t < j; ++t) s -= a(i, t) * a(j, t);
            a(i, j) = s / ljj;
        }
    }
}

/// Solves L L^T x = b given the lower factor L (forward + backward substitution).
inline Eigen::VectorXd cholesky_solve(const Eigen::MatrixXd& l, const Eigen::VectorXd& b) {
    const Eigen::Index n = b.size();
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double s = b(i);
        for (Eigen::Index t = 0; t < i; ++t) s -= l(i, t) * x(t);
        x(i) = s / l(i, i);
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double s = x(i);
        for (Eigen::Index t = i + 1; t < n; ++t) s -= l(t, i) * x(t);
        x(i) = s / l(i, i);
    }
    return x;
}

} // namespace detail

/// Solves a x = b for symmetric positive definite a via Cholesky.
/// Throws NotPositiveDefinite if a pivot is <= 0 (collinear design or
/// degenerate weights upstream).
inline Eigen::VectorXd solve_spd(const SpdMatrix& a, const Eigen::VectorXd& b) {
    if (b.size() != a.dim()) {
        throw Error("solve_spd: dimension mismatch");
    }
    Eigen::MatrixXd l = a.matrix();
    detail::cholesky_lower(l, l.rows());
    return detail::cholesky_solve(l, b);
}

/// Unchecked variant for internal callers that already hold a plain matrix.
inline Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    Eigen::MatrixXd l = a;
    detail::cholesky_lower(l, l.rows());
    return detail::cholesky_solve(l, b);
}

} // namespace cmc

#endif // CMC_LINALG_HPP
