/*
 * Dense complex linear algebra core.
 *
 * CMatrix is the carrier for every transfer matrix, coin and phase layer in
 * the library: row-major std::complex<double>, value semantics, immutable in
 * spirit (all operations return new values).  On top of it:
 *
 *   matmul / kron             products and tensor products
 *   is_unitary                max-norm test of m^dag m - I
 *   equal_up_to_global_phase  physical equivalence A ~ lambda B, |lambda| = 1
 *   solve                     linear solve via one-sided Jacobi SVD with an
 *                             explicit condition estimate (refuses > 1e12)
 *
 * Everything here is a pure function over immutable values; concurrent calls
 * are safe.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace lopt {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct Tolerance {
    double eps = 1e-10;
    Tolerance() = default;
    explicit Tolerance(double e) : eps(e) {
        if (!(e > 0.0)) throw std::invalid_argument("Tolerance: eps must be > 0");
    }
};

class CMatrix {
  public:
    CMatrix() : rows_(1), cols_(1), data_(1, cdouble{0.0, 0.0}) {}

    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cdouble{0.0, 0.0}) {
        check_shape();
    }

    CMatrix(std::size_t rows, std::size_t cols, std::vector<cdouble> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        check_shape();
        if (data_.size() != rows_ * cols_)
            throw std::invalid_argument("CMatrix: entry count " + std::to_string(data_.size()) +
                                        " does not match " + shape_str());
        check_finite();
    }

    CMatrix(std::initializer_list<std::initializer_list<cdouble>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw std::invalid_argument("CMatrix: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
        check_shape();
        check_finite();
    }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static CMatrix diagonal(const std::vector<cdouble>& d) {
        CMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cdouble& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cdouble& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<cdouble>& data() const { return data_; }

    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

  private:
    void check_shape() const {
        if (rows_ < 1 || cols_ < 1)
            throw std::invalid_argument("CMatrix: shape must be at least 1x1, got " + shape_str());
    }
    void check_finite() const {
        for (const cdouble& z : data_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw std::invalid_argument("CMatrix: non-finite entry");
    }

    std::size_t rows_, cols_;
    std::vector<cdouble> data_;
};

inline CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: dimension mismatch " + a.shape_str() + " * " +
                                    b.shape_str());
    CMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cdouble aik = a(i, k);
            if (aik == cdouble{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) { return matmul(a, b); }

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t r = 0; r < b.rows(); ++r)
                for (std::size_t s = 0; s < b.cols(); ++s)
                    k(i * b.rows() + r, j * b.cols() + s) = a(i, j) * b(r, s);
    return k;
}

inline CMatrix transpose(const CMatrix& m) {
    CMatrix t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

inline CMatrix adjoint(const CMatrix& m) {
    CMatrix t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = std::conj(m(i, j));
    return t;
}

inline CMatrix conjugate(const CMatrix& m) {
    CMatrix c(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = std::conj(m(i, j));
    return c;
}

inline CMatrix scale(const cdouble& s, const CMatrix& m) {
    CMatrix c(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = s * m(i, j);
    return c;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch " + a.shape_str() + " vs " +
                                    b.shape_str());
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

inline double unitarity_residual(const CMatrix& m) {
    if (!m.is_square())
        throw std::invalid_argument("unitarity_residual: matrix is not square (" + m.shape_str() + ")");
    return max_abs_diff(matmul(adjoint(m), m), CMatrix::identity(m.rows()));
}

inline bool is_unitary(const CMatrix& m, Tolerance tol = {}) {
    return unitarity_residual(m) <= tol.eps;
}

inline double self_transpose_residual(const CMatrix& m) {
    if (!m.is_square())
        throw std::invalid_argument("self_transpose_residual: matrix is not square");
    double r = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            r = std::max(r, std::abs(m(i, j) - m(j, i)));
    return r;
}

// Global-phase alignment: lambda is fixed as the phase ratio at b's
// largest-magnitude entry, which is deterministic and numerically stable.
// Returns max|a - lambda b|; HUGE_VAL when b is (numerically) zero there.
inline double global_phase_residual(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("global_phase_residual: shape mismatch " + a.shape_str() +
                                    " vs " + b.shape_str());
    std::size_t bi = 0, bj = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            if (std::abs(b(i, j)) > best) { best = std::abs(b(i, j)); bi = i; bj = j; }
    if (best <= 0.0) return HUGE_VAL;
    cdouble lambda = a(bi, bj) / b(bi, bj);
    const double mag = std::abs(lambda);
    if (mag == 0.0) return HUGE_VAL;
    lambda /= mag;
    double r = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r = std::max(r, std::abs(a(i, j) - lambda * b(i, j)));
    return r;
}

inline bool equal_up_to_global_phase(const CMatrix& a, const CMatrix& b, Tolerance tol = {}) {
    return global_phase_residual(a, b) <= tol.eps;
}

// ---------------------------------------------------------------------------
// One-sided Jacobi SVD, complex.  A = U diag(sigma) V^dag with sigma >= 0
// descending is not enforced; columns come out in sweep order.  Intended for
// the small systems this library solves (device transfer matrices, loop
// operators); O(n^3) per sweep.
// ---------------------------------------------------------------------------
struct Svd {
    CMatrix u;                   // rows x cols, orthonormal columns (for sigma > 0)
    std::vector<double> sigma;   // cols
    CMatrix v;                   // cols x cols, unitary

    double sigma_max() const { return *std::max_element(sigma.begin(), sigma.end()); }
    double sigma_min() const { return *std::min_element(sigma.begin(), sigma.end()); }
};

inline Svd svd(const CMatrix& a_in) {
    const std::size_t m = a_in.rows(), n = a_in.cols();
    if (m < n) {
        // decompose the adjoint and swap factors
        Svd s = svd(adjoint(a_in));
        return Svd{s.v, s.sigma, s.u};
    }
    CMatrix a = a_in;
    CMatrix v = CMatrix::identity(n);
    const double tol = 1e-14;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                cdouble g{};
                double app = 0.0, aqq = 0.0;
                for (std::size_t r = 0; r < m; ++r) {
                    g += std::conj(a(r, p)) * a(r, q);
                    app += std::norm(a(r, p));
                    aqq += std::norm(a(r, q));
                }
                const double scale0 = std::sqrt(app * aqq);
                if (std::abs(g) <= tol * scale0 || scale0 == 0.0) continue;
                off = std::max(off, std::abs(g) / scale0);
                // phase-align column q, then a real Jacobi rotation
                const cdouble ph = g / std::abs(g);
                const double tau = (aqq - app) / (2.0 * std::abs(g));
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t r = 0; r < m; ++r) {
                    const cdouble ap = a(r, p), aq = std::conj(ph) * a(r, q);
                    a(r, p) = c * ap - s * aq;
                    a(r, q) = s * ap + c * aq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const cdouble vp = v(r, p), vq = std::conj(ph) * v(r, q);
                    v(r, p) = c * vp - s * vq;
                    v(r, q) = s * vp + c * vq;
                }
            }
        }
        if (off <= tol) break;
    }
    Svd out{CMatrix(m, n), std::vector<double>(n, 0.0), v};
    for (std::size_t j = 0; j < n; ++j) {
        double nrm = 0.0;
        for (std::size_t r = 0; r < m; ++r) nrm += std::norm(a(r, j));
        nrm = std::sqrt(nrm);
        out.sigma[j] = nrm;
        if (nrm > 0.0)
            for (std::size_t r = 0; r < m; ++r) out.u(r, j) = a(r, j) / nrm;
    }
    return out;
}

// Condition estimate sigma_max / sigma_min from the SVD.
inline double condition_estimate(const CMatrix& a) {
    Svd s = svd(a);
    const double smin = s.sigma_min();
    if (smin == 0.0) return HUGE_VAL;
    return s.sigma_max() / smin;
}

// Solve a x = rhs for square well-conditioned a.  Refuses singular or
// ill-conditioned systems (condition estimate >= 1e12) instead of returning
// amplified noise.
inline CMatrix solve(const CMatrix& a, const CMatrix& rhs) {
    if (!a.is_square())
        throw std::invalid_argument("solve: coefficient matrix is not square (" + a.shape_str() + ")");
    if (a.rows() != rhs.rows())
        throw std::invalid_argument("solve: rhs rows " + rhs.shape_str() + " do not match " +
                                    a.shape_str());
    Svd s = svd(a);
    const double smax = s.sigma_max(), smin = s.sigma_min();
    const double cond = (smin == 0.0) ? HUGE_VAL : smax / smin;
    if (!(cond < 1e12)) {
        throw std::runtime_error("solve: singular or ill-conditioned system, condition estimate " +
                                 std::to_string(cond));
    }
    // x = V diag(1/sigma) U^dag rhs
    CMatrix ut_rhs = matmul(adjoint(s.u), rhs);
    for (std::size_t i = 0; i < ut_rhs.rows(); ++i)
        for (std::size_t j = 0; j < ut_rhs.cols(); ++j) ut_rhs(i, j) /= s.sigma[i];
    return matmul(s.v, ut_rhs);
}

// Minimal-norm least-squares solve: drops singular directions below
// rank_tol * sigma_max.  Used by the multiport loop closed form where the
// system can be exactly singular along dark (decoupled) internal modes.
inline CMatrix solve_min_norm(const CMatrix& a, const CMatrix& rhs, double rank_tol = 1e-12) {
    Svd s = svd(a);
    const double cut = rank_tol * std::max(s.sigma_max(), 1e-300);
    CMatrix ut_rhs = matmul(adjoint(s.u), rhs);
    for (std::size_t i = 0; i < ut_rhs.rows(); ++i) {
        const double sg = s.sigma[i];
        for (std::size_t j = 0; j < ut_rhs.cols(); ++j)
            ut_rhs(i, j) = (sg > cut) ? ut_rhs(i, j) / sg : cdouble{};
    }
    return matmul(s.v, ut_rhs);
}

}  // namespace lopt
