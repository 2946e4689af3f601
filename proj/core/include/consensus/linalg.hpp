#pragma once

#include <vector>

#include "consensus/matrix.hpp"

namespace consensus {

/// Default tolerance for properties that hold exactly by construction (symmetry, row sums).
inline constexpr double kStructuralTol = 1e-10;
/// Default tolerance for residuals of iterative or factorized results.
inline constexpr double kResidualTol = 1e-8;
/// Eigenvector-matrix condition number above which a matrix is treated as defective.
inline constexpr double kDefectiveCondition = 1e8;

/**
 * Multiset of complex eigenvalues in canonical order: descending real part, ties
 * broken by descending imaginary part. Real parts closer than 1e-12 * scale count as
 * tied so that conjugate pairs keep the +imag member first.
 */
class Spectrum {
public:
    Spectrum() = default;
    explicit Spectrum(std::vector<Complex> values);

    [[nodiscard]] const std::vector<Complex>& values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] const Complex& operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] auto begin() const noexcept { return values_.begin(); }
    [[nodiscard]] auto end() const noexcept { return values_.end(); }

    /// Largest real part (the first entry); requires a non-empty spectrum.
    [[nodiscard]] double max_real() const;
    /// Smallest real part (the last entry); requires a non-empty spectrum.
    [[nodiscard]] double min_real() const;

private:
    std::vector<Complex> values_;
};

/// Hermitian part (H* + H) / 2.
ComplexMatrix sym_part(const ComplexMatrix& h);
/// Symmetric part (H^T + H) / 2 of a real matrix.
Matrix sym_part(const Matrix& h);

/// All eigenvalues with multiplicity (Hessenberg reduction + shifted complex QR).
Spectrum eigenvalues(const ComplexMatrix& m);
Spectrum eigenvalues(const Matrix& m);

/// Eigenvalues of a Hermitian (or real symmetric) matrix as reals, descending.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& s, double tol = kStructuralTol);
std::vector<double> symmetric_eigenvalues(const Matrix& s, double tol = kStructuralTol);

/// m = q_inv * diag(lambda) * q. Columns of q_inv are right eigenvectors.
struct EigenDecomposition {
    ComplexMatrix q_inv;
    Spectrum lambda;
    ComplexMatrix q;
    double condition = 1.0;  ///< 1-norm condition number of q_inv
};

/// Throws NotDiagonalizable when the eigenvector matrix condition number exceeds max_condition.
EigenDecomposition eigen_decomposition(const ComplexMatrix& m, double max_condition = kDefectiveCondition);

struct HurwitzCheck {
    bool verdict = false;
    double worst_real_part = 0.0;
};

/// verdict iff max Re(eig(m)) < -margin.
HurwitzCheck is_hurwitz(const ComplexMatrix& m, double margin = 0.0);
HurwitzCheck is_hurwitz(const Matrix& m, double margin = 0.0);

/// True iff the largest eigenvalue of Hermitian s is below -epsilon. Non-Hermitian input throws.
bool is_negative_definite(const ComplexMatrix& s, double epsilon = 0.0, double hermitian_tol = kStructuralTol);

/// True iff symmetric s admits a complete Cholesky factorization. Non-symmetric input throws.
bool is_positive_definite(const Matrix& s, double symmetric_tol = kStructuralTol);

/// Lower-triangular Cholesky factor; throws InvalidInput when s is not positive definite.
Matrix cholesky(const Matrix& s);

/// LU with partial pivoting. Singular pivots throw SingularSystem.
template<typename T>
class LuFactorization {
public:
    explicit LuFactorization(BasicMatrix<T> a);

    [[nodiscard]] std::vector<T> solve(std::vector<T> b) const;
    [[nodiscard]] BasicMatrix<T> solve(const BasicMatrix<T>& b) const;
    [[nodiscard]] BasicMatrix<T> inverse() const;

private:
    BasicMatrix<T> lu_;
    std::vector<std::size_t> perm_;
};

template<typename T>
BasicMatrix<T> inverse(const BasicMatrix<T>& a) {
    return LuFactorization<T>(a).inverse();
}

/// 1-norm (max column sum of moduli).
template<typename T>
double norm1(const BasicMatrix<T>& a) {
    double best = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

/**
 * Solves Q a + a^T Q = -w for symmetric Q by vectorizing to the n^2 system
 * (I (x) a^T + a^T (x) I) vec(Q) = -vec(w). The result is symmetrized.
 * Throws SingularSystem when two eigenvalues of a sum to zero.
 */
Matrix solve_lyapunov(const Matrix& a, const Matrix& w);

/**
 * Stabilizing solution X of the continuous algebraic Riccati equation
 * a^T X + X a - X g X + q = 0 (g, q symmetric), via the matrix-sign iteration on the
 * Hamiltonian [[a, -g], [-q, -a^T]]. Throws NumericalBreakdown when the iteration
 * stalls or the stable invariant subspace has no graph form.
 */
Matrix solve_riccati(const Matrix& a, const Matrix& g, const Matrix& q);

}  // namespace consensus
