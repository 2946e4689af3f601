#include "consensus/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace consensus {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

template<typename T>
void require_square(const BasicMatrix<T>& m, const char* what) {
    if (!m.is_square() || m.rows() == 0) {
        throw InvalidInput(std::string(what) + ": expected a non-empty square matrix, got " + m.shape_string());
    }
}

template<typename T>
double hermitian_defect(const BasicMatrix<T>& s) {
    return max_abs_diff(s, s.adjoint());
}

template<typename T>
using EigenDense = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template<typename T>
EigenDense<T> to_eigen(const BasicMatrix<T>& m) {
    return Eigen::Map<const EigenDense<T>>(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                                           static_cast<Eigen::Index>(m.cols()));
}

template<typename T, typename Derived>
BasicMatrix<T> from_eigen(const Eigen::MatrixBase<Derived>& e) {
    BasicMatrix<T> out(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
    return out;
}

}  // namespace

Spectrum::Spectrum(std::vector<Complex> values) : values_(std::move(values)) {
    double scale = 1.0;
    for (const auto& v : values_) scale = std::max(scale, std::abs(v));
    const double tie_tol = 1e-12 * scale;
    std::sort(values_.begin(), values_.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    // Real parts within tie_tol of a run's leader form one tie group, ordered by imaginary part.
    std::size_t start = 0;
    while (start < values_.size()) {
        std::size_t end = start + 1;
        while (end < values_.size() && values_[start].real() - values_[end].real() <= tie_tol) ++end;
        std::sort(values_.begin() + static_cast<std::ptrdiff_t>(start), values_.begin() + static_cast<std::ptrdiff_t>(end),
                  [](const Complex& a, const Complex& b) {
                      if (a.imag() != b.imag()) return a.imag() > b.imag();
                      return a.real() > b.real();
                  });
        start = end;
    }
}

double Spectrum::max_real() const {
    if (values_.empty()) throw InvalidInput("empty spectrum");
    double best = values_.front().real();
    for (const auto& v : values_) best = std::max(best, v.real());
    return best;
}

double Spectrum::min_real() const {
    if (values_.empty()) throw InvalidInput("empty spectrum");
    double best = values_.front().real();
    for (const auto& v : values_) best = std::min(best, v.real());
    return best;
}

ComplexMatrix to_complex(const Matrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Complex{m(i, j), 0.0};
    return out;
}

Matrix real_part(const ComplexMatrix& m) {
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).real();
    return out;
}

ComplexMatrix sym_part(const ComplexMatrix& h) {
    require_square(h, "sym_part");
    ComplexMatrix out(h.rows(), h.cols());
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j) out(i, j) = (std::conj(h(j, i)) + h(i, j)) / 2.0;
    return out;
}

Matrix sym_part(const Matrix& h) {
    require_square(h, "sym_part");
    Matrix out(h.rows(), h.cols());
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j) out(i, j) = (h(j, i) + h(i, j)) / 2.0;
    return out;
}

Spectrum eigenvalues(const ComplexMatrix& m) {
    require_square(m, "eigenvalues");
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m), false);
    if (solver.info() != Eigen::Success) throw NumericalBreakdown("complex QR iteration did not converge");
    std::vector<Complex> values(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) values[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    return Spectrum(std::move(values));
}

Spectrum eigenvalues(const Matrix& m) {
    require_square(m, "eigenvalues");
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(m), false);
    if (solver.info() != Eigen::Success) throw NumericalBreakdown("real QR iteration did not converge");
    std::vector<Complex> values(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) values[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    return Spectrum(std::move(values));
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& s, double tol) {
    require_square(s, "hermitian_eigenvalues");
    if (hermitian_defect(s) > tol * std::max(1.0, max_abs(s))) {
        throw InvalidInput("matrix is not Hermitian within tolerance");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(sym_part(s)), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalBreakdown("Hermitian eigenvalue iteration did not converge");
    std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

std::vector<double> symmetric_eigenvalues(const Matrix& s, double tol) {
    return hermitian_eigenvalues(to_complex(s), tol);
}

EigenDecomposition eigen_decomposition(const ComplexMatrix& m, double max_condition) {
    require_square(m, "eigen_decomposition");
    const std::size_t n = m.rows();
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m), true);
    if (solver.info() != Eigen::Success) throw NumericalBreakdown("complex QR iteration did not converge");
    const ComplexMatrix vectors = from_eigen<Complex>(solver.eigenvectors());

    ComplexMatrix vinv;
    try {
        vinv = inverse(vectors);
    } catch (const SingularSystem&) {
        throw NotDiagonalizable("eigenvector matrix is singular; matrix is defective");
    }
    const double cond = norm1(vectors) * norm1(vinv);
    if (!(cond <= max_condition)) {
        throw NotDiagonalizable("eigenvector matrix condition number " + std::to_string(cond) + " exceeds " +
                                std::to_string(max_condition));
    }

    // Reorder columns to the canonical spectrum order.
    std::vector<Complex> diag(n);
    for (std::size_t k = 0; k < n; ++k) diag[k] = solver.eigenvalues()(static_cast<Eigen::Index>(k));
    Spectrum lambda(diag);
    std::vector<std::size_t> order(n);
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = n;
        for (std::size_t k = 0; k < n; ++k) {
            if (!used[k] && diag[k] == lambda[i]) {
                best = k;
                break;
            }
        }
        used[best] = true;
        order[i] = best;
    }
    ComplexMatrix q_inv(n, n);
    ComplexMatrix q(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < n; ++r) {
            q_inv(r, i) = vectors(r, order[i]);
            q(i, r) = vinv(order[i], r);
        }
    }
    return {std::move(q_inv), std::move(lambda), std::move(q), cond};
}

HurwitzCheck is_hurwitz(const ComplexMatrix& m, double margin) {
    const double worst = eigenvalues(m).max_real();
    return {worst < -margin, worst};
}

HurwitzCheck is_hurwitz(const Matrix& m, double margin) { return is_hurwitz(to_complex(m), margin); }

bool is_negative_definite(const ComplexMatrix& s, double epsilon, double hermitian_tol) {
    const auto values = hermitian_eigenvalues(s, hermitian_tol);
    return values.front() < -epsilon;
}

Matrix cholesky(const Matrix& s) {
    require_square(s, "cholesky");
    const Eigen::LLT<Eigen::MatrixXd> llt(to_eigen(s));
    if (llt.info() != Eigen::Success) throw InvalidInput("matrix is not positive definite");
    return from_eigen<double>(Eigen::MatrixXd(llt.matrixL()));
}

bool is_positive_definite(const Matrix& s, double symmetric_tol) {
    require_square(s, "is_positive_definite");
    if (hermitian_defect(s) > symmetric_tol * std::max(1.0, max_abs(s))) {
        throw InvalidInput("matrix is not symmetric within tolerance");
    }
    try {
        (void)cholesky(sym_part(s));
    } catch (const InvalidInput&) {
        return false;
    }
    return true;
}

template<typename T>
LuFactorization<T>::LuFactorization(BasicMatrix<T> a) : perm_(a.rows()) {
    require_square(a, "LU factorization");
    const std::size_t n = a.rows();
    const double threshold = static_cast<double>(n) * kEps * std::max(max_abs(a), std::numeric_limits<double>::min());
    const Eigen::PartialPivLU<Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>> lu(to_eigen(a));
    for (std::size_t k = 0; k < n; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        if (!(std::abs(lu.matrixLU()(kk, kk)) > threshold)) throw SingularSystem("matrix is singular to working precision");
    }
    lu_ = from_eigen<T>(lu.matrixLU());
    // P A = L U with (P b)_i = b[perm_[i]].
    const auto& indices = lu.permutationP().indices();
    for (std::size_t i = 0; i < n; ++i) perm_[static_cast<std::size_t>(indices(static_cast<Eigen::Index>(i)))] = i;
}

template<typename T>
std::vector<T> LuFactorization<T>::solve(std::vector<T> b) const {
    const std::size_t n = lu_.rows();
    if (b.size() != n) throw InvalidInput("LU solve: right-hand side length mismatch");
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
        x[i] /= lu_(i, i);
    }
    return x;
}

template<typename T>
BasicMatrix<T> LuFactorization<T>::solve(const BasicMatrix<T>& b) const {
    if (b.rows() != lu_.rows()) throw InvalidInput("LU solve: right-hand side shape mismatch");
    BasicMatrix<T> out(b.rows(), b.cols());
    std::vector<T> col(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
        const auto x = solve(col);
        for (std::size_t i = 0; i < b.rows(); ++i) out(i, j) = x[i];
    }
    return out;
}

template<typename T>
BasicMatrix<T> LuFactorization<T>::inverse() const {
    return solve(BasicMatrix<T>::identity(lu_.rows()));
}

template class LuFactorization<double>;
template class LuFactorization<Complex>;

Matrix solve_lyapunov(const Matrix& a, const Matrix& w) {
    require_square(a, "solve_lyapunov");
    const std::size_t n = a.rows();
    if (w.rows() != n || w.cols() != n) throw InvalidInput("solve_lyapunov: w must match a's shape");
    if (hermitian_defect(w) > kStructuralTol * std::max(1.0, max_abs(w))) {
        throw InvalidInput("solve_lyapunov: w must be symmetric");
    }
    const Matrix at = a.transpose();
    const Matrix eye = Matrix::identity(n);
    const Matrix k = kron(eye, at) + kron(at, eye);
    std::vector<double> rhs(n * n);
    for (std::size_t i = 0; i < n * n; ++i) rhs[i] = -w.data()[i];

    std::vector<double> sol;
    try {
        sol = LuFactorization<double>(k).solve(rhs);
    } catch (const SingularSystem&) {
        throw SingularSystem("Lyapunov operator is singular: two eigenvalues of a sum to zero");
    }
    Matrix q = sym_part(Matrix(n, n, std::move(sol)));

    const Matrix residual = q * a + at * q + w;
    const double scale = std::max({1.0, max_abs(w), max_abs(q) * max_abs(a) * static_cast<double>(n)});
    if (max_abs(residual) > kResidualTol * scale) {
        throw SingularSystem("Lyapunov solve is ill-conditioned: residual " + std::to_string(max_abs(residual)));
    }
    return q;
}

Matrix solve_riccati(const Matrix& a, const Matrix& g, const Matrix& q) {
    require_square(a, "solve_riccati");
    const std::size_t n = a.rows();
    if (g.rows() != n || g.cols() != n || q.rows() != n || q.cols() != n) {
        throw InvalidInput("solve_riccati: g and q must match a's shape");
    }
    Matrix h(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            h(i, j) = a(i, j);
            h(i, n + j) = -g(i, j);
            h(n + i, j) = -q(i, j);
            h(n + i, n + j) = -a(j, i);
        }
    }

    auto frob = [](const Matrix& m) {
        double s = 0.0;
        for (double v : m.data()) s += v * v;
        return std::sqrt(s);
    };

    Matrix z = h;
    bool converged = false;
    bool scaling = true;
    try {
        for (int iter = 0; iter < 100; ++iter) {
            const Matrix zinv = inverse(z);
            double gamma = 1.0;
            if (scaling) gamma = std::sqrt(frob(zinv) / frob(z));
            Matrix next = 0.5 * (gamma * z + (1.0 / gamma) * zinv);
            const double change = norm1(next - z);
            const double size = norm1(next);
            z = std::move(next);
            if (change <= 1e-2 * size) scaling = false;
            if (change <= 1e-13 * size) {
                converged = true;
                break;
            }
        }
    } catch (const SingularSystem&) {
        throw NumericalBreakdown("Riccati sign iteration hit a singular iterate (imaginary-axis eigenvalues)");
    }
    if (!converged) throw NumericalBreakdown("Riccati sign iteration did not converge");

    // Stable invariant subspace is range(I - sign(H)); its graph [I; X] gives X.
    const Matrix proj = Matrix::identity(2 * n) - z;
    Matrix top(n, 2 * n);
    Matrix bottom(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < 2 * n; ++j) {
            top(i, j) = proj(i, j);
            bottom(i, j) = proj(n + i, j);
        }
    }
    const Matrix top_t = top.transpose();
    Matrix x;
    try {
        x = (bottom * top_t) * inverse(top * top_t);
    } catch (const SingularSystem&) {
        throw NumericalBreakdown("stable invariant subspace of the Hamiltonian has no graph form");
    }
    x = sym_part(x);

    const Matrix residual = a.transpose() * x + x * a - x * g * x + q;
    const double scale = std::max({1.0, max_abs(q), max_abs(x) * max_abs(a) * static_cast<double>(n),
                                   max_abs(x) * max_abs(x) * max_abs(g) * static_cast<double>(n)});
    if (max_abs(residual) > kResidualTol * scale) {
        throw NumericalBreakdown("Riccati residual " + std::to_string(max_abs(residual)) + " exceeds tolerance");
    }
    return x;
}

}  // namespace consensus
