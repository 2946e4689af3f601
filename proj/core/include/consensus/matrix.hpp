#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "consensus/errors.hpp"

namespace consensus {

using Complex = std::complex<double>;

namespace detail {
template<typename T>
struct is_complex : std::false_type {};
template<typename T>
struct is_complex<std::complex<T>> : std::true_type {};

inline bool finite_scalar(double v) { return std::isfinite(v); }
inline bool finite_scalar(const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

inline double conj_scalar(double v) { return v; }
inline Complex conj_scalar(const Complex& v) { return std::conj(v); }
}  // namespace detail

/**
 * Dense row-major matrix over double or std::complex<double>.
 *
 * Shapes are validated on every arithmetic operation; a mismatch throws InvalidInput.
 * Entries are required to be finite at construction from external data (see from_rows);
 * arithmetic results are not re-checked.
 */
template<typename T>
class BasicMatrix {
public:
    using value_type = T;

    BasicMatrix() = default;

    BasicMatrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    BasicMatrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw InvalidInput("matrix data length " + std::to_string(data_.size()) + " does not match " +
                               std::to_string(rows_) + "x" + std::to_string(cols_));
        }
        for (const auto& v : data_) {
            if (!detail::finite_scalar(v)) throw InvalidInput("matrix entries must be finite");
        }
    }

    /// Row-list literal, e.g. Matrix::from_rows({{-2, 1}, {1, -2}}).
    static BasicMatrix from_rows(std::initializer_list<std::initializer_list<T>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        std::vector<T> data;
        data.reserve(r * c);
        for (const auto& row : rows) {
            if (row.size() != c) throw InvalidInput("ragged row list");
            data.insert(data.end(), row.begin(), row.end());
        }
        return BasicMatrix(r, c, std::move(data));
    }

    static BasicMatrix identity(std::size_t n) {
        BasicMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    static BasicMatrix diagonal(std::span<const T> values) {
        BasicMatrix m(values.size(), values.size());
        for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const T> data() const noexcept { return data_; }
    [[nodiscard]] std::span<T> data() noexcept { return data_; }

    [[nodiscard]] BasicMatrix transpose() const {
        BasicMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Conjugate transpose; equals transpose() for real matrices.
    [[nodiscard]] BasicMatrix adjoint() const {
        BasicMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = detail::conj_scalar((*this)(i, j));
        return t;
    }

    BasicMatrix& operator+=(const BasicMatrix& o) {
        require_same_shape(o, "+");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    BasicMatrix& operator-=(const BasicMatrix& o) {
        require_same_shape(o, "-");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    BasicMatrix& operator*=(T s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend BasicMatrix operator+(BasicMatrix a, const BasicMatrix& b) { return a += b; }
    friend BasicMatrix operator-(BasicMatrix a, const BasicMatrix& b) { return a -= b; }
    friend BasicMatrix operator*(BasicMatrix a, T s) { return a *= s; }
    friend BasicMatrix operator*(T s, BasicMatrix a) { return a *= s; }
    friend BasicMatrix operator-(BasicMatrix a) { return a *= T{-1}; }

    friend BasicMatrix operator*(const BasicMatrix& a, const BasicMatrix& b) {
        if (a.cols_ != b.rows_) {
            throw InvalidInput("matrix product shape mismatch: " + a.shape_string() + " * " + b.shape_string());
        }
        BasicMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T aik = a(i, k);
                if (aik == T{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        }
        return out;
    }

    friend bool operator==(const BasicMatrix& a, const BasicMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    [[nodiscard]] std::string shape_string() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

private:
    void require_same_shape(const BasicMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw InvalidInput(std::string("matrix shape mismatch for '") + op + "': " + shape_string() + " vs " +
                               o.shape_string());
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Matrix = BasicMatrix<double>;
using ComplexMatrix = BasicMatrix<Complex>;

/// Promote a real matrix to complex.
ComplexMatrix to_complex(const Matrix& m);

/// Element-wise real part.
Matrix real_part(const ComplexMatrix& m);

/// Largest absolute entry; 0 for an empty matrix.
template<typename T>
double max_abs(const BasicMatrix<T>& m) {
    double best = 0.0;
    for (const auto& v : m.data()) best = std::max(best, std::abs(v));
    return best;
}

/// Max-norm distance between two same-shape matrices.
template<typename T>
double max_abs_diff(const BasicMatrix<T>& a, const BasicMatrix<T>& b) {
    return max_abs(a - b);
}

/// Kronecker product: block (i, j) of the result is a(i, j) * b.
template<typename T>
BasicMatrix<T> kron(const BasicMatrix<T>& a, const BasicMatrix<T>& b) {
    BasicMatrix<T> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const T s = a(i, j);
            if (s == T{}) continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q) out(i * b.rows() + p, j * b.cols() + q) = s * b(p, q);
        }
    return out;
}

/// y = m * x for a dense vector x.
template<typename T>
std::vector<T> multiply(const BasicMatrix<T>& m, std::span<const T> x) {
    if (x.size() != m.cols()) throw InvalidInput("matrix-vector shape mismatch");
    std::vector<T> y(m.rows(), T{});
    for (std::size_t i = 0; i < m.rows(); ++i) {
        T acc{};
        for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

}  // namespace consensus
