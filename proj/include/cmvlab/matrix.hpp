#ifndef CMVLAB_MATRIX_HPP
#define CMVLAB_MATRIX_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "scalar.hpp"

namespace cmvlab {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, from_int<T>(0)) {}

    static Matrix identity(int n)
    {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            m(i, i) = from_int<T>(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    Matrix block(int r0, int c0, int nr, int nc) const
    {
        if (r0 < 0 || c0 < 0 || r0 + nr > rows_ || c0 + nc > cols_)
            throw std::out_of_range("matrix block outside bounds");
        Matrix b(nr, nc);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nc; ++j)
                b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    Matrix leading(int n) const { return block(0, 0, n, n); }

    Matrix adjoint() const
    {
        Matrix a(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                a(j, i) = conj_of((*this)(i, j));
        return a;
    }

    Matrix transpose() const
    {
        Matrix a(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                a(j, i) = (*this)(i, j);
        return a;
    }

    std::vector<T> row(int i) const
    {
        return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i) * cols_,
                              data_.begin() + static_cast<std::ptrdiff_t>(i + 1) * cols_);
    }

    double max_abs() const
    {
        double m = 0.0;
        for (const auto& v : data_)
            m = std::max(m, magnitude(v));
        return m;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("matrix product dimension mismatch");
        Matrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (is_zero(aik))
                    continue;
                for (int j = 0; j < b.cols_; ++j)
                    c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend Matrix operator+(Matrix a, const Matrix& b)
    {
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            a.data_[i] += b.data_[i];
        return a;
    }

    friend Matrix operator-(Matrix a, const Matrix& b)
    {
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            a.data_[i] -= b.data_[i];
        return a;
    }

    Matrix scaled(const T& s) const
    {
        Matrix a = *this;
        for (auto& v : a.data_)
            v *= s;
        return a;
    }

    std::vector<T> apply(const std::vector<T>& x) const
    {
        std::vector<T> y(rows_, from_int<T>(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                y[i] += (*this)(i, j) * x[j];
        return y;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b)
{
    T s = from_int<T>(0);
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

// Inverse of a unit lower triangular matrix by forward substitution.
template <class T>
Matrix<T> unit_lower_inverse(const Matrix<T>& l)
{
    const int n = l.rows();
    Matrix<T> inv(n, n);
    for (int j = 0; j < n; ++j) {
        inv(j, j) = from_int<T>(1);
        for (int i = j + 1; i < n; ++i) {
            T s = from_int<T>(0);
            for (int k = j; k < i; ++k)
                s += l(i, k) * inv(k, j);
            inv(i, j) = -s;
        }
    }
    return inv;
}

// Row-pivoted LU used for generic solves and determinants. Exact scalars
// pivot on the first nonzero entry, floating ones on the largest.
template <class T>
class PivotedLU {
public:
    explicit PivotedLU(const Matrix<T>& a) : lu_(a), perm_(a.rows())
    {
        const int n = a.rows();
        for (int i = 0; i < n; ++i)
            perm_[i] = i;
        scale_ = a.max_abs();
        for (int k = 0; k < n; ++k) {
            int p = k;
            if constexpr (is_exact_v<T>) {
                while (p < n && is_zero(lu_(p, k)))
                    ++p;
                if (p == n) {
                    singular_ = true;
                    min_pivot_ = 0.0;
                    continue;
                }
            } else {
                double best = magnitude(lu_(k, k));
                for (int i = k + 1; i < n; ++i)
                    if (magnitude(lu_(i, k)) > best) {
                        best = magnitude(lu_(i, k));
                        p = i;
                    }
            }
            if (p != k) {
                for (int j = 0; j < n; ++j)
                    std::swap(lu_(p, j), lu_(k, j));
                std::swap(perm_[p], perm_[k]);
                sign_ = -sign_;
            }
            const T piv = lu_(k, k);
            min_pivot_ = std::min(min_pivot_, magnitude(piv));
            if (is_zero(piv)) {
                singular_ = true;
                continue;
            }
            for (int i = k + 1; i < n; ++i) {
                if (is_zero(lu_(i, k)))
                    continue;
                T f = lu_(i, k) / piv;
                lu_(i, k) = f;
                for (int j = k + 1; j < n; ++j)
                    lu_(i, j) -= f * lu_(k, j);
            }
        }
    }

    bool exactly_singular() const { return singular_; }
    double min_pivot() const { return min_pivot_; }
    double scale() const { return scale_; }

    T determinant() const
    {
        T d = from_int<T>(sign_);
        for (int i = 0; i < lu_.rows(); ++i)
            d *= lu_(i, i);
        return d;
    }

    std::vector<T> solve(const std::vector<T>& b) const
    {
        if (singular_)
            throw std::domain_error("solve with singular matrix");
        const int n = lu_.rows();
        std::vector<T> x(n);
        for (int i = 0; i < n; ++i) {
            T s = b[perm_[i]];
            for (int j = 0; j < i; ++j)
                s -= lu_(i, j) * x[j];
            x[i] = s;
        }
        for (int i = n - 1; i >= 0; --i) {
            T s = x[i];
            for (int j = i + 1; j < n; ++j)
                s -= lu_(i, j) * x[j];
            x[i] = s / lu_(i, i);
        }
        return x;
    }

    // x such that x A = b
    std::vector<T> solve_left(const std::vector<T>& b) const
    {
        if (singular_)
            throw std::domain_error("solve with singular matrix");
        const int n = lu_.rows();
        // A = P^T L U, x P^T L U = b
        std::vector<T> y(n);
        for (int j = 0; j < n; ++j) {
            T s = b[j];
            for (int i = 0; i < j; ++i)
                s -= y[i] * lu_(i, j);
            y[j] = s / lu_(j, j);
        }
        std::vector<T> w(n);
        for (int j = n - 1; j >= 0; --j) {
            T s = y[j];
            for (int i = j + 1; i < n; ++i)
                s -= w[i] * lu_(i, j);
            w[j] = s;
        }
        std::vector<T> x(n);
        for (int i = 0; i < n; ++i)
            x[perm_[i]] = w[i];
        return x;
    }

private:
    Matrix<T> lu_;
    std::vector<int> perm_;
    int sign_ = 1;
    bool singular_ = false;
    double min_pivot_ = std::numeric_limits<double>::infinity();
    double scale_ = 0.0;
};

template <class T>
T determinant(const Matrix<T>& a)
{
    if (a.rows() == 0)
        return from_int<T>(1);
    return PivotedLU<T>(a).determinant();
}

} // namespace cmvlab

#endif
