#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dsm {

/// Element of R^n with the Euclidean inner product.
class HVector {
public:
    explicit HVector(std::size_t dim, double fill = 0.0);
    explicit HVector(std::vector<double> entries);
    HVector(std::initializer_list<double> entries);

    std::size_t dim() const noexcept { return entries_.size(); }

    double& operator[](std::size_t i) { return entries_[i]; }
    double operator[](std::size_t i) const { return entries_[i]; }

    std::span<double> span() noexcept { return entries_; }
    std::span<const double> span() const noexcept { return entries_; }
    const std::vector<double>& entries() const noexcept { return entries_; }

    auto begin() noexcept { return entries_.begin(); }
    auto end() noexcept { return entries_.end(); }
    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    HVector& operator+=(const HVector& other);
    HVector& operator-=(const HVector& other);
    HVector& operator*=(double s);

    /// this += s * x
    HVector& axpy(double s, const HVector& x);

    bool operator==(const HVector&) const = default;

private:
    std::vector<double> entries_;
};

HVector operator+(HVector lhs, const HVector& rhs);
HVector operator-(HVector lhs, const HVector& rhs);
HVector operator-(HVector v);
HVector operator*(double s, HVector v);

double inner(const HVector& u, const HVector& v);
double norm(const HVector& u);
bool all_finite(const HVector& u);

/// Throws InvalidInput unless u.dim() == expected.
void require_dim(const HVector& u, std::size_t expected, const char* what);

/// Dense row-major matrix. Square in every use here (Jacobians, A + aI).
class DenseMatrix {
public:
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> data() const noexcept { return data_; }

    DenseMatrix transposed() const;
    /// (A + A^T) / 2
    DenseMatrix symmetric_part() const;
    double max_abs() const;
    bool all_finite() const;

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

HVector operator*(const DenseMatrix& a, const HVector& x);

}  // namespace dsm
