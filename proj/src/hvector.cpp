#include "dsm/hvector.hpp"

#include "dsm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dsm {

HVector::HVector(std::size_t dim, double fill) : entries_(dim, fill) {
    if (dim == 0) throw InvalidInput("HVector: dimension must be at least 1");
}

HVector::HVector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw InvalidInput("HVector: dimension must be at least 1");
}

HVector::HVector(std::initializer_list<double> entries) : HVector(std::vector<double>(entries)) {}

HVector& HVector::operator+=(const HVector& other) {
    require_dim(other, dim(), "HVector +=");
    for (std::size_t i = 0; i < dim(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

HVector& HVector::operator-=(const HVector& other) {
    require_dim(other, dim(), "HVector -=");
    for (std::size_t i = 0; i < dim(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

HVector& HVector::operator*=(double s) {
    for (auto& x : entries_) x *= s;
    return *this;
}

HVector& HVector::axpy(double s, const HVector& x) {
    require_dim(x, dim(), "HVector axpy");
    for (std::size_t i = 0; i < dim(); ++i) entries_[i] += s * x.entries_[i];
    return *this;
}

HVector operator+(HVector lhs, const HVector& rhs) { return lhs += rhs; }
HVector operator-(HVector lhs, const HVector& rhs) { return lhs -= rhs; }
HVector operator-(HVector v) { return v *= -1.0; }
HVector operator*(double s, HVector v) { return v *= s; }

double inner(const HVector& u, const HVector& v) {
    require_dim(v, u.dim(), "inner");
    double s = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) s += u[i] * v[i];
    return s;
}

double norm(const HVector& u) {
    // Scaled sum of squares so that huge stage solutions (u_a ~ h/a) do not overflow.
    double scale = 0.0;
    for (double x : u) scale = std::max(scale, std::abs(x));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double s = 0.0;
    for (double x : u) {
        const double y = x / scale;
        s += y * y;
    }
    return scale * std::sqrt(s);
}

bool all_finite(const HVector& u) {
    return std::all_of(u.begin(), u.end(), [](double x) { return std::isfinite(x); });
}

void require_dim(const HVector& u, std::size_t expected, const char* what) {
    if (u.dim() != expected) {
        throw InvalidInput(std::string(what) + ": dimension mismatch (got " +
                           std::to_string(u.dim()) + ", expected " +
                           std::to_string(expected) + ")");
    }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw InvalidInput("DenseMatrix: empty shape");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (rows == 0 || cols == 0) throw InvalidInput("DenseMatrix: empty shape");
    if (data_.size() != rows * cols) throw InvalidInput("DenseMatrix: entry count does not match shape");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw InvalidInput("DenseMatrix::from_rows: ragged rows");
        data.insert(data.end(), row.begin(), row.end());
    }
    return DenseMatrix(r, c, std::move(data));
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix DenseMatrix::symmetric_part() const {
    if (!square()) throw InvalidInput("symmetric_part: matrix is not square");
    DenseMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) s(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
    return s;
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

bool DenseMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

HVector operator*(const DenseMatrix& a, const HVector& x) {
    require_dim(x, a.cols(), "matrix-vector product");
    HVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

}  // namespace dsm
