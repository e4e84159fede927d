#pragma once

#include "odecert/gaussian_rational.hpp"
#include "odecert/interval.hpp"

#include <optional>
#include <string>
#include <vector>

namespace odecert {

// Dense matrix over the Gaussian rationals. All operations are exact.
class QMatrix {
public:
    QMatrix() : rows_(0), cols_(0) {}
    QMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(rows * cols) {}

    static QMatrix identity(int d);
    static QMatrix from_rows(const std::vector<std::vector<GaussianRational>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    GaussianRational& at(int i, int j) { return e_[i * cols_ + j]; }
    const GaussianRational& at(int i, int j) const { return e_[i * cols_ + j]; }

    bool is_zero() const;
    bool operator==(const QMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_; }
    bool operator!=(const QMatrix& o) const { return !(*this == o); }

    QMatrix operator-() const;
    QMatrix operator+(const QMatrix& o) const;
    QMatrix operator-(const QMatrix& o) const;
    QMatrix operator*(const QMatrix& o) const;
    QMatrix scale(const GaussianRational& c) const;
    QMatrix pow(unsigned long k) const;

    std::vector<GaussianRational> apply(const std::vector<GaussianRational>& v) const;

    // Exact inverse by Gauss-Jordan elimination; nullopt when singular.
    std::optional<QMatrix> inverse() const;

    ComplexBox to_box_entry(int i, int j, long bits) const {
        return ComplexBox::from_exact(at(i, j), bits);
    }

    std::string to_string() const;

private:
    int rows_, cols_;
    std::vector<GaussianRational> e_;
};

// Square grid of complex boxes; the enclosure-valued counterpart of QMatrix.
class MatrixBox {
public:
    MatrixBox() : d_(0) {}
    explicit MatrixBox(int d) : d_(d), e_(d * d) {}

    static MatrixBox identity(int d);
    static MatrixBox from_exact(const QMatrix& m, long bits);

    int dim() const { return d_; }
    ComplexBox& at(int i, int j) { return e_[i * d_ + j]; }
    const ComplexBox& at(int i, int j) const { return e_[i * d_ + j]; }

    MatrixBox operator+(const MatrixBox& o) const;
    MatrixBox operator*(const MatrixBox& o) const;
    MatrixBox scale(const GaussianRational& c, long bits) const;
    MatrixBox mul_pow2(long k) const;
    MatrixBox round_outward(long bits) const;
    MatrixBox inflate(const Dyadic& r) const;
    std::optional<MatrixBox> intersect(const MatrixBox& o) const;

    std::vector<ComplexBox> apply(const std::vector<ComplexBox>& v) const;

    Dyadic max_width() const;
    // Upper bound on the max row sum of entry moduli (the norm driving the
    // scaling-and-squaring step count).
    Dyadic rowsum_norm_upper() const;

private:
    int d_;
    std::vector<ComplexBox> e_;
};

MatrixBox mat_exp_raw(const MatrixBox& m, long bits);
MatrixBox mat_exp(const MatrixBox& m, long bits);

// Spec-facing name for the exact inverse.
inline std::optional<QMatrix> mat_inverse_exact(const QMatrix& m) { return m.inverse(); }

} // namespace odecert
