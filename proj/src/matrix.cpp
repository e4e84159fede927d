#include "odecert/matrix.hpp"

#include "odecert/elementary.hpp"
#include "odecert/errors.hpp"
#include "odecert/work.hpp"

#include <algorithm>

namespace odecert {

QMatrix QMatrix::identity(int d) {
    QMatrix m(d, d);
    for (int i = 0; i < d; ++i) m.at(i, i) = GaussianRational(1);
    return m;
}

QMatrix QMatrix::from_rows(const std::vector<std::vector<GaussianRational>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r > 0 ? static_cast<int>(rows[0].size()) : 0;
    QMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c) throw dimension_mismatch("ragged rows");
        for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

bool QMatrix::is_zero() const {
    for (const auto& x : e_)
        if (!x.is_zero()) return false;
    return true;
}

QMatrix QMatrix::operator-() const {
    QMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < e_.size(); ++k) m.e_[k] = -e_[k];
    return m;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw dimension_mismatch();
    QMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < e_.size(); ++k) m.e_[k] = e_[k] + o.e_[k];
    return m;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw dimension_mismatch();
    QMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < e_.size(); ++k) m.e_[k] = e_[k] - o.e_[k];
    return m;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
    if (cols_ != o.rows_) throw dimension_mismatch();
    QMatrix m(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < o.cols_; ++j) {
            GaussianRational s;
            for (int k = 0; k < cols_; ++k) s = s + at(i, k) * o.at(k, j);
            m.at(i, j) = s;
        }
    return m;
}

QMatrix QMatrix::scale(const GaussianRational& c) const {
    QMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < e_.size(); ++k) m.e_[k] = e_[k] * c;
    return m;
}

QMatrix QMatrix::pow(unsigned long k) const {
    if (rows_ != cols_) throw dimension_mismatch("pow of non-square matrix");
    QMatrix acc = identity(rows_);
    QMatrix b = *this;
    while (k > 0) {
        if (k & 1) acc = acc * b;
        b = b * b;
        k >>= 1;
    }
    return acc;
}

std::vector<GaussianRational> QMatrix::apply(const std::vector<GaussianRational>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw dimension_mismatch();
    std::vector<GaussianRational> r(rows_);
    for (int i = 0; i < rows_; ++i) {
        GaussianRational s;
        for (int j = 0; j < cols_; ++j) s = s + at(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

std::optional<QMatrix> QMatrix::inverse() const {
    if (rows_ != cols_) throw dimension_mismatch("inverse of non-square matrix");
    int d = rows_;
    QMatrix a = *this;
    QMatrix inv = identity(d);
    for (int col = 0; col < d; ++col) {
        int piv = -1;
        for (int r = col; r < d; ++r)
            if (!a.at(r, col).is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) return std::nullopt;
        if (piv != col)
            for (int j = 0; j < d; ++j) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        GaussianRational p = a.at(col, col).inverse();
        for (int j = 0; j < d; ++j) {
            a.at(col, j) = a.at(col, j) * p;
            inv.at(col, j) = inv.at(col, j) * p;
        }
        for (int r = 0; r < d; ++r) {
            if (r == col || a.at(r, col).is_zero()) continue;
            GaussianRational f = a.at(r, col);
            for (int j = 0; j < d; ++j) {
                a.at(r, j) = a.at(r, j) - f * a.at(col, j);
                inv.at(r, j) = inv.at(r, j) - f * inv.at(col, j);
            }
        }
    }
    return inv;
}

std::string QMatrix::to_string() const {
    std::string s = "[";
    for (int i = 0; i < rows_; ++i) {
        s += "[";
        for (int j = 0; j < cols_; ++j) {
            s += at(i, j).to_string();
            if (j + 1 < cols_) s += ", ";
        }
        s += "]";
        if (i + 1 < rows_) s += ", ";
    }
    return s + "]";
}

MatrixBox MatrixBox::identity(int d) {
    MatrixBox m(d);
    for (int i = 0; i < d; ++i) m.at(i, i) = ComplexBox::real_point(Dyadic(1));
    return m;
}

MatrixBox MatrixBox::from_exact(const QMatrix& m, long bits) {
    if (m.rows() != m.cols()) throw dimension_mismatch("MatrixBox requires square input");
    MatrixBox b(m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) b.at(i, j) = ComplexBox::from_exact(m.at(i, j), bits);
    return b;
}

MatrixBox MatrixBox::operator+(const MatrixBox& o) const {
    if (d_ != o.d_) throw dimension_mismatch();
    MatrixBox m(d_);
    for (std::size_t k = 0; k < e_.size(); ++k) m.e_[k] = e_[k] + o.e_[k];
    return m;
}

MatrixBox MatrixBox::operator*(const MatrixBox& o) const {
    if (d_ != o.d_) throw dimension_mismatch();
    MatrixBox m(d_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) {
            ComplexBox s;
            for (int k = 0; k < d_; ++k) s = s + at(i, k) * o.at(k, j);
            m.at(i, j) = s;
        }
    return m;
}

MatrixBox MatrixBox::scale(const GaussianRational& c, long bits) const {
    MatrixBox m(d_);
    for (std::size_t k = 0; k < e_.size(); ++k) m.e_[k] = e_[k].scale(c, bits);
    return m;
}

MatrixBox MatrixBox::mul_pow2(long k) const {
    MatrixBox m(d_);
    for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i].mul_pow2(k);
    return m;
}

MatrixBox MatrixBox::round_outward(long bits) const {
    MatrixBox m(d_);
    for (std::size_t k = 0; k < e_.size(); ++k) m.e_[k] = e_[k].round_outward(bits);
    return m;
}

MatrixBox MatrixBox::inflate(const Dyadic& r) const {
    MatrixBox m(d_);
    for (std::size_t k = 0; k < e_.size(); ++k) m.e_[k] = e_[k].inflate(r);
    return m;
}

std::optional<MatrixBox> MatrixBox::intersect(const MatrixBox& o) const {
    if (d_ != o.d_) throw dimension_mismatch();
    MatrixBox m(d_);
    for (std::size_t k = 0; k < e_.size(); ++k) {
        auto i = e_[k].intersect(o.e_[k]);
        if (!i) return std::nullopt;
        m.e_[k] = *i;
    }
    return m;
}

std::vector<ComplexBox> MatrixBox::apply(const std::vector<ComplexBox>& v) const {
    if (static_cast<int>(v.size()) != d_) throw dimension_mismatch();
    std::vector<ComplexBox> r(d_);
    for (int i = 0; i < d_; ++i) {
        ComplexBox s;
        for (int j = 0; j < d_; ++j) s = s + at(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

Dyadic MatrixBox::max_width() const {
    Dyadic w;
    for (const auto& b : e_) w = std::max(w, b.width());
    return w;
}

Dyadic MatrixBox::rowsum_norm_upper() const {
    Dyadic best;
    for (int i = 0; i < d_; ++i) {
        Dyadic s;
        for (int j = 0; j < d_; ++j) s = s + at(i, j).mag_upper();
        best = std::max(best, s);
    }
    return best;
}

MatrixBox mat_exp_raw(const MatrixBox& m, long bits) {
    work::count_exp();
    int d = m.dim();
    Dyadic norm = m.rowsum_norm_upper();
    long extra = norm.is_zero() ? 0 : 2 * dyadic_ceil_long(norm) + 2;
    long w = bits + 8 + extra;

    MatrixBox result(d);
    Dyadic target = Dyadic::pow2(-bits);
    for (int round = 0;; ++round) {
        const long wr = w + 16;
        long s = 0;
        if (!norm.is_zero()) {
            long cl = norm.ceil_log2_abs();
            if (cl + 1 > 0) s = cl + 1;
        }
        MatrixBox x = m.mul_pow2(-s);

        MatrixBox term = MatrixBox::identity(d);
        MatrixBox sum = term;
        const mpq_class tol = Dyadic::pow2(-(w + 6)).to_rational();
        for (unsigned long j = 1;; ++j) {
            term = (term * x).scale(GaussianRational(1, static_cast<long>(j)), wr).round_outward(wr);
            sum = sum + term;
            mpq_class tail = term.rowsum_norm_upper().to_rational() / (static_cast<long>(j) + 1);
            if (tail <= tol) {
                sum = sum.inflate(Dyadic::from_rational_up(tail, 24));
                break;
            }
            if (j > 4 * static_cast<unsigned long>(w) + 64)
                throw internal_error("matrix exp series failed to converge");
        }
        for (long q = 0; q < s; ++q) sum = (sum * sum).round_outward(wr);
        result = sum;

        if (round == 0) {
            Dyadic prop = result.rowsum_norm_upper() * m.max_width();
            target = target + prop.mul_pow2(2);
        }
        if (result.max_width() <= target || round >= 6) break;
        w *= 2;
    }
    return result;
}

MatrixBox mat_exp(const MatrixBox& m, long bits) {
    if (bits < 1) bits = 1;
    long b0 = ((bits - 1) % 8) + 1;
    MatrixBox acc = mat_exp_raw(m, b0);
    for (long b = b0 + 8; b <= bits; b += 8) {
        auto i = acc.intersect(mat_exp_raw(m, b));
        if (!i) throw internal_error("mat_exp precision ladder enclosures do not overlap");
        acc = *i;
    }
    return acc;
}

} // namespace odecert
