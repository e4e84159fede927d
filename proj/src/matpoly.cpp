#include "odecert/matpoly.hpp"

#include "odecert/errors.hpp"

namespace odecert {

MatPoly::MatPoly(int d, std::vector<QMatrix> coeffs) : d_(d), c_(std::move(coeffs)) {
    for (const auto& m : c_)
        if (m.rows() != d_ || m.cols() != d_) throw dimension_mismatch("MatPoly coefficient shape");
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

QMatrix MatPoly::coeff(std::size_t k) const {
    return k < c_.size() ? c_[k] : QMatrix(d_, d_);
}

QMatrix matpoly_eval(const MatPoly& p, const QMatrix& m) {
    if (m.rows() != m.cols() || (p.dim() != 0 && m.rows() != p.dim()))
        throw dimension_mismatch("matpoly_eval dimension");
    int d = m.rows();
    QMatrix acc(d, d);
    QMatrix power = QMatrix::identity(d);
    for (int k = 0; k <= p.degree(); ++k) {
        acc = acc + p.coeff(static_cast<std::size_t>(k)) * power;
        if (k < p.degree()) power = power * m;
    }
    return acc;
}

} // namespace odecert
