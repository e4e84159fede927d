#pragma once

#include "odecert/matrix.hpp"

#include <vector>

namespace odecert {

// Polynomial with d x d matrix coefficients; coeffs[k] multiplies X^k.
class MatPoly {
public:
    MatPoly() : d_(0) {}
    MatPoly(int d, std::vector<QMatrix> coeffs);

    int dim() const { return d_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    QMatrix coeff(std::size_t k) const;
    const std::vector<QMatrix>& coeffs() const { return c_; }

private:
    int d_;
    std::vector<QMatrix> c_;
};

// Sum_k C_k * M^k, coefficient matrix on the left of the power. The paper
// leaves the order unstated; it is fixed here because the coefficients need
// not commute with M.
QMatrix matpoly_eval(const MatPoly& p, const QMatrix& m);

} // namespace odecert
