#include "odecert/ode.hpp"

#include "odecert/errors.hpp"

namespace odecert {

void LinearODE::validate() const {
    if (a.empty() || a.back().is_zero())
        throw zero_leading_coefficient("a_m must be nonzero");
    if (b.empty() || b.back().is_zero())
        throw zero_leading_coefficient("b_n must be nonzero");
    if (static_cast<int>(y0.size()) != m())
        throw validation_error("expected " + std::to_string(m()) + " initial values, got " +
                               std::to_string(y0.size()));
}

LinearODE LinearODE::normalize() const {
    validate();
    if (is_normalized()) return *this;
    GaussianRational inv = a.back().inverse();
    LinearODE out = *this;
    for (auto& c : out.a) c = c * inv;
    for (auto& c : out.b) c = c * inv;
    return out;
}

std::pair<Poly, Poly> char_polys(const LinearODE& ode) {
    return {Poly(ode.a), Poly(ode.b)};
}

void ODESystem::validate() const {
    if (d <= 0) throw validation_error("system dimension must be positive");
    if (A.empty()) throw validation_error("system needs at least A0, A1");
    for (const auto& mt : A)
        if (mt.rows() != d || mt.cols() != d) throw dimension_mismatch("A block shape");
    for (const auto& mt : B)
        if (mt.rows() != d || mt.cols() != d) throw dimension_mismatch("B block shape");
    if (A.back().is_zero()) throw zero_leading_coefficient("leading A block is zero");
    if (B.empty()) throw validation_error("system needs at least B0 (may be zero)");
    if (static_cast<int>(y0.size()) != d)
        throw validation_error("system initial state must have d entries");
}

std::pair<MatPoly, MatPoly> char_polys(const ODESystem& sys) {
    return {MatPoly(sys.d, sys.A), MatPoly(sys.d, sys.B)};
}

ODESystem build_lif(const GaussianRational& tau_m, const GaussianRational& tau_s,
                    const GaussianRational& v_rest, const GaussianRational& v0,
                    const GaussianRational& i0) {
    if (!tau_m.is_real() || !tau_s.is_real() || sgn(tau_m.re()) <= 0 || sgn(tau_s.re()) <= 0)
        throw nonpositive_time_constant();
    GaussianRational inv_m = tau_m.inverse();
    GaussianRational inv_s = tau_s.inverse();

    ODESystem sys;
    sys.d = 2;
    QMatrix a0(2, 2);
    a0.at(0, 0) = inv_m;
    a0.at(0, 1) = -inv_m;
    a0.at(1, 1) = inv_s;
    QMatrix b0(2, 2);
    b0.at(0, 0) = inv_s;
    b0.at(1, 1) = inv_s;
    sys.A = {a0, QMatrix::identity(2)};
    sys.B = {b0};
    sys.y0 = {v0 - v_rest, i0};
    sys.validate();
    return sys;
}

} // namespace odecert
