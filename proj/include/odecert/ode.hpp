#pragma once

#include "odecert/matpoly.hpp"
#include "odecert/matrix.hpp"
#include "odecert/poly.hpp"

#include <utility>
#include <vector>

namespace odecert {

// Scalar linear ODE  sum_{i<=m} a_i y^(i) = sum_{k<=n} b_k u^(k)  on [0,1]
// with exact coefficients and initial values y^(i)(0), i = 0..m-1.
struct LinearODE {
    std::vector<GaussianRational> a; // a[0..m], a[m] != 0
    std::vector<GaussianRational> b; // b[0..n], b[n] != 0
    std::vector<GaussianRational> y0; // size m

    int m() const { return static_cast<int>(a.size()) - 1; }
    int n() const { return static_cast<int>(b.size()) - 1; }

    void validate() const;
    bool is_normalized() const { return !a.empty() && a.back().is_one(); }
    LinearODE normalize() const;
};

std::pair<Poly, Poly> char_polys(const LinearODE& ode);

// d-system  sum_i A_i y^(i) = sum_j B_j u^(j). A.size() = m+1; only m = 1 is
// analyzable/solvable, but higher orders load from files so the analyzer can
// reject them explicitly.
struct ODESystem {
    int d = 0;
    std::vector<QMatrix> A; // A[0..m]
    std::vector<QMatrix> B; // B[0..n]
    std::vector<GaussianRational> y0; // size d (for m = 1)

    int m() const { return static_cast<int>(A.size()) - 1; }
    int n() const { return static_cast<int>(B.size()) - 1; }

    void validate() const;
};

std::pair<MatPoly, MatPoly> char_polys(const ODESystem& sys);

// LIF neuron as a 2-system in the shifted state (V - V_rest, I):
//   A1 = I,  A0 = [[1/tau_m, -1/tau_m], [0, 1/tau_s]],
//   B0 = [[1/tau_s, 0], [0, 1/tau_s]],  u = (0, I_e).
// B0's (1,1) entry multiplies the identically-zero first input component; the
// matrix is kept exactly as printed in the source model. y0 = (V0 - V_rest, I0).
ODESystem build_lif(const GaussianRational& tau_m, const GaussianRational& tau_s,
                    const GaussianRational& v_rest, const GaussianRational& v0,
                    const GaussianRational& i0);

} // namespace odecert
