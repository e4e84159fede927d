#pragma once

#include "odecert/solver.hpp"

#include <string>
#include <vector>

namespace odecert {

// One work-vs-precision measurement. Counters come from the solver work
// meters; elapsed_ns is informational only and excluded from the determinism
// contract.
struct ProfileRow {
    long n = 0;
    std::uint64_t arith_ops = 0;
    std::uint64_t quadrature_nodes = 0;
    std::uint64_t exp_evals = 0;
    std::uint64_t elapsed_ns = 0;
    std::string backend;
    std::string status = "ok"; // or the error code of a failed solve
};

struct ProfileProblem {
    LinearODE ode;
    Signal u = Signal::zero();
    Dyadic t = Dyadic(1);
};

// One row per requested bit level; solver errors are recorded in the row
// status instead of aborting the sweep.
std::vector<ProfileRow> run_profile(const ProfileProblem& problem,
                                    const std::vector<long>& bit_levels, Backend backend);

struct FitReport {
    double poly_degree = 0;    // slope of log2(work) against log2(n)
    double poly_residual = 0;  // rms residual of that fit
    double exp_base = 1;       // 2^slope of log2(work) against n
    double exp_residual = 0;
    enum class Class { Polynomial, Exponential, Ambiguous } classification = Class::Ambiguous;
};

const char* to_string(FitReport::Class c);

// Least-squares fits of log2(arith_ops); classification picks the smaller
// residual with a 10% margin. A fitted base within 2% of 1 counts as
// non-growth and classifies as polynomial. Throws insufficient_rows below 4
// usable rows.
FitReport fit_scaling(const std::vector<ProfileRow>& rows);

// CSV schema: n,arith_ops,quadrature_nodes,exp_evals,elapsed_ns,backend,status
std::string profile_csv(const std::vector<ProfileRow>& rows);

} // namespace odecert
