#include "odecert/profiler.hpp"

#include "odecert/errors.hpp"

#include <cmath>
#include <sstream>

namespace odecert {

std::vector<ProfileRow> run_profile(const ProfileProblem& problem,
                                    const std::vector<long>& bit_levels, Backend backend) {
    if (bit_levels.empty()) throw validation_error("bit range must be nonempty");
    for (std::size_t i = 1; i < bit_levels.size(); ++i)
        if (bit_levels[i] <= bit_levels[i - 1])
            throw validation_error("bit range must be strictly ascending");

    std::vector<ProfileRow> rows;
    rows.reserve(bit_levels.size());
    for (long n : bit_levels) {
        ProfileRow row;
        row.n = n;
        SolveOptions opts;
        opts.backend = backend;
        try {
            SolutionResult r = solve_cascade(problem.ode, problem.u, {problem.t, n}, opts);
            row.arith_ops = r.work.arith_ops;
            row.quadrature_nodes = r.work.quadrature_nodes;
            row.exp_evals = r.work.exp_evals;
            row.elapsed_ns = r.work.elapsed_ns;
            row.backend = r.backend;
        } catch (const error& e) {
            row.status = e.code();
            row.backend = backend == Backend::Quadrature ? "quadrature"
                          : backend == Backend::ClosedForm ? "closed-form"
                                                           : "auto";
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

struct LineFit {
    double slope = 0, intercept = 0, rms = 0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    double denom = n * sxx - sx * sx;
    f.slope = denom != 0 ? (n * sxy - sx * sy) / denom : 0;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double e = y[i] - (f.slope * x[i] + f.intercept);
        ss += e * e;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

} // namespace

const char* to_string(FitReport::Class c) {
    switch (c) {
        case FitReport::Class::Polynomial: return "polynomial-consistent";
        case FitReport::Class::Exponential: return "exponential-consistent";
        case FitReport::Class::Ambiguous: return "ambiguous";
    }
    return "?";
}

FitReport fit_scaling(const std::vector<ProfileRow>& rows) {
    std::vector<double> logn, n_lin, logw;
    for (const auto& r : rows) {
        if (r.status != "ok" || r.arith_ops == 0 || r.n <= 0) continue;
        logn.push_back(std::log2(static_cast<double>(r.n)));
        n_lin.push_back(static_cast<double>(r.n));
        logw.push_back(std::log2(static_cast<double>(r.arith_ops)));
    }
    if (logn.size() < 4) throw insufficient_rows();

    LineFit poly = least_squares(logn, logw);
    LineFit expo = least_squares(n_lin, logw);

    FitReport rep;
    rep.poly_degree = poly.slope;
    rep.poly_residual = poly.rms;
    rep.exp_base = std::exp2(expo.slope);
    rep.exp_residual = expo.rms;

    if (rep.exp_base <= 1.02) {
        rep.classification = FitReport::Class::Polynomial;
    } else if (poly.rms <= 0.9 * expo.rms) {
        rep.classification = FitReport::Class::Polynomial;
    } else if (expo.rms <= 0.9 * poly.rms) {
        rep.classification = FitReport::Class::Exponential;
    } else {
        rep.classification = FitReport::Class::Ambiguous;
    }
    return rep;
}

std::string profile_csv(const std::vector<ProfileRow>& rows) {
    std::ostringstream out;
    out << "n,arith_ops,quadrature_nodes,exp_evals,elapsed_ns,backend,status\n";
    for (const auto& r : rows)
        out << r.n << ',' << r.arith_ops << ',' << r.quadrature_nodes << ',' << r.exp_evals << ','
            << r.elapsed_ns << ',' << r.backend << ',' << r.status << '\n';
    return out.str();
}

} // namespace odecert
