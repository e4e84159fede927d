#pragma once

#include "odecert/ode.hpp"
#include "odecert/roots.hpp"
#include "odecert/signal.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>

namespace odecert {

// Blowup classification outcomes. TrivialNoBlowup carries the exact quotient
// Q with P_u = P_y * Q; Blowup carries a certified witness root of P_y outside
// the root multiset of P_u.
struct TrivialNoBlowup {
    Poly Q;
};

struct Blowup {
    ComplexBox witness;
    bool deficit_witness = false; // witness excluded by multiplicity, not separation
    std::optional<GaussianRational> pu_at_minus_a0; // Prop-3.2 value, first-order only
};

struct SystemBlowup {
    QMatrix criterion;       // sum_j (A1^-1 B_j)(-A1^-1 A0)^j, nonzero
    QMatrix literal_py_eval; // P_y(-A1^-1 A0) as literally stated (vanishes identically)
};

struct SystemNoBlowupCandidate {
    QMatrix criterion; // = 0
    QMatrix literal_py_eval;
};

struct CriterionNotApplicable {
    std::string reason;
};

struct Inconclusive {
    std::string reason;
};

using Verdict = std::variant<TrivialNoBlowup, Blowup, SystemBlowup, SystemNoBlowupCandidate,
                             CriterionNotApplicable, Inconclusive>;

// Scalar criterion: trivial iff P_y | P_u (exact division); the certified
// root-inclusion route is run alongside as a cross-check and must agree
// whenever it is conclusive.
Verdict classify_scalar(const LinearODE& ode);

// System criterion for order (1,n) under the invertibility and commutativity
// hypotheses. Throws unsupported_order for m != 1.
Verdict classify_system(const ODESystem& sys);

std::string verdict_summary(const Verdict& v);
int verdict_exit_code(const Verdict& v); // 0 trivial/candidate, 2 blowup, 3 n/a-inconclusive

// The synthesized solution y = Q(d/dt) u + homogeneous completion for the
// trivial case: evaluable to enclosures of y^(i)(t), with the homogeneous
// coefficients solved against the exponential basis from certified_roots(P_y)
// so the initial conditions match.
class TrivialSolution {
public:
    TrivialSolution(LinearODE ode, Poly q, Signal u);

    ComplexBox eval_deriv(int deriv, const Dyadic& t, long bits) const;
    ComplexBox eval(const Dyadic& t, long bits) const { return eval_deriv(0, t, bits); }
    const Poly& quotient() const { return q_; }

private:
    struct BasisTerm {
        ComplexBox sigma;
        int power; // t^power e^{sigma t}
        ComplexBox coeff;
    };
    struct Homogeneous {
        std::vector<BasisTerm> terms;
    };

    ComplexBox particular_deriv(int deriv, const Dyadic& t, long wb) const;
    const Homogeneous* homogeneous(long wb) const; // null: retry at higher precision

    LinearODE ode_;
    Poly q_;
    Signal u_;
    mutable std::mutex mu_;
    mutable std::map<long, std::optional<Homogeneous>> cache_;
};

TrivialSolution synthesize_trivial_solution(const LinearODE& ode, const Poly& q, const Signal& u);

} // namespace odecert
