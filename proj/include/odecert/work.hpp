#pragma once

#include <cstdint>

namespace odecert {

// Work accounting for the precision/complexity profiler. Interval operations
// are the primary unit; wall time is recorded but never used for decisions.
struct WorkCounters {
    std::uint64_t arith_ops = 0;
    std::uint64_t quadrature_nodes = 0;
    std::uint64_t exp_evals = 0;
    std::uint64_t elapsed_ns = 0;

    WorkCounters& operator+=(const WorkCounters& o) {
        arith_ops += o.arith_ops;
        quadrature_nodes += o.quadrature_nodes;
        exp_evals += o.exp_evals;
        elapsed_ns += o.elapsed_ns;
        return *this;
    }
};

namespace work {

// Meter attachment is thread-local: each solver run attaches its own counter
// block, so concurrent solves never share mutable state.
WorkCounters* active();
void attach(WorkCounters* counters);

inline void count_arith(std::uint64_t k = 1) {
    if (WorkCounters* w = active()) w->arith_ops += k;
}
inline void count_node(std::uint64_t k = 1) {
    if (WorkCounters* w = active()) w->quadrature_nodes += k;
}
inline void count_exp(std::uint64_t k = 1) {
    if (WorkCounters* w = active()) w->exp_evals += k;
}

// RAII scope: attaches `counters`, restores the previous meter on exit.
class MeterScope {
public:
    explicit MeterScope(WorkCounters& counters) : prev_(active()) { attach(&counters); }
    ~MeterScope() { attach(prev_); }
    MeterScope(const MeterScope&) = delete;
    MeterScope& operator=(const MeterScope&) = delete;

private:
    WorkCounters* prev_;
};

} // namespace work
} // namespace odecert
