#pragma once

#include "odecert/ode.hpp"
#include "odecert/signal.hpp"

#include <string>
#include <vector>

namespace odecert {

struct LifParams {
    GaussianRational tau_m, tau_s, v_rest, theta, v0, i0;
};

// A parsed problem file: exactly one of [ode], [system], [lif], plus the
// input signal(s) from [signal].
struct LoadedSpec {
    enum class Kind { Scalar, System, Lif };
    Kind kind = Kind::Scalar;
    LinearODE ode;                // Scalar (already normalized)
    ODESystem sys;                // System
    LifParams lif;                // Lif
    std::vector<Signal> signals;  // Scalar/Lif: one entry; System: d entries
};

// Parses "p/q", "-3", "p/q+r/s i", "2-1/3 i", "i", ...
GaussianRational parse_gaussian_rational(const std::string& text);

LoadedSpec load_spec_text(const std::string& text);
LoadedSpec load_spec(const std::string& path);

} // namespace odecert
