#pragma once

#include "odecert/signal.hpp"
#include "odecert/solver.hpp"
#include "odecert/spec_file.hpp"

#include <vector>

namespace odecert {

// Leaky integrate-and-fire neuron: state (V, I), threshold theta, external
// drive I_e. Time constants must be positive and theta > V_rest.
struct LIFConfig {
    GaussianRational tau_m, tau_s, v_rest, theta, v0, i0;
    Signal input = Signal::zero(); // I_e

    static LIFConfig from_params(const LifParams& p, Signal ie);
    void validate() const;
};

struct SpikeReport {
    enum class Status { Crossed, NoCrossing, Indeterminate };
    Status status = Status::NoCrossing;
    RealInterval t_box;                   // Crossed: certified crossing-time interval
    std::vector<RealInterval> candidates; // Indeterminate: unresolved time segments
};

const char* to_string(SpikeReport::Status s);

// Enclosures of (V(t), I(t)) with width <= 2^-bits; V includes the V_rest
// shift-back.
std::pair<ComplexBox, ComplexBox> simulate_lif(const LIFConfig& cfg, const Dyadic& t, long bits);

// First threshold crossing on [0,1]: a certified bracket [l, r] with V < theta
// certifiable on [0, l] and V(r) >= theta certifiable, refined to width
// <= 2^-bits. NoCrossing requires a certified covering of [0,1] below theta;
// grazing contact yields Indeterminate after the refinement cap.
SpikeReport first_spike(const LIFConfig& cfg, long bits);

// Repeated crossing detection with instantaneous reset V <- V_rest and
// continuous I restarted from the enclosure midpoint; the dropped enclosure
// width accumulates in an error budget. This reset mechanism is an
// engineering extension beyond the threshold-free dynamics model.
std::vector<SpikeReport> spike_train(const LIFConfig& cfg, long bits);

} // namespace odecert
