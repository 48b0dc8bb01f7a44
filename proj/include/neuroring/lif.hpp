#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "neuroring/rng.hpp"

namespace neuroring
{

// Current-based LIF with exponentially decaying synaptic current.
// Units: ms, mV, pA, pF. Membrane resistance is kept as tau_m / C_m, i.e. in
// GOhm, so that r_m * I[pA] is directly in mV.
struct LifParams
{
    double tau_m = 20.0;
    double tau_syn = 5.0;
    double e_l = -65.0;
    double v_th = -50.0;
    double v_reset = -70.0;
    double r_m = 20.0 / 250.0;
    double i_dc = 0.0;
    double t_ref = 2.0;
    double dt = 0.1;

    static LifParams from_capacitance(double c_m, LifParams p)
    {
        p.r_m = p.tau_m / c_m;
        return p;
    }

    // Throws std::invalid_argument naming the first violated constraint.
    void validate() const;

    friend bool operator==(const LifParams&, const LifParams&) = default;
};

struct NeuronState
{
    double v = 0.0;
    double i_syn = 0.0;
    std::int32_t ref_count = 0;

    friend bool operator==(const NeuronState&, const NeuronState&) = default;
};

// Exact-integration propagators for one parameter set, precomputed once per
// population and shared by the scalar and vector kernels.
struct Propagators
{
    double alpha = 0.0;   // exp(-dt/tau_m)
    double beta = 0.0;    // exp(-dt/tau_syn)
    double p21 = 0.0;     // I_syn -> V coupling over one step
    double drive = 0.0;   // (E_L + R I_DC)(1 - alpha)
    double v_th = 0.0;
    double v_reset = 0.0;
    std::int32_t ref_steps = 0;

    static Propagators from(const LifParams& p);
};

class NonFiniteState : public std::runtime_error
{
  public:
    NonFiniteState(std::size_t neuron, const std::string& what)
        : std::runtime_error(what + " (neuron " + std::to_string(neuron) + ")"), neuron_(neuron)
    {
    }
    std::size_t neuron() const { return neuron_; }

  private:
    std::size_t neuron_;
};

struct LifStepResult
{
    NeuronState state;
    bool spiked = false;
};

// One timestep: propagate V with the old I_syn, decay I_syn and add this step's
// released input, then apply refractory clamp or threshold/reset (V > V_th).
// `neuron` is only used to label a NonFiniteState fault.
LifStepResult lif_step(const NeuronState& s, const Propagators& prop, double w_in, std::size_t neuron = 0);
LifStepResult lif_step(const NeuronState& s, const LifParams& p, double w_in, std::size_t neuron = 0);

inline double spike_probability(double rate_hz, double dt_ms)
{
    return rate_hz <= 0.0 ? 0.0 : 1.0 - std::exp(-rate_hz * dt_ms / 1000.0);
}

// Poisson generator addressed by (seed, neuron); `step` is the counter, so the
// stream is independent of the order in which generators are evaluated.
struct PoissonSource
{
    double rate_hz = 0.0;
    std::uint64_t seed = 0;
    std::uint32_t neuron = 0;
    std::uint64_t step = 0;
};

inline bool poisson_fires(double p, std::uint64_t seed, std::uint32_t neuron, std::uint64_t step)
{
    return p > 0.0 && uniform_at(seed, Stream::poisson, neuron, step) < p;
}

bool poisson_step(PoissonSource& src, double dt_ms);

// Uniform initial membrane potential in [lo, hi).
double init_membrane(std::uint64_t seed, std::uint32_t neuron, double lo, double hi);

} // namespace neuroring
