#pragma once

#include <algorithm>
#include <cstdint>
#include <random>

#include "neuroring/network.hpp"

namespace neuroring::testing
{

struct RandomNetworkShape
{
    std::uint32_t cores = 4;
    std::uint32_t capacity = 256;
    std::uint32_t max_fanout = 64;
    double min_rate_hz = 20.0;
    double max_rate_hz = 300.0;
    float min_weight = -300.0f;
    float max_weight = 500.0f;
};

inline LifParams random_params(std::mt19937_64& rng, double dt)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    LifParams p;
    p.tau_m = 5.0 + 25.0 * u(rng);
    p.tau_syn = 0.5 + 9.5 * u(rng);
    p.e_l = -65.0;
    p.v_th = -50.0;
    p.v_reset = -70.0 + 10.0 * u(rng);
    p.i_dc = 400.0 * u(rng);
    p.t_ref = 3.0 * u(rng);
    p.dt = dt;
    return LifParams::from_capacitance(100.0 + 200.0 * u(rng), p);
}

// Forward Euler of dV/dt = (-(V - E_L) + R (I + I_DC)) / tau_m, dI/dt = -I / tau_syn.
inline double euler_v(double v, double i, const LifParams& p, int substeps)
{
    const double h = p.dt / substeps;
    for (int k = 0; k < substeps; ++k)
    {
        const double dv = (-(v - p.e_l) + p.r_m * (i + p.i_dc)) / p.tau_m;
        const double di = -i / p.tau_syn;
        v += h * dv;
        i += h * di;
    }
    return v;
}

// LIF block, Poisson block, LIF block, filling cores * capacity neurons.
inline Network random_network(std::uint64_t seed, const RandomNetworkShape& shape = {})
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Network net;
    net.dt = 0.1;
    net.core_count = shape.cores;
    net.core_capacity = shape.capacity;
    net.neuron_count = shape.cores * shape.capacity;
    const auto n = net.neuron_count;

    const auto n_poisson = static_cast<std::uint32_t>(n / 8 + u(rng) * (n / 3 - n / 8));
    const auto n_lif_a = static_cast<std::uint32_t>(u(rng) * (n - n_poisson));
    const auto n_lif_b = n - n_poisson - n_lif_a;

    net.params.push_back(random_params(rng, net.dt));
    net.params.push_back(random_params(rng, net.dt));

    std::uint32_t first = 0;
    auto add_pop = [&](const char* name, std::uint32_t size, NeuronKind kind, std::uint32_t param) {
        if (size == 0)
            return;
        Population p;
        p.name = name;
        p.first = first;
        p.size = size;
        p.kind = kind;
        p.param_index = param;
        if (kind == NeuronKind::poisson)
            p.rate_hz = shape.min_rate_hz + u(rng) * (shape.max_rate_hz - shape.min_rate_hz);
        else
        {
            p.v_init_lo = -70.0;
            p.v_init_hi = -50.0;
        }
        net.populations.push_back(p);
        first += size;
    };
    add_pop("lif_a", n_lif_a, NeuronKind::lif, 0);
    add_pop("poisson", n_poisson, NeuronKind::poisson, 0);
    add_pop("lif_b", n_lif_b, NeuronKind::lif, 1);

    std::uniform_int_distribution<std::uint32_t> fanout(0, shape.max_fanout);
    std::uniform_int_distribution<std::uint32_t> dst(0, n - 1);
    std::uniform_int_distribution<std::uint32_t> delay(1, 64);
    std::uniform_real_distribution<float> weight(shape.min_weight, shape.max_weight);
    for (std::uint32_t src = 0; src < n; ++src)
    {
        const auto k = fanout(rng);
        for (std::uint32_t j = 0; j < k; ++j)
            net.edges.push_back({src, dst(rng), delay(rng), weight(rng)});
    }
    net.validate();
    return net;
}

// Neuron 0 (core 0) is driven by DC to fire periodically; neuron 1 (core 1)
// is silent unless neuron 0's strong synapse reaches it.
inline Network two_neuron_chain(float weight = 1.0e5f, std::uint32_t delay = 1)
{
    Network net;
    net.dt = 0.1;
    net.neuron_count = 2;
    net.core_count = 2;
    net.core_capacity = 1;
    LifParams a;
    a.e_l = -65.0;
    a.v_reset = -70.0;
    a.v_th = -50.0;
    a.tau_m = 20.0;
    a.tau_syn = 5.0;
    a = LifParams::from_capacitance(250.0, a);
    a.i_dc = 250.0; // V_inf = E_L + R I = -45 mV
    LifParams b = a;
    b.i_dc = 0.0;
    net.params = {a, b};
    Population pa{"driver", 0, 1, NeuronKind::lif, 0, 0.0, -65.0, -65.0};
    Population pb{"follower", 1, 1, NeuronKind::lif, 1, 0.0, -65.0, -65.0};
    net.populations = {pa, pb};
    net.edges = {{0, 1, delay, weight}};
    net.validate();
    return net;
}

} // namespace neuroring::testing
