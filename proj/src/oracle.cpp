#include "neuroring/oracle.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <vector>

#include "neuroring/lif.hpp"
#include "neuroring/simulator.hpp"
#include "neuroring/synapse_store.hpp"

namespace neuroring
{

namespace
{

struct Pending
{
    std::uint32_t dst;
    std::uint32_t src;
    std::uint32_t edge;
    float weight;
};

} // namespace

SpikeRecording oracle_run(const Network& net, double t_bio_ms, std::uint64_t seed, const TopologyConfig& topo_in)
{
    net.validate();
    TopologyConfig topo = topo_in;
    topo.dt = net.dt;
    const auto store = SynapseList::build(net.edges, net.neuron_count, topo);
    const auto steps = steps_for(t_bio_ms, net.dt);
    const auto n = net.neuron_count;

    std::vector<std::uint32_t> pop_of(n);
    std::vector<Propagators> props(net.populations.size());
    std::vector<double> spike_p(net.populations.size(), 0.0);
    std::vector<NeuronState> state(n);
    for (std::size_t p = 0; p < net.populations.size(); ++p)
    {
        const auto& pop = net.populations[p];
        if (pop.kind == NeuronKind::lif)
        {
            auto params = net.params[pop.param_index];
            params.dt = net.dt;
            props[p] = Propagators::from(params);
        }
        else
        {
            spike_p[p] = spike_probability(pop.rate_hz, net.dt);
        }
        for (auto id = pop.first; id < pop.end(); ++id)
        {
            pop_of[id] = static_cast<std::uint32_t>(p);
            if (pop.kind == NeuronKind::lif)
                state[id].v = pop.v_init_lo == pop.v_init_hi ? pop.v_init_lo
                                                             : init_membrane(seed, id, pop.v_init_lo, pop.v_init_hi);
        }
    }

    std::array<std::vector<Pending>, 64> delay_matrix;
    std::vector<double> input(n, 0.0);
    std::vector<std::uint32_t> spikes;

    SpikeRecording rec;
    rec.seed = seed;
    rec.config_hash = net.content_hash();
    rec.neuron_count = n;
    rec.dt = net.dt;
    rec.total_steps = steps;

    for (std::uint64_t t = 0; t < steps; ++t)
    {
        auto& due = delay_matrix[t % 64];
        std::sort(due.begin(), due.end(), [](const Pending& a, const Pending& b) {
            return std::tie(a.dst, a.src, a.edge) < std::tie(b.dst, b.src, b.edge);
        });
        std::fill(input.begin(), input.end(), 0.0);
        for (const auto& c : due)
            input[c.dst] += static_cast<double>(c.weight);
        due.clear();

        spikes.clear();
        for (std::uint32_t i = 0; i < n; ++i)
        {
            const auto p = pop_of[i];
            bool fired;
            if (net.populations[p].kind == NeuronKind::lif)
            {
                const auto r = lif_step(state[i], props[p], input[i], i);
                state[i] = r.state;
                fired = r.spiked;
            }
            else
            {
                fired = poisson_fires(spike_p[p], seed, i, t);
            }
            if (fired)
            {
                spikes.push_back(i);
                rec.events.push_back({static_cast<std::uint32_t>(t), i});
            }
        }

        for (auto src : spikes)
        {
            const auto list = store.list(src);
            const auto base = store.first_edge(src);
            for (std::size_t k = 0; k < list.size(); ++k)
            {
                const auto w = list[k];
                const auto delay = word::delay(w);
                delay_matrix[(t + delay) % 64].push_back(
                    {word::dst(w), src, static_cast<std::uint32_t>(base + k), word::weight(w)});
            }
        }
    }
    return rec;
}

SpikeRecording oracle_run(const Network& net, double t_bio_ms, std::uint64_t seed)
{
    return oracle_run(net, t_bio_ms, seed, net.default_topology());
}

} // namespace neuroring
