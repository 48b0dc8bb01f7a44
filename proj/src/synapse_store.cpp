#include "neuroring/synapse_store.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace neuroring
{

SynapseList SynapseList::build(std::span<const SynapseEdge> edges, std::uint32_t neuron_count,
                               const TopologyConfig& topo)
{
    topo.validate();
    if (topo.neuron_slots() < neuron_count)
        throw std::invalid_argument("topology holds " + std::to_string(topo.neuron_slots()) + " neurons, network has " +
                                    std::to_string(neuron_count));

    for (std::size_t i = 0; i < edges.size(); ++i)
    {
        const auto& e = edges[i];
        if (e.delay < min_delay_steps || e.delay > max_delay_steps)
            throw InvalidEdge(i, "delay " + std::to_string(e.delay) + " outside [1, 64] timesteps");
        if (e.src >= neuron_count)
            throw InvalidEdge(i, "source " + std::to_string(e.src) + " outside the network");
        if (e.dst >= neuron_count)
            throw InvalidEdge(i, "destination " + std::to_string(e.dst) + " outside the network");
    }

    SynapseList store;
    store.topo_ = topo;
    store.offsets_.assign(std::size_t{neuron_count} + 1, 0);
    for (const auto& e : edges)
        ++store.offsets_[e.src + 1];
    std::partial_sum(store.offsets_.begin(), store.offsets_.end(), store.offsets_.begin());

    // Stable bucket by source, so input order survives as the last tie-breaker.
    std::vector<std::uint32_t> order(edges.size());
    {
        std::vector<std::size_t> cursor(store.offsets_.begin(), store.offsets_.end() - 1);
        for (std::size_t i = 0; i < edges.size(); ++i)
            order[cursor[edges[i].src]++] = static_cast<std::uint32_t>(i);
    }

    for (std::uint32_t src = 0; src < neuron_count; ++src)
    {
        const auto src_core = topo.core_of(src);
        auto key = [&](std::uint32_t i) {
            const auto& e = edges[i];
            return std::make_tuple(ring_distance(src_core, topo.core_of(e.dst), topo.n_cores).shortest(), e.dst);
        };
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(store.offsets_[src]),
                         order.begin() + static_cast<std::ptrdiff_t>(store.offsets_[src + 1]),
                         [&](std::uint32_t a, std::uint32_t b) { return key(a) < key(b); });
    }

    store.words_.resize(edges.size());
    for (std::size_t k = 0; k < order.size(); ++k)
    {
        const auto& e = edges[order[k]];
        store.words_[k] = encode(SynapsePacket::data(e.weight, e.dst, e.delay));
    }
    return store;
}

std::vector<SynapsePacket> SynapseList::fetch(std::uint32_t src) const
{
    const auto words = list(src);
    std::vector<SynapsePacket> out;
    out.reserve(words.size() + 1);
    for (auto w : words)
        out.push_back(decode(w));
    out.push_back(SynapsePacket::local_sync(topo_.core_of(src)));
    return out;
}

} // namespace neuroring
