#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "neuroring/network.hpp"
#include "neuroring/packet.hpp"
#include "neuroring/topology.hpp"

namespace neuroring
{

class InvalidEdge : public std::invalid_argument
{
  public:
    InvalidEdge(std::size_t index, const std::string& what)
        : std::invalid_argument("edge " + std::to_string(index) + ": " + what), index_(index)
    {
    }
    std::size_t index() const { return index_; }

  private:
    std::size_t index_;
};

// Flattened outgoing synapse lists: one contiguous run of encoded DATA packets
// per source neuron, ordered by ring distance of the destination core from the
// source core, then destination ID, then input order. Immutable after build.
class SynapseList
{
  public:
    SynapseList() = default;

    static SynapseList build(std::span<const SynapseEdge> edges, std::uint32_t neuron_count,
                             const TopologyConfig& topo);

    std::uint32_t neuron_count() const { return static_cast<std::uint32_t>(offsets_.empty() ? 0 : offsets_.size() - 1); }
    std::size_t edge_count() const { return words_.size(); }

    // Encoded packets of one source; edge indices are first_edge(src) + position.
    std::span<const std::uint64_t> list(std::uint32_t src) const
    {
        check(src);
        return {words_.data() + offsets_[src], offsets_[src + 1] - offsets_[src]};
    }
    std::size_t first_edge(std::uint32_t src) const
    {
        check(src);
        return offsets_[src];
    }
    std::uint32_t fanout(std::uint32_t src) const
    {
        check(src);
        return static_cast<std::uint32_t>(offsets_[src + 1] - offsets_[src]);
    }

    // DATA packets of `src` in emission order followed by one LOCAL_SYNC
    // carrying the source's core ID.
    std::vector<SynapsePacket> fetch(std::uint32_t src) const;

    const TopologyConfig& topology() const { return topo_; }
    std::span<const std::uint64_t> words() const { return words_; }
    std::span<const std::size_t> offsets() const { return offsets_; }

  private:
    void check(std::uint32_t src) const
    {
        if (src >= neuron_count())
            throw std::out_of_range("unknown source neuron " + std::to_string(src));
    }

    TopologyConfig topo_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint64_t> words_;
};

} // namespace neuroring
