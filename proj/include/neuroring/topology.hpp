#pragma once

#include <cstdint>
#include <set>

namespace neuroring
{

// Core c's right neighbour is (c + 1) mod n_cores, its left neighbour (c - 1) mod n_cores.
struct TopologyConfig
{
    std::uint32_t n_cores = 1;
    std::uint32_t core_capacity = 1;
    // Ring edge i joins core i and core (i + 1) mod n_cores; listed edges cross a device boundary.
    std::set<std::uint32_t> device_boundaries;
    double dt = 0.1;

    void validate() const;
    std::uint64_t neuron_slots() const { return std::uint64_t{n_cores} * core_capacity; }
    std::uint32_t core_of(std::uint32_t neuron) const { return neuron / core_capacity; }
    std::uint32_t first_neuron(std::uint32_t core) const { return core * core_capacity; }
    bool crosses_device(std::uint32_t edge) const { return device_boundaries.count(edge) != 0; }
};

struct RingDistance
{
    std::uint32_t left = 0;
    std::uint32_t right = 0;

    std::uint32_t shortest() const { return left < right ? left : right; }
    friend bool operator==(const RingDistance&, const RingDistance&) = default;
};

inline RingDistance ring_distance(std::uint32_t src_core, std::uint32_t dst_core, std::uint32_t n_cores)
{
    return {(src_core + n_cores - dst_core) % n_cores, (dst_core + n_cores - src_core) % n_cores};
}

enum class Direction : std::uint8_t
{
    local,
    left,
    right,
};

// Shorter way round; equidistant destinations go right.
inline Direction route_direction(std::uint32_t src_core, std::uint32_t dst_core, std::uint32_t n_cores)
{
    if (src_core == dst_core)
        return Direction::local;
    const auto d = ring_distance(src_core, dst_core, n_cores);
    return d.left < d.right ? Direction::left : Direction::right;
}

} // namespace neuroring
