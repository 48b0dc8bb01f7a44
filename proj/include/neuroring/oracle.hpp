#pragma once

#include <cstdint>

#include "neuroring/network.hpp"
#include "neuroring/recording.hpp"
#include "neuroring/topology.hpp"

namespace neuroring
{

// Sequential reference simulator: no ring, no packets. Every step it releases
// a delay slot (contributions summed per neuron in (source, edge) order),
// applies lif_step / Poisson draws neuron by neuron, then schedules each
// spike's synapses into the slot (t + delay) mod 64. The topology only fixes
// the synapse-list order, which defines edge indices.
SpikeRecording oracle_run(const Network& net, double t_bio_ms, std::uint64_t seed, const TopologyConfig& topo);
SpikeRecording oracle_run(const Network& net, double t_bio_ms, std::uint64_t seed);

} // namespace neuroring
