#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "neuroring/accumulator.hpp"
#include "neuroring/fifo.hpp"
#include "neuroring/packet.hpp"
#include "neuroring/topology.hpp"

namespace neuroring
{

// One stream word plus a simulator-side tag. The tag is never part of the
// wire format; it only orders canonical accumulation and hop accounting.
struct Flit
{
    std::uint64_t word = 0;
    EdgeTag tag;
};

using Link = SpscFifo<Flit>;

class ProtocolFault : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Links seen from one core. Rightward traffic enters from the left neighbour
// and leaves on the right edge; leftward traffic the other way round.
struct RouterPorts
{
    Link* in_from_left = nullptr;
    Link* in_from_right = nullptr;
    Link* out_right = nullptr;
    Link* out_left = nullptr;
    Link* local_in = nullptr; // from this core's fetch stage
};

struct RouterCounters
{
    std::uint64_t deliveries = 0;
    std::uint64_t local_deliveries = 0;
    std::uint64_t hops = 0;
    std::uint64_t token_hops = 0;
    std::uint64_t right_traffic = 0;
    std::uint64_t left_traffic = 0;
    std::uint64_t device_crossings = 0;
    std::uint64_t stalls = 0;
    std::uint64_t micro_steps = 0;
    std::uint32_t max_hops = 0;
};

struct RouterStepReport
{
    bool progress = false;
    bool local_sync_acked = false; // the fetch stage's current list has fully left local_in
    std::uint32_t tokens_returned = 0;
};

class RouterState
{
  public:
    // Packets from the fetch stage handled per micro-step (one 256-bit burst).
    static constexpr int local_burst = 4;

    RouterState(std::uint32_t core, const TopologyConfig& topo, RouterPorts ports);

    std::uint32_t core() const { return core_; }
    const RouterPorts& ports() const { return ports_; }
    const RouterCounters& counters() const { return counters_; }

    // Set by the fetch stage once every spike's list and LOCAL_SYNC has been
    // emitted; the router then injects this core's GLOBAL_SYNC tokens.
    void mark_fetch_done() { fetch_done_ = true; }
    bool fetch_done() const { return fetch_done_; }

    // True once this core has seen every origin's token on both streams.
    bool barrier_complete() const;
    bool tokens_home() const { return right_home_ && left_home_; }
    std::uint32_t origins_seen_right() const { return seen_right_count_; }
    std::uint32_t origins_seen_left() const { return seen_left_count_; }

    // Clears per-timestep protocol state; all links must already be drained.
    void reset_for_next_step();

    std::string diagnostics() const;

  private:
    friend RouterStepReport router_step(RouterState& rs, DelayAccumulator& acc, std::uint64_t step);

    std::uint32_t core_;
    std::uint32_t n_cores_;
    std::uint32_t capacity_;
    std::uint32_t right_edge_;
    std::uint32_t left_edge_;
    bool right_edge_crosses_;
    bool left_edge_crosses_;
    std::uint32_t max_hops_allowed_;
    RouterPorts ports_;
    RouterCounters counters_;

    bool fetch_done_ = false;
    bool right_token_sent_ = false;
    bool left_token_sent_ = false;
    bool right_home_ = false;
    bool left_home_ = false;
    std::vector<std::uint8_t> seen_right_;
    std::vector<std::uint8_t> seen_left_;
    std::uint32_t seen_right_count_ = 0;
    std::uint32_t seen_left_count_ = 0;
};

// One arbitration round. Per outbound edge at most one packet moves, and the
// neighbour's inbound stream is served before this core's fetch stage. DATA
// for this core goes to the accumulator at `step`; everything else is
// forwarded unchanged in its direction of travel. A full outbound edge stalls
// the stream. Injections from this core additionally need two free slots on
// the edge, so transit traffic can always advance.
RouterStepReport router_step(RouterState& rs, DelayAccumulator& acc, std::uint64_t step);

} // namespace neuroring
