#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "neuroring/network.hpp"
#include "neuroring/recording.hpp"
#include "neuroring/router.hpp"
#include "neuroring/synapse_store.hpp"
#include "neuroring/topology.hpp"

namespace neuroring
{

enum class ExecMode
{
    deterministic, // single-threaded fixed round-robin; the reference semantics
    concurrent,    // one worker thread per group of cores, bounded channels between them
};

struct SimOptions
{
    TopologyConfig topology;
    ExecMode mode = ExecMode::deterministic;
    std::uint32_t workers = 1;
    bool canonical = true;
    std::uint64_t seed = 1;
    std::uint32_t queue_capacity = 1024;
    std::uint64_t barrier_budget = 10'000'000; // router micro-steps per timestep
};

class DeadlockFault : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class InvariantViolation : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

struct SimulationResult
{
    SpikeRecording recording;
    RunMetrics metrics;
};

struct CoreRuntime;

// Transaction-level model of the ring: every core releases its delay slot,
// updates its neurons, streams the synapse lists of its spiking neurons into
// the ring and then joins the sync-token barrier.
// The network must outlive the simulator.
class RingSimulator
{
  public:
    RingSimulator(const Network& net, SimOptions opts);
    ~RingSimulator();

    RingSimulator(const RingSimulator&) = delete;
    RingSimulator& operator=(const RingSimulator&) = delete;

    // Executes `steps` timesteps. Faults (deadlock, non-finite state,
    // protocol violations) propagate as exceptions.
    void advance(std::uint64_t steps);
    void step() { advance(1); }

    std::uint64_t current_step() const { return step_; }
    const SpikeRecording& recording() const { return recording_; }
    RunMetrics metrics() const;
    const SynapseList& store() const { return store_; }
    const SimOptions& options() const { return opts_; }

    // Membrane potential of a LIF neuron (Poisson neurons report 0).
    double membrane(std::uint32_t neuron) const;

  private:
    void run_deterministic(std::uint64_t steps);
    void run_concurrent(std::uint64_t steps);
    void finish_step();
    void sample_skew();
    std::string diagnostics() const;

    const Network& net_;
    SimOptions opts_;
    SynapseList store_;
    std::vector<std::unique_ptr<CoreRuntime>> cores_;
    std::vector<std::unique_ptr<Link>> links_;
    SpikeRecording recording_;
    std::uint64_t step_ = 0;
    std::uint64_t spikes_ = 0;
    std::uint64_t expected_events_ = 0;
    std::atomic<std::uint32_t> max_skew_{0};
};

// Convenience wrapper: constructs a simulator, runs T_bio / dt steps.
SimulationResult run_ring(const Network& net, double t_bio_ms, const SimOptions& opts);

std::uint64_t steps_for(double t_bio_ms, double dt);

} // namespace neuroring
