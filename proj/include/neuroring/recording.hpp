#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace neuroring
{

struct SpikeEvent
{
    std::uint32_t step = 0;
    std::uint32_t neuron = 0;

    friend bool operator==(const SpikeEvent&, const SpikeEvent&) = default;
    friend auto operator<=>(const SpikeEvent&, const SpikeEvent&) = default;
};

struct SpikeRecording
{
    std::vector<SpikeEvent> events; // ordered by (step, neuron)
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::uint64_t total_steps = 0;
    std::uint32_t neuron_count = 0;
    double dt = 0.1;

    double duration_ms() const { return static_cast<double>(total_steps) * dt; }
    // Throws std::logic_error unless events are nondecreasing in step and reference valid neurons.
    void check_invariants() const;

    friend bool operator==(const SpikeRecording&, const SpikeRecording&) = default;
};

struct RunMetrics
{
    std::uint64_t timesteps = 0;
    std::uint64_t total_spikes = 0;
    std::uint64_t synaptic_events = 0;   // accumulator deliveries
    std::uint64_t expected_events = 0;   // sum over spikes of the source's fanout
    std::uint64_t ring_hops = 0;         // DATA packet edge traversals
    std::uint64_t token_hops = 0;        // sync-token edge traversals
    std::uint64_t local_deliveries = 0;  // DATA consumed on the emitting core
    std::uint64_t inter_device_crossings = 0;
    std::uint64_t stalls = 0;            // arbitration or backpressure losses
    std::uint64_t router_micro_steps = 0;
    std::uint64_t max_queue_occupancy = 0;
    std::uint32_t max_packet_hops = 0;
    std::uint32_t max_step_skew = 0;     // largest observed spread of per-core step counters
    std::vector<std::uint64_t> right_edge_traffic; // DATA on edge core c -> c+1
    std::vector<std::uint64_t> left_edge_traffic;  // DATA on edge core c -> c-1

    std::map<std::string, std::string> as_key_values() const;
};

struct RunMetadata
{
    std::string mode;
    std::uint32_t cores = 0;
    std::uint32_t capacity = 0;
    std::uint32_t workers = 0;
    bool canonical = true;
    std::string network_path;
    double t_bio_ms = 0.0;
    std::string kernel_isa;
};

// Text format: one "step<TAB>neuron" line per spike.
void write_spikes_text(const SpikeRecording& rec, const std::filesystem::path& path);
// Binary format: consecutive little-endian u32 (step, neuron) pairs.
void write_spikes_binary(const SpikeRecording& rec, const std::filesystem::path& path);
// "key=value" lines: recording metadata, run configuration and metrics.
void write_sidecar(const SpikeRecording& rec, const RunMetadata& meta, const RunMetrics* metrics,
                   const std::filesystem::path& path);

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);
void write_key_values(const std::map<std::string, std::string>& kv, const std::filesystem::path& path);

// Reads the text spike file and restores metadata from its sidecar.
SpikeRecording read_recording(const std::filesystem::path& spikes, const std::filesystem::path& sidecar);
std::vector<SpikeEvent> read_spikes_binary(const std::filesystem::path& path);

} // namespace neuroring
