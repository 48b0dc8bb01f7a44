#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "neuroring/lif.hpp"
#include "neuroring/topology.hpp"

namespace neuroring
{

enum class NeuronKind : std::uint8_t
{
    lif = 0,
    poisson = 1,
};

// A contiguous block of neurons sharing one model. Populations tile
// [0, neuron_count) in order.
struct Population
{
    std::string name;
    std::uint32_t first = 0;
    std::uint32_t size = 0;
    NeuronKind kind = NeuronKind::lif;
    std::uint32_t param_index = 0; // into Network::params, LIF only
    double rate_hz = 0.0;          // Poisson only
    double v_init_lo = -65.0;      // initial V ~ U[lo, hi); lo == hi means constant
    double v_init_hi = -65.0;

    std::uint32_t end() const { return first + size; }
    bool contains(std::uint32_t neuron) const { return neuron >= first && neuron < end(); }
};

struct SynapseEdge
{
    std::uint32_t src = 0;
    std::uint32_t dst = 0;
    std::uint32_t delay = 1; // timesteps
    float weight = 0.0f;     // pA

    friend bool operator==(const SynapseEdge&, const SynapseEdge&) = default;
};

inline constexpr std::uint32_t min_delay_steps = 1;
inline constexpr std::uint32_t max_delay_steps = 64;

struct Network
{
    std::uint32_t neuron_count = 0;
    std::uint32_t core_capacity = 1;
    std::uint32_t core_count = 1;
    double dt = 0.1;
    std::vector<LifParams> params;
    std::vector<Population> populations;
    std::vector<SynapseEdge> edges;

    // Throws std::invalid_argument on any structural inconsistency.
    void validate() const;

    const Population& population_of(std::uint32_t neuron) const;
    const Population* find_population(const std::string& name) const;
    TopologyConfig default_topology() const;
    // Out-degree per neuron.
    std::vector<std::uint32_t> fanouts() const;
    // FNV-1a over the serialized file image; identifies the network in run metadata.
    std::uint64_t content_hash() const;
};

// Binary network file, little-endian throughout:
//   "NRNW" u32 version | u32 neuron_count | u32 core_capacity | u32 core_count | f64 dt
//   u32 n_params | u32 n_populations | u64 n_edges
//   n_params x { f64 tau_m, tau_syn, e_l, v_th, v_reset, r_m, i_dc, t_ref }
//   n_populations x { u16 name_len, name bytes, u32 first, u32 size, u8 kind,
//                     u32 param_index, f64 rate_hz, f64 v_init_lo, f64 v_init_hi }
//   n_edges x { u64 data packet word (weight, dst, delay), u32 src }
inline constexpr std::uint32_t network_file_version = 1;

void write_network(const Network& net, std::ostream& out);
// Streaming pieces of write_network: the header ignores net.edges and
// announces n_edges, which must then follow through write_edge.
void write_network_header(const Network& net, std::uint64_t n_edges, std::ostream& out);
void write_edge(const SynapseEdge& e, std::ostream& out);
Network read_network(std::istream& in);
void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

} // namespace neuroring
