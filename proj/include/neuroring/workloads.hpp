#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "neuroring/network.hpp"
#include "neuroring/recording.hpp"

namespace neuroring
{

class WorkloadError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Outgoing projection of one source population onto one target population.
struct Projection
{
    double probability = 0.0;
    double weight_mean = 0.0; // pA
    double weight_sd = 0.0;
    double delay_mean = 1.0;  // ms
    double delay_sd = 0.0;
};

struct PopulationSpec
{
    std::string name;
    std::uint32_t size = 0;
    LifParams params;       // i_dc carries the DC amplitude
    double rate_hz = 0.0;   // > 0 turns the population into Poisson sources
    double v_init_lo = -65.0;
    double v_init_hi = -65.0;
    std::vector<Projection> targets; // indexed like MicrocircuitSpec::populations
};

enum class ConnectionRule
{
    fixed_total_number, // K pairs drawn with replacement so that P(connected) = p
    pairwise_bernoulli,
};

struct MicrocircuitSpec
{
    std::vector<PopulationSpec> populations;
    ConnectionRule rule = ConnectionRule::fixed_total_number;
    double dt = 0.1;
    std::uint32_t cores = 8;

    void validate() const;
    std::uint64_t full_size() const;
};

struct SudokuSpec
{
    using Grid = std::array<std::uint8_t, 81>;

    Grid givens{};
    std::uint32_t neurons_per_digit = 5;
    double stimulus_rate_hz = 200.0;
    double noise_rate_hz = 200.0;
    double inhibitory_weight = -100.0;
    double stimulus_weight = 200.0;
    double delay_ms = 1.0;
    double dt = 0.1;
    LifParams params;
    double v_init_lo = -65.0;
    double v_init_hi = -55.0;
    std::uint32_t cores = 2;

    void validate() const;
};

using Grid = SudokuSpec::Grid;

MicrocircuitSpec parse_microcircuit(const std::string& json_text);
MicrocircuitSpec load_microcircuit(const std::filesystem::path& path);
SudokuSpec parse_sudoku(const std::string& json_text);
SudokuSpec load_sudoku(const std::filesystem::path& path);

// Population sizes at `scale`, rounded half to even.
std::vector<std::uint32_t> scaled_sizes(const MicrocircuitSpec& spec, double scale);

// Out-degree of every neuron. Identical to Network::fanouts() of the
// generated network, but computed without drawing individual synapses.
std::vector<std::uint32_t> microcircuit_fanouts(const MicrocircuitSpec& spec, double scale, std::uint64_t seed);

// Streams the edges in (source, target population) order without building a network.
void generate_microcircuit_edges(const MicrocircuitSpec& spec, double scale, std::uint64_t seed,
                                 const std::function<void(const SynapseEdge&)>& sink);

// Neurons, parameters and populations of the scaled circuit, no edges.
Network microcircuit_skeleton(const MicrocircuitSpec& spec, double scale);
Network gen_microcircuit(const MicrocircuitSpec& spec, double scale, std::uint64_t seed);
// Writes the same file as save_network(gen_microcircuit(...)) without holding
// the edges in memory. Returns the edge count.
std::uint64_t save_microcircuit(const MicrocircuitSpec& spec, double scale, std::uint64_t seed,
                                const std::filesystem::path& path);

// Neuron id of copy k of the population coding `digit` (1..9) in cell (row, col).
inline std::uint32_t sudoku_neuron(std::uint32_t row, std::uint32_t col, std::uint32_t digit, std::uint32_t k,
                                   std::uint32_t neurons_per_digit = 5)
{
    return ((row * 9 + col) * 9 + (digit - 1)) * neurons_per_digit + k;
}

// Digit neurons first, then one noise source per digit neuron, then one
// stimulus source per neuron of every given digit population.
Network gen_sudoku(const SudokuSpec& spec);

// 81 characters, digits 1-9, '0' or '.' for empty cells.
Grid parse_puzzle(const std::string& text);
std::string format_grid(const Grid& grid);

struct SudokuDecode
{
    Grid grid{};
    std::uint32_t undecided = 0;
};

// Argmax of digit-population spike counts over the last `window_ms` of the
// run; ties (including silence) leave the cell at 0.
SudokuDecode decode_sudoku(const SpikeRecording& rec, double window_ms = 100.0, std::uint32_t neurons_per_digit = 5);

struct GridCheck
{
    bool valid = false;
    std::vector<std::string> violations;
};

// Valid iff every row, column and box is a permutation of 1..9 and every given survives.
GridCheck validate_grid(const Grid& grid, const Grid& givens);
GridCheck validate_grid(const Grid& grid);

} // namespace neuroring
