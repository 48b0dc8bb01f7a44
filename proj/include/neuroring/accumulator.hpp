#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace neuroring
{

class AccumulatorFault : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

// Identifies one synapse: the source neuron and the edge's index in the
// synapse store. Canonical accumulation sums each slot in this order.
struct EdgeTag
{
    std::uint32_t src = 0;
    std::uint32_t edge = 0;
};

// Per-neuron circular buffer of 64 delay slots. A packet with delay d that
// arrives during step t lands in slot (t + d) mod 64 and is released at the
// start of step t + d.
class DelayAccumulator
{
  public:
    static constexpr std::uint32_t slots = 64;

    DelayAccumulator(std::uint32_t first_neuron, std::uint32_t n_local, bool canonical);

    // Throws AccumulatorFault on a foreign destination, a delay outside
    // [1, 64], or a target step that has already been released.
    void accumulate(std::uint32_t dst, std::uint32_t delay, float weight, std::uint64_t t, EdgeTag tag = {});
    void accumulate_word(std::uint64_t word, std::uint64_t t, EdgeTag tag = {});

    // Returns and clears slot (t mod 64), indexed by local neuron. The span
    // stays valid until the next release. Releasing the same step again yields
    // zeros; releasing a step before the last released one is a fault.
    std::span<const double> release(std::uint64_t t);

    std::uint32_t first_neuron() const { return first_; }
    std::uint32_t size() const { return n_local_; }
    bool canonical() const { return canonical_; }
    std::uint64_t accumulated() const { return accumulated_; }

  private:
    struct Contribution
    {
        std::uint32_t local;
        std::uint32_t src;
        std::uint32_t edge;
        float weight;
    };

    std::uint32_t first_;
    std::uint32_t n_local_;
    bool canonical_;
    std::optional<std::uint64_t> last_released_;
    std::uint64_t accumulated_ = 0;
    std::vector<double> dense_;                        // slots x n_local, unordered mode
    std::vector<std::vector<Contribution>> pending_;   // per slot, canonical mode
    std::vector<double> released_;
};

} // namespace neuroring
