#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace neuroring
{

// 64-bit wire word:
//   [63:32] weight (IEEE-754 binary32 bit pattern)
//   [31:30] sync class
//   [29:8]  destination neuron (global ID)
//   [7:0]   delay in timesteps
// Sync tokens carry the originating core ID in the destination field.

enum class SyncClass : std::uint8_t
{
    data = 0b00,
    local_sync = 0b01,
    global_sync = 0b10,
    reserved = 0b11,
};

inline constexpr std::uint32_t max_dst = (1u << 22) - 1;
inline constexpr std::uint32_t max_delay = (1u << 8) - 1;

class SynapsePacket
{
  public:
    constexpr SynapsePacket() = default;

    // Throws std::out_of_range when dst or delay do not fit their fields.
    SynapsePacket(float weight, SyncClass sync, std::uint32_t dst, std::uint32_t delay);

    static SynapsePacket data(float weight, std::uint32_t dst, std::uint32_t delay)
    {
        return SynapsePacket(weight, SyncClass::data, dst, delay);
    }
    static SynapsePacket local_sync(std::uint32_t origin_core)
    {
        return SynapsePacket(0.0f, SyncClass::local_sync, origin_core, 0);
    }
    static SynapsePacket global_sync(std::uint32_t origin_core)
    {
        return SynapsePacket(0.0f, SyncClass::global_sync, origin_core, 0);
    }
    static SynapsePacket filler() { return SynapsePacket(0.0f, SyncClass::reserved, 0, 0); }

    // Weight bits are carried verbatim so NaN payloads survive a round trip.
    std::uint32_t weight_bits() const { return weight_bits_; }
    float weight() const;
    SyncClass sync() const { return sync_; }
    std::uint32_t dst() const { return dst_; }
    std::uint32_t delay() const { return delay_; }

    bool is_data() const { return sync_ == SyncClass::data; }

    friend bool operator==(const SynapsePacket&, const SynapsePacket&) = default;

  private:
    friend SynapsePacket decode(std::uint64_t word);

    std::uint32_t weight_bits_ = 0;
    SyncClass sync_ = SyncClass::data;
    std::uint32_t dst_ = 0;
    std::uint32_t delay_ = 0;
};

std::uint64_t encode(const SynapsePacket& p);
SynapsePacket decode(std::uint64_t word);

// Field accessors on the raw word, used on the routing fast path.
namespace word
{
inline constexpr SyncClass sync(std::uint64_t w) { return static_cast<SyncClass>((w >> 30) & 0x3); }
inline constexpr std::uint32_t dst(std::uint64_t w) { return static_cast<std::uint32_t>((w >> 8) & max_dst); }
inline constexpr std::uint32_t delay(std::uint64_t w) { return static_cast<std::uint32_t>(w & max_delay); }
inline constexpr std::uint32_t weight_bits(std::uint64_t w) { return static_cast<std::uint32_t>(w >> 32); }
float weight(std::uint64_t w);
} // namespace word

// 256-bit AXI-style transfer of four packets; lane 0 occupies the lowest 64 bits.
using Burst = std::array<std::uint64_t, 4>;

Burst pack_burst(const std::array<SynapsePacket, 4>& ps);
std::array<SynapsePacket, 4> unpack_burst(const Burst& b);

// Groups packets into bursts, padding the final partial burst with reserved fillers.
std::vector<Burst> pack_bursts(std::span<const SynapsePacket> ps);
// Drops filler packets; everything else is returned in order.
std::vector<SynapsePacket> unpack_bursts(std::span<const Burst> bursts);

} // namespace neuroring
