#include "neuroring/packet.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace neuroring
{

SynapsePacket::SynapsePacket(float weight, SyncClass sync, std::uint32_t dst, std::uint32_t delay)
    : weight_bits_(std::bit_cast<std::uint32_t>(weight)), sync_(sync), dst_(dst), delay_(delay)
{
    if (dst > max_dst)
        throw std::out_of_range("packet dst " + std::to_string(dst) + " exceeds 22-bit field");
    if (delay > max_delay)
        throw std::out_of_range("packet delay " + std::to_string(delay) + " exceeds 8-bit field");
}

float SynapsePacket::weight() const { return std::bit_cast<float>(weight_bits_); }

std::uint64_t encode(const SynapsePacket& p)
{
    return (std::uint64_t{p.weight_bits()} << 32) | (std::uint64_t{static_cast<std::uint8_t>(p.sync())} << 30) |
           (std::uint64_t{p.dst()} << 8) | std::uint64_t{p.delay()};
}

SynapsePacket decode(std::uint64_t w)
{
    SynapsePacket p;
    p.weight_bits_ = word::weight_bits(w);
    p.sync_ = word::sync(w);
    p.dst_ = word::dst(w);
    p.delay_ = word::delay(w);
    return p;
}

float word::weight(std::uint64_t w) { return std::bit_cast<float>(weight_bits(w)); }

Burst pack_burst(const std::array<SynapsePacket, 4>& ps)
{
    Burst b{};
    for (std::size_t i = 0; i < 4; ++i)
        b[i] = encode(ps[i]);
    return b;
}

std::array<SynapsePacket, 4> unpack_burst(const Burst& b)
{
    std::array<SynapsePacket, 4> ps;
    for (std::size_t i = 0; i < 4; ++i)
        ps[i] = decode(b[i]);
    return ps;
}

std::vector<Burst> pack_bursts(std::span<const SynapsePacket> ps)
{
    std::vector<Burst> out;
    out.reserve((ps.size() + 3) / 4);
    for (std::size_t i = 0; i < ps.size(); i += 4)
    {
        std::array<SynapsePacket, 4> group{SynapsePacket::filler(), SynapsePacket::filler(),
                                           SynapsePacket::filler(), SynapsePacket::filler()};
        for (std::size_t j = 0; j < 4 && i + j < ps.size(); ++j)
            group[j] = ps[i + j];
        out.push_back(pack_burst(group));
    }
    return out;
}

std::vector<SynapsePacket> unpack_bursts(std::span<const Burst> bursts)
{
    std::vector<SynapsePacket> out;
    out.reserve(bursts.size() * 4);
    for (const auto& b : bursts)
        for (const auto& p : unpack_burst(b))
            if (p.sync() != SyncClass::reserved)
                out.push_back(p);
    return out;
}

} // namespace neuroring
