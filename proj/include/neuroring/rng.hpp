#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace neuroring
{

// Philox4x32-10 (Salmon et al., Random123). Stateless: the output is a pure
// function of (key, counter), so every consumer can address its own stream
// without any shared generator state.
class Philox4x32
{
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key)
    {
        for (int round = 0; round < 10; ++round)
        {
            ctr = single_round(ctr, key);
            key[0] += w0;
            key[1] += w1;
        }
        return ctr;
    }

  private:
    static constexpr std::uint32_t m0 = 0xD2511F53u;
    static constexpr std::uint32_t m1 = 0xCD9E8D57u;
    static constexpr std::uint32_t w0 = 0x9E3779B9u;
    static constexpr std::uint32_t w1 = 0xBB67AE85u;

    static constexpr Counter single_round(const Counter& c, const Key& k)
    {
        const std::uint64_t p0 = std::uint64_t{m0} * c[0];
        const std::uint64_t p1 = std::uint64_t{m1} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

// Independent random streams. Each stream kind owns the top byte of the third
// counter word so that e.g. membrane initialisation and Poisson draws for the
// same neuron never overlap.
enum class Stream : std::uint8_t
{
    poisson = 1,
    membrane_init = 2,
    generator = 3,
    sampling = 4,
};

inline constexpr double to_unit_double(std::uint32_t hi, std::uint32_t lo)
{
    const std::uint64_t bits = (std::uint64_t{hi} << 32 | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
}

// Uniform double in [0, 1) addressed by (seed, stream, id, index).
inline double uniform_at(std::uint64_t seed, Stream stream, std::uint32_t id, std::uint64_t index)
{
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), id,
                                  std::uint32_t{static_cast<std::uint8_t>(stream)} << 24};
    const auto out = Philox4x32::generate(ctr, key);
    return to_unit_double(out[0], out[1]);
}

// 64-bit value derived from (seed, stream, id); used to seed sequential engines.
inline std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint32_t id, std::uint32_t salt = 0)
{
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    const Philox4x32::Counter ctr{salt, 0xFFFFFFFFu, id, std::uint32_t{static_cast<std::uint8_t>(stream)} << 24};
    const auto out = Philox4x32::generate(ctr, key);
    return std::uint64_t{out[0]} << 32 | out[1];
}

// Sequential uniform random bit generator over the Philox stream, usable with
// <random> distributions.
class PhiloxEngine
{
  public:
    using result_type = std::uint32_t;

    PhiloxEngine(std::uint64_t seed, Stream stream, std::uint32_t id)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_word_(std::uint32_t{static_cast<std::uint8_t>(stream)} << 24), id_(id)
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        if (lane_ == 4)
        {
            block_ = Philox4x32::generate({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                                           id_, stream_word_},
                                          key_);
            ++counter_;
            lane_ = 0;
        }
        return block_[lane_++];
    }

    double uniform() { return to_unit_double((*this)(), (*this)()); }

  private:
    Philox4x32::Key key_;
    std::uint32_t stream_word_;
    std::uint32_t id_;
    std::uint64_t counter_ = 0;
    Philox4x32::Counter block_{};
    int lane_ = 4;
};

} // namespace neuroring
