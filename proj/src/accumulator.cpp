#include "neuroring/accumulator.hpp"

#include <algorithm>
#include <string>
#include <tuple>

#include "neuroring/packet.hpp"

namespace neuroring
{

DelayAccumulator::DelayAccumulator(std::uint32_t first_neuron, std::uint32_t n_local, bool canonical)
    : first_(first_neuron), n_local_(n_local), canonical_(canonical), released_(n_local, 0.0)
{
    if (canonical_)
        pending_.resize(slots);
    else
        dense_.assign(std::size_t{slots} * n_local_, 0.0);
}

void DelayAccumulator::accumulate(std::uint32_t dst, std::uint32_t delay, float weight, std::uint64_t t, EdgeTag tag)
{
    if (dst < first_ || dst - first_ >= n_local_)
        throw AccumulatorFault("packet for neuron " + std::to_string(dst) + " delivered to the wrong core");
    if (delay < 1 || delay > slots)
        throw AccumulatorFault("delay " + std::to_string(delay) + " outside [1, 64]");
    const std::uint64_t due = t + delay;
    if (last_released_ && due <= *last_released_)
        throw AccumulatorFault("packet due at step " + std::to_string(due) + " arrived after that step was released");

    const std::uint32_t local = dst - first_;
    const auto slot = static_cast<std::uint32_t>(due % slots);
    if (canonical_)
        pending_[slot].push_back({local, tag.src, tag.edge, weight});
    else
        dense_[std::size_t{slot} * n_local_ + local] += static_cast<double>(weight);
    ++accumulated_;
}

void DelayAccumulator::accumulate_word(std::uint64_t w, std::uint64_t t, EdgeTag tag)
{
    accumulate(word::dst(w), word::delay(w), word::weight(w), t, tag);
}

std::span<const double> DelayAccumulator::release(std::uint64_t t)
{
    if (last_released_ && t < *last_released_)
        throw AccumulatorFault("step " + std::to_string(t) + " released after step " + std::to_string(*last_released_));
    last_released_ = t;

    const auto slot = static_cast<std::uint32_t>(t % slots);
    if (canonical_)
    {
        std::fill(released_.begin(), released_.end(), 0.0);
        auto& list = pending_[slot];
        std::sort(list.begin(), list.end(), [](const Contribution& a, const Contribution& b) {
            return std::tie(a.local, a.src, a.edge) < std::tie(b.local, b.src, b.edge);
        });
        for (const auto& c : list)
            released_[c.local] += static_cast<double>(c.weight);
        list.clear();
    }
    else
    {
        auto row = dense_.begin() + static_cast<std::ptrdiff_t>(std::size_t{slot} * n_local_);
        std::copy(row, row + n_local_, released_.begin());
        std::fill(row, row + n_local_, 0.0);
    }
    return released_;
}

} // namespace neuroring
