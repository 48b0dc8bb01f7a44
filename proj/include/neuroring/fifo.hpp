#pragma once

#include <atomic>
#include <cstddef>
#include <new>
#include <stdexcept>
#include <vector>

namespace neuroring
{

// Bounded single-producer / single-consumer queue. The producer side
// (try_push, free_slots) and the consumer side (front, pop, empty) may run on
// different threads; size() is exact only when called from either end.
template <typename T>
class SpscFifo
{
  public:
    explicit SpscFifo(std::size_t capacity) : buffer_(capacity + 1), capacity_(capacity)
    {
        if (capacity == 0)
            throw std::invalid_argument("fifo capacity must be positive");
    }

    SpscFifo(const SpscFifo&) = delete;
    SpscFifo& operator=(const SpscFifo&) = delete;

    std::size_t capacity() const { return capacity_; }

    std::size_t size() const
    {
        const auto tail = tail_.load(std::memory_order_acquire);
        const auto head = head_.load(std::memory_order_acquire);
        return tail >= head ? tail - head : tail + buffer_.size() - head;
    }
    std::size_t free_slots() const { return capacity_ - size(); }
    bool empty() const { return head_.load(std::memory_order_relaxed) == tail_.load(std::memory_order_acquire); }
    bool full() const { return free_slots() == 0; }

    bool try_push(const T& value)
    {
        const auto tail = tail_.load(std::memory_order_relaxed);
        const auto next = advance(tail);
        if (next == head_.load(std::memory_order_acquire))
            return false;
        buffer_[tail] = value;
        tail_.store(next, std::memory_order_release);
        const auto occupancy = size();
        if (occupancy > high_water_)
            high_water_ = occupancy;
        return true;
    }

    // Consumer only; the queue must be non-empty.
    const T& front() const { return buffer_[head_.load(std::memory_order_relaxed)]; }
    void pop() { head_.store(advance(head_.load(std::memory_order_relaxed)), std::memory_order_release); }

    // Producer-side statistic.
    std::size_t high_water() const { return high_water_; }

  private:
    std::size_t advance(std::size_t i) const { return i + 1 == buffer_.size() ? 0 : i + 1; }

    std::vector<T> buffer_;
    std::size_t capacity_;
    alignas(64) std::atomic<std::size_t> head_{0};
    alignas(64) std::atomic<std::size_t> tail_{0};
    std::size_t high_water_ = 0;
};

} // namespace neuroring
