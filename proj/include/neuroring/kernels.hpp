#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "neuroring/lif.hpp"

namespace neuroring::kernels
{

enum class Isa
{
    scalar,
    avx2,
};

std::string_view isa_name(Isa isa);

// Best ISA supported by the running CPU and compiled into this binary.
Isa detect_isa();
bool isa_available(Isa isa);

// ISA used by the simulator. Defaults to detect_isa(); the NEURORING_ISA
// environment variable ("scalar" or "avx2") overrides it at first use.
Isa active_isa();
void set_active_isa(Isa isa);

// Structure-of-arrays view over one run of neurons sharing a propagator set.
struct LifLanes
{
    double* v = nullptr;
    double* i_syn = nullptr;
    std::int32_t* ref = nullptr;
    const double* input = nullptr;
    std::uint8_t* spiked = nullptr;
    std::size_t n = 0;
};

inline constexpr std::size_t all_finite = static_cast<std::size_t>(-1);

// Applies lif_step to every lane. Returns all_finite, or the lowest lane index
// whose updated V or I_syn is not finite (lanes are still written).
// Every variant performs the same IEEE operations in the same order, so
// results are bit-identical across ISAs.
using LifKernel = std::size_t (*)(const Propagators&, const LifLanes&);

std::size_t lif_update_scalar(const Propagators& prop, const LifLanes& lanes);
std::size_t lif_update_avx2(const Propagators& prop, const LifLanes& lanes);

// spiked[k] = uniform_at(seed, poisson, first_neuron + k, step) < p
using PoissonKernel = void (*)(double p, std::uint64_t seed, std::uint32_t first_neuron, std::uint64_t step,
                               std::uint8_t* spiked, std::size_t n);

void poisson_draw_scalar(double p, std::uint64_t seed, std::uint32_t first_neuron, std::uint64_t step,
                         std::uint8_t* spiked, std::size_t n);
void poisson_draw_avx2(double p, std::uint64_t seed, std::uint32_t first_neuron, std::uint64_t step,
                       std::uint8_t* spiked, std::size_t n);

LifKernel lif_kernel(Isa isa);
PoissonKernel poisson_kernel(Isa isa);

} // namespace neuroring::kernels
