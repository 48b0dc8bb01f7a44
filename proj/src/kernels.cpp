#include "neuroring/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace neuroring::kernels
{

std::string_view isa_name(Isa isa)
{
    switch (isa)
    {
    case Isa::scalar:
        return "scalar";
    case Isa::avx2:
        return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa)
{
    switch (isa)
    {
    case Isa::scalar:
        return true;
    case Isa::avx2:
#if NEURORING_HAVE_AVX2
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

Isa detect_isa() { return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

namespace
{

Isa initial_isa()
{
    if (const char* env = std::getenv("NEURORING_ISA"))
    {
        const std::string_view want(env);
        if (want == "scalar")
            return Isa::scalar;
        if (want == "avx2" && isa_available(Isa::avx2))
            return Isa::avx2;
    }
    return detect_isa();
}

std::atomic<Isa>& active_slot()
{
    static std::atomic<Isa> slot{initial_isa()};
    return slot;
}

} // namespace

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa)
{
    if (!isa_available(isa))
        throw std::invalid_argument("kernel ISA " + std::string(isa_name(isa)) + " not available on this CPU");
    active_slot().store(isa, std::memory_order_relaxed);
}

std::size_t lif_update_scalar(const Propagators& prop, const LifLanes& lanes)
{
    std::size_t bad = all_finite;
    for (std::size_t k = 0; k < lanes.n; ++k)
    {
        const double v_old = lanes.v[k];
        const double i_old = lanes.i_syn[k];
        double v = (prop.alpha * v_old + prop.drive) + prop.p21 * i_old;
        const double i_syn = prop.beta * i_old + lanes.input[k];
        if (bad == all_finite && !(std::isfinite(v) && std::isfinite(i_syn)))
            bad = k;

        std::uint8_t spiked = 0;
        if (lanes.ref[k] > 0)
        {
            v = prop.v_reset;
            --lanes.ref[k];
        }
        else if (v > prop.v_th)
        {
            spiked = 1;
            v = prop.v_reset;
            lanes.ref[k] = prop.ref_steps;
        }
        lanes.v[k] = v;
        lanes.i_syn[k] = i_syn;
        lanes.spiked[k] = spiked;
    }
    return bad;
}

void poisson_draw_scalar(double p, std::uint64_t seed, std::uint32_t first_neuron, std::uint64_t step,
                         std::uint8_t* spiked, std::size_t n)
{
    for (std::size_t k = 0; k < n; ++k)
        spiked[k] = poisson_fires(p, seed, first_neuron + static_cast<std::uint32_t>(k), step) ? 1 : 0;
}

#if !NEURORING_HAVE_AVX2
std::size_t lif_update_avx2(const Propagators& prop, const LifLanes& lanes) { return lif_update_scalar(prop, lanes); }
void poisson_draw_avx2(double p, std::uint64_t seed, std::uint32_t first_neuron, std::uint64_t step,
                       std::uint8_t* spiked, std::size_t n)
{
    poisson_draw_scalar(p, seed, first_neuron, step, spiked, n);
}
#endif

LifKernel lif_kernel(Isa isa) { return isa == Isa::avx2 ? &lif_update_avx2 : &lif_update_scalar; }
PoissonKernel poisson_kernel(Isa isa) { return isa == Isa::avx2 ? &poisson_draw_avx2 : &poisson_draw_scalar; }

} // namespace neuroring::kernels
