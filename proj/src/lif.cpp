#include "neuroring/lif.hpp"

#include <cmath>

namespace neuroring
{

void LifParams::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw std::invalid_argument(std::string("invalid LIF parameters: ") + what);
    };
    require(tau_m > 0.0, "tau_m must be > 0");
    require(tau_syn > 0.0, "tau_syn must be > 0");
    require(dt > 0.0, "dt must be > 0");
    require(v_th > v_reset, "V_th must exceed V_reset");
    require(t_ref >= 0.0, "t_ref must be >= 0");
    require(r_m > 0.0 && std::isfinite(r_m), "membrane resistance must be positive");
}

Propagators Propagators::from(const LifParams& p)
{
    p.validate();
    Propagators out;
    out.alpha = std::exp(-p.dt / p.tau_m);
    out.beta = std::exp(-p.dt / p.tau_syn);
    if (p.tau_syn == p.tau_m)
        out.p21 = p.r_m * (p.dt / p.tau_m) * out.alpha;
    else
        out.p21 = p.r_m * p.tau_syn / (p.tau_syn - p.tau_m) * (out.beta - out.alpha);
    out.drive = (p.e_l + p.r_m * p.i_dc) * (1.0 - out.alpha);
    out.v_th = p.v_th;
    out.v_reset = p.v_reset;
    out.ref_steps = static_cast<std::int32_t>(std::lround(p.t_ref / p.dt));
    return out;
}

LifStepResult lif_step(const NeuronState& s, const Propagators& prop, double w_in, std::size_t neuron)
{
    LifStepResult r;
    double v = (prop.alpha * s.v + prop.drive) + prop.p21 * s.i_syn;
    const double i_syn = prop.beta * s.i_syn + w_in;
    if (!std::isfinite(v) || !std::isfinite(i_syn))
        throw NonFiniteState(neuron, "non-finite neuron state");

    std::int32_t ref = s.ref_count;
    if (ref > 0)
    {
        v = prop.v_reset;
        --ref;
    }
    else if (v > prop.v_th)
    {
        r.spiked = true;
        v = prop.v_reset;
        ref = prop.ref_steps;
    }
    r.state = {v, i_syn, ref};
    return r;
}

LifStepResult lif_step(const NeuronState& s, const LifParams& p, double w_in, std::size_t neuron)
{
    return lif_step(s, Propagators::from(p), w_in, neuron);
}

bool poisson_step(PoissonSource& src, double dt_ms)
{
    const bool fired = poisson_fires(spike_probability(src.rate_hz, dt_ms), src.seed, src.neuron, src.step);
    ++src.step;
    return fired;
}

double init_membrane(std::uint64_t seed, std::uint32_t neuron, double lo, double hi)
{
    if (!(lo < hi))
        throw std::invalid_argument("init_membrane requires lo < hi");
    const double v = lo + (hi - lo) * uniform_at(seed, Stream::membrane_init, neuron, 0);
    return v < hi ? v : std::nextafter(hi, lo);
}

} // namespace neuroring
