#include "neuroring/simulator.hpp"

#include <algorithm>
#include <barrier>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "neuroring/accumulator.hpp"
#include "neuroring/kernels.hpp"
#include "neuroring/lif.hpp"

namespace neuroring
{

struct Segment
{
    std::uint32_t begin = 0; // local indices
    std::uint32_t end = 0;
    NeuronKind kind = NeuronKind::lif;
    Propagators prop;
    double spike_p = 0.0;
};

struct StepOutcome
{
    bool progress = false;
    std::uint32_t tokens_returned = 0;
};

// NeuroRing CU (neuron update + synapse-list fetch) fused with the
// SynapseRouter CU and its accumulators. Owned by exactly one worker.
struct CoreRuntime
{
    CoreRuntime(std::uint32_t id_, std::uint32_t first_, std::uint32_t n_local_, bool canonical,
                const TopologyConfig& topo, RouterPorts ports)
        : id(id_), first(first_), n_local(n_local_), v(n_local_, 0.0), i_syn(n_local_, 0.0), ref(n_local_, 0),
          spiked(n_local_, 0), acc(first_, n_local_, canonical), router(id_, topo, ports)
    {
    }

    std::uint32_t id;
    std::uint32_t first;
    std::uint32_t n_local;
    std::vector<double> v;
    std::vector<double> i_syn;
    std::vector<std::int32_t> ref;
    std::vector<std::uint8_t> spiked;
    std::vector<Segment> segments;
    DelayAccumulator acc;
    RouterState router;

    // fetch stage
    std::vector<std::uint32_t> spikes;
    std::size_t next_spike = 0;
    std::size_t pos = 0;
    bool awaiting_ack = false;

    std::atomic<std::uint64_t> steps_begun{0};
    std::uint64_t spike_count = 0;
    std::uint64_t expected_events = 0;

    void begin_step(std::uint64_t t, const SynapseList& store, std::uint64_t seed, kernels::Isa isa)
    {
        const auto input = acc.release(t);
        const auto lif = kernels::lif_kernel(isa);
        const auto poisson = kernels::poisson_kernel(isa);
        for (const auto& seg : segments)
        {
            const std::size_t n = seg.end - seg.begin;
            if (seg.kind == NeuronKind::lif)
            {
                kernels::LifLanes lanes{v.data() + seg.begin, i_syn.data() + seg.begin, ref.data() + seg.begin,
                                        input.data() + seg.begin, spiked.data() + seg.begin, n};
                const auto bad = lif(seg.prop, lanes);
                if (bad != kernels::all_finite)
                    throw NonFiniteState(first + seg.begin + bad, "non-finite neuron state at step " + std::to_string(t));
            }
            else
            {
                poisson(seg.spike_p, seed, first + seg.begin, t, spiked.data() + seg.begin, n);
            }
        }

        spikes.clear();
        for (std::uint32_t k = 0; k < n_local; ++k)
        {
            if (spiked[k])
            {
                spikes.push_back(first + k);
                expected_events += store.fanout(first + k);
            }
        }
        spike_count += spikes.size();
        next_spike = 0;
        pos = 0;
        awaiting_ack = false;
        if (spikes.empty())
            router.mark_fetch_done();
        steps_begun.fetch_add(1, std::memory_order_relaxed);
    }

    bool fetch_step(const SynapseList& store)
    {
        if (router.fetch_done() || awaiting_ack)
            return false;
        const auto src = spikes[next_spike];
        const auto list = store.list(src);
        const auto base = store.first_edge(src);
        Link& out = *router.ports().local_in;
        bool progress = false;
        for (int burst = 0; burst < RouterState::local_burst; ++burst)
        {
            if (pos < list.size())
            {
                if (!out.try_push({list[pos], {src, static_cast<std::uint32_t>(base + pos)}}))
                    break;
                ++pos;
                progress = true;
            }
            else
            {
                if (out.try_push({encode(SynapsePacket::local_sync(id)), {src, 0}}))
                {
                    awaiting_ack = true;
                    progress = true;
                }
                break;
            }
        }
        return progress;
    }

    StepOutcome micro_step(std::uint64_t t, const SynapseList& store)
    {
        StepOutcome out;
        out.progress = fetch_step(store);
        const auto r = router_step(router, acc, t);
        if (r.local_sync_acked)
        {
            if (!awaiting_ack)
                throw ProtocolFault("unexpected LOCAL_SYNC acknowledgement on core " + std::to_string(id));
            awaiting_ack = false;
            pos = 0;
            if (++next_spike == spikes.size())
                router.mark_fetch_done();
        }
        out.progress = out.progress || r.progress;
        out.tokens_returned = r.tokens_returned;
        return out;
    }
};

std::uint64_t steps_for(double t_bio_ms, double dt)
{
    if (t_bio_ms < 0.0 || !(dt > 0.0))
        throw std::invalid_argument("biological time must be >= 0 and dt > 0");
    const double ratio = t_bio_ms / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-6)
        throw std::invalid_argument("biological time " + std::to_string(t_bio_ms) + " ms is not a multiple of dt");
    return static_cast<std::uint64_t>(rounded);
}

RingSimulator::RingSimulator(const Network& net, SimOptions opts) : net_(net), opts_(std::move(opts))
{
    net_.validate();
    auto& topo = opts_.topology;
    topo.dt = net_.dt;
    topo.validate();
    if (topo.neuron_slots() < net_.neuron_count)
        throw std::invalid_argument(std::to_string(topo.n_cores) + " cores x " + std::to_string(topo.core_capacity) +
                                    " neurons cannot host " + std::to_string(net_.neuron_count) + " neurons");
    if (opts_.queue_capacity < 2)
        throw std::invalid_argument("queue capacity must be at least 2");
    if (opts_.workers < 1)
        throw std::invalid_argument("need at least one worker");

    store_ = SynapseList::build(net_.edges, net_.neuron_count, topo);

    const auto n = topo.n_cores;
    // links_: [0, n) right edges, [n, 2n) left edges, [2n, 3n) fetch streams
    for (std::uint32_t i = 0; i < 3 * n; ++i)
        links_.push_back(std::make_unique<Link>(opts_.queue_capacity));
    auto right_edge = [&](std::uint32_t c) { return links_[c].get(); };
    auto left_edge = [&](std::uint32_t c) { return links_[n + c].get(); };

    for (std::uint32_t c = 0; c < n; ++c)
    {
        RouterPorts ports;
        ports.in_from_left = right_edge((c + n - 1) % n);
        ports.in_from_right = left_edge((c + 1) % n);
        ports.out_right = right_edge(c);
        ports.out_left = left_edge(c);
        ports.local_in = links_[2 * n + c].get();

        const auto first = topo.first_neuron(c);
        const auto n_local =
            first >= net_.neuron_count ? 0u : std::min(topo.core_capacity, net_.neuron_count - first);
        auto core = std::make_unique<CoreRuntime>(c, first, n_local, opts_.canonical, topo, ports);

        for (const auto& pop : net_.populations)
        {
            const auto lo = std::max(pop.first, first);
            const auto hi = std::min(pop.end(), first + n_local);
            if (lo >= hi)
                continue;
            Segment seg;
            seg.begin = lo - first;
            seg.end = hi - first;
            seg.kind = pop.kind;
            if (pop.kind == NeuronKind::lif)
            {
                auto params = net_.params[pop.param_index];
                params.dt = net_.dt;
                seg.prop = Propagators::from(params);
                for (auto id = lo; id < hi; ++id)
                    core->v[id - first] = pop.v_init_lo == pop.v_init_hi
                                              ? pop.v_init_lo
                                              : init_membrane(opts_.seed, id, pop.v_init_lo, pop.v_init_hi);
            }
            else
            {
                seg.spike_p = spike_probability(pop.rate_hz, net_.dt);
            }
            core->segments.push_back(seg);
        }
        cores_.push_back(std::move(core));
    }

    recording_.seed = opts_.seed;
    recording_.config_hash = net_.content_hash();
    recording_.neuron_count = net_.neuron_count;
    recording_.dt = net_.dt;
}

RingSimulator::~RingSimulator() = default;

void RingSimulator::advance(std::uint64_t steps)
{
    if (steps == 0)
        return;
    if (opts_.mode == ExecMode::deterministic)
        run_deterministic(steps);
    else
        run_concurrent(steps);
}

void RingSimulator::sample_skew()
{
    std::uint64_t lo = UINT64_MAX;
    std::uint64_t hi = 0;
    for (const auto& c : cores_)
    {
        const auto s = c->steps_begun.load(std::memory_order_relaxed);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    const auto skew = static_cast<std::uint32_t>(hi - lo);
    auto seen = max_skew_.load(std::memory_order_relaxed);
    while (skew > seen && !max_skew_.compare_exchange_weak(seen, skew, std::memory_order_relaxed))
    {
    }
    if (skew > 1)
        throw InvariantViolation("core step counters differ by " + std::to_string(skew));
}

std::string RingSimulator::diagnostics() const
{
    std::ostringstream s;
    s << "step " << step_ << '\n';
    for (const auto& c : cores_)
        s << "  " << c->router.diagnostics() << " spikes_pending=" << (c->spikes.size() - c->next_spike) << '\n';
    return s.str();
}

void RingSimulator::finish_step()
{
    for (const auto& c : cores_)
    {
        if (!c->router.barrier_complete() || !c->router.tokens_home())
            throw ProtocolFault("barrier incomplete after all tokens returned\n" + diagnostics());
    }
    for (const auto& l : links_)
        if (!l->empty())
            throw ProtocolFault("packets left in flight after the barrier\n" + diagnostics());

    std::uint64_t delivered = 0;
    std::uint64_t expected = 0;
    for (const auto& c : cores_)
    {
        delivered += c->router.counters().deliveries;
        expected += c->expected_events;
    }
    if (delivered != expected)
        throw InvariantViolation("step " + std::to_string(step_) + ": " + std::to_string(delivered) +
                                 " deliveries for " + std::to_string(expected) + " expected synaptic events");

    const auto t = static_cast<std::uint32_t>(step_);
    for (auto& c : cores_)
    {
        for (auto id : c->spikes)
            recording_.events.push_back({t, id});
        c->router.reset_for_next_step();
    }
    ++step_;
    recording_.total_steps = step_;
}

void RingSimulator::run_deterministic(std::uint64_t steps)
{
    const auto isa = kernels::active_isa();
    const auto n = static_cast<std::uint32_t>(cores_.size());
    for (std::uint64_t s = 0; s < steps; ++s)
    {
        for (auto& c : cores_)
        {
            c->begin_step(step_, store_, opts_.seed, isa);
            sample_skew();
        }
        std::uint32_t home = 0;
        std::uint64_t rounds = 0;
        while (home < 2 * n)
        {
            for (auto& c : cores_)
                home += c->micro_step(step_, store_).tokens_returned;
            if (++rounds > opts_.barrier_budget)
                throw DeadlockFault("timestep barrier not reached within " + std::to_string(opts_.barrier_budget) +
                                    " router micro-steps\n" + diagnostics());
        }
        finish_step();
    }
}

void RingSimulator::run_concurrent(std::uint64_t steps)
{
    const auto isa = kernels::active_isa();
    const auto n = static_cast<std::uint32_t>(cores_.size());
    const auto workers = std::min<std::uint32_t>(opts_.workers, n);

    std::atomic<std::uint32_t> tokens_home{0};
    std::atomic<std::uint64_t> progress_epoch{0};
    std::atomic<bool> abort{false};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto fail = [&](std::exception_ptr e) {
        std::lock_guard lock(error_mutex);
        if (!error)
            error = e;
        abort.store(true);
    };

    auto on_step_complete = [&]() noexcept {
        if (abort.load())
            return;
        try
        {
            finish_step();
        }
        catch (...)
        {
            fail(std::current_exception());
        }
        tokens_home.store(0);
    };
    std::barrier sync(static_cast<std::ptrdiff_t>(workers), on_step_complete);

    auto worker = [&](std::uint32_t w) {
        std::vector<CoreRuntime*> owned;
        for (std::uint32_t c = w; c < n; c += workers)
            owned.push_back(cores_[c].get());

        for (std::uint64_t s = 0; s < steps; ++s)
        {
            const auto t = step_;
            try
            {
                for (auto* c : owned)
                    c->begin_step(t, store_, opts_.seed, isa);
                std::uint64_t idle = 0;
                std::uint64_t iter = 0;
                auto last_epoch = progress_epoch.load(std::memory_order_relaxed);
                while (tokens_home.load(std::memory_order_acquire) < 2 * n && !abort.load(std::memory_order_relaxed))
                {
                    bool progress = false;
                    for (auto* c : owned)
                    {
                        const auto r = c->micro_step(t, store_);
                        progress = progress || r.progress;
                        if (r.tokens_returned)
                            tokens_home.fetch_add(r.tokens_returned, std::memory_order_acq_rel);
                    }
                    if ((++iter & 255) == 0)
                        sample_skew();
                    if (progress)
                    {
                        progress_epoch.fetch_add(1, std::memory_order_relaxed);
                        idle = 0;
                        continue;
                    }
                    const auto epoch = progress_epoch.load(std::memory_order_relaxed);
                    if (epoch != last_epoch)
                    {
                        last_epoch = epoch;
                        idle = 0;
                    }
                    else if (++idle > opts_.barrier_budget)
                    {
                        throw DeadlockFault("no ring progress for " + std::to_string(opts_.barrier_budget) +
                                            " router micro-steps");
                    }
                    std::this_thread::yield();
                }
            }
            catch (...)
            {
                fail(std::current_exception());
            }
            sync.arrive_and_wait();
            if (abort.load())
                return;
        }
    };

    std::vector<std::jthread> threads;
    for (std::uint32_t w = 1; w < workers; ++w)
        threads.emplace_back(worker, w);
    worker(0);
    threads.clear();

    if (error)
        std::rethrow_exception(error);
}

RunMetrics RingSimulator::metrics() const
{
    RunMetrics m;
    m.timesteps = step_;
    m.max_step_skew = max_skew_.load();
    const auto n = cores_.size();
    m.right_edge_traffic.resize(n);
    m.left_edge_traffic.resize(n);
    for (std::size_t c = 0; c < n; ++c)
    {
        const auto& core = *cores_[c];
        const auto& r = core.router.counters();
        m.total_spikes += core.spike_count;
        m.expected_events += core.expected_events;
        m.synaptic_events += r.deliveries;
        m.local_deliveries += r.local_deliveries;
        m.ring_hops += r.hops;
        m.token_hops += r.token_hops;
        m.inter_device_crossings += r.device_crossings;
        m.stalls += r.stalls;
        m.router_micro_steps += r.micro_steps;
        m.max_packet_hops = std::max(m.max_packet_hops, r.max_hops);
        m.right_edge_traffic[c] = r.right_traffic;
        m.left_edge_traffic[c] = r.left_traffic;
    }
    for (const auto& l : links_)
        m.max_queue_occupancy = std::max<std::uint64_t>(m.max_queue_occupancy, l->high_water());
    return m;
}

double RingSimulator::membrane(std::uint32_t neuron) const
{
    if (neuron >= net_.neuron_count)
        throw std::out_of_range("neuron " + std::to_string(neuron) + " outside the network");
    const auto& core = *cores_[opts_.topology.core_of(neuron)];
    return core.v[neuron - core.first];
}

SimulationResult run_ring(const Network& net, double t_bio_ms, const SimOptions& opts)
{
    RingSimulator sim(net, opts);
    sim.advance(steps_for(t_bio_ms, net.dt));
    SimulationResult result{sim.recording(), sim.metrics()};
    if (result.metrics.synaptic_events != result.metrics.expected_events)
        throw InvariantViolation("synaptic events " + std::to_string(result.metrics.synaptic_events) +
                                 " != spikes x fanout " + std::to_string(result.metrics.expected_events));
    result.recording.check_invariants();
    return result;
}

} // namespace neuroring
