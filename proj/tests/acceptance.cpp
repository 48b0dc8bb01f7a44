// Acceptance suite: one PASS/FAIL line per criterion. Optional arguments pick
// criteria by number, e.g. `neuroring_acceptance 1 4 8`.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "neuroring/accumulator.hpp"
#include "neuroring/lif.hpp"
#include "neuroring/oracle.hpp"
#include "neuroring/packet.hpp"
#include "neuroring/simulator.hpp"
#include "neuroring/stats.hpp"
#include "neuroring/workloads.hpp"
#include "test_support.hpp"

using namespace neuroring;
using Clock = std::chrono::steady_clock;

namespace
{

const std::filesystem::path config_dir = NEURORING_CONFIG_DIR;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome codec_round_trip()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1);
    std::uint64_t failures = 0;
    constexpr std::uint64_t n = 1'000'000;
    for (std::uint64_t k = 0; k < n; ++k)
    {
        const auto r = rng();
        const auto wbits = static_cast<std::uint32_t>(r >> 32);
        const auto sync = static_cast<SyncClass>((r >> 30) & 3);
        const auto dst = static_cast<std::uint32_t>((r >> 8) & max_dst);
        const auto delay = static_cast<std::uint32_t>(r & max_delay);
        const SynapsePacket p(std::bit_cast<float>(wbits), sync, dst, delay);
        const std::uint64_t expected = (std::uint64_t{wbits} << 32) | (std::uint64_t{static_cast<std::uint8_t>(sync)} << 30) |
                                       (std::uint64_t{dst} << 8) | delay;
        const auto w = encode(p);
        const auto q = decode(w);
        if (w != expected || q != p || q.weight_bits() != wbits || encode(q) != w)
            ++failures;
    }
    const double s = seconds_since(t0);
    return {failures == 0 && s < 5.0, fmt("%llu/%llu mismatches, %.2f s (limit 5 s)",
                                          static_cast<unsigned long long>(failures), static_cast<unsigned long long>(n), s)};
}

Outcome oracle_equivalence()
{
    const auto t0 = Clock::now();
    int ring_mismatch = 0, concurrent_mismatch = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
        const auto net = testing::random_network(1000 + seed);
        const auto oracle = oracle_run(net, 100.0, seed);
        SimOptions o;
        o.topology = net.default_topology();
        o.seed = seed;
        const auto det = run_ring(net, 100.0, o).recording;
        o.mode = ExecMode::concurrent;
        o.workers = 4;
        const auto conc = run_ring(net, 100.0, o).recording;
        ring_mismatch += !(det == oracle);
        concurrent_mismatch += !(conc == det);
    }
    const double s = seconds_since(t0);
    return {ring_mismatch == 0 && concurrent_mismatch == 0 && s < 120.0,
            fmt("50 networks x 1000 steps: ring!=oracle %d, concurrent!=deterministic %d, %.1f s (limit 120 s)",
                ring_mismatch, concurrent_mismatch, s)};
}

Outcome heavy_ring()
{
    const auto t0 = Clock::now();
    testing::RandomNetworkShape shape;
    shape.cores = 20;
    shape.capacity = 64;
    shape.max_fanout = 64;
    shape.min_rate_hz = 500.0;
    shape.max_rate_hz = 1000.0;
    const auto net = testing::random_network(77, shape);
    SimOptions o;
    o.topology = net.default_topology();
    o.mode = ExecMode::concurrent;
    o.workers = 4;
    o.queue_capacity = 8;
    o.canonical = false;
    o.seed = 3;
    try
    {
        const auto res = run_ring(net, 1000.0, o);
        const auto fan = net.fanouts();
        std::uint64_t expected = 0;
        for (const auto& e : res.recording.events)
            expected += fan[e.neuron];
        const auto& m = res.metrics;
        const double s = seconds_since(t0);
        const bool ok = m.timesteps == 10000 && m.synaptic_events == expected && m.expected_events == expected &&
                        m.max_step_skew <= 1 && s < 120.0;
        return {ok, fmt("%llu spikes, %llu/%llu synaptic events delivered, skew %u, %llu stalls, %.1f s (limit 120 s)",
                        static_cast<unsigned long long>(m.total_spikes), static_cast<unsigned long long>(m.synaptic_events),
                        static_cast<unsigned long long>(expected), m.max_step_skew,
                        static_cast<unsigned long long>(m.stalls), s)};
    }
    catch (const std::exception& e)
    {
        return {false, std::string("fault: ") + e.what()};
    }
}

// Weights on a 1/8 grid keep every partial sum exact, so order cannot matter.
Outcome delay_line()
{
    const auto t0 = Clock::now();
    std::uint64_t mismatches = 0, events = 0;
    for (bool canonical : {true, false})
    {
        constexpr std::uint32_t n_local = 32, first = 96;
        constexpr std::uint64_t horizon = 2000;
        std::vector<std::vector<double>> dense(horizon + 65, std::vector<double>(n_local, 0.0));
        DelayAccumulator acc(first, n_local, canonical);
        std::mt19937_64 rng(canonical ? 11 : 12);
        std::uniform_int_distribution<std::uint32_t> per_step(0, 50), local(0, n_local - 1), delay(1, 64);
        std::uniform_int_distribution<int> w(-800, 800);
        std::uint32_t edge = 0;
        for (std::uint64_t t = 0; t < horizon; ++t)
        {
            const auto out = acc.release(t);
            for (std::uint32_t k = 0; k < n_local; ++k)
                mismatches += out[k] != dense[t][k];
            const auto n = per_step(rng);
            for (std::uint32_t j = 0; j < n; ++j)
            {
                const auto d = delay(rng);
                const auto l = local(rng);
                const float weight = static_cast<float>(w(rng)) / 8.0f;
                acc.accumulate(first + l, d, weight, t, EdgeTag{static_cast<std::uint32_t>(rng() % 4096), edge++});
                dense[t + d][l] += weight;
                ++events;
            }
        }
    }
    const double s = seconds_since(t0);
    return {mismatches == 0 && events >= 100000,
            fmt("%llu events, %llu slot mismatches, %.2f s", static_cast<unsigned long long>(events),
                static_cast<unsigned long long>(mismatches), s)};
}

Outcome sudoku()
{
    std::ifstream in(config_dir / "puzzles.txt");
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#')
            lines.push_back(line);
    if (lines.size() < 6)
        return {false, "puzzles.txt is incomplete"};
    const auto base = load_sudoku(config_dir / "sudoku.json");
    bool all = true;
    std::string detail;
    for (std::size_t p = 0; p < 3; ++p)
    {
        const auto t0 = Clock::now();
        auto spec = base;
        spec.givens = parse_puzzle(lines[2 * p]);
        const auto net = gen_sudoku(spec);
        bool solved = false;
        int tries = 0;
        for (std::uint64_t seed = 1; seed <= 5 && !solved; ++seed)
        {
            ++tries;
            SimOptions o;
            o.topology = net.default_topology();
            o.mode = ExecMode::concurrent;
            o.workers = 2;
            o.seed = seed;
            const auto res = run_ring(net, 500.0, o);
            const auto d = decode_sudoku(res.recording);
            solved = validate_grid(d.grid, spec.givens).valid;
        }
        const double s = seconds_since(t0);
        const bool ok = solved && s < 300.0;
        all = all && ok;
        detail += fmt("%spuzzle %zu %s after %d seed(s) in %.1f s", p ? "; " : "", p + 1, solved ? "solved" : "unsolved",
                      tries, s);
    }
    return {all, detail};
}

Outcome microcircuit_generator()
{
    const auto t0 = Clock::now();
    const auto spec = load_microcircuit(config_dir / "microcircuit.json");
    const auto fan = microcircuit_fanouts(spec, 1.0, 1);
    const double mean = std::accumulate(fan.begin(), fan.end(), 0.0) / static_cast<double>(fan.size());
    const auto max = *std::max_element(fan.begin(), fan.end());
    auto total = [&](double scale) {
        const auto sizes = scaled_sizes(spec, scale);
        return std::accumulate(sizes.begin(), sizes.end(), std::uint64_t{0});
    };
    const auto n1 = total(1.0), n2 = total(0.5), n4 = total(0.25);
    const bool ok = std::abs(mean - 3873.0) <= 0.02 * 3873.0 && max <= 6749.0 * 1.05 && n1 == 77169 && n2 == 38586 &&
                    n4 == 19292;
    return {ok, fmt("mean fanout %.1f (target 3873 +/- 2%%), max %u (limit %.0f), sizes %llu/%llu/%llu, %.1f s", mean, max,
                    6749.0 * 1.05, static_cast<unsigned long long>(n1), static_cast<unsigned long long>(n2),
                    static_cast<unsigned long long>(n4), seconds_since(t0))};
}

Outcome microcircuit_dynamics()
{
    const auto t0 = Clock::now();
    const auto spec = load_microcircuit(config_dir / "microcircuit.json");
    const auto net = gen_microcircuit(spec, 1.0 / 16.0, 1);
    const auto oracle = oracle_run(net, 1000.0, 7);
    SimOptions o;
    o.topology = net.default_topology();
    o.mode = ExecMode::concurrent;
    o.workers = 4;
    o.canonical = false;
    o.seed = 7;
    const auto ring = run_ring(net, 1000.0, o);
    const auto report = compare(oracle, ring.recording, net);
    const double s = seconds_since(t0);
    const bool ok = report.max_rate_rel_delta() < 0.05 && report.max_cv_delta() < 0.1 &&
                    report.max_corr_delta() < 0.02 && s < 900.0;
    return {ok, fmt("%u neurons, %zu edges, %zu vs %zu spikes, max rate rel diff %.4f, CV diff %.4f, corr diff %.4f, "
                    "exact %s, %.1f s",
                    net.neuron_count, net.edges.size(), oracle.events.size(), ring.recording.events.size(),
                    report.max_rate_rel_delta(), report.max_cv_delta(), report.max_corr_delta(),
                    report.exact_match ? "yes" : "no", s)};
}

Outcome lif_accuracy()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int n = 0; n < 10000; ++n)
    {
        LifParams p;
        p.tau_m = 5.0 + 25.0 * u(rng);
        p.tau_syn = n % 10 == 0 ? p.tau_m : 0.5 + 9.5 * u(rng);
        p.v_th = 0.0;
        p.v_reset = -70.0;
        p.i_dc = 500.0 * u(rng);
        p = LifParams::from_capacitance(100.0 + 400.0 * u(rng), p);
        const double v = -80.0 + 40.0 * u(rng);
        const double i = -500.0 + 1000.0 * u(rng);
        const auto r = lif_step(NeuronState{v, i, 0}, p, 0.0);
        worst = std::max(worst, std::abs(r.state.v - testing::euler_v(v, i, p, 1000)));
    }
    const double s = seconds_since(t0);
    return {worst < 1e-4 && s < 60.0, fmt("10^4 draws, max |dV| %.3g mV (limit 1e-4), %.2f s", worst, s)};
}

struct Criterion
{
    int id;
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> all{
        {1, "codec round-trip", codec_round_trip},
        {2, "oracle equivalence", oracle_equivalence},
        {3, "20-core heavy load", heavy_ring},
        {4, "delay line vs dense oracle", delay_line},
        {5, "sudoku", sudoku},
        {6, "microcircuit generator", microcircuit_generator},
        {7, "microcircuit dynamics", microcircuit_dynamics},
        {8, "LIF vs fine Euler", lif_accuracy},
    };
    std::set<int> selected;
    for (int k = 1; k < argc; ++k)
        selected.insert(std::atoi(argv[k]));

    int failed = 0;
    for (const auto& c : all)
    {
        if (!selected.empty() && !selected.count(c.id))
            continue;
        Outcome o;
        try
        {
            o = c.run();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
