#include "neuroring/workloads.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "neuroring/packet.hpp"
#include "neuroring/rng.hpp"

namespace neuroring
{

using json = nlohmann::json;

void MicrocircuitSpec::validate() const
{
    if (populations.empty())
        throw WorkloadError("microcircuit needs at least one population");
    if (!(dt > 0.0))
        throw WorkloadError("dt must be positive");
    if (cores == 0)
        throw WorkloadError("cores must be positive");
    for (const auto& pop : populations)
    {
        if (pop.targets.size() != populations.size())
            throw WorkloadError("population " + pop.name + ": projection table has the wrong length");
        for (std::size_t t = 0; t < pop.targets.size(); ++t)
        {
            const auto& pr = pop.targets[t];
            if (!(pr.probability >= 0.0 && pr.probability <= 1.0))
                throw WorkloadError("population " + pop.name + ": probability to " + populations[t].name +
                                    " outside [0, 1]");
            if (pr.weight_sd < 0.0 || pr.delay_sd < 0.0)
                throw WorkloadError("population " + pop.name + ": negative standard deviation");
        }
        if (pop.rate_hz < 0.0)
            throw WorkloadError("population " + pop.name + ": negative rate");
        if (pop.rate_hz == 0.0)
        {
            auto p = pop.params;
            p.dt = dt;
            try
            {
                p.validate();
            }
            catch (const std::invalid_argument& e)
            {
                throw WorkloadError("population " + pop.name + ": " + e.what());
            }
        }
    }
}

std::uint64_t MicrocircuitSpec::full_size() const
{
    std::uint64_t n = 0;
    for (const auto& p : populations)
        n += p.size;
    return n;
}

void SudokuSpec::validate() const
{
    if (neurons_per_digit == 0)
        throw WorkloadError("neurons_per_digit must be positive");
    if (!(dt > 0.0) || !(delay_ms > 0.0))
        throw WorkloadError("dt and delay must be positive");
    const auto d = std::lround(delay_ms / dt);
    if (d < 1 || d > 64)
        throw WorkloadError("delay must quantize to 1..64 steps");
    auto p = params;
    p.dt = dt;
    try
    {
        p.validate();
    }
    catch (const std::invalid_argument& e)
    {
        throw WorkloadError(std::string("sudoku neuron parameters: ") + e.what());
    }
    for (auto g : givens)
        if (g > 9)
            throw WorkloadError("given digits must be 0..9");
    const auto check = validate_grid(givens);
    for (const auto& v : check.violations)
        if (v.find("appears") != std::string::npos)
            throw WorkloadError("inconsistent givens: " + v);
}

namespace
{

LifParams read_neuron(const json& j, LifParams base, double& c_m)
{
    if (j.is_null())
        return base;
    c_m = j.value("C_m", c_m);
    base.tau_m = j.value("tau_m", base.tau_m);
    base.tau_syn = j.value("tau_syn", base.tau_syn);
    base.t_ref = j.value("t_ref", base.t_ref);
    base.e_l = j.value("E_L", base.e_l);
    base.v_th = j.value("V_th", base.v_th);
    base.v_reset = j.value("V_reset", base.v_reset);
    base.i_dc = j.value("I_e", base.i_dc);
    return base;
}

void read_v_init(const json& j, double& lo, double& hi)
{
    if (!j.contains("v_init_mV"))
        return;
    const auto& v = j.at("v_init_mV");
    if (v.is_number())
        lo = hi = v.get<double>();
    else
    {
        lo = v.at(0).get<double>();
        hi = v.at(1).get<double>();
    }
    if (hi < lo)
        throw WorkloadError("v_init_mV range is reversed");
}

json parse_json(const std::string& text)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::exception& e)
    {
        throw WorkloadError(std::string("config is not valid JSON: ") + e.what());
    }
}

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw WorkloadError("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

MicrocircuitSpec parse_microcircuit(const std::string& json_text)
{
    const auto j = parse_json(json_text);
    MicrocircuitSpec spec;
    try
    {
        spec.dt = j.value("dt_ms", spec.dt);
        spec.cores = j.value("cores", spec.cores);
        const auto rule = j.value("connection_rule", std::string("fixed_total_number"));
        if (rule == "fixed_total_number")
            spec.rule = ConnectionRule::fixed_total_number;
        else if (rule == "pairwise_bernoulli")
            spec.rule = ConnectionRule::pairwise_bernoulli;
        else
            throw WorkloadError("unknown connection_rule '" + rule + "'");

        double c_m = 250.0;
        const auto base = read_neuron(j.value("neuron", json()), LifParams{}, c_m);
        double lo = -65.0, hi = -65.0;
        read_v_init(j, lo, hi);

        const auto& pops = j.at("populations");
        std::vector<std::string> names;
        for (const auto& pj : pops)
            names.push_back(pj.at("name").get<std::string>());

        for (const auto& pj : pops)
        {
            PopulationSpec ps;
            ps.name = pj.at("name").get<std::string>();
            const auto size = pj.at("size").get<std::int64_t>();
            if (size < 0 || size > 0xFFFFFFFFll)
                throw WorkloadError("population " + ps.name + ": size out of range");
            ps.size = static_cast<std::uint32_t>(size);
            double pop_c_m = c_m;
            ps.params = read_neuron(pj.value("neuron", json()), base, pop_c_m);
            ps.params.i_dc = pj.value("dc_pA", ps.params.i_dc);
            ps.params.dt = spec.dt;
            ps.params = LifParams::from_capacitance(pop_c_m, ps.params);
            ps.rate_hz = pj.value("rate_hz", 0.0);
            ps.v_init_lo = lo;
            ps.v_init_hi = hi;
            read_v_init(pj, ps.v_init_lo, ps.v_init_hi);
            ps.targets.assign(names.size(), Projection{});
            if (pj.contains("targets"))
            {
                for (const auto& [target, tj] : pj.at("targets").items())
                {
                    const auto it = std::find(names.begin(), names.end(), target);
                    if (it == names.end())
                        throw WorkloadError("population " + ps.name + ": unknown target " + target);
                    auto& pr = ps.targets[static_cast<std::size_t>(it - names.begin())];
                    pr.probability = tj.value("p", 0.0);
                    pr.weight_mean = tj.value("w_mean", 0.0);
                    pr.weight_sd = tj.value("w_sd", 0.0);
                    pr.delay_mean = tj.value("d_mean", 1.0);
                    pr.delay_sd = tj.value("d_sd", 0.0);
                }
            }
            spec.populations.push_back(std::move(ps));
        }
    }
    catch (const json::exception& e)
    {
        throw WorkloadError(std::string("microcircuit config: ") + e.what());
    }
    spec.validate();
    return spec;
}

MicrocircuitSpec load_microcircuit(const std::filesystem::path& path)
{
    return parse_microcircuit(slurp(path));
}

SudokuSpec parse_sudoku(const std::string& json_text)
{
    const auto j = parse_json(json_text);
    SudokuSpec spec;
    try
    {
        spec.dt = j.value("dt_ms", spec.dt);
        spec.cores = j.value("cores", spec.cores);
        spec.neurons_per_digit = j.value("neurons_per_digit", spec.neurons_per_digit);
        spec.stimulus_rate_hz = j.value("stimulus_rate_hz", spec.stimulus_rate_hz);
        spec.noise_rate_hz = j.value("noise_rate_hz", spec.noise_rate_hz);
        spec.inhibitory_weight = j.value("inhibitory_weight_pA", spec.inhibitory_weight);
        spec.stimulus_weight = j.value("stimulus_weight_pA", spec.stimulus_weight);
        spec.delay_ms = j.value("delay_ms", spec.delay_ms);
        double c_m = 250.0;
        spec.params = read_neuron(j.value("neuron", json()), spec.params, c_m);
        spec.params.dt = spec.dt;
        spec.params = LifParams::from_capacitance(c_m, spec.params);
        read_v_init(j, spec.v_init_lo, spec.v_init_hi);
        if (j.contains("puzzle"))
            spec.givens = parse_puzzle(j.at("puzzle").get<std::string>());
    }
    catch (const json::exception& e)
    {
        throw WorkloadError(std::string("sudoku config: ") + e.what());
    }
    spec.validate();
    return spec;
}

SudokuSpec load_sudoku(const std::filesystem::path& path)
{
    return parse_sudoku(slurp(path));
}

std::vector<std::uint32_t> scaled_sizes(const MicrocircuitSpec& spec, double scale)
{
    if (!(scale > 0.0 && scale <= 1.0))
        throw WorkloadError("scale must lie in (0, 1]");
    std::vector<std::uint32_t> sizes;
    std::string empty;
    for (const auto& p : spec.populations)
    {
        const auto n = static_cast<std::uint32_t>(std::nearbyint(static_cast<double>(p.size) * scale));
        if (n == 0)
            empty += (empty.empty() ? "" : ", ") + p.name;
        sizes.push_back(n);
    }
    if (!empty.empty())
        throw WorkloadError("scale " + std::to_string(scale) + " empties population(s): " + empty);
    return sizes;
}

namespace
{

// Number of outgoing synapses of every source neuron towards every target
// population, drawn before any individual synapse.
struct CircuitPlan
{
    std::vector<std::uint32_t> sizes;
    std::vector<std::uint32_t> firsts;
    // counts[s][t][i]: synapses from neuron i of population s onto population t
    std::vector<std::vector<std::vector<std::uint32_t>>> counts;
    std::uint32_t total = 0;
};

std::uint32_t pair_stream_id(std::size_t s, std::size_t t)
{
    return 0x80000000u | static_cast<std::uint32_t>(s << 12 | t);
}

std::uint64_t total_number(double p, std::uint64_t n_pre, std::uint64_t n_post)
{
    const double pairs = static_cast<double>(n_pre) * static_cast<double>(n_post);
    if (p >= 1.0)
        return n_pre * n_post;
    return static_cast<std::uint64_t>(std::llround(std::log1p(-p) / std::log1p(-1.0 / pairs)));
}

CircuitPlan plan_circuit(const MicrocircuitSpec& spec, double scale, std::uint64_t seed)
{
    spec.validate();
    CircuitPlan plan;
    plan.sizes = scaled_sizes(spec, scale);
    const auto np = plan.sizes.size();
    std::uint64_t total = 0;
    for (auto n : plan.sizes)
    {
        plan.firsts.push_back(static_cast<std::uint32_t>(total));
        total += n;
    }
    if (total > max_dst + 1ull)
        throw WorkloadError("scaled circuit exceeds the packet address space");
    plan.total = static_cast<std::uint32_t>(total);

    plan.counts.assign(np, std::vector<std::vector<std::uint32_t>>(np));
    for (std::size_t s = 0; s < np; ++s)
    {
        for (std::size_t t = 0; t < np; ++t)
        {
            const auto& pr = spec.populations[s].targets[t];
            const std::uint64_t n_pre = plan.sizes[s];
            const std::uint64_t n_post = plan.sizes[t];
            auto& c = plan.counts[s][t];
            c.assign(n_pre, 0);
            if (pr.probability <= 0.0)
                continue;
            PhiloxEngine eng(seed, Stream::generator, pair_stream_id(s, t));
            if (spec.rule == ConnectionRule::pairwise_bernoulli)
            {
                std::binomial_distribution<std::int64_t> draw(static_cast<std::int64_t>(n_post), pr.probability);
                for (auto& x : c)
                    x = static_cast<std::uint32_t>(draw(eng));
                continue;
            }
            auto remaining = static_cast<std::int64_t>(total_number(pr.probability, n_pre, n_post));
            for (std::uint64_t i = 0; i < n_pre && remaining > 0; ++i)
            {
                const std::uint64_t left = n_pre - i;
                std::int64_t k = remaining;
                if (left > 1)
                {
                    std::binomial_distribution<std::int64_t> draw(remaining, 1.0 / static_cast<double>(left));
                    k = draw(eng);
                }
                c[i] = static_cast<std::uint32_t>(k);
                remaining -= k;
            }
        }
    }
    return plan;
}

float draw_weight(const Projection& pr, std::normal_distribution<double>& unit, PhiloxEngine& eng)
{
    if (pr.weight_sd == 0.0)
        return static_cast<float>(pr.weight_mean);
    for (int attempt = 0; attempt < 100; ++attempt)
    {
        const double w = pr.weight_mean + pr.weight_sd * unit(eng);
        if (pr.weight_mean == 0.0 || (w > 0.0) == (pr.weight_mean > 0.0))
            return static_cast<float>(w);
    }
    return 0.0f;
}

std::uint32_t draw_delay(const Projection& pr, double dt, std::normal_distribution<double>& unit, PhiloxEngine& eng)
{
    const double d = pr.delay_sd == 0.0 ? pr.delay_mean : pr.delay_mean + pr.delay_sd * unit(eng);
    const double steps = std::round(d / dt);
    return static_cast<std::uint32_t>(std::clamp(steps, double{min_delay_steps}, double{max_delay_steps}));
}

void stream_edges(const MicrocircuitSpec& spec, const CircuitPlan& plan, std::uint64_t seed,
                  const std::function<void(const SynapseEdge&)>& sink)
{
    const auto np = plan.sizes.size();
    std::unordered_set<std::uint32_t> chosen;
    std::vector<std::uint32_t> targets;
    for (std::size_t s = 0; s < np; ++s)
    {
        for (std::uint32_t i = 0; i < plan.sizes[s]; ++i)
        {
            const auto src = plan.firsts[s] + i;
            PhiloxEngine eng(seed, Stream::generator, src);
            std::normal_distribution<double> unit(0.0, 1.0);
            for (std::size_t t = 0; t < np; ++t)
            {
                const auto k = plan.counts[s][t][i];
                if (k == 0)
                    continue;
                const auto n_post = plan.sizes[t];
                targets.clear();
                if (spec.rule == ConnectionRule::pairwise_bernoulli)
                {
                    // Floyd's sampling of k distinct targets
                    chosen.clear();
                    for (std::uint32_t j = n_post - k; j < n_post; ++j)
                    {
                        std::uniform_int_distribution<std::uint32_t> pick(0, j);
                        const auto r = pick(eng);
                        chosen.insert(chosen.count(r) ? j : r);
                    }
                    targets.assign(chosen.begin(), chosen.end());
                    std::sort(targets.begin(), targets.end());
                }
                else
                {
                    std::uniform_int_distribution<std::uint32_t> pick(0, n_post - 1);
                    for (std::uint32_t j = 0; j < k; ++j)
                        targets.push_back(pick(eng));
                }
                const auto& pr = spec.populations[s].targets[t];
                for (auto tgt : targets)
                {
                    const auto w = draw_weight(pr, unit, eng);
                    const auto d = draw_delay(pr, spec.dt, unit, eng);
                    sink(SynapseEdge{src, plan.firsts[t] + tgt, d, w});
                }
            }
        }
    }
}

} // namespace

std::vector<std::uint32_t> microcircuit_fanouts(const MicrocircuitSpec& spec, double scale, std::uint64_t seed)
{
    const auto plan = plan_circuit(spec, scale, seed);
    std::vector<std::uint32_t> out(plan.total, 0);
    for (std::size_t s = 0; s < plan.sizes.size(); ++s)
        for (const auto& c : plan.counts[s])
            for (std::uint32_t i = 0; i < plan.sizes[s]; ++i)
                out[plan.firsts[s] + i] += c[i];
    return out;
}

void generate_microcircuit_edges(const MicrocircuitSpec& spec, double scale, std::uint64_t seed,
                                 const std::function<void(const SynapseEdge&)>& sink)
{
    stream_edges(spec, plan_circuit(spec, scale, seed), seed, sink);
}

Network microcircuit_skeleton(const MicrocircuitSpec& spec, double scale)
{
    spec.validate();
    const auto sizes = scaled_sizes(spec, scale);
    Network net;
    net.dt = spec.dt;
    std::uint32_t first = 0;
    for (std::size_t p = 0; p < sizes.size(); ++p)
    {
        const auto& ps = spec.populations[p];
        Population pop;
        pop.name = ps.name;
        pop.first = first;
        pop.size = sizes[p];
        pop.v_init_lo = ps.v_init_lo;
        pop.v_init_hi = ps.v_init_hi;
        if (ps.rate_hz > 0.0)
        {
            pop.kind = NeuronKind::poisson;
            pop.rate_hz = ps.rate_hz;
        }
        else
        {
            pop.kind = NeuronKind::lif;
            pop.param_index = static_cast<std::uint32_t>(net.params.size());
            auto params = ps.params;
            params.dt = spec.dt;
            net.params.push_back(params);
        }
        net.populations.push_back(pop);
        first += sizes[p];
    }
    net.neuron_count = first;
    net.core_count = std::min(spec.cores, std::max(first, 1u));
    net.core_capacity = (first + net.core_count - 1) / net.core_count;
    return net;
}

Network gen_microcircuit(const MicrocircuitSpec& spec, double scale, std::uint64_t seed)
{
    auto net = microcircuit_skeleton(spec, scale);
    const auto plan = plan_circuit(spec, scale, seed);
    std::uint64_t n_edges = 0;
    for (const auto& per_source : plan.counts)
        for (const auto& c : per_source)
            for (auto k : c)
                n_edges += k;
    net.edges.reserve(n_edges);
    stream_edges(spec, plan, seed, [&](const SynapseEdge& e) { net.edges.push_back(e); });
    return net;
}

std::uint64_t save_microcircuit(const MicrocircuitSpec& spec, double scale, std::uint64_t seed,
                                const std::filesystem::path& path)
{
    const auto net = microcircuit_skeleton(spec, scale);
    const auto plan = plan_circuit(spec, scale, seed);
    std::uint64_t n_edges = 0;
    for (const auto& per_source : plan.counts)
        for (const auto& c : per_source)
            for (auto k : c)
                n_edges += k;
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw WorkloadError("cannot write " + path.string());
    write_network_header(net, n_edges, out);
    std::uint64_t written = 0;
    stream_edges(spec, plan, seed, [&](const SynapseEdge& e) {
        write_edge(e, out);
        ++written;
    });
    if (!out || written != n_edges)
        throw WorkloadError("failed writing " + path.string());
    return n_edges;
}

namespace
{

bool same_unit(std::uint32_t a, std::uint32_t b)
{
    const auto ra = a / 9, ca = a % 9, rb = b / 9, cb = b % 9;
    return ra == rb || ca == cb || (ra / 3 == rb / 3 && ca / 3 == cb / 3);
}

} // namespace

Network gen_sudoku(const SudokuSpec& spec)
{
    spec.validate();
    const auto npd = spec.neurons_per_digit;
    const std::uint32_t n_digit = 81 * 9 * npd;
    std::uint32_t n_given = 0;
    for (auto g : spec.givens)
        n_given += g != 0;

    Network net;
    net.dt = spec.dt;
    auto params = spec.params;
    params.dt = spec.dt;
    net.params.push_back(params);

    Population digits;
    digits.name = "digits";
    digits.first = 0;
    digits.size = n_digit;
    digits.v_init_lo = spec.v_init_lo;
    digits.v_init_hi = spec.v_init_hi;
    net.populations.push_back(digits);

    Population noise;
    noise.name = "noise";
    noise.first = n_digit;
    noise.size = n_digit;
    noise.kind = NeuronKind::poisson;
    noise.rate_hz = spec.noise_rate_hz;
    net.populations.push_back(noise);

    const std::uint32_t stim_first = 2 * n_digit;
    if (n_given > 0)
    {
        Population stim;
        stim.name = "stimulus";
        stim.first = stim_first;
        stim.size = n_given * npd;
        stim.kind = NeuronKind::poisson;
        stim.rate_hz = spec.stimulus_rate_hz;
        net.populations.push_back(stim);
    }
    net.neuron_count = stim_first + n_given * npd;
    net.core_count = spec.cores;
    net.core_capacity = (net.neuron_count + spec.cores - 1) / spec.cores;

    const auto delay = static_cast<std::uint32_t>(std::lround(spec.delay_ms / spec.dt));
    const auto w_inh = static_cast<float>(spec.inhibitory_weight);
    const auto w_exc = static_cast<float>(spec.stimulus_weight);

    // Population (cell, digit) inhibits every population it excludes.
    for (std::uint32_t cell = 0; cell < 81; ++cell)
    {
        for (std::uint32_t d = 1; d <= 9; ++d)
        {
            for (std::uint32_t k = 0; k < npd; ++k)
            {
                const auto src = sudoku_neuron(cell / 9, cell % 9, d, k, npd);
                for (std::uint32_t cell2 = 0; cell2 < 81; ++cell2)
                {
                    for (std::uint32_t d2 = 1; d2 <= 9; ++d2)
                    {
                        const bool conflict = (cell2 == cell && d2 != d) || (cell2 != cell && d2 == d && same_unit(cell, cell2));
                        if (!conflict)
                            continue;
                        for (std::uint32_t k2 = 0; k2 < npd; ++k2)
                            net.edges.push_back({src, sudoku_neuron(cell2 / 9, cell2 % 9, d2, k2, npd), delay, w_inh});
                    }
                }
            }
        }
    }
    for (std::uint32_t i = 0; i < n_digit; ++i)
        net.edges.push_back({n_digit + i, i, delay, w_exc});
    std::uint32_t stim = stim_first;
    for (std::uint32_t cell = 0; cell < 81; ++cell)
    {
        const auto g = spec.givens[cell];
        if (g == 0)
            continue;
        for (std::uint32_t k = 0; k < npd; ++k)
            net.edges.push_back({stim++, sudoku_neuron(cell / 9, cell % 9, g, k, npd), delay, w_exc});
    }
    net.validate();
    return net;
}

Grid parse_puzzle(const std::string& text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s += c;
    if (s.size() != 81)
        throw WorkloadError("puzzle must have 81 cells, got " + std::to_string(s.size()));
    Grid g{};
    for (std::size_t i = 0; i < 81; ++i)
    {
        const char c = s[i];
        if (c == '.' || c == '0')
            g[i] = 0;
        else if (c >= '1' && c <= '9')
            g[i] = static_cast<std::uint8_t>(c - '0');
        else
            throw WorkloadError(std::string("invalid puzzle character '") + c + "' at position " +
                                std::to_string(i + 1));
    }
    return g;
}

std::string format_grid(const Grid& grid)
{
    std::string out;
    for (std::size_t r = 0; r < 9; ++r)
    {
        if (r == 3 || r == 6)
            out += "------+-------+------\n";
        for (std::size_t c = 0; c < 9; ++c)
        {
            if (c == 3 || c == 6)
                out += "| ";
            const auto v = grid[r * 9 + c];
            out += v == 0 ? '.' : static_cast<char>('0' + v);
            out += c == 8 ? '\n' : ' ';
        }
    }
    return out;
}

SudokuDecode decode_sudoku(const SpikeRecording& rec, double window_ms, std::uint32_t neurons_per_digit)
{
    SudokuDecode out;
    const std::uint32_t n_digit = 81 * 9 * neurons_per_digit;
    const auto window_steps = static_cast<std::uint64_t>(std::llround(window_ms / rec.dt));
    const auto from = rec.total_steps > window_steps ? rec.total_steps - window_steps : 0;
    std::vector<std::uint32_t> counts(81 * 9, 0);
    for (const auto& e : rec.events)
        if (e.step >= from && e.neuron < n_digit)
            ++counts[e.neuron / neurons_per_digit];
    for (std::uint32_t cell = 0; cell < 81; ++cell)
    {
        std::uint32_t best = 0;
        std::uint32_t best_count = 0;
        bool tie = true;
        for (std::uint32_t d = 0; d < 9; ++d)
        {
            const auto c = counts[cell * 9 + d];
            if (c > best_count)
            {
                best = d + 1;
                best_count = c;
                tie = false;
            }
            else if (c == best_count)
                tie = true;
        }
        if (tie || best_count == 0)
            ++out.undecided;
        else
            out.grid[cell] = static_cast<std::uint8_t>(best);
    }
    return out;
}

GridCheck validate_grid(const Grid& grid, const Grid& givens)
{
    GridCheck check;
    auto unit = [&](const std::string& label, auto cell_of) {
        std::array<int, 10> seen{};
        for (std::uint32_t i = 0; i < 9; ++i)
            ++seen[std::min<int>(grid[cell_of(i)], 9)];
        if (seen[0] > 0)
            check.violations.push_back(label + ": " + std::to_string(seen[0]) + " empty cell(s)");
        for (int d = 1; d <= 9; ++d)
            if (seen[d] > 1)
                check.violations.push_back(label + ": digit " + std::to_string(d) + " appears " +
                                           std::to_string(seen[d]) + " times");
    };
    for (std::uint32_t r = 0; r < 9; ++r)
        unit("row " + std::to_string(r + 1), [r](std::uint32_t i) { return r * 9 + i; });
    for (std::uint32_t c = 0; c < 9; ++c)
        unit("column " + std::to_string(c + 1), [c](std::uint32_t i) { return i * 9 + c; });
    for (std::uint32_t b = 0; b < 9; ++b)
        unit("box " + std::to_string(b + 1),
             [b](std::uint32_t i) { return (b / 3 * 3 + i / 3) * 9 + b % 3 * 3 + i % 3; });
    for (std::uint32_t i = 0; i < 81; ++i)
        if (givens[i] != 0 && grid[i] != givens[i])
            check.violations.push_back("cell r" + std::to_string(i / 9 + 1) + "c" + std::to_string(i % 9 + 1) +
                                       ": given " + std::to_string(givens[i]) + " became " +
                                       std::to_string(grid[i]));
    check.valid = check.violations.empty();
    return check;
}

GridCheck validate_grid(const Grid& grid)
{
    return validate_grid(grid, Grid{});
}

} // namespace neuroring
