#include "neuroring/recording.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "neuroring/le_io.hpp"

namespace neuroring
{

namespace
{

std::string join(const std::vector<std::uint64_t>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        if (i)
            out += ',';
        out += std::to_string(xs[i]);
    }
    return out;
}

std::string hex64(std::uint64_t v)
{
    std::ostringstream s;
    s << "0x" << std::hex << std::setw(16) << std::setfill('0') << v;
    return s.str();
}

std::string fmt_double(double v)
{
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

std::uint64_t parse_u64(const std::string& s, const char* key)
{
    std::uint64_t v = 0;
    const bool hex = s.rfind("0x", 0) == 0;
    const char* begin = s.data() + (hex ? 2 : 0);
    auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v, hex ? 16 : 10);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error(std::string("bad value for ") + key + ": '" + s + "'");
    return v;
}

} // namespace

void SpikeRecording::check_invariants() const
{
    for (std::size_t i = 0; i < events.size(); ++i)
    {
        if (events[i].neuron >= neuron_count)
            throw std::logic_error("recording references neuron " + std::to_string(events[i].neuron));
        if (i > 0 && events[i].step < events[i - 1].step)
            throw std::logic_error("recording timesteps decrease at event " + std::to_string(i));
    }
}

std::map<std::string, std::string> RunMetrics::as_key_values() const
{
    return {
        {"metrics.timesteps", std::to_string(timesteps)},
        {"metrics.total_spikes", std::to_string(total_spikes)},
        {"metrics.synaptic_events", std::to_string(synaptic_events)},
        {"metrics.expected_events", std::to_string(expected_events)},
        {"metrics.ring_hops", std::to_string(ring_hops)},
        {"metrics.token_hops", std::to_string(token_hops)},
        {"metrics.local_deliveries", std::to_string(local_deliveries)},
        {"metrics.inter_device_crossings", std::to_string(inter_device_crossings)},
        {"metrics.stalls", std::to_string(stalls)},
        {"metrics.router_micro_steps", std::to_string(router_micro_steps)},
        {"metrics.max_queue_occupancy", std::to_string(max_queue_occupancy)},
        {"metrics.max_packet_hops", std::to_string(max_packet_hops)},
        {"metrics.max_step_skew", std::to_string(max_step_skew)},
        {"metrics.right_edge_traffic", join(right_edge_traffic)},
        {"metrics.left_edge_traffic", join(left_edge_traffic)},
    };
}

void write_spikes_text(const SpikeRecording& rec, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    std::string buf;
    buf.reserve(1 << 16);
    for (const auto& e : rec.events)
    {
        buf += std::to_string(e.step);
        buf += '\t';
        buf += std::to_string(e.neuron);
        buf += '\n';
        if (buf.size() > (1 << 15))
        {
            out << buf;
            buf.clear();
        }
    }
    out << buf;
}

void write_spikes_binary(const SpikeRecording& rec, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    for (const auto& e : rec.events)
    {
        le::put_u32(out, e.step);
        le::put_u32(out, e.neuron);
    }
}

std::vector<SpikeEvent> read_spikes_binary(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::vector<SpikeEvent> out;
    while (in.peek() != std::char_traits<char>::eof())
    {
        SpikeEvent e;
        e.step = le::get_u32(in);
        e.neuron = le::get_u32(in);
        out.push_back(e);
    }
    return out;
}

void write_key_values(const std::map<std::string, std::string>& kv, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    for (const auto& [k, v] : kv)
        out << k << '=' << v << '\n';
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("malformed key-value line: " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

void write_sidecar(const SpikeRecording& rec, const RunMetadata& meta, const RunMetrics* metrics,
                   const std::filesystem::path& path)
{
    std::map<std::string, std::string> kv{
        {"seed", std::to_string(rec.seed)},
        {"config_hash", hex64(rec.config_hash)},
        {"total_steps", std::to_string(rec.total_steps)},
        {"neuron_count", std::to_string(rec.neuron_count)},
        {"dt_ms", fmt_double(rec.dt)},
        {"spike_count", std::to_string(rec.events.size())},
        {"run.mode", meta.mode},
        {"run.cores", std::to_string(meta.cores)},
        {"run.capacity", std::to_string(meta.capacity)},
        {"run.workers", std::to_string(meta.workers)},
        {"run.canonical", meta.canonical ? "true" : "false"},
        {"run.network", meta.network_path},
        {"run.t_bio_ms", fmt_double(meta.t_bio_ms)},
        {"run.kernel_isa", meta.kernel_isa},
    };
    if (metrics)
        kv.merge(metrics->as_key_values());
    write_key_values(kv, path);
}

SpikeRecording read_recording(const std::filesystem::path& spikes, const std::filesystem::path& sidecar)
{
    const auto kv = read_key_values(sidecar);
    auto get = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end())
            throw std::runtime_error(std::string("sidecar missing '") + key + "'");
        return it->second;
    };

    SpikeRecording rec;
    rec.seed = parse_u64(get("seed"), "seed");
    rec.config_hash = parse_u64(get("config_hash"), "config_hash");
    rec.total_steps = parse_u64(get("total_steps"), "total_steps");
    rec.neuron_count = static_cast<std::uint32_t>(parse_u64(get("neuron_count"), "neuron_count"));
    rec.dt = std::stod(get("dt_ms"));

    std::ifstream in(spikes);
    if (!in)
        throw std::runtime_error("cannot open " + spikes.string());
    std::string line;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("malformed spike line: " + line);
        rec.events.push_back({static_cast<std::uint32_t>(parse_u64(line.substr(0, tab), "step")),
                              static_cast<std::uint32_t>(parse_u64(line.substr(tab + 1), "neuron"))});
    }
    rec.check_invariants();
    return rec;
}

} // namespace neuroring
