#include "neuroring/network.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <streambuf>

#include "neuroring/le_io.hpp"
#include "neuroring/packet.hpp"

namespace neuroring
{

namespace
{

constexpr char magic[4] = {'N', 'R', 'N', 'W'};

class Fnv1aBuf : public std::streambuf
{
  public:
    std::uint64_t hash() const { return hash_; }

  protected:
    int_type overflow(int_type ch) override
    {
        if (ch != traits_type::eof())
            mix(static_cast<unsigned char>(ch));
        return ch;
    }
    std::streamsize xsputn(const char* s, std::streamsize n) override
    {
        for (std::streamsize i = 0; i < n; ++i)
            mix(static_cast<unsigned char>(s[i]));
        return n;
    }

  private:
    void mix(unsigned char b)
    {
        hash_ ^= b;
        hash_ *= 0x100000001B3ull;
    }
    std::uint64_t hash_ = 0xCBF29CE484222325ull;
};

} // namespace

void Network::validate() const
{
    if (!(dt > 0.0))
        throw std::invalid_argument("network dt must be positive");
    if (core_capacity < 1 || core_count < 1)
        throw std::invalid_argument("network core layout must be at least 1 x 1");
    if (neuron_count > max_dst + 1)
        throw std::invalid_argument("network exceeds the 22-bit neuron ID space");
    std::uint32_t next = 0;
    for (const auto& pop : populations)
    {
        if (pop.first != next)
            throw std::invalid_argument("population '" + pop.name + "' does not start where the previous one ends");
        next = pop.end();
        if (pop.kind == NeuronKind::lif)
        {
            if (pop.param_index >= params.size())
                throw std::invalid_argument("population '" + pop.name + "' references missing parameter set");
            if (pop.v_init_lo > pop.v_init_hi)
                throw std::invalid_argument("population '" + pop.name + "' has an empty initial-V interval");
        }
        else if (!(pop.rate_hz >= 0.0))
            throw std::invalid_argument("population '" + pop.name + "' has a negative rate");
    }
    if (next != neuron_count)
        throw std::invalid_argument("populations cover " + std::to_string(next) + " of " +
                                    std::to_string(neuron_count) + " neurons");
    for (const auto& p : params)
        p.validate();
    for (std::size_t i = 0; i < edges.size(); ++i)
    {
        const auto& e = edges[i];
        if (e.src >= neuron_count || e.dst >= neuron_count)
            throw std::invalid_argument("edge " + std::to_string(i) + " references a neuron outside the network");
    }
}

const Population& Network::population_of(std::uint32_t neuron) const
{
    auto it = std::upper_bound(populations.begin(), populations.end(), neuron,
                               [](std::uint32_t n, const Population& p) { return n < p.first; });
    if (it == populations.begin() || !std::prev(it)->contains(neuron))
        throw std::out_of_range("neuron " + std::to_string(neuron) + " belongs to no population");
    return *std::prev(it);
}

const Population* Network::find_population(const std::string& name) const
{
    for (const auto& p : populations)
        if (p.name == name)
            return &p;
    return nullptr;
}

TopologyConfig Network::default_topology() const
{
    TopologyConfig topo;
    topo.n_cores = core_count;
    topo.core_capacity = core_capacity;
    topo.dt = dt;
    return topo;
}

std::vector<std::uint32_t> Network::fanouts() const
{
    std::vector<std::uint32_t> out(neuron_count, 0);
    for (const auto& e : edges)
        ++out[e.src];
    return out;
}

std::uint64_t Network::content_hash() const
{
    Fnv1aBuf buf;
    std::ostream out(&buf);
    write_network(*this, out);
    return buf.hash();
}

void write_network_header(const Network& net, std::uint64_t n_edges, std::ostream& out)
{
    out.write(magic, sizeof(magic));
    le::put_u32(out, network_file_version);
    le::put_u32(out, net.neuron_count);
    le::put_u32(out, net.core_capacity);
    le::put_u32(out, net.core_count);
    le::put_f64(out, net.dt);
    le::put_u32(out, static_cast<std::uint32_t>(net.params.size()));
    le::put_u32(out, static_cast<std::uint32_t>(net.populations.size()));
    le::put_u64(out, n_edges);
    for (const auto& p : net.params)
    {
        for (double v : {p.tau_m, p.tau_syn, p.e_l, p.v_th, p.v_reset, p.r_m, p.i_dc, p.t_ref})
            le::put_f64(out, v);
    }
    for (const auto& pop : net.populations)
    {
        if (pop.name.size() > 0xFFFF)
            throw std::invalid_argument("population name too long");
        le::put_u16(out, static_cast<std::uint16_t>(pop.name.size()));
        out.write(pop.name.data(), static_cast<std::streamsize>(pop.name.size()));
        le::put_u32(out, pop.first);
        le::put_u32(out, pop.size);
        le::put_u8(out, static_cast<std::uint8_t>(pop.kind));
        le::put_u32(out, pop.param_index);
        le::put_f64(out, pop.rate_hz);
        le::put_f64(out, pop.v_init_lo);
        le::put_f64(out, pop.v_init_hi);
    }
}

void write_edge(const SynapseEdge& e, std::ostream& out)
{
    le::put_u64(out, encode(SynapsePacket::data(e.weight, e.dst, e.delay)));
    le::put_u32(out, e.src);
}

void write_network(const Network& net, std::ostream& out)
{
    write_network_header(net, net.edges.size(), out);
    for (const auto& e : net.edges)
        write_edge(e, out);
    if (!out)
        throw std::runtime_error("failed writing network");
}

Network read_network(std::istream& in)
{
    char head[4];
    if (!in.read(head, sizeof(head)) || !std::equal(head, head + 4, magic))
        throw std::runtime_error("not a network file (bad magic)");
    const auto version = le::get_u32(in);
    if (version != network_file_version)
        throw std::runtime_error("unsupported network file version " + std::to_string(version));

    Network net;
    net.neuron_count = le::get_u32(in);
    net.core_capacity = le::get_u32(in);
    net.core_count = le::get_u32(in);
    net.dt = le::get_f64(in);
    const auto n_params = le::get_u32(in);
    const auto n_pops = le::get_u32(in);
    const auto n_edges = le::get_u64(in);

    net.params.resize(n_params);
    for (auto& p : net.params)
    {
        p.tau_m = le::get_f64(in);
        p.tau_syn = le::get_f64(in);
        p.e_l = le::get_f64(in);
        p.v_th = le::get_f64(in);
        p.v_reset = le::get_f64(in);
        p.r_m = le::get_f64(in);
        p.i_dc = le::get_f64(in);
        p.t_ref = le::get_f64(in);
        p.dt = net.dt;
    }
    net.populations.resize(n_pops);
    for (auto& pop : net.populations)
    {
        pop.name.resize(le::get_u16(in));
        if (!in.read(pop.name.data(), static_cast<std::streamsize>(pop.name.size())))
            throw std::runtime_error("unexpected end of file");
        pop.first = le::get_u32(in);
        pop.size = le::get_u32(in);
        const auto kind = le::get_u8(in);
        if (kind > 1)
            throw std::runtime_error("unknown neuron kind " + std::to_string(kind));
        pop.kind = static_cast<NeuronKind>(kind);
        pop.param_index = le::get_u32(in);
        pop.rate_hz = le::get_f64(in);
        pop.v_init_lo = le::get_f64(in);
        pop.v_init_hi = le::get_f64(in);
    }
    net.edges.resize(n_edges);
    for (auto& e : net.edges)
    {
        const auto p = decode(le::get_u64(in));
        if (p.sync() != SyncClass::data)
            throw std::runtime_error("network edge record is not a data packet");
        e.weight = p.weight();
        e.dst = p.dst();
        e.delay = p.delay();
        e.src = le::get_u32(in);
    }
    net.validate();
    return net;
}

void save_network(const Network& net, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_network(net, out);
}

Network load_network(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open network file " + path.string());
    return read_network(in);
}

} // namespace neuroring
