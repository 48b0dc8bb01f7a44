#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "neuroring/kernels.hpp"
#include "neuroring/network.hpp"
#include "neuroring/oracle.hpp"
#include "neuroring/recording.hpp"
#include "neuroring/simulator.hpp"
#include "neuroring/stats.hpp"
#include "neuroring/workloads.hpp"

namespace fs = std::filesystem;
using namespace neuroring;

namespace
{

enum Exit
{
    exit_ok = 0,
    exit_usage = 1,
    exit_fault = 2,
    exit_invalid = 3,
};

// Config and usage errors map to exit 1, everything else thrown is a runtime fault.
class UsageError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

fs::path default_out_dir()
{
    if (const char* env = std::getenv("NEURORING_OUT_DIR"); env && *env)
        return env;
    return "out";
}

void require_file(const fs::path& p, const char* what)
{
    if (!fs::is_regular_file(p))
        throw UsageError(std::string(what) + " not found: " + p.string());
}

struct GenArgs
{
    std::string config;
    std::string kind;
    double scale = 1.0;
    std::string puzzle;
    std::uint64_t seed = 1;
    std::string out;
};

struct RunArgs
{
    std::string network;
    std::string mode = "ring";
    std::string exec = "deterministic";
    std::optional<std::uint32_t> cores;
    std::optional<std::uint32_t> capacity;
    std::uint32_t workers = 1;
    std::uint64_t seed = 1;
    double t_bio_ms = 1000.0;
    bool canonical = true;
    std::uint32_t queue = 1024;
    std::vector<std::uint32_t> device_boundaries;
    std::string out;
};

struct ValidateArgs
{
    std::string reference;
    std::string candidate;
    std::string network;
    double bin_ms = 2.0;
    std::uint32_t pairs = 1000;
    std::uint64_t seed = 12345;
    bool require_exact = false;
    std::string out;
};

struct SudokuCheckArgs
{
    std::string run;
    std::string puzzle;
    double window_ms = 100.0;
};

std::string kind_of(const fs::path& config)
{
    std::ifstream in(config);
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded())
        throw UsageError("config is not valid JSON: " + config.string());
    return j.value("kind", std::string());
}

void print_fanout_summary(std::uint32_t neurons, const std::vector<std::uint32_t>& fanouts)
{
    std::uint64_t edges = 0;
    std::uint32_t max = 0;
    for (auto f : fanouts)
    {
        edges += f;
        max = std::max(max, f);
    }
    std::cout << "neurons      " << neurons << '\n'
              << "edges        " << edges << '\n'
              << "fanout mean  " << (neurons ? static_cast<double>(edges) / neurons : 0.0) << '\n'
              << "fanout max   " << max << '\n';
}

int cmd_gen(const GenArgs& a)
{
    require_file(a.config, "config");
    const auto kind = a.kind.empty() ? kind_of(a.config) : a.kind;
    fs::path out = a.out.empty() ? default_out_dir() / (kind + ".nrn") : fs::path(a.out);
    if (out.has_parent_path())
        fs::create_directories(out.parent_path());

    if (kind == "microcircuit")
    {
        const auto spec = load_microcircuit(a.config);
        const auto fanouts = microcircuit_fanouts(spec, a.scale, a.seed);
        save_microcircuit(spec, a.scale, a.seed, out);
        const auto skel = microcircuit_skeleton(spec, a.scale);
        std::cout << "kind         microcircuit (scale " << a.scale << ", seed " << a.seed << ")\n";
        for (const auto& p : skel.populations)
            std::cout << "  " << p.name << ' ' << p.size << '\n';
        print_fanout_summary(skel.neuron_count, fanouts);
    }
    else if (kind == "sudoku")
    {
        auto spec = load_sudoku(a.config);
        if (!a.puzzle.empty())
        {
            spec.givens = parse_puzzle(a.puzzle);
            spec.validate();
        }
        const auto net = gen_sudoku(spec);
        save_network(net, out);
        std::cout << "kind         sudoku\n"
                  << "puzzle       ";
        for (auto g : spec.givens)
            std::cout << static_cast<char>(g ? '0' + g : '.');
        std::cout << '\n';
        print_fanout_summary(net.neuron_count, net.fanouts());
    }
    else
    {
        throw UsageError("unknown network kind '" + kind + "' (expected microcircuit or sudoku)");
    }
    std::cout << "written      " << out.string() << '\n';
    return exit_ok;
}

int cmd_run(const RunArgs& a)
{
    require_file(a.network, "network file");
    if (a.mode != "ring" && a.mode != "oracle")
        throw UsageError("--mode must be ring or oracle");
    if (a.exec != "deterministic" && a.exec != "concurrent")
        throw UsageError("--exec must be deterministic or concurrent");

    const auto net = load_network(a.network);
    auto topo = net.default_topology();
    if (a.cores)
        topo.n_cores = *a.cores;
    if (a.capacity)
        topo.core_capacity = *a.capacity;
    else if (a.cores)
        topo.core_capacity = (net.neuron_count + topo.n_cores - 1) / std::max(topo.n_cores, 1u);
    topo.device_boundaries.insert(a.device_boundaries.begin(), a.device_boundaries.end());
    try
    {
        topo.validate();
    }
    catch (const std::invalid_argument& e)
    {
        throw UsageError(e.what());
    }
    if (topo.neuron_slots() < net.neuron_count)
        throw UsageError(std::to_string(topo.n_cores) + " cores x " + std::to_string(topo.core_capacity) +
                         " slots cannot hold " + std::to_string(net.neuron_count) + " neurons");

    const fs::path out = a.out.empty() ? default_out_dir() / "run" : fs::path(a.out);
    fs::create_directories(out);

    RunMetadata meta;
    meta.mode = a.mode == "oracle" ? "oracle" : "ring-" + a.exec;
    meta.cores = topo.n_cores;
    meta.capacity = topo.core_capacity;
    meta.workers = a.exec == "concurrent" ? a.workers : 1;
    meta.canonical = a.canonical;
    meta.network_path = fs::absolute(a.network).string();
    meta.t_bio_ms = a.t_bio_ms;
    meta.kernel_isa = std::string(kernels::isa_name(kernels::active_isa()));

    std::cout << "mode         " << meta.mode << '\n'
              << "network      " << meta.network_path << '\n'
              << "neurons      " << net.neuron_count << '\n'
              << "cores        " << topo.n_cores << " x " << topo.core_capacity << '\n'
              << "workers      " << meta.workers << '\n'
              << "canonical    " << (a.canonical ? "yes" : "no") << '\n'
              << "seed         " << a.seed << '\n'
              << "t_bio_ms     " << a.t_bio_ms << '\n'
              << "kernel       " << meta.kernel_isa << '\n';

    SpikeRecording rec;
    std::optional<RunMetrics> metrics;
    if (a.mode == "oracle")
    {
        rec = oracle_run(net, a.t_bio_ms, a.seed, topo);
    }
    else
    {
        SimOptions opts;
        opts.topology = topo;
        opts.mode = a.exec == "concurrent" ? ExecMode::concurrent : ExecMode::deterministic;
        opts.workers = meta.workers;
        opts.canonical = a.canonical;
        opts.seed = a.seed;
        opts.queue_capacity = a.queue;
        auto result = run_ring(net, a.t_bio_ms, opts);
        rec = std::move(result.recording);
        metrics = result.metrics;
    }

    write_spikes_text(rec, out / "spikes.txt");
    write_spikes_binary(rec, out / "spikes.bin");
    write_sidecar(rec, meta, metrics ? &*metrics : nullptr, out / "run.txt");

    std::cout << "steps        " << rec.total_steps << '\n' << "spikes       " << rec.events.size() << '\n';
    if (metrics)
        std::cout << "syn events   " << metrics->synaptic_events << '\n'
                  << "ring hops    " << metrics->ring_hops << '\n'
                  << "stalls       " << metrics->stalls << '\n'
                  << "max skew     " << metrics->max_step_skew << '\n';
    std::cout << "output       " << out.string() << '\n';
    return exit_ok;
}

SpikeRecording load_run(const fs::path& dir)
{
    require_file(dir / "spikes.txt", "spike file");
    require_file(dir / "run.txt", "run sidecar");
    return read_recording(dir / "spikes.txt", dir / "run.txt");
}

int cmd_validate(const ValidateArgs& a)
{
    require_file(a.network, "network file");
    const auto net = load_network(a.network);
    const auto ref = load_run(a.reference);
    const auto cand = load_run(a.candidate);

    StatsOptions so;
    so.bin_ms = a.bin_ms;
    so.n_pairs = a.pairs;
    so.sampling_seed = a.seed;
    StatsReport report;
    try
    {
        report = compare(ref, cand, net, so);
    }
    catch (const std::invalid_argument& e)
    {
        throw UsageError(e.what());
    }

    const fs::path out = a.out.empty() ? default_out_dir() / "validate" : fs::path(a.out);
    fs::create_directories(out);
    write_report_text(report, std::cout);
    {
        std::ofstream txt(out / "report.txt");
        write_report_text(report, txt);
    }
    auto kv = report_key_values(report);
    kv["bin_ms"] = std::to_string(a.bin_ms);
    kv["pairs"] = std::to_string(a.pairs);
    kv["reference"] = fs::absolute(a.reference).string();
    kv["candidate"] = fs::absolute(a.candidate).string();
    write_key_values(kv, out / "report.kv");
    write_distributions_csv(report, out / "distributions.csv");
    std::cout << "output       " << out.string() << '\n';
    if (a.require_exact && !report.exact_match)
        return exit_invalid;
    return exit_ok;
}

int cmd_sudoku_check(const SudokuCheckArgs& a)
{
    const auto givens = parse_puzzle(a.puzzle);
    const auto rec = load_run(a.run);
    const auto decoded = decode_sudoku(rec, a.window_ms);
    const auto check = validate_grid(decoded.grid, givens);
    std::cout << format_grid(decoded.grid);
    if (check.valid)
    {
        std::cout << "solved\n";
        return exit_ok;
    }
    std::cout << "unsolved, " << decoded.undecided << " undecided cells\n";
    for (const auto& v : check.violations)
        std::cout << "  " << v << '\n';
    return exit_invalid;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"NeuroRing ring-accelerator simulator"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "generate a network file");
    g->add_option("--config", gen.config, "workload JSON")->required();
    g->add_option("--kind", gen.kind, "microcircuit or sudoku (default: config 'kind')");
    g->add_option("--scale", gen.scale, "microcircuit scale in (0, 1]");
    g->add_option("--puzzle", gen.puzzle, "81-character sudoku, 0 or . for empty cells");
    g->add_option("--seed", gen.seed);
    g->add_option("--out", gen.out, "network file to write");

    RunArgs run;
    auto* r = app.add_subcommand("run", "simulate a network file");
    r->add_option("--network", run.network)->required();
    r->add_option("--mode", run.mode, "ring or oracle");
    r->add_option("--exec", run.exec, "ring execution: deterministic or concurrent");
    r->add_option("--cores", run.cores);
    r->add_option("--capacity", run.capacity, "neurons per core");
    r->add_option("--workers", run.workers, "threads for --exec concurrent");
    r->add_option("--seed", run.seed);
    r->add_option("--t-bio-ms", run.t_bio_ms, "biological time");
    r->add_flag("--canonical,!--no-canonical", run.canonical, "order-independent accumulation (default on)");
    r->add_option("--queue", run.queue, "ring link capacity in packets");
    r->add_option("--device-boundary", run.device_boundaries, "ring edge index crossing a device boundary");
    r->add_option("--out", run.out, "output directory");

    ValidateArgs val;
    auto* v = app.add_subcommand("validate", "compare two runs with rate, CV and correlation statistics");
    v->add_option("--reference", val.reference, "reference run directory")->required();
    v->add_option("--candidate", val.candidate, "candidate run directory")->required();
    v->add_option("--network", val.network)->required();
    v->add_option("--bin-ms", val.bin_ms, "correlation bin width");
    v->add_option("--pairs", val.pairs, "sampled pairs per population");
    v->add_option("--seed", val.seed, "pair sampling seed");
    v->add_flag("--require-exact", val.require_exact, "exit 3 unless the recordings are identical");
    v->add_option("--out", val.out, "report directory");

    SudokuCheckArgs sud;
    auto* s = app.add_subcommand("sudoku-check", "decode a sudoku run and validate the grid");
    s->add_option("--run", sud.run, "run directory")->required();
    s->add_option("--puzzle", sud.puzzle)->required();
    s->add_option("--window-ms", sud.window_ms, "decoding window at the end of the run");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (g->parsed())
            return cmd_gen(gen);
        if (r->parsed())
            return cmd_run(run);
        if (v->parsed())
            return cmd_validate(val);
        return cmd_sudoku_check(sud);
    }
    catch (const UsageError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const WorkloadError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception& e)
    {
        std::cerr << "fault: " << e.what() << '\n';
        return exit_fault;
    }
}
