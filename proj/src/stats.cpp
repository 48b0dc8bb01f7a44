#include "neuroring/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "neuroring/rng.hpp"

namespace neuroring
{

SpikeTrains::SpikeTrains(const SpikeRecording& rec)
    : offsets_(std::size_t{rec.neuron_count} + 1, 0), steps_(rec.events.size()), total_steps_(rec.total_steps),
      dt_(rec.dt)
{
    for (const auto& e : rec.events)
    {
        if (e.neuron >= rec.neuron_count)
            throw std::invalid_argument("spike from neuron " + std::to_string(e.neuron) + " outside the network");
        ++offsets_[e.neuron + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    auto fill = offsets_;
    for (const auto& e : rec.events)
        steps_[fill[e.neuron]++] = e.step;
    for (std::uint32_t n = 0; n < rec.neuron_count; ++n)
        std::sort(steps_.begin() + static_cast<std::ptrdiff_t>(offsets_[n]),
                  steps_.begin() + static_cast<std::ptrdiff_t>(offsets_[n + 1]));
}

std::span<const std::uint32_t> SpikeTrains::train(std::uint32_t neuron) const
{
    if (neuron >= neuron_count())
        throw std::out_of_range("neuron " + std::to_string(neuron) + " out of range");
    return {steps_.data() + offsets_[neuron], steps_.data() + offsets_[neuron + 1]};
}

std::vector<double> firing_rates(const SpikeTrains& trains, const Population& pop, double t_ms)
{
    if (!(t_ms > 0.0))
        throw std::invalid_argument("firing rate needs a positive duration");
    std::vector<double> rates;
    rates.reserve(pop.size);
    for (auto n = pop.first; n < pop.end(); ++n)
        rates.push_back(static_cast<double>(trains.train(n).size()) * 1000.0 / t_ms);
    return rates;
}

std::optional<double> cv_isi(std::span<const std::uint32_t> spike_steps)
{
    if (spike_steps.size() < 3)
        return std::nullopt;
    const auto n = static_cast<double>(spike_steps.size() - 1);
    double mean = 0.0;
    for (std::size_t i = 1; i < spike_steps.size(); ++i)
        mean += static_cast<double>(spike_steps[i] - spike_steps[i - 1]);
    mean /= n;
    if (mean <= 0.0)
        return std::nullopt;
    double var = 0.0;
    for (std::size_t i = 1; i < spike_steps.size(); ++i)
    {
        const double d = static_cast<double>(spike_steps[i] - spike_steps[i - 1]) - mean;
        var += d * d;
    }
    return std::sqrt(var / n) / mean;
}

std::optional<double> cv_isi(const SpikeTrains& trains, std::uint32_t neuron)
{
    return cv_isi(trains.train(neuron));
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("pearson: series differ in length");
    if (a.size() < 2)
        return std::nullopt;
    const auto n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0)
        return std::nullopt;
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<double> bin_counts(std::span<const std::uint32_t> spike_steps, std::uint64_t total_steps,
                               std::uint64_t bin_steps)
{
    if (bin_steps == 0)
        throw std::invalid_argument("bin width must be positive");
    std::vector<double> counts(total_steps / bin_steps, 0.0);
    for (auto s : spike_steps)
    {
        const auto b = s / bin_steps;
        if (b < counts.size())
            counts[b] += 1.0;
    }
    return counts;
}

namespace
{

std::uint64_t bin_steps_for(double bin_ms, double dt)
{
    const double ratio = bin_ms / dt;
    const double rounded = std::round(ratio);
    if (!(rounded >= 1.0) || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument("bin width must be a positive multiple of dt");
    return static_cast<std::uint64_t>(rounded);
}

std::optional<double> median(std::vector<double> v)
{
    if (v.empty())
        return std::nullopt;
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1)
        return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

constexpr double infinity = std::numeric_limits<double>::infinity();

double abs_delta(std::optional<double> a, std::optional<double> b)
{
    if (!a && !b)
        return 0.0;
    if (!a || !b)
        return infinity;
    return std::abs(*b - *a);
}

double rel_delta(std::optional<double> ref, std::optional<double> cand)
{
    if (!ref && !cand)
        return 0.0;
    if (!ref || !cand)
        return infinity;
    if (*ref == 0.0)
        return *cand == 0.0 ? 0.0 : infinity;
    return std::abs(*cand - *ref) / std::abs(*ref);
}

std::string fmt(double x)
{
    std::ostringstream s;
    s << std::setprecision(6) << x;
    return s.str();
}

std::string fmt(std::optional<double> x)
{
    return x ? fmt(*x) : std::string("undefined");
}

} // namespace

PearsonSample pearson_pairs(const SpikeTrains& trains, const Population& pop, double bin_ms, std::uint32_t n_pairs,
                            std::uint64_t seed)
{
    const auto bin_steps = bin_steps_for(bin_ms, trains.dt());
    PearsonSample out;
    if (pop.size < 2 || n_pairs == 0)
        return out;

    auto counts_of = [&](std::uint32_t neuron) { return bin_counts(trains.train(neuron), trains.total_steps(), bin_steps); };
    auto add = [&](std::uint32_t a, std::uint32_t b) {
        const auto ca = counts_of(a);
        const auto cb = counts_of(b);
        if (const auto r = pearson(ca, cb))
            out.r.push_back(*r);
        else
            ++out.skipped;
    };

    const std::uint64_t all_pairs = std::uint64_t{pop.size} * (pop.size - 1) / 2;
    if (all_pairs <= n_pairs)
    {
        for (std::uint32_t i = 0; i < pop.size; ++i)
            for (std::uint32_t j = i + 1; j < pop.size; ++j)
                add(pop.first + i, pop.first + j);
        return out;
    }

    PhiloxEngine eng(seed, Stream::sampling, pop.first);
    for (std::uint32_t k = 0; k < n_pairs; ++k)
    {
        const auto i = static_cast<std::uint32_t>(eng.uniform() * pop.size);
        auto j = static_cast<std::uint32_t>(eng.uniform() * (pop.size - 1));
        if (j >= i)
            ++j;
        add(pop.first + i, pop.first + j);
    }
    return out;
}

std::optional<double> PopulationStats::median_rate() const
{
    return median(rates);
}

std::optional<double> PopulationStats::median_cv() const
{
    return median(cvs);
}

std::optional<double> PopulationStats::mean_correlation() const
{
    if (correlations.r.empty())
        return std::nullopt;
    return std::accumulate(correlations.r.begin(), correlations.r.end(), 0.0) /
           static_cast<double>(correlations.r.size());
}

std::vector<PopulationStats> population_stats(const SpikeRecording& rec, const Network& net, const StatsOptions& opts)
{
    if (rec.neuron_count != net.neuron_count)
        throw std::invalid_argument("recording and network disagree on the neuron count");
    const SpikeTrains trains(rec);
    const double t_ms = rec.duration_ms();
    std::vector<PopulationStats> out;
    for (const auto& pop : net.populations)
    {
        PopulationStats ps;
        ps.name = pop.name;
        if (t_ms > 0.0)
            ps.rates = firing_rates(trains, pop, t_ms);
        for (auto n = pop.first; n < pop.end(); ++n)
            if (const auto cv = cv_isi(trains, n))
                ps.cvs.push_back(*cv);
        ps.correlations = pearson_pairs(trains, pop, opts.bin_ms, opts.n_pairs, opts.sampling_seed);
        out.push_back(std::move(ps));
    }
    return out;
}

double StatsReport::max_rate_rel_delta() const
{
    double m = 0.0;
    for (const auto& d : deltas)
        m = std::max(m, d.rate_rel_delta);
    return m;
}

double StatsReport::max_cv_delta() const
{
    double m = 0.0;
    for (const auto& d : deltas)
        m = std::max(m, d.cv_delta);
    return m;
}

double StatsReport::max_corr_delta() const
{
    double m = 0.0;
    for (const auto& d : deltas)
        m = std::max(m, d.corr_delta);
    return m;
}

StatsReport compare(const SpikeRecording& reference, const SpikeRecording& candidate, const Network& net,
                    const StatsOptions& opts)
{
    if (reference.neuron_count != candidate.neuron_count || reference.total_steps != candidate.total_steps ||
        reference.dt != candidate.dt)
        throw std::invalid_argument("recordings cover different runs (neuron count, steps or dt differ)");
    if (reference.config_hash != candidate.config_hash)
        throw std::invalid_argument("recordings were produced from different networks");
    if (reference.config_hash != 0 && reference.config_hash != net.content_hash())
        throw std::invalid_argument("recordings were not produced from this network");

    StatsReport report;
    report.reference = population_stats(reference, net, opts);
    report.candidate = population_stats(candidate, net, opts);
    report.exact_match = reference.events == candidate.events;
    for (std::size_t p = 0; p < report.reference.size(); ++p)
    {
        const auto& a = report.reference[p];
        const auto& b = report.candidate[p];
        report.deltas.push_back({a.name, rel_delta(a.median_rate(), b.median_rate()),
                                 abs_delta(a.median_cv(), b.median_cv()),
                                 abs_delta(a.mean_correlation(), b.mean_correlation())});
    }
    return report;
}

void write_report_text(const StatsReport& report, std::ostream& out)
{
    auto cell = [&](const std::string& text, int width) { out << std::setw(width) << text << ' '; };
    out << "exact match: " << (report.exact_match ? "yes" : "no") << '\n' << std::left;
    for (const char* h : {"population", "rate_ref", "rate_cand", "rate_rel", "cv_ref", "cv_cand", "cv_diff", "r_ref",
                          "r_cand", "r_diff"})
        cell(h, 12);
    out << '\n';
    for (std::size_t p = 0; p < report.deltas.size(); ++p)
    {
        const auto& a = report.reference[p];
        const auto& b = report.candidate[p];
        const auto& d = report.deltas[p];
        for (const auto& text : {d.name, fmt(a.median_rate()), fmt(b.median_rate()), fmt(d.rate_rel_delta),
                                 fmt(a.median_cv()), fmt(b.median_cv()), fmt(d.cv_delta), fmt(a.mean_correlation()),
                                 fmt(b.mean_correlation()), fmt(d.corr_delta)})
            cell(text, 12);
        out << '\n';
    }
    out << std::right;
}

std::map<std::string, std::string> report_key_values(const StatsReport& report)
{
    std::map<std::string, std::string> kv;
    kv["exact_match"] = report.exact_match ? "true" : "false";
    kv["max_rate_rel_delta"] = fmt(report.max_rate_rel_delta());
    kv["max_cv_delta"] = fmt(report.max_cv_delta());
    kv["max_corr_delta"] = fmt(report.max_corr_delta());
    for (std::size_t p = 0; p < report.deltas.size(); ++p)
    {
        const auto& a = report.reference[p];
        const auto& b = report.candidate[p];
        const auto& d = report.deltas[p];
        const auto key = "population." + d.name + '.';
        kv[key + "median_rate_ref"] = fmt(a.median_rate());
        kv[key + "median_rate_cand"] = fmt(b.median_rate());
        kv[key + "median_cv_ref"] = fmt(a.median_cv());
        kv[key + "median_cv_cand"] = fmt(b.median_cv());
        kv[key + "mean_r_ref"] = fmt(a.mean_correlation());
        kv[key + "mean_r_cand"] = fmt(b.mean_correlation());
        kv[key + "skipped_pairs_ref"] = std::to_string(a.correlations.skipped);
        kv[key + "skipped_pairs_cand"] = std::to_string(b.correlations.skipped);
        kv[key + "rate_rel_delta"] = fmt(d.rate_rel_delta);
        kv[key + "cv_delta"] = fmt(d.cv_delta);
        kv[key + "corr_delta"] = fmt(d.corr_delta);
    }
    return kv;
}

void write_distributions_csv(const StatsReport& report, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << "recording,population,statistic,value\n";
    out << std::setprecision(10);
    auto dump = [&](const char* which, const std::vector<PopulationStats>& all) {
        for (const auto& ps : all)
        {
            for (double v : ps.rates)
                out << which << ',' << ps.name << ",rate_hz," << v << '\n';
            for (double v : ps.cvs)
                out << which << ',' << ps.name << ",cv_isi," << v << '\n';
            for (double v : ps.correlations.r)
                out << which << ',' << ps.name << ",pearson_r," << v << '\n';
        }
    };
    dump("reference", report.reference);
    dump("candidate", report.candidate);
}

} // namespace neuroring
