#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neuroring/network.hpp"
#include "neuroring/recording.hpp"

namespace neuroring
{

// Per-neuron spike steps, CSR layout, built once per recording.
class SpikeTrains
{
  public:
    explicit SpikeTrains(const SpikeRecording& rec);

    std::span<const std::uint32_t> train(std::uint32_t neuron) const;
    std::uint32_t neuron_count() const { return static_cast<std::uint32_t>(offsets_.size() - 1); }
    std::uint64_t total_steps() const { return total_steps_; }
    double dt() const { return dt_; }

  private:
    std::vector<std::uint64_t> offsets_;
    std::vector<std::uint32_t> steps_;
    std::uint64_t total_steps_;
    double dt_;
};

// Spike count / T for each neuron of the population, Hz.
std::vector<double> firing_rates(const SpikeTrains& trains, const Population& pop, double t_ms);

// sd(ISI) / mean(ISI) (population sd); nullopt for fewer than 3 spikes.
std::optional<double> cv_isi(std::span<const std::uint32_t> spike_steps);
std::optional<double> cv_isi(const SpikeTrains& trains, std::uint32_t neuron);

// Pearson r of two equally long series; nullopt when either has zero variance.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

// Spike counts in consecutive bins of `bin_steps`; a trailing partial bin is dropped.
std::vector<double> bin_counts(std::span<const std::uint32_t> spike_steps, std::uint64_t total_steps,
                               std::uint64_t bin_steps);

struct PearsonSample
{
    std::vector<double> r;
    std::uint64_t skipped = 0; // pairs with a zero-variance train
};

// Correlations of up to n_pairs sampled pairs of distinct neurons. When the
// population has no more than n_pairs distinct pairs, every pair is used.
PearsonSample pearson_pairs(const SpikeTrains& trains, const Population& pop, double bin_ms, std::uint32_t n_pairs,
                            std::uint64_t seed);

struct StatsOptions
{
    double bin_ms = 2.0;
    std::uint32_t n_pairs = 1000;
    std::uint64_t sampling_seed = 12345;
};

struct PopulationStats
{
    std::string name;
    std::vector<double> rates;
    std::vector<double> cvs; // neurons with a defined CV only
    PearsonSample correlations;

    std::optional<double> median_rate() const;
    std::optional<double> median_cv() const;
    std::optional<double> mean_correlation() const;
};

std::vector<PopulationStats> population_stats(const SpikeRecording& rec, const Network& net,
                                              const StatsOptions& opts = {});

struct PopulationDelta
{
    std::string name;
    double rate_rel_delta = 0.0; // |median_b - median_a| / median_a
    double cv_delta = 0.0;       // |median_b - median_a|
    double corr_delta = 0.0;     // |mean_b - mean_a|
};

struct StatsReport
{
    std::vector<PopulationStats> reference;
    std::vector<PopulationStats> candidate;
    std::vector<PopulationDelta> deltas;
    bool exact_match = false;

    double max_rate_rel_delta() const;
    double max_cv_delta() const;
    double max_corr_delta() const;
};

// `reference` plays the role of the baseline in relative deltas. Throws
// std::invalid_argument when the recordings describe different runs.
StatsReport compare(const SpikeRecording& reference, const SpikeRecording& candidate, const Network& net,
                    const StatsOptions& opts = {});

void write_report_text(const StatsReport& report, std::ostream& out);
std::map<std::string, std::string> report_key_values(const StatsReport& report);
// Long-format rows: recording,population,statistic,value.
void write_distributions_csv(const StatsReport& report, const std::filesystem::path& path);

} // namespace neuroring
