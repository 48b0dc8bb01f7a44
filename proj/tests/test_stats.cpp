#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "neuroring/lif.hpp"
#include "neuroring/oracle.hpp"
#include "neuroring/stats.hpp"

using namespace neuroring;

namespace
{

Network poisson_network(std::uint32_t n, double rate_hz)
{
    Network net;
    net.neuron_count = n;
    net.core_count = 1;
    net.core_capacity = n;
    net.populations = {Population{"gen", 0, n, NeuronKind::poisson, 0, rate_hz, -65.0, -65.0}};
    return net;
}

SpikeRecording recording(std::uint32_t neurons, std::uint64_t steps, std::vector<SpikeEvent> events)
{
    std::sort(events.begin(), events.end());
    SpikeRecording r;
    r.neuron_count = neurons;
    r.total_steps = steps;
    r.dt = 0.1;
    r.events = std::move(events);
    return r;
}

} // namespace

TEST_SUITE("oracle-stats")
{
    TEST_CASE("zero-drive network is silent in the oracle")
    {
        Network net;
        net.neuron_count = 10;
        net.core_count = 2;
        net.core_capacity = 5;
        net.params = {LifParams{}};
        net.populations = {Population{"lif", 0, 10, NeuronKind::lif, 0, 0.0, -65.0, -65.0}};
        for (std::uint32_t i = 0; i < 9; ++i)
            net.edges.push_back({i, i + 1, 1, 100.0f});
        const auto rec = oracle_run(net, 100.0, 1);
        CHECK(rec.events.empty());
        CHECK(rec.total_steps == 1000);
    }

    TEST_CASE("firing rates")
    {
        std::vector<SpikeEvent> ev;
        for (std::uint32_t k = 0; k < 10; ++k)
            ev.push_back({k * 1000, 1});
        const auto rec = recording(3, 10000, ev);
        const SpikeTrains trains(rec);
        const auto rates = firing_rates(trains, Population{"p", 0, 3, NeuronKind::lif, 0, 0, 0, 0}, rec.duration_ms());
        CHECK(rates[0] == 0.0);
        CHECK(rates[1] == doctest::Approx(10.0));
        CHECK(rates[2] == 0.0);
    }

    TEST_CASE("200 Hz Poisson sources over 10 s")
    {
        const auto net = poisson_network(20, 200.0);
        const auto rec = oracle_run(net, 10000.0, 3);
        const SpikeTrains trains(rec);
        const auto rates = firing_rates(trains, net.populations[0], rec.duration_ms());
        const double p = spike_probability(200.0, 0.1);
        const double expected = p * 10000.0; // Hz: per-step probability over 0.1 ms
        const double tol = 3.0 * std::sqrt(200.0 / 10.0);
        for (double r : rates)
            CHECK(std::abs(r - expected) <= tol);
        CHECK(std::abs(expected - 200.0) < 2.0);
    }

    TEST_CASE("CV of periodic, sparse and Poisson trains")
    {
        const std::vector<std::uint32_t> periodic{10, 20, 30, 40, 50};
        CHECK(*cv_isi(periodic) == 0.0);
        const std::vector<std::uint32_t> two{10, 20};
        CHECK_FALSE(cv_isi(two).has_value());

        std::vector<std::uint32_t> train;
        const double p = spike_probability(200.0, 0.1);
        for (std::uint32_t t = 0; t < 1000000; ++t)
            if (poisson_fires(p, 77, 0, t))
                train.push_back(t);
        const auto cv = cv_isi(train);
        REQUIRE(cv.has_value());
        CHECK(std::abs(*cv - 1.0) <= 0.05);
    }

    TEST_CASE("pearson of identical and anti-phase trains")
    {
        const std::vector<double> a{1, 0, 1, 0, 1, 0, 1, 0};
        const std::vector<double> b{0, 1, 0, 1, 0, 1, 0, 1};
        CHECK(*pearson(a, a) == doctest::Approx(1.0));
        CHECK(*pearson(a, b) == doctest::Approx(-1.0));
        const std::vector<double> flat(8, 2.0);
        CHECK_FALSE(pearson(a, flat).has_value());
    }

    TEST_CASE("period-2 train against its one-bin shift")
    {
        std::vector<SpikeEvent> ev;
        for (std::uint32_t t = 0; t < 1000; t += 2)
        {
            ev.push_back({t, 0});
            ev.push_back({t + 1, 1});
        }
        const auto rec = recording(2, 1000, ev);
        const auto s = pearson_pairs(SpikeTrains(rec), Population{"p", 0, 2, NeuronKind::lif, 0, 0, 0, 0}, 0.1, 10, 1);
        REQUIRE(s.r.size() == 1);
        CHECK(s.r[0] == doctest::Approx(-1.0));
    }

    TEST_CASE("independent Poisson trains are uncorrelated")
    {
        const auto net = poisson_network(200, 50.0);
        const auto rec = oracle_run(net, 10000.0, 9);
        const auto s = pearson_pairs(SpikeTrains(rec), net.populations[0], 2.0, 1000, 4);
        REQUIRE(s.r.size() + s.skipped == 1000);
        double mean = 0.0;
        for (double r : s.r)
        {
            REQUIRE(r >= -1.0);
            REQUIRE(r <= 1.0);
            mean += r;
        }
        mean /= static_cast<double>(s.r.size());
        CHECK(std::abs(mean) <= 0.02);
    }

    TEST_CASE("pair sampling is deterministic and skips silent trains")
    {
        std::vector<SpikeEvent> ev;
        for (std::uint32_t t = 0; t < 1000; t += 7)
            ev.push_back({t, 0});
        const auto rec = recording(3, 1000, ev);
        const Population pop{"p", 0, 3, NeuronKind::lif, 0, 0, 0, 0};
        const auto s = pearson_pairs(SpikeTrains(rec), pop, 1.0, 10, 1);
        CHECK(s.r.empty());
        CHECK(s.skipped == 3);
        CHECK_THROWS_AS(pearson_pairs(SpikeTrains(rec), pop, 0.25, 10, 1), std::invalid_argument);

        const auto big = oracle_run(poisson_network(100, 100.0), 1000.0, 2);
        const Population all{"gen", 0, 100, NeuronKind::poisson, 0, 100.0, 0, 0};
        CHECK(pearson_pairs(SpikeTrains(big), all, 2.0, 50, 8).r == pearson_pairs(SpikeTrains(big), all, 2.0, 50, 8).r);
    }

    TEST_CASE("compare a recording with itself")
    {
        const auto net = poisson_network(50, 80.0);
        const auto rec = oracle_run(net, 1000.0, 4);
        const auto report = compare(rec, rec, net);
        CHECK(report.exact_match);
        CHECK(report.max_rate_rel_delta() == 0.0);
        CHECK(report.max_cv_delta() == 0.0);
        CHECK(report.max_corr_delta() == 0.0);
        const auto kv = report_key_values(report);
        CHECK(kv.at("exact_match") == "true");
        CHECK(kv.count("population.gen.median_rate_ref") == 1);
    }

    TEST_CASE("compare detects differences and mismatched runs")
    {
        const auto net = poisson_network(50, 80.0);
        const auto a = oracle_run(net, 1000.0, 4);
        const auto b = oracle_run(net, 1000.0, 5);
        const auto report = compare(a, b, net);
        CHECK_FALSE(report.exact_match);
        CHECK(report.max_rate_rel_delta() < 0.2);

        const auto shorter = oracle_run(net, 500.0, 4);
        CHECK_THROWS_AS(compare(a, shorter, net), std::invalid_argument);
        auto other = b;
        other.config_hash ^= 1;
        CHECK_THROWS_AS(compare(a, other, net), std::invalid_argument);
    }

    TEST_CASE("statistics ignore the order of spikes within a timestep")
    {
        const auto net = poisson_network(40, 300.0);
        const auto rec = oracle_run(net, 500.0, 6);
        auto shuffled = rec;
        std::mt19937_64 rng(1);
        auto it = shuffled.events.begin();
        while (it != shuffled.events.end())
        {
            auto end = std::find_if(it, shuffled.events.end(), [&](const SpikeEvent& e) { return e.step != it->step; });
            std::shuffle(it, end, rng);
            it = end;
        }
        const auto a = population_stats(rec, net);
        const auto b = population_stats(shuffled, net);
        CHECK(a[0].rates == b[0].rates);
        CHECK(a[0].cvs == b[0].cvs);
        CHECK(a[0].correlations.r == b[0].correlations.r);
    }
}
