#include <doctest.h>

#include <memory>
#include <random>
#include <vector>

#include "neuroring/accumulator.hpp"
#include "neuroring/router.hpp"
#include "neuroring/synapse_store.hpp"
#include "neuroring/topology.hpp"

using namespace neuroring;

namespace
{

// Hand-wired ring of routers for driving router_step directly.
struct MiniRing
{
    TopologyConfig topo;
    std::vector<std::unique_ptr<Link>> right, left, local;
    std::vector<DelayAccumulator> accs;
    std::vector<RouterState> routers;

    MiniRing(std::uint32_t n, std::uint32_t capacity, std::size_t link_capacity = 16)
    {
        topo.n_cores = n;
        topo.core_capacity = capacity;
        for (std::uint32_t c = 0; c < n; ++c)
        {
            right.push_back(std::make_unique<Link>(link_capacity));
            left.push_back(std::make_unique<Link>(link_capacity));
            local.push_back(std::make_unique<Link>(link_capacity));
            accs.emplace_back(c * capacity, capacity, true);
        }
        for (std::uint32_t c = 0; c < n; ++c)
        {
            RouterPorts p;
            p.in_from_left = right[(c + n - 1) % n].get();
            p.in_from_right = left[(c + 1) % n].get();
            p.out_right = right[c].get();
            p.out_left = left[c].get();
            p.local_in = local[c].get();
            routers.emplace_back(c, topo, p);
        }
    }

    void round(std::uint64_t step)
    {
        for (std::uint32_t c = 0; c < routers.size(); ++c)
            router_step(routers[c], accs[c], step);
    }

    void send(std::uint32_t core, std::uint32_t dst, float w, std::uint32_t delay, std::uint32_t src, std::uint32_t edge)
    {
        REQUIRE(local[core]->try_push(Flit{encode(SynapsePacket::data(w, dst, delay)), {src, edge}}));
    }
};

TopologyConfig ring_of(std::uint32_t n, std::uint32_t capacity)
{
    TopologyConfig t;
    t.n_cores = n;
    t.core_capacity = capacity;
    return t;
}

} // namespace

TEST_SUITE("ring-fabric")
{
    TEST_CASE("ring distances")
    {
        CHECK(ring_distance(3, 3, 20) == RingDistance{0, 0});
        CHECK(ring_distance(0, 5, 20) == RingDistance{15, 5});
        CHECK(ring_distance(0, 10, 20) == RingDistance{10, 10});
        CHECK(ring_distance(0, 19, 20) == RingDistance{1, 19});
        for (std::uint32_t n = 1; n <= 9; ++n)
            for (std::uint32_t a = 0; a < n; ++a)
                for (std::uint32_t b = 0; b < n; ++b)
                {
                    const auto d = ring_distance(a, b, n);
                    REQUIRE((d.left + d.right) % n == 0);
                    REQUIRE((a + d.right) % n == b);
                    REQUIRE((a + n * n - d.left) % n == b);
                    REQUIRE(d.shortest() <= n / 2);
                }
    }

    TEST_CASE("route direction with ties to the right")
    {
        CHECK(route_direction(3, 3, 20) == Direction::local);
        CHECK(route_direction(0, 5, 20) == Direction::right);
        CHECK(route_direction(0, 15, 20) == Direction::left);
        CHECK(route_direction(0, 10, 20) == Direction::right);
        CHECK(route_direction(1, 0, 2) == Direction::right);
    }

    TEST_CASE("topology validation")
    {
        auto t = ring_of(0, 4);
        CHECK_THROWS_AS(t.validate(), std::invalid_argument);
        t = ring_of(4, 0);
        CHECK_THROWS_AS(t.validate(), std::invalid_argument);
        t = ring_of(4, 4);
        t.device_boundaries = {7};
        CHECK_THROWS_AS(t.validate(), std::invalid_argument);
        t.device_boundaries = {1, 3};
        CHECK_NOTHROW(t.validate());
        CHECK(t.core_of(9) == 2);
        CHECK(t.crosses_device(3));
    }

    TEST_CASE("accumulator examples")
    {
        DelayAccumulator acc(0, 4, true);
        acc.accumulate(2, 1, 2.5f, 10);
        auto r = acc.release(11);
        CHECK(r[2] == 2.5);
        CHECK(r[0] == 0.0);

        acc.accumulate(1, 3, 1.0f, 12);
        acc.accumulate(1, 3, -3.0f, 12);
        r = acc.release(15);
        CHECK(r[1] == -2.0);

        CHECK(acc.release(15)[1] == 0.0);
    }

    TEST_CASE("delay 64 wraps to the slot released 64 steps later")
    {
        for (bool canonical : {true, false})
        {
            DelayAccumulator acc(100, 2, canonical);
            acc.release(0);
            acc.accumulate(101, 64, 7.0f, 0);
            for (std::uint64_t t = 1; t < 64; ++t)
                REQUIRE(acc.release(t)[1] == 0.0);
            CHECK(acc.release(64)[1] == 7.0);
            acc.accumulate(101, 1, 1.0f, 127);
            for (std::uint64_t t = 65; t < 128; ++t)
                REQUIRE(acc.release(t)[1] == 0.0);
            CHECK(acc.release(128)[1] == 1.0);
        }
    }

    TEST_CASE("untouched accumulator releases zeros")
    {
        DelayAccumulator acc(0, 8, false);
        for (auto x : acc.release(0))
            CHECK(x == 0.0);
    }

    TEST_CASE("accumulator faults")
    {
        DelayAccumulator acc(10, 5, true);
        CHECK_THROWS_AS(acc.accumulate(9, 1, 1.0f, 0), AccumulatorFault);
        CHECK_THROWS_AS(acc.accumulate(15, 1, 1.0f, 0), AccumulatorFault);
        CHECK_THROWS_AS(acc.accumulate(10, 0, 1.0f, 0), AccumulatorFault);
        CHECK_THROWS_AS(acc.accumulate(10, 65, 1.0f, 0), AccumulatorFault);
        acc.release(5);
        CHECK_THROWS_AS(acc.release(4), AccumulatorFault);
        CHECK_THROWS_AS(acc.accumulate(10, 1, 1.0f, 4), AccumulatorFault);
        CHECK_NOTHROW(acc.accumulate(10, 1, 1.0f, 5));
    }

    TEST_CASE("canonical accumulation is independent of arrival order")
    {
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<float> w(-1e6f, 1e6f);
        std::vector<std::tuple<std::uint32_t, float, EdgeTag>> events;
        for (std::uint32_t i = 0; i < 500; ++i)
            events.emplace_back(static_cast<std::uint32_t>(rng() % 3), w(rng) * (rng() % 2 ? 1e-7f : 1.0f),
                                EdgeTag{static_cast<std::uint32_t>(rng() % 50), i});
        DelayAccumulator a(0, 3, true), b(0, 3, true);
        for (const auto& [dst, weight, tag] : events)
            a.accumulate(dst, 5, weight, 0, tag);
        std::shuffle(events.begin(), events.end(), rng);
        for (const auto& [dst, weight, tag] : events)
            b.accumulate(dst, 5, weight, 0, tag);
        const auto ra = a.release(5);
        const std::vector<double> va(ra.begin(), ra.end());
        const auto rb = b.release(5);
        for (int i = 0; i < 3; ++i)
            CHECK(va[i] == rb[i]);
    }

    TEST_CASE("randomized delay line matches a dense time-indexed array")
    {
        for (bool canonical : {true, false})
        {
            std::mt19937_64 rng(canonical ? 8 : 9);
            const std::uint32_t n = 16;
            const std::uint64_t steps = 2000;
            std::vector<std::vector<double>> dense(steps + 65, std::vector<double>(n, 0.0));
            DelayAccumulator acc(32, n, canonical);
            std::uint32_t edge = 0;
            for (std::uint64_t t = 0; t < steps; ++t)
            {
                const auto r = acc.release(t);
                for (std::uint32_t k = 0; k < n; ++k)
                    REQUIRE(r[k] == dense[t][k]);
                const auto events = rng() % 20;
                for (std::uint64_t e = 0; e < events; ++e)
                {
                    const auto dst = static_cast<std::uint32_t>(rng() % n);
                    const auto d = static_cast<std::uint32_t>(1 + rng() % 64);
                    const float w = static_cast<float>(static_cast<std::int64_t>(rng() % 512001) - 256000) / 256.0f;
                    acc.accumulate(32 + dst, d, w, t, {static_cast<std::uint32_t>(rng() % 100), edge++});
                    dense[t + d][dst] += w;
                }
            }
        }
    }

    TEST_CASE("store sorts each list by ring proximity")
    {
        const auto topo = ring_of(20, 4096);
        const std::vector<SynapseEdge> edges{{0, 5 * 4096, 1, 1.0f}, {0, 19 * 4096 + 2, 1, 2.0f}, {0, 7, 1, 3.0f}};
        const auto store = SynapseList::build(edges, 20 * 4096, topo);
        const auto f = store.fetch(0);
        REQUIRE(f.size() == 4);
        CHECK(f[0].dst() == 7);
        CHECK(f[1].dst() == 19 * 4096 + 2);
        CHECK(f[2].dst() == 5 * 4096);
        CHECK(f[3].sync() == SyncClass::local_sync);
        CHECK(f[3].dst() == 0);
    }

    TEST_CASE("store edge cases and invariants")
    {
        const auto topo = ring_of(1, 8);
        const auto empty = SynapseList::build({}, 8, topo);
        CHECK(empty.edge_count() == 0);
        CHECK(empty.fetch(3).size() == 1);
        CHECK(empty.fetch(3)[0].sync() == SyncClass::local_sync);

        const std::vector<SynapseEdge> edges{{2, 5, 3, 1.0f}, {2, 1, 2, 2.0f}, {2, 5, 1, 3.0f}};
        const auto single = SynapseList::build(edges, 8, topo);
        const auto f = single.fetch(2);
        REQUIRE(f.size() == 4);
        CHECK(f[0].dst() == 1);
        CHECK(f[1].weight() == 1.0f);
        CHECK(f[2].weight() == 3.0f);

        CHECK_THROWS_AS(SynapseList::build(std::vector<SynapseEdge>{{0, 1, 0, 1.0f}}, 8, topo), InvalidEdge);
        CHECK_THROWS_AS(SynapseList::build(std::vector<SynapseEdge>{{0, 1, 65, 1.0f}}, 8, topo), InvalidEdge);
        CHECK_THROWS_AS(SynapseList::build(std::vector<SynapseEdge>{{0, 8, 1, 1.0f}}, 8, topo), InvalidEdge);
        CHECK_THROWS_AS(SynapseList::build({}, 9, topo), std::invalid_argument);
    }

    TEST_CASE("random stores preserve edges and order by distance")
    {
        std::mt19937_64 rng(12);
        const auto topo = ring_of(7, 10);
        std::vector<SynapseEdge> edges;
        for (int i = 0; i < 3000; ++i)
            edges.push_back({static_cast<std::uint32_t>(rng() % 70), static_cast<std::uint32_t>(rng() % 70),
                             static_cast<std::uint32_t>(1 + rng() % 64), static_cast<float>(i)});
        const auto a = SynapseList::build(edges, 70, topo);
        const auto b = SynapseList::build(edges, 70, topo);
        CHECK(std::equal(a.words().begin(), a.words().end(), b.words().begin(), b.words().end()));
        std::size_t total = 0;
        for (std::uint32_t src = 0; src < 70; ++src)
        {
            const auto list = a.list(src);
            total += list.size();
            for (std::size_t k = 1; k < list.size(); ++k)
            {
                const auto da = ring_distance(src / 10, word::dst(list[k - 1]) / 10, 7).shortest();
                const auto db = ring_distance(src / 10, word::dst(list[k]) / 10, 7).shortest();
                REQUIRE(da <= db);
            }
        }
        CHECK(total == edges.size());
    }

    TEST_CASE("local DATA is consumed exactly once")
    {
        MiniRing ring(4, 8);
        ring.send(1, 10, 1.5f, 1, 9, 0);
        ring.round(0);
        CHECK(ring.accs[1].accumulated() == 1);
        CHECK(ring.routers[1].counters().local_deliveries == 1);
        ring.round(0);
        CHECK(ring.accs[1].accumulated() == 1);
        CHECK(ring.accs[1].release(1)[2] == 1.5);
    }

    TEST_CASE("DATA two hops right arrives at core src+2")
    {
        MiniRing ring(4, 8);
        ring.send(0, 2 * 8 + 3, 4.0f, 2, 1, 0);
        for (int i = 0; i < 4; ++i)
            ring.round(0);
        for (std::uint32_t c = 0; c < 4; ++c)
            CHECK(ring.accs[c].accumulated() == (c == 2 ? 1u : 0u));
        CHECK(ring.routers[2].counters().max_hops == 2);
        CHECK(ring.routers[0].counters().right_traffic == 1);
        CHECK(ring.routers[1].counters().right_traffic == 1);
        CHECK(ring.accs[2].release(2)[3] == 4.0);
    }

    TEST_CASE("DATA from core 1 to core 4 of a 5-core ring travels left")
    {
        MiniRing ring(5, 4);
        ring.send(1, 4 * 4, 1.0f, 1, 4, 0); // core 1 -> core 4: left 2, right 3
        for (int i = 0; i < 4; ++i)
            ring.round(0);
        CHECK(ring.accs[4].accumulated() == 1);
        CHECK(ring.routers[1].counters().left_traffic == 1);
        CHECK(ring.routers[0].counters().left_traffic == 1);
        CHECK(ring.routers[4].counters().max_hops == 2);
    }

    TEST_CASE("neighbour traffic wins the outbound edge")
    {
        MiniRing ring(4, 8);
        const auto transit = encode(SynapsePacket::data(1.0f, 3 * 8, 1));
        REQUIRE(ring.right[0]->try_push(Flit{transit, {0, 0}}));
        ring.send(1, 2 * 8, 2.0f, 1, 8, 1);
        router_step(ring.routers[1], ring.accs[1], 0);
        REQUIRE(ring.right[1]->size() == 1);
        CHECK(ring.right[1]->front().word == transit);
        CHECK(ring.local[1]->size() == 1);
        CHECK(ring.routers[1].counters().stalls >= 1);
        router_step(ring.routers[1], ring.accs[1], 0);
        CHECK(ring.right[1]->size() == 2);
    }

    TEST_CASE("local injection needs two free slots, transit needs one")
    {
        MiniRing ring(4, 8, 2);
        const auto far = encode(SynapsePacket::data(1.0f, 3 * 8, 1));
        REQUIRE(ring.right[1]->try_push(Flit{far, {}}));
        ring.send(1, 2 * 8, 2.0f, 1, 8, 1);
        router_step(ring.routers[1], ring.accs[1], 0);
        CHECK(ring.right[1]->size() == 1);
        CHECK(ring.local[1]->size() == 1);

        REQUIRE(ring.right[0]->try_push(Flit{far, {0, 0}}));
        router_step(ring.routers[1], ring.accs[1], 0);
        CHECK(ring.right[1]->size() == 2);
        CHECK(ring.right[0]->empty());
    }

    TEST_CASE("global sync tokens complete the barrier on every core")
    {
        MiniRing ring(5, 4);
        for (auto& r : ring.routers)
            r.mark_fetch_done();
        for (int i = 0; i < 20; ++i)
            ring.round(0);
        for (const auto& r : ring.routers)
        {
            CHECK(r.barrier_complete());
            CHECK(r.tokens_home());
            CHECK(r.origins_seen_right() == 5);
            CHECK(r.origins_seen_left() == 5);
        }
        for (std::uint32_t c = 0; c < 5; ++c)
        {
            CHECK(ring.right[c]->empty());
            CHECK(ring.left[c]->empty());
        }
    }

    TEST_CASE("barrier waits for cores whose fetch stage is busy")
    {
        MiniRing ring(3, 4);
        ring.routers[0].mark_fetch_done();
        ring.routers[1].mark_fetch_done();
        for (int i = 0; i < 20; ++i)
            ring.round(0);
        for (const auto& r : ring.routers)
            CHECK_FALSE(r.barrier_complete());
        ring.routers[2].mark_fetch_done();
        for (int i = 0; i < 20; ++i)
            ring.round(0);
        for (const auto& r : ring.routers)
            CHECK(r.barrier_complete());
    }

    TEST_CASE("LOCAL_SYNC acknowledgement and protocol faults")
    {
        MiniRing ring(2, 4);
        REQUIRE(ring.local[0]->try_push(Flit{encode(SynapsePacket::local_sync(0)), {}}));
        const auto rep = router_step(ring.routers[0], ring.accs[0], 0);
        CHECK(rep.local_sync_acked);

        REQUIRE(ring.right[0]->try_push(Flit{encode(SynapsePacket::local_sync(0)), {}}));
        CHECK_THROWS_AS(router_step(ring.routers[1], ring.accs[1], 0), ProtocolFault);
    }
}
