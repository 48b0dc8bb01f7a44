#include "neuroring/router.hpp"

#include <sstream>

namespace neuroring
{

RouterState::RouterState(std::uint32_t core, const TopologyConfig& topo, RouterPorts ports)
    : core_(core), n_cores_(topo.n_cores), capacity_(topo.core_capacity), right_edge_(core),
      left_edge_((core + topo.n_cores - 1) % topo.n_cores), right_edge_crosses_(topo.crosses_device(right_edge_)),
      left_edge_crosses_(topo.crosses_device(left_edge_)), max_hops_allowed_((topo.n_cores + 1) / 2), ports_(ports),
      seen_right_(topo.n_cores, 0), seen_left_(topo.n_cores, 0)
{
    if (!ports.in_from_left || !ports.in_from_right || !ports.out_right || !ports.out_left || !ports.local_in)
        throw std::invalid_argument("router ports must all be connected");
    if (ports.out_right->capacity() < 2 || ports.out_left->capacity() < 2)
        throw std::invalid_argument("ring links need capacity >= 2");
}

bool RouterState::barrier_complete() const
{
    return seen_right_count_ == n_cores_ && seen_left_count_ == n_cores_;
}

void RouterState::reset_for_next_step()
{
    fetch_done_ = false;
    right_token_sent_ = left_token_sent_ = false;
    right_home_ = left_home_ = false;
    std::fill(seen_right_.begin(), seen_right_.end(), 0);
    std::fill(seen_left_.begin(), seen_left_.end(), 0);
    seen_right_count_ = seen_left_count_ = 0;
}

std::string RouterState::diagnostics() const
{
    std::ostringstream s;
    s << "core " << core_ << ": local_in=" << ports_.local_in->size() << " in_left=" << ports_.in_from_left->size()
      << " in_right=" << ports_.in_from_right->size() << " out_right=" << ports_.out_right->size()
      << " out_left=" << ports_.out_left->size() << " fetch_done=" << fetch_done_ << " tokens_sent=("
      << right_token_sent_ << ',' << left_token_sent_ << ") home=(" << right_home_ << ',' << left_home_
      << ") origins_seen=(" << seen_right_count_ << ',' << seen_left_count_ << ")/" << n_cores_;
    return s.str();
}

namespace
{

void mark_seen(std::vector<std::uint8_t>& seen, std::uint32_t& count, std::uint32_t origin, std::uint32_t n_cores)
{
    if (origin >= n_cores)
        throw ProtocolFault("sync token from unknown core " + std::to_string(origin));
    if (seen[origin])
        throw ProtocolFault("duplicate sync token from core " + std::to_string(origin));
    seen[origin] = 1;
    ++count;
}

} // namespace

RouterStepReport router_step(RouterState& rs, DelayAccumulator& acc, std::uint64_t step)
{
    RouterStepReport report;
    auto& ctr = rs.counters_;
    ++ctr.micro_steps;
    bool right_used = false;
    bool left_used = false;

    auto deliver = [&](const Flit& f, std::uint32_t hops) {
        if (hops > rs.max_hops_allowed_)
            throw ProtocolFault("packet travelled " + std::to_string(hops) + " hops on a " +
                                std::to_string(rs.n_cores_) + "-core ring");
        acc.accumulate_word(f.word, step, f.tag);
        ++ctr.deliveries;
        if (hops > ctr.max_hops)
            ctr.max_hops = hops;
    };

    auto count_edge = [&](bool rightward) {
        ++ctr.hops;
        if (rightward)
        {
            ++ctr.right_traffic;
            ctr.device_crossings += rs.right_edge_crosses_;
        }
        else
        {
            ++ctr.left_traffic;
            ctr.device_crossings += rs.left_edge_crosses_;
        }
    };

    auto serve_neighbour = [&](Link& in, Link& out, bool& used, bool rightward) {
        if (in.empty())
            return;
        const Flit f = in.front();
        switch (word::sync(f.word))
        {
        case SyncClass::data: {
            const auto dst_core = word::dst(f.word) / rs.capacity_;
            if (dst_core == rs.core_)
            {
                const auto src_core = f.tag.src / rs.capacity_;
                const auto d = ring_distance(src_core, rs.core_, rs.n_cores_);
                deliver(f, rightward ? d.right : d.left);
                in.pop();
                report.progress = true;
                return;
            }
            if (used || !out.try_push(f))
            {
                ++ctr.stalls;
                return;
            }
            in.pop();
            used = true;
            count_edge(rightward);
            report.progress = true;
            return;
        }
        case SyncClass::global_sync: {
            const auto origin = word::dst(f.word);
            if (origin == rs.core_)
            {
                in.pop();
                (rightward ? rs.right_home_ : rs.left_home_) = true;
                ++report.tokens_returned;
                report.progress = true;
                return;
            }
            if (used || !out.try_push(f))
            {
                ++ctr.stalls;
                return;
            }
            in.pop();
            used = true;
            ++ctr.token_hops;
            if (rightward)
                mark_seen(rs.seen_right_, rs.seen_right_count_, origin, rs.n_cores_);
            else
                mark_seen(rs.seen_left_, rs.seen_left_count_, origin, rs.n_cores_);
            report.progress = true;
            return;
        }
        case SyncClass::reserved:
            in.pop();
            report.progress = true;
            return;
        case SyncClass::local_sync:
            throw ProtocolFault("LOCAL_SYNC token arrived from a neighbour at core " + std::to_string(rs.core_));
        }
    };

    auto& ports = rs.ports_;
    serve_neighbour(*ports.in_from_left, *ports.out_right, right_used, true);
    serve_neighbour(*ports.in_from_right, *ports.out_left, left_used, false);

    auto inject = [&](const Flit& f, Link& out, bool& used) {
        if (used || out.free_slots() < 2)
            return false;
        out.try_push(f);
        used = true;
        return true;
    };

    Link& local = *ports.local_in;
    for (int i = 0; i < RouterState::local_burst && !local.empty(); ++i)
    {
        const Flit f = local.front();
        const auto sync = word::sync(f.word);
        if (sync == SyncClass::local_sync)
        {
            local.pop();
            report.local_sync_acked = true;
            report.progress = true;
            break;
        }
        if (sync == SyncClass::reserved)
        {
            local.pop();
            continue;
        }
        if (sync == SyncClass::global_sync)
            throw ProtocolFault("GLOBAL_SYNC token in the fetch stream of core " + std::to_string(rs.core_));

        const auto dst_core = word::dst(f.word) / rs.capacity_;
        const auto dir = route_direction(rs.core_, dst_core, rs.n_cores_);
        if (dir == Direction::local)
        {
            deliver(f, 0);
            ++ctr.local_deliveries;
        }
        else if (dir == Direction::right ? inject(f, *ports.out_right, right_used)
                                         : inject(f, *ports.out_left, left_used))
        {
            count_edge(dir == Direction::right);
        }
        else
        {
            ++ctr.stalls;
            break;
        }
        local.pop();
        report.progress = true;
    }

    if (rs.fetch_done_ && local.empty())
    {
        const Flit token{encode(SynapsePacket::global_sync(rs.core_)), {}};
        if (!rs.right_token_sent_ && inject(token, *ports.out_right, right_used))
        {
            rs.right_token_sent_ = true;
            ++ctr.token_hops;
            mark_seen(rs.seen_right_, rs.seen_right_count_, rs.core_, rs.n_cores_);
            report.progress = true;
        }
        if (!rs.left_token_sent_ && inject(token, *ports.out_left, left_used))
        {
            rs.left_token_sent_ = true;
            ++ctr.token_hops;
            mark_seen(rs.seen_left_, rs.seen_left_count_, rs.core_, rs.n_cores_);
            report.progress = true;
        }
    }
    return report;
}

} // namespace neuroring
