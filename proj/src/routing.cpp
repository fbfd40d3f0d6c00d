#include "ctarzan/routing.hpp"

#include <stdexcept>

#include "ctarzan/errors.hpp"
#include "ctarzan/hash.hpp"

namespace ctarzan {

namespace {
constexpr int kTunnelAttempts = 100;
}

Tunnel build_tunnel(const Topology& topo, NodeId initiator, int length, std::mt19937_64& rng) {
    if (length < 1) throw std::invalid_argument("build_tunnel: length must be >= 1");
    if (initiator.index >= topo.size())
        throw std::invalid_argument("build_tunnel: initiator out of range");

    std::vector<uint32_t> sequence;
    std::vector<uint32_t> candidates;
    for (int attempt = 0; attempt < kTunnelAttempts; ++attempt) {
        sequence.clear();
        sequence.push_back(initiator.index);
        bool dead = false;
        for (int step = 0; step < length; ++step) {
            candidates.clear();
            for (uint32_t v : topo.out_links(NodeId{sequence.back()})) {
                bool used = false;
                for (uint32_t s : sequence)
                    if (s == v) {
                        used = true;
                        break;
                    }
                if (!used) candidates.push_back(v);
            }
            if (candidates.empty()) {
                dead = true;
                break;
            }
            sequence.push_back(candidates[bounded_uniform(rng, candidates.size())]);
        }
        if (!dead) {
            Tunnel t{initiator, {}};
            t.relays.reserve(length);
            for (size_t i = 1; i < sequence.size(); ++i) t.relays.push_back(NodeId{sequence[i]});
            return t;
        }
    }
    throw TunnelUnbuildable("no loop-free walk of requested length from " +
                            node_address(initiator));
}

PairCase classify_pair(const Topology& topo, NodeId r_prev2, NodeId r_prev1, NodeId r) {
    for (uint32_t idx : topo.cycles_with_edge(r_prev2, r_prev1)) {
        if (*topo.cycles()[idx].third_member(r_prev2, r_prev1) == r) return PairCase::SameCycle;
    }
    return PairCase::DifferentCycle;
}

ReturnRoute compute_return_route(const Topology& topo, const Tunnel& tunnel) {
    std::vector<NodeId> seq;
    seq.reserve(tunnel.relays.size() + 1);
    seq.push_back(tunnel.initiator);
    for (NodeId r : tunnel.relays) seq.push_back(r);

    ReturnRoute route;
    int j = static_cast<int>(seq.size()) - 1;
    route.hops.push_back(seq[j]);
    route.origin.push_back(j);
    if (topo.kind() == Kind::Tarzan) {
        // Bidirectional links: the response retraces the tunnel.
        for (int i = j - 1; i >= 0; --i) {
            route.hops.push_back(seq[i]);
            route.origin.push_back(i);
        }
        return route;
    }
    while (j > 0) {
        if (j >= 2 && classify_pair(topo, seq[j - 2], seq[j - 1], seq[j]) == PairCase::SameCycle) {
            route.hops.push_back(seq[j - 2]);
            route.origin.push_back(j - 2);
            j -= 2;
        } else {
            const NodeId via = next(topo, seq[j], seq[j - 1]);
            route.hops.push_back(via);
            route.origin.push_back(-1);
            route.hops.push_back(seq[j - 1]);
            route.origin.push_back(j - 1);
            j -= 1;
        }
    }
    return route;
}

int forward_hop_count(const Tunnel& tunnel) {
    return static_cast<int>(tunnel.relays.size()) + 2;
}

int return_hop_count(const ReturnRoute& route) {
    return static_cast<int>(route.hops.size()) - 1 + 2;
}

}  // namespace ctarzan
