#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ctarzan/topology.hpp"

namespace ctarzan {

struct Tunnel {
    NodeId initiator;
    std::vector<NodeId> relays;  // in forward order, no repeats, initiator excluded
};

/// Response path from the last relay back to the initiator. hops front() is
/// the last relay, back() is the initiator. origin[i] is the position of
/// hops[i] in the forward sequence (0 = initiator, j >= 1 = relay j), or -1
/// for a cycle intermediate that carries the response without being part of
/// the tunnel.
struct ReturnRoute {
    std::vector<NodeId> hops;
    std::vector<int32_t> origin;
};

enum class PairCase { SameCycle, DifferentCycle };

// Uniform forward walk over outgoing links, skipping nodes already in the
// tunnel. A dead end discards the whole attempt; after 100 attempts the
// tunnel is unbuildable.
Tunnel build_tunnel(const Topology& topo, NodeId initiator, int length, std::mt19937_64& rng);

// SameCycle iff r closes a registered cycle containing edge r_prev2 -> r_prev1
// (the probability-1/d shortcut event). Edge existence r -> r_prev2 through an
// unrelated cycle does not qualify.
PairCase classify_pair(const Topology& topo, NodeId r_prev2, NodeId r_prev1, NodeId r);

ReturnRoute compute_return_route(const Topology& topo, const Tunnel& tunnel);

// Overlay hops plus the two terminal legs (last relay <-> exit, exit <->
// destination side) counted by the latency model.
int forward_hop_count(const Tunnel& tunnel);
int return_hop_count(const ReturnRoute& route);

}  // namespace ctarzan
