#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "ctarzan/errors.hpp"
#include "ctarzan/hash.hpp"
#include "ctarzan/routing.hpp"
#include "ctarzan/topology.hpp"
#include "oracles.hpp"

using namespace ctarzan;

namespace {

std::vector<NodeId> sequence_of(const Tunnel& t) {
    std::vector<NodeId> seq{t.initiator};
    seq.insert(seq.end(), t.relays.begin(), t.relays.end());
    return seq;
}

}  // namespace

TEST_CASE("tunnels walk stored links without repeats") {
    Topology topo = build_topology(Kind::CTarzan, 400, 2, 3);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        NodeId a{uint32_t(t % topo.size())};
        Tunnel tun = build_tunnel(topo, a, 4, rng);
        REQUIRE(tun.relays.size() == 4);
        auto seq = sequence_of(tun);
        std::set<uint32_t> uniq;
        for (NodeId x : seq) uniq.insert(x.index);
        CHECK(uniq.size() == seq.size());
        for (size_t i = 0; i + 1 < seq.size(); ++i) CHECK(topo.has_link(seq[i], seq[i + 1]));
    }
}

TEST_CASE("a length-one tunnel picks an outgoing mimic") {
    Topology topo = build_topology(Kind::CTarzan, 50, 1, 8);
    std::mt19937_64 rng(2);
    Tunnel t = build_tunnel(topo, NodeId{7}, 1, rng);
    REQUIRE(t.relays.size() == 1);
    CHECK(topo.has_link(NodeId{7}, t.relays[0]));
    CHECK_THROWS_AS(build_tunnel(topo, NodeId{7}, 0, rng), std::invalid_argument);
}

TEST_CASE("first-relay choice is uniform over outgoing links") {
    Topology topo = build_topology(Kind::CTarzan, 300, 2, 12);
    NodeId a{5};
    auto outs = topo.out_links(a);
    REQUIRE(outs.size() >= 4);
    std::map<uint32_t, uint64_t> counts;
    std::mt19937_64 rng(3);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        Tunnel t = build_tunnel(topo, a, 1, rng);
        counts[t.relays[0].index]++;
    }
    std::vector<uint64_t> freq;
    for (uint32_t v : outs) freq.push_back(counts[v]);
    double expected = double(draws) / double(outs.size());
    double stat = oracle::chi_square(freq, expected);
    double df = double(outs.size() - 1);
    CHECK(stat < df + 3.0 * std::sqrt(2.0 * df));
}

TEST_CASE("dead ends trigger whole-tunnel resampling and finally give up") {
    Topology one = Topology::from_cycles(3, {CycleRecord{NodeId{0}, NodeId{1}, NodeId{2}}});
    std::mt19937_64 rng(4);
    Tunnel two = build_tunnel(one, NodeId{0}, 2, rng);
    CHECK(two.relays.size() == 2);
    CHECK_THROWS_AS(build_tunnel(one, NodeId{0}, 3, rng), TunnelUnbuildable);
}

TEST_CASE("classify_pair distinguishes shared cycles") {
    Topology topo = Topology::from_cycles(5, {CycleRecord{NodeId{0}, NodeId{1}, NodeId{2}},
                                              CycleRecord{NodeId{1}, NodeId{3}, NodeId{4}}});
    CHECK(classify_pair(topo, NodeId{0}, NodeId{1}, NodeId{2}) == PairCase::SameCycle);
    CHECK(classify_pair(topo, NodeId{1}, NodeId{2}, NodeId{0}) == PairCase::SameCycle);
    // Valid walk 0 -> 1 -> 3, but node 3 belongs to the second cycle, not the
    // one that contains edge 0 -> 1.
    CHECK(classify_pair(topo, NodeId{0}, NodeId{1}, NodeId{3}) == PairCase::DifferentCycle);
}

TEST_CASE("same-cycle frequency approaches 1/d") {
    Topology topo = build_topology(Kind::CTarzan, 10000, 2, 6);
    double d = degree_stats(topo).d;
    std::mt19937_64 rng(5);
    uint64_t same = 0, total = 0;
    while (total < 12000) {
        NodeId a{uint32_t(bounded_uniform(rng, topo.size()))};
        Tunnel t = build_tunnel(topo, a, 4, rng);
        auto seq = sequence_of(t);
        for (size_t j = 2; j < seq.size(); j += 2) {
            if (classify_pair(topo, seq[j - 2], seq[j - 1], seq[j]) == PairCase::SameCycle) ++same;
            ++total;
        }
    }
    double freq = double(same) / double(total);
    CHECK(freq == doctest::Approx(1.0 / d).epsilon(0.15));
}

TEST_CASE("a tunnel inside one cycle returns in a single link") {
    Topology topo = Topology::from_cycles(3, {CycleRecord{NodeId{0}, NodeId{1}, NodeId{2}}});
    Tunnel t{NodeId{0}, {NodeId{1}, NodeId{2}}};
    ReturnRoute route = compute_return_route(topo, t);
    REQUIRE(route.hops.size() == 2);
    CHECK(route.hops[0] == NodeId{2});
    CHECK(route.hops[1] == NodeId{0});
    CHECK(route.origin[0] == 2);
    CHECK(route.origin[1] == 0);
    CHECK(return_hop_count(route) == 3);
}

TEST_CASE("a cross-cycle pair detours through the closing nodes") {
    // Tunnel a->b->d where b->d lives in a second cycle: the reply leaves d
    // through that cycle's closing node e, then leaves b through c.
    const NodeId a{0}, b{1}, c{2}, dd{3}, e{4};
    Topology topo =
        Topology::from_cycles(5, {CycleRecord{a, b, c}, CycleRecord{b, dd, e}});
    Tunnel t{a, {b, dd}};
    ReturnRoute route = compute_return_route(topo, t);
    REQUIRE(route.hops.size() == 5);
    CHECK(route.hops[0] == dd);
    CHECK(route.hops[1] == e);
    CHECK(route.hops[2] == b);
    CHECK(route.hops[3] == c);
    CHECK(route.hops[4] == a);
    CHECK(route.origin[0] == 2);
    CHECK(route.origin[1] == -1);
    CHECK(route.origin[2] == 1);
    CHECK(route.origin[3] == -1);
    CHECK(route.origin[4] == 0);
    CHECK(return_hop_count(route) == 6);
}

TEST_CASE("return routes are valid walks ending at the initiator") {
    Topology topo = build_topology(Kind::CTarzan, 2000, 2, 7);
    std::mt19937_64 rng(8);
    for (int t = 0; t < 300; ++t) {
        NodeId a{uint32_t(bounded_uniform(rng, topo.size()))};
        int len = 1 + int(bounded_uniform(rng, 5));
        Tunnel tun = build_tunnel(topo, a, len, rng);
        ReturnRoute route = compute_return_route(topo, tun);
        auto seq = sequence_of(tun);
        REQUIRE(route.hops.size() == route.origin.size());
        CHECK(route.hops.front() == seq.back());
        CHECK(route.hops.back() == a);
        CHECK(route.origin.front() == int(seq.size()) - 1);
        CHECK(route.origin.back() == 0);
        for (size_t i = 0; i + 1 < route.hops.size(); ++i)
            CHECK(topo.has_link(route.hops[i], route.hops[i + 1]));
        for (size_t i = 0; i < route.hops.size(); ++i) {
            if (route.origin[i] >= 0) CHECK(route.hops[i] == seq[size_t(route.origin[i])]);
        }
        int links = int(route.hops.size()) - 1;
        CHECK(links == oracle::route_link_count(topo, tun));
        CHECK(links <= 2 * len);
        CHECK(links >= (len + 1) / 2);
    }
}

TEST_CASE("even-length tunnels stay between the all-direct and all-detour costs") {
    Topology topo = build_topology(Kind::CTarzan, 2000, 2, 9);
    std::mt19937_64 rng(10);
    for (int t = 0; t < 100; ++t) {
        NodeId a{uint32_t(bounded_uniform(rng, topo.size()))};
        Tunnel tun = build_tunnel(topo, a, 4, rng);
        int links = int(compute_return_route(topo, tun).hops.size()) - 1;
        CHECK(links <= (4 / 2) * 4);
        CHECK(links >= (4 / 2) * 1);
    }
}

TEST_CASE("mimic-topology return routes reverse the tunnel") {
    Topology topo = build_topology(Kind::Tarzan, 500, 3, 11);
    std::mt19937_64 rng(12);
    for (int t = 0; t < 50; ++t) {
        NodeId a{uint32_t(bounded_uniform(rng, topo.size()))};
        Tunnel tun = build_tunnel(topo, a, 3, rng);
        ReturnRoute route = compute_return_route(topo, tun);
        auto seq = sequence_of(tun);
        REQUIRE(route.hops.size() == seq.size());
        for (size_t i = 0; i < seq.size(); ++i) {
            CHECK(route.hops[i] == seq[seq.size() - 1 - i]);
            CHECK(route.origin[i] == int(seq.size() - 1 - i));
        }
        CHECK(return_hop_count(route) == 3 + 2);
    }
}

TEST_CASE("hop counts add the two proxy-side legs") {
    Tunnel three{NodeId{0}, {NodeId{1}, NodeId{2}, NodeId{3}}};
    CHECK(forward_hop_count(three) == 5);
    Tunnel one{NodeId{0}, {NodeId{1}}};
    CHECK(forward_hop_count(one) == 3);
    for (int h = 1; h <= 10; ++h) {
        Tunnel t{NodeId{0}, std::vector<NodeId>(size_t(h), NodeId{1})};
        CHECK(forward_hop_count(t) == h + 2);
    }

    ReturnRoute two_hop;
    two_hop.hops = {NodeId{2}, NodeId{0}};
    two_hop.origin = {2, 0};
    CHECK(return_hop_count(two_hop) == 3);
    ReturnRoute four_links;
    four_links.hops = {NodeId{3}, NodeId{4}, NodeId{1}, NodeId{2}, NodeId{0}};
    four_links.origin = {2, -1, 1, -1, 0};
    CHECK(return_hop_count(four_links) == 6);
}
