#pragma once

// Hand-built illustration topologies. Each fixture reproduces one of the
// worked uncertainty examples: an observer (grey) node receives a message
// from its predecessor (red) node, and the candidate-sender count is known.

#include <vector>

#include "ctarzan/topology.hpp"

namespace fixtures {

using ctarzan::CycleRecord;
using ctarzan::NodeId;
using ctarzan::Topology;

struct Scene {
    Topology topo;
    NodeId observer;
    NodeId predecessor;
};

// Mutual-mimic topology of degree 3: a ternary tree rooted at the red node,
// grown three levels away from the observer. Candidates: 3 at horizon 2,
// 15 at horizon 4.
inline Scene tarzan_degree3() {
    std::vector<std::pair<uint32_t, uint32_t>> links = {
        {0, 1},                            // observer - red
        {1, 2},  {1, 3},                   // red's other mimics
        {2, 4},  {2, 5},  {3, 6},  {3, 7},
        {4, 8},  {4, 9},  {5, 10}, {5, 11},
        {6, 12}, {6, 13}, {7, 14}, {7, 15},
    };
    return Scene{Topology::from_links(16, links), NodeId{0}, NodeId{1}};
}

// Cycle topology where core nodes sit in two cycles each (in-degree 2).
// Candidates: 3 at horizon 2, 11 at horizon 4.
inline Scene cyclic_degree2() {
    const uint32_t O = 0, R = 1, W0 = 2, v1 = 3, w1 = 4, q = 5, u = 6, r = 7, m = 8, qq = 9,
                   vv = 10, rr = 11, t1 = 12, t2 = 13, t3 = 14;
    std::vector<CycleRecord> cycles = {
        {NodeId{R}, NodeId{O}, NodeId{W0}},  {NodeId{R}, NodeId{v1}, NodeId{w1}},
        {NodeId{q}, NodeId{W0}, NodeId{u}},  {NodeId{r}, NodeId{w1}, NodeId{m}},
        {NodeId{qq}, NodeId{q}, NodeId{t1}}, {NodeId{vv}, NodeId{v1}, NodeId{t2}},
        {NodeId{rr}, NodeId{r}, NodeId{t3}},
    };
    return Scene{Topology::from_cycles(15, cycles), NodeId{O}, NodeId{R}};
}

// Cycle topology with three memberships per core node (in-degree 3), the
// cover-traffic equivalent of the degree-3 mutual topology. Candidates:
// 4 at horizon 2, 30 at horizon 4.
inline Scene cyclic_degree3() {
    const uint32_t O = 0, R = 1, W0 = 2, v = 3, w1 = 4, w2 = 5;
    const uint32_t q1 = 6, q2 = 7, s1 = 8, s2 = 9;
    const uint32_t r1 = 10, r2 = 11, r3 = 12, r4 = 13;
    const uint32_t m1 = 14, m2 = 15, m3 = 16, m4 = 17;
    const uint32_t a1 = 18, a2 = 19, a3 = 20, a4 = 21;
    const uint32_t b1 = 22, b2 = 23, b3 = 24, b4 = 25;
    const uint32_t pv = 26, sv = 27;
    const uint32_t c1 = 28, c2 = 29, c3 = 30, c4 = 31, c5 = 32, c6 = 33, c7 = 34, c8 = 35;
    const uint32_t e1 = 36, e2 = 37, e3 = 38, e4 = 39, e5 = 40, e6 = 41, e7 = 42, e8 = 43;
    auto cyc = [](uint32_t x, uint32_t y, uint32_t z) {
        return CycleRecord{NodeId{x}, NodeId{y}, NodeId{z}};
    };
    std::vector<CycleRecord> cycles = {
        cyc(R, O, W0),   cyc(R, v, w1),   cyc(R, v, w2),
        cyc(q1, W0, s1), cyc(q2, W0, s2),
        cyc(r1, w1, m1), cyc(r2, w1, m2), cyc(r3, w2, m3), cyc(r4, w2, m4),
        cyc(a1, q1, b1), cyc(a2, q1, b2), cyc(a3, q2, b3), cyc(a4, q2, b4),
        cyc(pv, v, sv),
        cyc(c1, r1, e1), cyc(c2, r1, e2), cyc(c3, r2, e3), cyc(c4, r2, e4),
        cyc(c5, r3, e5), cyc(c6, r3, e6), cyc(c7, r4, e7), cyc(c8, r4, e8),
    };
    return Scene{Topology::from_cycles(44, cycles), NodeId{O}, NodeId{R}};
}

}  // namespace fixtures
