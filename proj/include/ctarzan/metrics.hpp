#pragma once

#include <cstdint>

#include "ctarzan/topology.hpp"

namespace ctarzan {

/// Parameter bag for the closed-form latency comparison. tau is the uniform
/// one-hop cost; wf + wr must equal 2 so the weighted sum stays comparable
/// to a plain two-way latency.
struct LatencyModel {
    double tau = 1.0;
    double wf = 1.0;
    double wr = 1.0;
    void validate() const;
};

struct ASQuery {
    NodeId observer;
    NodeId predecessor;
    int horizon = 1;  // forward path length the observer attributes upstream
};

// Candidate initiators from the observer's viewpoint: nodes that can reach
// the predecessor within horizon - 1 link reversals, the observer itself
// excluded from traversal and from the count. The predecessor always counts.
int anonymity_set_size(const Topology& topo, const ASQuery& q);

// Two-way latency of a length-h tunnel with symmetric forward/return paths:
// both directions cost (h + 2) tau.
double tarzan_forward_latency(int h, double tau);
double tarzan_return_latency(int h, double tau);

double ctarzan_forward_latency(int hprime, double tau);

enum class ReturnBoundMode { Even, Odd, Average };

// Mean return latency of the cycle-routed response under the per-pair case
// analysis; an upper bound on the observed mean because deeper shortcut
// events are neglected. Even/Odd modes require matching parity of hprime.
double ctarzan_return_latency_bound(int hprime, double d, double tau, ReturnBoundMode mode);

// Closed forms without the parity restriction, in hop units (tau = 1).
double return_bound_even_form(double hprime, double d);
double return_bound_odd_form(double hprime, double d);
double return_bound_average_form(double hprime, double d);

double weighted_latency(double wf, double wr, double forward, double ret);

// Cover-traffic-preserving parameter maps: 2nk directed links on one side,
// 3nk' on the other.
double equivalent_kprime(double k);
double equivalent_k(double kprime);

// Tunnel length giving C-Tarzan the same weighted latency as a length-h
// bidirectional tunnel, using the Average return form.
double predicted_hprime(double h, double d, double wf, double wr);

// Inverse direction: the bidirectional tunnel length whose weighted latency
// equals the given one. weighted = 2 (h + 2) tau when wf + wr = 2.
double required_tarzan_h(double weighted, double tau);

// Total directed links; a bidirectional link counts twice.
uint64_t cover_traffic(const Topology& topo);

// Geometric interpolation between anonymity sets at consecutive integer
// tunnel lengths; exact at frac 0 and 1.
double interpolate_anonymity_set(double as_floor, double as_ceil, double frac);

}  // namespace ctarzan
