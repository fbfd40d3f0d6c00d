#include "ctarzan/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "ctarzan/errors.hpp"

namespace ctarzan {

void LatencyModel::validate() const {
    if (tau <= 0) throw std::invalid_argument("latency model: tau must be positive");
    if (wf < 0 || wr < 0 || std::abs(wf + wr - 2.0) > 1e-12)
        throw std::invalid_argument("latency model: weights must be nonnegative and sum to 2");
}

int anonymity_set_size(const Topology& topo, const ASQuery& q) {
    if (q.horizon < 1) throw std::invalid_argument("anonymity set: horizon must be >= 1");
    if (q.observer == q.predecessor)
        throw std::invalid_argument("anonymity set: observer cannot be its own predecessor");
    if (!topo.has_link(q.predecessor, q.observer))
        throw std::invalid_argument("anonymity set: predecessor does not feed the observer");

    const uint32_t n = topo.size();
    std::vector<uint8_t> seen(n, 0);
    std::vector<uint32_t> frontier{q.predecessor.index}, nextf;
    seen[q.predecessor.index] = 1;
    seen[q.observer.index] = 1;  // never traversed, never counted
    int count = 1;
    for (int depth = 1; depth <= q.horizon - 1 && !frontier.empty(); ++depth) {
        nextf.clear();
        for (uint32_t v : frontier) {
            for (uint32_t u : topo.in_links(NodeId{v})) {
                if (seen[u]) continue;
                seen[u] = 1;
                ++count;
                nextf.push_back(u);
            }
        }
        frontier.swap(nextf);
    }
    return count;
}

double tarzan_forward_latency(int h, double tau) {
    return (h + 2) * tau;
}

double tarzan_return_latency(int h, double tau) {
    return (h + 2) * tau;
}

double ctarzan_forward_latency(int hprime, double tau) {
    return (hprime + 2) * tau;
}

double return_bound_even_form(double hprime, double d) {
    return hprime * (2.0 - 3.0 / (2.0 * d)) + 2.0;
}

double return_bound_odd_form(double hprime, double d) {
    return (hprime - 1.0) * (2.0 - 3.0 / (2.0 * d)) + 4.0;
}

double return_bound_average_form(double hprime, double d) {
    return hprime * (2.0 - 3.0 / (2.0 * d)) + 3.0 / (4.0 * d) + 2.0;
}

double ctarzan_return_latency_bound(int hprime, double d, double tau, ReturnBoundMode mode) {
    if (hprime < 1) throw std::invalid_argument("return bound: hprime must be >= 1");
    if (d <= 0) throw std::invalid_argument("return bound: d must be positive");
    switch (mode) {
        case ReturnBoundMode::Even:
            if (hprime % 2 != 0) throw ParityMismatch("even-form bound needs even hprime");
            return return_bound_even_form(hprime, d) * tau;
        case ReturnBoundMode::Odd:
            if (hprime % 2 != 1) throw ParityMismatch("odd-form bound needs odd hprime");
            return return_bound_odd_form(hprime, d) * tau;
        case ReturnBoundMode::Average:
            return return_bound_average_form(hprime, d) * tau;
    }
    throw std::logic_error("return bound: bad mode");
}

double weighted_latency(double wf, double wr, double forward, double ret) {
    return wf * forward + wr * ret;
}

double equivalent_kprime(double k) {
    if (k < 0) throw std::invalid_argument("equivalent_kprime: k must be nonnegative");
    return 2.0 * k / 3.0;
}

double equivalent_k(double kprime) {
    if (kprime < 0) throw std::invalid_argument("equivalent_k: kprime must be nonnegative");
    return 3.0 * kprime / 2.0;
}

double predicted_hprime(double h, double d, double wf, double wr) {
    if (d <= 0) throw std::invalid_argument("predicted_hprime: d must be positive");
    return (2.0 * h - (3.0 / (4.0 * d)) * wr) / (wf + ((4.0 * d - 3.0) / (2.0 * d)) * wr);
}

double required_tarzan_h(double weighted, double tau) {
    if (tau <= 0) throw std::invalid_argument("required_tarzan_h: tau must be positive");
    return (weighted - 4.0 * tau) / (2.0 * tau);
}

uint64_t cover_traffic(const Topology& topo) {
    return degree_stats(topo).total_directed_links;
}

double interpolate_anonymity_set(double as_floor, double as_ceil, double frac) {
    if (as_floor <= 0 || as_ceil <= 0)
        throw std::invalid_argument("interpolate: anonymity sets must be positive");
    if (frac < 0 || frac > 1) throw std::invalid_argument("interpolate: frac out of [0,1]");
    return as_floor * std::pow(as_ceil / as_floor, frac);
}

}  // namespace ctarzan
