#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctarzan/directory.hpp"
#include "ctarzan/node.hpp"

namespace ctarzan {

enum class Kind { Tarzan, CTarzan };

/// Directed 3-cycle a -> b -> c -> a. `a` initiated the selection, `b` was
/// drawn from a's address chain, `c` from the concatenated chain and closes
/// the cycle back to a.
struct CycleRecord {
    NodeId a, b, c;

    // Remaining member given a consecutive ordered pair of the cycle, or
    // nullopt when (u, v) is not an edge of this cycle.
    std::optional<NodeId> third_member(NodeId u, NodeId v) const {
        if (a == u && b == v) return c;
        if (b == u && c == v) return a;
        if (c == u && a == v) return b;
        return std::nullopt;
    }
    NodeId closing_node() const { return c; }
};

struct DegreeStats {
    double mean_out = 0;
    double mean_in = 0;
    uint64_t total_directed_links = 0;
    double d = 0;  // mean out-degree (CTarzan) or mean mimic count (Tarzan)
};

class Topology {
  public:
    Kind kind() const { return kind_; }
    uint32_t size() const { return n_; }
    double param() const { return param_; }
    uint64_t seed() const { return seed_; }

    std::span<const uint32_t> out_links(NodeId u) const { return out_[u.index]; }
    std::span<const uint32_t> in_links(NodeId u) const { return in_[u.index]; }
    bool has_link(NodeId u, NodeId v) const;

    const std::vector<CycleRecord>& cycles() const { return cycles_; }
    // Indices of registered cycles containing directed edge u -> v.
    std::vector<uint32_t> cycles_with_edge(NodeId u, NodeId v) const;

    const Directory* directory() const { return dir_.get(); }

    static Topology from_cycles(uint32_t n, const std::vector<CycleRecord>& cycles,
                                double param = 0, uint64_t seed = 0);
    static Topology from_links(uint32_t n, const std::vector<std::pair<uint32_t, uint32_t>>& links,
                               double param = 0, uint64_t seed = 0);

    friend Topology build_topology_real(Kind, uint32_t, double, uint64_t);
    friend Topology build_topology_direct(Kind, uint32_t, double, uint64_t);
    friend Topology load_topology(std::istream&);

  private:
    Topology() = default;
    void add_directed(uint32_t u, uint32_t v);
    void add_cycle(const CycleRecord& rec);
    void finalize();

    Kind kind_ = Kind::CTarzan;
    uint32_t n_ = 0;
    double param_ = 0;
    uint64_t seed_ = 0;
    std::vector<std::vector<uint32_t>> out_, in_;
    std::vector<CycleRecord> cycles_;
    std::vector<std::pair<uint64_t, uint32_t>> edge_cycles_;  // (edge key, cycle index) sorted
    std::shared_ptr<const Directory> dir_;
};

// Mimic selection for one node: the chain results at depths 2..k+1. A result
// equal to the selector or an already chosen mimic is re-drawn with a retry
// suffix on the seed key, up to 32 retries.
std::vector<NodeId> select_tarzan_mimics(const Directory& dir, NodeId a, int k);

// Cycle selection for one node: b_i from a's address chain, c_i from the
// chain of a.address || b_i.address, both at depth i. Triples are pairwise
// distinct; re-draw rules mirror mimic selection.
std::vector<CycleRecord> select_ctarzan_cycles(const Directory& dir, NodeId a, int kprime);

// Per-node selection count for a fractional parameter: floor(param) plus one
// with probability frac(param), decided by a seed-keyed hash of the node.
int node_selection_count(double param, uint64_t seed, NodeId a);

Topology build_topology(Kind kind, uint32_t n, int param, uint64_t seed);
// Fractional mean selection parameter; integral values behave exactly like
// build_topology.
Topology build_topology_real(Kind kind, uint32_t n, double param, uint64_t seed);

// Each node picks its partners uniformly at random instead of through the
// directory chain, mirroring the measurement-harness setting where selections
// are made directly. Same mean-degree laws as the chain generator, but
// selection frequency no longer tracks ring arc sizes, so degree variance is
// lower and selections are not directory-verifiable.
Topology build_topology_direct(Kind kind, uint32_t n, double param, uint64_t seed);

// The node completing a registered cycle that realizes links b -> c, c -> a,
// a -> b. When several cycles share edge b -> c, the one with the lowest
// closing-node id wins (then lowest result id).
NodeId next(const Topology& topo, NodeId c, NodeId b);

// True iff re-running the selection chain for `a` reproduces `b` (and `c`
// when given) at chain index i.
bool verify_selection(const Topology& topo, NodeId a, NodeId b, int i,
                      std::optional<NodeId> c = std::nullopt);

DegreeStats degree_stats(const Topology& topo);

void dump_topology(const Topology& topo, std::ostream& os);
Topology load_topology(std::istream& is);

}  // namespace ctarzan
