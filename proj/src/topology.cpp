#include "ctarzan/topology.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ctarzan/errors.hpp"
#include "ctarzan/hash.hpp"

namespace ctarzan {

namespace {

constexpr int kRetryLimit = 32;

uint64_t edge_key(uint32_t u, uint32_t v) {
    return (static_cast<uint64_t>(u) << 32) | v;
}

std::string retry_key(const std::string& base, int retry) {
    if (retry == 0) return base;
    return base + '&' + std::to_string(retry);
}

bool contains(const std::vector<NodeId>& xs, NodeId v) {
    for (NodeId x : xs)
        if (x == v) return true;
    return false;
}

}  // namespace

bool Topology::has_link(NodeId u, NodeId v) const {
    const auto& row = out_[u.index];
    return std::binary_search(row.begin(), row.end(), v.index);
}

std::vector<uint32_t> Topology::cycles_with_edge(NodeId u, NodeId v) const {
    const uint64_t key = edge_key(u.index, v.index);
    auto lo = std::lower_bound(edge_cycles_.begin(), edge_cycles_.end(),
                               std::make_pair(key, uint32_t{0}));
    std::vector<uint32_t> out;
    for (; lo != edge_cycles_.end() && lo->first == key; ++lo) out.push_back(lo->second);
    return out;
}

void Topology::add_directed(uint32_t u, uint32_t v) {
    out_[u].push_back(v);
    in_[v].push_back(u);
}

void Topology::add_cycle(const CycleRecord& rec) {
    const uint32_t idx = static_cast<uint32_t>(cycles_.size());
    cycles_.push_back(rec);
    add_directed(rec.a.index, rec.b.index);
    add_directed(rec.b.index, rec.c.index);
    add_directed(rec.c.index, rec.a.index);
    edge_cycles_.emplace_back(edge_key(rec.a.index, rec.b.index), idx);
    edge_cycles_.emplace_back(edge_key(rec.b.index, rec.c.index), idx);
    edge_cycles_.emplace_back(edge_key(rec.c.index, rec.a.index), idx);
}

void Topology::finalize() {
    for (auto& row : out_) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    for (auto& row : in_) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    std::sort(edge_cycles_.begin(), edge_cycles_.end());
}

Topology Topology::from_cycles(uint32_t n, const std::vector<CycleRecord>& cycles, double param,
                               uint64_t seed) {
    Topology t;
    t.kind_ = Kind::CTarzan;
    t.n_ = n;
    t.param_ = param;
    t.seed_ = seed;
    t.out_.resize(n);
    t.in_.resize(n);
    for (const auto& rec : cycles) {
        if (rec.a.index >= n || rec.b.index >= n || rec.c.index >= n)
            throw std::invalid_argument("from_cycles: node out of range");
        if (rec.a == rec.b || rec.b == rec.c || rec.c == rec.a)
            throw std::invalid_argument("from_cycles: degenerate cycle");
        t.add_cycle(rec);
    }
    t.finalize();
    return t;
}

Topology Topology::from_links(uint32_t n, const std::vector<std::pair<uint32_t, uint32_t>>& links,
                              double param, uint64_t seed) {
    Topology t;
    t.kind_ = Kind::Tarzan;
    t.n_ = n;
    t.param_ = param;
    t.seed_ = seed;
    t.out_.resize(n);
    t.in_.resize(n);
    for (auto [u, v] : links) {
        if (u >= n || v >= n) throw std::invalid_argument("from_links: node out of range");
        if (u == v) throw std::invalid_argument("from_links: self link");
        t.add_directed(u, v);
        t.add_directed(v, u);
    }
    t.finalize();
    return t;
}

std::vector<NodeId> select_tarzan_mimics(const Directory& dir, NodeId a, int k) {
    const std::string base = node_address(a);
    std::vector<NodeId> chosen;
    chosen.reserve(k);
    for (int i = 2; i <= k + 1; ++i) {
        bool ok = false;
        for (int retry = 0; retry <= kRetryLimit; ++retry) {
            NodeId cand = dir.iterated_lookup(retry_key(base, retry), i);
            if (cand != a && !contains(chosen, cand)) {
                chosen.push_back(cand);
                ok = true;
                break;
            }
        }
        if (!ok)
            throw DegenerateNetwork("mimic selection exhausted retries at node " + base);
    }
    return chosen;
}

std::vector<CycleRecord> select_ctarzan_cycles(const Directory& dir, NodeId a, int kprime) {
    const std::string base = node_address(a);
    std::vector<CycleRecord> cycles;
    std::vector<NodeId> bs;
    cycles.reserve(kprime);
    for (int i = 2; i <= kprime + 1; ++i) {
        NodeId b{};
        bool ok = false;
        for (int retry = 0; retry <= kRetryLimit; ++retry) {
            NodeId cand = dir.iterated_lookup(retry_key(base, retry), i);
            if (cand != a && !contains(bs, cand)) {
                b = cand;
                ok = true;
                break;
            }
        }
        if (!ok)
            throw DegenerateNetwork("cycle selection exhausted retries at node " + base);
        bs.push_back(b);

        const std::string pair_base = base + node_address(b);
        NodeId c{};
        ok = false;
        for (int retry = 0; retry <= kRetryLimit; ++retry) {
            NodeId cand = dir.iterated_lookup(retry_key(pair_base, retry), i);
            if (cand != a && cand != b) {
                c = cand;
                ok = true;
                break;
            }
        }
        if (!ok)
            throw DegenerateNetwork("closing selection exhausted retries at node " + base);
        cycles.push_back(CycleRecord{a, b, c});
    }
    return cycles;
}

int node_selection_count(double param, uint64_t seed, NodeId a) {
    const int lo = static_cast<int>(std::floor(param));
    const double frac = param - lo;
    if (frac <= 0) return lo;
    const uint64_t bits = splitmix64(seed ^ 0x6b79636c65736cULL ^ (uint64_t{a.index} << 20));
    return lo + (unit_real(bits) < frac ? 1 : 0);
}

Topology build_topology_real(Kind kind, uint32_t n, double param, uint64_t seed) {
    if (n < 10) throw std::invalid_argument("build_topology: n must be >= 10");
    if (param < 1.0) throw std::invalid_argument("build_topology: param must be >= 1");
    Topology t;
    t.kind_ = kind;
    t.n_ = n;
    t.param_ = param;
    t.seed_ = seed;
    t.out_.resize(n);
    t.in_.resize(n);
    t.dir_ = std::make_shared<Directory>(n, seed);

    for (uint32_t idx = 0; idx < n; ++idx) {
        const NodeId a{idx};
        const int count = node_selection_count(param, seed, a);
        if (kind == Kind::Tarzan) {
            for (NodeId m : select_tarzan_mimics(*t.dir_, a, count)) {
                t.add_directed(a.index, m.index);
                t.add_directed(m.index, a.index);
            }
        } else {
            for (const auto& rec : select_ctarzan_cycles(*t.dir_, a, count)) t.add_cycle(rec);
        }
    }
    t.finalize();
    return t;
}

Topology build_topology(Kind kind, uint32_t n, int param, uint64_t seed) {
    return build_topology_real(kind, n, static_cast<double>(param), seed);
}

Topology build_topology_direct(Kind kind, uint32_t n, double param, uint64_t seed) {
    if (n < 10) throw std::invalid_argument("build_topology_direct: n must be >= 10");
    if (param < 1.0) throw std::invalid_argument("build_topology_direct: param must be >= 1");
    Topology t;
    t.kind_ = kind;
    t.n_ = n;
    t.param_ = param;
    t.seed_ = seed;
    t.out_.resize(n);
    t.in_.resize(n);
    std::mt19937_64 rng(splitmix64(seed ^ 0x6469726563747365ULL));

    auto draw = [&](NodeId a, NodeId b, const std::vector<NodeId>& taken) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            NodeId cand{static_cast<uint32_t>(bounded_uniform(rng, n))};
            if (cand != a && cand != b && !contains(taken, cand)) return cand;
        }
        throw DegenerateNetwork("direct selection exhausted draws at node " + node_address(a));
    };

    std::vector<NodeId> none;
    for (uint32_t idx = 0; idx < n; ++idx) {
        const NodeId a{idx};
        const int count = node_selection_count(param, seed, a);
        if (count > static_cast<int>(n) - 2)
            throw DegenerateNetwork("direct selection: network too small for parameter");
        if (kind == Kind::Tarzan) {
            std::vector<NodeId> chosen;
            chosen.reserve(count);
            for (int i = 0; i < count; ++i) {
                NodeId m = draw(a, a, chosen);
                chosen.push_back(m);
                t.add_directed(a.index, m.index);
                t.add_directed(m.index, a.index);
            }
        } else {
            std::vector<NodeId> bs;
            bs.reserve(count);
            for (int i = 0; i < count; ++i) {
                NodeId b = draw(a, a, bs);
                bs.push_back(b);
                NodeId c = draw(a, b, none);
                t.add_cycle(CycleRecord{a, b, c});
            }
        }
    }
    t.finalize();
    return t;
}

NodeId next(const Topology& topo, NodeId c, NodeId b) {
    auto candidates = topo.cycles_with_edge(b, c);
    if (candidates.empty())
        throw NoSharedCycle("no registered cycle contains edge " + node_address(b) + " -> " +
                            node_address(c));
    bool have = false;
    std::pair<uint32_t, uint32_t> best{};  // (closing node, result)
    NodeId result{};
    for (uint32_t idx : candidates) {
        const CycleRecord& rec = topo.cycles()[idx];
        const NodeId third = *rec.third_member(b, c);
        const std::pair<uint32_t, uint32_t> rank{rec.closing_node().index, third.index};
        if (!have || rank < best) {
            have = true;
            best = rank;
            result = third;
        }
    }
    return result;
}

bool verify_selection(const Topology& topo, NodeId a, NodeId b, int i, std::optional<NodeId> c) {
    const Directory* dir = topo.directory();
    if (!dir) return false;
    if (a.index >= topo.size()) return false;
    const int count = node_selection_count(topo.param(), topo.seed(), a);
    if (i < 2 || i > count + 1) return false;
    if (topo.kind() == Kind::Tarzan) {
        if (c) return false;
        const auto mimics = select_tarzan_mimics(*dir, a, count);
        return mimics[i - 2] == b;
    }
    const auto cycles = select_ctarzan_cycles(*dir, a, count);
    const CycleRecord& rec = cycles[i - 2];
    if (rec.b != b) return false;
    return !c || rec.c == *c;
}

DegreeStats degree_stats(const Topology& topo) {
    DegreeStats s;
    const uint32_t n = topo.size();
    uint64_t out_total = 0, in_total = 0;
    for (uint32_t i = 0; i < n; ++i) {
        out_total += topo.out_links(NodeId{i}).size();
        in_total += topo.in_links(NodeId{i}).size();
    }
    s.total_directed_links = out_total;
    s.mean_out = n ? static_cast<double>(out_total) / n : 0;
    s.mean_in = n ? static_cast<double>(in_total) / n : 0;
    s.d = s.mean_out;
    return s;
}

void dump_topology(const Topology& topo, std::ostream& os) {
    char head[128];
    std::snprintf(head, sizeof(head), "%s %u %.17g %" PRIu64 "\n",
                  topo.kind() == Kind::Tarzan ? "tarzan" : "ctarzan", topo.size(), topo.param(),
                  topo.seed());
    os << head;
    if (topo.kind() == Kind::CTarzan) {
        for (const auto& rec : topo.cycles())
            os << "CYCLE " << rec.a.index << ' ' << rec.b.index << ' ' << rec.c.index << '\n';
        return;
    }
    for (uint32_t u = 0; u < topo.size(); ++u)
        for (uint32_t v : topo.out_links(NodeId{u}))
            if (u < v) os << "LINK " << u << ' ' << v << '\n';
}

Topology load_topology(std::istream& is) {
    std::string kind_token;
    uint32_t n = 0;
    double param = 0;
    uint64_t seed = 0;
    if (!(is >> kind_token >> n >> param >> seed))
        throw std::invalid_argument("load_topology: bad header");
    Kind kind;
    if (kind_token == "tarzan")
        kind = Kind::Tarzan;
    else if (kind_token == "ctarzan")
        kind = Kind::CTarzan;
    else
        throw std::invalid_argument("load_topology: unknown kind " + kind_token);

    Topology t;
    t.kind_ = kind;
    t.n_ = n;
    t.param_ = param;
    t.seed_ = seed;
    t.out_.resize(n);
    t.in_.resize(n);

    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "CYCLE") {
            uint32_t a, b, c;
            if (!(ls >> a >> b >> c) || a >= n || b >= n || c >= n)
                throw std::invalid_argument("load_topology: bad CYCLE record");
            t.add_cycle(CycleRecord{NodeId{a}, NodeId{b}, NodeId{c}});
        } else if (tag == "LINK") {
            uint32_t u, v;
            if (!(ls >> u >> v) || u >= n || v >= n)
                throw std::invalid_argument("load_topology: bad LINK record");
            if (kind == Kind::Tarzan) {
                t.add_directed(u, v);
                t.add_directed(v, u);
            } else {
                t.add_directed(u, v);
            }
        } else {
            throw std::invalid_argument("load_topology: unknown record " + tag);
        }
    }
    t.finalize();
    return t;
}

}  // namespace ctarzan
