#include "ctarzan/directory.hpp"

#include <algorithm>
#include <stdexcept>

#include "ctarzan/hash.hpp"

namespace ctarzan {

Directory::Directory(uint32_t n, uint64_t seed) : n_(n), seed_(seed) {
    if (n == 0) throw std::invalid_argument("directory: empty network");
    if (n >= (1u << 24)) throw std::invalid_argument("directory: address space exhausted");
    ring_.reserve(n);
    for (uint32_t i = 0; i < n; ++i) {
        ring_.emplace_back(key_position(node_address(NodeId{i})), i);
    }
    // Sorting by (position, id) makes the rare position collision
    // deterministic: the lower node id is the successor.
    std::sort(ring_.begin(), ring_.end());
}

uint64_t Directory::key_position(std::string_view key) const {
    // FNV-1a alone places near-identical strings (sequential addresses,
    // retry and chain suffixes) at positions that differ by small multiples
    // of the FNV prime, which collapses successor lookups into a handful of
    // cluster minima. The bijective finisher spreads those clusters over the
    // whole ring while keeping positions publicly recomputable.
    return splitmix64(fnv1a64(key, seed_));
}

NodeId Directory::lookup(std::string_view key) const {
    const uint64_t pos = key_position(key);
    auto it = std::lower_bound(ring_.begin(), ring_.end(), pos,
                               [](const auto& entry, uint64_t p) { return entry.first < p; });
    if (it == ring_.end()) it = ring_.begin();
    return NodeId{it->second};
}

NodeId Directory::iterated_lookup(std::string_view seed_key, int i) const {
    if (i < 1) throw std::invalid_argument("iterated_lookup: i must be >= 1");
    NodeId r = lookup(seed_key);
    std::string key;
    for (int j = 2; j <= i; ++j) {
        key = node_address(r);
        key += '#';
        key += std::to_string(j);
        r = lookup(key);
    }
    return r;
}

}  // namespace ctarzan
