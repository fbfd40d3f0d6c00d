#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctarzan/node.hpp"

namespace ctarzan {

/// Consistent-hash ring over every participant's address. lookup(key) returns
/// the clockwise successor of hash(key): the node owning the smallest ring
/// position >= hash(key), wrapping past the top of the 64-bit space.
///
/// The directory is the only source of randomness in neighbor selection; the
/// epoch seed is folded into the hash so each epoch yields a fresh layout.
class Directory {
  public:
    Directory(uint32_t n, uint64_t seed);

    uint32_t size() const { return n_; }
    uint64_t seed() const { return seed_; }

    uint64_t key_position(std::string_view key) const;
    NodeId lookup(std::string_view key) const;

    // lookup applied i times; each result's address, suffixed with the next
    // iteration index, becomes the following key. The suffix is required:
    // lookup(addr) of a ring member is that member itself.
    NodeId iterated_lookup(std::string_view seed_key, int i) const;

  private:
    uint32_t n_;
    uint64_t seed_;
    std::vector<std::pair<uint64_t, uint32_t>> ring_;  // (position, node) sorted
};

}  // namespace ctarzan
