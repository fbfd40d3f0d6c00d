#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>

namespace ctarzan {

/// Dense node handle. The address string is derived from the index alone and
/// is what participants feed into directory lookups.
struct NodeId {
    uint32_t index = 0;

    friend bool operator==(NodeId a, NodeId b) { return a.index == b.index; }
    friend bool operator!=(NodeId a, NodeId b) { return a.index != b.index; }
    friend bool operator<(NodeId a, NodeId b) { return a.index < b.index; }
};

// Synthetic dotted-quad address, unique for index < 2^24.
inline std::string node_address(NodeId id) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "10.%u.%u.%u", (id.index >> 16) & 0xff,
                  (id.index >> 8) & 0xff, id.index & 0xff);
    return buf;
}

}  // namespace ctarzan

template <>
struct std::hash<ctarzan::NodeId> {
    size_t operator()(ctarzan::NodeId id) const noexcept { return id.index; }
};
