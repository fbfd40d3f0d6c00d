#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ctarzan/routing.hpp"
#include "ctarzan/topology.hpp"

namespace ctarzan {

constexpr size_t kCellSize = 512;
constexpr size_t kMaxPayload = kCellSize - 5;  // 1 type byte + 4 length bytes

enum class KeyKind : uint8_t { Link, Tunnel };

/// Abstract key handle. Sealing is a reversible keyed byte transform, not
/// real cryptography; the nonce is what keys the transform.
struct KeyId {
    KeyKind kind = KeyKind::Link;
    NodeId a, b;  // link: the two link ends; tunnel: (initiator, relay)
    uint64_t nonce = 0;

    friend bool operator==(const KeyId& x, const KeyId& y) {
        return x.kind == y.kind && x.a == y.a && x.b == y.b && x.nonce == y.nonce;
    }
    friend bool operator<(const KeyId& x, const KeyId& y) {
        if (x.kind != y.kind) return x.kind < y.kind;
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return x.nonce < y.nonce;
    }
};

using Bytes = std::vector<uint8_t>;

/// Fixed-size cell. The seal stack mirrors the layers currently applied to
/// the body; serialized form is the body alone, so every cell is kCellSize
/// bytes on the wire regardless of layering.
struct Cell {
    std::array<uint8_t, kCellSize> body{};
    std::vector<KeyId> seals;  // index 0 innermost, back() outermost

    std::vector<KeyId> layers_outer_to_inner() const {
        return std::vector<KeyId>(seals.rbegin(), seals.rend());
    }
};

void seal(Cell& cell, const KeyId& key);
void unseal(Cell& cell, const KeyId& key);  // requires key == outermost seal

Cell make_data_cell(const Bytes& payload);
Cell make_dummy_cell(std::mt19937_64& rng);
std::optional<Bytes> parse_cell(const Cell& cell);  // nullopt for dummy cells

Bytes serialize_cell(const Cell& cell);
uint64_t cell_digest(const Cell& cell);

enum class Direction : uint8_t { Recv, Send };

struct Event {
    Direction dir;
    NodeId peer;
    uint64_t digest;
};

struct RelayState {
    NodeId node;
    std::set<KeyId> known_keys;
    std::vector<Event> events;
};

// Removes the outermost seal, which must be known to this relay. The cell
// passed in is the post-link-decryption view; link events are recorded by
// the delivery step, not here.
Cell relay_process(RelayState& state, const Cell& cell, NodeId from_peer);

struct PnatEndpoint {
    NodeId node;              // network member playing the exit role
    std::string destination;  // opaque address outside the overlay
};

// One shared key per stored link: per directed link for cycle topologies,
// per unordered pair for bidirectional ones.
std::map<uint64_t, KeyId> establish_link_keys(const Topology& topo, uint64_t session_seed);

struct RoundTrip {
    PnatEndpoint pnat;
    Bytes request_at_exit;
    Bytes response_at_initiator;
    int response_layers = 0;
    ReturnRoute route;
};

/// In-memory network session: owns per-node relay state and the key tables,
/// and moves cells between neighbors one hop at a time. Single-threaded by
/// construction; events are totally ordered per relay.
class Session {
  public:
    Session(const Topology& topo, uint64_t seed);

    // Iterative tunnel establishment. Each extension sends a control cell
    // forward through the already keyed prefix and returns the acknowledgment
    // over the prefix response route, installing one tunnel key per relay.
    std::vector<KeyId> establish_tunnel(const Tunnel& tunnel);

    RoundTrip send_and_reply(const Tunnel& tunnel, const Bytes& request, const Bytes& response,
                             const std::string& destination = "exit:target");

    const RelayState& state(NodeId id) const { return states_[id.index]; }
    size_t link_key_count() const { return link_keys_.size(); }

    std::map<NodeId, std::set<NodeId>> relay_view_report() const;
    void export_event_log(std::ostream& os) const;

  private:
    KeyId link_key(NodeId u, NodeId v) const;
    void deliver(NodeId from, NodeId to, Cell& cell);
    std::vector<KeyId> tunnel_keys_for(const Tunnel& tunnel) const;
    std::vector<KeyId> ensure_established(const Tunnel& tunnel);
    void forward_through(const Tunnel& tunnel, size_t relay_count, Cell& cell, bool peel_last);
    int reply_along(const ReturnRoute& route, const std::vector<KeyId>& keys, Cell& cell);

    const Topology& topo_;
    uint64_t seed_;
    std::map<uint64_t, KeyId> link_keys_;
    std::map<std::pair<uint32_t, uint32_t>, KeyId> tunnel_keys_;
    std::vector<RelayState> states_;
};

}  // namespace ctarzan
