#include "ctarzan/protocol.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <ostream>
#include <stdexcept>

#include "ctarzan/errors.hpp"
#include "ctarzan/hash.hpp"

namespace ctarzan {

namespace {

constexpr uint64_t kLinkKeyTag = 0x6c696e6b6b657973ULL;
constexpr uint64_t kTunnelKeyTag = 0x74756e6e656c6b79ULL;
constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

uint64_t pair_code(NodeId u, NodeId v) {
    return (uint64_t(u.index) << 32) | uint64_t(v.index);
}

void xor_keystream(std::array<uint8_t, kCellSize>& body, uint64_t nonce) {
    for (size_t block = 0; block * 8 < body.size(); ++block) {
        uint64_t word = splitmix64(nonce + (block + 1) * kGolden);
        for (size_t i = 0; i < 8 && block * 8 + i < body.size(); ++i) {
            body[block * 8 + i] ^= uint8_t(word >> (8 * i));
        }
    }
}

Bytes text_payload(const std::string& s) {
    return Bytes(s.begin(), s.end());
}

}  // namespace

void seal(Cell& cell, const KeyId& key) {
    xor_keystream(cell.body, key.nonce);
    cell.seals.push_back(key);
}

void unseal(Cell& cell, const KeyId& key) {
    if (cell.seals.empty() || !(cell.seals.back() == key)) {
        throw UnknownKey("unseal: key is not the outermost layer");
    }
    xor_keystream(cell.body, key.nonce);
    cell.seals.pop_back();
}

Cell make_data_cell(const Bytes& payload) {
    if (payload.size() > kMaxPayload) {
        throw std::invalid_argument("payload exceeds cell capacity");
    }
    Cell cell;
    cell.body[0] = 1;
    uint32_t len = uint32_t(payload.size());
    std::memcpy(cell.body.data() + 1, &len, 4);
    std::copy(payload.begin(), payload.end(), cell.body.begin() + 5);
    return cell;
}

Cell make_dummy_cell(std::mt19937_64& rng) {
    Cell cell;
    for (size_t block = 0; block * 8 < cell.body.size(); ++block) {
        uint64_t word = rng();
        for (size_t i = 0; i < 8 && block * 8 + i < cell.body.size(); ++i) {
            cell.body[block * 8 + i] = uint8_t(word >> (8 * i));
        }
    }
    cell.body[0] = 0;
    return cell;
}

std::optional<Bytes> parse_cell(const Cell& cell) {
    if (!cell.seals.empty()) return std::nullopt;
    if (cell.body[0] != 1) return std::nullopt;
    uint32_t len = 0;
    std::memcpy(&len, cell.body.data() + 1, 4);
    if (len > kMaxPayload) return std::nullopt;
    return Bytes(cell.body.begin() + 5, cell.body.begin() + 5 + len);
}

Bytes serialize_cell(const Cell& cell) {
    return Bytes(cell.body.begin(), cell.body.end());
}

uint64_t cell_digest(const Cell& cell) {
    return fnv1a64(std::string_view(reinterpret_cast<const char*>(cell.body.data()), cell.body.size()));
}

Cell relay_process(RelayState& state, const Cell& cell, NodeId from_peer) {
    (void)from_peer;
    if (cell.seals.empty()) {
        throw UnknownKey("relay " + std::to_string(state.node.index) + ": cell has no layer to remove");
    }
    const KeyId outer = cell.seals.back();
    if (!state.known_keys.count(outer)) {
        throw UnknownKey("relay " + std::to_string(state.node.index) + ": outer layer uses an unknown key");
    }
    Cell out = cell;
    unseal(out, outer);
    return out;
}

std::map<uint64_t, KeyId> establish_link_keys(const Topology& topo, uint64_t session_seed) {
    std::map<uint64_t, KeyId> keys;
    for (uint32_t u = 0; u < topo.size(); ++u) {
        for (uint32_t v : topo.out_links(NodeId{u})) {
            NodeId a{u}, b{v};
            if (topo.kind() == Kind::Tarzan) {
                if (v < u) continue;  // one key per unordered pair
            }
            uint64_t code = pair_code(a, b);
            uint64_t nonce = splitmix64(session_seed ^ kLinkKeyTag ^ code);
            keys.emplace(code, KeyId{KeyKind::Link, a, b, nonce});
        }
    }
    return keys;
}

Session::Session(const Topology& topo, uint64_t seed) : topo_(topo), seed_(seed) {
    link_keys_ = establish_link_keys(topo, seed);
    states_.resize(topo.size());
    for (uint32_t i = 0; i < topo.size(); ++i) states_[i].node = NodeId{i};
}

KeyId Session::link_key(NodeId u, NodeId v) const {
    uint64_t code = topo_.kind() == Kind::Tarzan
                        ? pair_code(NodeId{std::min(u.index, v.index)}, NodeId{std::max(u.index, v.index)})
                        : pair_code(u, v);
    auto it = link_keys_.find(code);
    if (it == link_keys_.end()) {
        throw UnknownKey("no link key between " + std::to_string(u.index) + " and " + std::to_string(v.index));
    }
    return it->second;
}

void Session::deliver(NodeId from, NodeId to, Cell& cell) {
    KeyId lk = link_key(from, to);
    seal(cell, lk);
    uint64_t digest = cell_digest(cell);
    states_[from.index].events.push_back({Direction::Send, to, digest});
    states_[to.index].events.push_back({Direction::Recv, from, digest});
    unseal(cell, lk);
}

std::vector<KeyId> Session::tunnel_keys_for(const Tunnel& tunnel) const {
    std::vector<KeyId> keys;
    keys.reserve(tunnel.relays.size());
    for (NodeId relay : tunnel.relays) {
        uint64_t code = pair_code(tunnel.initiator, relay);
        uint64_t nonce = splitmix64(seed_ ^ kTunnelKeyTag ^ code);
        keys.push_back(KeyId{KeyKind::Tunnel, tunnel.initiator, relay, nonce});
    }
    return keys;
}

void Session::forward_through(const Tunnel& tunnel, size_t relay_count, Cell& cell, bool peel_last) {
    NodeId cur = tunnel.initiator;
    for (size_t i = 0; i < relay_count; ++i) {
        NodeId relay = tunnel.relays[i];
        deliver(cur, relay, cell);
        if (i + 1 < relay_count || peel_last) {
            cell = relay_process(states_[relay.index], cell, cur);
        }
        cur = relay;
    }
}

int Session::reply_along(const ReturnRoute& route, const std::vector<KeyId>& keys, Cell& cell) {
    int layers = 0;
    for (size_t i = 0; i + 1 < route.hops.size(); ++i) {
        if (route.origin[i] >= 1) {
            seal(cell, keys[size_t(route.origin[i]) - 1]);
            ++layers;
        }
        deliver(route.hops[i], route.hops[i + 1], cell);
    }
    return layers;
}

std::vector<KeyId> Session::establish_tunnel(const Tunnel& tunnel) {
    if (tunnel.relays.empty()) throw std::invalid_argument("tunnel has no relays");
    std::vector<KeyId> keys = tunnel_keys_for(tunnel);
    for (size_t j = 1; j <= tunnel.relays.size(); ++j) {
        Cell cell = make_data_cell(text_payload("extend " + std::to_string(j)));
        for (size_t i = j - 1; i-- > 0;) seal(cell, keys[i]);
        forward_through(tunnel, j, cell, false);

        NodeId target = tunnel.relays[j - 1];
        auto req = parse_cell(cell);
        if (!req || *req != text_payload("extend " + std::to_string(j))) {
            throw std::logic_error("tunnel extension control cell corrupted in transit");
        }
        states_[target.index].known_keys.insert(keys[j - 1]);
        states_[tunnel.initiator.index].known_keys.insert(keys[j - 1]);

        Tunnel prefix{tunnel.initiator, std::vector<NodeId>(tunnel.relays.begin(), tunnel.relays.begin() + j)};
        ReturnRoute route = compute_return_route(topo_, prefix);
        Cell ack = make_data_cell(text_payload("ok " + std::to_string(j)));
        reply_along(route, keys, ack);
        while (!ack.seals.empty()) {
            KeyId outer = ack.seals.back();
            if (!states_[tunnel.initiator.index].known_keys.count(outer)) {
                throw UnknownKey("initiator cannot remove acknowledgment layer");
            }
            unseal(ack, outer);
        }
        auto body = parse_cell(ack);
        if (!body || *body != text_payload("ok " + std::to_string(j))) {
            throw std::logic_error("tunnel extension acknowledgment corrupted in transit");
        }
    }
    for (size_t i = 0; i < tunnel.relays.size(); ++i) {
        tunnel_keys_[{tunnel.initiator.index, tunnel.relays[i].index}] = keys[i];
    }
    return keys;
}

std::vector<KeyId> Session::ensure_established(const Tunnel& tunnel) {
    bool have_all = !tunnel.relays.empty();
    for (NodeId relay : tunnel.relays) {
        if (!tunnel_keys_.count({tunnel.initiator.index, relay.index})) {
            have_all = false;
            break;
        }
    }
    if (have_all) return tunnel_keys_for(tunnel);
    return establish_tunnel(tunnel);
}

RoundTrip Session::send_and_reply(const Tunnel& tunnel, const Bytes& request, const Bytes& response,
                                  const std::string& destination) {
    std::vector<KeyId> keys = ensure_established(tunnel);

    Cell cell = make_data_cell(request);
    for (size_t i = keys.size(); i-- > 0;) seal(cell, keys[i]);
    forward_through(tunnel, tunnel.relays.size(), cell, true);
    auto at_exit = parse_cell(cell);
    if (!at_exit) throw std::logic_error("request cell corrupted in transit");

    // The exit hands the payload to its packet translator and the reply comes
    // back the same way; both legs sit outside the overlay link log.
    uint64_t probe = splitmix64(seed_ ^ pair_code(tunnel.initiator, tunnel.relays.back()));
    NodeId pnat_node{uint32_t(probe % topo_.size())};
    auto in_tunnel = [&](NodeId id) {
        if (id == tunnel.initiator) return true;
        return std::find(tunnel.relays.begin(), tunnel.relays.end(), id) != tunnel.relays.end();
    };
    // When the tunnel spans the whole network the exit role collapses onto the
    // last relay; otherwise probe forward to the next non-member.
    if (tunnel.relays.size() + 1 >= topo_.size()) {
        pnat_node = tunnel.relays.back();
    } else {
        while (in_tunnel(pnat_node)) pnat_node = NodeId{(pnat_node.index + 1) % topo_.size()};
    }

    Cell reply = make_data_cell(response);
    ReturnRoute route = compute_return_route(topo_, tunnel);
    int layers = reply_along(route, keys, reply);
    while (!reply.seals.empty()) {
        KeyId outer = reply.seals.back();
        if (!states_[tunnel.initiator.index].known_keys.count(outer)) {
            throw UnknownKey("initiator cannot remove response layer");
        }
        unseal(reply, outer);
    }
    auto at_initiator = parse_cell(reply);
    if (!at_initiator) throw std::logic_error("response cell corrupted in transit");

    return RoundTrip{PnatEndpoint{pnat_node, destination}, *at_exit, *at_initiator, layers, route};
}

std::map<NodeId, std::set<NodeId>> Session::relay_view_report() const {
    std::map<NodeId, std::set<NodeId>> report;
    for (const RelayState& st : states_) {
        if (st.events.empty()) continue;
        auto& peers = report[st.node];
        for (const Event& ev : st.events) peers.insert(ev.peer);
    }
    return report;
}

void Session::export_event_log(std::ostream& os) const {
    char line[96];
    for (const RelayState& st : states_) {
        for (const Event& ev : st.events) {
            std::snprintf(line, sizeof line, "EVT %u %s %u %016llx\n", st.node.index,
                          ev.dir == Direction::Send ? "SEND" : "RECV", ev.peer.index,
                          static_cast<unsigned long long>(ev.digest));
            os << line;
        }
    }
}

}  // namespace ctarzan
