#include "ctarzan/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iterator>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "ctarzan/errors.hpp"
#include "ctarzan/hash.hpp"
#include "ctarzan/metrics.hpp"
#include "ctarzan/routing.hpp"

namespace ctarzan {

namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr uint64_t kSamplerTag = 0x73616d706c657273ULL;
constexpr uint64_t kCTarzanTag = 0x63742d726f756e64ULL;
constexpr uint64_t kTarzanTag = 0x747a2d726f756e64ULL;

struct RoundStats {
    double as_sum = 0;
    double as_ceil_sum = 0;
    double fwd_sum = 0;
    double ret_sum = 0;
    uint64_t samples = 0;
    double cover = 0;
    double d_value = 0;
};

// Default rounds use direct uniform selection: the measurement procedure being
// reproduced draws partners directly, not through the directory chain.
Topology make_topology(const TopologyBuilder& builder, Kind kind, uint32_t n, double param,
                       uint64_t seed) {
    if (builder) return builder(kind, n, param, seed);
    return build_topology_direct(kind, n, param, seed);
}

NodeId vantage_predecessor(const Tunnel& t) {
    return t.relays.size() >= 2 ? t.relays[t.relays.size() - 2] : t.initiator;
}

RoundStats run_ctarzan_round(const ExperimentConfig& cfg, const TopologyBuilder& builder,
                             uint64_t round_seed) {
    RoundStats rs;
    Topology topo = make_topology(builder, Kind::CTarzan, cfg.n, cfg.kprime, round_seed);
    rs.cover = double(cover_traffic(topo));
    rs.d_value = degree_stats(topo).d;
    std::mt19937_64 rng(splitmix64(round_seed ^ kSamplerTag));
    for (int s = 0; s < cfg.samples_per_round; ++s) {
        NodeId initiator{uint32_t(bounded_uniform(rng, topo.size()))};
        Tunnel t = build_tunnel(topo, initiator, cfg.hprime, rng);
        ReturnRoute route = compute_return_route(topo, t);
        rs.fwd_sum += double(forward_hop_count(t));
        rs.ret_sum += double(return_hop_count(route));
        ASQuery q{t.relays.back(), vantage_predecessor(t), cfg.hprime};
        rs.as_sum += double(anonymity_set_size(topo, q));
        ++rs.samples;
    }
    return rs;
}

RoundStats run_tarzan_round(const ExperimentConfig& cfg, const TopologyBuilder& builder, double k,
                            int h_floor, int h_ceil, uint64_t round_seed) {
    RoundStats rs;
    Topology topo = make_topology(builder, Kind::Tarzan, cfg.n, k, round_seed);
    rs.cover = double(cover_traffic(topo));
    rs.d_value = degree_stats(topo).d;
    std::mt19937_64 rng(splitmix64(round_seed ^ kSamplerTag));
    for (int s = 0; s < cfg.samples_per_round; ++s) {
        NodeId initiator{uint32_t(bounded_uniform(rng, topo.size()))};
        Tunnel tf = build_tunnel(topo, initiator, h_floor, rng);
        ReturnRoute route = compute_return_route(topo, tf);
        rs.fwd_sum += double(forward_hop_count(tf));
        rs.ret_sum += double(return_hop_count(route));
        ASQuery qf{tf.relays.back(), vantage_predecessor(tf), h_floor};
        rs.as_sum += double(anonymity_set_size(topo, qf));
        if (h_ceil != h_floor) {
            Tunnel tc = build_tunnel(topo, initiator, h_ceil, rng);
            ASQuery qc{tc.relays.back(), vantage_predecessor(tc), h_ceil};
            rs.as_ceil_sum += double(anonymity_set_size(topo, qc));
        } else {
            rs.as_ceil_sum = rs.as_sum;
        }
        ++rs.samples;
    }
    return rs;
}

// Rounds are independent given their derived seed, so they can run on any
// number of workers; the merge below walks them in index order to keep
// aggregate results identical across machines.
std::vector<RoundStats> run_rounds(int rounds, const std::function<RoundStats(int)>& one_round) {
    std::vector<RoundStats> all;
    all.resize(size_t(rounds));
    unsigned workers = std::thread::hardware_concurrency();
    if (workers > unsigned(rounds)) workers = unsigned(rounds);
    if (workers <= 1) {
        for (int r = 0; r < rounds; ++r) all[size_t(r)] = one_round(r);
        return all;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                int r = next.fetch_add(1);
                if (r >= rounds) return;
                try {
                    all[size_t(r)] = one_round(r);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return all;
}

SideStats merge_rounds(const std::vector<RoundStats>& all, double wf, double wr, double tau) {
    SideStats out;
    double as = 0, as_ceil = 0, fwd = 0, ret = 0, cover = 0, d = 0;
    uint64_t samples = 0;
    for (const RoundStats& rs : all) {
        as += rs.as_sum;
        as_ceil += rs.as_ceil_sum;
        fwd += rs.fwd_sum;
        ret += rs.ret_sum;
        cover += rs.cover;
        d += rs.d_value;
        samples += rs.samples;
    }
    out.mean_as = as / double(samples);
    out.mean_as_ceil = as_ceil / double(samples);
    out.mean_forward_hops = fwd / double(samples);
    out.mean_return_hops = ret / double(samples);
    out.mean_cover = cover / double(all.size());
    out.mean_d = d / double(all.size());
    out.weighted_latency = weighted_latency(wf, wr, out.mean_forward_hops * tau, out.mean_return_hops * tau);
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    // The real generator needs n >= 10 (it enforces that itself); injected
    // builders may supply tiny degenerate networks.
    if (n < 3) throw std::invalid_argument("n must be at least 3");
    if (kprime < 1.0) throw std::invalid_argument("kprime must be at least 1");
    if (hprime < 1) throw std::invalid_argument("hprime must be at least 1");
    if (wf < 1.0 || wf > 2.0) throw std::invalid_argument("wf must lie in [1, 2]");
    if (rounds < 1) throw std::invalid_argument("rounds must be positive");
    if (samples_per_round < 1) throw std::invalid_argument("samples_per_round must be positive");
    if (!(tau > 0)) throw std::invalid_argument("tau must be positive");
}

SideStats run_ctarzan_rounds(const ExperimentConfig& cfg, const TopologyBuilder& builder) {
    cfg.validate();
    auto rounds = run_rounds(cfg.rounds, [&](int r) {
        uint64_t rseed = splitmix64(cfg.seed ^ kCTarzanTag ^ (uint64_t(r) + 1) * kGolden);
        return run_ctarzan_round(cfg, builder, rseed);
    });
    return merge_rounds(rounds, cfg.wf, cfg.wr(), cfg.tau);
}

SideStats run_tarzan_rounds(const ExperimentConfig& cfg, double k, int h_floor, int h_ceil,
                            const TopologyBuilder& builder) {
    cfg.validate();
    if (k < 1.0) throw std::invalid_argument("k must be at least 1");
    if (h_floor < 1 || h_ceil < h_floor) throw std::invalid_argument("bad tunnel length bracket");
    auto rounds = run_rounds(cfg.rounds, [&](int r) {
        uint64_t rseed = splitmix64(cfg.seed ^ kTarzanTag ^ (uint64_t(r) + 1) * kGolden);
        return run_tarzan_round(cfg, builder, k, h_floor, h_ceil, rseed);
    });
    return merge_rounds(rounds, cfg.wf, cfg.wr(), cfg.tau);
}

TarzanParams derive_tarzan_params(double kprime, double weighted, double tau) {
    TarzanParams p;
    p.k = equivalent_k(kprime);
    p.h_real = required_tarzan_h(weighted, tau);
    if (p.h_real < 1.0) p.h_real = 1.0;
    p.h_floor = int(std::floor(p.h_real));
    p.frac = p.h_real - double(p.h_floor);
    p.h_ceil = p.frac > 0 ? p.h_floor + 1 : p.h_floor;
    return p;
}

TarzanParams derive_tarzan_params_strict(double kprime, double weighted, double tau) {
    TarzanParams p = derive_tarzan_params(kprime, weighted, tau);
    if (std::abs(p.k - std::round(p.k)) > 1e-9) {
        throw NonIntegralK("3k'/2 is not an integer for k' = " + format_double(kprime));
    }
    p.k = std::round(p.k);
    return p;
}

ComparisonRow compare(const ExperimentConfig& cfg, const TopologyBuilder& builder) {
    cfg.validate();
    SideStats ct = run_ctarzan_rounds(cfg, builder);
    TarzanParams tp = derive_tarzan_params(cfg.kprime, ct.weighted_latency, cfg.tau);
    SideStats tz = run_tarzan_rounds(cfg, tp.k, tp.h_floor, tp.h_ceil, builder);

    ComparisonRow row;
    row.d = ct.mean_d;
    row.h_prime = double(cfg.hprime);
    row.w_f = cfg.wf;
    row.k_prime = cfg.kprime;
    row.k = tp.k;
    row.h_real = tp.h_real;
    row.as_prime = ct.mean_as;
    row.as_floor = tz.mean_as;
    row.as_ceil = tz.mean_as_ceil;
    row.as_interp = tp.frac > 0 ? interpolate_anonymity_set(tz.mean_as, tz.mean_as_ceil, tp.frac)
                                : tz.mean_as;
    row.ratio = row.as_prime / row.as_interp;
    row.cover_ct = ct.mean_cover;
    row.cover_t = tz.mean_cover;
    row.cover_err_pct = std::abs(row.cover_t - row.cover_ct) / row.cover_ct * 100.0;
    row.lat_ct = ct.weighted_latency;
    // Latency is linear in tunnel length, so the interpolated cost at h_real
    // is exact rather than an approximation between the two brackets.
    row.lat_t = 2.0 * (tp.h_real + 2.0) * cfg.tau;
    row.lat_err_pct = std::abs(row.lat_t - row.lat_ct) / row.lat_ct * 100.0;

    if (row.cover_err_pct > 1.0 || row.lat_err_pct > 1.0) {
        std::string msg = "equalization drift above 1%: cover " + format_double(row.cover_err_pct) +
                          "%, latency " + format_double(row.lat_err_pct) + "%";
        if (cfg.n >= 100000) throw EquivalenceViolation(msg);
        row.warning = msg;
    }
    return row;
}

ComparisonRow run_single(const ExperimentConfig& cfg, Kind kind, const TopologyBuilder& builder) {
    cfg.validate();
    double nan = std::nan("");
    ComparisonRow row;
    row.h_prime = double(cfg.hprime);
    row.w_f = cfg.wf;
    row.k_prime = cfg.kprime;
    row.d = nan;
    row.k = nan;
    row.h_real = nan;
    row.as_prime = nan;
    row.as_floor = nan;
    row.as_ceil = nan;
    row.as_interp = nan;
    row.ratio = nan;
    row.cover_ct = nan;
    row.cover_t = nan;
    row.cover_err_pct = nan;
    row.lat_ct = nan;
    row.lat_t = nan;
    row.lat_err_pct = nan;
    if (kind == Kind::CTarzan) {
        SideStats ct = run_ctarzan_rounds(cfg, builder);
        row.d = ct.mean_d;
        row.as_prime = ct.mean_as;
        row.cover_ct = ct.mean_cover;
        row.lat_ct = ct.weighted_latency;
    } else {
        double k = equivalent_k(cfg.kprime);
        SideStats tz = run_tarzan_rounds(cfg, k, cfg.hprime, cfg.hprime, builder);
        row.k = k;
        row.h_real = double(cfg.hprime);
        row.as_floor = tz.mean_as;
        row.as_ceil = tz.mean_as_ceil;
        row.as_interp = tz.mean_as;
        row.cover_t = tz.mean_cover;
        row.lat_t = tz.weighted_latency;
    }
    return row;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::string best;
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) != v) continue;
        if (best.empty() || std::strlen(buf) < best.size()) best = buf;
    }
    return best;
}

void emit_csv(const std::vector<ComparisonRow>& rows, std::ostream& os) {
    os << "d,h_prime,w_f,k_prime,k,h_real,as_prime,as_floor,as_ceil,as_interp,ratio,"
          "cover_ct,cover_t,cover_err_pct,lat_ct,lat_t,lat_err_pct\n";
    for (const ComparisonRow& r : rows) {
        const double cols[] = {r.d,        r.h_prime,  r.w_f,     r.k_prime,      r.k,
                               r.h_real,   r.as_prime, r.as_floor, r.as_ceil,      r.as_interp,
                               r.ratio,    r.cover_ct, r.cover_t,  r.cover_err_pct, r.lat_ct,
                               r.lat_t,    r.lat_err_pct};
        for (size_t i = 0; i < std::size(cols); ++i) {
            if (i) os << ',';
            os << format_double(cols[i]);
        }
        os << '\n';
    }
}

FigureSpec preset_figure(const std::string& name, const std::string& scale) {
    uint32_t n;
    int rounds, samples;
    if (scale == "paper") {
        n = 100000;
        rounds = 100;
        samples = 200;
    } else if (scale == "desk") {
        n = 10000;
        rounds = 20;
        samples = 200;
    } else {
        throw UnknownPreset("unknown scale: " + scale + " (expected paper or desk)");
    }

    const double wf_sweep[] = {1.5, 1.6, 1.7, 1.8, 1.9};
    FigureSpec spec;
    spec.name = name;
    uint64_t seed = splitmix64(fnv1a64(name));
    auto base = [&](double kprime, int hprime, double wf) {
        ExperimentConfig cfg;
        cfg.n = n;
        cfg.kprime = kprime;
        cfg.hprime = hprime;
        cfg.wf = wf;
        cfg.rounds = rounds;
        cfg.samples_per_round = samples;
        cfg.seed = seed;
        return cfg;
    };

    if (name == "ratio_vs_d_h3" || name == "ratio_vs_d_h4" || name == "ratio_vs_d_h5") {
        int hprime = name.back() - '0';
        for (double kprime : {1.0, 2.0, 3.0}) {
            for (double wf : wf_sweep) spec.configs.push_back(base(kprime, hprime, wf));
        }
    } else if (name == "ratio_vs_hprime_d3" || name == "ratio_vs_hprime_d4" ||
               name == "ratio_vs_hprime_d5") {
        double d = double(name.back() - '0');
        for (int hprime : {3, 4, 5}) {
            for (double wf : wf_sweep) spec.configs.push_back(base(d / 3.0, hprime, wf));
        }
    } else if (name == "as_vs_hprime_d4") {
        for (int hprime : {2, 3, 4, 5, 6}) {
            for (double wf : {1.5, 1.9}) spec.configs.push_back(base(4.0 / 3.0, hprime, wf));
        }
    } else {
        throw UnknownPreset("unknown figure preset: " + name);
    }
    return spec;
}

}  // namespace ctarzan
