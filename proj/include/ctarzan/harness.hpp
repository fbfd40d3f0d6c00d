#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ctarzan/topology.hpp"

namespace ctarzan {

struct ExperimentConfig {
    uint32_t n = 10000;
    double kprime = 2.0;  // cycles per node; the Tarzan side derives k = 3k'/2
    int hprime = 4;       // tunnel length in relays
    double wf = 1.5;      // forward latency weight; wr() = 2 - wf
    int rounds = 20;
    uint64_t seed = 1;
    double tau = 1.0;
    int samples_per_round = 100;

    double wr() const { return 2.0 - wf; }
    void validate() const;
};

/// Aggregates for one protocol side, averaged over rounds and samples.
/// Anonymity sets are evaluated from the exit relay's vantage point: the
/// observer is the last relay, the candidate set grows backward from its
/// tunnel predecessor with horizon equal to the tunnel length.
struct SideStats {
    double mean_as = 0;
    double mean_as_ceil = 0;  // second horizon, used by the interpolated side
    double mean_forward_hops = 0;
    double mean_return_hops = 0;
    double mean_cover = 0;
    double mean_d = 0;
    double weighted_latency = 0;  // in units of tau
};

// Hook for injecting fixture or replayed topologies; when empty, rounds build
// fresh networks with build_topology_direct (uniform partner selection, the
// setting the measurement procedure assumes).
using TopologyBuilder = std::function<Topology(Kind, uint32_t, double, uint64_t)>;

SideStats run_ctarzan_rounds(const ExperimentConfig& cfg, const TopologyBuilder& builder = {});
SideStats run_tarzan_rounds(const ExperimentConfig& cfg, double k, int h_floor, int h_ceil,
                            const TopologyBuilder& builder = {});

struct TarzanParams {
    double k = 0;
    double h_real = 0;
    int h_floor = 0;
    int h_ceil = 0;
    double frac = 0;
};

// Strict variant: requires 3k'/2 to land on an integer mimic count.
TarzanParams derive_tarzan_params_strict(double kprime, double weighted_latency, double tau);
TarzanParams derive_tarzan_params(double kprime, double weighted_latency, double tau);

struct ComparisonRow {
    double d = 0, h_prime = 0, w_f = 0, k_prime = 0, k = 0, h_real = 0;
    double as_prime = 0, as_floor = 0, as_ceil = 0, as_interp = 0, ratio = 0;
    double cover_ct = 0, cover_t = 0, cover_err_pct = 0;
    double lat_ct = 0, lat_t = 0, lat_err_pct = 0;
    std::string warning;
};

// Runs both sides under matched cover traffic and matched weighted latency.
// Mismatches above one percent throw at hundred-thousand-node scale and are
// recorded as a row warning below it.
ComparisonRow compare(const ExperimentConfig& cfg, const TopologyBuilder& builder = {});
ComparisonRow run_single(const ExperimentConfig& cfg, Kind kind, const TopologyBuilder& builder = {});

std::string format_double(double v);
void emit_csv(const std::vector<ComparisonRow>& rows, std::ostream& os);

struct FigureSpec {
    std::string name;
    std::vector<ExperimentConfig> configs;
};

// Known presets: ratio_vs_d_h3, ratio_vs_d_h4, ratio_vs_d_h5,
// ratio_vs_hprime_d3, ratio_vs_hprime_d4, ratio_vs_hprime_d5,
// as_vs_hprime_d4. Scales: "desk" (small, minutes) and "paper" (full size).
FigureSpec preset_figure(const std::string& name, const std::string& scale);

}  // namespace ctarzan
