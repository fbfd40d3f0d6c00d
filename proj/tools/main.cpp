#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ctarzan/errors.hpp"
#include "ctarzan/harness.hpp"
#include "ctarzan/metrics.hpp"
#include "ctarzan/topology.hpp"

namespace {

using namespace ctarzan;

void warn_rows(const std::vector<ComparisonRow>& rows) {
    for (const auto& row : rows) {
        if (!row.warning.empty()) std::cerr << "warning: " << row.warning << '\n';
    }
}

void write_rows(const std::vector<ComparisonRow>& rows, const std::string& out) {
    if (out.empty()) {
        emit_csv(rows, std::cout);
        return;
    }
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot open output file: " + out);
    emit_csv(rows, os);
}

int run_simulate(const std::string& kind, const ExperimentConfig& cfg, const std::string& out) {
    std::vector<ComparisonRow> rows;
    if (kind == "compare") {
        rows.push_back(compare(cfg));
    } else {
        rows.push_back(run_single(cfg, kind == "tarzan" ? Kind::Tarzan : Kind::CTarzan));
    }
    warn_rows(rows);
    write_rows(rows, out);
    return 0;
}

int run_figure(const std::string& name, const std::string& scale, const std::string& dir) {
    FigureSpec spec = preset_figure(name, scale);
    std::vector<ComparisonRow> rows;
    rows.reserve(spec.configs.size());
    for (size_t i = 0; i < spec.configs.size(); ++i) {
        std::cerr << spec.name << ": config " << (i + 1) << "/" << spec.configs.size() << '\n';
        rows.push_back(compare(spec.configs[i]));
    }
    warn_rows(rows);
    std::filesystem::create_directories(dir);
    std::string path = (std::filesystem::path(dir) / (spec.name + ".csv")).string();
    write_rows(rows, path);
    std::cerr << "wrote " << path << '\n';
    return 0;
}

int run_dump(const std::string& kind, const std::string& selection, uint32_t n, double kprime,
             uint64_t seed, const std::string& out) {
    double param = kind == "tarzan" ? equivalent_k(kprime) : kprime;
    Kind k = kind == "tarzan" ? Kind::Tarzan : Kind::CTarzan;
    Topology topo = selection == "lookup" ? build_topology_real(k, n, param, seed)
                                          : build_topology_direct(k, n, param, seed);
    if (out.empty()) {
        dump_topology(topo, std::cout);
        return 0;
    }
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot open output file: " + out);
    dump_topology(topo, os);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anonymous-overlay simulator: cycle-based and mutual-link topologies"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string kind = "compare";
    std::string out;

    auto* sim = app.add_subcommand("simulate", "Run one experiment and emit a CSV row");
    sim->add_option("--kind", kind, "tarzan, ctarzan, or compare")
        ->check(CLI::IsMember({"tarzan", "ctarzan", "compare"}));
    sim->add_option("--n", cfg.n, "network size");
    sim->add_option("--kprime", cfg.kprime, "cycles per node (mutual side derives k = 3k'/2)");
    sim->add_option("--hprime", cfg.hprime, "tunnel length in relays");
    sim->add_option("--wf", cfg.wf, "forward latency weight; return weight is 2 - wf");
    sim->add_option("--rounds", cfg.rounds, "independent topologies to average");
    sim->add_option("--samples", cfg.samples_per_round, "tunnels sampled per topology");
    sim->add_option("--seed", cfg.seed, "base seed");
    sim->add_option("--tau", cfg.tau, "one-hop latency");
    sim->add_option("--out", out, "output CSV path (stdout when omitted)");

    std::string fig_name, fig_scale = "desk", fig_dir = ".";
    auto* fig = app.add_subcommand("figure", "Run a preset sweep and write NAME.csv");
    fig->add_option("--name", fig_name, "preset name")->required();
    fig->add_option("--scale", fig_scale, "paper or desk")
        ->check(CLI::IsMember({"paper", "desk"}));
    fig->add_option("--out", fig_dir, "output directory");

    std::string dump_kind = "ctarzan", dump_selection = "direct";
    uint32_t dump_n = 10000;
    double dump_kprime = 2.0;
    uint64_t dump_seed = 1;
    std::string dump_out;
    auto* dump = app.add_subcommand("dump-topology", "Build one topology and dump it");
    dump->add_option("--kind", dump_kind, "tarzan or ctarzan")
        ->check(CLI::IsMember({"tarzan", "ctarzan"}));
    dump->add_option("--selection", dump_selection,
                     "direct (uniform, matches simulate) or lookup (directory chains)")
        ->check(CLI::IsMember({"direct", "lookup"}));
    dump->add_option("--n", dump_n, "network size");
    dump->add_option("--kprime", dump_kprime, "cycles per node (mutual side derives k = 3k'/2)");
    dump->add_option("--seed", dump_seed, "topology seed");
    dump->add_option("--out", dump_out, "output path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return run_simulate(kind, cfg, out);
        if (fig->parsed()) return run_figure(fig_name, fig_scale, fig_dir);
        if (dump->parsed())
            return run_dump(dump_kind, dump_selection, dump_n, dump_kprime, dump_seed, dump_out);
    } catch (const EquivalenceViolation& e) {
        std::cerr << "equivalence violation: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
