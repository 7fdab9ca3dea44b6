#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <tmreach/error.hpp>
#include <tmreach/io.hpp>
#include <tmreach/simulation.hpp>
#include <tmreach/verifier.hpp>

namespace fs = std::filesystem;
using namespace tmreach;

namespace
{

struct Options {
    std::string spec;
    std::string out;
    unsigned threads = 0;
    std::string symbolic;
    unsigned order = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string vars;
};

NNCSModel load(const Options &o)
{
    NNCSModel m = load_spec(o.spec);
    if (o.threads > 0) {
        m.settings.threads = o.threads;
    }
    if (!o.symbolic.empty()) {
        m.settings.symbolic_remainder = o.symbolic == "on";
    }
    if (o.order > 0) {
        m.settings.order = o.order;
    }
    m.validate();
    return m;
}

std::vector<std::size_t> export_vars(const NNCSModel &m, const std::string &list)
{
    std::vector<std::size_t> out;
    if (list.empty()) {
        for (std::size_t i = 0; i < m.plant.dim(); ++i) {
            out.push_back(i);
        }
        return out;
    }
    std::stringstream ss(list);
    std::string name;
    while (std::getline(ss, name, ',')) {
        const auto &sv = m.plant.state_vars;
        const auto it = std::find(sv.begin(), sv.end(), name);
        if (it == sv.end()) {
            throw ConfigError("unknown variable '" + name + "' in --vars");
        }
        out.push_back(std::size_t(it - sv.begin()));
    }
    return out;
}

fs::path out_dir(const Options &o)
{
    const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
    fs::create_directories(dir);
    return dir;
}

void write_pipes(const NNCSModel &m, const VerificationResult &r, const Options &o)
{
    const auto vars = export_vars(m, o.vars);
    export_flowpipes(r.pipes, m.plant.state_vars, vars, out_dir(o) / "flowpipes.txt");
}

int run_verify(const Options &o, bool always_export)
{
    const NNCSModel m = load(o);
    const VerificationResult r = verify(m);
    std::printf("RESULT: %s\n", verdict_name(r.verdict.tag));
    std::printf("nn=%.3f ode=%.3f\n", r.verdict.nn_seconds, r.verdict.ode_seconds);
    if (!r.verdict.diagnostic.empty()) {
        std::fprintf(stderr, "%s\n", r.verdict.diagnostic.c_str());
    }
    if (always_export || !o.out.empty()) {
        write_pipes(m, r, o);
        if (r.verdict.counterexample) {
            std::ofstream cex(out_dir(o) / "counterexample.csv");
            write_trace_csv(cex, r.verdict.counterexample->trace);
        }
    }
    if (always_export) {
        return 0;
    }
    return r.verdict.tag == VerdictTag::unknown ? 2 : 0;
}

int run_simulate(const Options &o)
{
    const NNCSModel m = load(o);
    std::vector<double> x0;
    std::mt19937_64 rng(o.seed);
    for (const auto &iv : m.initial) {
        x0.push_back(o.seed_set ? std::uniform_real_distribution<double>(iv.lo(), iv.hi())(rng) : iv.mid());
    }
    Trace tr = simulate(m, x0, m.ode_step() / m.settings.sim_substeps);
    tr.seed = o.seed;
    if (o.out.empty()) {
        write_trace_csv(std::cout, tr);
    } else {
        std::ofstream f(out_dir(o) / "trace.csv");
        write_trace_csv(f, tr);
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"tmreach: Taylor-model reachability for neural-network controlled systems"};
    app.require_subcommand(1, 1);
    Options o;
    auto common = [&](CLI::App *sub) {
        sub->add_option("--spec", o.spec, "system description (JSON)")->required();
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--threads", o.threads, "worker threads for network propagation")
            ->check(CLI::PositiveNumber);
        sub->add_option("--symbolic-remainder", o.symbolic, "on|off, overrides the spec")
            ->check(CLI::IsMember({"on", "off"}));
        sub->add_option("--order", o.order, "Taylor model order")->check(CLI::PositiveNumber);
    };
    auto *verify_cmd = app.add_subcommand("verify", "compute flowpipes and decide the reach-avoid property");
    common(verify_cmd);
    verify_cmd->add_option("--vars", o.vars, "comma-separated variables to export");
    auto *sim_cmd = app.add_subcommand("simulate", "simulate one closed-loop trace");
    common(sim_cmd);
    sim_cmd->add_option("--seed", o.seed, "draw the initial state at random with this seed");
    auto *export_cmd = app.add_subcommand("export", "compute and export flowpipes");
    common(export_cmd);
    export_cmd->add_option("--vars", o.vars, "comma-separated variables to export");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        std::cerr << app.help();
        return 1;
    }
    o.seed_set = sim_cmd->count("--seed") > 0;

    try {
        if (verify_cmd->parsed()) {
            return run_verify(o, false);
        }
        if (sim_cmd->parsed()) {
            return run_simulate(o);
        }
        return run_verify(o, true);
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
