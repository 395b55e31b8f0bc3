#include <iostream>

#include <CLI11.hpp>

#include "tubesynth/cli.hpp"

namespace cli = tubesynth::cli;

int main(int argc, char** argv) {
    CLI::App app{"Output-feedback synthesis for polytopic systems inside a polyhedral target tube"};
    app.require_subcommand(1);

    cli::SynthArgs synth;
    auto* s = app.add_subcommand("synth", "run the backward synthesis and write gains, sets and certificates");
    s->add_option("--config", synth.config, "problem JSON")->required()->check(CLI::ExistingFile);
    s->add_option("--out", synth.out, "output directory")->required();

    cli::SimulateArgs sim;
    auto* m = app.add_subcommand("simulate", "Monte Carlo audit of stored gains");
    m->add_option("--config", sim.config, "problem JSON")->required()->check(CLI::ExistingFile);
    m->add_option("--gains", sim.gains, "gains.json from synth")->required()->check(CLI::ExistingFile);
    m->add_option("--sets", sim.sets, "sets.json from synth; draws x0 from X(0)")->check(CLI::ExistingFile);
    m->add_option("--runs", sim.runs, "number of runs");
    m->add_option("--seed", sim.seed, "RNG seed");
    m->add_option("--tol", sim.tol, "membership tolerance");
    m->add_option("--out", sim.out, "output directory")->required();

    cli::CheckArgs contain;
    auto* c = app.add_subcommand("check-contain", "one-step reachable set containment");
    c->add_option("--config", contain.config, "check JSON")->required()->check(CLI::ExistingFile);
    c->add_option("--out", contain.out, "report file");

    cli::CheckArgs invariant;
    auto* i = app.add_subcommand("check-invariant", "robust invariance of S under F and V");
    i->add_option("--config", invariant.config, "check JSON")->required()->check(CLI::ExistingFile);
    i->add_option("--out", invariant.out, "report file");

    cli::DemoArgs demo;
    auto* d = app.add_subcommand("demo-tanks", "coupled water tanks case study");
    d->add_option("--out", demo.out, "output directory")->required();
    d->add_option("--r1", demo.r1, "single nonlinear run with this tank 1 area");
    d->add_option("--seed", demo.seed, "RNG seed");
    d->add_option("--k", demo.horizon, "horizon");
    d->add_option("--runs", demo.runs, "linear audit runs");
    d->add_option("--tol", demo.tol, "membership tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kInputError;
    }

    if (*s) return cli::run_synth(synth, std::cout, std::cerr);
    if (*m) return cli::run_simulate(sim, std::cout, std::cerr);
    if (*c) return cli::run_check_contain(contain, std::cout, std::cerr);
    if (*i) return cli::run_check_invariant(invariant, std::cout, std::cerr);
    return cli::run_demo_tanks(demo, std::cout, std::cerr);
}
