// kvdmd: companion-matrix DMD, Vandermonde solvers and reconstruction weights
// from the command line.

#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <functional>
#include <iostream>

int main(int argc, char** argv) {
    using namespace kvdmd::cli;
    CLI::App app{"Companion-matrix DMD with DFT/Cauchy Vandermonde solves"};
    app.require_subcommand(1);

    RunConfig cfg;
    if (const char* env = std::getenv("KVDMD_OUT")) cfg.out = env;

    auto data_flags = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input, "snapshot file (CSV or KVC1)");
        sub->add_option("--generator", cfg.generator, "synthetic data, e.g. modal:n=30,m=10");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--out", cfg.out, "output directory");
    };
    const std::vector<std::string> solvers = {"naive", "row-scaled", "col-scaled", "bp", "dft-cauchy", "dmd"};

    auto* dec = app.add_subcommand("decompose", "Ritz values, amplitudes and modes");
    data_flags(dec);
    dec->add_option("--solver", cfg.solver, "Vandermonde solver")->check(CLI::IsMember(solvers));
    dec->add_option("--eta", cfg.eta, "filter parameter for the regularized solve")->check(CLI::NonNegativeNumber);

    auto* rec = app.add_subcommand("reconstruct", "snapshot reconstruction from dominant modes");
    data_flags(rec);
    rec->add_option("--solver", cfg.solver, "Vandermonde solver")->check(CLI::IsMember(solvers));
    rec->add_option("--modes", cfg.modes, "number of dominant modes (default: all)")->check(CLI::NonNegativeNumber);
    rec->add_option("--weights", cfg.weights, "weight method (default: all)")
        ->check(CLI::IsMember({"mp", "reflexive", "reflexive-freq", "gla", "weighted-gla"}));

    auto* cmp = app.add_subcommand("compare", "reconstruction error of every solver");
    data_flags(cmp);

    auto* gla = app.add_subcommand("gla-compare", "consistency of the reflexive and GLA weights");
    gla->add_option("--lambda", cfg.lambda, "three eigenvalues, ';' separated");
    gla->add_option("--coupling", cfg.coupling, "<z3,z1>;<z3,z2>");
    gla->add_option("--beta", cfg.beta, "three true coefficients");
    gla->add_option("--grid", cfg.grid, "snapshot counts, ';' separated");
    gla->add_option("--tol", cfg.consistent_tol, "error counted as converged at the largest m");
    gla->add_option("--out", cfg.out, "output directory");

    auto* ens = app.add_subcommand("ensemble", "Vandermonde conditions of random spectra");
    ens->add_option("--kind", cfg.kind, "rand | randn | expm-inv-rand")
        ->check(CLI::IsMember({"rand", "randn", "expm-inv-rand"}));
    ens->add_option("--n", cfg.n, "matrix order")->check(CLI::Range(2, 100000));
    ens->add_option("--count", cfg.count, "number of matrices")->check(CLI::PositiveNumber);
    ens->add_option("--seed", cfg.seed, "random seed");
    ens->add_option("--out", cfg.out, "output directory");

    CLI11_PARSE(app, argc, argv);

    std::function<void(const RunConfig&)> run;
    if (*dec) run = cmd_decompose;
    else if (*rec) run = cmd_reconstruct;
    else if (*cmp) run = cmd_compare;
    else if (*gla) run = cmd_gla_compare;
    else run = cmd_ensemble;
    try {
        run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "kvdmd: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
