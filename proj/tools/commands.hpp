#pragma once
// Subcommands of the kvdmd command-line tool. Each writes its files into
// cfg.out and returns normally; errors are thrown.

#include "kvdmd/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kvdmd::cli {

struct RunConfig {
    std::string input;
    std::string generator;
    std::string solver = "dft-cauchy";
    Index modes = 0;  // 0 means all
    std::string weights;  // empty means every method
    double eta = 0.0;
    std::uint64_t seed = 1;
    std::string out = ".";

    // gla-compare
    std::string lambda = "0.9;0.8;0.4";
    std::string coupling = "0.5;0.5";
    std::string beta = "1;1;1";
    std::string grid = "10;20;50;100;200;500;1000;2000";
    double consistent_tol = 1e-3;

    // ensemble
    std::string kind = "rand";
    Index n = 20;
    Index count = 100;
};

void cmd_decompose(const RunConfig& cfg);
void cmd_reconstruct(const RunConfig& cfg);
void cmd_gla_compare(const RunConfig& cfg);
void cmd_ensemble(const RunConfig& cfg);
void cmd_compare(const RunConfig& cfg);

// "0.5", "-2i", "0.3+0.4i" separated by ';'.
CVector parse_complex_list(const std::string& text);
cplx parse_complex(const std::string& text);

}  // namespace kvdmd::cli
