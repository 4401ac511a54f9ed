#pragma once
// Seeded synthetic data: eigenvalue ensembles and snapshot sequences.

#include "kvdmd/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kvdmd {

enum class EnsembleKind { rand, randn, expm_inv_rand };

EnsembleKind parse_ensemble_kind(const std::string& name);
const char* ensemble_kind_name(EnsembleKind k);

struct EnsembleSample {
    CVector eigenvalues;  // scaled to unit spectral radius
    double kappa = 0.0;   // 2-norm condition of the square Vandermonde matrix, +inf if singular
};

// count matrices A of order n drawn from the recipe, eigenvalues scaled by
// max |lambda|. rand: entries uniform on [0,1); randn: standard normal;
// expm_inv_rand: eigenvalues of expm(-inv(rand)), i.e. exp(-1/mu) for the
// eigenvalues mu of a rand matrix.
std::vector<EnsembleSample> generate_ensemble(EnsembleKind kind, Index n, Index count, std::uint64_t seed);

struct SyntheticData {
    CMatrix X;       // n x (m+1) snapshots
    CVector lambda;  // true eigenvalues when known
    CMatrix Z;       // true modes (unit columns) when known
    CVector alpha;   // true amplitudes when known
    CMatrix A;       // generator when known
};

// Spec strings "name" or "name:key=value,...":
//   cyclic:m=6                          e_1..e_m then e_1 again
//   trajectory:n=8,m=5                  f_{i+1} = A f_i, A complex normal scaled to unit spectral radius
//   modal:n=30,m=10,decay=0.5           f_i = sum_j z_j alpha_j lambda_j^(i-1), alpha_j = decay^(j-1), |lambda| in [0.7,1]
//   clustered:n=40,m=20,radius=0.01,center=0.5
//                                       modal data with lambda uniform in a disc
SyntheticData generate_snapshots(const std::string& spec, std::uint64_t seed);

}  // namespace kvdmd
