#pragma once
// Schmid's SVD based DMD and the amplitude formula that avoids forming Z^+.

#include "kvdmd/linalg.hpp"

#include <vector>

namespace kvdmd {

struct DmdResult {
    CMatrix Z;        // n x k Ritz vectors, unit columns, Z = U_k B
    CVector lambda;   // k Ritz values
    CMatrix B;        // eigenvectors of S_k
    CMatrix U;        // U_k
    RVector sigma;    // sigma_1..sigma_k
    CMatrix Phi;      // Phi_k
    Index k = 0;
    bool defective = false;  // B numerically singular
};

// X_m = U Sigma Phi^*, k = #{sigma_i > rank_tol sigma_1}, S_k = U_k^* Y_m Phi_k Sigma_k^{-1}.
// rank_tol <= 0 selects max(n, m) eps.
DmdResult schmid_dmd(const CMatrix& X, const CMatrix& Y, double rank_tol = 0.0);

struct DmdAmplitudes {
    CVector a;
    bool fallback = false;  // B was ill conditioned, least squares used instead
};

// a = B^{-1} Sigma Phi(0,:)^*, i.e. Z^+ X(:,0).
DmdAmplitudes dmd_amplitudes(const DmdResult& r);

struct Matching {
    std::vector<Index> map;  // b(map[i]) is paired with a(i)
    bool collision = false;  // some a(i) had its nearest b already taken
    double max_distance = 0.0;
};

// Greedy nearest-neighbour pairing of two eigenvalue lists of equal length.
Matching match_eigenvalues(const CVector& a, const CVector& b);

}  // namespace kvdmd
