#pragma once
// Snapshot reconstruction from a subset of modes.
//
// Given modes Z (n x l), Ritz values lambda and snapshots f_1..f_m, find
// weights alpha minimizing
//     Omega^2(alpha) = sum_i || f_i - Z diag(alpha) (lambda^(i-1)) ||^2.
// With Z = QR and g_i = Q^* f_i the reduced problem is the stacked system
// S alpha ~ g, S = (R D_1; R D_2; ...; R D_m), D_i = diag(lambda^(i-1)).

#include "kvdmd/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kvdmd {

struct ReconstructionProblem {
    CMatrix Z;       // n x l
    CVector lambda;  // l
    CMatrix X;       // n x m snapshots
    CMatrix Q, R;    // Z = QR
    CMatrix G;       // Q^* X, column i is g_i
    CMatrix H;       // R^{-1} G

    Index modes() const { return Z.cols(); }
    Index snapshots() const { return X.cols(); }
};

// Throws RankDeficientError if Z does not have full column rank.
ReconstructionProblem make_problem(const CMatrix& Z, const CVector& lambda, const CMatrix& X);

enum class WeightMethod { moore_penrose, reflexive, reflexive_frequency, gla, weighted_gla, p_norm };

const char* method_name(WeightMethod m);
WeightMethod parse_method(const std::string& name);

struct ReconstructionWeights {
    WeightMethod method = WeightMethod::moore_penrose;
    CVector alpha;
    double objective = 0.0;  // Omega^2(alpha), evaluated directly
    bool flagged = false;    // rank deficient or a fallback path was taken
};

// Indices of the l largest |a_j|, largest first; ties keep the lower index first.
std::vector<Index> select_dominant(const RVector& amplitudes, Index l);

// Omega^2(alpha) summed over the columns of X.
double objective(const CMatrix& Z, const CVector& lambda, const CVector& alpha, const CMatrix& X);
double objective(const ReconstructionProblem& p, const CVector& alpha);

// lambda_j^(i-1), rows j, columns i = 1..m.
CMatrix power_table(const CVector& lambda, Index m);

// Moore-Penrose solution S^+ g through the l x l Gram matrix
// (R^* R) .* (sum_i conj(lambda_j)^(i-1) lambda_k^(i-1)), with a dense QR of S
// when the Gram matrix is too ill conditioned.
ReconstructionWeights optimal_weights(const ReconstructionProblem& p);

// alpha_j = sum_i conj(lambda_j)^(i-1) (R^{-1} g_i)_j / sum_k |lambda_j|^(2(k-1)).
ReconstructionWeights reflexive_weights(const ReconstructionProblem& p);

// Dense S (ml x l) and the reflexive g-inverse (stacked D_i)^+ (I (x) R^{-1}) (l x ml).
CMatrix stacked_S(const ReconstructionProblem& p);
CMatrix reflexive_g_inverse(const ReconstructionProblem& p);

struct GInverseReport {
    double sgs = 0.0;        // ||S S^- S - S|| / ||S||
    double gsg = 0.0;        // ||S^- S S^- - S^-|| / ||S^-||
    double gs_herm = 0.0;    // ||S^- S - (S^- S)^*||
    double sg_herm = 0.0;    // ||S S^- - (S S^-)^*||_max
    double mp_distance = 0.0;  // ||S^- - S^+|| / ||S^+||
    bool axioms_hold = false;  // first three within 1e-10
    bool sg_hermitian = false; // sg_herm within 1e-10
};

// Dense check of the reflexive g-inverse axioms; only for l*m <= 200.
GInverseReport g_inverse_axioms_check(const ReconstructionProblem& p);

// Frequency domain weights for the case where no lambda_i is an m-th root of
// unity. With Xh = X F D2^*, gh_j = Q^* Xh(:,j) and Chat = D1 C:
//   alpha_i = sum_j conj(C_ij) (R^{-1} gh_j)_i / (d1_i sum_k |C_ik|^2).
// Throws CoincidenceError (i, j) if lambda_i is within tolerance of y_j.
ReconstructionWeights freq_weights_case1(const ReconstructionProblem& p);

struct CoincidentMode {
    Index mode;     // i
    Index column;   // j with lambda_i = y_j = exp(-2 pi i j/m)
    cplx product;   // prod_{k != j} (lambda_i - y_k)
};

struct Case2Structure {
    std::vector<CoincidentMode> coincident;
    CMatrix C_hat;  // V F D2^*, l x m
};

Case2Structure freq_case2_structure(const CVector& lambda, Index m);

struct Reconstruction {
    CMatrix approx;   // f~_i for the requested columns
    RVector errors;   // ||f_i - f~_i||
};

// f~_i = sum_j z_j alpha_j lambda_j^(i-1) for i = first..first+X.cols()-1,
// compared against the columns of X.
Reconstruction reconstruct(const CMatrix& Z, const CVector& lambda, const CVector& alpha, const CMatrix& X,
                           Index first = 0);

}  // namespace kvdmd
