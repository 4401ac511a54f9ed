#pragma once
// Generalized Laplace Analysis in the matrix setting.
//
// For a dominant eigenvalue lambda the averages (1/m) sum_i lambda^(-i+1) f_i
// converge to the spectral projection of f_1. Applied coordinatewise to the
// projected snapshots R^{-1} g_i this gives the GLA weights; with the step
// weights w_j(i) = |lambda_j|^(2(i-1)) / sum_k |lambda_j|^(2(k-1)) it gives the
// reflexive weights of the reconstruction module.

#include "kvdmd/reconstruction.hpp"

#include <vector>

namespace kvdmd {

// Inverse powers lambda^(-i+1), i = 1..m, by repeated division. Throws when
// lambda is zero or when |lambda|^(-m) would exceed 1e300.
CVector inverse_powers(cplx lambda, Index m);

struct DominantProjection {
    CVector average;       // (1/m) sum_{i<=m} lambda^(-i+1) f_i
    CVector half_average;  // the same over the first m/2 snapshots
    double cauchy_diff = 0.0;  // ||average - half_average|| / ||average||
};

DominantProjection gla_dominant_projection(const CMatrix& F, cplx lambda);

// (1/m) sum_i Lambda^(-(i-1)) Z^{-1} f_i.
CVector coordinate_gla(const CMatrix& Z, const CMatrix& F, const CVector& lambda);

// alpha_j = (1/m) sum_i lambda_j^(-i+1) (R^{-1} g_i)_j.
ReconstructionWeights gla_weights(const ReconstructionProblem& p);

// Per-snapshot exact-fit weights alpha^(i) = Lambda^(-i+1) R^{-1} g_i, column i.
CMatrix per_snapshot_weights(const ReconstructionProblem& p);

// w_j(i), rows j, columns i; every row sums to one.
Eigen::MatrixXd gla_step_weights(const CVector& lambda, Index m);

// alpha = sum_i W^(i) Lambda^(-i+1) R^{-1} g_i with W^(i) = diag(w_j(i)).
ReconstructionWeights weighted_gla_weights(const ReconstructionProblem& p);

// Setup of the consistency experiment: z1 = e1, z2 = e2 and
// z3 = (c1, c2, sqrt(1 - |c1|^2 - |c2|^2)), snapshots
// f_i = sum_j beta_j lambda_j^(i-1) z_j, reconstruction with {z1, z2}.
struct ConsistencyConfig {
    CVector lambda = (CVector(3) << 0.9, 0.8, 0.4).finished();
    cplx c1 = 0.5, c2 = 0.5;
    CVector beta = CVector::Ones(3);
    std::vector<Index> grid = {10, 20, 50, 100, 200, 500, 1000, 2000};
};

struct ConsistencyRow {
    Index m = 0;
    double err_star = 0.0;  // ||alpha_star - (beta1, beta2)||
    double err_gla = 0.0;
    double obj_mp = 0.0, obj_star = 0.0, obj_gla = 0.0;
};

struct ConsistencyReport {
    std::vector<ConsistencyRow> rows;
    bool gla_consistent = false;   // GLA errors eventually decreasing and small at the largest m
    bool star_consistent = false;
    bool gla_optimal = false;      // objective equals the Moore-Penrose objective
    bool star_optimal = false;
};

// Throws std::invalid_argument unless |lambda1| <= 1, |lambda1| >= |lambda2| > |lambda3|
// and |c1|^2 + |c2|^2 <= 1. consistent_tol is the error below which an
// estimator counts as converged at the largest m.
ConsistencyReport consistency_experiment(const ConsistencyConfig& cfg, double consistent_tol = 1e-3);

enum class PFormMode { full, adapted };

struct PForm {
    CMatrix P;
    PFormMode source = PFormMode::adapted;
};

// full: P = Z^{-*} Z^{-1} for a square invertible Z.
// adapted: P = Q R^{-*} R^{-1} Q^* + Q_perp Q_perp^* for Z = QR of full column rank.
PForm p_form(const CMatrix& Z, PFormMode mode);

// min_beta sum_i ||f_i - Z diag(beta) lambda^(i-1)||_P^2 with the adapted P of Z.
ReconstructionWeights p_norm_weights(const CMatrix& Z, const CVector& lambda, const CMatrix& X);

}  // namespace kvdmd
