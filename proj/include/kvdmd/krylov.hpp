#pragma once
// Companion-matrix representation of a snapshot sequence f_1, ..., f_{m+1}.
//
// With X_m = (f_1 .. f_m) and c the least squares solution of X_m c = f_{m+1},
// A X_m = X_m C_m + r e_m^T where C_m has ones on the subdiagonal and c as its
// last column. The eigenvalues of C_m are the Ritz values, and with V_m the
// Vandermonde matrix of those values, X_m = (X_m V_m^{-1}) V_m is the modal
// representation of the snapshots.

#include "kvdmd/linalg.hpp"

#include <vector>

namespace kvdmd {

struct CompanionModel {
    CVector c;      // length m
    CVector r;      // f_{m+1} - X_m c, in the basis the model was computed in
    CVector ritz;   // eigenvalues of C_m
    bool near_coincident = false;
    double sigma_min = 0.0;  // extreme singular values of X_m
    double sigma_max = 0.0;
};

struct CompressedSnapshots {
    CMatrix Qhat;  // n x (m+1)
    CMatrix Rf;    // (m+1) x (m+1) upper triangular, X = Qhat Rf

    CMatrix Rx() const { return Rf.leftCols(Rf.cols() - 1); }
    CMatrix Ry() const { return Rf.rightCols(Rf.cols() - 1); }
};

// X = Qhat Rf. Requires n >= m+1.
CompressedSnapshots compress_qr(const CMatrix& X);

// Least squares companion coefficients for the snapshot matrix X = (f_1 .. f_{m+1}).
// rank_tol <= 0 selects m*eps. Throws RankDeficientError when
// sigma_min(X_m) <= rank_tol * sigma_max(X_m).
CompanionModel companion_from_snapshots(const CMatrix& X, double rank_tol = 0.0);

// Same, from the triangular factor of a compressed snapshot matrix:
// c = Rx(0:m,0:m)^{-1} Rf(0:m,m) and r = Rf(m,m) e_{m+1}.
CompanionModel companion_from_compressed(const CompressedSnapshots& cs, double rank_tol = 0.0);

CMatrix companion_matrix(const CVector& c);

struct RitzValues {
    CVector values;
    bool near_coincident = false;  // some gap below 1e-10 max|lambda|
};

RitzValues ritz_values(const CVector& c);

struct UnitaryPlusRankOne {
    CMatrix U;    // cyclic shift with U(0, m-1) = corner
    CVector chat; // c - corner e_1, so C_m = U + chat e_m^T
};

UnitaryPlusRankOne unitary_plus_rank_one(const CVector& c, cplx corner = 1.0);

// e_m^T V^{-1}: entry j is prod_{k != j} 1/(lambda_j - lambda_k).
CVector last_row_inverse_vandermonde(const CVector& lambda);

// ||A w_j - lambda_j w_j|| / ||w_j|| = ||r|| |(V^{-1})_{m,j}| / ||w_j||.
double ritz_residual(Index j, const CVector& lambda, double r_norm, double w_norm);

enum class Solver { naive, row_scaled, column_scaled, bjorck_pereyra, dft_cauchy };

const char* solver_name(Solver s);
Solver parse_solver(const std::string& name);

// X V^{-1} for the Vandermonde matrix of lambda, by the chosen method.
CMatrix solve_modes(const CMatrix& Xm, const CVector& lambda, Solver s);

struct ModalDecomposition {
    CMatrix W;            // unit modes
    RVector amplitudes;   // ||raw(:,j)||
    CVector ritz;
    CMatrix raw;          // X_m V_m^{-1}
    CompanionModel model;
    bool compressed = false;
};

// Companion model, Ritz values and modes of X = (f_1 .. f_{m+1}). When
// n > m+1 the computation runs on the triangular factor of X and the modes are
// mapped back with Qhat.
ModalDecomposition modal_decomposition(const CMatrix& X, Solver s, bool compress = true);

// ||X_m - raw V_m||_F / ||X_m||_F with a compensated product.
double modal_reconstruction_error(const CMatrix& Xm, const CMatrix& raw, const CVector& lambda);

}  // namespace kvdmd
