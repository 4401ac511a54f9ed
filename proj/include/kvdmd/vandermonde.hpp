#pragma once
// Vandermonde matrices through their DFT image.
//
// With F(j,k) = w^((j-1)(k-1))/sqrt(m), w = exp(2 pi i/m), the product V*F of a
// Vandermonde matrix with rows (1, l, ..., l^(m-1)) is a generalized Cauchy
// matrix D1*C*D2 with C(i,j) = 1/(l_i - y_j), y_j = exp(-2 pi i (j-1)/m),
// D1 = diag((l_i^m - 1)/sqrt(m)) and D2 = diag(y_j). A node l_i that equals
// some y_j gives a row with a single nonzero entry.
//
// The factorization below follows the reference Matlab routine Vand_DFT_LDU
// step for step, including its argmax tie-break and Schur update rules.

#include "kvdmd/linalg.hpp"

#include <optional>
#include <vector>

namespace kvdmd {

// exp(-2 pi i (j-1)/m), j = 1..m.
CVector dft_nodes(Index m);

// X * F for the unitary DFT matrix F above, row by row with FFTW.
// FFTW_BACKWARD is unnormalized with exponent +2 pi i jk/m, so X*F equals the
// backward transform of each row divided by sqrt(m).
CMatrix dft_multiply(const CMatrix& X);

// Dense F, mostly for tests.
CMatrix dft_matrix(Index m);

// Tolerance |l - y_j| <= sqrt(m) eps for treating a node as a root of unity.
double root_of_unity_tol(Index m);

struct GeneralizedCauchy {
    CVector x;   // nodes l_i
    CVector y;   // roots of unity exp(-2 pi i (j-1)/m)
    CVector d1;  // (l_i^m - 1)/sqrt(m), or 1/sqrt(m) on coincident rows
    CVector d2;  // equal to y
    std::vector<std::optional<Index>> coincidence;  // column hit by row i, if any

    Index rows() const { return x.size(); }
    Index cols() const { return y.size(); }
    // Core C: 1/(x_i - y_j), or on a coincident row the single entry prod_{k != j}(x_i - y_k).
    CMatrix core() const;
    // D1*C*D2 with the same operation order as the factorization's initial fill.
    CMatrix assemble() const;
};

GeneralizedCauchy dft_transform(const CVector& lambda, Index m);

struct PivotedLDU {
    Permutation p1;  // row pivots: (P1 A)(k,:) = A(p1[k],:)
    Permutation p2;  // column pivots: (A P2)(:,k) = A(:,p2[k])
    CMatrix L;       // rows x k, unit lower trapezoidal
    CVector delta;   // k = min(rows, cols)
    CMatrix U;       // k x cols, unit upper trapezoidal

    // P1^T L diag(delta) U P2^T
    CMatrix reassemble() const;
};

// Complete-pivoted LDU of the generalized Cauchy matrix D1*C*D2.
PivotedLDU cauchy_ldu(const GeneralizedCauchy& G);

// Same factorization of the matrix d1_i d2_j / (x_i - y_j). Throws if x or y
// has repeated nodes, or if some x_i equals some y_j.
PivotedLDU cauchy_ldu(const CVector& x, const CVector& y, const CVector& d1, const CVector& d2);

// Elimination kernel shared by both overloads: G holds the initial entries and
// x, y the nodes that drive the multiplicative Schur updates.
PivotedLDU cauchy_ldu_from_entries(CMatrix G, CVector x, CVector y);

struct DftSolve {
    CMatrix W;      // X V^{-1}, or X F (C D2)^{-1} when d1 was deferred
    CVector d1;     // the D1 diagonal of the transform
    bool deferred = false;

    // X V^{-1} in both cases.
    CMatrix modes() const;
    // Column norms of X V^{-1}, computed without forming it in the deferred case.
    RVector amplitudes() const;
};

// W = X V^{-1} with V the m x m Vandermonde matrix of lambda (m = X.cols()):
// W = X F P2 U^{-1} Delta^{-1} L^{-1} P1. With defer_d1 the factorization runs
// on C*D2 only and D1^{-1} is left for the caller.
DftSolve solve_modes_dft(const CMatrix& X, const CVector& lambda, bool defer_d1 = false);

struct AccurateSVD {
    CMatrix U;
    RVector sigma;  // nonincreasing
    CMatrix V;
};

// SVD of P1^T L Delta U P2^T from its factors. QR with column pivoting of
// L*Delta followed by one-sided Jacobi on the row-graded triangular product,
// so small singular values keep their relative accuracy.
AccurateSVD accurate_svd(const PivotedLDU& f);

// SVD of the square Vandermonde matrix of lambda, assembled as
// V = (P1^T Omega) Sigma (F P2 Theta)^*.
AccurateSVD accurate_svd_vandermonde(const CVector& lambda);

// sigma_max/sigma_min of the square Vandermonde matrix of lambda.
double vandermonde_condition(const CVector& lambda);

// One-sided Jacobi SVD of a square matrix (right rotations). Exposed for tests.
AccurateSVD one_sided_jacobi(const CMatrix& W);

// X V diag(sigma/(sigma^2 + eta^2)) U^* for V = U Sigma V^*.
CMatrix regularized_apply(const CMatrix& X, const AccurateSVD& s, double eta);

// Bjorck-Pereyra. Rows of the result solve w^T V = b^T for each row b^T of B.
CMatrix bjorck_pereyra(const CVector& lambda, const CMatrix& B);
// Bjorck-Pereyra for V c = b (polynomial interpolation).
CVector bjorck_pereyra_interpolate(const CVector& lambda, const CVector& b);

enum class Scaling { none, row, column };

// V, D_r^{-1} V or V D_c^{-1} with D_r, D_c the row or column 2-norms of V.
// The diagonal of the scaling is returned in d (all ones for none).
CMatrix scaled_vandermonde(const CVector& lambda, Scaling scaling, RVector& d);

// X V^{-1} by a dense LU solve on the scaled matrix, with the scaling folded
// back into the result.
CMatrix scaled_solve(const CMatrix& X, const CVector& lambda, Scaling scaling);

// Throws CoincidenceError if two nodes are exactly equal.
void require_distinct(const CVector& nodes, const char* what);

}  // namespace kvdmd
