#pragma once
// Dense complex linear algebra primitives shared by every module.
//
// Matrices are Eigen column-major complex<double> matrices. All routines take
// their inputs by const reference and return fresh values.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace kvdmd {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a matrix that must have full column rank does not.
class RankDeficientError : public Error {
public:
    RankDeficientError(const std::string& what, double sigma_min, double sigma_max)
        : Error(what), sigma_min(sigma_min), sigma_max(sigma_max) {}
    double sigma_min;
    double sigma_max;
};

/// Raised when nodes that must be pairwise distinct coincide.
class CoincidenceError : public Error {
public:
    CoincidenceError(const std::string& what, Index i, Index j)
        : Error(what), first(i), second(j) {}
    Index first;
    Index second;
};

// Throws std::invalid_argument if A is empty or has a NaN/Inf entry.
void require_finite(const CMatrix& A, const char* name);

/// Permutation of {0..n-1}. map()[k] is the source index that lands in slot k,
/// so permute_rows(A)(k,:) = A(map[k],:) and permute_cols(A)(:,k) = A(:,map[k]).
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(Index n);
    explicit Permutation(std::vector<Index> map);

    Index size() const { return static_cast<Index>(map_.size()); }
    Index operator[](Index k) const { return map_[static_cast<size_t>(k)]; }
    const std::vector<Index>& map() const { return map_; }

    void swap(Index a, Index b);
    Permutation inverse() const;
    bool is_identity() const;

    CMatrix permute_rows(const CMatrix& A) const;
    CMatrix permute_cols(const CMatrix& A) const;
    CVector permute(const CVector& v) const;
    // P with P(k, map[k]) = 1, so P*A == permute_rows(A) and A*P^T == permute_cols(A).
    CMatrix matrix() const;

private:
    std::vector<Index> map_;
};

struct QR {
    CMatrix Q;  // n x k, orthonormal columns
    CMatrix R;  // k x k upper triangular with real nonnegative diagonal
};

struct SVD {
    CMatrix U;
    RVector sigma;  // nonincreasing
    CMatrix V;
};

struct Eig {
    CVector values;
    CMatrix vectors;  // unit 2-norm columns
};

struct Lstsq {
    CMatrix x;
    Index rank = 0;
    bool rank_deficient = false;
};

// Householder thin QR. Column phases are normalized so diag(R) >= 0.
QR thin_qr(const CMatrix& A);

// Thin SVD A = U diag(sigma) V^*.
SVD svd(const CMatrix& A);
RVector singular_values(const CMatrix& A);

// Eigen decomposition of a square matrix by the complex Schur form.
Eig eig_dense(const CMatrix& A);

// sigma_max / sigma_min; +inf when sigma_min is zero.
double condition_2(const CMatrix& A);

// min ||A x - B||_F column by column; minimum-norm solution when rank deficient.
Lstsq lstsq(const CMatrix& A, const CMatrix& B);

// X * M^{-1} through a partially pivoted LU of M. Throws on an exactly singular pivot.
CMatrix right_solve(const CMatrix& X, const CMatrix& M);

// Rows (1, l, l^2, ..., l^(cols-1)) for each node l.
CMatrix vandermonde(const CVector& nodes, Index cols);

// X * M evaluated with compensated (twice working precision) dot products.
// Used for residuals where heavy cancellation is expected.
CMatrix product_compensated(const CMatrix& X, const CMatrix& M);

}  // namespace kvdmd
