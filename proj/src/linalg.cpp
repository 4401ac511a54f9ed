#include "kvdmd/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace kvdmd {

void require_finite(const CMatrix& A, const char* name) {
    if (A.rows() < 1 || A.cols() < 1)
        throw std::invalid_argument(std::string(name) + ": empty matrix");
    for (Index j = 0; j < A.cols(); ++j)
        for (Index i = 0; i < A.rows(); ++i)
            if (!std::isfinite(A(i, j).real()) || !std::isfinite(A(i, j).imag()))
                throw std::invalid_argument(std::string(name) + ": non-finite entry");
}

Permutation::Permutation(Index n) : map_(static_cast<size_t>(n)) {
    std::iota(map_.begin(), map_.end(), Index{0});
}

Permutation::Permutation(std::vector<Index> map) : map_(std::move(map)) {
    std::vector<char> seen(map_.size(), 0);
    for (Index v : map_) {
        if (v < 0 || v >= size() || seen[static_cast<size_t>(v)])
            throw std::invalid_argument("Permutation: map is not a bijection");
        seen[static_cast<size_t>(v)] = 1;
    }
}

void Permutation::swap(Index a, Index b) {
    std::swap(map_[static_cast<size_t>(a)], map_[static_cast<size_t>(b)]);
}

Permutation Permutation::inverse() const {
    std::vector<Index> inv(map_.size());
    for (size_t k = 0; k < map_.size(); ++k) inv[static_cast<size_t>(map_[k])] = static_cast<Index>(k);
    return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
    for (size_t k = 0; k < map_.size(); ++k)
        if (map_[k] != static_cast<Index>(k)) return false;
    return true;
}

CMatrix Permutation::permute_rows(const CMatrix& A) const {
    if (A.rows() != size()) throw std::invalid_argument("permute_rows: size mismatch");
    CMatrix B(A.rows(), A.cols());
    for (Index k = 0; k < size(); ++k) B.row(k) = A.row((*this)[k]);
    return B;
}

CMatrix Permutation::permute_cols(const CMatrix& A) const {
    if (A.cols() != size()) throw std::invalid_argument("permute_cols: size mismatch");
    CMatrix B(A.rows(), A.cols());
    for (Index k = 0; k < size(); ++k) B.col(k) = A.col((*this)[k]);
    return B;
}

CVector Permutation::permute(const CVector& v) const {
    if (v.size() != size()) throw std::invalid_argument("permute: size mismatch");
    CVector w(v.size());
    for (Index k = 0; k < size(); ++k) w(k) = v((*this)[k]);
    return w;
}

CMatrix Permutation::matrix() const {
    CMatrix P = CMatrix::Zero(size(), size());
    for (Index k = 0; k < size(); ++k) P(k, (*this)[k]) = 1.0;
    return P;
}

QR thin_qr(const CMatrix& A) {
    require_finite(A, "thin_qr");
    const Index n = A.rows(), k = A.cols();
    if (n < k) throw std::invalid_argument("thin_qr: more columns than rows");
    Eigen::HouseholderQR<CMatrix> qr(A);
    QR out;
    out.Q = qr.householderQ() * CMatrix::Identity(n, k);
    out.R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (Index j = 0; j < k; ++j) {
        const double a = std::abs(out.R(j, j));
        if (a == 0.0) continue;
        const cplx ph = out.R(j, j) / a;
        out.R.row(j) *= std::conj(ph);
        out.R(j, j) = a;
        out.Q.col(j) *= ph;
    }
    return out;
}

SVD svd(const CMatrix& A) {
    require_finite(A, "svd");
    Eigen::JacobiSVD<CMatrix> s(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {s.matrixU(), s.singularValues(), s.matrixV()};
}

RVector singular_values(const CMatrix& A) {
    require_finite(A, "singular_values");
    Eigen::JacobiSVD<CMatrix> s(A);
    return s.singularValues();
}

Eig eig_dense(const CMatrix& A) {
    require_finite(A, "eig_dense");
    if (A.rows() != A.cols()) throw std::invalid_argument("eig_dense: matrix is not square");
    Eigen::ComplexEigenSolver<CMatrix> es(A, true);
    if (es.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "eig_dense: QR iteration did not converge for a " << A.rows() << "x" << A.cols()
            << " matrix (iteration limit " << es.getMaxIterations() << " per eigenvalue)";
        throw Error(msg.str());
    }
    Eig out{es.eigenvalues(), es.eigenvectors()};
    for (Index j = 0; j < out.vectors.cols(); ++j) {
        const double nrm = out.vectors.col(j).norm();
        if (nrm > 0) out.vectors.col(j) /= nrm;
    }
    return out;
}

double condition_2(const CMatrix& A) {
    const RVector s = singular_values(A);
    if (s(0) == 0.0) throw std::invalid_argument("condition_2: zero matrix");
    const double smin = s(s.size() - 1);
    return smin == 0.0 ? std::numeric_limits<double>::infinity() : s(0) / smin;
}

Lstsq lstsq(const CMatrix& A, const CMatrix& B) {
    require_finite(A, "lstsq");
    require_finite(B, "lstsq");
    if (A.rows() != B.rows()) throw std::invalid_argument("lstsq: row count mismatch");
    if (A.rows() < A.cols()) throw std::invalid_argument("lstsq: underdetermined system");
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(A);
    Lstsq out;
    out.x = cod.solve(B);
    out.rank = cod.rank();
    out.rank_deficient = out.rank < A.cols();
    return out;
}

CMatrix right_solve(const CMatrix& X, const CMatrix& M) {
    require_finite(X, "right_solve");
    require_finite(M, "right_solve");
    if (M.rows() != M.cols() || X.cols() != M.rows())
        throw std::invalid_argument("right_solve: shape mismatch");
    // P M = L U with row pivoting on M itself, so X M^{-1} = X U^{-1} L^{-1} P.
    Eigen::PartialPivLU<CMatrix> lu(M);
    const auto& LU = lu.matrixLU();
    for (Index k = 0; k < LU.rows(); ++k)
        if (LU(k, k) == cplx(0.0)) throw Error("right_solve: matrix is singular");
    CMatrix W = X;
    LU.triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(W);
    LU.triangularView<Eigen::UnitLower>().solveInPlace<Eigen::OnTheRight>(W);
    return W * lu.permutationP();
}

CMatrix vandermonde(const CVector& nodes, Index cols) {
    CMatrix V(nodes.size(), cols);
    for (Index i = 0; i < nodes.size(); ++i) {
        cplx p = 1.0;
        for (Index j = 0; j < cols; ++j) {
            V(i, j) = p;
            p *= nodes(i);
        }
    }
    return V;
}

namespace {

// Error-free transformations (Knuth TwoSum, fma-based TwoProduct).
inline void two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    const double z = s - a;
    e = (a - (s - z)) + (b - z);
}

struct Acc {
    double s = 0.0, c = 0.0;
    void add_prod(double a, double b) {
        const double p = a * b;
        const double pe = std::fma(a, b, -p);
        double t, e;
        two_sum(s, p, t, e);
        s = t;
        c += e + pe;
    }
    double value() const { return s + c; }
};

}  // namespace

CMatrix product_compensated(const CMatrix& X, const CMatrix& M) {
    if (X.cols() != M.rows()) throw std::invalid_argument("product_compensated: shape mismatch");
    CMatrix out(X.rows(), M.cols());
    for (Index j = 0; j < M.cols(); ++j) {
        for (Index i = 0; i < X.rows(); ++i) {
            Acc re, im;
            for (Index k = 0; k < X.cols(); ++k) {
                const cplx x = X(i, k), m = M(k, j);
                re.add_prod(x.real(), m.real());
                re.add_prod(-x.imag(), m.imag());
                im.add_prod(x.real(), m.imag());
                im.add_prod(x.imag(), m.real());
            }
            out(i, j) = cplx(re.value(), im.value());
        }
    }
    return out;
}

}  // namespace kvdmd
