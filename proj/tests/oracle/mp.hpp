#pragma once
// Extended-precision reference arithmetic for test oracles (MPFR, 100 digits).
// Nothing here is used by the library itself.

#include "kvdmd/linalg.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <vector>

namespace oracle {

using mpreal = boost::multiprecision::mpfr_float_100;
using kvdmd::CMatrix;
using kvdmd::CVector;
using kvdmd::Index;

struct mpc {
    mpreal re = 0, im = 0;
    mpc() = default;
    mpc(mpreal r, mpreal i = 0) : re(std::move(r)), im(std::move(i)) {}
    mpc(std::complex<double> z) : re(z.real()), im(z.imag()) {}
    mpc(double r) : re(r), im(0) {}
    explicit operator std::complex<double>() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
};

inline mpc operator+(const mpc& a, const mpc& b) { return {a.re + b.re, a.im + b.im}; }
inline mpc operator-(const mpc& a, const mpc& b) { return {a.re - b.re, a.im - b.im}; }
inline mpc operator-(const mpc& a) { return {-a.re, -a.im}; }
inline mpc operator*(const mpc& a, const mpc& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline mpreal abs2(const mpc& a) { return a.re * a.re + a.im * a.im; }
inline mpreal abs(const mpc& a) { return sqrt(abs2(a)); }
inline mpc conj(const mpc& a) { return {a.re, -a.im}; }
inline mpc operator/(const mpc& a, const mpc& b) {
    const mpreal d = abs2(b);
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
inline mpc& operator+=(mpc& a, const mpc& b) { return a = a + b; }
inline mpc& operator-=(mpc& a, const mpc& b) { return a = a - b; }

struct MpMatrix {
    Index rows = 0, cols = 0;
    std::vector<mpc> a;  // column-major
    MpMatrix() = default;
    MpMatrix(Index r, Index c) : rows(r), cols(c), a(static_cast<size_t>(r * c)) {}
    explicit MpMatrix(const CMatrix& M) : MpMatrix(M.rows(), M.cols()) {
        for (Index j = 0; j < cols; ++j)
            for (Index i = 0; i < rows; ++i) (*this)(i, j) = mpc(M(i, j));
    }
    mpc& operator()(Index i, Index j) { return a[static_cast<size_t>(i + j * rows)]; }
    const mpc& operator()(Index i, Index j) const { return a[static_cast<size_t>(i + j * rows)]; }
    CMatrix to_double() const {
        CMatrix M(rows, cols);
        for (Index j = 0; j < cols; ++j)
            for (Index i = 0; i < rows; ++i) M(i, j) = static_cast<std::complex<double>>((*this)(i, j));
        return M;
    }
};

inline MpMatrix operator*(const MpMatrix& A, const MpMatrix& B) {
    MpMatrix C(A.rows, B.cols);
    for (Index j = 0; j < B.cols; ++j)
        for (Index k = 0; k < A.cols; ++k) {
            const mpc& b = B(k, j);
            for (Index i = 0; i < A.rows; ++i) C(i, j) += A(i, k) * b;
        }
    return C;
}

inline MpMatrix operator-(const MpMatrix& A, const MpMatrix& B) {
    MpMatrix C = A;
    for (size_t k = 0; k < C.a.size(); ++k) C.a[k] -= B.a[k];
    return C;
}

inline mpreal frob(const MpMatrix& A) {
    mpreal s = 0;
    for (const auto& z : A.a) s += abs2(z);
    return sqrt(s);
}

// Rows (1, l, ..., l^(cols-1)) with exact powers of the given double nodes.
inline MpMatrix vandermonde(const CVector& lambda, Index cols) {
    MpMatrix V(lambda.size(), cols);
    for (Index i = 0; i < lambda.size(); ++i) {
        mpc p(1.0), l(lambda(i));
        for (Index j = 0; j < cols; ++j) {
            V(i, j) = p;
            p = p * l;
        }
    }
    return V;
}

// F(j,k) = exp(2 pi i (j-1)(k-1)/m)/sqrt(m) in extended precision.
inline MpMatrix dft(Index m) {
    MpMatrix F(m, m);
    const mpreal pi = boost::math::constants::pi<mpreal>();
    const mpreal s = 1 / sqrt(mpreal(m));
    for (Index j = 0; j < m; ++j)
        for (Index k = 0; k < m; ++k) {
            const mpreal t = 2 * pi * mpreal((j * k) % m) / mpreal(m);
            F(j, k) = mpc(s * cos(t), s * sin(t));
        }
    return F;
}

// X M^{-1} by Gaussian elimination with partial pivoting on M^T.
inline MpMatrix solve_right(const MpMatrix& X, const MpMatrix& M) {
    const Index m = M.rows;
    // Solve M^T Y = X^T.
    MpMatrix A(m, m), B(m, X.rows);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) A(i, j) = M(j, i);
    for (Index i = 0; i < m; ++i)
        for (Index r = 0; r < X.rows; ++r) B(i, r) = X(r, i);
    for (Index k = 0; k < m; ++k) {
        Index piv = k;
        for (Index i = k + 1; i < m; ++i)
            if (abs2(A(i, k)) > abs2(A(piv, k))) piv = i;
        if (piv != k) {
            for (Index j = 0; j < m; ++j) std::swap(A(k, j), A(piv, j));
            for (Index j = 0; j < B.cols; ++j) std::swap(B(k, j), B(piv, j));
        }
        for (Index i = k + 1; i < m; ++i) {
            const mpc f = A(i, k) / A(k, k);
            for (Index j = k; j < m; ++j) A(i, j) -= f * A(k, j);
            for (Index j = 0; j < B.cols; ++j) B(i, j) -= f * B(k, j);
        }
    }
    for (Index k = m - 1; k >= 0; --k)
        for (Index j = 0; j < B.cols; ++j) {
            mpc s = B(k, j);
            for (Index i = k + 1; i < m; ++i) s -= A(k, i) * B(i, j);
            B(k, j) = s / A(k, k);
        }
    MpMatrix Y(X.rows, m);
    for (Index r = 0; r < X.rows; ++r)
        for (Index i = 0; i < m; ++i) Y(r, i) = B(i, r);
    return Y;
}

// Singular values (nonincreasing) by Hestenes one-sided Jacobi on the Gram entries,
// carried out entirely in extended precision.
inline std::vector<mpreal> singular_values(MpMatrix A) {
    const Index n = A.cols;
    const mpreal tol = mpreal("1e-90");
    for (int sweep = 0; sweep < 100; ++sweep) {
        bool rotated = false;
        for (Index p = 0; p + 1 < n; ++p)
            for (Index q = p + 1; q < n; ++q) {
                mpreal app = 0, aqq = 0;
                mpc apq;
                for (Index i = 0; i < A.rows; ++i) {
                    app += abs2(A(i, p));
                    aqq += abs2(A(i, q));
                    apq += conj(A(i, p)) * A(i, q);
                }
                const mpreal mag = abs(apq);
                if (mag == 0 || mag <= tol * sqrt(app * aqq)) continue;
                rotated = true;
                const mpc e = apq / mpc(mag);
                const mpreal zeta = (aqq - app) / (2 * mag);
                const mpreal t = (zeta >= 0 ? mpreal(1) : mpreal(-1)) / (fabs(zeta) + sqrt(1 + zeta * zeta));
                const mpreal c = 1 / sqrt(1 + t * t);
                const mpreal s = c * t;
                for (Index i = 0; i < A.rows; ++i) {
                    const mpc wp = A(i, p), wq = A(i, q);
                    A(i, p) = mpc(c) * wp - mpc(s) * conj(e) * wq;
                    A(i, q) = mpc(s) * e * wp + mpc(c) * wq;
                }
            }
        if (!rotated) break;
    }
    std::vector<mpreal> s(static_cast<size_t>(n));
    for (Index j = 0; j < n; ++j) {
        mpreal t = 0;
        for (Index i = 0; i < A.rows; ++i) t += abs2(A(i, j));
        s[static_cast<size_t>(j)] = sqrt(t);
    }
    std::sort(s.begin(), s.end(), [](const mpreal& a, const mpreal& b) { return a > b; });
    return s;
}

}  // namespace oracle
