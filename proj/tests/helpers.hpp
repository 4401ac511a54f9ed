#pragma once

#include "kvdmd/linalg.hpp"

#include <random>

namespace testing_util {

using kvdmd::CMatrix;
using kvdmd::CVector;
using kvdmd::Index;
using kvdmd::cplx;

inline CMatrix randc(Index n, Index m, std::mt19937_64& rng) {
    std::normal_distribution<double> N;
    CMatrix A(n, m);
    for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < n; ++i) {
            const double re = N(rng);
            A(i, j) = cplx(re, N(rng));
        }
    return A;
}

inline CVector randv(Index n, std::mt19937_64& rng) { return randc(n, 1, rng).col(0); }

// Uniform in the annulus lo <= |z| <= hi.
inline CVector rand_annulus(Index n, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    CVector v(n);
    for (Index i = 0; i < n; ++i) {
        const double r = lo + (hi - lo) * U(rng);
        v(i) = std::polar(r, 2.0 * 3.14159265358979323846 * U(rng));
    }
    return v;
}

inline double rel(const CMatrix& a, const CMatrix& b) {
    const double d = b.norm();
    return d == 0.0 ? a.norm() : (a - b).norm() / d;
}

}  // namespace testing_util
