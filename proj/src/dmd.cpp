#include "kvdmd/dmd.hpp"

#include <cmath>
#include <limits>

namespace kvdmd {

DmdResult schmid_dmd(const CMatrix& X, const CMatrix& Y, double rank_tol) {
    require_finite(X, "schmid_dmd");
    require_finite(Y, "schmid_dmd");
    if (X.rows() != Y.rows() || X.cols() != Y.cols()) throw std::invalid_argument("schmid_dmd: X and Y differ in shape");
    if (rank_tol <= 0.0)
        rank_tol = static_cast<double>(std::max(X.rows(), X.cols())) * std::numeric_limits<double>::epsilon();

    const SVD s = svd(X);
    Index k = 0;
    while (k < s.sigma.size() && s.sigma(k) > rank_tol * s.sigma(0)) ++k;
    if (k == 0) throw RankDeficientError("schmid_dmd: every singular value is below the rank threshold", 0.0,
                                         s.sigma.size() ? s.sigma(0) : 0.0);

    DmdResult r;
    r.k = k;
    r.U = s.U.leftCols(k);
    r.sigma = s.sigma.head(k);
    r.Phi = s.V.leftCols(k);
    CMatrix S = (r.U.adjoint() * Y) * r.Phi;
    for (Index j = 0; j < k; ++j) S.col(j) /= r.sigma(j);
    Eig e = eig_dense(S);
    r.lambda = e.values;
    r.B = e.vectors;
    r.Z = r.U * r.B;
    for (Index j = 0; j < k; ++j) r.Z.col(j).normalize();
    r.defective = !(condition_2(r.B) < 1e12);
    return r;
}

DmdAmplitudes dmd_amplitudes(const DmdResult& r) {
    CVector rhs = r.sigma.cast<cplx>().cwiseProduct(r.Phi.row(0).adjoint());
    DmdAmplitudes out;
    if (condition_2(r.B) < 1e12) {
        out.a = r.B.partialPivLu().solve(rhs);
    } else {
        out.a = lstsq(r.B, rhs).x;
        out.fallback = true;
    }
    return out;
}

Matching match_eigenvalues(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("match_eigenvalues: lists differ in length");
    const Index n = a.size();
    Matching m;
    m.map.assign(static_cast<size_t>(n), -1);
    std::vector<bool> used(static_cast<size_t>(n), false);
    for (Index i = 0; i < n; ++i) {
        Index best = -1, best_free = -1;
        double d = 0.0, d_free = 0.0;
        for (Index j = 0; j < n; ++j) {
            const double dj = std::abs(a(i) - b(j));
            if (best < 0 || dj < d) { best = j; d = dj; }
            if (!used[static_cast<size_t>(j)] && (best_free < 0 || dj < d_free)) { best_free = j; d_free = dj; }
        }
        if (best != best_free) m.collision = true;
        used[static_cast<size_t>(best_free)] = true;
        m.map[static_cast<size_t>(i)] = best_free;
        m.max_distance = std::max(m.max_distance, d_free);
    }
    return m;
}

}  // namespace kvdmd
