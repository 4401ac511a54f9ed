#include "kvdmd/vandermonde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace kvdmd {

AccurateSVD one_sided_jacobi(const CMatrix& W0) {
    require_finite(W0, "one_sided_jacobi");
    const Index n = W0.cols();
    CMatrix W = W0;
    CMatrix V = CMatrix::Identity(n, n);
    const double tol = std::sqrt(static_cast<double>(W.rows())) * std::numeric_limits<double>::epsilon();
    const int max_sweeps = 80;

    bool converged = n < 2;
    RVector nrm(n);
    for (Index j = 0; j < n; ++j) nrm(j) = W.col(j).stableNorm();
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        bool rotated = false;
        for (Index p = 0; p + 1 < n; ++p)
            for (Index q = p + 1; q < n; ++q) {
                const double np = nrm(p), nq = nrm(q);
                if (np == 0.0 || nq == 0.0) continue;
                // cosine of the angle between the columns, free of under/overflow
                const cplx g = (W.col(p) / np).dot(W.col(q) / nq);
                const double ag = std::abs(g);
                if (!(ag > tol)) continue;
                rotated = true;
                const cplx e = g / ag;
                const double zeta = (nq / np - np / nq) / (2.0 * ag);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = c * t;
                const CVector wp = W.col(p);
                W.col(p) = c * wp - (s * std::conj(e)) * W.col(q);
                W.col(q) = (s * e) * wp + c * W.col(q);
                const CVector vp = V.col(p);
                V.col(p) = c * vp - (s * std::conj(e)) * V.col(q);
                V.col(q) = (s * e) * vp + c * V.col(q);
                nrm(p) = W.col(p).stableNorm();
                nrm(q) = W.col(q).stableNorm();
            }
        converged = !rotated;
    }
    if (!converged) throw Error("one_sided_jacobi: no convergence within the sweep limit");

    std::vector<Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return nrm(a) > nrm(b); });
    AccurateSVD out;
    out.U.resize(W.rows(), n);
    out.V.resize(n, n);
    out.sigma.resize(n);
    for (Index k = 0; k < n; ++k) {
        const Index j = order[static_cast<size_t>(k)];
        out.sigma(k) = nrm(j);
        out.U.col(k) = nrm(j) > 0.0 ? CVector(W.col(j) / nrm(j)) : CVector(W.col(j));
        out.V.col(k) = V.col(j);
    }
    return out;
}

AccurateSVD accurate_svd(const PivotedLDU& f) {
    const Index m = f.L.rows();
    if (f.L.cols() != m || f.U.rows() != m || f.U.cols() != m)
        throw std::invalid_argument("accurate_svd: square factorization required");
    const CMatrix LD = f.L * f.delta.asDiagonal();
    Eigen::ColPivHouseholderQR<CMatrix> qr(LD);
    const CMatrix Q = qr.householderQ();
    const CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    const CMatrix W = R * (qr.colsPermutation().transpose() * f.U);
    const AccurateSVD j = one_sided_jacobi(W);
    AccurateSVD out;
    out.sigma = j.sigma;
    out.U = f.p1.inverse().permute_rows(Q * j.U);
    out.V = f.p2.inverse().permute_rows(j.V);
    return out;
}

}  // namespace kvdmd
