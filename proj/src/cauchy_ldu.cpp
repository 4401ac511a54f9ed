#include "kvdmd/vandermonde.hpp"

#include <cmath>
#include <sstream>

namespace kvdmd {

CMatrix PivotedLDU::reassemble() const {
    const CMatrix LDU = L * delta.asDiagonal() * U;
    return p2.inverse().permute_cols(p1.inverse().permute_rows(LDU));
}

void require_distinct(const CVector& nodes, const char* what) {
    for (Index i = 0; i < nodes.size(); ++i)
        for (Index j = i + 1; j < nodes.size(); ++j)
            if (nodes(i) == nodes(j)) {
                std::ostringstream msg;
                msg << what << ": nodes " << i << " and " << j << " coincide";
                throw CoincidenceError(msg.str(), i, j);
            }
}

PivotedLDU cauchy_ldu_from_entries(CMatrix G, CVector x, CVector y) {
    const Index mx = G.rows(), my = G.cols();
    if (x.size() != mx || y.size() != my)
        throw std::invalid_argument("cauchy_ldu: node vectors do not match the matrix shape");
    const Index K = std::min(mx, my);
    PivotedLDU f;
    f.p1 = Permutation(mx);
    f.p2 = Permutation(my);

    for (Index k = 0; k < K; ++k) {
        // First maximal |G(r,c)| in column-major order over the trailing block.
        Index im = k, jm = k;
        double best = -1.0;
        for (Index c = k; c < my; ++c)
            for (Index r = k; r < mx; ++r) {
                const double a = std::abs(G(r, c));
                if (a > best) {
                    best = a;
                    im = r;
                    jm = c;
                }
            }
        if (best == 0.0) {
            std::ostringstream msg;
            msg << "cauchy_ldu: zero pivot at step " << k << " (matrix is singular)";
            throw Error(msg.str());
        }
        if (im != k) {
            f.p1.swap(k, im);
            std::swap(x(k), x(im));
            G.row(k).swap(G.row(im));
        }
        if (jm != k) {
            f.p2.swap(k, jm);
            std::swap(y(k), y(jm));
            G.col(k).swap(G.col(jm));
        }
        const cplx xk = x(k), yk = y(k), gkk = G(k, k);
        for (Index c = k + 1; c < my; ++c) {
            const cplx yc = y(c);
            const cplx gkc = G(k, c);
            for (Index r = k + 1; r < mx; ++r) {
                cplx& g = G(r, c);
                if (g != cplx(0.0))
                    g = g * (x(r) - xk) * (yc - yk) / ((yc - xk) * (x(r) - yk));
                else
                    g = -G(r, k) * gkc / gkk;
            }
        }
    }

    f.delta = G.diagonal().head(K);
    f.L = CMatrix::Identity(mx, K);
    for (Index c = 0; c < K; ++c)
        for (Index r = c + 1; r < mx; ++r) f.L(r, c) = G(r, c) / f.delta(c);
    f.U = CMatrix::Identity(K, my);
    for (Index r = 0; r < K; ++r)
        for (Index c = r + 1; c < my; ++c) f.U(r, c) = G(r, c) / f.delta(r);
    return f;
}

PivotedLDU cauchy_ldu(const GeneralizedCauchy& G) {
    require_distinct(G.x, "cauchy_ldu");
    require_distinct(G.y, "cauchy_ldu");
    return cauchy_ldu_from_entries(G.assemble(), G.x, G.y);
}

PivotedLDU cauchy_ldu(const CVector& x, const CVector& y, const CVector& d1, const CVector& d2) {
    if (x.size() < 1 || y.size() < 1) throw std::invalid_argument("cauchy_ldu: empty node vector");
    if (d1.size() != x.size() || d2.size() != y.size())
        throw std::invalid_argument("cauchy_ldu: scaling length mismatch");
    require_distinct(x, "cauchy_ldu");
    require_distinct(y, "cauchy_ldu");
    CMatrix G(x.size(), y.size());
    for (Index c = 0; c < y.size(); ++c)
        for (Index r = 0; r < x.size(); ++r) {
            if (x(r) == y(c)) {
                std::ostringstream msg;
                msg << "cauchy_ldu: x node " << r << " equals y node " << c;
                throw CoincidenceError(msg.str(), r, c);
            }
            G(r, c) = d1(r) * d2(c) / (x(r) - y(c));
        }
    require_finite(G, "cauchy_ldu");
    return cauchy_ldu_from_entries(std::move(G), x, y);
}

}  // namespace kvdmd
