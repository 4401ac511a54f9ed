#include "kvdmd/vandermonde.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

namespace kvdmd {

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex mu;
    return mu;
}

cplx int_pow(cplx z, Index n) {
    cplx result = 1.0;
    while (n > 0) {
        if (n & 1) result *= z;
        z *= z;
        n >>= 1;
    }
    return result;
}

}  // namespace

CVector dft_nodes(Index m) {
    if (m < 1) throw std::invalid_argument("dft_nodes: m must be positive");
    CVector y(m);
    for (Index j = 0; j < m; ++j)
        y(j) = std::exp(cplx(0.0, -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m)));
    return y;
}

CMatrix dft_matrix(Index m) {
    CMatrix F(m, m);
    const double s = 1.0 / std::sqrt(static_cast<double>(m));
    for (Index j = 0; j < m; ++j)
        for (Index k = 0; k < m; ++k) {
            const Index e = (j * k) % m;
            F(j, k) = s * std::exp(cplx(0.0, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(m)));
        }
    return F;
}

CMatrix dft_multiply(const CMatrix& X) {
    require_finite(X, "dft_multiply");
    const Index n = X.rows(), m = X.cols();
    auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<size_t>(m)));
    auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<size_t>(m)));
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(m), in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    // One plan, one row at a time: every row goes through identical arithmetic.
    CMatrix Y(n, m);
    const double s = 1.0 / std::sqrt(static_cast<double>(m));
    for (Index i = 0; i < n; ++i) {
        for (Index k = 0; k < m; ++k) {
            in[k][0] = X(i, k).real();
            in[k][1] = X(i, k).imag();
        }
        fftw_execute_dft(plan, in, out);
        for (Index k = 0; k < m; ++k) Y(i, k) = cplx(out[k][0] * s, out[k][1] * s);
    }
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return Y;
}

double root_of_unity_tol(Index m) {
    return std::sqrt(static_cast<double>(m)) * std::numeric_limits<double>::epsilon();
}

GeneralizedCauchy dft_transform(const CVector& lambda, Index m) {
    if (lambda.size() < 1 || m < 1) throw std::invalid_argument("dft_transform: empty input");
    require_finite(lambda, "dft_transform");
    GeneralizedCauchy G;
    G.x = lambda;
    G.y = dft_nodes(m);
    G.d2 = G.y;
    G.d1.resize(lambda.size());
    G.coincidence.assign(static_cast<size_t>(lambda.size()), std::nullopt);
    const double s = 1.0 / std::sqrt(static_cast<double>(m));
    const double tol = root_of_unity_tol(m);
    for (Index i = 0; i < lambda.size(); ++i) {
        for (Index j = 0; j < m; ++j)
            if (!(std::abs(lambda(i) - G.y(j)) > tol)) {
                G.coincidence[static_cast<size_t>(i)] = j;
                break;
            }
        if (G.coincidence[static_cast<size_t>(i)]) {
            G.d1(i) = s;
            continue;
        }
        // l^m - 1 = prod_k (l - y_k). Near a root of unity the power cancels
        // catastrophically while the product keeps the small factor exact.
        const cplx p = int_pow(lambda(i), m) - 1.0;
        if (std::abs(p) >= 0.5) {
            G.d1(i) = s * p;
        } else {
            cplx q = 1.0;
            for (Index k = 0; k < m; ++k) q *= lambda(i) - G.y(k);
            G.d1(i) = s * q;
        }
    }
    return G;
}

namespace {

// prod_{k != j} (x - y_k), accumulated left to right as in the reference code.
cplx coincident_product(cplx x, const CVector& y, Index j) {
    cplx a = 1.0, b = 1.0;
    for (Index k = 0; k < j; ++k) a *= x - y(k);
    for (Index k = j + 1; k < y.size(); ++k) b *= x - y(k);
    return a * b;
}

}  // namespace

CMatrix GeneralizedCauchy::core() const {
    CMatrix C(rows(), cols());
    for (Index i = 0; i < rows(); ++i) {
        const auto& hit = coincidence[static_cast<size_t>(i)];
        for (Index j = 0; j < cols(); ++j) {
            if (hit)
                C(i, j) = (j == *hit) ? coincident_product(x(i), y, j) : cplx(0.0);
            else
                C(i, j) = 1.0 / (x(i) - y(j));
        }
    }
    return C;
}

CMatrix GeneralizedCauchy::assemble() const {
    CMatrix G(rows(), cols());
    for (Index j = 0; j < cols(); ++j)
        for (Index i = 0; i < rows(); ++i) {
            const auto& hit = coincidence[static_cast<size_t>(i)];
            if (hit)
                G(i, j) = (j == *hit) ? coincident_product(x(i), y, j) * y(j) * d1(i) : cplx(0.0);
            else
                G(i, j) = (d1(i) * y(j)) / (x(i) - y(j));
        }
    return G;
}

CMatrix DftSolve::modes() const {
    if (!deferred) return W;
    CMatrix out = W;
    for (Index j = 0; j < out.cols(); ++j) out.col(j) /= d1(j);
    return out;
}

RVector DftSolve::amplitudes() const {
    RVector a(W.cols());
    for (Index j = 0; j < W.cols(); ++j) {
        a(j) = W.col(j).stableNorm();
        if (deferred) a(j) /= std::abs(d1(j));
    }
    return a;
}

DftSolve solve_modes_dft(const CMatrix& X, const CVector& lambda, bool defer_d1) {
    require_finite(X, "solve_modes_dft");
    const Index m = X.cols();
    if (lambda.size() != m)
        throw std::invalid_argument("solve_modes_dft: need one node per column of X");
    require_distinct(lambda, "solve_modes_dft");

    const GeneralizedCauchy G = dft_transform(lambda, m);
    PivotedLDU f;
    if (defer_d1) {
        CMatrix E = G.core();
        for (Index j = 0; j < m; ++j) E.col(j) *= G.d2(j);
        f = cauchy_ldu_from_entries(std::move(E), G.x, G.y);
    } else {
        f = cauchy_ldu(G);
    }
    for (Index k = 0; k < m; ++k)
        if (f.delta(k) == cplx(0.0)) throw Error("solve_modes_dft: zero pivot");

    CMatrix Y = f.p2.permute_cols(dft_multiply(X));
    const Index n = Y.rows();
    // Y <- Y U^{-1}
    for (Index k = 1; k < m; ++k)
        for (Index j = 0; j < k; ++j) {
            const cplx u = f.U(j, k);
            if (u != cplx(0.0)) Y.col(k) -= Y.col(j) * u;
        }
    // Y <- Y Delta^{-1}
    for (Index k = 0; k < m; ++k) Y.col(k) /= f.delta(k);
    // Y <- Y L^{-1}
    for (Index k = m - 2; k >= 0; --k)
        for (Index j = k + 1; j < m; ++j) {
            const cplx l = f.L(j, k);
            if (l != cplx(0.0)) Y.col(k) -= Y.col(j) * l;
        }
    // Y <- Y P1: column k of Y lands in column p1[k].
    DftSolve out;
    out.W.resize(n, m);
    for (Index k = 0; k < m; ++k) out.W.col(f.p1[k]) = Y.col(k);
    out.d1 = G.d1;
    out.deferred = defer_d1;
    return out;
}

AccurateSVD accurate_svd_vandermonde(const CVector& lambda) {
    const Index m = lambda.size();
    require_distinct(lambda, "accurate_svd_vandermonde");
    AccurateSVD s = accurate_svd(cauchy_ldu(dft_transform(lambda, m)));
    // V = (D1 C D2) F^*, so the right factor picks up F.
    s.V = dft_matrix(m) * s.V;
    return s;
}

double vandermonde_condition(const CVector& lambda) {
    const RVector s = accurate_svd_vandermonde(lambda).sigma;
    const double smin = s(s.size() - 1);
    return smin == 0.0 ? std::numeric_limits<double>::infinity() : s(0) / smin;
}

CMatrix regularized_apply(const CMatrix& X, const AccurateSVD& s, double eta) {
    if (!(eta >= 0.0)) throw std::invalid_argument("regularized_apply: eta must be nonnegative");
    if (X.cols() != s.V.rows()) throw std::invalid_argument("regularized_apply: shape mismatch");
    RVector phi(s.sigma.size());
    for (Index i = 0; i < phi.size(); ++i) {
        const double sg = s.sigma(i);
        // sigma/(sigma^2 + eta^2) written to avoid squaring tiny sigmas
        phi(i) = sg == 0.0 ? 0.0 : 1.0 / (sg + (eta / sg) * eta);
    }
    return ((X * s.V) * phi.asDiagonal()) * s.U.adjoint();
}

CMatrix bjorck_pereyra(const CVector& lambda, const CMatrix& B) {
    const Index m = lambda.size();
    if (B.cols() != m) throw std::invalid_argument("bjorck_pereyra: right-hand side length mismatch");
    require_distinct(lambda, "bjorck_pereyra");
    // Each row b^T of B: solve V^T w = b, i.e. the "primal" Bjorck-Pereyra system
    // in the convention where the nodes index the columns.
    CMatrix W = B.transpose();
    for (Index k = 0; k + 1 < m; ++k)
        for (Index i = m - 1; i > k; --i) W.row(i) -= lambda(k) * W.row(i - 1);
    for (Index k = m - 2; k >= 0; --k) {
        for (Index i = k + 1; i < m; ++i) W.row(i) /= (lambda(i) - lambda(i - k - 1));
        for (Index i = k; i + 1 < m; ++i) W.row(i) -= W.row(i + 1);
    }
    return W.transpose();
}

CVector bjorck_pereyra_interpolate(const CVector& lambda, const CVector& b) {
    const Index m = lambda.size();
    if (b.size() != m) throw std::invalid_argument("bjorck_pereyra_interpolate: length mismatch");
    require_distinct(lambda, "bjorck_pereyra_interpolate");
    CVector a = b;
    for (Index k = 0; k + 1 < m; ++k)
        for (Index i = m - 1; i > k; --i) a(i) = (a(i) - a(i - 1)) / (lambda(i) - lambda(i - k - 1));
    for (Index k = m - 2; k >= 0; --k)
        for (Index i = k; i + 1 < m; ++i) a(i) -= a(i + 1) * lambda(k);
    return a;
}

CMatrix scaled_vandermonde(const CVector& lambda, Scaling scaling, RVector& d) {
    const Index m = lambda.size();
    CMatrix V = vandermonde(lambda, m);
    d = RVector::Ones(m);
    if (scaling == Scaling::row) {
        for (Index i = 0; i < m; ++i) {
            d(i) = V.row(i).stableNorm();
            V.row(i) /= d(i);
        }
    } else if (scaling == Scaling::column) {
        for (Index j = 0; j < m; ++j) {
            d(j) = V.col(j).stableNorm();
            if (d(j) == 0.0) throw Error("scaled_vandermonde: zero column in Vandermonde matrix");
            V.col(j) /= d(j);
        }
    }
    return V;
}

CMatrix scaled_solve(const CMatrix& X, const CVector& lambda, Scaling scaling) {
    const Index m = lambda.size();
    if (X.cols() != m) throw std::invalid_argument("scaled_solve: need one node per column of X");
    require_distinct(lambda, "scaled_solve");
    RVector d;
    const CMatrix V = scaled_vandermonde(lambda, scaling, d);
    switch (scaling) {
        case Scaling::none:
            return right_solve(X, V);
        case Scaling::row:
            // X (D_r V_r)^{-1} = (X V_r^{-1}) D_r^{-1}
            return right_solve(X, V) * d.cwiseInverse().cast<cplx>().asDiagonal();
        case Scaling::column:
            // X (V_c D_c)^{-1} = (X D_c^{-1}) V_c^{-1}
            return right_solve(X * d.cwiseInverse().cast<cplx>().asDiagonal(), V);
    }
    throw std::invalid_argument("scaled_solve: unknown scaling");
}

}  // namespace kvdmd
