#include "kvdmd/reconstruction.hpp"

#include "kvdmd/vandermonde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace kvdmd {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// conj(lambda)^(i-1) / sum_k |lambda|^(2(k-1)), rows j, columns i. For |lambda| > 1
// the same ratio is evaluated with mu = 1/lambda as mu^(i-1) |mu|^(2(m-i)) / sum_k |mu|^(2(k-1))
// so that nothing overflows.
CMatrix reflexive_coefficients(const CVector& lambda, Index m) {
    const Index l = lambda.size();
    CMatrix K(l, m);
    for (Index j = 0; j < l; ++j) {
        const cplx z = lambda(j);
        if (std::abs(z) <= 1.0) {
            const double a2 = std::norm(z);
            double den = 0.0, t = 1.0;
            for (Index k = 0; k < m; ++k, t *= a2) den += t;
            cplx p = 1.0;
            for (Index i = 0; i < m; ++i, p *= std::conj(z)) K(j, i) = p / den;
        } else {
            const cplx mu = 1.0 / z;
            const double a2 = std::norm(mu);
            double den = 0.0, t = 1.0;
            for (Index k = 0; k < m; ++k, t *= a2) den += t;
            // |mu|^(2(m-i)) for i = m..1, built from the top
            std::vector<double> tail(static_cast<size_t>(m));
            t = 1.0;
            for (Index i = m - 1; i >= 0; --i, t *= a2) tail[static_cast<size_t>(i)] = t;
            cplx p = 1.0;
            for (Index i = 0; i < m; ++i, p *= mu) K(j, i) = p * tail[static_cast<size_t>(i)] / den;
        }
    }
    return K;
}

ReconstructionWeights finish(const ReconstructionProblem& p, WeightMethod m, CVector alpha, bool flagged = false) {
    ReconstructionWeights w;
    w.method = m;
    w.alpha = std::move(alpha);
    w.objective = objective(p, w.alpha);
    w.flagged = flagged;
    return w;
}

CMatrix r_inverse(const CMatrix& R) {
    return R.triangularView<Eigen::Upper>().solve(CMatrix::Identity(R.rows(), R.cols()));
}

}  // namespace

ReconstructionProblem make_problem(const CMatrix& Z, const CVector& lambda, const CMatrix& X) {
    require_finite(Z, "reconstruction modes");
    require_finite(X, "reconstruction snapshots");
    if (Z.cols() != lambda.size()) throw std::invalid_argument("make_problem: one Ritz value per mode required");
    if (Z.rows() != X.rows()) throw std::invalid_argument("make_problem: modes and snapshots differ in length");
    if (Z.cols() > X.cols()) throw std::invalid_argument("make_problem: more modes than snapshots");
    if (Z.cols() > Z.rows()) throw RankDeficientError("make_problem: more modes than rows", 0.0, 0.0);
    ReconstructionProblem p;
    p.Z = Z;
    p.lambda = lambda;
    p.X = X;
    QR qr = thin_qr(Z);
    const RVector s = singular_values(qr.R);
    if (!(s(s.size() - 1) > static_cast<double>(Z.rows()) * eps * s(0)))
        throw RankDeficientError("make_problem: modes are linearly dependent", s(s.size() - 1), s(0));
    p.Q = std::move(qr.Q);
    p.R = std::move(qr.R);
    p.G = p.Q.adjoint() * X;
    p.H = p.R.triangularView<Eigen::Upper>().solve(p.G);
    return p;
}

const char* method_name(WeightMethod m) {
    switch (m) {
        case WeightMethod::moore_penrose: return "mp";
        case WeightMethod::reflexive: return "reflexive";
        case WeightMethod::reflexive_frequency: return "reflexive-freq";
        case WeightMethod::gla: return "gla";
        case WeightMethod::weighted_gla: return "weighted-gla";
        case WeightMethod::p_norm: return "p-norm";
    }
    return "?";
}

WeightMethod parse_method(const std::string& name) {
    for (WeightMethod m : {WeightMethod::moore_penrose, WeightMethod::reflexive, WeightMethod::reflexive_frequency,
                           WeightMethod::gla, WeightMethod::weighted_gla, WeightMethod::p_norm})
        if (name == method_name(m)) return m;
    throw std::invalid_argument("unknown weight method '" + name + "'");
}

std::vector<Index> select_dominant(const RVector& amplitudes, Index l) {
    const Index m = amplitudes.size();
    if (l < 0 || l > m) throw std::invalid_argument("select_dominant: l out of range");
    std::vector<Index> idx(static_cast<size_t>(m));
    std::iota(idx.begin(), idx.end(), Index{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](Index a, Index b) { return std::abs(amplitudes(a)) > std::abs(amplitudes(b)); });
    idx.resize(static_cast<size_t>(l));
    return idx;
}

CMatrix power_table(const CVector& lambda, Index m) {
    CMatrix P(lambda.size(), m);
    for (Index j = 0; j < lambda.size(); ++j) {
        cplx p = 1.0;
        for (Index i = 0; i < m; ++i, p *= lambda(j)) P(j, i) = p;
    }
    return P;
}

double objective(const CMatrix& Z, const CVector& lambda, const CVector& alpha, const CMatrix& X) {
    const CMatrix coef = alpha.asDiagonal() * power_table(lambda, X.cols());
    return (X - Z * coef).squaredNorm();
}

double objective(const ReconstructionProblem& p, const CVector& alpha) { return objective(p.Z, p.lambda, alpha, p.X); }

ReconstructionWeights optimal_weights(const ReconstructionProblem& p) {
    const Index m = p.snapshots();
    const CMatrix P = power_table(p.lambda, m);
    const CMatrix K = (p.R.adjoint() * p.R).cwiseProduct(P.conjugate() * P.transpose());
    const CMatrix RG = p.R.adjoint() * p.G;
    const CVector b = P.conjugate().cwiseProduct(RG).rowwise().sum();
    if (condition_2(K) < 1e12) {
        const Eigen::LLT<CMatrix> llt(K);
        if (llt.info() == Eigen::Success) return finish(p, WeightMethod::moore_penrose, llt.solve(b));
    }
    const Index l = p.modes();
    CVector g(l * m);
    for (Index i = 0; i < m; ++i) g.segment(i * l, l) = p.G.col(i);
    const Lstsq ls = lstsq(stacked_S(p), g);
    return finish(p, WeightMethod::moore_penrose, ls.x.col(0), true);
}

ReconstructionWeights reflexive_weights(const ReconstructionProblem& p) {
    const CMatrix K = reflexive_coefficients(p.lambda, p.snapshots());
    return finish(p, WeightMethod::reflexive, K.cwiseProduct(p.H).rowwise().sum());
}

CMatrix stacked_S(const ReconstructionProblem& p) {
    const Index l = p.modes(), m = p.snapshots();
    const CMatrix P = power_table(p.lambda, m);
    CMatrix S(l * m, l);
    for (Index i = 0; i < m; ++i) S.middleRows(i * l, l) = p.R * P.col(i).asDiagonal();
    return S;
}

CMatrix reflexive_g_inverse(const ReconstructionProblem& p) {
    const Index l = p.modes(), m = p.snapshots();
    const CMatrix K = reflexive_coefficients(p.lambda, m);
    const CMatrix Rinv = r_inverse(p.R);
    CMatrix Sm(l, l * m);
    for (Index i = 0; i < m; ++i) Sm.middleCols(i * l, l) = K.col(i).asDiagonal() * Rinv;
    return Sm;
}

GInverseReport g_inverse_axioms_check(const ReconstructionProblem& p) {
    if (p.modes() * p.snapshots() > 200) throw std::invalid_argument("g_inverse_axioms_check: instance too large");
    const CMatrix S = stacked_S(p);
    const CMatrix Sm = reflexive_g_inverse(p);
    const CMatrix Sp = lstsq(S, CMatrix::Identity(S.rows(), S.rows())).x;
    const CMatrix GS = Sm * S;
    const CMatrix SG = S * Sm;
    GInverseReport r;
    r.sgs = (S * GS - S).norm() / S.norm();
    r.gsg = (GS * Sm - Sm).norm() / Sm.norm();
    r.gs_herm = (GS - GS.adjoint()).norm();
    r.sg_herm = (SG - SG.adjoint()).cwiseAbs().maxCoeff();
    r.mp_distance = (Sm - Sp).norm() / Sp.norm();
    r.axioms_hold = r.sgs <= 1e-10 && r.gsg <= 1e-10 && r.gs_herm <= 1e-10;
    r.sg_hermitian = r.sg_herm <= 1e-10;
    return r;
}

ReconstructionWeights freq_weights_case1(const ReconstructionProblem& p) {
    const Index m = p.snapshots();
    const GeneralizedCauchy gc = dft_transform(p.lambda, m);
    for (Index i = 0; i < gc.rows(); ++i)
        if (gc.coincidence[static_cast<size_t>(i)])
            throw CoincidenceError("freq_weights_case1: Ritz value is an m-th root of unity, use the case 2 structure",
                                   i, *gc.coincidence[static_cast<size_t>(i)]);
    const CMatrix Xh = dft_multiply(p.X) * gc.d2.conjugate().asDiagonal();
    const CMatrix Hh = p.R.triangularView<Eigen::Upper>().solve(p.Q.adjoint() * Xh);
    const CMatrix C = gc.core();
    CVector alpha(p.modes());
    for (Index i = 0; i < p.modes(); ++i) {
        const double den = C.row(i).squaredNorm();
        alpha(i) = (C.row(i).conjugate().cwiseProduct(Hh.row(i))).sum() / (gc.d1(i) * den);
    }
    return finish(p, WeightMethod::reflexive_frequency, alpha);
}

Case2Structure freq_case2_structure(const CVector& lambda, Index m) {
    const GeneralizedCauchy gc = dft_transform(lambda, m);
    const CMatrix C = gc.core();
    Case2Structure s;
    s.C_hat = gc.d1.asDiagonal() * C;
    for (Index i = 0; i < gc.rows(); ++i)
        if (const auto& j = gc.coincidence[static_cast<size_t>(i)]) s.coincident.push_back({i, *j, C(i, *j)});
    return s;
}

Reconstruction reconstruct(const CMatrix& Z, const CVector& lambda, const CVector& alpha, const CMatrix& X,
                           Index first) {
    if (Z.cols() != lambda.size() || alpha.size() != lambda.size() || Z.rows() != X.rows() || first < 0)
        throw std::invalid_argument("reconstruct: inconsistent shapes");
    CVector c = alpha;
    for (Index j = 0; j < c.size(); ++j)
        for (Index k = 0; k < first; ++k) c(j) *= lambda(j);
    Reconstruction r;
    r.approx.resize(Z.rows(), X.cols());
    r.errors.resize(X.cols());
    for (Index i = 0; i < X.cols(); ++i) {
        r.approx.col(i) = Z * c;
        r.errors(i) = (X.col(i) - r.approx.col(i)).norm();
        c = c.cwiseProduct(lambda);
    }
    return r;
}

}  // namespace kvdmd
