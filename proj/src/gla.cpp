#include "kvdmd/gla.hpp"

#include <cmath>
#include <limits>

namespace kvdmd {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double overflow_guard = 1e300;

ReconstructionWeights make_weights(const ReconstructionProblem& p, WeightMethod m, CVector alpha) {
    ReconstructionWeights w;
    w.method = m;
    w.alpha = std::move(alpha);
    w.objective = objective(p, w.alpha);
    return w;
}

void require_full_rank(const CMatrix& R, Index n, const char* what) {
    const RVector s = singular_values(R);
    if (!(s(s.size() - 1) > static_cast<double>(n) * eps * s(0)))
        throw RankDeficientError(std::string(what) + ": matrix is numerically rank deficient", s(s.size() - 1), s(0));
}

}  // namespace

CVector inverse_powers(cplx lambda, Index m) {
    if (lambda == cplx(0.0)) throw Error("inverse_powers: zero eigenvalue");
    CVector v(m);
    cplx p = 1.0;
    for (Index i = 0; i < m; ++i) {
        v(i) = p;
        p /= lambda;
        if (i + 1 < m && !(std::abs(p) <= overflow_guard))
            throw Error("inverse_powers: |lambda|^(-i) exceeds 1e300 at i = " + std::to_string(i + 1));
    }
    return v;
}

DominantProjection gla_dominant_projection(const CMatrix& F, cplx lambda) {
    require_finite(F, "gla_dominant_projection");
    const Index m = F.cols();
    const CVector w = inverse_powers(lambda, m);
    const Index h = std::max<Index>(1, m / 2);
    DominantProjection d;
    d.half_average = F.leftCols(h) * w.head(h) / static_cast<double>(h);
    d.average = F * w / static_cast<double>(m);
    const double a = d.average.norm();
    d.cauchy_diff = a > 0.0 ? (d.average - d.half_average).norm() / a : (d.average - d.half_average).norm();
    return d;
}

CVector coordinate_gla(const CMatrix& Z, const CMatrix& F, const CVector& lambda) {
    require_finite(Z, "coordinate_gla");
    require_finite(F, "coordinate_gla");
    if (Z.rows() != Z.cols() || Z.cols() != lambda.size() || F.rows() != Z.rows())
        throw std::invalid_argument("coordinate_gla: inconsistent shapes");
    require_full_rank(Z, Z.rows(), "coordinate_gla");
    const CMatrix Y = Z.partialPivLu().solve(F);
    const Index m = F.cols();
    CVector alpha(lambda.size());
    for (Index j = 0; j < lambda.size(); ++j)
        alpha(j) = Y.row(j).transpose().cwiseProduct(inverse_powers(lambda(j), m)).sum() / static_cast<double>(m);
    return alpha;
}

CMatrix per_snapshot_weights(const ReconstructionProblem& p) {
    CMatrix A = p.H;
    for (Index j = 0; j < p.modes(); ++j)
        A.row(j) = A.row(j).cwiseProduct(inverse_powers(p.lambda(j), p.snapshots()).transpose());
    return A;
}

ReconstructionWeights gla_weights(const ReconstructionProblem& p) {
    const CVector alpha = per_snapshot_weights(p).rowwise().sum() / static_cast<double>(p.snapshots());
    return make_weights(p, WeightMethod::gla, alpha);
}

Eigen::MatrixXd gla_step_weights(const CVector& lambda, Index m) {
    Eigen::MatrixXd W(lambda.size(), m);
    for (Index j = 0; j < lambda.size(); ++j) {
        // |lambda|^(2(i-1)) / sum_k |lambda|^(2(k-1)); for |lambda| > 1 the same ratio
        // is |mu|^(2(m-i)) / sum_k |mu|^(2(k-1)) with mu = 1/lambda.
        const double a = std::abs(lambda(j));
        const bool flip = a > 1.0;
        const double q = flip ? 1.0 / (a * a) : a * a;
        double t = 1.0, den = 0.0;
        for (Index i = 0; i < m; ++i, t *= q) {
            W(j, flip ? m - 1 - i : i) = t;
            den += t;
        }
        W.row(j) /= den;
    }
    return W;
}

ReconstructionWeights weighted_gla_weights(const ReconstructionProblem& p) {
    const Eigen::MatrixXd W = gla_step_weights(p.lambda, p.snapshots());
    const CMatrix A = per_snapshot_weights(p);
    const CVector alpha = W.cast<cplx>().cwiseProduct(A).rowwise().sum();
    return make_weights(p, WeightMethod::weighted_gla, alpha);
}

ConsistencyReport consistency_experiment(const ConsistencyConfig& cfg, double consistent_tol) {
    if (cfg.lambda.size() != 3 || cfg.beta.size() != 3) throw std::invalid_argument("consistency_experiment: need three modes");
    const double a1 = std::abs(cfg.lambda(0)), a2 = std::abs(cfg.lambda(1)), a3 = std::abs(cfg.lambda(2));
    if (!(a1 <= 1.0 && a1 >= a2 && a2 > a3))
        throw std::invalid_argument("consistency_experiment: need |lambda1| <= 1 and |lambda1| >= |lambda2| > |lambda3|");
    const double rest = 1.0 - std::norm(cfg.c1) - std::norm(cfg.c2);
    if (rest < 0.0) throw std::invalid_argument("consistency_experiment: |c1|^2 + |c2|^2 exceeds one");
    if (cfg.grid.empty()) throw std::invalid_argument("consistency_experiment: empty grid");

    CMatrix Z3 = CMatrix::Zero(3, 3);
    Z3(0, 0) = 1.0;
    Z3(1, 1) = 1.0;
    Z3.col(2) << cfg.c1, cfg.c2, std::sqrt(rest);
    const CMatrix Z = Z3.leftCols(2);
    const CVector lam2 = cfg.lambda.head(2);

    ConsistencyReport rep;
    rep.gla_optimal = rep.star_optimal = true;
    for (Index m : cfg.grid) {
        const CMatrix X = Z3 * (cfg.beta.asDiagonal() * power_table(cfg.lambda, m));
        const ReconstructionProblem p = make_problem(Z, lam2, X);
        const ReconstructionWeights mp = optimal_weights(p);
        const ReconstructionWeights star = reflexive_weights(p);
        const ReconstructionWeights gla = gla_weights(p);
        ConsistencyRow row;
        row.m = m;
        row.err_star = (star.alpha - cfg.beta.head(2)).norm();
        row.err_gla = (gla.alpha - cfg.beta.head(2)).norm();
        row.obj_mp = mp.objective;
        row.obj_star = star.objective;
        row.obj_gla = gla.objective;
        const double tol = 1e-10 * mp.objective + 1e-24 * X.squaredNorm();
        rep.star_optimal = rep.star_optimal && std::abs(star.objective - mp.objective) <= tol;
        rep.gla_optimal = rep.gla_optimal && std::abs(gla.objective - mp.objective) <= tol;
        rep.rows.push_back(row);
    }

    auto converged = [&](double ConsistencyRow::*err) {
        const size_t n = rep.rows.size();
        for (size_t k = n / 2; k + 1 < n; ++k)
            if (rep.rows[k + 1].*err > rep.rows[k].*err * (1.0 + 1e-12) + 1e-14) return false;
        return rep.rows.back().*err < consistent_tol;
    };
    rep.gla_consistent = converged(&ConsistencyRow::err_gla);
    rep.star_consistent = converged(&ConsistencyRow::err_star);
    return rep;
}

PForm p_form(const CMatrix& Z, PFormMode mode) {
    require_finite(Z, "p_form");
    const Index n = Z.rows(), l = Z.cols();
    PForm f;
    f.source = mode;
    if (mode == PFormMode::full) {
        if (n != l) throw std::invalid_argument("p_form: full mode needs a square eigenvector matrix");
        require_full_rank(Z, n, "p_form");
        const CMatrix Zinv = Z.partialPivLu().inverse();
        f.P = Zinv.adjoint() * Zinv;
    } else {
        if (l > n) throw RankDeficientError("p_form: more modes than rows", 0.0, 0.0);
        const QR qr = thin_qr(Z);
        require_full_rank(qr.R, n, "p_form");
        const CMatrix Rinv = qr.R.triangularView<Eigen::Upper>().solve(CMatrix::Identity(l, l));
        const CMatrix T = qr.Q * Rinv.adjoint();
        Eigen::HouseholderQR<CMatrix> full(Z);
        const CMatrix Qfull = full.householderQ() * CMatrix::Identity(n, n);
        const CMatrix Qperp = Qfull.rightCols(n - l);
        f.P = T * T.adjoint() + Qperp * Qperp.adjoint();
    }
    f.P = (0.5 * (f.P + f.P.adjoint())).eval();
    return f;
}

ReconstructionWeights p_norm_weights(const CMatrix& Z, const CVector& lambda, const CMatrix& X) {
    if (Z.cols() != lambda.size() || Z.rows() != X.rows()) throw std::invalid_argument("p_norm_weights: inconsistent shapes");
    const PForm f = p_form(Z, PFormMode::adapted);
    const Eigen::LLT<CMatrix> llt(f.P);
    if (llt.info() != Eigen::Success) throw Error("p_norm_weights: P is not numerically positive definite");
    // P = L L^*, so ||x||_P = ||L^* x||.
    const CMatrix Lt = llt.matrixU();
    const CMatrix LZ = Lt * Z, LX = Lt * X;
    const Index n = Z.rows(), l = Z.cols(), m = X.cols();
    const CMatrix P = power_table(lambda, m);
    CMatrix A(n * m, l);
    CVector b(n * m);
    for (Index i = 0; i < m; ++i) {
        A.middleRows(i * n, n) = LZ * P.col(i).asDiagonal();
        b.segment(i * n, n) = LX.col(i);
    }
    const Lstsq ls = lstsq(A, b);
    ReconstructionWeights w;
    w.method = WeightMethod::p_norm;
    w.alpha = ls.x.col(0);
    w.objective = objective(Z, lambda, w.alpha, X);
    w.flagged = ls.rank_deficient;
    return w;
}

}  // namespace kvdmd
