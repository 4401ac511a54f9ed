#include "kvdmd/krylov.hpp"

#include "kvdmd/vandermonde.hpp"

#include <cmath>
#include <limits>

namespace kvdmd {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

bool has_close_pair(const CVector& v) {
    double scale = 0.0;
    for (Index i = 0; i < v.size(); ++i) scale = std::max(scale, std::abs(v(i)));
    for (Index i = 0; i < v.size(); ++i)
        for (Index j = i + 1; j < v.size(); ++j)
            if (std::abs(v(i) - v(j)) < 1e-10 * scale) return true;
    return false;
}

// c and sigma extremes from the upper triangular R of X_m and the projection q = Q^* f_{m+1}.
void fill_coefficients(CompanionModel& model, const CMatrix& R, const CVector& q, double rank_tol) {
    const Index m = R.cols();
    if (rank_tol <= 0.0) rank_tol = static_cast<double>(m) * eps;
    const RVector s = singular_values(R);
    model.sigma_max = s(0);
    model.sigma_min = s(m - 1);
    if (!(model.sigma_min > rank_tol * model.sigma_max))
        throw RankDeficientError("companion: snapshot matrix X_m is numerically rank deficient, sigma_min = " +
                                     std::to_string(model.sigma_min),
                                 model.sigma_min, model.sigma_max);
    model.c = R.triangularView<Eigen::Upper>().solve(q);
}

}  // namespace

CompressedSnapshots compress_qr(const CMatrix& X) {
    require_finite(X, "compress_qr");
    if (X.rows() < X.cols())
        throw std::invalid_argument("compress_qr: need n >= m+1 rows; use the uncompressed path");
    QR qr = thin_qr(X);
    return {std::move(qr.Q), std::move(qr.R)};
}

CompanionModel companion_from_snapshots(const CMatrix& X, double rank_tol) {
    require_finite(X, "companion_from_snapshots");
    const Index m = X.cols() - 1;
    if (m < 1) throw std::invalid_argument("companion_from_snapshots: need at least two snapshots");
    if (X.rows() < m)
        throw RankDeficientError("companion: fewer rows than snapshots, X_m cannot have full column rank", 0.0, 0.0);
    const CMatrix Xm = X.leftCols(m);
    const QR qr = thin_qr(Xm);
    CompanionModel model;
    fill_coefficients(model, qr.R, qr.Q.adjoint() * X.col(m), rank_tol);
    model.r = X.col(m) - Xm * model.c;
    const RitzValues rv = ritz_values(model.c);
    model.ritz = rv.values;
    model.near_coincident = rv.near_coincident;
    return model;
}

CompanionModel companion_from_compressed(const CompressedSnapshots& cs, double rank_tol) {
    const Index m = cs.Rf.cols() - 1;
    if (m < 1) throw std::invalid_argument("companion_from_compressed: need at least two snapshots");
    CompanionModel model;
    fill_coefficients(model, cs.Rf.topLeftCorner(m, m), cs.Rf.col(m).head(m), rank_tol);
    model.r = CVector::Zero(m + 1);
    model.r(m) = cs.Rf(m, m);
    const RitzValues rv = ritz_values(model.c);
    model.ritz = rv.values;
    model.near_coincident = rv.near_coincident;
    return model;
}

CMatrix companion_matrix(const CVector& c) {
    const Index m = c.size();
    if (m < 1) throw std::invalid_argument("companion_matrix: empty coefficient vector");
    CMatrix C = CMatrix::Zero(m, m);
    for (Index i = 1; i < m; ++i) C(i, i - 1) = 1.0;
    C.col(m - 1) = c;
    return C;
}

RitzValues ritz_values(const CVector& c) {
    RitzValues rv;
    rv.values = eig_dense(companion_matrix(c)).values;
    rv.near_coincident = has_close_pair(rv.values);
    return rv;
}

UnitaryPlusRankOne unitary_plus_rank_one(const CVector& c, cplx corner) {
    const Index m = c.size();
    if (m < 2) throw std::invalid_argument("unitary_plus_rank_one: need m >= 2");
    UnitaryPlusRankOne out;
    out.U = CMatrix::Zero(m, m);
    for (Index i = 1; i < m; ++i) out.U(i, i - 1) = 1.0;
    out.U(0, m - 1) = corner;
    out.chat = c;
    out.chat(0) -= corner;
    return out;
}

CVector last_row_inverse_vandermonde(const CVector& lambda) {
    require_distinct(lambda, "last_row_inverse_vandermonde");
    const Index m = lambda.size();
    CVector row(m);
    for (Index j = 0; j < m; ++j) {
        cplx p = 1.0;
        for (Index k = 0; k < m; ++k)
            if (k != j) p /= lambda(j) - lambda(k);
        row(j) = p;
    }
    return row;
}

double ritz_residual(Index j, const CVector& lambda, double r_norm, double w_norm) {
    require_distinct(lambda, "ritz_residual");
    if (j < 0 || j >= lambda.size()) throw std::out_of_range("ritz_residual: index out of range");
    if (r_norm == 0.0) return 0.0;
    double p = r_norm / w_norm;
    for (Index k = 0; k < lambda.size(); ++k)
        if (k != j) p /= std::abs(lambda(j) - lambda(k));
    return p;
}

const char* solver_name(Solver s) {
    switch (s) {
        case Solver::naive: return "naive";
        case Solver::row_scaled: return "row-scaled";
        case Solver::column_scaled: return "col-scaled";
        case Solver::bjorck_pereyra: return "bp";
        case Solver::dft_cauchy: return "dft-cauchy";
    }
    return "?";
}

Solver parse_solver(const std::string& name) {
    if (name == "naive") return Solver::naive;
    if (name == "row-scaled") return Solver::row_scaled;
    if (name == "col-scaled") return Solver::column_scaled;
    if (name == "bp") return Solver::bjorck_pereyra;
    if (name == "dft-cauchy") return Solver::dft_cauchy;
    throw std::invalid_argument("unknown solver '" + name + "'");
}

CMatrix solve_modes(const CMatrix& Xm, const CVector& lambda, Solver s) {
    if (Xm.cols() != lambda.size()) throw std::invalid_argument("solve_modes: X_m must have one column per Ritz value");
    switch (s) {
        case Solver::naive: return scaled_solve(Xm, lambda, Scaling::none);
        case Solver::row_scaled: return scaled_solve(Xm, lambda, Scaling::row);
        case Solver::column_scaled: return scaled_solve(Xm, lambda, Scaling::column);
        case Solver::bjorck_pereyra: return bjorck_pereyra(lambda, Xm);
        case Solver::dft_cauchy: return solve_modes_dft(Xm, lambda).modes();
    }
    throw std::invalid_argument("solve_modes: bad solver");
}

ModalDecomposition modal_decomposition(const CMatrix& X, Solver s, bool compress) {
    require_finite(X, "modal_decomposition");
    const Index m = X.cols() - 1;
    if (m < 1) throw std::invalid_argument("modal_decomposition: need at least two snapshots");
    ModalDecomposition md;
    if (compress && X.rows() > X.cols()) {
        const CompressedSnapshots cs = compress_qr(X);
        md.model = companion_from_compressed(cs);
        md.raw = cs.Qhat * solve_modes(cs.Rx(), md.model.ritz, s);
        md.compressed = true;
    } else {
        md.model = companion_from_snapshots(X);
        md.raw = solve_modes(X.leftCols(m), md.model.ritz, s);
    }
    md.ritz = md.model.ritz;
    md.amplitudes = md.raw.colwise().norm().transpose();
    md.W = md.raw;
    for (Index j = 0; j < m; ++j)
        if (md.amplitudes(j) > 0.0) md.W.col(j) /= md.amplitudes(j);
    return md;
}

double modal_reconstruction_error(const CMatrix& Xm, const CMatrix& raw, const CVector& lambda) {
    const CMatrix E = product_compensated(raw, vandermonde(lambda, Xm.cols())) - Xm;
    return E.norm() / Xm.norm();
}

}  // namespace kvdmd
