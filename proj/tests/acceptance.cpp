// Acceptance checks. One PASS/FAIL line per criterion; the exit status is
// nonzero if any criterion fails, except those named with --expect-red.

#include "helpers.hpp"
#include "oracle/mp.hpp"
#include "oracle/rational.hpp"

#include "kvdmd/dmd.hpp"
#include "kvdmd/generators.hpp"
#include "kvdmd/gla.hpp"
#include "kvdmd/krylov.hpp"
#include "kvdmd/reconstruction.hpp"
#include "kvdmd/vandermonde.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <set>
#include <string>

using namespace kvdmd;
using namespace testing_util;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CMatrix skewed(Index n, Index l, std::mt19937_64& rng) {
    CMatrix Z = randc(n, l, rng);
    for (Index j = 1; j < l; ++j) Z.col(j) += 0.8 * Z.col(j - 1);
    for (Index j = 0; j < l; ++j) Z.col(j).normalize();
    return Z;
}

CVector disc(Index m, double center, double radius, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    CVector v(m);
    for (Index i = 0; i < m; ++i) v(i) = center + std::polar(radius * std::sqrt(U(rng)), 2.0 * std::numbers::pi * U(rng));
    return v;
}

double max_rel(const CVector& a, const CVector& b) {
    return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

Outcome hilbert_ldu() {
    const auto t0 = std::chrono::steady_clock::now();
    CVector x(100), y(100);
    for (Index i = 0; i < 100; ++i) {
        x(i) = static_cast<double>(i + 1);
        y(i) = static_cast<double>(-i);
    }
    const PivotedLDU f = cauchy_ldu(x, y, CVector::Ones(100), CVector::Ones(100));
    const double kl = condition_2(f.L), ku = condition_2(f.U);
    const double range = f.delta.cwiseAbs().maxCoeff() / f.delta.cwiseAbs().minCoeff();
    const double t = seconds_since(t0);
    return {kl >= 65 && kl <= 80 && ku >= 65 && ku <= 80 && range >= 1e140 && t <= 2.0,
            "kappa(L) = " + num(kl) + ", kappa(U) = " + num(ku) + ", |Delta| range = " + num(range) + ", " +
                num(t) + " s"};
}

Outcome rational_factors() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2002);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Index m = 2 + trial % 9;
        const CVector x = randv(m, rng), y = randv(m, rng), d1 = randv(m, rng), d2 = randv(m, rng);
        const PivotedLDU f = cauchy_ldu(x, y, d1, d2);
        const oracle::ExactLDU e = oracle::exact_cauchy_ldu(x, y, d1, d2, f.p1.map(), f.p2.map());
        auto upd = [&](cplx got, const oracle::qc& want) {
            const cplx w = want.to_double();
            worst = std::max(worst, w == cplx(0.0) ? std::abs(got) : std::abs(got - w) / std::abs(w));
        };
        for (Index i = 0; i < m; ++i) {
            upd(f.delta(i), e.delta[static_cast<size_t>(i)]);
            for (Index j = 0; j < m; ++j) {
                upd(f.L(i, j), e.L[static_cast<size_t>(i)][static_cast<size_t>(j)]);
                upd(f.U(i, j), e.U[static_cast<size_t>(i)][static_cast<size_t>(j)]);
            }
        }
    }
    const double t = seconds_since(t0);
    return {worst <= 1e-12 && t <= 30.0, "max relative entry error " + num(worst) + " over 50 matrices, " + num(t) + " s"};
}

Outcome dft_identity() {
    std::mt19937_64 rng(3003);
    double worst = 0.0, worst_zero = 0.0;
    int sets = 0, with_roots = 0;
    for (Index m : {2, 8, 16, 64}) {
        const oracle::MpMatrix F = oracle::dft(m);
        const CVector y = dft_nodes(m);
        for (int s = 0; s < 20; ++s) {
            const Index rows = 1 + s % std::min<Index>(m, 6);
            CVector lam = rand_annulus(rows, 0.2, 1.5, rng);
            if (s % 2 == 0) {
                lam(0) = y(s % m);
                ++with_roots;
            }
            const GeneralizedCauchy G = dft_transform(lam, m);
            const CMatrix A = G.assemble();
            const CMatrix O = (oracle::vandermonde(lam, m) * F).to_double();
            for (Index i = 0; i < rows; ++i) {
                const double rowmax = O.row(i).cwiseAbs().maxCoeff();
                for (Index j = 0; j < m; ++j) {
                    if (A(i, j) == cplx(0.0)) {
                        worst_zero = std::max(worst_zero, std::abs(O(i, j)) / rowmax);
                    } else {
                        worst = std::max(worst, std::abs(A(i, j) - O(i, j)) / std::abs(O(i, j)));
                    }
                }
            }
            ++sets;
        }
    }
    return {worst <= 1e-13 && worst_zero <= 1e-13,
            std::to_string(sets) + " sets (" + std::to_string(with_roots) + " with a root of unity): max relative error " +
                num(worst) + ", oracle at structural zeros " + num(worst_zero) + " x row max"};
}

Outcome ill_conditioned() {
    std::mt19937_64 rng(4004);
    const Index m = 20;
    const CVector lam = disc(m, 0.5, 1e-2, rng);
    const double kappa = vandermonde_condition(lam);
    const oracle::MpMatrix V = oracle::vandermonde(lam, m);
    // Snapshots generated by the model, X = Z V, with the product in extended precision.
    const oracle::MpMatrix Zmp(randc(8, m, rng));
    const CMatrix X = (Zmp * V).to_double();
    const oracle::MpMatrix Xmp(X);
    const CMatrix Wd = solve_modes_dft(X, lam).modes();
    const CMatrix Wn = scaled_solve(X, lam, Scaling::none);
    auto resid = [&](const CMatrix& W) {
        return static_cast<double>(oracle::frob(oracle::MpMatrix(W) * V - Xmp) / oracle::frob(Xmp));
    };
    const double ed = resid(Wd), en = resid(Wn);
    const oracle::MpMatrix Wx = oracle::solve_right(Xmp, V);
    auto fwd = [&](const CMatrix& W) {
        return static_cast<double>(oracle::frob(oracle::MpMatrix(W) - Wx) / oracle::frob(Wx));
    };
    std::printf("  info 4: forward error against the extended precision solve: dft-cauchy %s, naive %s\n",
                num(fwd(Wd)).c_str(), num(fwd(Wn)).c_str());

    // A generic right-hand side, where the modes are large and cancel.
    const CMatrix Xr = randc(8, m, rng);
    const oracle::MpMatrix Wr = oracle::solve_right(oracle::MpMatrix(Xr), V);
    const auto fr = [&](const CMatrix& W) {
        return static_cast<double>(oracle::frob(oracle::MpMatrix(W) - Wr) / oracle::frob(Wr));
    };
    std::printf("  info 4: generic snapshots, forward error: dft-cauchy %s, naive %s\n",
                num(fr(solve_modes_dft(Xr, lam).modes())).c_str(), num(fr(scaled_solve(Xr, lam, Scaling::none))).c_str());

    return {kappa >= 1e30 && ed <= 1e-6 && en >= 1e-1,
            "kappa(V) = " + num(kappa) + ": reconstruction error dft-cauchy " + num(ed) + " (need <= 1e-6), naive " +
                num(en) + " (need >= 1e-1)"};
}

Outcome amplitude_equivalence() {
    double worst = 0.0;
    int n = 0;
    for (std::uint64_t seed = 5000; n < 20; ++seed) {
        const Index m = 3 + static_cast<Index>(seed % 6);
        const SyntheticData d = generate_snapshots("trajectory:n=" + std::to_string(m + 4) + ",m=" + std::to_string(m), seed);
        const ModalDecomposition md = modal_decomposition(d.X, Solver::dft_cauchy);
        if (vandermonde_condition(md.ritz) > 1e8) continue;  // well conditioned instances only
        const DmdResult r = schmid_dmd(d.X.leftCols(m), d.X.rightCols(m));
        const DmdAmplitudes a = dmd_amplitudes(r);
        const Matching mt = match_eigenvalues(md.ritz, r.lambda);
        // |Z^+ f_1| through the definition
        const CVector zf = lstsq(r.Z, d.X.col(0)).x.col(0);
        for (Index j = 0; j < m; ++j) {
            const Index k = mt.map[static_cast<size_t>(j)];
            worst = std::max(worst, std::abs(std::abs(zf(k)) - md.amplitudes(j)) / md.amplitudes(j));
            worst = std::max(worst, std::abs(std::abs(a.a(k)) - md.amplitudes(j)) / md.amplitudes(j));
        }
        ++n;
    }
    return {worst <= 1e-9, "max relative amplitude gap " + num(worst) + " over 20 instances"};
}

Outcome residual_formula() {
    double worst = 0.0;
    for (std::uint64_t seed = 6000; seed < 6020; ++seed) {
        const Index m = 3 + static_cast<Index>(seed % 5);
        const SyntheticData d = generate_snapshots("trajectory:n=" + std::to_string(m + 5) + ",m=" + std::to_string(m), seed);
        const ModalDecomposition md = modal_decomposition(d.X, Solver::naive, false);
        const double rn = md.model.r.norm();
        for (Index j = 0; j < m; ++j) {
            const CVector w = md.raw.col(j);
            const double direct = (d.A * w - md.ritz(j) * w).norm() / w.norm();
            worst = std::max(worst, std::abs(ritz_residual(j, md.ritz, rn, w.norm()) - direct) / direct);
        }
    }
    return {worst <= 1e-9, "max relative deviation " + num(worst) + " over 20 instances"};
}

Outcome central_identity() {
    std::mt19937_64 rng(7007);
    std::uniform_int_distribution<Index> L(1, 4), M(4, 12);
    std::uniform_real_distribution<double> U(0.0, 2.0 * std::numbers::pi);
    double worst = 0.0, worst_uni = 0.0;
    for (int t = 0; t < 100; ++t) {
        const Index l = L(rng), m = std::max(M(rng), l), n = l + 1 + t % 4;
        const CMatrix Z = skewed(n, l, rng);
        const CVector lam = rand_annulus(l, 0.4, 1.6, rng);
        const CMatrix X = randc(n, m, rng);
        const ReconstructionProblem p = make_problem(Z, lam, X);
        const CVector ref = reflexive_weights(p).alpha;
        worst = std::max({worst, max_rel(weighted_gla_weights(p).alpha, ref), max_rel(p_norm_weights(Z, lam, X).alpha, ref)});

        CVector uni(l);
        for (Index j = 0; j < l; ++j) uni(j) = std::polar(1.0, U(rng));
        const ReconstructionProblem q = make_problem(Z, uni, X);
        const CVector r2 = reflexive_weights(q).alpha;
        worst = std::max({worst, max_rel(weighted_gla_weights(q).alpha, r2), max_rel(p_norm_weights(Z, uni, X).alpha, r2)});
        worst_uni = std::max(worst_uni, max_rel(gla_weights(q).alpha, r2));
    }
    return {worst <= 1e-11 && worst_uni <= 1e-12,
            "reflexive / weighted GLA / P-norm max gap " + num(worst) + ", unimodular reflexive / GLA gap " + num(worst_uni)};
}

Outcome weighted_ls_oracle() {
    std::mt19937_64 rng(8008);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Index l = 1 + t % 3, m = l + static_cast<Index>(rng() % static_cast<std::uint64_t>(9 - l));
        const Index n = l + 2;
        const CMatrix Z = skewed(n, l, rng);
        const CVector lam = rand_annulus(l, 0.3, 1.6, rng);
        const ReconstructionProblem p = make_problem(Z, lam, randc(n, m, rng));
        // (I (x) R^{-1}) S = stacked diag(lambda^(i-1)), right-hand sides R^{-1} g_i
        const CMatrix P = power_table(lam, m);
        CMatrix A = CMatrix::Zero(l * m, l);
        CVector b(l * m);
        for (Index i = 0; i < m; ++i) {
            A.block(i * l, 0, l, l) = P.col(i).asDiagonal();
            b.segment(i * l, l) = p.R.triangularView<Eigen::Upper>().solve(p.G.col(i));
        }
        const CVector oracle = lstsq(A, b).x.col(0);
        worst = std::max(worst, max_rel(reflexive_weights(p).alpha, oracle));
    }
    return {worst <= 1e-10, "max gap to the dense transformed least squares solution " + num(worst) + " over 50 instances"};
}

Outcome consistency_thresholds() {
    const auto t0 = std::chrono::steady_clock::now();
    const ConsistencyReport r = consistency_experiment(ConsistencyConfig{});
    const double t = seconds_since(t0);
    const ConsistencyRow& last = r.rows.back();
    // Frozen from the closed-form signal at m = 2000: GLA 6.73e-4, alpha_star 0.3035.
    const bool ok = last.err_gla < 1e-3 && last.err_star > 0.3 && last.err_star > 10.0 * last.err_gla && t <= 10.0;
    return {ok, "m = " + std::to_string(last.m) + ": GLA error " + num(last.err_gla) + " (need < 1e-3), alpha_star error " +
                    num(last.err_star) + " (need > 0.3 and > 10x GLA), " + num(t) + " s"};
}

Outcome ensembles() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> kr, kn;
    for (const EnsembleSample& s : generate_ensemble(EnsembleKind::rand, 20, 100, 10)) kr.push_back(s.kappa);
    for (const EnsembleSample& s : generate_ensemble(EnsembleKind::randn, 20, 100, 10)) kn.push_back(s.kappa);
    std::sort(kr.begin(), kr.end());
    std::sort(kn.begin(), kn.end());
    const double median = 0.5 * (kr[49] + kr[50]);
    const double t = seconds_since(t0);
    return {median > 1e15 && kn.back() < 1e10 && t <= 60.0,
            "rand median kappa " + num(median) + ", randn max kappa " + num(kn.back()) + ", " + num(t) + " s"};
}

Outcome optimality_ordering() {
    std::mt19937_64 rng(11011);
    bool ordered = true;
    double worst_consistent = 0.0;
    for (int t = 0; t < 60; ++t) {
        const Index l = 1 + t % 4, m = l + 2 + t % 5, n = l + 3;
        const CMatrix Z = skewed(n, l, rng);
        const CVector lam = rand_annulus(l, 0.3, 1.5, rng);
        const bool consistent = t % 3 == 0;
        const CMatrix X = consistent ? CMatrix(Z * randv(l, rng).asDiagonal() * power_table(lam, m)) : randc(n, m, rng);
        const ReconstructionProblem p = make_problem(Z, lam, X);
        const double mp = optimal_weights(p).objective, st = reflexive_weights(p).objective, gl = gla_weights(p).objective;
        const double slack = 1e-12 * mp + 1e-28 * X.squaredNorm();
        ordered = ordered && mp <= st + slack && mp <= gl + slack;
        if (consistent)
            worst_consistent = std::max({worst_consistent, std::abs(st - mp) / X.squaredNorm(), std::abs(gl - mp) / X.squaredNorm()});
    }
    return {ordered && worst_consistent <= 1e-10,
            std::string("ordering ") + (ordered ? "held" : "violated") + " on 60 instances, consistent-instance gap " +
                num(worst_consistent) + " x ||X||^2"};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> expect_red;
    for (int a = 1; a < argc; ++a) {
        if (std::strcmp(argv[a], "--expect-red") == 0 && a + 1 < argc) {
            expect_red.insert(std::atoi(argv[++a]));
        } else {
            std::fprintf(stderr, "usage: %s [--expect-red N]...\n", argv[0]);
            return 2;
        }
    }
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"Hilbert-100 LDU", hilbert_ldu},
        {"entrywise LDU accuracy", rational_factors},
        {"DFT identity", dft_identity},
        {"ill-conditioned reconstruction", ill_conditioned},
        {"amplitude equivalence", amplitude_equivalence},
        {"Ritz residual formula", residual_formula},
        {"weighted GLA identities", central_identity},
        {"weighted least squares oracle", weighted_ls_oracle},
        {"consistency experiment", consistency_thresholds},
        {"ensemble conditions", ensembles},
        {"optimality ordering", optimality_ordering},
    };
    int failed = 0;
    for (size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k + 1);
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const bool red_ok = !o.pass && expect_red.count(id);
        std::printf("criterion %2d: %s  %s: %s%s\n", id, o.pass ? "PASS" : "FAIL", criteria[k].first, o.detail.c_str(),
                    red_ok ? " [expected]" : "");
        std::fflush(stdout);
        if (!o.pass && !red_ok) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
