#include "commands.hpp"

#include "kvdmd/dmd.hpp"
#include "kvdmd/generators.hpp"
#include "kvdmd/gla.hpp"
#include "kvdmd/io.hpp"
#include "kvdmd/krylov.hpp"
#include "kvdmd/reconstruction.hpp"
#include "kvdmd/vandermonde.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <limits>
#include <sstream>

namespace kvdmd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::string fmt(double v) { return format_double(v); }

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json summary_base(const RunConfig& cfg, const char* command) {
    json j;
    j["schema"] = 1;
    j["command"] = command;
    j["config"] = {{"input", cfg.input},   {"generator", cfg.generator}, {"solver", cfg.solver},
                   {"modes", cfg.modes},   {"weights", cfg.weights},     {"eta", cfg.eta},
                   {"seed", cfg.seed},     {"out", cfg.out}};
    j["metadata"] = {{"generated_at", utc_now()}};
    return j;
}

fs::path out_dir(const RunConfig& cfg) {
    fs::path p(cfg.out);
    fs::create_directories(p);
    return p;
}

void write(const fs::path& dir, const char* name, const std::string& body) { atomic_write((dir / name).string(), body); }

CMatrix load(const RunConfig& cfg) {
    if (!cfg.input.empty() && !cfg.generator.empty()) throw std::invalid_argument("give either --input or --generator, not both");
    if (!cfg.input.empty()) return read_snapshots(cfg.input);
    if (!cfg.generator.empty()) return generate_snapshots(cfg.generator, cfg.seed).X;
    throw std::invalid_argument("no data: pass --input FILE or --generator SPEC");
}

double safe_condition(const CVector& lambda) {
    try {
        return vandermonde_condition(lambda);
    } catch (const Error&) {
        return inf;
    }
}

// Modes, amplitudes and Ritz values from either pipeline.
struct Decomposition {
    CMatrix W;
    RVector amplitudes;
    CVector lambda;
    CMatrix raw;  // W diag(amplitudes), possibly with complex phases for DMD
    double residual_norm = 0.0;
    bool near_coincident = false;
    bool flagged = false;  // DMD: defective or fallback amplitudes
    Index rank = 0;
};

Decomposition decompose(const CMatrix& X, const std::string& solver) {
    const Index m = X.cols() - 1;
    if (m < 1) throw std::invalid_argument("need at least two snapshots");
    Decomposition d;
    if (solver == "dmd") {
        const DmdResult r = schmid_dmd(X.leftCols(m), X.rightCols(m));
        const DmdAmplitudes a = dmd_amplitudes(r);
        d.W = r.Z;
        d.lambda = r.lambda;
        d.amplitudes = a.a.cwiseAbs();
        d.raw = r.Z * a.a.asDiagonal();
        d.flagged = r.defective || a.fallback;
        d.rank = r.k;
        return d;
    }
    const ModalDecomposition md = modal_decomposition(X, parse_solver(solver));
    d.W = md.W;
    d.amplitudes = md.amplitudes;
    d.lambda = md.ritz;
    d.raw = md.raw;
    d.residual_norm = md.model.r.norm();
    d.near_coincident = md.model.near_coincident;
    d.rank = m;
    return d;
}

double full_error(const CMatrix& Xm, const Decomposition& d) {
    const CMatrix E = product_compensated(d.raw, vandermonde(d.lambda, Xm.cols())) - Xm;
    return E.norm() / Xm.norm();
}

std::vector<double> split_numbers(const std::string& text) {
    std::vector<double> v;
    for (const cplx& z : parse_complex_list(text)) {
        if (z.imag() != 0.0) throw std::invalid_argument("expected real numbers in '" + text + "'");
        v.push_back(z.real());
    }
    return v;
}

}  // namespace

cplx parse_complex(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (ch != ' ') s += ch;
    if (s.empty()) throw std::invalid_argument("empty complex number");
    auto fail = [&]() -> cplx { throw std::invalid_argument("cannot parse complex number '" + text + "'"); };
    if (s == "i" || s == "+i") return {0.0, 1.0};
    if (s == "-i") return {0.0, -1.0};
    size_t used = 0;
    double a = 0.0;
    try {
        a = std::stod(s, &used);
    } catch (const std::exception&) {
        return fail();
    }
    const std::string rest = s.substr(used);
    if (rest.empty()) return {a, 0.0};
    if (rest == "i") return {0.0, a};
    if (rest.back() != 'i' || (rest[0] != '+' && rest[0] != '-')) return fail();
    const std::string im = rest.substr(0, rest.size() - 1);
    if (im == "+") return {a, 1.0};
    if (im == "-") return {a, -1.0};
    size_t used2 = 0;
    double b = 0.0;
    try {
        b = std::stod(im, &used2);
    } catch (const std::exception&) {
        return fail();
    }
    if (used2 != im.size()) return fail();
    return {a, b};
}

CVector parse_complex_list(const std::string& text) {
    std::vector<cplx> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';'))
        if (item.find_first_not_of(' ') != std::string::npos) v.push_back(parse_complex(item));
    CVector out(static_cast<Index>(v.size()));
    for (size_t k = 0; k < v.size(); ++k) out(static_cast<Index>(k)) = v[k];
    return out;
}

void cmd_decompose(const RunConfig& cfg) {
    const CMatrix X = load(cfg);
    const Index m = X.cols() - 1;
    const Decomposition d = decompose(X, cfg.solver);
    const CMatrix Xm = X.leftCols(m);
    const fs::path dir = out_dir(cfg);

    std::vector<std::vector<std::string>> ritz_rows, amp_rows;
    const Index k = d.lambda.size();
    for (Index j = 0; j < k; ++j) {
        double bound = std::numeric_limits<double>::quiet_NaN();
        if (cfg.solver != "dmd") {
            try {
                bound = ritz_residual(j, d.lambda, d.residual_norm, d.raw.col(j).norm());
            } catch (const Error&) {
            }
        }
        ritz_rows.push_back({std::to_string(j), fmt(d.lambda(j).real()), fmt(d.lambda(j).imag()), fmt(bound)});
        amp_rows.push_back({std::to_string(j), fmt(d.amplitudes(j))});
    }
    write(dir, "ritz.csv", csv_table({"index", "re", "im", "residual_bound"}, ritz_rows));
    write(dir, "amplitudes.csv", csv_table({"index", "amplitude"}, amp_rows));
    write(dir, "modes.kvc1", kvc1_bytes(d.W));

    json j = summary_base(cfg, "decompose");
    j["n"] = X.rows();
    j["m"] = m;
    j["rank"] = d.rank;
    j["vandermonde_condition"] = k == m ? safe_condition(d.lambda) : inf;
    j["companion_residual_norm"] = d.residual_norm;
    j["near_coincident_ritz_values"] = d.near_coincident;
    j["flagged"] = d.flagged;
    j["reconstruction_error"] = k == m ? full_error(Xm, d) : std::numeric_limits<double>::quiet_NaN();
    if (cfg.eta > 0.0 && cfg.solver != "dmd") {
        const CMatrix raw = regularized_apply(Xm, accurate_svd_vandermonde(d.lambda), cfg.eta);
        const CMatrix E = product_compensated(raw, vandermonde(d.lambda, m)) - Xm;
        j["regularized_reconstruction_error"] = E.norm() / Xm.norm();
    }
    write(dir, "summary.json", dump_json(j));
}

void cmd_compare(const RunConfig& cfg) {
    const CMatrix X = load(cfg);
    const Index m = X.cols() - 1;
    const CMatrix Xm = X.leftCols(m);
    const fs::path dir = out_dir(cfg);
    std::vector<std::vector<std::string>> rows;
    json j = summary_base(cfg, "compare");
    for (const char* s : {"naive", "row-scaled", "col-scaled", "bp", "dft-cauchy", "dmd"}) {
        try {
            const Decomposition d = decompose(X, s);
            const double err = d.lambda.size() == m ? full_error(Xm, d) : std::numeric_limits<double>::quiet_NaN();
            const double kappa = d.lambda.size() == m ? safe_condition(d.lambda) : inf;
            rows.push_back({s, fmt(err), fmt(kappa), "ok"});
            j["solvers"][s] = {{"reconstruction_error", err}, {"vandermonde_condition", kappa}};
        } catch (const std::exception& e) {
            rows.push_back({s, "nan", "nan", "error"});
            j["solvers"][s] = {{"error", e.what()}};
        }
    }
    write(dir, "compare.csv", csv_table({"solver", "reconstruction_error", "vandermonde_condition", "status"}, rows));
    write(dir, "summary.json", dump_json(j));
}

void cmd_reconstruct(const RunConfig& cfg) {
    const CMatrix X = load(cfg);
    const Index m = X.cols() - 1;
    const CMatrix Xm = X.leftCols(m);
    const Index l = cfg.modes == 0 ? m : cfg.modes;
    if (l < 1 || l > m) throw std::invalid_argument("--modes must be between 1 and m = " + std::to_string(m));
    const Decomposition d = decompose(X, cfg.solver);
    if (l > d.lambda.size()) throw std::invalid_argument("--modes exceeds the number of computed modes");
    const std::vector<Index> idx = select_dominant(d.amplitudes, l);
    CMatrix Z(X.rows(), l);
    CVector lam(l);
    for (Index k = 0; k < l; ++k) {
        Z.col(k) = d.W.col(idx[static_cast<size_t>(k)]);
        lam(k) = d.lambda(idx[static_cast<size_t>(k)]);
    }
    const ReconstructionProblem p = make_problem(Z, lam, Xm);

    std::vector<WeightMethod> methods;
    if (cfg.weights.empty())
        methods = {WeightMethod::moore_penrose, WeightMethod::reflexive, WeightMethod::reflexive_frequency,
                   WeightMethod::gla, WeightMethod::weighted_gla};
    else
        methods = {parse_method(cfg.weights)};

    json j = summary_base(cfg, "reconstruct");
    j["m"] = m;
    j["modes"] = l;
    std::vector<std::string> header = {"snapshot"};
    std::vector<RVector> columns;
    std::vector<std::pair<std::string, double>> objectives;
    for (WeightMethod wm : methods) {
        const std::string name = method_name(wm);
        try {
            ReconstructionWeights w;
            switch (wm) {
                case WeightMethod::moore_penrose: w = optimal_weights(p); break;
                case WeightMethod::reflexive: w = reflexive_weights(p); break;
                case WeightMethod::reflexive_frequency: w = freq_weights_case1(p); break;
                case WeightMethod::gla: w = gla_weights(p); break;
                case WeightMethod::weighted_gla: w = weighted_gla_weights(p); break;
                case WeightMethod::p_norm: w = p_norm_weights(Z, lam, Xm); break;
            }
            const Reconstruction r = reconstruct(Z, lam, w.alpha, Xm);
            RVector rel(m);
            for (Index i = 0; i < m; ++i) {
                const double fn = Xm.col(i).norm();
                rel(i) = fn > 0.0 ? r.errors(i) / fn : r.errors(i);
            }
            header.push_back(name);
            columns.push_back(rel);
            objectives.emplace_back(name, w.objective);
            j["methods"][name] = {{"objective", w.objective}, {"flagged", w.flagged}};
        } catch (const std::exception& e) {
            j["methods"][name] = {{"skipped", e.what()}};
        }
    }
    std::vector<std::vector<std::string>> rows;
    for (Index i = 0; i < m; ++i) {
        std::vector<std::string> row = {std::to_string(i)};
        for (const RVector& c : columns) row.push_back(fmt(c(i)));
        rows.push_back(std::move(row));
    }
    write(out_dir(cfg), "errors.csv", csv_table(header, rows));

    std::vector<std::vector<std::string>> mode_rows;
    for (Index k = 0; k < l; ++k) {
        const Index s = idx[static_cast<size_t>(k)];
        mode_rows.push_back({std::to_string(k), std::to_string(s), fmt(d.lambda(s).real()), fmt(d.lambda(s).imag()),
                             fmt(d.amplitudes(s))});
    }
    write(out_dir(cfg), "modes.csv", csv_table({"rank", "index", "re", "im", "amplitude"}, mode_rows));

    // The Moore-Penrose weights minimize the objective; record whether that held.
    auto mp = std::find_if(objectives.begin(), objectives.end(), [](const auto& o) { return o.first == "mp"; });
    if (mp != objectives.end()) {
        bool minimal = true;
        const double slack = 1e-10 * mp->second + 1e-24 * Xm.squaredNorm();
        for (const auto& o : objectives) minimal = minimal && mp->second <= o.second + slack;
        j["mp_is_minimal"] = minimal;
    }
    write(out_dir(cfg), "summary.json", dump_json(j));
}

void cmd_gla_compare(const RunConfig& cfg) {
    ConsistencyConfig c;
    c.lambda = parse_complex_list(cfg.lambda);
    const CVector cc = parse_complex_list(cfg.coupling);
    if (cc.size() != 2) throw std::invalid_argument("--coupling needs two values");
    c.c1 = cc(0);
    c.c2 = cc(1);
    c.beta = parse_complex_list(cfg.beta);
    c.grid.clear();
    for (double v : split_numbers(cfg.grid)) {
        if (v < 1 || v != std::floor(v)) throw std::invalid_argument("--grid entries must be positive integers");
        c.grid.push_back(static_cast<Index>(v));
    }
    const ConsistencyReport rep = consistency_experiment(c, cfg.consistent_tol);
    std::vector<std::vector<std::string>> rows;
    double gap = 0.0;
    for (const auto& r : rep.rows) {
        rows.push_back({std::to_string(r.m), fmt(r.err_star), fmt(r.err_gla), fmt(r.obj_mp), fmt(r.obj_star), fmt(r.obj_gla)});
        gap = std::max(gap, std::abs(r.err_star - r.err_gla));
    }
    const fs::path dir = out_dir(cfg);
    write(dir, "curves.csv", csv_table({"m", "err_star", "err_gla", "obj_mp", "obj_star", "obj_gla"}, rows));
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    json j = summary_base(cfg, "gla-compare");
    j["config"]["lambda"] = cfg.lambda;
    j["config"]["coupling"] = cfg.coupling;
    j["config"]["beta"] = cfg.beta;
    j["config"]["grid"] = cfg.grid;
    j["config"]["consistent_tol"] = cfg.consistent_tol;
    j["estimators"]["alpha_star"] = {{"consistent", yn(rep.star_consistent)}, {"optimal", yn(rep.star_optimal)}};
    j["estimators"]["alpha_gla"] = {{"consistent", yn(rep.gla_consistent)}, {"optimal", yn(rep.gla_optimal)}};
    j["max_curve_gap"] = gap;
    j["largest_m"] = {{"m", rep.rows.back().m}, {"err_star", rep.rows.back().err_star}, {"err_gla", rep.rows.back().err_gla}};
    write(dir, "verdict.json", dump_json(j));
}

void cmd_ensemble(const RunConfig& cfg) {
    const EnsembleKind kind = parse_ensemble_kind(cfg.kind);
    const auto samples = generate_ensemble(kind, cfg.n, cfg.count, cfg.seed);
    std::vector<std::vector<std::string>> krows, erows;
    std::vector<double> kappas;
    for (size_t t = 0; t < samples.size(); ++t) {
        krows.push_back({std::to_string(t), fmt(samples[t].kappa)});
        kappas.push_back(samples[t].kappa);
        for (Index i = 0; i < samples[t].eigenvalues.size(); ++i)
            erows.push_back({std::to_string(t), std::to_string(i), fmt(samples[t].eigenvalues(i).real()),
                             fmt(samples[t].eigenvalues(i).imag())});
    }
    const fs::path dir = out_dir(cfg);
    write(dir, "conditions.csv", csv_table({"trial", "kappa"}, krows));
    write(dir, "eigenvalues.csv", csv_table({"trial", "index", "re", "im"}, erows));
    std::sort(kappas.begin(), kappas.end());
    json j = summary_base(cfg, "ensemble");
    j["config"]["kind"] = cfg.kind;
    j["config"]["n"] = cfg.n;
    j["config"]["count"] = cfg.count;
    if (!kappas.empty()) {
        const size_t h = kappas.size() / 2;
        const double median = kappas.size() % 2 ? kappas[h] : 0.5 * (kappas[h - 1] + kappas[h]);
        j["kappa"] = {{"min", kappas.front()}, {"median", median}, {"max", kappas.back()}};
    }
    write(dir, "summary.json", dump_json(j));
}

}  // namespace kvdmd::cli
