#include "kvdmd/generators.hpp"

#include "kvdmd/vandermonde.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace kvdmd {

namespace {

CVector scaled_eigenvalues(const CMatrix& A) {
    CVector ev = eig_dense(A).values;
    return ev / ev.cwiseAbs().maxCoeff();
}

double safe_condition(const CVector& lambda) {
    try {
        return vandermonde_condition(lambda);
    } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
    }
}

struct Params {
    std::string name;
    std::map<std::string, std::string> kv;

    double num(const std::string& key, double fallback) const {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : std::stod(it->second);
    }
    Index count(const std::string& key, Index fallback) const {
        const double v = num(key, static_cast<double>(fallback));
        if (v < 1 || v != std::floor(v)) throw std::invalid_argument("generator: '" + key + "' must be a positive integer");
        return static_cast<Index>(v);
    }
};

Params parse_spec(const std::string& spec) {
    Params p;
    const auto colon = spec.find(':');
    p.name = spec.substr(0, colon);
    if (colon == std::string::npos) return p;
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("generator: expected key=value, got '" + item + "'");
        p.kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return p;
}

CMatrix random_normal(Index n, Index m, std::mt19937_64& rng) {
    std::normal_distribution<double> N;
    CMatrix A(n, m);
    for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < n; ++i) {
            const double re = N(rng);
            A(i, j) = cplx(re, N(rng));
        }
    return A;
}

SyntheticData modal_data(const CMatrix& Zraw, const CVector& lambda, const CVector& alpha, Index m) {
    SyntheticData d;
    d.Z = Zraw.colwise().normalized();
    d.lambda = lambda;
    d.alpha = alpha;
    d.X = d.Z * alpha.asDiagonal() * vandermonde(lambda, m + 1);
    return d;
}

}  // namespace

EnsembleKind parse_ensemble_kind(const std::string& name) {
    if (name == "rand") return EnsembleKind::rand;
    if (name == "randn") return EnsembleKind::randn;
    if (name == "expm-inv-rand") return EnsembleKind::expm_inv_rand;
    throw std::invalid_argument("unknown ensemble kind '" + name + "'");
}

const char* ensemble_kind_name(EnsembleKind k) {
    switch (k) {
        case EnsembleKind::rand: return "rand";
        case EnsembleKind::randn: return "randn";
        case EnsembleKind::expm_inv_rand: return "expm-inv-rand";
    }
    return "?";
}

std::vector<EnsembleSample> generate_ensemble(EnsembleKind kind, Index n, Index count, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("generate_ensemble: n must be at least 2");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> N;
    std::vector<EnsembleSample> out;
    out.reserve(static_cast<size_t>(count));
    for (Index t = 0; t < count; ++t) {
        CMatrix A(n, n);
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < n; ++i) A(i, j) = kind == EnsembleKind::randn ? N(rng) : U(rng);
        EnsembleSample s;
        if (kind == EnsembleKind::expm_inv_rand) {
            // exp(-1/mu) scaled by its largest modulus, formed in the log domain.
            const CVector mu = eig_dense(A).values;
            CVector logs = (-mu.cwiseInverse()).eval();
            const double top = logs.real().maxCoeff();
            s.eigenvalues.resize(n);
            for (Index i = 0; i < n; ++i) s.eigenvalues(i) = std::exp(logs(i) - top);
        } else {
            s.eigenvalues = scaled_eigenvalues(A);
        }
        s.kappa = safe_condition(s.eigenvalues);
        out.push_back(std::move(s));
    }
    return out;
}

SyntheticData generate_snapshots(const std::string& spec, std::uint64_t seed) {
    const Params p = parse_spec(spec);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    if (p.name == "cyclic") {
        const Index m = p.count("m", 6);
        SyntheticData d;
        d.X = CMatrix::Zero(m, m + 1);
        for (Index i = 0; i < m; ++i) d.X(i, i) = 1.0;
        d.X(0, m) = 1.0;
        d.lambda = dft_nodes(m).conjugate();
        return d;
    }
    if (p.name == "trajectory") {
        const Index n = p.count("n", 8), m = p.count("m", 5);
        SyntheticData d;
        d.A = random_normal(n, n, rng);
        d.A /= eig_dense(d.A).values.cwiseAbs().maxCoeff();
        d.X.resize(n, m + 1);
        d.X.col(0) = random_normal(n, 1, rng);
        for (Index i = 1; i <= m; ++i) d.X.col(i) = d.A * d.X.col(i - 1);
        return d;
    }
    if (p.name == "modal") {
        const Index n = p.count("n", 30), m = p.count("m", 10);
        const double decay = p.num("decay", 0.5);
        CVector lambda(m), alpha(m);
        for (Index j = 0; j < m; ++j) {
            lambda(j) = std::polar(0.7 + 0.3 * U(rng), 2.0 * std::numbers::pi * U(rng));
            alpha(j) = std::pow(decay, static_cast<double>(j));
        }
        return modal_data(random_normal(n, m, rng), lambda, alpha, m);
    }
    if (p.name == "clustered") {
        const Index n = p.count("n", 40), m = p.count("m", 20);
        const double radius = p.num("radius", 1e-2), center = p.num("center", 0.5);
        CVector lambda(m);
        for (Index j = 0; j < m; ++j) {
            const double r = radius * std::sqrt(U(rng));
            lambda(j) = center + std::polar(r, 2.0 * std::numbers::pi * U(rng));
        }
        return modal_data(random_normal(n, m, rng), lambda, CVector::Ones(m), m);
    }
    throw std::invalid_argument("unknown generator '" + p.name + "'");
}

}  // namespace kvdmd
