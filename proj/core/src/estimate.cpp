#include "pdeconv/estimate.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace pdeconv {

namespace {

// Accumulates sum over points of e_j(-y) for j = 0..K via iterated powers of
// exp(-2 pi i y); one exponential per point.
void accumulate_powers(double y, std::vector<std::complex<double>>& acc) {
    const auto z = std::polar(1.0, -2.0 * std::numbers::pi * y);
    std::complex<double> p{1.0, 0.0};
    acc[0] += p;
    for (std::size_t j = 1; j < acc.size(); ++j) {
        p *= z;
        acc[j] += p;
    }
}

FourierVector from_half(const std::vector<std::complex<double>>& half, double scale) {
    const int K = static_cast<int>(half.size()) - 1;
    FourierVector v(K, true);
    for (int j = 0; j <= K; ++j) v.set(j, half[static_cast<std::size_t>(j)] * scale);
    return v;
}

} // namespace

FourierVector empirical_ell(std::span<const PointPattern> processes, int K) {
    if (processes.empty()) throw std::invalid_argument("need at least one process");
    if (K < 0) throw std::invalid_argument("window K must be >= 0");
    std::vector<std::complex<double>> acc(static_cast<std::size_t>(K) + 1, {0.0, 0.0});
    for (const auto& pattern : processes)
        for (double y : pattern.points) accumulate_powers(y, acc);
    return from_half(acc, 1.0 / static_cast<double>(processes.size()));
}

EmpiricalF empirical_f(std::span<const double> errors, int K) {
    if (errors.empty()) throw std::invalid_argument("error sample must not be empty");
    if (K < 0) throw std::invalid_argument("window K must be >= 0");
    std::vector<std::complex<double>> acc(static_cast<std::size_t>(K) + 1, {0.0, 0.0});
    for (double y : errors) accumulate_powers(y, acc);
    EmpiricalF out;
    out.fhat = from_half(acc, 1.0 / static_cast<double>(errors.size()));
    out.flags.resize(static_cast<std::size_t>(K) + 1);
    const double threshold = 1.0 / static_cast<double>(errors.size());
    for (int j = 0; j <= K; ++j)
        out.flags[static_cast<std::size_t>(j)] = std::norm(out.fhat.at(j)) >= threshold;
    return out;
}

EmpiricalCoeffs empirical_coeffs(const Dataset& ds, int K) {
    EmpiricalCoeffs emp;
    emp.ellhat = empirical_ell(ds.processes, K);
    auto f = empirical_f(ds.error_sample, K);
    emp.fhat = std::move(f.fhat);
    emp.omega_flags = std::move(f.flags);
    emp.n = ds.n();
    emp.m = ds.m();
    return emp;
}

FourierVector series_estimator(const EmpiricalCoeffs& emp, int k) {
    if (k < 0 || k > emp.window())
        throw std::invalid_argument("truncation k exceeds the coefficient window");
    FourierVector out(k, true);
    for (int j = 0; j <= k; ++j) {
        if (emp.flagged(j))
            out.set(j, emp.ellhat.at(j) / emp.fhat.at(j));
        else
            out.set(j, {0.0, 0.0});
    }
    return out;
}

namespace {

// Certified bound on 2 sum_{j > T} omega(j) c(j)^2 via the geometric ratio of
// successive terms; valid families: finite support (exact zero) and the
// poisson kernel (exponentially decaying coefficients).
double tail_bound_beyond(const FunctionSpec& truth, const WeightSequence& omega, long T) {
    const auto support = truth.support_limit();
    if (support && T >= *support) return 0.0;
    if (support) {
        if (omega.kind() == WeightKind::Table && omega.table_limit() < *support)
            throw std::invalid_argument("omega table ends before the truth support");
        double s = 0.0;
        for (long j = T + 1; j <= *support; ++j) {
            const double c = truth.coefficient(static_cast<int>(j));
            s += 2.0 * omega(j) * c * c;
        }
        return s;
    }
    if (omega.kind() == WeightKind::Table)
        throw std::invalid_argument("tail undecidable: omega table with infinite truth support");
    const double r2 = std::exp(-2.0 * truth.params().rate);
    double ratio; // bound on term(j+1)/term(j) for j > T
    switch (omega.kind()) {
    case WeightKind::Flat:
        ratio = r2;
        break;
    case WeightKind::Pol: {
        const double e = omega.param();
        ratio = e <= 0.0
                    ? r2
                    : std::pow(static_cast<double>(T + 2) / static_cast<double>(T + 1), 2.0 * e) *
                          r2;
        break;
    }
    case WeightKind::Exp:
        ratio = std::exp(2.0 * omega.param()) * r2;
        break;
    default:
        throw std::logic_error("unreachable weight kind");
    }
    if (ratio >= 1.0)
        throw std::invalid_argument(
            "tail not certifiable: omega grows at least as fast as the coefficients decay");
    const double c1 = truth.coefficient(static_cast<int>(T + 1));
    return 2.0 * omega(T + 1) * c1 * c1 / (1.0 - ratio);
}

} // namespace

RiskBreakdown exact_risk(const FourierVector& est, const FunctionSpec& truth,
                         const WeightSequence& omega, int tail_K) {
    const int Ke = est.max_index();
    if (tail_K < Ke) throw std::invalid_argument("tail_K must cover the estimate window");
    if (omega.kind() == WeightKind::Table) {
        const auto support = truth.support_limit();
        const long needed = support ? std::min<long>(*support, tail_K) : tail_K + 1;
        if (!support || omega.table_limit() < needed)
            throw std::invalid_argument("tail undecidable: omega table too short for the truth");
    }
    RiskBreakdown out;
    for (int j = -Ke; j <= Ke; ++j)
        out.head += omega(j) * std::norm(est.at(j) - truth.coefficient(j));
    for (int j = Ke + 1; j <= tail_K; ++j) {
        const double c = truth.coefficient(j);
        out.mid += 2.0 * omega(j) * c * c;
    }
    out.tail_bound = tail_bound_beyond(truth, omega, tail_K);
    out.total = out.head + out.mid + out.tail_bound;
    return out;
}

std::string estimator_sidecar_json(const EmpiricalCoeffs& emp, int k) {
    nlohmann::json j;
    j["n"] = emp.n;
    j["m"] = emp.m;
    j["k"] = k;
    auto flags = nlohmann::json::array();
    for (int i = 0; i <= k; ++i) flags.push_back(emp.flagged(i) ? 1 : 0);
    j["flags"] = flags;
    return j.dump();
}

} // namespace pdeconv
