#include "pdeconv/bench.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <thread>

#include <json.hpp>

namespace pdeconv {

namespace {

using nlohmann::json;

WeightSequence weight_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "flat") return WeightSequence::flat();
    if (kind == "pol") return WeightSequence::pol(j.at("exponent").get<double>());
    if (kind == "exp") return WeightSequence::exponential(j.at("rate").get<double>());
    if (kind == "table") return WeightSequence::table(j.at("values").get<std::vector<double>>());
    throw std::invalid_argument("unknown weight kind: " + kind);
}

json weight_to_json(const WeightSequence& w) {
    json j;
    switch (w.kind()) {
    case WeightKind::Flat:
        j["kind"] = "flat";
        break;
    case WeightKind::Pol:
        j["kind"] = "pol";
        j["exponent"] = w.param();
        break;
    case WeightKind::Exp:
        j["kind"] = "exp";
        j["rate"] = w.param();
        break;
    case WeightKind::Table: {
        j["kind"] = "table";
        std::vector<double> vals;
        for (long i = 0; i <= w.table_limit(); ++i) vals.push_back(w(i));
        j["values"] = vals;
        break;
    }
    }
    return j;
}

ConstantsMode constants_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "paper") return ConstantsMode::Paper();
        throw std::invalid_argument("constants_mode string must be \"paper\"");
    }
    return ConstantsMode::Practical(j.at("practical").get<double>());
}

} // namespace

std::string EstimatorSpec::id() const {
    switch (kind) {
    case Kind::Oracle:
        return "oracle";
    case Kind::Partial:
        return "partial";
    case Kind::Full:
        return "full";
    case Kind::Fixed:
        return "fixed(" + std::to_string(fixed_k) + ")";
    }
    return "?";
}

EstimatorSpec EstimatorSpec::parse(const std::string& text) {
    EstimatorSpec e;
    if (text == "oracle") {
        e.kind = Kind::Oracle;
    } else if (text == "partial") {
        e.kind = Kind::Partial;
    } else if (text == "full") {
        e.kind = Kind::Full;
    } else if (int k = -1; std::sscanf(text.c_str(), "fixed(%d)", &k) == 1 && k >= 0) {
        e.kind = Kind::Fixed;
        e.fixed_k = k;
    } else {
        throw std::invalid_argument("unknown estimator spec: " + text);
    }
    return e;
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
    const json j = json::parse(text);
    const auto cls_i = j.at("intensity_class");
    const auto cls_e = j.at("error_class");
    ExperimentConfig cfg{
        FunctionSpec::from_json_string(j.at("intensity").dump(), Role::Intensity),
        FunctionSpec::from_json_string(j.at("error").dump(), Role::ErrorDensity),
        IntensityClass::make(weight_from_json(cls_i.at("gamma")), cls_i.at("r").get<double>()),
        ErrorClass::make(weight_from_json(cls_e.at("alpha")), cls_e.at("d").get<double>()),
        weight_from_json(j.at("omega")),
        j.at("n_grid").get<std::vector<long>>(),
        j.at("m_grid").get<std::vector<long>>(),
        j.at("reps").get<int>(),
        j.at("seed").get<std::uint64_t>(),
        {},
        j.contains("constants_mode") ? constants_from_json(j.at("constants_mode"))
                                     : ConstantsMode::Paper(),
        j.value("K_max", 64),
        j.value("tail_K", 256),
        j.value("output", std::string{}),
        false};
    for (const auto& e : j.at("estimators")) cfg.estimators.push_back(EstimatorSpec::parse(e.get<std::string>()));
    cfg.validate();
    return cfg;
}

std::string ExperimentConfig::to_json_string() const {
    json j;
    j["intensity"] = json::parse(intensity.to_json_string());
    j["error"] = json::parse(error.to_json_string());
    j["intensity_class"] = {{"gamma", weight_to_json(intensity_class.gamma)},
                            {"r", intensity_class.radius}};
    j["error_class"] = {{"alpha", weight_to_json(error_class.alpha)}, {"d", error_class.d}};
    j["omega"] = weight_to_json(omega);
    j["n_grid"] = n_grid;
    j["m_grid"] = m_grid;
    j["reps"] = reps;
    j["seed"] = seed;
    auto est = json::array();
    for (const auto& e : estimators) est.push_back(e.id());
    j["estimators"] = est;
    if (constants.paper())
        j["constants_mode"] = "paper";
    else
        j["constants_mode"] = {{"practical", constants.c}};
    j["K_max"] = K_max;
    j["tail_K"] = tail_K;
    if (!output.empty()) j["output"] = output;
    return j.dump(2);
}

void ExperimentConfig::validate() {
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    if (n_grid.empty() || m_grid.empty()) throw std::invalid_argument("grids must not be empty");
    for (long n : n_grid)
        if (n < 1) throw std::invalid_argument("n grid values must be >= 1");
    for (long m : m_grid)
        if (m < 1) throw std::invalid_argument("m grid values must be >= 1");
    if (estimators.empty()) throw std::invalid_argument("estimator list must not be empty");
    if (K_max < 1 || tail_K < K_max) throw std::invalid_argument("need K_max >= 1, tail_K >= K_max");
    const auto mi = class_membership(intensity, intensity_class);
    const auto sup = error.support_limit();
    const auto me = class_membership(error, error_class, sup ? *sup : 0);
    class_verified = mi.member() && me.member();
}

int worker_count() {
    if (const char* env = std::getenv("POISSON_DECONV_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

struct RepOutcome {
    double risk = 0.0;
    int k = 0;
};

// One grid point: simulate per replication, run every estimator, aggregate in
// replication order afterwards.
void run_grid_point(const ExperimentConfig& cfg, long n, long m,
                    std::vector<std::vector<RepOutcome>>& per_estimator) {
    const int R = cfg.reps;
    const int K = static_cast<int>(std::min<long>(std::min(n, m), cfg.K_max));
    const std::size_t E = cfg.estimators.size();
    for (auto& v : per_estimator) v.assign(static_cast<std::size_t>(R), {});

    int oracle_k = -1;
    for (const auto& e : cfg.estimators)
        if (e.kind == EstimatorSpec::Kind::Oracle && oracle_k < 0)
            oracle_k = oracle_rates(cfg.omega, cfg.intensity_class.gamma, cfg.error_class.alpha,
                                    n, m, std::max(64, cfg.K_max))
                           .k_star;

    auto run_rep = [&](int r) {
        const Dataset ds = simulate_dataset(cfg.intensity, cfg.error, n, m, cfg.seed,
                                            static_cast<std::uint64_t>(r));
        const EmpiricalCoeffs emp = empirical_coeffs(ds, K);
        for (std::size_t e = 0; e < E; ++e) {
            const auto& spec = cfg.estimators[e];
            int k = 0;
            switch (spec.kind) {
            case EstimatorSpec::Kind::Oracle:
                k = std::min(oracle_k, K);
                break;
            case EstimatorSpec::Kind::Partial:
                k = partial_adaptive(emp, cfg.omega, cfg.error_class.alpha, cfg.error_class.d,
                                     cfg.constants)
                        .k_selected;
                break;
            case EstimatorSpec::Kind::Full:
                k = full_adaptive(emp, cfg.omega, cfg.constants).k_selected;
                break;
            case EstimatorSpec::Kind::Fixed:
                k = std::min(spec.fixed_k, K);
                break;
            }
            const FourierVector est = series_estimator(emp, k);
            per_estimator[e][static_cast<std::size_t>(r)] = {
                exact_risk(est, cfg.intensity, cfg.omega, cfg.tail_K).total, k};
        }
    };

    const int W = std::min(worker_count(), R);
    if (W <= 1) {
        for (int r = 0; r < R; ++r) run_rep(r);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (;;) {
                const int r = next.fetch_add(1);
                if (r >= R) return;
                run_rep(r);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(W));
        for (int w = 0; w < W; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
}

} // namespace

std::vector<RiskRecord> run_experiment(const ExperimentConfig& cfg) {
    std::vector<RiskRecord> records;
    std::vector<std::vector<RepOutcome>> per_estimator(cfg.estimators.size());
    for (long n : cfg.n_grid) {
        for (long m : cfg.m_grid) {
            run_grid_point(cfg, n, m, per_estimator);
            for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
                RiskRecord rec;
                rec.n = n;
                rec.m = m;
                rec.estimator = cfg.estimators[e].id();
                rec.reps = cfg.reps;
                rec.seed = cfg.seed;
                rec.constants_mode = cfg.constants.describe();
                rec.class_verified = cfg.class_verified;
                double sum = 0.0, ksum = 0.0;
                for (const auto& o : per_estimator[e]) {
                    sum += o.risk;
                    ksum += o.k;
                    ++rec.k_hist[o.k];
                }
                const double R = static_cast<double>(cfg.reps);
                rec.mean_risk = sum / R;
                rec.mean_k = ksum / R;
                double ss = 0.0;
                for (const auto& o : per_estimator[e]) {
                    const double d = o.risk - rec.mean_risk;
                    ss += d * d;
                }
                rec.std_error = cfg.reps > 1 ? std::sqrt(ss / (R - 1.0) / R) : 0.0;
                records.push_back(std::move(rec));
            }
        }
    }
    if (!cfg.output.empty()) {
        std::ofstream os(cfg.output, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open output file: " + cfg.output);
        write_risk_csv(os, records);
    }
    return records;
}

void write_risk_csv(std::ostream& os, std::span<const RiskRecord> records) {
    os << "n,m,estimator,mean_risk,std_error,mean_k,k_hist,reps,seed,constants_mode,class_verified\n";
    char buf[128];
    for (const auto& r : records) {
        os << r.n << ',' << r.m << ',' << r.estimator << ',';
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,", r.mean_risk, r.std_error, r.mean_k);
        os << buf;
        bool first = true;
        for (const auto& [k, c] : r.k_hist) {
            if (!first) os << '|';
            os << k << ':' << c;
            first = false;
        }
        os << ',' << r.reps << ',' << r.seed << ',' << r.constants_mode << ','
           << (r.class_verified ? 1 : 0) << '\n';
    }
}

void emit_gnuplot(std::ostream& os, const std::string& csv_path) {
    os << "# gnuplot script; run: gnuplot -persist <this file>\n"
       << "set datafile separator ','\n"
       << "set logscale xy\n"
       << "set xlabel 'n'\n"
       << "set ylabel 'mean weighted risk'\n"
       << "set key outside\n"
       << "plot '" << csv_path
       << "' skip 1 using 1:($4) with linespoints title 'mean risk', \\\n"
       << "     '" << csv_path << "' skip 1 using 1:($4+4*$5) with lines title '+4 SE'\n";
}

SlopeFit slope_regression(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("x and y must have equal length");
    const std::size_t N = x.size();
    if (N < 4) throw std::invalid_argument("slope regression needs at least 4 points");
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(N), ly(N);
    for (std::size_t i = 0; i < N; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("slope regression needs positive values");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / static_cast<double>(N), my = sy / static_cast<double>(N);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("slope regression needs distinct x values");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double resid = ly[i] - my - fit.slope * (lx[i] - mx);
        rss += resid * resid;
    }
    const double sigma2 = rss / static_cast<double>(N - 2);
    fit.half_width = 2.0 * std::sqrt(sigma2 / sxx);
    return fit;
}

DiagnosticsRecord event_diagnostics(const ExperimentConfig& cfg, int j_max) {
    const long n = cfg.n_grid.front();
    const long m = cfg.m_grid.front();
    const int K = static_cast<int>(std::min<long>(std::min(n, m), cfg.K_max));
    j_max = std::min(j_max, K);

    DiagnosticsRecord rec;
    rec.n = n;
    rec.m = m;
    rec.reps = cfg.reps;
    rec.j_max = j_max;
    rec.xi2_index_M = std::min<long>(index_M_alpha(cfg.error_class.alpha, cfg.error_class.d, m),
                                     K);

    const std::size_t J = static_cast<std::size_t>(j_max) + 1;
    std::vector<std::complex<double>> xi_sum(J), ell_sum(J), f_sum(J);
    std::vector<double> xi_sq(J), ell_sq(J), f_sq(J), omega_fail(J);
    long xi1_fail = 0, xi2_fail = 0;

    const double lam0 = cfg.intensity.coefficient(0);
    for (int r = 0; r < cfg.reps; ++r) {
        const Dataset ds = simulate_dataset(cfg.intensity, cfg.error, n, m, cfg.seed,
                                            static_cast<std::uint64_t>(r));
        const EmpiricalCoeffs emp = empirical_coeffs(ds, K);
        for (int j = 0; j <= j_max; ++j) {
            const auto ell = emp.ellhat.at(j);
            const auto fh = emp.fhat.at(j);
            const double truth = cfg.intensity.coefficient(j) * cfg.error.coefficient(j);
            const auto xi = ell - truth;
            const auto s = static_cast<std::size_t>(j);
            xi_sum[s] += xi;
            xi_sq[s] += std::norm(xi);
            ell_sum[s] += ell;
            ell_sq[s] += std::norm(ell);
            f_sum[s] += fh;
            f_sq[s] += std::norm(fh);
            if (!emp.flagged(j)) omega_fail[s] += 1.0;
        }
        const double l0 = std::max(emp.ellhat.at(0).real(), 1.0);
        const double ref = std::max(lam0, 1.0);
        if (l0 < 0.5 * ref || l0 > 2.0 * ref) ++xi1_fail;
        bool xi2_bad = false;
        for (long j = 0; j <= rec.xi2_index_M && !xi2_bad; ++j) {
            const double cf = cfg.error.coefficient(static_cast<int>(j));
            const auto fh = emp.fhat.at(static_cast<int>(j));
            if (std::abs(fh) < 1.0 / static_cast<double>(m)) xi2_bad = true;
            else if (std::abs(1.0 / fh - 1.0 / cf) > 1.0 / (2.0 * std::abs(cf))) xi2_bad = true;
        }
        if (xi2_bad) ++xi2_fail;
    }

    const double R = static_cast<double>(cfg.reps);
    for (std::size_t s = 0; s < J; ++s) {
        const int j = static_cast<int>(s);
        rec.xi_mean_re.push_back(xi_sum[s].real() / R);
        rec.xi_mean_im.push_back(xi_sum[s].imag() / R);
        const double xv = cfg.reps > 1
                              ? (xi_sq[s] - std::norm(xi_sum[s]) / R) / (R - 1.0)
                              : 0.0;
        rec.xi_var.push_back(xv);
        const double ev = cfg.reps > 1 ? (ell_sq[s] - std::norm(ell_sum[s]) / R) / (R - 1.0) : 0.0;
        rec.ell_var_ratio.push_back(ev * static_cast<double>(n) / lam0);
        const double fv = cfg.reps > 1 ? (f_sq[s] - std::norm(f_sum[s]) / R) / (R - 1.0) : 0.0;
        const double cf = cfg.error.coefficient(j);
        const double fvar_exact = (1.0 - cf * cf) / static_cast<double>(m);
        rec.f_var_ratio.push_back(fvar_exact > 0.0 ? fv / fvar_exact : 0.0);
        rec.omega_fail_freq.push_back(omega_fail[s] / R);
        const double x = static_cast<double>(m) * cfg.error_class.alpha(j);
        rec.omega_fail_bound.push_back(std::min(1.0, 4.0 * cfg.error_class.d / x));
    }
    rec.xi1_fail_freq = static_cast<double>(xi1_fail) / R;
    rec.xi2_fail_freq = static_cast<double>(xi2_fail) / R;
    return rec;
}

} // namespace pdeconv
