#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pdeconv/estimate.hpp"
#include "pdeconv/models.hpp"
#include "pdeconv/select.hpp"

namespace pdeconv {

struct EstimatorSpec {
    enum class Kind { Oracle, Partial, Full, Fixed };
    Kind kind = Kind::Oracle;
    int fixed_k = 0;

    std::string id() const;
    static EstimatorSpec parse(const std::string& text); // "oracle"|"partial"|"full"|"fixed(k)"
};

struct ExperimentConfig {
    FunctionSpec intensity;
    FunctionSpec error;
    IntensityClass intensity_class;
    ErrorClass error_class;
    WeightSequence omega;
    std::vector<long> n_grid;
    std::vector<long> m_grid;
    int reps = 1;
    std::uint64_t seed = 1;
    std::vector<EstimatorSpec> estimators;
    ConstantsMode constants;
    int K_max = 64;
    int tail_K = 256;
    std::string output; // CSV path; empty keeps results in memory
    bool class_verified = false; // set by validate()

    static ExperimentConfig from_json_string(const std::string& text);
    std::string to_json_string() const;

    /// Checks grids/reps and runs the class membership checks; a failed
    /// membership does not abort, it flags the run as class-unverified.
    void validate();
};

struct RiskRecord {
    long n = 0;
    long m = 0;
    std::string estimator;
    double mean_risk = 0.0;
    double std_error = 0.0;
    double mean_k = 0.0;
    std::map<int, long> k_hist;
    int reps = 0;
    std::uint64_t seed = 0;
    std::string constants_mode;
    bool class_verified = true;
};

/// Monte Carlo risk study over the (n, m) grid. Replications run in
/// parallel (worker count capped by POISSON_DECONV_THREADS) on substreams
/// derived from (seed, replication), and aggregation is in replication
/// order, so the output is byte-identical for any worker count.
std::vector<RiskRecord> run_experiment(const ExperimentConfig& cfg);

void write_risk_csv(std::ostream& os, std::span<const RiskRecord> records);

/// gnuplot script plotting mean risk vs n per estimator from the CSV.
void emit_gnuplot(std::ostream& os, const std::string& csv_path);

struct SlopeFit {
    double slope = 0.0;
    double half_width = 0.0; // 2 standard errors of the fitted slope
};

/// Least-squares slope of log(y) against log(x); needs >= 4 points and
/// strictly positive values.
SlopeFit slope_regression(std::span<const double> x, std::span<const double> y);

struct DiagnosticsRecord {
    long n = 0, m = 0;
    int reps = 0;
    int j_max = 0;
    // per j = 0..j_max
    std::vector<double> xi_mean_re, xi_mean_im; // residual ellhat_j - c_lambda c_f
    std::vector<double> xi_var;
    std::vector<double> ell_var_ratio; // empirical Var(ellhat_j) * n / lambda_0
    std::vector<double> f_var_ratio;   // empirical Var(fhat_j) * m / (1 - |c_f|^2)
    std::vector<double> omega_fail_freq;
    std::vector<double> omega_fail_bound; // min(1, 4 d / (m alpha_j))
    double xi1_fail_freq = 0.0; // average count outside [1/2, 2] x (lambda_0 v 1)
    double xi2_fail_freq = 0.0; // error-coefficient relative-error/threshold failure up to M
    long xi2_index_M = 0;
};

/// Empirical frequencies of the guard events and the residual moments,
/// evaluated at the first (n, m) grid point of the config.
DiagnosticsRecord event_diagnostics(const ExperimentConfig& cfg, int j_max);

/// Worker cap: POISSON_DECONV_THREADS, else hardware concurrency.
int worker_count();

} // namespace pdeconv
