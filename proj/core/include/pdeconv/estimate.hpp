#pragma once

#include <span>
#include <vector>

#include "pdeconv/fourier.hpp"
#include "pdeconv/models.hpp"
#include "pdeconv/simulate.hpp"

namespace pdeconv {

/// Empirical Fourier layer of one dataset: process coefficients, error
/// density coefficients and the threshold flags guarding the division.
struct EmpiricalCoeffs {
    FourierVector ellhat; // process coefficients, window K
    FourierVector fhat;   // error density coefficients, window K
    std::vector<bool> omega_flags; // flag[|j|]: |fhat(j)|^2 >= 1/m (inclusive)
    long n = 0;
    long m = 0;

    int window() const { return ellhat.max_index(); }
    bool flagged(int j) const { return omega_flags[static_cast<std::size_t>(j < 0 ? -j : j)]; }
};

/// (1/n) sum over processes and points of e_j(-y), |j| <= K.
FourierVector empirical_ell(std::span<const PointPattern> processes, int K);

struct EmpiricalF {
    FourierVector fhat;
    std::vector<bool> flags;
};

/// (1/m) sum of e_j(-Y_i) plus the threshold flags; rejects an empty sample.
EmpiricalF empirical_f(std::span<const double> errors, int K);

EmpiricalCoeffs empirical_coeffs(const Dataset& ds, int K);

/// Truncated series estimate of the intensity: coefficient ellhat/fhat where
/// the threshold flag holds and |j| <= k, zero otherwise.
FourierVector series_estimator(const EmpiricalCoeffs& emp, int k);

struct RiskBreakdown {
    double total = 0.0;      // head + mid + tail_bound
    double head = 0.0;       // weighted error on the estimate's window
    double mid = 0.0;        // exact truth mass between the window and tail_K
    double tail_bound = 0.0; // certified analytic bound beyond tail_K
};

/// Weighted squared distance between an estimate and the exact truth,
/// including a certified bound for the coefficient mass beyond tail_K
/// instead of a silent truncation.
RiskBreakdown exact_risk(const FourierVector& est, const FunctionSpec& truth,
                         const WeightSequence& omega, int tail_K);

/// Estimator serialization: coefficient CSV plus a JSON sidecar
/// {"n":..,"m":..,"k":..,"flags":[..]} with flags for j = 0..k.
std::string estimator_sidecar_json(const EmpiricalCoeffs& emp, int k);

} // namespace pdeconv
