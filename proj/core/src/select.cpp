#include "pdeconv/select.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace pdeconv {

ConstantsMode ConstantsMode::Practical(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("practical constants factor must be > 0");
    return {c};
}

std::string ConstantsMode::describe() const {
    if (paper()) return "paper";
    char buf[48];
    std::snprintf(buf, sizeof buf, "practical(%.17g)", c);
    return buf;
}

RatePoint oracle_rates(const WeightSequence& omega, const WeightSequence& gamma,
                       const WeightSequence& alpha, long n, long m, int K_max) {
    if (n < 1 || m < 1) throw std::invalid_argument("sample sizes must be >= 1");
    if (K_max < 1) throw std::invalid_argument("K_max must be >= 1");

    RatePoint out;
    const double dn = static_cast<double>(n);
    double var = omega(0) / (dn * alpha(0));
    double bias = omega(0) / gamma(0);
    double best = std::max(bias, var);
    out.k_star = 0;
    out.bias_term = bias;
    out.variance_term = var;
    double prev_bias = bias;
    bool stopped = var >= best; // k = 0 already dominates every larger model
    if (!stopped) {
        for (int k = 1; k <= K_max; ++k) {
            const double inc = 2.0 * omega(k) / (dn * alpha(k));
            if (!(inc > 0.0)) throw std::logic_error("variance increment must be positive");
            var += inc;
            bias = omega(k) / gamma(k);
            if (bias > prev_bias * (1.0 + 1e-12))
                throw std::logic_error("bias term must be nonincreasing in k");
            prev_bias = bias;
            const double value = std::max(bias, var);
            if (value < best) {
                best = value;
                out.k_star = k;
                out.bias_term = bias;
                out.variance_term = var;
            }
            if (var >= best) { // variance alone dominates all larger models
                stopped = true;
                break;
            }
        }
    }
    if (!stopped)
        throw std::runtime_error("oracle_rates: window too small, bias/variance balance not "
                                 "reached by K_max");
    out.psi = best;

    // second functional: max over k >= 1 of (omega/gamma) min(1, 1/(m alpha))
    const double dm = static_cast<double>(m);
    double phi = 0.0;
    int phi_arg = 1;
    bool phi_stopped = false;
    for (int k = 1; k <= K_max; ++k) {
        const double b = omega(k) / gamma(k);
        const double x = dm * alpha(k);
        const double term = b * (x >= 1.0 ? 1.0 / x : 1.0);
        if (term > phi) {
            phi = term;
            phi_arg = k;
        }
        if (b <= phi) { // nonincreasing bias bounds every later term
            phi_stopped = true;
            break;
        }
    }
    if (!phi_stopped)
        throw std::runtime_error("oracle_rates: window too small for the m-functional scan");
    out.phi = phi;
    out.phi_argmax = phi_arg;
    return out;
}

double rate_formula(SeqKind gamma_kind, SeqKind alpha_kind, double s, double p, double a,
                    RateVar which, double n_or_m) {
    if (!(n_or_m >= 1.0)) throw std::invalid_argument("sample size must be >= 1");
    const double x = n_or_m;
    const double lx = std::log(x);
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("rate formula restriction violated: ") + what);
    };
    if (gamma_kind == SeqKind::Pol && alpha_kind == SeqKind::Pol) {
        need(p >= s, "p >= s");
        need(a > 0.5, "a > 1/2");
        if (which == RateVar::SampleN) return std::pow(x, -2.0 * (p - s) / (2.0 * p + 2.0 * a + 1.0));
        return std::pow(x, -std::min(p - s, a) / a);
    }
    if (gamma_kind == SeqKind::Exp && alpha_kind == SeqKind::Pol) {
        need(a > 0.5, "a > 1/2");
        if (which == RateVar::SampleN) return std::pow(lx, 2.0 * s + 2.0 * a + 1.0) / x;
        return 1.0 / x;
    }
    if (gamma_kind == SeqKind::Pol && alpha_kind == SeqKind::Exp) {
        need(p >= s, "p >= s");
        return std::pow(lx, -2.0 * (p - s));
    }
    // exp-exp
    if (which == RateVar::SampleN) return std::pow(lx, 2.0 * s) * std::pow(x, -p / (p + a));
    return a >= p ? std::pow(lx, 2.0 * s) * std::pow(x, -p / a) : 1.0 / x;
}

double Delta_alpha(int k, const WeightSequence& omega, const WeightSequence& alpha) {
    double best = 0.0;
    for (int j = 0; j <= k; ++j) best = std::max(best, omega(j) / alpha(j));
    return best;
}

double delta_alpha(int k, const WeightSequence& omega, const WeightSequence& alpha,
                   int log_offset) {
    const double D = Delta_alpha(k, omega, alpha);
    const double off = static_cast<double>(k + log_offset);
    return (2.0 * k + 1.0) * D * std::log(std::max(D, off)) / std::log(off);
}

namespace {

// (inf{1 <= j <= bound : fails(j)} - 1) ^ bound with inf of the empty set
// read as bound + 1, so a never-binding constraint yields the full range.
template <class Pred>
long capped_infimum(long bound, Pred fails) {
    for (long j = 1; j <= bound; ++j)
        if (fails(j)) return j - 1;
    return bound;
}

} // namespace

long index_N_alpha(const WeightSequence& omega, const WeightSequence& alpha, long n, double c) {
    const double dn = static_cast<double>(n);
    const double lg = std::log(dn + 3.0);
    double wplus = omega(0);
    return capped_infimum(n, [&](long j) {
        wplus = std::max(wplus, omega(j));
        return alpha(j) / (2.0 * j + 1.0) < c * lg * wplus / dn;
    });
}

long index_M_alpha(const WeightSequence& alpha, double d, long m, double c) {
    const double thr = 640.0 * d * c * std::log(static_cast<double>(m) + 1.0) /
                       static_cast<double>(m);
    return capped_infimum(m, [&](long j) { return alpha(j) < thr; });
}

long index_N_alpha_minus(const WeightSequence& omega, const WeightSequence& alpha, long n,
                         double d) {
    const double dn = static_cast<double>(n);
    const double lg = std::log(dn + 4.0);
    double wplus = omega(0);
    return capped_infimum(n, [&](long j) {
        wplus = std::max(wplus, omega(j));
        return alpha(j) / (2.0 * j + 1.0) < 4.0 * d * lg * wplus / dn;
    });
}

long index_N_alpha_plus(const WeightSequence& omega, const WeightSequence& alpha, long n,
                        double d) {
    const double dn = static_cast<double>(n);
    const double lg = std::log(dn + 4.0);
    double wplus = omega(0);
    return capped_infimum(n, [&](long j) {
        wplus = std::max(wplus, omega(j));
        return alpha(j) / (2.0 * j + 1.0) < lg * wplus / (4.0 * d * dn);
    });
}

long index_M_alpha_minus(const WeightSequence& alpha, double d, long m) {
    const double thr = 4.0 * d * std::log(static_cast<double>(m)) / static_cast<double>(m);
    return capped_infimum(m, [&](long j) { return alpha(j) < thr; });
}

long index_M_alpha_plus(const WeightSequence& alpha, double d, long m) {
    const double thr = std::log(static_cast<double>(m)) / static_cast<double>(m);
    return capped_infimum(m, [&](long j) { return 4.0 * d * alpha(j) < thr; });
}

namespace {

struct ContrastScan {
    std::vector<double> contrast;   // per k = 0..K_cap
    std::vector<double> lam_norm2;  // |lambda-hat coefficient|^2 per |j|
};

ContrastScan scan_contrast(const EmpiricalCoeffs& emp, const WeightSequence& omega, long K_cap) {
    ContrastScan out;
    out.contrast.resize(static_cast<std::size_t>(K_cap) + 1);
    out.lam_norm2.resize(static_cast<std::size_t>(K_cap) + 1);
    double acc = 0.0;
    for (long k = 0; k <= K_cap; ++k) {
        const int j = static_cast<int>(k);
        double n2 = 0.0;
        if (emp.flagged(j)) n2 = std::norm(emp.ellhat.at(j) / emp.fhat.at(j));
        out.lam_norm2[static_cast<std::size_t>(k)] = n2;
        acc -= (k == 0 ? 1.0 : 2.0) * omega(k) * n2;
        out.contrast[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

int argmin_penalized(const std::vector<double>& contrast, const std::vector<double>& penalty) {
    int best = 0;
    double best_value = contrast[0] + penalty[0];
    for (std::size_t k = 1; k < contrast.size(); ++k) {
        const double v = contrast[k] + penalty[k];
        if (v < best_value) {
            best_value = v;
            best = static_cast<int>(k);
        }
    }
    return best;
}

} // namespace

SelectionResult partial_adaptive(const EmpiricalCoeffs& emp, const WeightSequence& omega,
                                 const WeightSequence& alpha, double d, ConstantsMode mode) {
    if (!(d >= 1.0)) throw std::invalid_argument("class parameter d must be >= 1");
    SelectionResult res;
    res.mode = "partial";
    res.constants = mode;
    res.window = emp.window();
    res.N_bound = index_N_alpha(omega, alpha, emp.n, mode.c);
    res.M_bound = index_M_alpha(alpha, d, emp.m, mode.c);
    res.K_cap = std::min(res.N_bound, res.M_bound);
    if (res.K_cap > emp.window())
        throw std::runtime_error("partial_adaptive: coefficient window smaller than the scan cap");
    res.ellhat0 = emp.ellhat.at(0).real();

    auto scan = scan_contrast(emp, omega, res.K_cap);
    res.contrast = std::move(scan.contrast);
    const double scale = 82.5 * d * mode.c * std::max(res.ellhat0, 1.0) /
                         static_cast<double>(emp.n);
    for (long k = 0; k <= res.K_cap; ++k) {
        res.Delta.push_back(Delta_alpha(static_cast<int>(k), omega, alpha));
        res.delta.push_back(delta_alpha(static_cast<int>(k), omega, alpha, 3));
        res.penalty.push_back(scale * res.delta.back());
    }
    res.k_selected = argmin_penalized(res.contrast, res.penalty);
    return res;
}

SelectionResult full_adaptive(const EmpiricalCoeffs& emp, const WeightSequence& omega,
                              ConstantsMode mode) {
    SelectionResult res;
    res.mode = "full";
    res.constants = mode;
    res.window = emp.window();
    const long n = emp.n, m = emp.m;
    const long W = emp.window();
    auto fh2 = [&emp](long j) { return std::norm(emp.fhat.at(static_cast<int>(j))); };

    // Scan both cap indices over the stored window. A scan that has not
    // fired by the window end is undetermined, but as long as the other one
    // resolved below the window the minimum (and hence the selection range)
    // is still exact; only two undetermined scans are a genuine error.
    long N = -1, M = -1;
    {
        const double dn = static_cast<double>(n);
        const double lg = std::log(dn + 4.0);
        double wplus = omega(0);
        long j = 1;
        for (; j <= std::min(n, W); ++j) {
            wplus = std::max(wplus, omega(j));
            if (fh2(j) / (2.0 * j + 1.0) < mode.c * lg * wplus / dn) break;
        }
        if (j <= std::min(n, W))
            N = j - 1;
        else if (n <= W)
            N = n; // never-binding constraint over the full range
    }
    {
        const double dm = static_cast<double>(m);
        const double thr = mode.c * std::log(dm) / dm;
        long j = 1;
        for (; j <= std::min(m, W); ++j)
            if (fh2(j) < thr) break;
        if (j <= std::min(m, W))
            M = j - 1;
        else if (m <= W)
            M = m;
    }
    if (N < 0 && M < 0)
        throw std::runtime_error("full_adaptive: coefficient window too small for the cap scans");
    res.N_bound = N >= 0 ? N : W; // saturated at the window when undetermined
    res.M_bound = M >= 0 ? M : W;
    res.K_cap = std::min(res.N_bound, res.M_bound);
    res.ellhat0 = emp.ellhat.at(0).real();

    auto scan = scan_contrast(emp, omega, res.K_cap);
    res.contrast = std::move(scan.contrast);
    const double scale = 2750.0 * mode.c * std::max(res.ellhat0, 1.0) / static_cast<double>(n);
    double Dhat = 0.0;
    for (long k = 0; k <= res.K_cap; ++k) {
        const int j = static_cast<int>(k);
        if (emp.flagged(j)) Dhat = std::max(Dhat, omega(k) / fh2(k));
        const double off = static_cast<double>(k + 4);
        const double dhat = (2.0 * k + 1.0) * Dhat * std::log(std::max(Dhat, off)) / std::log(off);
        res.Delta.push_back(Dhat);
        res.delta.push_back(dhat);
        res.penalty.push_back(scale * dhat);
    }
    res.k_selected = argmin_penalized(res.contrast, res.penalty);
    return res;
}

double contrast_by_definition(const FourierVector& reference, const FourierVector& t,
                              const WeightSequence& omega) {
    return weighted_norm_sq(t, omega) - 2.0 * weighted_inner(reference, t, omega).real();
}

std::string SelectionResult::to_json_string() const {
    nlohmann::json j;
    j["mode"] = mode;
    j["k_selected"] = k_selected;
    j["K_cap"] = K_cap;
    j["N_bound"] = N_bound;
    j["M_bound"] = M_bound;
    j["contrast"] = contrast;
    j["penalty"] = penalty;
    j["delta"] = delta;
    j["Delta"] = Delta;
    j["ellhat0"] = ellhat0;
    j["constants_mode"] = constants.describe();
    j["window"] = window;
    return j.dump();
}

ProofIndices proof_indices(const WeightSequence& omega, const WeightSequence& alpha, double d,
                           long n, long m, const FunctionSpec* f, int k_max) {
    ProofIndices out;
    out.N_minus = index_N_alpha_minus(omega, alpha, n, d);
    out.N_plus = index_N_alpha_plus(omega, alpha, n, d);
    out.M_minus = index_M_alpha_minus(alpha, d, m);
    out.M_plus = index_M_alpha_plus(alpha, d, m);
    out.K_minus = std::min(out.N_minus, out.M_minus);
    out.K_plus = std::min(out.N_plus, out.M_plus);
    if (f) {
        if (f->role() != Role::ErrorDensity)
            throw std::invalid_argument("proof_indices needs an error density");
        const long kk = k_max >= 0 ? k_max : out.K_plus;
        double D = 0.0;
        for (long k = 0; k <= kk; ++k) {
            const double c = f->coefficient(static_cast<int>(k));
            D = std::max(D, omega(k) / (c * c));
            const double off = static_cast<double>(k + 4);
            out.Delta_k.push_back(D);
            out.delta_k.push_back((2.0 * k + 1.0) * D * std::log(std::max(D, off)) /
                                  std::log(off));
        }
    }
    return out;
}

FullyAdaptiveCheck check_assumption_fully(const WeightSequence& omega,
                                          const WeightSequence& alpha, double d,
                                          std::span<const long> n_grid,
                                          std::span<const long> m_grid, const FunctionSpec* f) {
    if (m_grid.empty()) throw std::invalid_argument("m grid must not be empty");
    FullyAdaptiveCheck out;
    for (long m : m_grid) {
        const long Mp = index_M_alpha_plus(alpha, d, m);
        const double dm = static_cast<double>(m);
        const double val = std::exp(-dm * alpha(Mp + 1) / (128.0 * d)) * std::pow(dm, 5.0);
        if (val > out.certificate) {
            out.certificate = val;
            out.certificate_argmax = m;
        }
        const long M = index_M_alpha(alpha, d, m);
        if (M >= 1) {
            const double lhs = std::exp(-dm * alpha(M) / (128.0 * d));
            if (lhs > std::pow(dm + 1.0, -5.0) && out.exp_bound) {
                out.exp_bound = false;
                out.exp_witness_m = m;
            }
            if (f) {
                out.coeff_checked = true;
                double lo = std::numeric_limits<double>::infinity();
                for (long j = 1; j <= M; ++j) {
                    const double c = f->coefficient(static_cast<int>(j));
                    lo = std::min(lo, c * c);
                }
                if (lo < 2.0 / dm && out.coeff_floor) {
                    out.coeff_floor = false;
                    out.coeff_witness_m = m;
                }
            }
        } else {
            ++out.exp_vacuous;
        }
    }
    for (long n : n_grid) {
        const long N = index_N_alpha(omega, alpha, n);
        for (long j = 0; j <= N; ++j) {
            if (delta_alpha(static_cast<int>(j), omega, alpha, 3) >
                static_cast<double>(n) * (1.0 + 1e-12)) {
                if (out.delta_within_n) {
                    out.delta_within_n = false;
                    out.delta_witness_n = n;
                    out.delta_witness_j = static_cast<int>(j);
                }
            }
        }
    }
    return out;
}

} // namespace pdeconv
