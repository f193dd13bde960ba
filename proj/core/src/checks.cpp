#include "pdeconv/checks.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <ostream>
#include <sstream>
#include <vector>

#include "pdeconv/bench.hpp"
#include "pdeconv/estimate.hpp"
#include "pdeconv/fourier.hpp"
#include "pdeconv/models.hpp"
#include "pdeconv/select.hpp"
#include "pdeconv/simulate.hpp"

namespace pdeconv {

namespace {

struct Tap {
    std::ostream& os;
    int index = 0;
    int failures = 0;

    void run(const std::string& name, const std::function<bool(std::string&)>& body) {
        ++index;
        std::string detail;
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!ok) ++failures;
        os << (ok ? "ok " : "not ok ") << index << " - " << name;
        if (!ok && !detail.empty()) os << " # " << detail;
        os << "\n";
    }
};

std::vector<double> sample_on_grid(const FunctionSpec& f, int N) {
    std::vector<double> g(static_cast<std::size_t>(N));
    for (int l = 0; l < N; ++l) g[static_cast<std::size_t>(l)] = f(static_cast<double>(l) / N);
    return g;
}

// time-domain circular convolution on an equispaced grid, then quadrature
// coefficients of the result; the slow independent route
FourierVector conv_oracle(const FunctionSpec& a, const FunctionSpec& b, int K, int N) {
    const auto ga = sample_on_grid(a, N);
    const auto gb = sample_on_grid(b, N);
    std::vector<double> h(static_cast<std::size_t>(N), 0.0);
    for (int t = 0; t < N; ++t) {
        double acc = 0.0;
        for (int l = 0; l < N; ++l) {
            int idx = t - l;
            if (idx < 0) idx += N;
            acc += ga[static_cast<std::size_t>(idx)] * gb[static_cast<std::size_t>(l)];
        }
        h[static_cast<std::size_t>(t)] = acc / N;
    }
    return coeffs_by_quadrature([&h, N](double t) { return h[static_cast<std::size_t>(
                                    static_cast<int>(t * N + 0.5)) % static_cast<std::size_t>(N)]; },
                                K, N);
}

std::vector<FunctionSpec> all_intensities() {
    return {FunctionSpec::make(Role::Intensity, Family::Uniform, {.tau = 5.0}),
            FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 5.0, .beta = 0.5}),
            FunctionSpec::make(Role::Intensity, Family::PoissonKernel, {.tau = 5.0, .rate = 0.7}),
            FunctionSpec::make(Role::Intensity, Family::YoungPol, {.tau = 5.0, .q = 2.0, .J = 64})};
}

std::vector<FunctionSpec> all_errors() {
    return {FunctionSpec::make(Role::ErrorDensity, Family::Uniform, {}),
            FunctionSpec::make(Role::ErrorDensity, Family::Cosine, {.beta = 0.5}),
            FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7}),
            FunctionSpec::make(Role::ErrorDensity, Family::YoungPol, {.q = 2.0, .J = 64})};
}

} // namespace

int run_check_suite(std::ostream& os) {
    Tap tap{os};

    tap.run("basis discrete orthogonality", [](std::string& detail) {
        const int K = 8, N = 4 * K + 4;
        for (int j = -K; j <= K; ++j)
            for (int k = -K; k <= K; ++k) {
                std::complex<double> acc{0.0, 0.0};
                for (int l = 0; l < N; ++l) {
                    const double t = static_cast<double>(l) / N;
                    acc += eval_basis(j, t) * std::conj(eval_basis(k, t));
                }
                acc /= static_cast<double>(N);
                const double want = j == k ? 1.0 : 0.0;
                if (std::abs(acc - want) > 1e-10) {
                    detail = "pair (" + std::to_string(j) + "," + std::to_string(k) + ")";
                    return false;
                }
            }
        return true;
    });

    tap.run("quadrature coefficients are Hermitian for real input", [](std::string&) {
        const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
        const auto v = coeffs_by_quadrature([&f](double t) { return f(t); }, 16, 256);
        return v.hermitian_defect() < 1e-12;
    });

    tap.run("closed-form coefficients match quadrature, |j| <= 32", [](std::string& detail) {
        for (const auto& spec : all_intensities()) {
            const auto q = coeffs_by_quadrature([&spec](double t) { return spec(t); }, 32, 4096);
            for (int j = -32; j <= 32; ++j)
                if (std::abs(q.at(j) - spec.coefficient(j)) > 1e-8) {
                    detail = spec.describe() + " at j=" + std::to_string(j);
                    return false;
                }
        }
        return true;
    });

    tap.run("error densities integrate to one", [](std::string& detail) {
        for (const auto& f : all_errors()) {
            const auto q = coeffs_by_quadrature([&f](double t) { return f(t); }, 0, 4096);
            if (std::abs(q.at(0) - 1.0) > 1e-8) {
                detail = f.describe();
                return false;
            }
        }
        return true;
    });

    tap.run("convolution theorem vs grid convolution", [](std::string& detail) {
        const auto ints = all_intensities();
        const auto errs = all_errors();
        for (const auto& a : ints)
            for (const auto& b : errs) {
                const int K = 16;
                const auto product = convolve(a.coefficients(K), b.coefficients(K));
                const auto oracle = conv_oracle(a, b, K, 2048);
                for (int j = -K; j <= K; ++j)
                    if (std::abs(product.at(j) - oracle.at(j)) > 1e-8) {
                        detail = a.describe() + " * " + b.describe() + " at j=" + std::to_string(j);
                        return false;
                    }
            }
        return true;
    });

    tap.run("flat-weight norm equals squared integral (Parseval)", [](std::string&) {
        const auto f = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 3.0, .beta = 0.4});
        const double norm2 = weighted_norm_sq(f.coefficients(4), WeightSequence::flat());
        const int N = 4096;
        double quad = 0.0;
        for (int l = 0; l < N; ++l) {
            const double v = f(static_cast<double>(l) / N);
            quad += v * v;
        }
        quad /= N;
        return std::abs(norm2 - quad) < 1e-8;
    });

    tap.run("poisson kernel pointwise formula vs synthesis", [](std::string&) {
        const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
        const auto v = f.coefficients(160);
        for (int i = 0; i < 64; ++i) {
            const double t = static_cast<double>(i) / 64.0;
            if (std::abs(synthesize(v, t) - f(t)) > 1e-10) return false;
        }
        return true;
    });

    tap.run("young_pol density stays nonnegative on the grid", [](std::string&) {
        const auto f = FunctionSpec::make(Role::ErrorDensity, Family::YoungPol, {.q = 2.0, .J = 64});
        for (int l = 0; l < 4096; ++l)
            if (f(static_cast<double>(l) / 4096) < 0.0) return false;
        return true;
    });

    tap.run("process counts follow the total-mass law", [](std::string& detail) {
        const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 50.0, .beta = 0.5});
        Rng rng(424242);
        const int R = 2000;
        double s = 0.0, ss = 0.0;
        for (int r = 0; r < R; ++r) {
            const auto c = static_cast<double>(sample_ppp(lam, rng).size());
            s += c;
            ss += c * c;
        }
        const double mean = s / R;
        const double var = (ss - s * s / R) / (R - 1);
        const double se = std::sqrt(50.0 / R);
        if (std::abs(mean - 50.0) > 4 * se) {
            detail = "mean " + std::to_string(mean);
            return false;
        }
        if (std::abs(var - 50.0) > 0.1 * 50.0) {
            detail = "variance " + std::to_string(var);
            return false;
        }
        return true;
    });

    tap.run("contamination preserves cardinality and the unit interval", [](std::string&) {
        const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 30.0, .beta = 0.5});
        const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
        Rng rng(7);
        const auto pat = sample_ppp(lam, rng);
        const auto out = contaminate(pat, f, rng);
        if (out.size() != pat.size()) return false;
        for (double x : out.points)
            if (!(x >= 0.0 && x < 1.0)) return false;
        return true;
    });

    tap.run("split then merge restores the pattern", [](std::string&) {
        const auto lam = FunctionSpec::make(Role::Intensity, Family::PoissonKernel,
                                            {.tau = 40.0, .rate = 0.7});
        Rng rng(99);
        const auto pat = sample_ppp(lam, rng);
        const auto back = merge(split(pat, 5, rng));
        return back.points == pat.points;
    });

    tap.run("identical seeds give identical datasets", [](std::string&) {
        const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 20.0, .beta = 0.3});
        const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
        const auto a = simulate_dataset(lam, f, 10, 50, 2024, 3);
        const auto b = simulate_dataset(lam, f, 10, 50, 2024, 3);
        if (a.error_sample != b.error_sample) return false;
        for (std::size_t i = 0; i < a.processes.size(); ++i)
            if (a.processes[i].points != b.processes[i].points) return false;
        return true;
    });

    tap.run("empirical process coefficients are unbiased (quick run)", [](std::string& detail) {
        const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 50.0, .beta = 0.5});
        const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
        const int R = 400, n = 20, K = 2;
        std::vector<std::complex<double>> sum(K + 1);
        std::vector<double> sq(K + 1, 0.0);
        for (int r = 0; r < R; ++r) {
            const auto ds = simulate_dataset(lam, f, n, 1, 515151, static_cast<std::uint64_t>(r));
            const auto ell = empirical_ell(ds.processes, K);
            for (int j = 0; j <= K; ++j) {
                sum[static_cast<std::size_t>(j)] += ell.at(j);
                sq[static_cast<std::size_t>(j)] += std::norm(ell.at(j));
            }
        }
        for (int j = 0; j <= K; ++j) {
            const auto s = static_cast<std::size_t>(j);
            const auto mean = sum[s] / static_cast<double>(R);
            const double truth = lam.coefficient(j) * f.coefficient(j);
            const double var = (sq[s] - std::norm(sum[s]) / R) / (R - 1);
            const double se = std::sqrt(std::max(var, 1e-30) / R);
            if (std::abs(mean - truth) > 4.0 * se + 1e-12) {
                detail = "j=" + std::to_string(j);
                return false;
            }
        }
        return true;
    });

    tap.run("contrast identity and projection optimality", [](std::string& detail) {
        const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 50.0, .beta = 0.5});
        const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
        const auto ds = simulate_dataset(lam, f, 50, 500, 31337, 0);
        const auto emp = empirical_coeffs(ds, 12);
        const auto omega = WeightSequence::flat();
        const auto reference = series_estimator(emp, emp.window());
        for (int k = 0; k <= 6; ++k) {
            const auto lam_k = series_estimator(emp, k);
            const double by_def = contrast_by_definition(reference, lam_k, omega);
            const double collapsed = -weighted_norm_sq(lam_k, omega);
            if (std::abs(by_def - collapsed) > 1e-10) {
                detail = "identity at k=" + std::to_string(k);
                return false;
            }
            auto perturbed = lam_k;
            perturbed.set(std::min(k, 1), lam_k.at(std::min(k, 1)) + 0.1);
            if (contrast_by_definition(reference, perturbed, omega) <= by_def) {
                detail = "perturbation did not increase the contrast";
                return false;
            }
        }
        return true;
    });

    tap.run("selection bounds hold on randomized runs", [](std::string& detail) {
        Rng rng(606060);
        const auto omega = WeightSequence::flat();
        const auto alpha = WeightSequence::exponential(-0.7);
        for (int trial = 0; trial < 30; ++trial) {
            const long n = 1 + static_cast<long>(rng.uniform01() * 60);
            const long m = 1 + static_cast<long>(rng.uniform01() * 60);
            const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine,
                                                {.tau = 5.0 + 40.0 * rng.uniform01(),
                                                 .beta = rng.uniform01() * 0.9});
            const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
            const auto ds = simulate_dataset(lam, f, n, m, rng.next_u64(), 0);
            const auto emp = empirical_coeffs(ds, static_cast<int>(std::min(n, m)));
            for (const auto& res :
                 {partial_adaptive(emp, omega, alpha, 1.0, ConstantsMode::Paper()),
                  full_adaptive(emp, omega, ConstantsMode::Paper())}) {
                if (!(0 <= res.k_selected && res.k_selected <= res.K_cap &&
                      res.K_cap <= std::min(n, m))) {
                    detail = res.mode + " trial " + std::to_string(trial);
                    return false;
                }
            }
        }
        return true;
    });

    tap.run("never-binding cap scans return the documented edge values", [](std::string& detail) {
        const auto omega = WeightSequence::flat();
        const auto alpha = WeightSequence::exponential(-0.7);
        const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
        const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 10.0, .beta = 0.5});
        {
            const auto ds = simulate_dataset(lam, f, 5, 1, 11, 0);
            const auto emp = empirical_coeffs(ds, 1);
            const auto res = full_adaptive(emp, omega, ConstantsMode::Paper());
            if (res.M_bound != 1) {
                detail = "m=1 cap " + std::to_string(res.M_bound);
                return false;
            }
        }
        {
            const auto ds = simulate_dataset(lam, f, 1, 50, 12, 0);
            const auto emp = empirical_coeffs(ds, 1);
            const auto res = partial_adaptive(emp, omega, alpha, 1.0, ConstantsMode::Paper());
            if (res.N_bound != 0 || res.k_selected != 0) {
                detail = "n=1 selection";
                return false;
            }
        }
        return true;
    });

    tap.run("penalty index facts on small grids", [](std::string& detail) {
        const auto omega = WeightSequence::flat();
        for (const auto& alpha :
             {WeightSequence::pol(-1.0), WeightSequence::exponential(-0.7)}) {
            std::vector<long> ngrid, mgrid;
            for (long n = 1; n <= 2000; n += 7) ngrid.push_back(n);
            for (long m = 1; m <= 5000; m += 13) mgrid.push_back(m);
            const auto rep = check_assumption_fully(omega, alpha, 1.0, ngrid, mgrid, nullptr);
            if (!rep.delta_within_n || !rep.exp_bound) {
                detail = alpha.describe();
                return false;
            }
        }
        return true;
    });

    tap.run("threshold exclusion frequency respects the class bound", [](std::string& detail) {
        const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
        const auto alpha = WeightSequence::exponential(-0.7);
        const int R = 500;
        const long m = 200;
        for (int j = 1; j <= 3; ++j) {
            long fails = 0;
            for (int r = 0; r < R; ++r) {
                Rng rng = Rng::substream(818181, static_cast<std::uint64_t>(r), stream_role::errors);
                const auto ys = sample_errors(f, m, rng);
                const auto ef = empirical_f(ys, j);
                if (!ef.flags[static_cast<std::size_t>(j)]) ++fails;
            }
            const double freq = static_cast<double>(fails) / R;
            const double bound = std::min(1.0, 4.0 / (static_cast<double>(m) * alpha(j)));
            const double se = std::sqrt(freq * (1.0 - freq) / R);
            if (freq > bound + 4.0 * se + 1e-12) {
                detail = "j=" + std::to_string(j);
                return false;
            }
        }
        return true;
    });

    tap.run("fixed-k risk dominates the squared bias", [](std::string& detail) {
        ExperimentConfig cfg{
            FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 50.0, .beta = 0.5}),
            FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7}),
            IntensityClass::make(WeightSequence::pol(1.0), 700.0),
            ErrorClass::make(WeightSequence::exponential(-0.7), 1.0),
            WeightSequence::flat(),
            {60},
            {400},
            150,
            990099,
            {EstimatorSpec{EstimatorSpec::Kind::Fixed, 0},
             EstimatorSpec{EstimatorSpec::Kind::Fixed, 1},
             EstimatorSpec{EstimatorSpec::Kind::Fixed, 4}},
            ConstantsMode::Paper(),
            16,
            64,
            {},
            false};
        cfg.validate();
        const auto records = run_experiment(cfg);
        for (const auto& rec : records) {
            int k = 0;
            std::sscanf(rec.estimator.c_str(), "fixed(%d)", &k);
            double bias = 0.0;
            for (int j = k + 1; j <= 64; ++j) {
                const double c = cfg.intensity.coefficient(j);
                bias += 2.0 * c * c;
            }
            if (rec.mean_risk < bias - 4.0 * rec.std_error) {
                detail = rec.estimator;
                return false;
            }
        }
        return true;
    });

    tap.run("log-log slope recovery on an exact power law", [](std::string&) {
        std::vector<double> x, y;
        for (double n : {1e3, 1e4, 1e5, 1e6, 1e7}) {
            x.push_back(n);
            y.push_back(std::pow(n, -0.4));
        }
        const auto fit = slope_regression(x, y);
        return std::abs(fit.slope + 0.4) < 1e-12 && fit.half_width < 1e-12;
    });

    os << "1.." << tap.index << "\n";
    return tap.failures;
}

} // namespace pdeconv
