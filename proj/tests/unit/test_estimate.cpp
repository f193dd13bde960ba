#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "pdeconv/estimate.hpp"
#include "test_support.hpp"

using namespace pdeconv;
using doctest::Approx;

namespace {
const std::complex<double> I{0.0, 1.0};

EmpiricalCoeffs make_emp(std::vector<PointPattern> processes, std::vector<double> errors, int K) {
    Dataset ds;
    ds.processes = std::move(processes);
    ds.error_sample = std::move(errors);
    return empirical_coeffs(ds, K);
}
} // namespace

TEST_CASE("empirical process coefficients on tiny inputs") {
    const std::vector<PointPattern> one{PointPattern{{0.25}}};
    const auto ell = empirical_ell(one, 1);
    CHECK(ell.at(0).real() == Approx(1.0));
    CHECK(std::abs(ell.at(1) - (-I)) < 1e-15);
    CHECK(std::abs(ell.at(-1) - I) < 1e-15);

    const std::vector<PointPattern> two{PointPattern{}, PointPattern{{0.5}}};
    const auto ell2 = empirical_ell(two, 1);
    CHECK(ell2.at(0).real() == Approx(0.5));
    CHECK(ell2.at(1).real() == Approx(-0.5));
    CHECK(std::abs(ell2.at(1).imag()) < 1e-15);
}

TEST_CASE("empty process list is rejected, empty patterns are fine") {
    CHECK_THROWS_AS(empirical_ell({}, 2), std::invalid_argument);
    const std::vector<PointPattern> empties{PointPattern{}, PointPattern{}};
    const auto ell = empirical_ell(empties, 2);
    for (int j = -2; j <= 2; ++j) CHECK(std::abs(ell.at(j)) == 0.0);
}

TEST_CASE("error coefficients and threshold flags") {
    const std::vector<double> zeros{0.0, 0.0, 0.0};
    const auto ef = empirical_f(zeros, 3);
    for (int j = 0; j <= 3; ++j) {
        CHECK(std::abs(ef.fhat.at(j) - 1.0) < 1e-15);
        CHECK(ef.flags[static_cast<std::size_t>(j)]);
    }

    // single observation: |fhat_1|^2 = 1 = 1/m, the boundary is inclusive
    const std::vector<double> single{0.25};
    const auto ef1 = empirical_f(single, 1);
    CHECK(std::abs(ef1.fhat.at(1) - (-I)) < 1e-15);
    CHECK(ef1.flags[1]);

    // four equispaced observations cancel the first coefficient exactly
    const std::vector<double> four{0.0, 0.25, 0.5, 0.75};
    const auto ef4 = empirical_f(four, 1);
    CHECK(std::abs(ef4.fhat.at(1)) < 1e-15);
    CHECK_FALSE(ef4.flags[1]);

    CHECK_THROWS_AS(empirical_f({}, 1), std::invalid_argument);
}

TEST_CASE("series estimator applies the threshold and the division") {
    auto emp = make_emp({PointPattern{{0.25}}}, {0.0, 0.0}, 2);
    // errors at zero mean fhat == 1, all flags set
    const auto k0 = series_estimator(emp, 0);
    CHECK(k0.max_index() == 0);
    CHECK(k0.at(0).real() == Approx(1.0));

    const auto k1 = series_estimator(emp, 1);
    CHECK(std::abs(k1.at(1) - (-I)) < 1e-14);

    // force the flag off at |j| = 1 with the equispaced sample
    auto blocked = make_emp({PointPattern{{0.25}}}, {0.0, 0.25, 0.5, 0.75}, 1);
    const auto est = series_estimator(blocked, 1);
    CHECK(std::abs(est.at(1)) == 0.0);
    CHECK(std::abs(est.at(-1)) == 0.0);
    CHECK(est.at(0).real() == Approx(1.0));

    CHECK_THROWS_AS(series_estimator(emp, 5), std::invalid_argument);
}

TEST_CASE("zero-order estimate is the average point count") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 30.0, .beta = 0.5});
    const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
    const auto ds = simulate_dataset(lam, f, 25, 100, 99, 0);
    const auto emp = empirical_coeffs(ds, 4);
    const auto est = series_estimator(emp, 0);
    const double avg = static_cast<double>(merge(ds.processes).size()) / 25.0;
    CHECK(est.at(0).real() == Approx(avg).epsilon(1e-12));
}

TEST_CASE("risk of the exact truth is zero") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 2.0, .beta = 0.5});
    const auto risk = exact_risk(lam.coefficients(3), lam, WeightSequence::flat(), 16);
    CHECK(risk.total == Approx(0.0));
}

TEST_CASE("risk of a truncated estimate is the missing weighted mass") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 2.0, .beta = 0.5});
    FourierVector est(0, true);
    est.set(0, {2.0, 0.0});
    const auto risk = exact_risk(est, lam, WeightSequence::flat(), 16);
    CHECK(risk.total == Approx(0.5)); // two coefficients of 0.5 each, squared
    CHECK(risk.head == Approx(0.0));
    CHECK(risk.mid == Approx(0.5));
}

TEST_CASE("risk against a geometric truth includes the certified tail") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::PoissonKernel,
                                        {.tau = 1.0, .rate = std::log(2.0)}); // r = 1/2
    FourierVector zero(0, true);
    zero.set(0, {0.0, 0.0});
    const auto risk = exact_risk(zero, lam, WeightSequence::flat(), 40);
    CHECK(risk.total == Approx(5.0 / 3.0).epsilon(1e-12));
    CHECK(risk.tail_bound > 0.0);

    // the bound must cover the caught-off mass: shrinking tail_K only grows the total
    const auto rough = exact_risk(zero, lam, WeightSequence::flat(), 5);
    CHECK(rough.total >= 5.0 / 3.0 - 1e-12);
}

TEST_CASE("risk rejects undecidable tails") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::PoissonKernel,
                                        {.tau = 1.0, .rate = 0.5});
    FourierVector zero(0, true);
    CHECK_THROWS_AS(exact_risk(zero, lam, WeightSequence::table({1.0, 2.0, 2.0}), 8),
                    std::invalid_argument);
    CHECK_THROWS_AS(exact_risk(zero, lam, WeightSequence::exponential(0.5), 8),
                    std::invalid_argument);
    CHECK_THROWS_AS(exact_risk(lam.coefficients(4), lam, WeightSequence::flat(), 2),
                    std::invalid_argument);
}

TEST_CASE("empirical coefficients are unbiased for the product") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 50.0, .beta = 0.5});
    const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
    const int R = 600, n = 50, K = 2;
    std::vector<std::vector<std::complex<double>>> samples(K + 1);
    for (int r = 0; r < R; ++r) {
        const auto ds = simulate_dataset(lam, f, n, 1, 1001, static_cast<std::uint64_t>(r));
        const auto ell = empirical_ell(ds.processes, K);
        for (int j = 0; j <= K; ++j) samples[static_cast<std::size_t>(j)].push_back(ell.at(j));
    }
    for (int j = 0; j <= K; ++j) {
        const auto m = testsupport::complex_moments(samples[static_cast<std::size_t>(j)]);
        const double target = lam.coefficient(j) * f.coefficient(j);
        CHECK(std::abs(m.mean.real() - target) <= 4.0 * m.se_re + 1e-12);
        CHECK(std::abs(m.mean.imag()) <= 4.0 * m.se_im + 1e-12);
    }
}

TEST_CASE("variance identities of the empirical coefficients") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 50.0, .beta = 0.5});
    const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
    const int R = 2000, n = 50, m = 200, K = 3;
    std::vector<std::vector<std::complex<double>>> ells(K + 1), fhs(K + 1);
    for (int r = 0; r < R; ++r) {
        const auto ds = simulate_dataset(lam, f, n, m, 2002, static_cast<std::uint64_t>(r));
        const auto emp = empirical_coeffs(ds, K);
        for (int j = 0; j <= K; ++j) {
            ells[static_cast<std::size_t>(j)].push_back(emp.ellhat.at(j));
            fhs[static_cast<std::size_t>(j)].push_back(emp.fhat.at(j));
        }
    }
    for (int j = 0; j <= K; ++j) {
        const double ell_var = testsupport::complex_moments(ells[static_cast<std::size_t>(j)]).variance;
        CHECK(std::abs(ell_var - 50.0 / n) <= 0.10 * 50.0 / n);
        const double f_var = testsupport::complex_moments(fhs[static_cast<std::size_t>(j)]).variance;
        const double cf = f.coefficient(j);
        const double exact = (1.0 - cf * cf) / m;
        CHECK(std::abs(f_var - exact) <= 0.10 * exact + 1e-12);
    }
}

TEST_CASE("threshold exclusion frequency stays under the class bound") {
    const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
    const int R = 800;
    const long m = 100;
    for (int j = 1; j <= 4; ++j) {
        long fails = 0;
        for (int r = 0; r < R; ++r) {
            Rng rng = Rng::substream(515, static_cast<std::uint64_t>(r), stream_role::errors);
            const auto ys = sample_errors(f, m, rng);
            if (!empirical_f(ys, j).flags[static_cast<std::size_t>(j)]) ++fails;
        }
        const double freq = static_cast<double>(fails) / R;
        const double alpha_j = std::exp(-1.4 * j);
        const double bound = std::min(1.0, 4.0 / (static_cast<double>(m) * alpha_j));
        const double se = std::sqrt(freq * (1.0 - freq) / R);
        CHECK(freq <= bound + 4.0 * se + 1e-12);
    }
}

TEST_CASE("estimator output is Hermitian on random data") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::YoungPol,
                                        {.tau = 35.0, .q = 2.0, .J = 64});
    const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.4});
    for (std::uint64_t rep = 0; rep < 10; ++rep) {
        const auto ds = simulate_dataset(lam, f, 15, 60, 333, rep);
        const auto emp = empirical_coeffs(ds, 8);
        CHECK(emp.ellhat.hermitian_defect() == 0.0);
        CHECK(emp.fhat.hermitian_defect() == 0.0);
        CHECK(emp.ellhat.at(0).imag() == 0.0);
        CHECK(emp.ellhat.at(0).real() >= 0.0);
        const auto est = series_estimator(emp, 5);
        CHECK(est.hermitian_defect() == 0.0);
    }
}

TEST_CASE("estimator sidecar records the selection inputs") {
    auto emp = make_emp({PointPattern{{0.25}}}, {0.0, 0.25, 0.5, 0.75}, 1);
    const auto text = estimator_sidecar_json(emp, 1);
    CHECK(text.find("\"n\":1") != std::string::npos);
    CHECK(text.find("\"m\":4") != std::string::npos);
    CHECK(text.find("\"flags\":[1,0]") != std::string::npos);
}
