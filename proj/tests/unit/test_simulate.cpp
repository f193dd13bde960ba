#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pdeconv/estimate.hpp"
#include "pdeconv/simulate.hpp"
#include "test_support.hpp"

using namespace pdeconv;
using doctest::Approx;
using testsupport::StubRng;

TEST_CASE("zero count gives an empty pattern") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::Uniform, {.tau = 3.0});
    StubRng stub{{0.01}}; // below exp(-3), the inversion stops at zero
    const auto pat = sample_ppp(lam, stub);
    CHECK(pat.size() == 0);
}

TEST_CASE("count law of the process sampler") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::Uniform, {.tau = 50.0});
    Rng rng(321);
    const int R = 5000;
    std::vector<double> counts;
    counts.reserve(R);
    for (int r = 0; r < R; ++r) counts.push_back(static_cast<double>(sample_ppp(lam, rng).size()));
    const auto m = testsupport::moments(counts);
    CHECK(std::abs(m.mean - 50.0) <= 4.0 * std::sqrt(50.0 / R));
    CHECK(std::abs(m.variance - 50.0) <= 0.1 * 50.0);
}

TEST_CASE("location distribution matches the normalized intensity") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 50.0, .beta = 0.9});
    Rng rng(777);
    const int bins = 64, R = 2000;
    std::vector<long> observed(bins, 0);
    long total = 0;
    for (int r = 0; r < R; ++r)
        for (double x : sample_ppp(lam, rng).points) {
            ++observed[static_cast<std::size_t>(x * bins)];
            ++total;
        }
    // exact bin probabilities of the normalized intensity
    double stat = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double a = static_cast<double>(b) / bins, c = static_cast<double>(b + 1) / bins;
        const double p = (c - a) + 0.9 * (std::sin(2 * std::numbers::pi * c) -
                                          std::sin(2 * std::numbers::pi * a)) /
                                       (2 * std::numbers::pi);
        const double expected = static_cast<double>(total) * p;
        stat += (observed[static_cast<std::size_t>(b)] - expected) *
                (observed[static_cast<std::size_t>(b)] - expected) / expected;
    }
    CHECK(testsupport::chi_square_pvalue(stat, bins - 1) > 0.001);
}

TEST_CASE("contamination wraps around the circle") {
    const auto uniform = FunctionSpec::make(Role::ErrorDensity, Family::Uniform, {});
    PointPattern pat{{0.9}};
    StubRng stub{{0.2}}; // the single uniform error draw
    const auto out = contaminate(pat, uniform, stub);
    REQUIRE(out.size() == 1);
    CHECK(out.points[0] == Approx(0.1).epsilon(1e-15));
}

TEST_CASE("uniform contamination flattens the first empirical coefficient") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 30.0, .beta = 0.8});
    const auto uniform = FunctionSpec::make(Role::ErrorDensity, Family::Uniform, {});
    Rng rng(42);
    const int R = 2000;
    std::vector<std::complex<double>> ell1;
    for (int r = 0; r < R; ++r) {
        const auto noisy = contaminate(sample_ppp(lam, rng), uniform, rng);
        const std::vector<PointPattern> one{noisy};
        ell1.push_back(empirical_ell(one, 1).at(1));
    }
    const auto m = testsupport::complex_moments(ell1);
    CHECK(std::abs(m.mean.real()) <= 4.0 * m.se_re);
    CHECK(std::abs(m.mean.imag()) <= 4.0 * m.se_im);
}

TEST_CASE("contaminated process carries the product coefficients") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 50.0, .beta = 0.5});
    const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
    Rng rng(4242);
    const int R = 2000;
    std::vector<std::complex<double>> ell1;
    for (int r = 0; r < R; ++r) {
        const auto noisy = contaminate(sample_ppp(lam, rng), f, rng);
        const std::vector<PointPattern> one{noisy};
        ell1.push_back(empirical_ell(one, 1).at(1));
    }
    const auto m = testsupport::complex_moments(ell1);
    const double target = 12.5 * std::exp(-0.7);
    CHECK(std::abs(m.mean.real() - target) <= 4.0 * m.se_re);
    CHECK(std::abs(m.mean.imag()) <= 4.0 * m.se_im);
}

TEST_CASE("uniform error draws pass through the stub") {
    const auto uniform = FunctionSpec::make(Role::ErrorDensity, Family::Uniform, {});
    StubRng stub{{0.1, 0.4, 0.7, 0.9}};
    const auto ys = sample_errors(uniform, 4, stub);
    CHECK(ys == std::vector<double>{0.1, 0.4, 0.7, 0.9});
}

TEST_CASE("wrapped draws reproduce the geometric characteristic values") {
    const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
    Rng rng(31);
    const int m = 100000;
    const auto ys = sample_errors(f, m, rng);
    std::complex<double> acc{0.0, 0.0};
    for (double y : ys) acc += std::polar(1.0, -2.0 * std::numbers::pi * y);
    acc /= static_cast<double>(m);
    const double r = std::exp(-0.7);
    CHECK(std::abs(acc - r) <= 4.0 * std::sqrt((1.0 - r * r) / m));
}

TEST_CASE("rejection-sampled error draws match their first coefficient") {
    const auto f = FunctionSpec::make(Role::ErrorDensity, Family::YoungPol, {.q = 2.0, .J = 64});
    Rng rng(32);
    const int m = 100000;
    const auto ys = sample_errors(f, m, rng);
    std::complex<double> acc{0.0, 0.0};
    for (double y : ys) acc += std::polar(1.0, -2.0 * std::numbers::pi * y);
    acc /= static_cast<double>(m);
    CHECK(std::abs(acc - 0.25) <= 4.0 / std::sqrt(static_cast<double>(m)));
}

TEST_CASE("merge concatenates and sorts") {
    const auto merged = merge({PointPattern{{0.5}}, PointPattern{{0.1}}});
    CHECK(merged.points == std::vector<double>{0.1, 0.5});
}

TEST_CASE("split then merge restores the multiset") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::PoissonKernel,
                                        {.tau = 60.0, .rate = 0.7});
    Rng rng(8);
    const auto pat = sample_ppp(lam, rng);
    const auto buckets = split(pat, 7, rng);
    CHECK(merge(buckets).points == pat.points);
}

TEST_CASE("splitting thins the count law") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::Uniform, {.tau = 60.0});
    Rng rng(88);
    const int R = 3000;
    std::vector<double> bucket_counts;
    for (int r = 0; r < R; ++r) {
        const auto buckets = split(sample_ppp(lam, rng), 3, rng);
        for (const auto& b : buckets) bucket_counts.push_back(static_cast<double>(b.size()));
    }
    const auto m = testsupport::moments(bucket_counts);
    CHECK(std::abs(m.mean - 20.0) <= 4.0 * m.se);
    CHECK(std::abs(m.variance - 20.0) <= 0.1 * 20.0);
}

TEST_CASE("superposition of independent processes adds the count law") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::Uniform, {.tau = 10.0});
    Rng rng(9);
    const int R = 3000;
    std::vector<double> counts;
    for (int r = 0; r < R; ++r) {
        std::vector<PointPattern> parts;
        for (int i = 0; i < 4; ++i) parts.push_back(sample_ppp(lam, rng));
        counts.push_back(static_cast<double>(merge(parts).size()));
    }
    const auto m = testsupport::moments(counts);
    CHECK(std::abs(m.mean - 40.0) <= 4.0 * m.se);
    CHECK(std::abs(m.variance - 40.0) <= 0.1 * 40.0);
}

TEST_CASE("identical seeds reproduce the dataset bit for bit") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 25.0, .beta = 0.4});
    const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.5});
    const auto a = simulate_dataset(lam, f, 12, 40, 777, 5);
    const auto b = simulate_dataset(lam, f, 12, 40, 777, 5);
    REQUIRE(a.processes.size() == b.processes.size());
    for (std::size_t i = 0; i < a.processes.size(); ++i)
        CHECK(a.processes[i].points == b.processes[i].points);
    CHECK(a.error_sample == b.error_sample);

    const auto c = simulate_dataset(lam, f, 12, 40, 777, 6);
    CHECK(c.error_sample != a.error_sample);
}

TEST_CASE("dataset CSV round trip") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 15.0, .beta = 0.4});
    const auto f = FunctionSpec::make(Role::ErrorDensity, Family::Uniform, {});
    const auto ds = simulate_dataset(lam, f, 6, 17, 2025, 0);
    std::stringstream ss;
    write_dataset_csv(ss, ds);
    const auto back = read_dataset_csv(ss);
    REQUIRE(back.n() == ds.n());
    REQUIRE(back.m() == ds.m());
    for (long i = 0; i < ds.n(); ++i)
        CHECK(back.processes[static_cast<std::size_t>(i)].points ==
              ds.processes[static_cast<std::size_t>(i)].points);
    CHECK(back.error_sample == ds.error_sample);
}

TEST_CASE("all generated values live on the unit interval") {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::YoungPol,
                                        {.tau = 40.0, .q = 2.0, .J = 64});
    const auto f = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.3});
    const auto ds = simulate_dataset(lam, f, 20, 200, 12, 0);
    for (const auto& p : ds.processes) {
        CHECK(std::is_sorted(p.points.begin(), p.points.end()));
        for (double x : p.points) CHECK((x >= 0.0 && x < 1.0));
    }
    for (double y : ds.error_sample) CHECK((y >= 0.0 && y < 1.0));
}
