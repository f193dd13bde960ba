#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <sstream>

#include "pdeconv/fourier.hpp"
#include "pdeconv/models.hpp"
#include "pdeconv/rng.hpp"
#include "test_support.hpp"

using namespace pdeconv;
using doctest::Approx;

namespace {
const std::complex<double> I{0.0, 1.0};
}

TEST_CASE("basis evaluation at reference points") {
    CHECK(std::abs(eval_basis(0, 0.7) - 1.0) < 1e-15);
    CHECK(std::abs(eval_basis(1, 0.25) - I) < 1e-15);
    CHECK(std::abs(eval_basis(-2, 0.5) - 1.0) < 1e-15);
    CHECK(std::abs(eval_basis(7, 0.3)) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("quadrature coefficients of a constant") {
    const auto v = coeffs_by_quadrature([](double) { return 3.5; }, 2, 64);
    CHECK(v.at(0).real() == Approx(3.5).epsilon(1e-12));
    for (int j : {-2, -1, 1, 2}) CHECK(std::abs(v.at(j)) < 1e-12);
}

TEST_CASE("quadrature coefficients of a cosine") {
    const auto v = coeffs_by_quadrature([](double t) { return std::cos(2 * std::numbers::pi * t); },
                                        1, 64);
    CHECK(std::abs(v.at(-1) - 0.5) < 1e-12);
    CHECK(std::abs(v.at(0)) < 1e-12);
    CHECK(std::abs(v.at(1) - 0.5) < 1e-12);
}

TEST_CASE("quadrature matches the geometric coefficient rule") {
    const double r = 0.5;
    const auto spec = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel,
                                         {.rate = -std::log(r)});
    const auto v = coeffs_by_quadrature([&spec](double t) { return spec(t); }, 4, 4096);
    for (int j = -4; j <= 4; ++j)
        CHECK(std::abs(v.at(j) - std::pow(r, std::abs(j))) < 1e-10);
}

TEST_CASE("quadrature rejects too few nodes") {
    CHECK_THROWS_AS(coeffs_by_quadrature([](double) { return 1.0; }, 8, 20),
                    std::invalid_argument);
}

TEST_CASE("quadrature output is Hermitian for real input") {
    const auto spec = FunctionSpec::make(Role::ErrorDensity, Family::YoungPol, {.q = 2.0, .J = 16});
    const auto v = coeffs_by_quadrature([&spec](double t) { return spec(t); }, 16, 256);
    CHECK(v.hermitian_defect() < 1e-12);
}

TEST_CASE("discrete orthogonality of the basis") {
    const int K = 6, N = 4 * K + 4;
    for (int j = -K; j <= K; ++j)
        for (int k = -K; k <= K; ++k) {
            std::complex<double> acc{0.0, 0.0};
            for (int l = 0; l < N; ++l)
                acc += eval_basis(j, static_cast<double>(l) / N) *
                       std::conj(eval_basis(k, static_cast<double>(l) / N));
            acc /= static_cast<double>(N);
            CHECK(std::abs(acc - (j == k ? 1.0 : 0.0)) < 1e-10);
        }
}

TEST_CASE("weighted norm on explicit vectors") {
    FourierVector v(1, true);
    v.set(0, {2.0, 0.0});
    CHECK(weighted_norm_sq(v, WeightSequence::flat()) == Approx(4.0));

    v.set(1, {0.5, 0.0});
    CHECK(weighted_norm_sq(v, WeightSequence::pol(1.0)) == Approx(4.5));
}

TEST_CASE("flat-weight norm equals the squared integral") {
    // random Hermitian window, synthesized back to a function
    Rng rng(11);
    FourierVector v(5, true);
    for (int j = 0; j <= 5; ++j)
        v.set(j, {rng.uniform01() - 0.5, j == 0 ? 0.0 : rng.uniform01() - 0.5});
    const int N = 4096;
    double quad = 0.0;
    for (int l = 0; l < N; ++l) {
        const double g = synthesize(v, static_cast<double>(l) / N);
        quad += g * g;
    }
    quad /= N;
    CHECK(weighted_norm_sq(v, WeightSequence::flat()) == Approx(quad).epsilon(1e-8));
}

TEST_CASE("convolution with the uniform density flattens") {
    const auto a = FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 7.0, .beta = 0.4})
                       .coefficients(3);
    const auto b = FunctionSpec::make(Role::ErrorDensity, Family::Uniform, {}).coefficients(3);
    const auto c = convolve(a, b);
    CHECK(c.at(0).real() == Approx(7.0));
    for (int j : {-3, -2, -1, 1, 2, 3}) CHECK(std::abs(c.at(j)) < 1e-15);
}

TEST_CASE("convolution of two geometric kernels multiplies decay") {
    const double r = 0.5;
    const auto a = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel,
                                      {.rate = -std::log(r)});
    const auto c = convolve(a.coefficients(6), a.coefficients(6));
    for (int j = -6; j <= 6; ++j)
        CHECK(c.at(j).real() == Approx(std::pow(0.25, std::abs(j))).epsilon(1e-12));
}

TEST_CASE("coefficient product matches the time-domain convolution") {
    const auto a = FunctionSpec::make(Role::Intensity, Family::YoungPol,
                                      {.tau = 4.0, .q = 2.0, .J = 32});
    const auto b = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
    const int N = 2048, K = 16;
    const auto h = testsupport::grid_convolution(testsupport::grid_values(a, N),
                                                 testsupport::grid_values(b, N));
    const auto product = convolve(a.coefficients(K), b.coefficients(K));
    for (int j = -K; j <= K; ++j)
        CHECK(std::abs(product.at(j) - testsupport::naive_coeff(h, j)) < 1e-8);
}

TEST_CASE("synthesis of reference vectors") {
    FourierVector constant(0, true);
    constant.set(0, {2.5, 0.0});
    CHECK(synthesize(constant, 0.123) == Approx(2.5));

    FourierVector cosine(1, true);
    cosine.set(1, {0.5, 0.0});
    CHECK(synthesize(cosine, 0.0) == Approx(1.0));

    const double r = 0.5;
    const auto kernel = FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel,
                                           {.rate = -std::log(r)});
    CHECK(synthesize(kernel.coefficients(120), 0.0) == Approx(3.0).epsilon(1e-10));
}

TEST_CASE("real synthesis rejects a broken Hermitian window") {
    FourierVector v(1, true);
    v.set(1, {0.0, 0.4});
    v.set_raw(-1, {0.0, 0.4}); // breaks the conjugate pairing
    CHECK_THROWS_AS(synthesize(v, 0.2), std::runtime_error);
}

TEST_CASE("weight sequences are symmetric, positive, with monotone running max") {
    Rng rng(3);
    const std::vector<WeightSequence> ws = {
        WeightSequence::flat(), WeightSequence::pol(1.5), WeightSequence::pol(-0.8),
        WeightSequence::exponential(0.4), WeightSequence::exponential(-0.9),
        WeightSequence::table({1.0, 0.5, 2.0, 0.25})};
    for (const auto& w : ws) {
        const long limit = w.table_limit() < 0 ? 40 : w.table_limit();
        double seen_max = 0.0, prev_running = 0.0;
        for (long j = 0; j <= limit; ++j) {
            CHECK(w(j) > 0.0);
            CHECK(w(j) == w(-j));
            seen_max = std::max(seen_max, w(j));
            CHECK(w.running_max(j) == seen_max);
            CHECK(w.running_max(j) >= prev_running);
            prev_running = w.running_max(j);
        }
    }
    CHECK_THROWS_AS(WeightSequence::table({1.0, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(WeightSequence::table({1.0, 0.5})(5), std::out_of_range);
}

TEST_CASE("coefficient CSV round trip") {
    Rng rng(5);
    FourierVector v(4, false);
    for (int j = -4; j <= 4; ++j) v.set_raw(j, {rng.uniform01(), rng.uniform01() - 0.5});
    std::stringstream ss;
    v.to_csv(ss);
    const auto back = FourierVector::from_csv(ss);
    REQUIRE(back.max_index() == 4);
    for (int j = -4; j <= 4; ++j) CHECK(back.at(j) == v.at(j));
}
