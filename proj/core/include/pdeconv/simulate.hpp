#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdeconv/models.hpp"
#include "pdeconv/rng.hpp"

namespace pdeconv {

/// One realization of a point process on [0,1); points kept sorted.
struct PointPattern {
    std::vector<double> points;

    std::size_t size() const { return points.size(); }
    void sort() { std::sort(points.begin(), points.end()); }
};

/// n observed processes plus the auxiliary error sample.
struct Dataset {
    std::vector<PointPattern> processes;
    std::vector<double> error_sample;
    std::uint64_t seed = 0;
    std::string intensity_id;
    std::string error_id;

    long n() const { return static_cast<long>(processes.size()); }
    long m() const { return static_cast<long>(error_sample.size()); }
};

inline double wrap_unit(double x) {
    double y = x - std::floor(x);
    return y < 1.0 ? y : 0.0; // floor rounding can land exactly on 1
}

// The samplers are templated on the generator so tests can script draws;
// any type with `double uniform01()` works.

/// Poisson count by inversion (sequential search). Exact for any mean; large
/// means are split into additive chunks to keep exp(-mean) in range.
template <class R>
long poisson_count(double mean, R& rng) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson mean must be >= 0");
    long total = 0;
    while (mean > 500.0) {
        total += poisson_count(500.0, rng);
        mean -= 500.0;
    }
    const double p0 = std::exp(-mean);
    double u = rng.uniform01();
    double p = p0, cdf = p0;
    long k = 0;
    while (u > cdf) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
        if (p == 0.0) break; // cdf saturated by rounding
    }
    return total + k;
}

/// One location with density spec/total_mass by rejection against the
/// uniform envelope; the acceptance bound is spec.sup_bound().
template <class R>
double rejection_sample(const FunctionSpec& spec, R& rng) {
    const double bound = spec.sup_bound();
    for (;;) {
        double t = rng.uniform01();
        if (rng.uniform01() * bound <= spec(t)) return t;
    }
}

/// Standard Cauchy scaled so that wrapping yields the poisson kernel
/// density with decay r = exp(-rate): scale = rate / (2 pi).
template <class R>
double wrapped_cauchy_draw(double rate, R& rng) {
    const double scale = rate / (2.0 * std::numbers::pi);
    double x = scale * std::tan(std::numbers::pi * (rng.uniform01() - 0.5));
    return wrap_unit(x);
}

template <class R>
double draw_from_density(const FunctionSpec& f, R& rng) {
    if (f.role() != Role::ErrorDensity)
        throw std::invalid_argument("draw_from_density needs an error density");
    switch (f.family()) {
    case Family::Uniform:
        return rng.uniform01();
    case Family::PoissonKernel:
        return wrapped_cauchy_draw(f.params().rate, rng);
    default:
        return rejection_sample(f, rng);
    }
}

/// Realization of a Poisson process: Poisson(total mass) many points,
/// locations i.i.d. with density lambda / total mass.
template <class R>
PointPattern sample_ppp(const FunctionSpec& intensity, R& rng) {
    if (intensity.role() != Role::Intensity)
        throw std::invalid_argument("sample_ppp needs an intensity spec");
    long count = poisson_count(intensity.total_mass(), rng);
    PointPattern out;
    out.points.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) out.points.push_back(rejection_sample(intensity, rng));
    out.sort();
    return out;
}

/// Shifts every point by an independent draw from f, modulo 1.
template <class R>
PointPattern contaminate(const PointPattern& pattern, const FunctionSpec& f, R& rng) {
    PointPattern out;
    out.points.reserve(pattern.points.size());
    for (double x : pattern.points) out.points.push_back(wrap_unit(x + draw_from_density(f, rng)));
    out.sort();
    return out;
}

template <class R>
std::vector<double> sample_errors(const FunctionSpec& f, long m, R& rng) {
    if (m < 1) throw std::invalid_argument("error sample size must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m));
    for (long i = 0; i < m; ++i) out.push_back(draw_from_density(f, rng));
    return out;
}

PointPattern merge(const std::vector<PointPattern>& patterns);

/// Assigns each point independently and uniformly to one of n buckets.
template <class R>
std::vector<PointPattern> split(const PointPattern& pattern, long n, R& rng) {
    if (n < 1) throw std::invalid_argument("split needs n >= 1");
    std::vector<PointPattern> out(static_cast<std::size_t>(n));
    for (double x : pattern.points) {
        auto b = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n));
        if (b >= out.size()) b = out.size() - 1;
        out[b].points.push_back(x);
    }
    for (auto& p : out) p.sort();
    return out;
}

/// Full observation scheme for one replication: n hidden processes with the
/// given intensity, contaminated by f, plus m auxiliary draws from f.
/// Substreams are derived from (seed, replicate), so datasets are identical
/// no matter how replications are scheduled.
Dataset simulate_dataset(const FunctionSpec& intensity, const FunctionSpec& error, long n,
                         long m, std::uint64_t seed, std::uint64_t replicate = 0);

/// CSV with header `kind,index,value`; kind is `point` (index = process
/// index) or `error` (index = draw index).
void write_dataset_csv(std::ostream& os, const Dataset& ds);
Dataset read_dataset_csv(std::istream& is);

} // namespace pdeconv
