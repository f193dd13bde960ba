#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pdeconv {

enum class WeightKind { Flat, Pol, Exp, Table };

/// Symmetric, strictly positive coefficient weight sequence w(j) = w(-j).
///
/// The built-in kinds evaluate in closed form:
///   flat           w(j) = 1
///   pol(e)         w(j) = |j|^(2e) for j != 0, w(0) = 1
///   exponential(p) w(j) = exp(2p|j|)
/// Negative exponents/rates give decaying sequences. A table holds explicit
/// values for j = 0..L and refuses evaluation beyond its window.
class WeightSequence {
public:
    static WeightSequence flat() { return WeightSequence(WeightKind::Flat, 0.0, {}); }

    static WeightSequence pol(double exponent) {
        return WeightSequence(WeightKind::Pol, exponent, {});
    }

    static WeightSequence exponential(double rate) {
        return WeightSequence(WeightKind::Exp, rate, {});
    }

    /// values[i] is w(i) = w(-i); all entries must be strictly positive.
    static WeightSequence table(std::vector<double> values) {
        if (values.empty())
            throw std::invalid_argument("weight table must not be empty");
        for (double v : values)
            if (!(v > 0.0))
                throw std::invalid_argument("weight table entries must be strictly positive");
        return WeightSequence(WeightKind::Table, 0.0, std::move(values));
    }

    double operator()(long j) const;

    /// max over 0 <= i <= |j| of w(i).
    double running_max(long j) const;

    WeightKind kind() const { return kind_; }
    double param() const { return param_; }

    /// Largest evaluable index for tables, -1 when unbounded.
    long table_limit() const {
        return kind_ == WeightKind::Table ? static_cast<long>(values_.size()) - 1 : -1;
    }

    std::string describe() const;

private:
    WeightSequence(WeightKind k, double p, std::vector<double> v)
        : kind_(k), param_(p), values_(std::move(v)) {}

    WeightKind kind_;
    double param_;
    std::vector<double> values_;
};

} // namespace pdeconv
