#include "pdeconv/weights.hpp"

#include <cmath>
#include <cstdlib>

namespace pdeconv {

double WeightSequence::operator()(long j) const {
    const long a = std::labs(j);
    switch (kind_) {
    case WeightKind::Flat:
        return 1.0;
    case WeightKind::Pol:
        return a == 0 ? 1.0 : std::pow(static_cast<double>(a), 2.0 * param_);
    case WeightKind::Exp:
        return std::exp(2.0 * param_ * static_cast<double>(a));
    case WeightKind::Table:
        if (a >= static_cast<long>(values_.size()))
            throw std::out_of_range("weight table evaluated beyond its window");
        return values_[static_cast<std::size_t>(a)];
    }
    throw std::logic_error("unreachable weight kind");
}

double WeightSequence::running_max(long j) const {
    const long a = std::labs(j);
    switch (kind_) {
    case WeightKind::Flat:
        return 1.0;
    case WeightKind::Pol: // w(1) = 1 = w(0); monotone in |j| from there
        if (a == 0) return 1.0;
        return param_ >= 0.0 ? (*this)(a) : 1.0;
    case WeightKind::Exp:
        return param_ >= 0.0 ? (*this)(a) : 1.0;
    case WeightKind::Table: {
        double best = 0.0;
        for (long i = 0; i <= a; ++i) best = std::max(best, (*this)(i));
        return best;
    }
    }
    throw std::logic_error("unreachable weight kind");
}

std::string WeightSequence::describe() const {
    switch (kind_) {
    case WeightKind::Flat:
        return "flat";
    case WeightKind::Pol:
        return "pol(" + std::to_string(param_) + ")";
    case WeightKind::Exp:
        return "exp(" + std::to_string(param_) + ")";
    case WeightKind::Table:
        return "table[" + std::to_string(values_.size()) + "]";
    }
    return "?";
}

} // namespace pdeconv
