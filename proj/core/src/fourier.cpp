#include "pdeconv/fourier.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pdeconv {

FourierVector::FourierVector(int max_index, bool real_valued)
    : max_index_(max_index), real_(real_valued) {
    if (max_index < 0) throw std::invalid_argument("max_index must be >= 0");
    coeff_.assign(static_cast<std::size_t>(2 * max_index + 1), {0.0, 0.0});
}

void FourierVector::check_index(int j) const {
    if (j < -max_index_ || j > max_index_)
        throw std::out_of_range("coefficient index outside the stored window");
}

void FourierVector::set(int j, std::complex<double> z) {
    check_index(j);
    if (real_) {
        if (j == 0) z.imag(0.0);
        coeff_[static_cast<std::size_t>(j + max_index_)] = z;
        if (j != 0) coeff_[static_cast<std::size_t>(-j + max_index_)] = std::conj(z);
    } else {
        coeff_[static_cast<std::size_t>(j + max_index_)] = z;
    }
}

FourierVector FourierVector::window(int K) const {
    FourierVector out(K, real_);
    const int stop = std::min(K, max_index_);
    for (int j = -stop; j <= stop; ++j) out.set_raw(j, at(j));
    return out;
}

double FourierVector::hermitian_defect() const {
    double worst = 0.0;
    for (int j = 0; j <= max_index_; ++j)
        worst = std::max(worst, std::abs(at(-j) - std::conj(at(j))));
    return worst;
}

void FourierVector::to_csv(std::ostream& os) const {
    os << "j,re,im\n";
    char buf[80];
    for (int j = -max_index_; j <= max_index_; ++j) {
        const auto z = at(j);
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", j, z.real(), z.imag());
        os << buf;
    }
}

FourierVector FourierVector::from_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("j,re,im", 0) != 0)
        throw std::runtime_error("coefficient CSV must start with header j,re,im");
    struct Row {
        int j;
        double re, im;
    };
    std::vector<Row> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        Row r{};
        if (std::sscanf(line.c_str(), "%d,%lf,%lf", &r.j, &r.re, &r.im) != 3)
            throw std::runtime_error("bad coefficient CSV row: " + line);
        rows.push_back(r);
    }
    if (rows.empty()) throw std::runtime_error("coefficient CSV has no rows");
    const int K = (static_cast<int>(rows.size()) - 1) / 2;
    if (static_cast<int>(rows.size()) != 2 * K + 1)
        throw std::runtime_error("coefficient CSV must cover a symmetric window");
    FourierVector v(K, false);
    int expect = -K;
    for (const auto& r : rows) {
        if (r.j != expect++) throw std::runtime_error("coefficient CSV rows must be sorted by j");
        v.set_raw(r.j, {r.re, r.im});
    }
    // mark real-valued when the stored coefficients are Hermitian
    FourierVector real_v(K, true);
    if (v.hermitian_defect() == 0.0) {
        for (int j = -K; j <= K; ++j) real_v.set_raw(j, v.at(j));
        return real_v;
    }
    return v;
}

std::complex<double> eval_basis(int j, double t) {
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) * t);
}

FourierVector coeffs_by_quadrature(const std::function<std::complex<double>(double)>& g,
                                   int K, int nodes, bool real_valued) {
    if (K < 0) throw std::invalid_argument("K must be >= 0");
    if (nodes < 4 * K + 4)
        throw std::invalid_argument("quadrature needs at least 4K+4 nodes (aliasing guard)");
    FourierVector out(K, real_valued);
    const double h = 1.0 / static_cast<double>(nodes);
    for (int j = -K; j <= K; ++j) {
        std::complex<double> acc{0.0, 0.0};
        for (int l = 0; l < nodes; ++l) {
            const double t = static_cast<double>(l) * h;
            acc += g(t) * eval_basis(-j, t);
        }
        out.set_raw(j, acc * h);
    }
    return out;
}

FourierVector coeffs_by_quadrature(const std::function<double(double)>& g, int K, int nodes) {
    return coeffs_by_quadrature([&g](double t) { return std::complex<double>(g(t), 0.0); }, K,
                                nodes, true);
}

double weighted_norm_sq(const FourierVector& v, const WeightSequence& w) {
    double acc = 0.0;
    for (int j = -v.max_index(); j <= v.max_index(); ++j) acc += w(j) * std::norm(v.at(j));
    return acc;
}

std::complex<double> weighted_inner(const FourierVector& a, const FourierVector& b,
                                    const WeightSequence& w) {
    const int K = std::min(a.max_index(), b.max_index());
    std::complex<double> acc{0.0, 0.0};
    for (int j = -K; j <= K; ++j) acc += w(j) * a.at(j) * std::conj(b.at(j));
    return acc;
}

FourierVector convolve(const FourierVector& a, const FourierVector& b) {
    const int K = std::min(a.max_index(), b.max_index());
    FourierVector out(K, a.real_valued() && b.real_valued());
    for (int j = -K; j <= K; ++j) out.set_raw(j, a.at(j) * b.at(j));
    return out;
}

std::complex<double> synthesize_complex(const FourierVector& v, double t) {
    std::complex<double> acc{0.0, 0.0};
    for (int j = -v.max_index(); j <= v.max_index(); ++j) acc += v.at(j) * eval_basis(j, t);
    return acc;
}

double synthesize(const FourierVector& v, double t) {
    if (!v.real_valued())
        throw std::invalid_argument("real synthesis needs a real-valued coefficient vector");
    const auto z = synthesize_complex(v, t);
    const double scale = std::max(1.0, std::abs(z));
    if (std::abs(z.imag()) > 1e-9 * scale)
        throw std::runtime_error("imaginary residue exceeds tolerance in real synthesis");
    return z.real();
}

} // namespace pdeconv
