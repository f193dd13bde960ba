#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

#include "pdeconv/weights.hpp"

namespace pdeconv {

/// Finite symmetric window of Fourier coefficients, indices -K..K.
///
/// This is the common currency of the whole library: intensities, error
/// densities, their convolution and every estimator live in this window.
/// When real_valued() is set, the stored coefficients are Hermitian
/// (v(-j) == conj(v(j))), so the represented function is real.
class FourierVector {
public:
    FourierVector() : max_index_(0), real_(true), coeff_(1, {0.0, 0.0}) {}

    FourierVector(int max_index, bool real_valued);

    int max_index() const { return max_index_; }
    bool real_valued() const { return real_; }

    std::complex<double> at(int j) const {
        check_index(j);
        return coeff_[static_cast<std::size_t>(j + max_index_)];
    }

    /// Writes coefficient j; for real-valued vectors the mirror coefficient
    /// at -j is kept at conj(z) so Hermitian symmetry holds by construction.
    void set(int j, std::complex<double> z);

    /// Raw write without mirroring (for complex-valued vectors and I/O).
    void set_raw(int j, std::complex<double> z) {
        check_index(j);
        coeff_[static_cast<std::size_t>(j + max_index_)] = z;
    }

    /// Truncate (or zero-extend) to window -K..K.
    FourierVector window(int K) const;

    /// Largest Hermitian-symmetry violation max_j |v(-j) - conj(v(j))|.
    double hermitian_defect() const;

    /// CSV rows `j,re,im` sorted by j ascending with a header line.
    void to_csv(std::ostream& os) const;
    static FourierVector from_csv(std::istream& is);

private:
    void check_index(int j) const;

    int max_index_;
    bool real_;
    std::vector<std::complex<double>> coeff_;
};

/// e_j(t) = exp(2 pi i j t).
std::complex<double> eval_basis(int j, double t);

/// Fourier coefficients of a pointwise-evaluable function by equispaced
/// (left-endpoint) quadrature of integral g(t) e_j(-t) dt on [0,1); exact for
/// band-limited integrands as long as nodes >= 4K+4 (aliasing guard).
FourierVector coeffs_by_quadrature(const std::function<std::complex<double>(double)>& g,
                                   int K, int nodes, bool real_valued);
FourierVector coeffs_by_quadrature(const std::function<double(double)>& g, int K, int nodes);

/// sum over |j| <= K of w(j) |v(j)|^2.
double weighted_norm_sq(const FourierVector& v, const WeightSequence& w);

/// sum over |j| <= K of w(j) a(j) conj(b(j)) over the common window.
std::complex<double> weighted_inner(const FourierVector& a, const FourierVector& b,
                                    const WeightSequence& w);

/// Coefficient-wise product; the Fourier side of circular convolution.
/// Windows are truncated to the smaller of the two.
FourierVector convolve(const FourierVector& a, const FourierVector& b);

/// sum over |j| <= K of v(j) e_j(t).
std::complex<double> synthesize_complex(const FourierVector& v, double t);

/// Real-valued synthesis; requires real_valued() and fails if the imaginary
/// residue exceeds 1e-9 relative to the magnitude of the result.
double synthesize(const FourierVector& v, double t);

} // namespace pdeconv
