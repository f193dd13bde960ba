#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdeconv/fourier.hpp"
#include "pdeconv/weights.hpp"

namespace pdeconv {

enum class Role { Intensity, ErrorDensity };
enum class Family { Uniform, Cosine, PoissonKernel, YoungPol };

struct FamilyParams {
    double tau = 1.0;  // total mass; forced to 1 for error densities
    double beta = 0.0; // cosine amplitude, |beta| < 1
    double rate = 0.0; // poisson kernel rate a > 0, decay r = exp(-a)
    double q = 0.0;    // young_pol exponent, q > 1
    int J = 64;        // young_pol frequency truncation
};

/// An intensity or error density with closed-form Fourier coefficients,
/// pointwise evaluation, certified sup/inf bounds and a known support window.
///
/// Families and their coefficient rules (unit mass; intensities scale by tau):
///   uniform         c_j = delta_{j0}
///   cosine          c_0 = 1, c_{+-1} = beta/2      density 1 + beta cos(2 pi t)
///   poisson_kernel  c_j = r^|j|, r = exp(-rate)    density (1-r^2)/(1-2r cos(2 pi t)+r^2)
///   young_pol       c_0 = 1, c_j = (1+|j|)^{-q} for 1 <= |j| <= J
///
/// Nonnegativity is certified at construction on a 4096-point grid together
/// with a Lipschitz slack derived from sum 2 pi |j| |c_j|.
class FunctionSpec {
public:
    static FunctionSpec make(Role role, Family family, FamilyParams params);

    Role role() const { return role_; }
    Family family() const { return family_; }
    const FamilyParams& params() const { return params_; }

    /// Closed-form coefficient (real for all built-in families).
    double coefficient(int j) const;
    FourierVector coefficients(int K) const;

    double operator()(double t) const; // pointwise value

    double sup_bound() const { return sup_bound_; }
    double inf_bound() const { return inf_bound_; }
    double total_mass() const { return coefficient(0); }

    /// Largest index with a nonzero coefficient, or std::nullopt for the
    /// poisson kernel (infinite support).
    std::optional<int> support_limit() const;

    /// Grid minimum minus the Lipschitz slack; >= -1e-10 by construction.
    double certified_min() const { return certified_min_; }

    std::string describe() const;

    std::string to_json_string() const;
    static FunctionSpec from_json_string(const std::string& text, Role role);

private:
    FunctionSpec(Role role, Family family, FamilyParams params)
        : role_(role), family_(family), params_(params) {}

    void validate_and_certify();

    Role role_;
    Family family_;
    FamilyParams params_;
    double sup_bound_ = 0.0;
    double inf_bound_ = 0.0;
    double certified_min_ = 0.0;
    std::vector<double> series_terms_; // cached 2 c_j for the truncated series
};

/// Smoothness class of intensities: gamma-weighted coefficient mass <= radius.
struct IntensityClass {
    WeightSequence gamma;
    double radius;

    static IntensityClass make(WeightSequence gamma, double radius);
};

/// Error density class: 1/d <= |c_j|^2 / alpha(j) <= d, with
/// rho = sum of alpha over all j finite.
struct ErrorClass {
    WeightSequence alpha;
    double d;
    double rho;      // closed form or partial sum + certified tail
    bool rho_exact;  // true when rho is a closed form

    static ErrorClass make(WeightSequence alpha, double d);
};

enum class MembershipStatus { Member, NotMember, Undecidable };

struct MembershipReport {
    MembershipStatus status = MembershipStatus::Undecidable;
    // Intensity check: gamma-weighted sum vs the class radius.
    double weighted_sum = 0.0;
    double tail_bound = 0.0;
    // Error check: range of |c_j|^2 / alpha(j) over the checked window.
    double ratio_inf = 0.0;
    double ratio_sup = 0.0;
    long witness = -1;      // first violating index, -1 if none
    long checked_window = 0; // 0 means the full range was decided
    std::string detail;

    bool member() const { return status == MembershipStatus::Member; }
};

MembershipReport class_membership(const FunctionSpec& spec, const IntensityClass& cls);

/// window = 0 decides membership over the full index range (symbolically
/// where the family allows it); window > 0 restricts the two-sided ratio
/// check to 0 <= j <= window and reports a window-certified result.
MembershipReport class_membership(const FunctionSpec& spec, const ErrorClass& cls,
                                  long window = 0);

struct SeqCheckItem {
    std::string name;
    bool pass;
    long witness; // index of the first violation, -1 if none
    double lhs, rhs;
};

struct SeqReport {
    bool pass = true;
    std::vector<SeqCheckItem> items;
    double rho = 0.0;
    double rho_tail = 0.0; // certified bound on the part beyond the partial sum
    bool rho_finite = false;
    bool rho_exact = false;

    std::string summary() const;
};

/// Validates the standing requirements on the weight triple (omega, gamma,
/// alpha): unit values at 0, gamma >= 1, omega/gamma and alpha nonincreasing
/// on 0..J, and a finite sum of alpha (closed form for exponential decay,
/// partial sum plus integral tail bound for polynomial decay > 1/2).
SeqReport check_assumption_seq(const WeightSequence& omega, const WeightSequence& gamma,
                               const WeightSequence& alpha, long J);

/// Quadrature coefficients of a family member; the independent route against
/// the closed-form coefficient rules.
FourierVector coeffs_by_quadrature(const FunctionSpec& spec, int K, int nodes);

} // namespace pdeconv
