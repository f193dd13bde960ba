#include "pdeconv/models.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace pdeconv {

namespace {

constexpr int kCheckGridSize = 4096;
constexpr double kNonnegTolerance = -1e-10;

using std::numbers::pi;

double kernel_decay(const FamilyParams& p) { return std::exp(-p.rate); }

} // namespace

FunctionSpec FunctionSpec::make(Role role, Family family, FamilyParams params) {
    if (role == Role::ErrorDensity) {
        if (params.tau != 1.0 && family != Family::Uniform)
            throw std::invalid_argument("error densities have unit mass; tau must be 1");
        params.tau = 1.0;
    }
    if (!(params.tau > 0.0)) throw std::invalid_argument("total mass tau must be > 0");
    switch (family) {
    case Family::Uniform:
        break;
    case Family::Cosine:
        if (!(std::abs(params.beta) < 1.0))
            throw std::invalid_argument("cosine family needs |beta| < 1");
        break;
    case Family::PoissonKernel:
        if (!(params.rate > 0.0))
            throw std::invalid_argument("poisson kernel needs rate > 0 (decay r = exp(-rate))");
        break;
    case Family::YoungPol:
        if (!(params.q > 1.0)) throw std::invalid_argument("young_pol needs q > 1");
        if (params.J < 1) throw std::invalid_argument("young_pol needs J >= 1");
        break;
    }
    FunctionSpec spec(role, family, params);
    spec.validate_and_certify();
    return spec;
}

double FunctionSpec::coefficient(int j) const {
    const int a = j < 0 ? -j : j;
    const double tau = params_.tau;
    switch (family_) {
    case Family::Uniform:
        return a == 0 ? tau : 0.0;
    case Family::Cosine:
        if (a == 0) return tau;
        return a == 1 ? tau * params_.beta / 2.0 : 0.0;
    case Family::PoissonKernel:
        return tau * std::exp(-params_.rate * static_cast<double>(a));
    case Family::YoungPol:
        if (a == 0) return tau;
        if (a > params_.J) return 0.0;
        return tau * std::pow(1.0 + static_cast<double>(a), -params_.q);
    }
    throw std::logic_error("unreachable family");
}

FourierVector FunctionSpec::coefficients(int K) const {
    FourierVector v(K, true);
    for (int j = 0; j <= K; ++j) v.set(j, {coefficient(j), 0.0});
    return v;
}

double FunctionSpec::operator()(double t) const {
    const double tau = params_.tau;
    switch (family_) {
    case Family::Uniform:
        return tau;
    case Family::Cosine:
        return tau * (1.0 + params_.beta * std::cos(2.0 * pi * t));
    case Family::PoissonKernel: {
        const double r = kernel_decay(params_);
        return tau * (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(2.0 * pi * t) + r * r);
    }
    case Family::YoungPol: {
        // cos(2 pi j t) via powers of exp(2 pi i t); one trig call per eval
        const std::complex<double> z = std::polar(1.0, 2.0 * pi * t);
        std::complex<double> p{1.0, 0.0};
        double acc = 1.0;
        for (int j = 1; j <= params_.J; ++j) {
            p *= z;
            acc += series_terms_[static_cast<std::size_t>(j)] * p.real();
        }
        return tau * acc;
    }
    }
    throw std::logic_error("unreachable family");
}

std::optional<int> FunctionSpec::support_limit() const {
    switch (family_) {
    case Family::Uniform:
        return 0;
    case Family::Cosine:
        return 1;
    case Family::PoissonKernel:
        return std::nullopt;
    case Family::YoungPol:
        return params_.J;
    }
    return std::nullopt;
}

void FunctionSpec::validate_and_certify() {
    const double tau = params_.tau;
    double lipschitz = 0.0;
    if (family_ == Family::YoungPol) {
        series_terms_.assign(static_cast<std::size_t>(params_.J) + 1, 0.0);
        for (int j = 1; j <= params_.J; ++j)
            series_terms_[static_cast<std::size_t>(j)] = 2.0 * std::pow(1.0 + j, -params_.q);
    }
    switch (family_) {
    case Family::Uniform:
        sup_bound_ = tau;
        inf_bound_ = tau;
        break;
    case Family::Cosine:
        sup_bound_ = tau * (1.0 + std::abs(params_.beta));
        inf_bound_ = tau * (1.0 - std::abs(params_.beta));
        lipschitz = 2.0 * pi * tau * std::abs(params_.beta);
        break;
    case Family::PoissonKernel: {
        const double r = kernel_decay(params_);
        sup_bound_ = tau * (1.0 + r) / (1.0 - r);
        inf_bound_ = tau * (1.0 - r) / (1.0 + r);
        lipschitz = 4.0 * pi * tau * r / ((1.0 - r) * (1.0 - r));
        break;
    }
    case Family::YoungPol: {
        double s = 1.0;
        for (int j = 1; j <= params_.J; ++j) {
            const double c = std::pow(1.0 + j, -params_.q);
            s += 2.0 * c;
            lipschitz += 4.0 * pi * j * c;
        }
        sup_bound_ = tau * s;
        lipschitz *= tau;
        break;
    }
    }

    double grid_min = std::numeric_limits<double>::infinity();
    double grid_max = -grid_min;
    for (int l = 0; l < kCheckGridSize; ++l) {
        const double v = (*this)(static_cast<double>(l) / kCheckGridSize);
        grid_min = std::min(grid_min, v);
        grid_max = std::max(grid_max, v);
    }
    if (grid_min < kNonnegTolerance)
        throw std::invalid_argument("constructed function dips below zero on the check grid");
    if (grid_max > sup_bound_ * (1.0 + 1e-12))
        throw std::logic_error("sup bound violated on the check grid");
    certified_min_ = grid_min - lipschitz / (2.0 * kCheckGridSize);
    if (family_ == Family::YoungPol) inf_bound_ = std::max(0.0, certified_min_);
}

std::string FunctionSpec::describe() const {
    std::ostringstream os;
    switch (family_) {
    case Family::Uniform:
        os << "uniform";
        break;
    case Family::Cosine:
        os << "cosine(beta=" << params_.beta << ")";
        break;
    case Family::PoissonKernel:
        os << "poisson_kernel(rate=" << params_.rate << ")";
        break;
    case Family::YoungPol:
        os << "young_pol(q=" << params_.q << ",J=" << params_.J << ")";
        break;
    }
    if (role_ == Role::Intensity) os << "*tau=" << params_.tau;
    return os.str();
}

std::string FunctionSpec::to_json_string() const {
    nlohmann::json j;
    switch (family_) {
    case Family::Uniform:
        j["family"] = "uniform";
        break;
    case Family::Cosine:
        j["family"] = "cosine";
        j["beta"] = params_.beta;
        break;
    case Family::PoissonKernel:
        j["family"] = "poisson_kernel";
        j["rate"] = params_.rate;
        break;
    case Family::YoungPol:
        j["family"] = "young_pol";
        j["q"] = params_.q;
        j["J"] = params_.J;
        break;
    }
    if (role_ == Role::Intensity) j["tau"] = params_.tau;
    return j.dump();
}

FunctionSpec FunctionSpec::from_json_string(const std::string& text, Role role) {
    const auto j = nlohmann::json::parse(text);
    const std::string family = j.at("family").get<std::string>();
    FamilyParams p;
    if (role == Role::Intensity) p.tau = j.value("tau", 50.0);
    if (family == "uniform") return make(role, Family::Uniform, p);
    if (family == "cosine") {
        p.beta = j.at("beta").get<double>();
        return make(role, Family::Cosine, p);
    }
    if (family == "poisson_kernel") {
        if (j.contains("rate"))
            p.rate = j.at("rate").get<double>();
        else if (j.contains("r"))
            p.rate = -std::log(j.at("r").get<double>());
        else
            throw std::invalid_argument("poisson_kernel needs \"rate\" or \"r\"");
        return make(role, Family::PoissonKernel, p);
    }
    if (family == "young_pol") {
        p.q = j.at("q").get<double>();
        p.J = j.value("J", 64);
        return make(role, Family::YoungPol, p);
    }
    throw std::invalid_argument("unknown family: " + family);
}

IntensityClass IntensityClass::make(WeightSequence gamma, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("class radius must be > 0");
    switch (gamma.kind()) {
    case WeightKind::Flat:
        break;
    case WeightKind::Pol:
    case WeightKind::Exp:
        if (gamma.param() < 0.0)
            throw std::invalid_argument("gamma must satisfy gamma(j) >= 1");
        break;
    case WeightKind::Table:
        for (long j = 0; j <= gamma.table_limit(); ++j)
            if (gamma(j) < 1.0)
                throw std::invalid_argument("gamma table entry below 1 at j=" + std::to_string(j));
        break;
    }
    return IntensityClass{std::move(gamma), radius};
}

namespace {

// rho = sum over all j of alpha(j); closed form for exponential decay,
// partial sum + integral tail bound for polynomial decay with 2a > 1.
struct RhoResult {
    double value = 0.0;
    double tail = 0.0;
    bool finite = false;
    bool exact = false;
};

RhoResult alpha_rho(const WeightSequence& alpha, long partial_terms) {
    RhoResult r;
    switch (alpha.kind()) {
    case WeightKind::Exp: {
        if (alpha.param() >= 0.0) return r; // nondecreasing, diverges
        const double q = std::exp(2.0 * alpha.param());
        r.value = (1.0 + q) / (1.0 - q);
        r.finite = r.exact = true;
        return r;
    }
    case WeightKind::Pol: {
        const double a = -alpha.param();
        if (!(2.0 * a > 1.0)) return r;
        double partial = 1.0;
        for (long j = 1; j <= partial_terms; ++j) partial += 2.0 * alpha(j);
        r.tail = 2.0 * std::pow(static_cast<double>(partial_terms), 1.0 - 2.0 * a) /
                 (2.0 * a - 1.0);
        r.value = partial + r.tail;
        r.finite = true;
        return r;
    }
    case WeightKind::Flat:
    case WeightKind::Table:
        return r; // diverges resp. undecidable beyond the table
    }
    return r;
}

} // namespace

ErrorClass ErrorClass::make(WeightSequence alpha, double d) {
    if (!(d >= 1.0)) throw std::invalid_argument("class parameter d must be >= 1");
    if ((alpha.kind() == WeightKind::Pol || alpha.kind() == WeightKind::Exp) &&
        alpha.param() > 0.0)
        throw std::invalid_argument("alpha must be nonincreasing");
    if (alpha.kind() == WeightKind::Table)
        for (long j = 0; j + 1 <= alpha.table_limit(); ++j)
            if (alpha(j + 1) > alpha(j))
                throw std::invalid_argument("alpha table not nonincreasing at j=" +
                                            std::to_string(j + 1));
    const auto rho = alpha_rho(alpha, 1024);
    if (!rho.finite)
        throw std::invalid_argument("sum of alpha is not certifiably finite for this kind");
    return ErrorClass{std::move(alpha), d, rho.value, rho.exact};
}

MembershipReport class_membership(const FunctionSpec& spec, const IntensityClass& cls) {
    MembershipReport rep;
    if (spec.role() != Role::Intensity)
        throw std::invalid_argument("intensity membership check needs an intensity spec");
    const auto support = spec.support_limit();
    if (support) {
        if (cls.gamma.kind() == WeightKind::Table && cls.gamma.table_limit() < *support) {
            rep.status = MembershipStatus::Undecidable;
            rep.detail = "gamma table ends before the spec support";
            return rep;
        }
        double s = 0.0;
        for (int j = -*support; j <= *support; ++j) {
            const double c = spec.coefficient(j);
            s += cls.gamma(j) * c * c;
        }
        rep.weighted_sum = s;
    } else {
        // geometric coefficients; sum until a ratio-certified tail is negligible
        if (cls.gamma.kind() == WeightKind::Table) {
            rep.status = MembershipStatus::Undecidable;
            rep.detail = "gamma table cannot cover an infinite support";
            return rep;
        }
        const double r2 = std::exp(-2.0 * spec.params().rate);
        if (cls.gamma.kind() == WeightKind::Exp && std::exp(2.0 * cls.gamma.param()) * r2 >= 1.0) {
            rep.weighted_sum = std::numeric_limits<double>::infinity();
            rep.status = MembershipStatus::NotMember;
            rep.detail = "gamma growth at least cancels the squared coefficient decay";
            return rep;
        }
        double s = 0.0;
        long j = 0;
        for (;;) {
            const double c = spec.coefficient(static_cast<int>(j));
            s += (j == 0 ? 1.0 : 2.0) * cls.gamma(j) * c * c;
            const double ratio = cls.gamma(j + 2) / cls.gamma(j + 1) * r2;
            if (ratio < 1.0) {
                const double c1 = spec.coefficient(static_cast<int>(j + 1));
                const double tail = 2.0 * cls.gamma(j + 1) * c1 * c1 / (1.0 - ratio);
                if (tail <= 1e-12 * std::max(1.0, s)) {
                    rep.tail_bound = tail;
                    break;
                }
            }
            ++j;
            if (j > 1000000) {
                rep.status = MembershipStatus::Undecidable;
                rep.detail = "tail would not certify within 1e6 terms";
                return rep;
            }
        }
        rep.weighted_sum = s + rep.tail_bound;
    }
    rep.status = rep.weighted_sum <= cls.radius ? MembershipStatus::Member
                                                : MembershipStatus::NotMember;
    std::ostringstream os;
    os << "gamma-weighted sum " << rep.weighted_sum << " vs radius " << cls.radius;
    rep.detail = os.str();
    return rep;
}

MembershipReport class_membership(const FunctionSpec& spec, const ErrorClass& cls, long window) {
    MembershipReport rep;
    if (spec.role() != Role::ErrorDensity)
        throw std::invalid_argument("error membership check needs an error density");
    const double lo = 1.0 / cls.d, hi = cls.d;
    rep.ratio_inf = std::numeric_limits<double>::infinity();
    rep.ratio_sup = 0.0;

    auto scan = [&](long j_end) -> bool { // returns false on first violation
        for (long j = 0; j <= j_end; ++j) {
            const double c = spec.coefficient(static_cast<int>(j));
            const double ratio = c * c / cls.alpha(j);
            rep.ratio_inf = std::min(rep.ratio_inf, ratio);
            rep.ratio_sup = std::max(rep.ratio_sup, ratio);
            if (ratio < lo || ratio > hi) {
                rep.witness = j;
                return false;
            }
        }
        return true;
    };

    if (window > 0) {
        if (cls.alpha.kind() == WeightKind::Table && cls.alpha.table_limit() < window) {
            rep.status = MembershipStatus::Undecidable;
            rep.detail = "alpha table ends before the requested window";
            return rep;
        }
        rep.checked_window = window;
        rep.status = scan(window) ? MembershipStatus::Member : MembershipStatus::NotMember;
        rep.detail = "two-sided bound checked on 0..window only";
        return rep;
    }

    const auto support = spec.support_limit();
    if (support) {
        // beyond the support the ratio is zero, so the lower bound fails there
        const long limit = cls.alpha.kind() == WeightKind::Table
                               ? std::min<long>(*support, cls.alpha.table_limit())
                               : *support;
        if (scan(limit)) {
            rep.witness = limit + 1;
            rep.ratio_inf = 0.0;
        }
        rep.status = MembershipStatus::NotMember;
        rep.detail = "coefficient vanishes beyond the support, lower bound fails";
        return rep;
    }

    // poisson kernel: |c_j|^2 = exp(-2 rate j)
    const double a2 = 2.0 * spec.params().rate;
    if (cls.alpha.kind() == WeightKind::Exp) {
        const double slope = -a2 - 2.0 * cls.alpha.param(); // log-ratio increment per j
        if (slope == 0.0) {
            rep.ratio_inf = rep.ratio_sup = 1.0;
            rep.status = MembershipStatus::Member;
            rep.detail = "exact ratio 1 at every index";
            return rep;
        }
        long j = 1;
        while (true) { // geometric ratio drifts monotonically out of the band
            const double ratio = std::exp(slope * static_cast<double>(j));
            rep.ratio_inf = std::min(rep.ratio_inf, ratio);
            rep.ratio_sup = std::max(rep.ratio_sup, ratio);
            if (ratio < lo || ratio > hi) {
                rep.witness = j;
                rep.status = MembershipStatus::NotMember;
                rep.detail = "geometric ratio leaves the band";
                return rep;
            }
            ++j;
        }
    }
    if (cls.alpha.kind() == WeightKind::Pol) {
        // ratio exp(-a2 j) j^{2a} tends to zero; scan past its peak
        const double a = -cls.alpha.param();
        const long peak = static_cast<long>(2.0 * a / a2) + 2;
        long j = 1;
        for (;;) {
            const double ratio =
                std::exp(-a2 * static_cast<double>(j)) / cls.alpha(j);
            rep.ratio_inf = std::min(rep.ratio_inf, ratio);
            rep.ratio_sup = std::max(rep.ratio_sup, ratio);
            if (ratio < lo || ratio > hi) {
                rep.witness = j;
                rep.status = MembershipStatus::NotMember;
                rep.detail = "ratio leaves the band";
                return rep;
            }
            ++j;
            if (j > peak + 10000000) break; // unreachable in practice
        }
    }
    rep.status = MembershipStatus::Undecidable;
    rep.detail = "no decidable tail for this family/class pair";
    return rep;
}

SeqReport check_assumption_seq(const WeightSequence& omega, const WeightSequence& gamma,
                               const WeightSequence& alpha, long J) {
    if (J < 1) throw std::invalid_argument("check window J must be >= 1");
    SeqReport rep;
    auto push = [&rep](std::string name, bool pass, long witness, double lhs, double rhs) {
        rep.items.push_back({std::move(name), pass, witness, lhs, rhs});
        rep.pass = rep.pass && pass;
    };

    push("unit value at zero",
         omega(0) == 1.0 && gamma(0) == 1.0 && alpha(0) == 1.0, 0,
         std::min({omega(0), gamma(0), alpha(0)}), 1.0);

    {
        bool ok = true;
        long witness = -1;
        double bad = 1.0;
        for (long j = 0; j <= J && ok; ++j)
            if (gamma(j) < 1.0) {
                ok = false;
                witness = j;
                bad = gamma(j);
            }
        push("gamma >= 1", ok, witness, bad, 1.0);
    }
    {
        bool ok = true;
        long witness = -1;
        double lhs = 0.0, rhs = 0.0;
        double prev = omega(0) / gamma(0);
        for (long j = 1; j <= J; ++j) {
            const double cur = omega(j) / gamma(j);
            if (cur > prev * (1.0 + 1e-12)) {
                ok = false;
                witness = j;
                lhs = cur;
                rhs = prev;
                break;
            }
            prev = cur;
        }
        push("omega/gamma nonincreasing", ok, witness, lhs, rhs);
    }
    {
        bool ok = true;
        long witness = -1;
        double lhs = 0.0, rhs = 0.0;
        double prev = alpha(0);
        for (long j = 1; j <= J; ++j) {
            const double cur = alpha(j);
            if (cur > prev * (1.0 + 1e-12)) {
                ok = false;
                witness = j;
                lhs = cur;
                rhs = prev;
                break;
            }
            prev = cur;
        }
        push("alpha nonincreasing", ok, witness, lhs, rhs);
    }

    const auto rho = alpha_rho(alpha, std::max<long>(J, 64));
    rep.rho = rho.value;
    rep.rho_tail = rho.tail;
    rep.rho_finite = rho.finite;
    rep.rho_exact = rho.exact;
    push("sum of alpha finite", rho.finite, -1, rho.value, 0.0);
    return rep;
}

FourierVector coeffs_by_quadrature(const FunctionSpec& spec, int K, int nodes) {
    return coeffs_by_quadrature([&spec](double t) { return spec(t); }, K, nodes);
}

std::string SeqReport::summary() const {
    std::ostringstream os;
    for (const auto& it : items) {
        os << (it.pass ? "pass" : "FAIL") << "  " << it.name;
        if (!it.pass && it.witness >= 0) os << " (witness j=" << it.witness << ")";
        os << "\n";
    }
    if (rho_finite)
        os << "rho = " << rho << (rho_exact ? " (closed form)" : " (partial sum + tail bound)")
           << "\n";
    return os.str();
}

} // namespace pdeconv
