#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dacdist/overlap_spec.hpp"

namespace dacdist {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kGoldenConjugate = 0.61803398874989484820;  // (sqrt(5)-1)/2
inline constexpr double kPolyMaxQ = 0.85;   // recursive evaluator refuses beyond
inline constexpr double kQEdgeTol = 1e-6;   // slack for q given at CLI precision

/// The one known closed form of the codeword density, at q = 1/sqrt(2):
/// a ramp up to sqrt(2)-1, a flat top of height 1/(2-sqrt(2)), and the
/// mirrored ramp down.
inline double closed_form_sqrt2(double u) {
    if (!(u >= 0.0) || !(u <= 1.0))
        throw std::invalid_argument("closed_form_sqrt2: u outside [0, 1]");
    const double sqrt2 = std::sqrt(2.0);
    const double ramp = 3.0 * sqrt2 - 4.0;
    const double knee = sqrt2 - 1.0;
    if (u <= knee) return u / ramp;
    if (u <= 1.0 - knee) return 1.0 / (2.0 - sqrt2);
    return (1.0 - u) / ramp;
}

/// Exponent of the base power-law solution of f(u) = 2q f(qu).
inline double lambda_of(const OverlapSpec& spec) {
    return (1.0 - spec.gamma) / spec.gamma;
}

/// Breakpoint v_n = (1-q)/q^n. The sequence increases with n; only the
/// breakpoints below 1/2 play a role on the left half.
inline double breakpoint(double q, int n) {
    return (1.0 - q) / std::pow(q, n);
}

enum class PolyCase { A1, A2, A3, B, Recursive };

/// Power-law piecewise model of the density on [0, 1/2]: f(u) ~ c u^lambda
/// minus one shifted power term per breakpoint crossed. The case records
/// how many explicit terms apply, or that the functional equation is
/// unrolled recursively.
struct PiecewisePolyApprox {
    double q = 0.0;
    double gamma = 0.0;
    double lambda = 0.0;
    double c = 0.0;
    std::vector<double> breakpoints;  // v_1 < v_2 < ... < 1/2
    PolyCase case_id = PolyCase::A1;
};

/// Closed-form normalization constant for the explicit cases, from the
/// half-interval integral: c = 1 / (2 gamma (0.5^(1/gamma) -
/// sum_{i<=k} (0.5 - v_i)^(1/gamma))), k = 1, 2, 3 for A1, A2, A3.
inline double poly_c(const OverlapSpec& spec, PolyCase case_id) {
    const double q = spec.q;
    if (q < kInvSqrt2 - kQEdgeTol || q > 0.8 + kQEdgeTol)
        throw std::domain_error(
            "poly_c: closed-form constant defined for 1/sqrt(2) <= q <= 0.8; "
            "use the recursive evaluator or the Gaussian approximation");
    int k = 0;
    switch (case_id) {
        case PolyCase::A1: k = 1; break;
        case PolyCase::A2: k = 2; break;
        case PolyCase::A3: k = 3; break;
        default:
            throw std::invalid_argument(
                "poly_c: no closed-form constant for this case");
    }
    const double inv_gamma = 1.0 / spec.gamma;
    double acc = std::pow(0.5, inv_gamma);
    for (int i = 1; i <= k; ++i) {
        const double v = breakpoint(q, i);
        if (v >= 0.5)
            throw std::invalid_argument("poly_c: case inconsistent with q");
        acc -= std::pow(0.5 - v, inv_gamma);
    }
    return 1.0 / (2.0 * spec.gamma * acc);
}

namespace detail {

/// Unit-constant base solution of f(u) = 2q f(qu) - f(u - v1) on [0, 1/2]
/// with f = u^lambda below v1. Both recursion arguments shrink strictly,
/// so the unrolling terminates; values are memoized on a 1e-12 grid of u
/// and the depth is capped. One session confines one evaluation batch.
class RecursiveEvalSession {
public:
    RecursiveEvalSession(double q, double lambda)
        : q_(q), lambda_(lambda), v1_((1.0 - q) / q) {}

    double eval(double u) { return eval_impl(u, 0); }

private:
    static constexpr int kMaxDepth = 64;

    double eval_impl(double u, int depth) {
        if (u <= 0.0) return 0.0;
        if (u <= v1_) return std::pow(u, lambda_);
        if (depth >= kMaxDepth)
            throw std::runtime_error("recursive evaluator: depth cap exceeded");
        const long long key = std::llround(u * 1e12);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const double val = 2.0 * q_ * eval_impl(q_ * u, depth + 1) -
                           eval_impl(u - v1_, depth + 1);
        memo_.emplace(key, val);
        return val;
    }

    double q_;
    double lambda_;
    double v1_;
    std::unordered_map<long long, double> memo_;
};

/// Explicit sum form shared by cases A1-A3: u^lambda minus one shifted
/// power term per breakpoint below u. Each term vanishes at its own
/// breakpoint, so the result is continuous.
inline double eval_explicit_unit(const PiecewisePolyApprox& ap, double u) {
    if (u <= 0.0) return 0.0;
    double acc = std::pow(u, ap.lambda);
    for (double v : ap.breakpoints) {
        if (u <= v) break;
        acc -= std::pow(u - v, ap.lambda);
    }
    return acc;
}

/// Case B: the f(u - v1) branch is expanded one level (it lands in a region
/// where the two-term form holds), leaving only the 2q f(qu) branch to the
/// recursion.
inline double eval_case_b_unit(const PiecewisePolyApprox& ap, double u,
                               RecursiveEvalSession& session) {
    const double v1 = ap.breakpoints.front();
    if (u <= 0.0) return 0.0;
    if (u <= v1) return std::pow(u, ap.lambda);
    double acc = 2.0 * ap.q * session.eval(ap.q * u) -
                 std::pow(u - v1, ap.lambda);
    if (u > 2.0 * v1) acc += std::pow(u - 2.0 * v1, ap.lambda);
    return acc;
}

inline double eval_unit(const PiecewisePolyApprox& ap, double u,
                        RecursiveEvalSession& session) {
    switch (ap.case_id) {
        case PolyCase::A1:
        case PolyCase::A2:
        case PolyCase::A3: return eval_explicit_unit(ap, u);
        case PolyCase::B: return eval_case_b_unit(ap, u, session);
        case PolyCase::Recursive: return session.eval(u);
    }
    return 0.0;
}

/// Trapezoid integral of the unit-constant model over [0, 1/2]; fixes c
/// for the cases without a closed-form constant.
inline double integrate_unit_half(const PiecewisePolyApprox& ap) {
    RecursiveEvalSession session(ap.q, ap.lambda);
    const std::size_t cells = 200000;
    const double h = 0.5 / static_cast<double>(cells);
    double acc = 0.5 * (eval_unit(ap, 0.0, session) +
                        eval_unit(ap, 0.5, session));
    for (std::size_t j = 1; j < cells; ++j)
        acc += eval_unit(ap, static_cast<double>(j) * h, session);
    return acc * h;
}

}  // namespace detail

/// Build the piecewise power-law model for 1/sqrt(2) <= q <= 0.85. The case
/// is picked by comparing the breakpoints (and 2 v1) against 1/2 directly:
///   - 2 v1 >= 1/2 with k breakpoints below 1/2: explicit case A_k (k <= 3,
///     closed-form c); k = 4 only occurs on a sliver below q = 0.8 and is
///     handled by the recursive unrolling.
///   - 2 v1 < 1/2 and 1/2 - v1 <= v2 (q up to sqrt(2/3)): case B.
///   - otherwise: recursive unrolling up to q = 0.85.
inline PiecewisePolyApprox make_poly_approx(const OverlapSpec& spec) {
    const double q = spec.q;
    if (q < kInvSqrt2 - kQEdgeTol)
        throw std::domain_error(
            "make_poly_approx: polynomial model requires q >= 1/sqrt(2)");
    if (q > kPolyMaxQ + kQEdgeTol)
        throw std::domain_error(
            "make_poly_approx: unsupported beyond q = 0.85; use the Gaussian "
            "approximation");

    PiecewisePolyApprox ap;
    ap.q = q;
    ap.gamma = spec.gamma;
    ap.lambda = lambda_of(spec);
    for (int n = 1; n <= 64; ++n) {
        const double v = breakpoint(q, n);
        if (v >= 0.5) break;
        ap.breakpoints.push_back(v);
    }
    const double v1 = ap.breakpoints.front();
    const std::size_t k = ap.breakpoints.size();

    if (2.0 * v1 >= 0.5) {
        if (k == 1) ap.case_id = PolyCase::A1;
        else if (k == 2) ap.case_id = PolyCase::A2;
        else if (k == 3) ap.case_id = PolyCase::A3;
        else ap.case_id = PolyCase::Recursive;
    } else if (0.5 - v1 <= ap.breakpoints[1]) {
        ap.case_id = PolyCase::B;
    } else {
        ap.case_id = PolyCase::Recursive;
    }

    switch (ap.case_id) {
        case PolyCase::A1:
        case PolyCase::A2:
        case PolyCase::A3: ap.c = poly_c(spec, ap.case_id); break;
        default: ap.c = 0.5 / detail::integrate_unit_half(ap); break;
    }
    return ap;
}

/// Left-half evaluation; the right half follows from f(u) = f(1-u) and must
/// be mirrored by the caller (see poly_eval_mirrored).
inline double poly_eval(const PiecewisePolyApprox& ap, double u) {
    if (!(u >= 0.0) || u > 0.5)
        throw std::invalid_argument(
            "poly_eval: u outside [0, 0.5]; mirror the right half");
    detail::RecursiveEvalSession session(ap.q, ap.lambda);
    return ap.c * detail::eval_unit(ap, u, session);
}

inline double poly_eval_mirrored(const PiecewisePolyApprox& ap, double u) {
    if (!(u >= 0.0) || !(u <= 1.0))
        throw std::invalid_argument("poly_eval_mirrored: u outside [0, 1]");
    return poly_eval(ap, u > 0.5 ? 1.0 - u : u);
}

/// Sample the model on the closed grid n/grid_cells, n = 0..grid_cells,
/// sharing one recursion session for the whole sweep.
inline std::vector<double> poly_eval_grid(const PiecewisePolyApprox& ap,
                                          std::size_t grid_cells) {
    detail::RecursiveEvalSession session(ap.q, ap.lambda);
    std::vector<double> out(grid_cells + 1);
    for (std::size_t n = 0; n <= grid_cells; ++n) {
        double u = static_cast<double>(n) / static_cast<double>(grid_cells);
        if (u > 0.5) u = 1.0 - u;
        out[n] = ap.c * detail::eval_unit(ap, u, session);
    }
    return out;
}

/// Bell-curve model of the density at very low rates, centered at 1/2.
struct GaussianApprox {
    double sigma2 = 0.0;
};

/// Variance estimate from the intersection identity q f(0.5) = f(0.5/q)
/// applied to the bell curve: sigma^2 = -(1-q)^2 / (8 q^2 ln q).
inline double gaussian_sigma2(const OverlapSpec& spec) {
    const double q = spec.q;
    if (!(q > 0.5) || !(q < 1.0))
        throw std::domain_error(
            "gaussian_sigma2: defined for 0.5 < q < 1 (degenerates at q = 1)");
    const double one_minus = 1.0 - q;
    return -(one_minus * one_minus) / (8.0 * q * q * std::log(q));
}

inline double gaussian_eval(const GaussianApprox& ap, double u) {
    if (!(ap.sigma2 > 0.0))
        throw std::invalid_argument("gaussian_eval: variance must be positive");
    const double sigma = std::sqrt(ap.sigma2);
    const double z = (u - 0.5) / sigma;
    const double inv_sqrt_2pi = 0.39894228040143267794;
    return inv_sqrt_2pi / sigma * std::exp(-0.5 * z * z);
}

/// Predicted zeros q^n/(q+1), n = 1..n_max, proved for
/// 0.5 < q <= (sqrt(5)-1)/2; their mirror images 1 - q^n/(q+1) are zeros
/// too by symmetry.
inline std::vector<double> high_rate_zeros(const OverlapSpec& spec, int n_max) {
    const double q = spec.q;
    if (!(q > 0.5) || q > kGoldenConjugate + 1e-12)
        throw std::domain_error(
            "high_rate_zeros: zeros only proved for high rates "
            "(0.5 < q <= (sqrt(5)-1)/2)");
    std::vector<double> zeros;
    zeros.reserve(static_cast<std::size_t>(n_max > 0 ? n_max : 0));
    double p = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        p *= q;
        zeros.push_back(p / (q + 1.0));
    }
    return zeros;
}

}  // namespace dacdist
