#pragma once

/// \file harvest.hpp
/// \brief Closed-form second-order amplitudes for two static, pointlike,
/// Gaussian-switched detectors in the Minkowski vacuum, their assembly into
/// an X-state, and the specialized steering / concurrence formulas.
///
/// Everything is dimensionless: energy gaps are stored as Omega*sigma,
/// the separation as L/sigma, with sigma the Gaussian switching width.

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include "complex_erf.hpp"
#include "errors.hpp"
#include "xstate.hpp"

namespace steerharvest {

struct DetectorPairParams {
    double coupling = 0.1;   ///< lambda
    double omega_a = 0.5;    ///< Omega_A * sigma
    double omega_b = 1.0;    ///< Omega_B * sigma
    double separation = 1.0; ///< L / sigma
};

inline DetectorPairParams validate_params(const DetectorPairParams& p)
{
    const struct { const char* name; double value; bool strict; } fields[] = {
        {"coupling", p.coupling, false},
        {"omega_a", p.omega_a, true},
        {"omega_b", p.omega_b, true},
        {"separation", p.separation, true}};
    for (const auto& f : fields) {
        if (!std::isfinite(f.value))
            throw validation_error(std::string("params: ") + f.name + " not finite");
        if (f.value < 0.0 || (f.strict && f.value == 0.0))
            throw validation_error(std::string("params: ") + f.name + " must be " +
                                   (f.strict ? "> 0" : ">= 0") + ", got " +
                                   std::to_string(f.value));
    }
    return p;
}

/// True when lambda^2/(4 pi) exceeds 0.01 and the second-order truncation
/// should not be trusted quantitatively. Non-fatal; the CLI forwards it to
/// stderr.
inline bool perturbative_warning(const DetectorPairParams& p)
{
    return p.coupling * p.coupling / (4.0 * std::numbers::pi) > 0.01;
}

/// Second-order amplitudes of the joint detector state.
struct PerturbativeState {
    double p_a = 0.0;        ///< transition probability of detector A
    double p_b = 0.0;        ///< transition probability of detector B
    complexd corr_x{0.0, 0.0}; ///< |00><11| coherence
    complexd corr_c{0.0, 0.0}; ///< |01><10| coherence
};

/// Single-detector transition probability
/// P = lambda^2/(4 pi) [exp(-omega^2) - sqrt(pi) omega erfc(omega)];
/// strictly decreasing in omega with limit lambda^2/(4 pi) at omega -> 0.
inline double transition_probability(double omega, double coupling)
{
    if (!std::isfinite(omega) || omega <= 0.0)
        throw domain_error("transition_probability: omega must be finite and > 0");
    if (!std::isfinite(coupling) || coupling < 0.0)
        throw domain_error("transition_probability: coupling must be finite and >= 0");
    const double lam2 = coupling * coupling;
    return lam2 / (4.0 * std::numbers::pi) *
           (std::exp(-omega * omega) - detail::sqrt_pi * omega * erfc(omega));
}

namespace detail {

// Below this separation the correlation brackets are evaluated by their
// Taylor expansions; above it, directly.
inline constexpr double small_sep_threshold = 1e-4;

/// Re[e^{i d l / 2} erfi((l - i d)/2)], the separation-odd part of the X
/// bracket. d is the gap difference, l the separation, both in sigma units.
inline double corr_x_re_h(double l, double d)
{
    const complexd phase = std::exp(complexd(0.0, 0.5 * d * l));
    const complexd e = erfi(complexd(0.5 * l, -0.5 * d));
    return (phase * e).real();
}

/// Taylor expansion of corr_x_re_h through l^3; relative truncation error
/// is O(l^4), i.e. ~1e-16 at the threshold.
inline double corr_x_re_h_series(double l, double d)
{
    const double b = 0.5 * d;
    const double E = std::erf(b);
    const double G = 2.0 * inv_sqrt_pi * std::exp(-b * b);
    const double c1 = 0.5 * (2.0 * b * E + G);
    const double c3 = (-(4.0 / 3.0) * b * b * b * E - (2.0 * b * b - 1.0) * G / 3.0) / 8.0;
    return l * (c1 + l * l * c3);
}

/// Im[e^{i mu l / 2} erf((i l + mu)/2)] - sin(mu l / 2), the C bracket.
/// mu is the gap sum. Vanishes linearly as l -> 0.
inline double corr_c_bracket(double l, double mu)
{
    const complexd phase = std::exp(complexd(0.0, 0.5 * mu * l));
    const complexd e = erf(complexd(0.5 * mu, 0.5 * l));
    return (phase * e).imag() - std::sin(0.5 * mu * l);
}

inline double corr_c_bracket_series(double l, double mu)
{
    const double a = 0.5 * mu;
    const double G = 2.0 * inv_sqrt_pi * std::exp(-a * a);
    const double ec = std::erfc(a);
    const double c1 = 0.5 * (G - 2.0 * a * ec);
    const double c3 = ((4.0 / 3.0) * a * a * a * ec - (2.0 * a * a - 1.0) * G / 3.0) / 8.0;
    return l * (c1 + l * l * c3);
}

} // namespace detail

/// Nonlocal |00><11| amplitude X. Diverges like 1/separation for pointlike
/// detectors as the separation shrinks.
///
/// The overall phase follows the regularized two-point-function integrals
/// rather than the commonly quoted closed form, which differs from them by
/// a factor of i; the quadrature oracle pins this choice down and only |X|
/// enters any measure.
inline complexd correlation_x(const DetectorPairParams& p)
{
    validate_params(p);
    const double l = p.separation;
    const double mu = p.omega_a + p.omega_b;
    const double d = p.omega_b - p.omega_a;
    const double lam2 = p.coupling * p.coupling;
    const double pref = std::exp(-(mu * mu + l * l) / 4.0) / (8.0 * detail::sqrt_pi * l);
    const double re_h = l < detail::small_sep_threshold
                            ? detail::corr_x_re_h_series(l, d)
                            : detail::corr_x_re_h(l, d);
    return complexd(lam2 * (-2.0 * pref * re_h),
                    lam2 * (-2.0 * pref * std::cos(0.5 * d * l)));
}

/// Exchange |01><10| amplitude C; real-valued, finite as separation -> 0.
inline complexd correlation_c(const DetectorPairParams& p)
{
    validate_params(p);
    const double l = p.separation;
    const double mu = p.omega_a + p.omega_b;
    const double d = p.omega_b - p.omega_a;
    const double lam2 = p.coupling * p.coupling;
    const double pref = std::exp(-(l * l + d * d) / 4.0) / (4.0 * detail::sqrt_pi * l);
    const double bracket = l < detail::small_sep_threshold
                               ? detail::corr_c_bracket_series(l, mu)
                               : detail::corr_c_bracket(l, mu);
    return complexd(lam2 * pref * bracket, 0.0);
}

inline PerturbativeState perturbative_amplitudes(const DetectorPairParams& p)
{
    validate_params(p);
    PerturbativeState s;
    s.p_a = transition_probability(p.omega_a, p.coupling);
    s.p_b = transition_probability(p.omega_b, p.coupling);
    s.corr_x = correlation_x(p);
    s.corr_c = correlation_c(p);
    return s;
}

inline XState assemble_xstate(const PerturbativeState& s)
{
    return validate_xstate({1.0 - s.p_a - s.p_b, s.p_b, s.p_a, 0.0, s.corr_x, s.corr_c});
}

/// Amplitudes plus the assembled (validated) X-state.
inline std::pair<PerturbativeState, XState> perturbative_state(const DetectorPairParams& p)
{
    const PerturbativeState s = perturbative_amplitudes(p);
    return {s, assemble_xstate(s)};
}

/// Steering of the harvested state, specialized to rho44 = 0:
///   S_{B->A} = max{0, |X| - sqrt((1+sqrt3)/2 PA PB + PA/2 - PA^2/2),
///                     |C| - sqrt((1-sqrt3)/2 PA PB + PA/2 - PA^2/2)}
/// and S_{A->B} with P_B in the affine terms. Equals steering() of the
/// assembled X-state to machine precision.
inline SteeringResult steering_closed_form(const DetectorPairParams& p)
{
    const PerturbativeState s = perturbative_amplitudes(p);
    const double papb = s.p_a * s.p_b;
    constexpr double cp = (1.0 + std::numbers::sqrt3) / 2.0;
    constexpr double cm = (1.0 - std::numbers::sqrt3) / 2.0;
    const double ax = std::abs(s.corr_x);
    const double ac = std::abs(s.corr_c);

    const auto measure = [&](double p_recv) {
        const double affine = 0.5 * p_recv - 0.5 * p_recv * p_recv;
        const double r1 = detail::clamp_radicand(cp * papb + affine, "steering_closed_form");
        const double r2 = detail::clamp_radicand(cm * papb + affine, "steering_closed_form");
        return std::max({0.0, ax - std::sqrt(r1), ac - std::sqrt(r2)});
    };

    SteeringResult out;
    out.s_b_to_a = measure(s.p_a);
    out.s_a_to_b = measure(s.p_b);
    out.asymmetry = std::abs(out.s_a_to_b - out.s_b_to_a);
    out.regime = steering_regime(out.s_a_to_b, out.s_b_to_a);
    return out;
}

/// Harvested concurrence 2 max{0, |X| - sqrt(PA PB)}. The |C| branch of the
/// generic X-state concurrence is dropped: with rho44 = 0 at second order it
/// would report spurious entanglement for any nonzero C.
inline double concurrence_harvested(const DetectorPairParams& p)
{
    const PerturbativeState s = perturbative_amplitudes(p);
    const double papb = detail::clamp_radicand(s.p_a * s.p_b, "concurrence_harvested");
    return 2.0 * std::max(0.0, std::abs(s.corr_x) - std::sqrt(papb));
}

} // namespace steerharvest
