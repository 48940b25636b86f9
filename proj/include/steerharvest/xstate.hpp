#pragma once

/// \file xstate.hpp
/// \brief Two-qubit X-state measures: concurrence, steering witnesses and
/// the directional steering quantifiers built from them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "complex_erf.hpp"
#include "errors.hpp"

namespace steerharvest {

/// Density matrix supported on the diagonal and anti-diagonal only, in the
/// basis {|00>, |01>, |10>, |11>}. Hermiticity is structural: rho41 and
/// rho32 are the conjugates of the stored coherences. Positivity is
/// deliberately not enforced; second-order perturbative states carry
/// rho44 = 0 with a nonzero |00><11| coherence.
struct XState {
    double rho11 = 0.0;
    double rho22 = 0.0;
    double rho33 = 0.0;
    double rho44 = 0.0;
    complexd rho14{0.0, 0.0};
    complexd rho23{0.0, 0.0};
};

enum class SteerDirection { BtoA, AtoB };

enum class SteeringRegime { TwoWay, OneWayAtoB, OneWayBtoA, NoWay };

inline const char* to_string(SteeringRegime r)
{
    switch (r) {
    case SteeringRegime::TwoWay:    return "TwoWay";
    case SteeringRegime::OneWayAtoB: return "OneWayAtoB";
    case SteeringRegime::OneWayBtoA: return "OneWayBtoA";
    case SteeringRegime::NoWay:     return "NoWay";
    }
    return "NoWay";
}

struct JTerms {
    double j_a = 0.0;
    double j_b = 0.0;
    double j_c = 0.0;
};

struct SteeringResult {
    double s_a_to_b = 0.0;
    double s_b_to_a = 0.0;
    double asymmetry = 0.0;
    SteeringRegime regime = SteeringRegime::NoWay;
};

inline SteeringRegime steering_regime(double s_a_to_b, double s_b_to_a)
{
    const bool ab = s_a_to_b > 0.0;
    const bool ba = s_b_to_a > 0.0;
    if (ab && ba) return SteeringRegime::TwoWay;
    if (ab)       return SteeringRegime::OneWayAtoB;
    if (ba)       return SteeringRegime::OneWayBtoA;
    return SteeringRegime::NoWay;
}

namespace detail {

inline constexpr double xstate_tol = 1e-12;

// Radicands may dip a hair below zero from rounding; anything worse is a bug
// upstream, not noise.
inline double clamp_radicand(double r, const char* what)
{
    if (r < -1e-15)
        throw numerical_error(std::string(what) + ": negative radicand " + std::to_string(r));
    return r > 0.0 ? r : 0.0;
}

} // namespace detail

/// Checks the structural invariants (finiteness, diagonal range, unit trace
/// within 1e-12) and returns the state unchanged. No renormalization is
/// applied.
inline XState validate_xstate(const XState& s)
{
    const struct { const char* name; double value; } diag[] = {
        {"rho11", s.rho11}, {"rho22", s.rho22}, {"rho33", s.rho33}, {"rho44", s.rho44}};
    for (const auto& d : diag) {
        if (!std::isfinite(d.value))
            throw validation_error(std::string("xstate: ") + d.name + " not finite");
        if (d.value < -detail::xstate_tol)
            throw validation_error(std::string("xstate: negative diagonal ") + d.name +
                                   " = " + std::to_string(d.value));
        if (d.value > 1.0 + detail::xstate_tol)
            throw validation_error(std::string("xstate: diagonal ") + d.name +
                                   " exceeds 1: " + std::to_string(d.value));
    }
    if (!detail::is_finite(s.rho14) || !detail::is_finite(s.rho23))
        throw validation_error("xstate: coherence not finite");
    const double trace = s.rho11 + s.rho22 + s.rho33 + s.rho44;
    if (std::abs(trace - 1.0) > detail::xstate_tol)
        throw validation_error("xstate: trace = " + std::to_string(trace) + " deviates from 1");
    return s;
}

/// Concurrence of an X-state:
/// 2 max{0, |rho14| - sqrt(rho22 rho33), |rho23| - sqrt(rho11 rho44)}.
inline double concurrence(const XState& rho)
{
    validate_xstate(rho);
    const double p14 = detail::clamp_radicand(rho.rho22 * rho.rho33, "concurrence");
    const double p23 = detail::clamp_radicand(rho.rho11 * rho.rho44, "concurrence");
    const double b1 = std::abs(rho.rho14) - std::sqrt(p14);
    const double b2 = std::abs(rho.rho23) - std::sqrt(p23);
    return 2.0 * std::max({0.0, b1, b2});
}

/// Steering-witness state: rho/sqrt(3) + (3-sqrt(3))/3 * (rho_A (x) I/2) for
/// direction BtoA, and with the roles of the reduced states exchanged for
/// AtoB. The witness is entangled exactly when the corresponding steering
/// measure is positive.
inline XState witness_state(const XState& rho, SteerDirection direction)
{
    validate_xstate(rho);
    constexpr double inv_sqrt3 = 0.57735026918962576451; // 1/sqrt(3)
    constexpr double mix = (3.0 - 1.7320508075688772935) / 6.0;

    double f, h;
    if (direction == SteerDirection::BtoA) {
        f = mix * (rho.rho11 + rho.rho22);
        h = mix * (rho.rho33 + rho.rho44);
        return validate_xstate({inv_sqrt3 * rho.rho11 + f,
                                inv_sqrt3 * rho.rho22 + f,
                                inv_sqrt3 * rho.rho33 + h,
                                inv_sqrt3 * rho.rho44 + h,
                                inv_sqrt3 * rho.rho14,
                                inv_sqrt3 * rho.rho23});
    }
    f = mix * (rho.rho11 + rho.rho33);
    h = mix * (rho.rho22 + rho.rho44);
    return validate_xstate({inv_sqrt3 * rho.rho11 + f,
                            inv_sqrt3 * rho.rho22 + h,
                            inv_sqrt3 * rho.rho33 + f,
                            inv_sqrt3 * rho.rho44 + h,
                            inv_sqrt3 * rho.rho14,
                            inv_sqrt3 * rho.rho23});
}

inline JTerms j_terms(const XState& rho)
{
    validate_xstate(rho);
    constexpr double sqrt3 = 1.7320508075688772935;
    const double cm = (2.0 - sqrt3) / 2.0;
    const double cp = (2.0 + sqrt3) / 2.0;
    const double d14 = rho.rho11 * rho.rho44;
    const double d23 = rho.rho22 * rho.rho33;
    const double cross = 0.25 * (rho.rho11 + rho.rho44) * (rho.rho22 + rho.rho33);
    JTerms j;
    j.j_a = cm * d14 + cp * d23 + cross;
    j.j_b = 0.25 * (rho.rho11 - rho.rho44) * (rho.rho22 - rho.rho33);
    j.j_c = cp * d14 + cm * d23 + cross;
    return j;
}

/// Directional steering measures:
///   S_{B->A} = max{0, |rho14| - sqrt(J_a - J_b), |rho23| - sqrt(J_c - J_b)}
///   S_{A->B} = max{0, |rho14| - sqrt(J_a + J_b), |rho23| - sqrt(J_c + J_b)}
/// together with the asymmetry |S_{B->A} - S_{A->B}| and the regime label.
inline SteeringResult steering(const XState& rho)
{
    const JTerms j = j_terms(rho);
    const double a14 = std::abs(rho.rho14);
    const double a23 = std::abs(rho.rho23);
    const double ram = detail::clamp_radicand(j.j_a - j.j_b, "steering");
    const double rcm = detail::clamp_radicand(j.j_c - j.j_b, "steering");
    const double rap = detail::clamp_radicand(j.j_a + j.j_b, "steering");
    const double rcp = detail::clamp_radicand(j.j_c + j.j_b, "steering");

    SteeringResult out;
    out.s_b_to_a = std::max({0.0, a14 - std::sqrt(ram), a23 - std::sqrt(rcm)});
    out.s_a_to_b = std::max({0.0, a14 - std::sqrt(rap), a23 - std::sqrt(rcp)});
    out.asymmetry = std::abs(out.s_a_to_b - out.s_b_to_a);
    out.regime = steering_regime(out.s_a_to_b, out.s_b_to_a);
    return out;
}

} // namespace steerharvest
