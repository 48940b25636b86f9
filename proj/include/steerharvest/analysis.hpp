#pragma once

/// \file analysis.hpp
/// \brief Parameter sweeps, sudden-death boundary location and
/// asymmetry-peak search over the harvested-steering landscape.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "harvest.hpp"
#include "oracle.hpp" // detail::run_chunked

namespace steerharvest {

enum class SweepAxis { separation, omega_a, omega_b, gap_ratio };

inline const char* to_string(SweepAxis a)
{
    switch (a) {
    case SweepAxis::separation: return "separation";
    case SweepAxis::omega_a:    return "omega_a";
    case SweepAxis::omega_b:    return "omega_b";
    case SweepAxis::gap_ratio:  return "gap_ratio";
    }
    return "separation";
}

inline std::optional<SweepAxis> parse_axis(const std::string& name)
{
    if (name == "separation") return SweepAxis::separation;
    if (name == "omega_a")    return SweepAxis::omega_a;
    if (name == "omega_b")    return SweepAxis::omega_b;
    if (name == "gap_ratio")  return SweepAxis::gap_ratio;
    return std::nullopt;
}

/// Applies one axis value to a parameter set. gap_ratio sets
/// omega_b = omega_a (1 + ratio).
inline DetectorPairParams with_axis(DetectorPairParams p, SweepAxis axis, double value)
{
    switch (axis) {
    case SweepAxis::separation: p.separation = value; break;
    case SweepAxis::omega_a:    p.omega_a = value; break;
    case SweepAxis::omega_b:    p.omega_b = value; break;
    case SweepAxis::gap_ratio:  p.omega_b = p.omega_a * (1.0 + value); break;
    }
    return p;
}

struct SweepAxisSpec {
    SweepAxis axis = SweepAxis::separation;
    double min = 0.05;
    double max = 3.0;
    int count = 2;
};

inline const std::vector<std::string>& default_sweep_outputs()
{
    static const std::vector<std::string> cols{
        "p_a", "p_b", "abs_x", "abs_c", "s_a_to_b", "s_b_to_a",
        "asymmetry", "concurrence", "regime"};
    return cols;
}

struct SweepSpec {
    SweepAxisSpec axis1;
    std::optional<SweepAxisSpec> axis2;
    DetectorPairParams fixed{};
    std::vector<std::string> outputs = default_sweep_outputs();
};

struct SweepRow {
    double axis1_value = 0.0;
    std::optional<double> axis2_value;
    double p_a = 0.0, p_b = 0.0, abs_x = 0.0, abs_c = 0.0;
    double s_a_to_b = 0.0, s_b_to_a = 0.0, asymmetry = 0.0, concurrence = 0.0;
    SteeringRegime regime = SteeringRegime::NoWay;
    std::string error; ///< bare-word failure kind; empty on success
};

struct SweepTable {
    SweepSpec spec;
    std::vector<SweepRow> rows;
};

namespace detail {

inline void validate_axis_spec(const SweepAxisSpec& a)
{
    // min == max is allowed as a degenerate single-point grid
    if (!(a.min <= a.max))
        throw validation_error("sweep: axis min must be <= max");
    if (a.count < 2)
        throw validation_error("sweep: axis count must be >= 2");
    const double floor = a.axis == SweepAxis::gap_ratio ? -1.0 : 0.0;
    if (a.min <= floor && a.axis != SweepAxis::separation)
        throw validation_error(std::string("sweep: axis ") + to_string(a.axis) +
                               " range leaves parameters non-positive");
    if (a.axis == SweepAxis::separation && a.min <= 0.0)
        throw validation_error("sweep: separation range must stay > 0");
}

inline double grid_value(const SweepAxisSpec& a, int i)
{
    return a.min + (a.max - a.min) * static_cast<double>(i) / (a.count - 1);
}

inline void validate_outputs(const std::vector<std::string>& outputs)
{
    if (outputs.empty())
        throw validation_error("sweep: outputs must not be empty");
    const auto& known = default_sweep_outputs();
    for (const auto& name : outputs)
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw validation_error("sweep: unknown output column: " + name);
}

} // namespace detail

inline SteeringRegime classify(const SteeringResult& r)
{
    return steering_regime(r.s_a_to_b, r.s_b_to_a);
}

/// Evaluates all output quantities at one parameter point.
inline SweepRow evaluate_point(const DetectorPairParams& p)
{
    SweepRow row;
    try {
        const PerturbativeState s = perturbative_amplitudes(p);
        const SteeringResult st = steering_closed_form(p);
        row.p_a = s.p_a;
        row.p_b = s.p_b;
        row.abs_x = std::abs(s.corr_x);
        row.abs_c = std::abs(s.corr_c);
        row.s_a_to_b = st.s_a_to_b;
        row.s_b_to_a = st.s_b_to_a;
        row.asymmetry = st.asymmetry;
        row.concurrence = concurrence_harvested(p);
        row.regime = st.regime;
    } catch (const validation_error&) {
        row.error = "validation_error";
    } catch (const domain_error&) {
        row.error = "domain_error";
    } catch (const numerical_error&) {
        row.error = "numerical_error";
    }
    if (!row.error.empty()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.p_a = row.p_b = row.abs_x = row.abs_c = nan;
        row.s_a_to_b = row.s_b_to_a = row.asymmetry = row.concurrence = nan;
        row.regime = SteeringRegime::NoWay;
    }
    return row;
}

/// Dense deterministic grid: axis1 major, axis2 minor. Per-point failures
/// land in SweepRow::error, never abort the sweep.
inline SweepTable sweep(const SweepSpec& spec, unsigned threads = 1)
{
    detail::validate_axis_spec(spec.axis1);
    if (spec.axis2)
        detail::validate_axis_spec(*spec.axis2);
    detail::validate_outputs(spec.outputs);
    validate_params(spec.fixed);

    const int n1 = spec.axis1.count;
    const int n2 = spec.axis2 ? spec.axis2->count : 1;
    SweepTable table{spec, std::vector<SweepRow>(static_cast<std::size_t>(n1) * n2)};

    detail::run_chunked(table.rows.size(), threads, [&](std::size_t k) {
        const int i = static_cast<int>(k) / n2;
        const int j = static_cast<int>(k) % n2;
        const double v1 = detail::grid_value(spec.axis1, i);
        DetectorPairParams p = with_axis(spec.fixed, spec.axis1.axis, v1);
        SweepRow row;
        if (spec.axis2) {
            const double v2 = detail::grid_value(*spec.axis2, j);
            p = with_axis(p, spec.axis2->axis, v2);
            row = evaluate_point(p);
            row.axis2_value = v2;
        } else {
            row = evaluate_point(p);
        }
        row.axis1_value = v1;
        table.rows[k] = std::move(row);
    });
    return table;
}

// ---------------------------------------------------------------------------
// Sudden-death boundaries
// ---------------------------------------------------------------------------

/// Signed pre-clamp steering expression: the largest branch of
/// |amplitude| - sqrt(radicand) for the given direction. Crosses zero where
/// the clamped measure dies; usable for bisection where the measure itself
/// is flat.
inline double steering_inner(SteerDirection direction, const DetectorPairParams& p)
{
    const PerturbativeState s = perturbative_amplitudes(p);
    const double papb = s.p_a * s.p_b;
    constexpr double cp = (1.0 + std::numbers::sqrt3) / 2.0;
    constexpr double cm = (1.0 - std::numbers::sqrt3) / 2.0;
    const double recv = direction == SteerDirection::BtoA ? s.p_a : s.p_b;
    const double affine = 0.5 * recv - 0.5 * recv * recv;
    const double r1 = detail::clamp_radicand(cp * papb + affine, "steering_inner");
    const double r2 = detail::clamp_radicand(cm * papb + affine, "steering_inner");
    return std::max(std::abs(s.corr_x) - std::sqrt(r1),
                    std::abs(s.corr_c) - std::sqrt(r2));
}

/// Signed pre-clamp concurrence expression |X| - sqrt(PA PB).
inline double concurrence_inner(const DetectorPairParams& p)
{
    const PerturbativeState s = perturbative_amplitudes(p);
    return std::abs(s.corr_x) -
           std::sqrt(detail::clamp_radicand(s.p_a * s.p_b, "concurrence_inner"));
}

struct DeathPoint {
    SteerDirection direction = SteerDirection::BtoA;
    double location = 0.0;
    double bracket_width = 0.0;
};

namespace detail {

template <typename G>
inline std::pair<double, double> bisect_sign_change(G&& g, double lo, double hi, double tol,
                                                    const char* what)
{
    double g_lo = g(lo);
    double g_hi = g(hi);
    const bool s_lo = g_lo > 0.0;
    const bool s_hi = g_hi > 0.0;
    if (s_lo == s_hi) {
        std::ostringstream msg;
        msg << what << ": no sign change on [" << lo << ", " << hi << "] (g(lo) = " << g_lo
            << ", g(hi) = " << g_hi << ")";
        throw no_sign_change_error(msg.str());
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break; // interval at floating-point resolution
        ((g(mid) > 0.0) == s_lo ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), hi - lo};
}

} // namespace detail

/// Bisects the signed steering expression along one axis. The default
/// tolerance is 1e-9 times the axis scale; pass `tol` to pin it absolutely.
inline DeathPoint find_death_point(SteerDirection direction, const DetectorPairParams& fixed,
                                   SweepAxis axis, double lo, double hi, double tol = 0.0)
{
    validate_params(with_axis(fixed, axis, lo));
    validate_params(with_axis(fixed, axis, hi));
    if (!(lo < hi))
        throw validation_error("find_death_point: bracket must satisfy lo < hi");
    if (tol <= 0.0)
        tol = 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});
    auto g = [&](double x) { return steering_inner(direction, with_axis(fixed, axis, x)); };
    const auto [loc, width] = detail::bisect_sign_change(g, lo, hi, tol, "find_death_point");
    return {direction, loc, width};
}

struct ConcurrenceDeath {
    double location = 0.0;
    double bracket_width = 0.0;
};

/// Same bisection for the harvested-concurrence boundary.
inline ConcurrenceDeath find_concurrence_death(const DetectorPairParams& fixed, SweepAxis axis,
                                               double lo, double hi, double tol = 0.0)
{
    validate_params(with_axis(fixed, axis, lo));
    validate_params(with_axis(fixed, axis, hi));
    if (!(lo < hi))
        throw validation_error("find_concurrence_death: bracket must satisfy lo < hi");
    if (tol <= 0.0)
        tol = 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});
    auto g = [&](double x) { return concurrence_inner(with_axis(fixed, axis, x)); };
    const auto [loc, width] =
        detail::bisect_sign_change(g, lo, hi, tol, "find_concurrence_death");
    return {loc, width};
}

// ---------------------------------------------------------------------------
// Asymmetry peak
// ---------------------------------------------------------------------------

struct AsymmetryPeak {
    double location = 0.0;  ///< omega_b at the maximum
    double value = 0.0;     ///< peak asymmetry
    double tolerance = 0.0; ///< achieved bracket width on omega_b
};

/// Locates the maximum of the steering asymmetry over omega_b: a coarse grid
/// (at least 200 points) followed by golden-section refinement of the best
/// cell. The landscape is only piecewise smooth (its maximum can sit on the
/// sudden-death kink), which is why the search never uses derivatives.
inline AsymmetryPeak find_asymmetry_peak(const DetectorPairParams& fixed, double lo, double hi,
                                         int coarse = 400, double xtol = 1e-8)
{
    validate_params(with_axis(fixed, SweepAxis::omega_b, lo));
    validate_params(with_axis(fixed, SweepAxis::omega_b, hi));
    if (!(lo <= hi))
        throw validation_error("find_asymmetry_peak: range must satisfy lo <= hi");
    const auto f = [&](double wb) {
        return steering_closed_form(with_axis(fixed, SweepAxis::omega_b, wb)).asymmetry;
    };

    if (hi - lo <= xtol) {
        const double x = 0.5 * (lo + hi);
        const double v = f(x);
        if (v < 1e-15)
            throw no_peak_error("find_asymmetry_peak: flat asymmetry landscape");
        return {x, v, hi - lo};
    }

    const int n = std::max(coarse, 200);
    int best = 0;
    double best_val = -1.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        const double v = f(x);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }

    double a = lo + (hi - lo) * static_cast<double>(std::max(0, best - 1)) / (n - 1);
    double b = lo + (hi - lo) * static_cast<double>(std::min(n - 1, best + 1)) / (n - 1);
    constexpr double invphi = 0.6180339887498948482;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    const double loc = 0.5 * (a + b);
    const double val = f(loc);
    if (std::max({val, f1, f2, best_val}) < 1e-15)
        throw no_peak_error("find_asymmetry_peak: flat asymmetry landscape");
    return {loc, val, b - a};
}

} // namespace steerharvest
