#pragma once

/// \file oracle.hpp
/// \brief Independent quadrature evaluation of the detector amplitudes from
/// the regularized vacuum two-point function, used to validate the closed
/// forms in harvest.hpp.
///
/// Each amplitude is an integral of the switching Gaussians against the
/// iepsilon-regularized correlator. The double time integral collapses to a
/// single integral over u = tau - tau' once the Gaussian in tau + tau' is
/// integrated analytically; the raw 2D evaluations below exist to validate
/// that reduction. Values are computed for a descending epsilon sequence and
/// Richardson-extrapolated to epsilon -> 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "harvest.hpp"

namespace steerharvest {

/// Gaussian switching envelope chi(tau) = exp(-tau^2/2) in sigma units.
struct SwitchingProfile {
    double operator()(double tau) const { return std::exp(-0.5 * tau * tau); }
};

struct QuadratureSpec {
    std::vector<double> epsilons{4e-2, 2e-2, 1e-2}; ///< descending epsilon/sigma sequence
    int nodes = 4096;              ///< node budget per integration axis
    double half_width = 8.0;       ///< switching-time truncation, in sigma
    int extrapolation_order = 2;   ///< Richardson order (points used = order + 1)
    double rel_tolerance = 1e-3;   ///< requested relative accuracy of the limit
};

inline QuadratureSpec validate_spec(const QuadratureSpec& spec)
{
    if (spec.epsilons.empty())
        throw validation_error("quadrature: epsilon sequence empty");
    double prev = std::numeric_limits<double>::infinity();
    for (double e : spec.epsilons) {
        if (!std::isfinite(e) || e <= 0.0)
            throw validation_error("quadrature: epsilons must be finite and > 0");
        if (e >= prev)
            throw validation_error("quadrature: epsilons must be strictly descending");
        prev = e;
    }
    if (spec.nodes < 64)
        throw validation_error("quadrature: nodes must be >= 64");
    if (!(spec.half_width >= 6.0))
        throw validation_error("quadrature: half_width must be >= 6");
    if (spec.extrapolation_order < 1)
        throw validation_error("quadrature: extrapolation_order must be >= 1");
    if (!(spec.rel_tolerance > 0.0))
        throw validation_error("quadrature: rel_tolerance must be > 0");
    return spec;
}

/// Regularized massless vacuum two-point function in sigma units,
/// -(1/4 pi^2) / ((dt - i eps)^2 - dx^2).
inline complexd wightman(double dt, double dx, double eps)
{
    if (!std::isfinite(eps) || eps <= 0.0)
        throw domain_error("wightman: eps must be > 0 (the unregularized kernel is distributional)");
    constexpr double norm = -1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
    const complexd dt_reg(dt, -eps);
    return norm / (dt_reg * dt_reg - dx * dx);
}

namespace detail {

struct Gl16Point {
    double x, w;
};
inline constexpr std::array<Gl16Point, 16> gl16{{
    {-0.989400934991649932596, 0.0271524594117540948518},
    {-0.944575023073232576078, 0.0622535239386478928628},
    {-0.86563120238783174388, 0.0951585116824927848099},
    {-0.755404408355003033895, 0.124628971255533872052},
    {-0.617876244402643748447, 0.149595988816576732082},
    {-0.458016777657227386342, 0.169156519395002538189},
    {-0.28160355077925891323, 0.182603415044923588867},
    {-0.0950125098376374401853, 0.189450610455068496285},
    {0.0950125098376374401853, 0.189450610455068496285},
    {0.28160355077925891323, 0.182603415044923588867},
    {0.458016777657227386342, 0.169156519395002538189},
    {0.617876244402643748447, 0.149595988816576732082},
    {0.755404408355003033895, 0.124628971255533872052},
    {0.86563120238783174388, 0.0951585116824927848099},
    {0.944575023073232576078, 0.0622535239386478928628},
    {0.989400934991649932596, 0.0271524594117540948518},
}};

/// Panel breakpoints on [lo, hi]: geometric grading from eps/4 up to h_max
/// around each kernel feature in `sing`, uniform subdivision elsewhere.
inline std::vector<double> graded_mesh(double lo, double hi,
                                       const std::vector<double>& sing,
                                       double eps, double h_max)
{
    std::vector<double> pts{lo, hi};
    for (double s : sing) {
        if (s <= lo || s >= hi)
            continue;
        pts.push_back(s);
        for (double w = 0.25 * eps;; w *= 2.0) {
            if (s - w > lo) pts.push_back(s - w);
            if (s + w < hi) pts.push_back(s + w);
            if (w >= h_max || w >= hi - lo)
                break;
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<double> mesh;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i], b = pts[i + 1];
        const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h_max)));
        const double step = (b - a) / n;
        for (int k = 0; k < n; ++k) {
            mesh.push_back(a + k * step);
            mesh.push_back(k + 1 == n ? b : a + (k + 1) * step);
        }
    }
    return mesh; // flat [a0,b0, a1,b1, ...]
}

template <typename F>
inline complexd integrate_panels(F&& f, const std::vector<double>& mesh)
{
    complexd total(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < mesh.size(); i += 2) {
        const double mid = 0.5 * (mesh[i] + mesh[i + 1]);
        const double half = 0.5 * (mesh[i + 1] - mesh[i]);
        complexd acc(0.0, 0.0);
        for (const auto& q : gl16)
            acc += q.w * f(mid + half * q.x);
        total += half * acc;
    }
    return total;
}

/// Neville tableau at eps = 0 over the last (order+1) levels.
/// Returns the extrapolated value and the residual between the final two
/// diagonal entries.
inline std::pair<complexd, double> richardson(const std::vector<double>& eps,
                                              const std::vector<complexd>& vals, int order)
{
    const std::size_t use = std::min(vals.size(), static_cast<std::size_t>(order) + 1);
    const std::size_t off = vals.size() - use;
    std::vector<double> e(eps.end() - static_cast<std::ptrdiff_t>(use), eps.end());
    std::vector<complexd> row(vals.begin() + static_cast<std::ptrdiff_t>(off), vals.end());

    complexd diag_prev = row[0];
    for (std::size_t k = 1; k < use; ++k) {
        for (std::size_t i = 0; i + k < use; ++i)
            row[i] = (e[i] * row[i + 1] - e[i + k] * row[i]) / (e[i] - e[i + k]);
        if (k + 1 == use)
            return {row[0], std::abs(row[0] - diag_prev)};
        diag_prev = row[0];
    }
    return {row[0], std::abs(row[0] - diag_prev)}; // single level: residual 0
}

inline void check_convergence(const char* what, complexd value, double residual,
                              const QuadratureSpec& spec, double coupling)
{
    // Absolute floor: one millionth of the natural amplitude scale, so that
    // exponentially suppressed values do not trip the relative test.
    const double floor = 1e-6 * coupling * coupling / (4.0 * std::numbers::pi);
    const double scale = std::max(std::abs(value), floor);
    if (residual > 10.0 * spec.rel_tolerance * scale) {
        std::ostringstream msg;
        msg << what << ": extrapolation residual " << residual << " exceeds 10 * "
            << spec.rel_tolerance << " * " << scale << " (levels = " << spec.epsilons.size()
            << ", order = " << spec.extrapolation_order << ")";
        throw convergence_error(msg.str());
    }
}

template <typename Kernel>
inline complexd eps_extrapolated(const char* what, const QuadratureSpec& spec,
                                 double coupling, const std::vector<double>& sing,
                                 Kernel&& kernel_at_eps)
{
    const double U = 2.0 * spec.half_width;
    const double h_max = 64.0 * spec.half_width / static_cast<double>(spec.nodes);
    std::vector<complexd> vals;
    vals.reserve(spec.epsilons.size());
    for (double eps : spec.epsilons) {
        const auto mesh = graded_mesh(-U, U, sing, eps, h_max);
        vals.push_back(integrate_panels([&](double u) { return kernel_at_eps(u, eps); }, mesh));
    }
    auto [value, residual] = richardson(spec.epsilons, vals, spec.extrapolation_order);
    check_convergence(what, value, residual, spec, coupling);
    return value;
}

inline void run_chunked(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn)
{
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    const unsigned nt = std::min(threads, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (unsigned t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += nt)
                fn(i);
        });
    for (auto& th : pool)
        th.join();
}

} // namespace detail

/// Transition probability from the regularized double time integral,
/// reduced to a single integral over u = tau - tau'.
inline double quad_transition_probability(double omega, double coupling,
                                          const QuadratureSpec& spec = {})
{
    if (!std::isfinite(omega) || omega <= 0.0)
        throw domain_error("quad_transition_probability: omega must be finite and > 0");
    if (!std::isfinite(coupling) || coupling < 0.0)
        throw domain_error("quad_transition_probability: coupling must be finite and >= 0");
    validate_spec(spec);
    const double lam2 = coupling * coupling;
    const complexd integral = detail::eps_extrapolated(
        "quad_transition_probability", spec, coupling, {0.0}, [&](double u, double eps) {
            return std::exp(-0.25 * u * u) * std::exp(complexd(0.0, -omega * u)) *
                   wightman(u, 0.0, eps);
        });
    return lam2 * detail::sqrt_pi * integral.real();
}

/// Exchange amplitude C from the regularized integrals.
inline complexd quad_correlation_c(const DetectorPairParams& p, const QuadratureSpec& spec = {})
{
    validate_params(p);
    validate_spec(spec);
    const double l = p.separation;
    const double mu = p.omega_a + p.omega_b;
    const double d = p.omega_b - p.omega_a;
    const double lam2 = p.coupling * p.coupling;
    const complexd integral = detail::eps_extrapolated(
        "quad_correlation_c", spec, p.coupling, {-l, l}, [&](double u, double eps) {
            return std::exp(-0.25 * u * u) * std::exp(complexd(0.0, -0.5 * mu * u)) *
                   wightman(u, l, eps);
        });
    return lam2 * detail::sqrt_pi * std::exp(-0.25 * d * d) * integral;
}

/// Nonlocal amplitude X from the regularized integrals, with the literal
/// time-ordered kernel: the step functions select which argument ordering of
/// the two-point function applies on each triangle of the (tau, tau') square.
inline complexd quad_correlation_x(const DetectorPairParams& p, const QuadratureSpec& spec = {})
{
    validate_params(p);
    validate_spec(spec);
    const double l = p.separation;
    const double mu = p.omega_a + p.omega_b;
    const double d = p.omega_b - p.omega_a;
    const double lam2 = p.coupling * p.coupling;
    const complexd integral = detail::eps_extrapolated(
        "quad_correlation_x", spec, p.coupling, {-l, 0.0, l}, [&](double u, double eps) {
            const complexd w = u <= 0.0 ? wightman(u, l, eps) : wightman(-u, l, eps);
            return std::exp(-0.25 * u * u) * std::exp(complexd(0.0, 0.5 * d * u)) * w;
        });
    return -lam2 * detail::sqrt_pi * std::exp(-0.25 * mu * mu) * integral;
}

/// Deliberately wrong variant of X that drops the time ordering; it must not
/// agree with quad_correlation_x (regression guard for the kernel split).
inline complexd quad_correlation_x_unordered(const DetectorPairParams& p,
                                             const QuadratureSpec& spec = {})
{
    validate_params(p);
    validate_spec(spec);
    const double l = p.separation;
    const double mu = p.omega_a + p.omega_b;
    const double d = p.omega_b - p.omega_a;
    const double lam2 = p.coupling * p.coupling;
    const complexd integral = detail::eps_extrapolated(
        "quad_correlation_x_unordered", spec, p.coupling, {-l, l}, [&](double u, double eps) {
            return std::exp(-0.25 * u * u) * std::exp(complexd(0.0, 0.5 * d * u)) *
                   wightman(u, l, eps);
        });
    return -lam2 * detail::sqrt_pi * std::exp(-0.25 * mu * mu) * integral;
}

namespace detail {

template <typename F>
inline complexd tensor_grid_sum(double half_width, int panels_per_axis, F&& f)
{
    std::vector<double> xs, ws;
    const double panel = 2.0 * half_width / panels_per_axis;
    for (int i = 0; i < panels_per_axis; ++i) {
        const double a = -half_width + i * panel;
        for (const auto& q : gl16) {
            xs.push_back(a + 0.5 * panel * (1.0 + q.x));
            ws.push_back(0.5 * panel * q.w);
        }
    }
    complexd total(0.0, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        complexd inner(0.0, 0.0);
        for (std::size_t j = 0; j < xs.size(); ++j)
            inner += ws[j] * f(xs[i], xs[j]);
        total += ws[i] * inner;
    }
    return total;
}

} // namespace detail

/// Raw 2D tensor-grid evaluation of the transition probability at fixed eps
/// (no reduction, no extrapolation). Exists to validate the 1D reduction.
inline double quad_transition_probability_2d(double omega, double coupling, double eps,
                                             double half_width = 8.0, int panels_per_axis = 128)
{
    const SwitchingProfile chi;
    const complexd val = detail::tensor_grid_sum(half_width, panels_per_axis,
        [&](double tau, double tau2) {
            return chi(tau) * chi(tau2) * std::exp(complexd(0.0, -omega * (tau - tau2))) *
                   wightman(tau - tau2, 0.0, eps);
        });
    return coupling * coupling * val.real();
}

inline complexd quad_correlation_c_2d(const DetectorPairParams& p, double eps,
                                      double half_width = 8.0, int panels_per_axis = 128)
{
    validate_params(p);
    const SwitchingProfile chi;
    const complexd val = detail::tensor_grid_sum(half_width, panels_per_axis,
        [&](double tau, double tau2) {
            return chi(tau) * chi(tau2) *
                   std::exp(complexd(0.0, -(p.omega_a * tau - p.omega_b * tau2))) *
                   wightman(tau - tau2, p.separation, eps);
        });
    return p.coupling * p.coupling * val;
}

inline complexd quad_correlation_x_2d(const DetectorPairParams& p, double eps,
                                      double half_width = 8.0, int panels_per_axis = 128)
{
    validate_params(p);
    const SwitchingProfile chi;
    const complexd val = detail::tensor_grid_sum(half_width, panels_per_axis,
        [&](double tau, double tau2) {
            const double u = tau - tau2;
            complexd w;
            if (u < 0.0)
                w = wightman(u, p.separation, eps);
            else if (u > 0.0)
                w = wightman(-u, p.separation, eps);
            else
                w = wightman(0.0, p.separation, eps); // both orderings coincide at u = 0
            return chi(tau) * chi(tau2) *
                   std::exp(complexd(0.0, -(p.omega_a * tau + p.omega_b * tau2))) * w;
        });
    return -p.coupling * p.coupling * val;
}

// ---------------------------------------------------------------------------
// Verification panel
// ---------------------------------------------------------------------------

struct VerificationRow {
    double omega_a = 0.0;
    double omega_b = 0.0;
    double separation = 0.0;
    std::string quantity;      ///< "P_A", "P_B", "C", "X"
    complexd closed_form{0.0, 0.0};
    complexd quadrature{0.0, 0.0};
    double rel_error = 0.0;
    bool pass = false;
};

/// 12-point parameter panel: omega_a in {0.5, 1.2}, gap difference in
/// {0, 0.5 omega_a}, separation in {0.5, 1, 2}.
inline std::vector<std::array<double, 3>> default_panel()
{
    std::vector<std::array<double, 3>> panel;
    for (double wa : {0.5, 1.2})
        for (double frac : {0.0, 0.5})
            for (double l : {0.5, 1.0, 2.0})
                panel.push_back({wa, wa * (1.0 + frac), l});
    return panel;
}

/// Compares quadrature and closed forms for P_A, P_B, C, X over the panel.
/// Row order is deterministic regardless of the thread count.
inline std::vector<VerificationRow> verify_panel(const QuadratureSpec& spec = {},
                                                 double coupling = 0.1,
                                                 double tolerance = 1e-3,
                                                 unsigned threads = 1)
{
    validate_spec(spec);
    const auto panel = default_panel();
    std::vector<VerificationRow> rows(panel.size() * 4);

    detail::run_chunked(panel.size(), threads, [&](std::size_t i) {
        const auto [wa, wb, l] = panel[i];
        const DetectorPairParams p{coupling, wa, wb, l};
        const char* names[4] = {"P_A", "P_B", "C", "X"};
        complexd closed[4] = {
            complexd(transition_probability(wa, coupling), 0.0),
            complexd(transition_probability(wb, coupling), 0.0),
            correlation_c(p),
            correlation_x(p),
        };
        complexd quad[4];
        try {
            quad[0] = complexd(quad_transition_probability(wa, coupling, spec), 0.0);
            quad[1] = complexd(quad_transition_probability(wb, coupling, spec), 0.0);
            quad[2] = quad_correlation_c(p, spec);
            quad[3] = quad_correlation_x(p, spec);
        } catch (const numerical_error&) {
            for (std::size_t q = 0; q < 4; ++q) {
                auto& row = rows[4 * i + q];
                row = {wa, wb, l, names[q], closed[q],
                       complexd(std::numeric_limits<double>::quiet_NaN(), 0.0),
                       std::numeric_limits<double>::quiet_NaN(), false};
            }
            return;
        }
        for (std::size_t q = 0; q < 4; ++q) {
            auto& row = rows[4 * i + q];
            row.omega_a = wa;
            row.omega_b = wb;
            row.separation = l;
            row.quantity = names[q];
            row.closed_form = closed[q];
            row.quadrature = quad[q];
            row.rel_error = std::abs(quad[q] - closed[q]) / std::abs(closed[q]);
            row.pass = row.rel_error <= tolerance;
        }
    });
    return rows;
}

} // namespace steerharvest
