// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Every tolerance is pinned in the checks themselves.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "steerharvest/steerharvest.hpp"
#include "test_oracles.hpp"

using namespace steerharvest;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& name, const std::string& evidence)
{
    std::printf("[%s] %2d. %s (%s)\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
                evidence.c_str());
    if (!pass)
        ++g_failures;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// -- 1 -----------------------------------------------------------------
void criterion_identity()
{
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> uwa(0.1, 2.0);
    std::uniform_real_distribution<double> udw(0.0, 2.0);
    std::uniform_real_distribution<double> ul(0.05, 5.0);
    double worst = 0.0;
    bool regimes_match = true;
    for (int i = 0; i < 10000; ++i) {
        DetectorPairParams p{0.1, uwa(rng), 0.0, ul(rng)};
        p.omega_b = p.omega_a + udw(rng);
        const SteeringResult closed = steering_closed_form(p);
        const SteeringResult generic = steering(perturbative_state(p).second);
        worst = std::max({worst, std::abs(closed.s_a_to_b - generic.s_a_to_b),
                          std::abs(closed.s_b_to_a - generic.s_b_to_a),
                          std::abs(closed.asymmetry - generic.asymmetry)});
        regimes_match = regimes_match && closed.regime == generic.regime;
    }
    report(1, worst <= 1e-12 && regimes_match,
           "closed-form steering equals the generic X-state route on 10^4 random tuples",
           "max componentwise deviation " + fmt(worst) + " <= 1e-12");
}

// -- 2 -----------------------------------------------------------------
void criterion_oracle_panel()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<VerificationRow> rows;
    std::string error;
    try {
        rows = verify_panel(QuadratureSpec{}, 0.1, 1e-3, 1);
    } catch (const std::exception& e) {
        error = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    double worst = 0.0;
    std::size_t passed = 0;
    for (const auto& r : rows) {
        worst = std::max(worst, r.rel_error);
        passed += r.pass ? 1 : 0;
    }
    const bool ok = error.empty() && rows.size() == 48 && passed == rows.size() &&
                    seconds <= 300.0;
    report(2, ok, "quadrature oracle matches the closed forms over the 12-point panel",
           error.empty() ? std::to_string(passed) + "/48 within 1e-3, worst rel " +
                               fmt(worst) + ", " + fmt(seconds) + " s <= 300 s"
                         : "error: " + error);
}

// -- 3 -----------------------------------------------------------------
void criterion_ordering()
{
    const struct { double omega_a; std::vector<double> ratios; } grids[] = {
        {0.5, {1.0}}, {1.0, {1.0}},                 // fig1 parameter sets
        {0.5, {0.0, 0.2, 0.6}},                     // fig2 panels (a), (b)
        {1.2, {0.0, 0.25, 0.5}},                    // fig2 panels (c), (d)
    };
    long violations = 0;
    long points = 0;
    for (const auto& g : grids)
        for (double ratio : g.ratios) {
            SweepSpec spec;
            spec.axis1 = {SweepAxis::separation, 0.01, 3.0, 300};
            spec.fixed = {0.1, g.omega_a, g.omega_a * (1.0 + ratio), 1.0};
            for (const auto& row : sweep(spec).rows) {
                ++points;
                violations += row.s_a_to_b < row.s_b_to_a ? 1 : 0;
            }
        }
    report(3, violations == 0,
           "the small-gap observer's steering dominates on every grid point",
           std::to_string(points) + " points, " + std::to_string(violations) + " violations");
}

// -- 4 -----------------------------------------------------------------
void criterion_death_ordering()
{
    bool ok = true;
    std::ostringstream ev;
    for (double wa : {0.5, 1.0}) {
        const DetectorPairParams p{0.1, wa, 2.0 * wa, 1.0};
        const auto ba =
            find_death_point(SteerDirection::BtoA, p, SweepAxis::separation, 0.005, 0.5, 1e-9);
        const auto ab =
            find_death_point(SteerDirection::AtoB, p, SweepAxis::separation, 0.005, 0.5, 1e-9);
        ok = ok && ba.location < ab.location && ba.bracket_width <= 1e-9 &&
             ab.bracket_width <= 1e-9;
        ev << "omega_a=" << wa << ": " << fmt(ba.location) << " < " << fmt(ab.location) << "; ";
    }
    report(4, ok, "B->A steering dies strictly earlier, both boundaries bisected to 1e-9",
           ev.str());
}

// -- 5 -----------------------------------------------------------------
void criterion_range_monotonicity()
{
    bool ok = true;
    std::ostringstream ev;
    double prev_ab = 0.0;
    double prev_ba = std::numeric_limits<double>::infinity();
    for (double ratio : {0.0, 0.2, 0.6}) {
        const DetectorPairParams p{0.1, 0.5, 0.5 * (1.0 + ratio), 1.0};
        const double ab =
            find_death_point(SteerDirection::AtoB, p, SweepAxis::separation, 0.005, 0.5, 1e-9)
                .location;
        const double ba =
            find_death_point(SteerDirection::BtoA, p, SweepAxis::separation, 0.005, 0.5, 1e-9)
                .location;
        ok = ok && ab >= prev_ab && ba <= prev_ba;
        prev_ab = ab;
        prev_ba = ba;
        ev << "r=" << ratio << ": AtoB " << fmt(ab) << ", BtoA " << fmt(ba) << "; ";
    }
    report(5, ok, "gap difference widens the A->B range and narrows the B->A range", ev.str());
}

// -- 6 -----------------------------------------------------------------
void criterion_peak_coincidence()
{
    bool ok = true;
    std::ostringstream ev;
    for (double l : {0.003, 0.01}) {
        const DetectorPairParams p{0.1, 0.5, 1.0, l};
        const auto peak = find_asymmetry_peak(p, 0.5, 4.0, 400, 1e-8);
        const auto death =
            find_death_point(SteerDirection::BtoA, p, SweepAxis::omega_b, 0.55, 4.0, 1e-9);
        const double diff = std::abs(peak.location - death.location);
        ok = ok && diff <= 1e-4;
        ev << "L=" << l << ": |peak-death| = " << fmt(diff) << "; ";
    }
    report(6, ok, "asymmetry peak sits on the B->A sudden death at small separation",
           ev.str() + "tolerance 1e-4");
}

// -- 7 -----------------------------------------------------------------
void criterion_identical_symmetry()
{
    double worst = 0.0;
    long points = 0;
    for (double omega : {0.3, 0.5, 1.0, 1.2, 2.0}) {
        SweepSpec spec;
        spec.axis1 = {SweepAxis::separation, 0.01, 3.0, 300};
        spec.fixed = {0.1, omega, omega, 1.0};
        for (const auto& row : sweep(spec).rows) {
            worst = std::max(worst, row.asymmetry);
            ++points;
        }
    }
    for (double l : {0.003, 0.05, 0.5}) {
        for (int i = 0; i <= 200; ++i) {
            const double omega = 0.1 + 2.9 * i / 200.0;
            worst = std::max(worst,
                             steering_closed_form({0.1, omega, omega, l}).asymmetry);
            ++points;
        }
    }
    report(7, worst <= 1e-15, "identical detectors never harvest asymmetry",
           std::to_string(points) + " points, max asymmetry " + fmt(worst) + " <= 1e-15");
}

// -- 8 -----------------------------------------------------------------
void criterion_entanglement_range()
{
    bool ok = true;
    std::ostringstream ev;
    for (double wa : {0.5, 1.0}) {
        const DetectorPairParams p{0.1, wa, 2.0 * wa, 1.0};
        const double steer_ab =
            find_death_point(SteerDirection::AtoB, p, SweepAxis::separation, 0.005, 0.5, 1e-9)
                .location;
        const double conc =
            find_concurrence_death(p, SweepAxis::separation, 0.5, 6.0, 1e-9).location;
        ok = ok && conc > steer_ab;
        ev << "omega_a=" << wa << ": concurrence " << fmt(conc) << " > steering "
           << fmt(steer_ab) << "; ";
    }
    report(8, ok, "entanglement survives past the steering range", ev.str());
}

// -- 9 -----------------------------------------------------------------
void criterion_specfun()
{
    bool ok = true;
    std::ostringstream ev;

    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> radius(0.0, 5.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    double worst_conj = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double r = radius(rng);
        const double th = angle(rng);
        const complexd z(r * std::cos(th), r * std::sin(th));
        const complexd lhs = faddeeva(complexd(-z.real(), z.imag()));
        const complexd rhs = std::conj(faddeeva(z));
        worst_conj = std::max(worst_conj, std::abs(lhs - rhs) / std::abs(rhs));
    }
    ok = ok && worst_conj <= 1e-11;
    ev << "conj identity " << fmt(worst_conj) << " <= 1e-11; ";

    std::uniform_real_distribution<double> coord(-2.5, 2.5);
    double worst_mutual = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const complexd z(coord(rng), coord(rng));
        const complexd iz(-z.imag(), z.real());
        const complexd via_w = 1.0 - std::exp(-z * z) * faddeeva(iz);
        if (std::abs(via_w) > 1e-8)
            worst_mutual =
                std::max(worst_mutual, std::abs(erf(z) - via_w) / std::abs(via_w));
        const complexd ei = erfi(z);
        const complexd v = erf(iz);
        const complexd mi(v.imag(), -v.real());
        if (std::abs(mi) > 1e-8)
            worst_mutual = std::max(worst_mutual, std::abs(ei - mi) / std::abs(mi));
    }
    ok = ok && worst_mutual <= 1e-11;
    ev << "mutual consistency " << fmt(worst_mutual) << " <= 1e-11; ";

    double worst_axis = 0.0;
    for (int i = -60; i <= 60; ++i)
        worst_axis = std::max(worst_axis, std::abs(erf(complexd(i / 10.0, 0.0)).imag()));
    ok = ok && worst_axis <= 1e-15;

    const double d_w = std::abs(faddeeva({1.0, 1.0}) - test_oracle::w_maclaurin({1.0, 1.0}, 30)) /
                       std::abs(test_oracle::w_maclaurin({1.0, 1.0}, 30));
    const double d_erf = std::abs(erf(complexd(1.0, 0.0)) -
                                  test_oracle::erf_maclaurin({1.0, 0.0}, 40));
    const double d_erfi = std::abs(erfi(complexd(0.5, 0.0)) -
                                   test_oracle::erfi_maclaurin({0.5, 0.0}, 40));
    const double d_erfc = std::abs(steerharvest::erfc(2.0) - test_oracle::erfc_lentz(2.0)) /
                          steerharvest::erfc(2.0);
    ok = ok && d_w <= 1e-12 && d_erf <= 1e-12 && d_erfi <= 1e-12 && d_erfc <= 1e-14;
    ev << "derived values " << fmt(std::max({d_w, d_erf, d_erfi})) << " <= 1e-12, erfc "
       << fmt(d_erfc) << " <= 1e-14";

    report(9, ok, "special-function identities and derived values at stated tolerances",
           ev.str());
}

// -- 10 ----------------------------------------------------------------
void criterion_figure_determinism()
{
#ifdef STEERHARVEST_CLI_PATH
    if (std::system("mkdir -p acceptance_scratch") != 0)
        return report(10, false, "figure outputs are byte-identical across consecutive runs",
                      "cannot create scratch directory");
    bool ok = true;
    std::ostringstream ev;
    for (const char* fig : {"fig1", "fig2", "fig3", "fig4"}) {
        const std::string a = std::string("acceptance_scratch/") + fig + "_a.csv";
        const std::string b = std::string("acceptance_scratch/") + fig + "_b.csv";
        const std::string base = std::string("\"") + STEERHARVEST_CLI_PATH + "\" figure " + fig;
        const int ra = std::system((base + " --out " + a + " >/dev/null 2>&1").c_str());
        const int rb = std::system((base + " --out " + b + " >/dev/null 2>&1").c_str());
        auto slurp = [](const std::string& path) {
            std::ifstream in(path, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        const std::string ca = slurp(a);
        const bool same = WIFEXITED(ra) && WEXITSTATUS(ra) == 0 && WIFEXITED(rb) &&
                          WEXITSTATUS(rb) == 0 && !ca.empty() && ca == slurp(b);
        ok = ok && same;
        ev << fig << (same ? " ok; " : " MISMATCH; ");
    }
    report(10, ok, "figure outputs are byte-identical across consecutive runs", ev.str());
#else
    report(10, false, "figure outputs are byte-identical across consecutive runs",
           "CLI binary path not configured");
#endif
}

} // namespace

int main()
{
    criterion_identity();
    criterion_oracle_panel();
    criterion_ordering();
    criterion_death_ordering();
    criterion_range_monotonicity();
    criterion_peak_coincidence();
    criterion_identical_symmetry();
    criterion_entanglement_range();
    criterion_specfun();
    criterion_figure_determinism();

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 10 acceptance criteria passed\n");
    return 0;
}
