// Command-line surface: point evaluation, sweeps, boundary and peak
// searches, figure-data reproduction and the quadrature verification panel.
//
// Exit codes: 0 success, 1 validation/usage error, 2 numerical failure.
// Errors print one machine-parseable JSON line on stderr.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "steerharvest/steerharvest.hpp"

namespace sh = steerharvest;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

unsigned worker_count()
{
    if (const char* env = std::getenv("STEERHARVEST_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && n >= 1)
            return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void write_output(const std::string& path, const std::string& content)
{
    if (path.empty()) {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw sh::validation_error("cannot open output file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

// Simple column-oriented table; cells are preformatted strings.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string csv() const
    {
        std::string out;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            out += columns[c];
            out += c + 1 == columns.size() ? '\n' : ',';
        }
        for (const auto& row : rows)
            for (std::size_t c = 0; c < row.size(); ++c) {
                out += row[c];
                out += c + 1 == row.size() ? '\n' : ',';
            }
        return out;
    }
};

// JSON variant keeps numeric cells numeric.
ordered_json rows_json(const Table& table, const std::vector<bool>& numeric)
{
    ordered_json arr = ordered_json::array();
    for (const auto& row : table.rows) {
        ordered_json obj;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (numeric[c]) {
                const double v = std::strtod(row[c].c_str(), nullptr);
                obj[table.columns[c]] = v;
            } else {
                obj[table.columns[c]] = row[c];
            }
        }
        arr.push_back(std::move(obj));
    }
    return arr;
}

struct ParamFlags {
    double omega_a = 0.5;
    double omega_b = 0.0; // resolved below
    double gap_ratio = 1.0;
    double separation = 1.0;
    double coupling = 0.1;
    bool omega_b_given = false;

    sh::DetectorPairParams resolve() const
    {
        sh::DetectorPairParams p;
        p.coupling = coupling;
        p.omega_a = omega_a;
        p.omega_b = omega_b_given ? omega_b : omega_a * (1.0 + gap_ratio);
        p.separation = separation;
        sh::validate_params(p);
        if (sh::perturbative_warning(p))
            std::fprintf(stderr,
                         "warning: coupling %.6g puts lambda^2/(4pi) above 0.01; "
                         "second-order amplitudes are only qualitative there\n",
                         p.coupling);
        return p;
    }
};

void add_param_flags(CLI::App* cmd, ParamFlags& f)
{
    cmd->add_option("--omega-a", f.omega_a, "Energy gap of detector A (Omega_A*sigma)")
        ->capture_default_str();
    auto* ob = cmd->add_option("--omega-b", f.omega_b, "Energy gap of detector B (Omega_B*sigma)");
    auto* gr = cmd->add_option("--gap-ratio", f.gap_ratio,
                               "Gap difference over Omega_A; sets omega_b = omega_a*(1+ratio)")
                   ->capture_default_str();
    ob->excludes(gr);
    gr->excludes(ob);
    cmd->parse_complete_callback([&f, ob] { f.omega_b_given = ob->count() > 0; });
    cmd->add_option("--sep", f.separation, "Detector separation L/sigma")->capture_default_str();
    cmd->add_option("--coupling", f.coupling, "Coupling constant lambda")->capture_default_str();
}

struct OutputFlags {
    std::string out;
    std::string format = "json";
};

void add_output_flags(CLI::App* cmd, OutputFlags& f, const std::string& default_format)
{
    f.format = default_format;
    cmd->add_option("--out", f.out, "Output path (stdout when omitted)");
    cmd->add_option("--format", f.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

const std::vector<std::string> kEvalColumns = {
    "p_a", "p_b", "abs_x", "abs_c", "s_a_to_b", "s_b_to_a",
    "asymmetry", "concurrence", "regime"};

std::vector<std::string> eval_cells(const sh::DetectorPairParams& p)
{
    const sh::PerturbativeState s = sh::perturbative_amplitudes(p);
    const sh::SteeringResult st = sh::steering_closed_form(p);
    const double conc = sh::concurrence_harvested(p);
    return {fmt17(s.p_a),       fmt17(s.p_b),      fmt17(std::abs(s.corr_x)),
            fmt17(std::abs(s.corr_c)), fmt17(st.s_a_to_b), fmt17(st.s_b_to_a),
            fmt17(st.asymmetry), fmt17(conc),       sh::to_string(st.regime)};
}

int cmd_eval(const ParamFlags& pf, const OutputFlags& of)
{
    const sh::DetectorPairParams p = pf.resolve();
    Table t{kEvalColumns, {eval_cells(p)}};
    if (of.format == "csv") {
        write_output(of.out, t.csv());
    } else {
        std::vector<bool> numeric(t.columns.size(), true);
        numeric.back() = false;
        write_output(of.out, rows_json(t, numeric)[0].dump() + "\n");
    }
    return 0;
}

Table sweep_table(const sh::SweepTable& tbl)
{
    Table t;
    t.columns.push_back(sh::to_string(tbl.spec.axis1.axis));
    if (tbl.spec.axis2)
        t.columns.push_back(sh::to_string(tbl.spec.axis2->axis));
    for (const auto& c : tbl.spec.outputs)
        t.columns.push_back(c);
    t.columns.push_back("error");
    const auto cell = [](const sh::SweepRow& r, const std::string& name) {
        if (name == "p_a") return fmt17(r.p_a);
        if (name == "p_b") return fmt17(r.p_b);
        if (name == "abs_x") return fmt17(r.abs_x);
        if (name == "abs_c") return fmt17(r.abs_c);
        if (name == "s_a_to_b") return fmt17(r.s_a_to_b);
        if (name == "s_b_to_a") return fmt17(r.s_b_to_a);
        if (name == "asymmetry") return fmt17(r.asymmetry);
        if (name == "concurrence") return fmt17(r.concurrence);
        return std::string(sh::to_string(r.regime));
    };
    for (const auto& r : tbl.rows) {
        std::vector<std::string> cells;
        cells.push_back(fmt17(r.axis1_value));
        if (r.axis2_value)
            cells.push_back(fmt17(*r.axis2_value));
        for (const auto& name : tbl.spec.outputs)
            cells.push_back(cell(r, name));
        cells.push_back(r.error);
        t.rows.push_back(std::move(cells));
    }
    return t;
}

bool is_text_column(const std::string& name)
{
    return name == "regime" || name == "error" || name == "quantity" || name == "pass" ||
           name == "measure" || name == "direction" || name == "axis";
}

void emit_table(const Table& t, const OutputFlags& of)
{
    if (of.format == "csv") {
        write_output(of.out, t.csv());
        return;
    }
    std::vector<bool> numeric(t.columns.size());
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        numeric[i] = !is_text_column(t.columns[i]);
    write_output(of.out, rows_json(t, numeric).dump(2) + "\n");
}

int cmd_sweep(const ParamFlags& pf, const OutputFlags& of, const std::string& axis_name,
              double min, double max, int count)
{
    const auto axis = sh::parse_axis(axis_name);
    if (!axis)
        throw sh::validation_error("unknown sweep axis: " + axis_name);
    sh::SweepSpec spec;
    spec.axis1 = {*axis, min, max, count};
    spec.fixed = pf.resolve();
    const sh::SweepTable tbl = sh::sweep(spec, worker_count());
    emit_table(sweep_table(tbl), of);
    return 0;
}

int cmd_death(const ParamFlags& pf, const OutputFlags& of, const std::string& measure,
              const std::string& direction, const std::string& axis_name, double min, double max)
{
    const auto axis = sh::parse_axis(axis_name);
    if (!axis)
        throw sh::validation_error("unknown axis: " + axis_name);
    const sh::DetectorPairParams p = pf.resolve();

    Table t{{"measure", "direction", "axis", "location", "bracket_width"}, {}};
    if (measure == "concurrence") {
        const auto d = sh::find_concurrence_death(p, *axis, min, max);
        t.rows.push_back({"concurrence", "", axis_name, fmt17(d.location), fmt17(d.bracket_width)});
    } else {
        const auto dir = direction == "a_to_b" ? sh::SteerDirection::AtoB : sh::SteerDirection::BtoA;
        const auto d = sh::find_death_point(dir, p, *axis, min, max);
        t.rows.push_back({"steering", direction, axis_name, fmt17(d.location), fmt17(d.bracket_width)});
    }
    if (of.format == "csv") {
        write_output(of.out, t.csv());
    } else {
        std::vector<bool> numeric{false, false, false, true, true};
        write_output(of.out, rows_json(t, numeric)[0].dump() + "\n");
    }
    return 0;
}

int cmd_peak(const ParamFlags& pf, const OutputFlags& of, double min, double max, int count)
{
    const sh::DetectorPairParams p = pf.resolve();
    const auto peak = sh::find_asymmetry_peak(p, min, max, count);
    Table t{{"location", "value", "tolerance"},
            {{fmt17(peak.location), fmt17(peak.value), fmt17(peak.tolerance)}}};
    if (of.format == "csv") {
        write_output(of.out, t.csv());
    } else {
        std::vector<bool> numeric{true, true, true};
        write_output(of.out, rows_json(t, numeric)[0].dump() + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Figure data
// ---------------------------------------------------------------------------

struct FigureRange {
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    bool min_given = false, max_given = false, count_given = false;
};

double grid_at(double lo, double hi, int n, int i)
{
    return lo + (hi - lo) * static_cast<double>(i) / (n - 1);
}

// Steering vs separation at gap ratio 1; one curve per file, the detector-A
// gap selectable (defaults to the small-gap panel).
Table figure_fig1(double omega_a, double coupling, const FigureRange& r)
{
    const double lo = r.min_given ? r.min : 0.01;
    const double hi = r.max_given ? r.max : 0.3;
    const int n = r.count_given ? r.count : 300;
    Table t{{"L_over_sigma", "s_a_to_b", "s_b_to_a", "asymmetry"}, {}};
    for (int i = 0; i < n; ++i) {
        const double l = grid_at(lo, hi, n, i);
        const auto s = sh::steering_closed_form({coupling, omega_a, 2.0 * omega_a, l});
        t.rows.push_back({fmt17(l), fmt17(s.s_a_to_b), fmt17(s.s_b_to_a), fmt17(s.asymmetry)});
    }
    return t;
}

// Steering vs separation for several gap ratios at the two panel gaps.
Table figure_fig2(double coupling, const FigureRange& r)
{
    const double lo = r.min_given ? r.min : 0.01;
    const double hi = r.max_given ? r.max : 0.3;
    const int n = r.count_given ? r.count : 300;
    const struct { double omega_a; std::vector<double> ratios; } panels[] = {
        {0.5, {0.0, 0.2, 0.6}}, {1.2, {0.0, 0.25, 0.5}}};
    Table t{{"omega_a", "gap_ratio", "L_over_sigma", "s_a_to_b", "s_b_to_a"}, {}};
    for (const auto& panel : panels)
        for (double ratio : panel.ratios)
            for (int i = 0; i < n; ++i) {
                const double l = grid_at(lo, hi, n, i);
                const auto s = sh::steering_closed_form(
                    {coupling, panel.omega_a, panel.omega_a * (1.0 + ratio), l});
                t.rows.push_back({fmt17(panel.omega_a), fmt17(ratio), fmt17(l),
                                  fmt17(s.s_a_to_b), fmt17(s.s_b_to_a)});
            }
    return t;
}

// Steering and asymmetry vs the detector-B gap for small and large
// separations.
Table figure_fig3(double omega_a, double coupling, const FigureRange& r)
{
    const double lo = r.min_given ? r.min : omega_a;
    const double hi = r.max_given ? r.max : 4.0;
    const int n = r.count_given ? r.count : 400;
    Table t{{"L_over_sigma", "omega_b", "s_a_to_b", "s_b_to_a", "asymmetry"}, {}};
    for (double l : {0.003, 0.01, 0.4, 1.0})
        for (int i = 0; i < n; ++i) {
            const double wb = grid_at(lo, hi, n, i);
            const auto s = sh::steering_closed_form({coupling, omega_a, wb, l});
            t.rows.push_back({fmt17(l), fmt17(wb), fmt17(s.s_a_to_b), fmt17(s.s_b_to_a),
                              fmt17(s.asymmetry)});
        }
    return t;
}

// Steering and asymmetry vs gap ratio at representative (gap, separation)
// pairs.
Table figure_fig4(double coupling, const FigureRange& r)
{
    const double lo = r.min_given ? r.min : 0.0;
    const double hi = r.max_given ? r.max : 4.0;
    const int n = r.count_given ? r.count : 400;
    const struct { double omega_a, l; } panels[] = {
        {0.5, 0.4}, {0.5, 1.0}, {1.2, 0.4}, {1.2, 1.0}};
    Table t{{"omega_a", "L_over_sigma", "gap_ratio", "s_a_to_b", "s_b_to_a", "asymmetry"}, {}};
    for (const auto& panel : panels)
        for (int i = 0; i < n; ++i) {
            const double ratio = grid_at(lo, hi, n, i);
            const auto s = sh::steering_closed_form(
                {coupling, panel.omega_a, panel.omega_a * (1.0 + ratio), panel.l});
            t.rows.push_back({fmt17(panel.omega_a), fmt17(panel.l), fmt17(ratio),
                              fmt17(s.s_a_to_b), fmt17(s.s_b_to_a), fmt17(s.asymmetry)});
        }
    return t;
}

int cmd_figure(const std::string& name, double omega_a, double coupling, const FigureRange& r,
               OutputFlags of)
{
    if (of.out.empty())
        of.out = name + ".csv";
    Table t;
    if (name == "fig1")
        t = figure_fig1(omega_a, coupling, r);
    else if (name == "fig2")
        t = figure_fig2(coupling, r);
    else if (name == "fig3")
        t = figure_fig3(omega_a, coupling, r);
    else if (name == "fig4")
        t = figure_fig4(coupling, r);
    else
        throw sh::validation_error("unknown figure: " + name);
    if (sh::perturbative_warning({coupling, 1.0, 1.0, 1.0}))
        std::fprintf(stderr, "warning: coupling %.6g puts lambda^2/(4pi) above 0.01\n", coupling);
    emit_table(t, of);
    return 0;
}

int cmd_verify(const std::string& panel, double coupling, const OutputFlags& of)
{
    if (panel != "default")
        throw sh::validation_error("unknown verification panel: " + panel);
    const auto rows = sh::verify_panel(sh::QuadratureSpec{}, coupling, 1e-3, worker_count());

    Table t{{"omega_a", "omega_b", "L_over_sigma", "quantity", "closed_re", "closed_im",
             "quad_re", "quad_im", "rel_error", "pass"},
            {}};
    std::size_t passed = 0;
    for (const auto& r : rows) {
        passed += r.pass ? 1 : 0;
        t.rows.push_back({fmt17(r.omega_a), fmt17(r.omega_b), fmt17(r.separation), r.quantity,
                          fmt17(r.closed_form.real()), fmt17(r.closed_form.imag()),
                          fmt17(r.quadrature.real()), fmt17(r.quadrature.imag()),
                          fmt17(r.rel_error), r.pass ? "true" : "false"});
    }
    if (of.format == "csv") {
        write_output(of.out, t.csv());
    } else {
        std::vector<bool> numeric(t.columns.size(), true);
        numeric[3] = false;
        numeric[9] = false;
        write_output(of.out, rows_json(t, numeric).dump(2) + "\n");
    }
    if (!of.out.empty())
        std::printf("verify: %zu/%zu comparisons within 1e-3\n", passed, rows.size());
    if (passed != rows.size())
        throw sh::numerical_error("verification panel failed: " +
                                  std::to_string(rows.size() - passed) + " of " +
                                  std::to_string(rows.size()) + " comparisons out of tolerance");
    return 0;
}

void print_error(const char* kind, const std::string& message)
{
    ordered_json err;
    err["error"]["kind"] = kind;
    err["error"]["message"] = message;
    std::fprintf(stderr, "%s\n", err.dump().c_str());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Vacuum steering harvested by two static Unruh-DeWitt detectors "
                 "with unequal energy gaps"};
    app.require_subcommand(1);

    ParamFlags pf_eval, pf_sweep, pf_death, pf_peak;
    OutputFlags of_eval, of_sweep, of_death, of_peak, of_figure, of_verify;

    auto* eval = app.add_subcommand("eval", "Evaluate all measures at one parameter point");
    add_param_flags(eval, pf_eval);
    add_output_flags(eval, of_eval, "json");

    auto* sweepc = app.add_subcommand("sweep", "Sweep one axis and tabulate every measure");
    add_param_flags(sweepc, pf_sweep);
    add_output_flags(sweepc, of_sweep, "csv");
    std::string sweep_axis = "separation";
    double sweep_min = 0.05, sweep_max = 3.0;
    int sweep_count = 100;
    sweepc->add_option("--axis", sweep_axis, "separation|omega_a|omega_b|gap_ratio")
        ->capture_default_str();
    sweepc->add_option("--min", sweep_min, "Axis start")->required();
    sweepc->add_option("--max", sweep_max, "Axis end")->required();
    sweepc->add_option("--count", sweep_count, "Grid points")->capture_default_str();

    auto* death = app.add_subcommand("death", "Bisect a sudden-death boundary along one axis");
    add_param_flags(death, pf_death);
    add_output_flags(death, of_death, "json");
    std::string death_measure = "steering", death_direction = "b_to_a",
                death_axis = "separation";
    double death_min = 0.0, death_max = 0.0;
    death->add_option("--measure", death_measure, "steering|concurrence")
        ->check(CLI::IsMember({"steering", "concurrence"}))
        ->capture_default_str();
    death->add_option("--direction", death_direction, "b_to_a|a_to_b (steering only)")
        ->check(CLI::IsMember({"b_to_a", "a_to_b"}))
        ->capture_default_str();
    death->add_option("--axis", death_axis, "separation|omega_a|omega_b|gap_ratio")
        ->capture_default_str();
    death->add_option("--min", death_min, "Bracket start")->required();
    death->add_option("--max", death_max, "Bracket end")->required();

    auto* peak = app.add_subcommand("peak", "Locate the steering-asymmetry maximum over omega_b");
    add_param_flags(peak, pf_peak);
    add_output_flags(peak, of_peak, "json");
    double peak_min = 0.0, peak_max = 0.0;
    int peak_count = 400;
    peak->add_option("--min", peak_min, "omega_b range start")->required();
    peak->add_option("--max", peak_max, "omega_b range end")->required();
    peak->add_option("--count", peak_count, "Coarse grid points (minimum 200)")
        ->capture_default_str();

    auto* figure = app.add_subcommand("figure", "Reproduce the data behind one figure");
    std::string figure_name;
    double figure_omega_a = 0.5, figure_coupling = 0.1;
    FigureRange figure_range;
    figure->add_option("name", figure_name, "fig1|fig2|fig3|fig4")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4"}));
    figure->add_option("--omega-a", figure_omega_a, "Detector-A gap (fig1, fig3)")
        ->capture_default_str();
    figure->add_option("--coupling", figure_coupling, "Coupling constant lambda")
        ->capture_default_str();
    auto* fmin = figure->add_option("--min", figure_range.min, "Swept-axis start");
    auto* fmax = figure->add_option("--max", figure_range.max, "Swept-axis end");
    auto* fcount = figure->add_option("--count", figure_range.count, "Swept-axis points");
    add_output_flags(figure, of_figure, "csv");

    auto* verify = app.add_subcommand(
        "verify", "Compare quadrature and closed-form amplitudes over the parameter panel");
    std::string verify_panel_name = "default";
    double verify_coupling = 0.1;
    verify->add_option("--panel", verify_panel_name, "Panel name")->capture_default_str();
    verify->add_option("--coupling", verify_coupling, "Coupling constant lambda")
        ->capture_default_str();
    add_output_flags(verify, of_verify, "csv");

    try {
        app.parse(argc, argv);
        figure_range.min_given = fmin->count() > 0;
        figure_range.max_given = fmax->count() > 0;
        figure_range.count_given = fcount->count() > 0;

        if (eval->parsed())
            return cmd_eval(pf_eval, of_eval);
        if (sweepc->parsed())
            return cmd_sweep(pf_sweep, of_sweep, sweep_axis, sweep_min, sweep_max, sweep_count);
        if (death->parsed())
            return cmd_death(pf_death, of_death, death_measure, death_direction, death_axis,
                             death_min, death_max);
        if (peak->parsed())
            return cmd_peak(pf_peak, of_peak, peak_min, peak_max, peak_count);
        if (figure->parsed())
            return cmd_figure(figure_name, figure_omega_a, figure_coupling, figure_range,
                              of_figure);
        if (verify->parsed())
            return cmd_verify(verify_panel_name, verify_coupling, of_verify);
        return 1;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) // --help
            return app.exit(e);
        print_error("usage", e.what());
        return 1;
    } catch (const sh::convergence_error& e) {
        print_error("convergence", e.what());
        return 2;
    } catch (const sh::no_sign_change_error& e) {
        print_error("no_sign_change", e.what());
        return 2;
    } catch (const sh::no_peak_error& e) {
        print_error("no_peak", e.what());
        return 2;
    } catch (const sh::numerical_error& e) {
        print_error("numerical", e.what());
        return 2;
    } catch (const sh::validation_error& e) {
        print_error("validation", e.what());
        return 1;
    } catch (const sh::domain_error& e) {
        print_error("domain", e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
}
