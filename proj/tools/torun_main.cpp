#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "torun/generators.hpp"
#include "torun/io.hpp"
#include "torun/plane.hpp"
#include "torun/plot.hpp"
#include "torun/qc.hpp"
#include "torun/report.hpp"
#include "torun/solver.hpp"
#include "torun/uniformizer.hpp"

namespace {

using namespace torun;

double parse_number(const std::string& text, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw invalid_input(std::string(what) + ": not a number: " + text);
    }
    if (used != text.size())
        throw invalid_input(std::string(what) + ": trailing junk in number: " + text);
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

cd parse_complex(const std::string& text, const char* what) {
    const std::vector<std::string> parts = split(text, ',');
    if (parts.size() == 1) return cd(parse_number(parts[0], what), 0.0);
    if (parts.size() == 2)
        return cd(parse_number(parts[0], what), parse_number(parts[1], what));
    throw invalid_input(std::string(what) + ": expected re or re,im");
}

// builtin generator grammar:
//   const:re[,im]
//   modes:m1,m2,re[,im][;m1,m2,re[,im]]...
//   bump:cx,cy,radius,height
//   file:path.json
PeriodicField make_mu_field(const std::string& spec, int n, double period,
                            bool n_explicit, bool period_explicit) {
    const std::size_t colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (head == "file") {
        if (rest.empty()) throw invalid_input("mu spec: file: needs a path");
        FieldFile file = read_field(rest);
        if (n_explicit && file.field.grid.n != n)
            throw invalid_input("mu spec: field file n conflicts with --n");
        if (period_explicit && file.field.grid.period != period)
            throw invalid_input("mu spec: field file period conflicts with --period");
        return file.field;
    }

    PeriodicGrid grid(n, period);
    if (head == "const") return constant_field(grid, parse_complex(rest, "const"));
    if (head == "modes") {
        std::vector<ModeAmplitude> modes;
        for (const std::string& item : split(rest, ';')) {
            const std::vector<std::string> parts = split(item, ',');
            if (parts.size() != 3 && parts.size() != 4)
                throw invalid_input("mu spec: modes: expected m1,m2,re[,im]");
            ModeAmplitude m;
            m.m1 = static_cast<int>(parse_number(parts[0], "modes m1"));
            m.m2 = static_cast<int>(parse_number(parts[1], "modes m2"));
            m.amp = cd(parse_number(parts[2], "modes amp"),
                       parts.size() == 4 ? parse_number(parts[3], "modes amp") : 0.0);
            modes.push_back(m);
        }
        return mode_field(grid, modes);
    }
    if (head == "bump") {
        const std::vector<std::string> parts = split(rest, ',');
        if (parts.size() != 4)
            throw invalid_input("mu spec: bump: expected cx,cy,radius,height");
        return radial_bump_field(grid, parse_number(parts[0], "bump cx"),
                                 parse_number(parts[1], "bump cy"),
                                 parse_number(parts[2], "bump radius"),
                                 parse_number(parts[3], "bump height"));
    }
    throw invalid_input("mu spec must start with const:, modes:, bump:, or file:");
}

// planar grammar: const:re[,im] (constant everywhere) or bump:radius,height
// (radial bump at the origin, support square [-radius, radius]^2)
PlanarProblem make_planar_problem(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (head == "const") return PlanarProblem::constant(parse_complex(rest, "const"));
    if (head == "bump") {
        const std::vector<std::string> parts = split(rest, ',');
        if (parts.size() != 2)
            throw invalid_input("planar mu spec: bump: expected radius,height");
        const double radius = parse_number(parts[0], "bump radius");
        const double height = parse_number(parts[1], "bump height");
        if (!(radius > 0.0)) throw invalid_input("bump radius must be positive");
        auto fn = [radius, height](double x, double y) {
            const double s2 = (x * x + y * y) / (radius * radius);
            if (s2 >= 1.0) return cd(0.0, 0.0);
            return cd(height * std::exp(1.0 - 1.0 / (1.0 - s2)), 0.0);
        };
        return PlanarProblem::compact_support(fn, radius, std::fabs(height));
    }
    throw invalid_input("planar mu spec must start with const: or bump:");
}

// cylinder map grammar for certify:
//   identity | affine:c | stretch:k | perturb:alpha
std::function<cd(double, double)> make_cylinder_map(const std::string& spec, double R) {
    const std::size_t colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (head == "identity") return [](double x, double phi) { return cd(x, phi); };
    if (head == "affine") {
        const double c = parse_number(rest, "affine c");
        if (!(std::fabs(c) < 1.0)) throw invalid_input("affine c must satisfy |c| < 1");
        return [c](double x, double phi) {
            return cd((1.0 + c) * x, (1.0 - c) * phi);
        };
    }
    if (head == "stretch") {
        const double k = parse_number(rest, "stretch k");
        if (!(k > 0.0)) throw invalid_input("stretch k must be positive");
        return [k](double x, double phi) { return cd(k * x, phi); };
    }
    if (head == "perturb") {
        const double alpha = parse_number(rest, "perturb alpha");
        const double freq = kTwoPi / R;
        return [alpha, freq](double x, double phi) {
            const double bump = alpha * std::sin(freq * x);
            return cd(x + bump * std::cos(phi), phi + bump * std::sin(phi));
        };
    }
    throw invalid_input("map spec must be identity, affine:c, stretch:k, or perturb:alpha");
}

void emit_diagnostic(const char* kind, const char* message) {
    JsonWriter w;
    w.begin_object();
    w.key("error").value(kind);
    w.key("message").value(message);
    w.end_object();
    std::fputs((w.str() + "\n").c_str(), stderr);
}

struct CommonOptions {
    std::string mu_spec;
    int n = 64;
    double period = kTwoPi;
    std::string method = "neumann";
    double tol = 1e-10;
    int max_iter = 0;
    int steps = 64;
    bool allow_large_delta = false;
    std::string out_dir = ".";
    std::string format = "json";
    bool plot = false;
    bool save_field = false;
    bool n_explicit = false;
    bool period_explicit = false;
};

void add_common_options(CLI::App* cmd, CommonOptions& opt, bool solver_opts) {
    cmd->add_option("--mu", opt.mu_spec,
                    "coefficient spec: const:re[,im] | modes:m1,m2,amp[;...] | "
                    "bump:cx,cy,radius,height | file:path.json")
        ->required();
    if (solver_opts) {
        cmd->add_option("--n", opt.n, "grid size (even)")->check(CLI::PositiveNumber);
        cmd->add_option("--period", opt.period, "torus period")->check(CLI::PositiveNumber);
        cmd->add_option("--method", opt.method, "neumann or homotopy")
            ->check(CLI::IsMember({"neumann", "homotopy"}));
        cmd->add_option("--tol", opt.tol, "target residual")->check(CLI::PositiveNumber);
        cmd->add_option("--max-iter", opt.max_iter, "iteration cap (0 = automatic)");
        cmd->add_option("--steps", opt.steps, "homotopy RK4 steps");
        cmd->add_flag("--allow-large-delta", opt.allow_large_delta,
                      "accept sup |mu| in (0.95, 1)");
    }
    cmd->add_option("--out", opt.out_dir, "artifact output directory");
    cmd->add_option("--format", opt.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--plot", opt.plot, "write plot image(s) to the output directory");
    cmd->add_flag("--save-field", opt.save_field, "write solution field file(s)");
}

SolveReport run_solver(const CommonOptions& opt, const BeltramiCoefficient& mu) {
    SolverLimits limits;
    limits.tol = opt.tol;
    limits.max_iter = opt.max_iter;
    limits.allow_large_delta = opt.allow_large_delta;
    if (opt.method == "homotopy") {
        HomotopyConfig cfg;
        cfg.steps = opt.steps;
        return solve_homotopy(mu, cfg, limits);
    }
    return solve_neumann(mu, limits);
}

RunMeta meta_for(const char* command, const CommonOptions& opt, const PeriodicGrid& grid,
                 bool solver_meta) {
    RunMeta meta;
    meta.command = command;
    meta.mu_spec = opt.mu_spec;
    meta.n = grid.n;
    meta.period = grid.period;
    if (solver_meta) {
        meta.method = opt.method;
        meta.tol = opt.tol;
        meta.steps = opt.method == "homotopy" ? opt.steps : 0;
    }
    return meta;
}

void write_mu_plot(const CommonOptions& opt, const BeltramiCoefficient& mu) {
    const int n = mu.mu.grid.n;
    std::vector<double> dil(mu.mu.values.size());
    double top = 1.0;
    for (std::size_t i = 0; i < dil.size(); ++i) {
        dil[i] = dilatation_from_mu(mu.mu.values[i]);
        if (dil[i] > top) top = dil[i];
    }
    write_file_atomic(opt.out_dir + "/dilatation.ppm",
                      render_heatmap_ppm(dil, n, n, 1.0, top));
}

int run_solve(const CommonOptions& opt) {
    BeltramiCoefficient mu(make_mu_field(opt.mu_spec, opt.n, opt.period, opt.n_explicit,
                                         opt.period_explicit));
    const SolveReport rep = run_solver(opt, mu);
    const RunMeta meta = meta_for("solve", opt, rep.f.grid, true);
    std::fputs(render_solve_report(meta, rep, field_mean(rep.f),
                                   report_format_from(opt.format))
                   .c_str(),
               stdout);
    if (opt.save_field) write_field(opt.out_dir + "/f.json", rep.f, FieldKind::F);
    if (opt.plot) write_mu_plot(opt, mu);
    return 0;
}

int run_uniformize(const CommonOptions& opt) {
    BeltramiCoefficient mu(make_mu_field(opt.mu_spec, opt.n, opt.period, opt.n_explicit,
                                         opt.period_explicit));
    const SolveReport rep = run_solver(opt, mu);
    const UniformizingForm form = build_uniformizing_form(rep.f, mu);
    const TorusLattice lat = lattice(form);
    const double jac_min = jacobian_min(form);
    const RunMeta meta = meta_for("uniformize", opt, rep.f.grid, true);
    std::fputs(render_uniformize_report(meta, rep, form, lat, jac_min,
                                        report_format_from(opt.format))
                   .c_str(),
               stdout);
    if (opt.save_field) {
        write_field(opt.out_dir + "/f.json", rep.f, FieldKind::F);
        write_field(opt.out_dir + "/psi.json", form.psi, FieldKind::PSI);
    }
    if (opt.plot)
        write_file_atomic(opt.out_dir + "/map_grid.svg", render_grid_svg(form, lat));
    return 0;
}

int run_plane(const CommonOptions& opt, const std::vector<double>& periods,
              double density) {
    PlanarProblem problem = make_planar_problem(opt.mu_spec);
    MeshRule rule;
    rule.density = density;
    SolverLimits limits;
    limits.tol = opt.tol;
    const ConvergenceReport rep = plane_solve_sequence(problem, periods, rule, limits);

    RunMeta meta;
    meta.command = "plane";
    meta.mu_spec = opt.mu_spec;
    meta.n = 0;
    meta.period = 0.0;
    meta.method = "neumann";
    meta.tol = opt.tol;
    std::fputs(render_convergence_report(meta, rep, report_format_from(opt.format)).c_str(),
               stdout);
    return 0;
}

int run_certify(const std::string& map_spec, double R, int nx, int nphi, double K,
                const std::string& format) {
    const CylinderMapSamples samples =
        CylinderMapSamples::from_function(make_cylinder_map(map_spec, R), R, nx, nphi);
    const DilatationField dil = map_dilatation_field(samples);
    const double K_used = K > 0.0 ? K : dil.max_dilatation;
    const GrotzschReport rep = grotzsch_area_certify(samples, K_used);

    RunMeta meta;
    meta.command = "certify";
    meta.mu_spec = map_spec;
    meta.n = nx;
    meta.period = R;
    std::fputs(render_certify_report(meta, rep, report_format_from(format)).c_str(),
               stdout);
    return 0;
}

int run_bench(const std::vector<int>& sizes, double delta, double tol,
              const std::string& format) {
    std::vector<BenchRow> rows;
    for (int n : sizes) {
        PeriodicGrid grid(n, kTwoPi);
        BeltramiCoefficient mu(two_mode_field(grid, delta));
        for (const char* method : {"neumann", "homotopy"}) {
            SolverLimits limits;
            limits.tol = tol;
            const auto start = std::chrono::steady_clock::now();
            const SolveReport rep = method[0] == 'n'
                                        ? solve_neumann(mu, limits)
                                        : solve_homotopy(mu, HomotopyConfig{}, limits);
            const auto stop = std::chrono::steady_clock::now();
            BenchRow row;
            row.n = n;
            row.delta = delta;
            row.method = method;
            row.seconds = std::chrono::duration<double>(stop - start).count();
            row.iterations = rep.iterations;
            row.residual = rep.residual_l2;
            rows.push_back(row);
        }
    }
    RunMeta meta;
    meta.command = "bench";
    meta.mu_spec = "twomode";
    meta.tol = tol;
    std::fputs(render_bench_report(meta, rows, report_format_from(format)).c_str(), stdout);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Beltrami solver and uniformizer for almost complex tori"};
    app.require_subcommand(1);

    CommonOptions solve_opt;
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve the Beltrami equation");
    add_common_options(solve_cmd, solve_opt, true);

    CommonOptions unif_opt;
    CLI::App* unif_cmd =
        app.add_subcommand("uniformize", "solve and compute the uniformizing lattice");
    add_common_options(unif_cmd, unif_opt, true);

    CommonOptions plane_opt;
    std::vector<double> plane_periods{8.0, 16.0, 32.0};
    double plane_density = 8.0;
    CLI::App* plane_cmd = app.add_subcommand(
        "plane", "planar pipeline over a growing period sequence");
    plane_cmd
        ->add_option("--mu", plane_opt.mu_spec,
                     "planar coefficient: const:re[,im] | bump:radius,height")
        ->required();
    plane_cmd->add_option("--periods", plane_periods, "increasing period list")
        ->delimiter(',');
    plane_cmd->add_option("--density", plane_density, "grid points per unit length")
        ->check(CLI::PositiveNumber);
    plane_cmd->add_option("--tol", plane_opt.tol, "target residual per period")
        ->check(CLI::PositiveNumber);
    plane_cmd->add_option("--format", plane_opt.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));

    std::string certify_map = "identity";
    double certify_R = kTwoPi;
    int certify_nx = 256, certify_nphi = 256;
    double certify_K = 0.0;
    std::string certify_format = "json";
    CLI::App* certify_cmd =
        app.add_subcommand("certify", "length-area certificate for a cylinder map");
    certify_cmd->add_option("--map", certify_map,
                            "identity | affine:c | stretch:k | perturb:alpha");
    certify_cmd->add_option("--R", certify_R, "cylinder height")->check(CLI::PositiveNumber);
    certify_cmd->add_option("--nx", certify_nx, "grid points along the cylinder");
    certify_cmd->add_option("--nphi", certify_nphi, "grid points around the cylinder");
    certify_cmd->add_option("--K", certify_K,
                            "dilatation bound (0: use the measured maximum)");
    certify_cmd->add_option("--format", certify_format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));

    std::vector<int> bench_sizes{64, 128, 256};
    double bench_delta = 0.5;
    double bench_tol = 1e-10;
    std::string bench_format = "json";
    CLI::App* bench_cmd = app.add_subcommand("bench", "solver timings per grid size");
    bench_cmd->add_option("--sizes", bench_sizes, "grid sizes")->delimiter(',');
    bench_cmd->add_option("--delta", bench_delta, "coefficient bound");
    bench_cmd->add_option("--tol", bench_tol, "target residual")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--format", bench_format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    solve_opt.n_explicit = solve_cmd->count("--n") > 0;
    solve_opt.period_explicit = solve_cmd->count("--period") > 0;
    unif_opt.n_explicit = unif_cmd->count("--n") > 0;
    unif_opt.period_explicit = unif_cmd->count("--period") > 0;

    try {
        if (solve_cmd->parsed()) return run_solve(solve_opt);
        if (unif_cmd->parsed()) return run_uniformize(unif_opt);
        if (plane_cmd->parsed())
            return run_plane(plane_opt, plane_periods, plane_density);
        if (certify_cmd->parsed())
            return run_certify(certify_map, certify_R, certify_nx, certify_nphi,
                               certify_K, certify_format);
        if (bench_cmd->parsed())
            return run_bench(bench_sizes, bench_delta, bench_tol, bench_format);
    } catch (const invalid_input& e) {
        emit_diagnostic("invalid_input", e.what());
        return 2;
    } catch (const convergence_error& e) {
        emit_diagnostic("convergence_error", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_diagnostic("internal", e.what());
        return 1;
    }
    return 0;
}
