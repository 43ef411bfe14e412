#include "torun/report.hpp"

#include "torun/io.hpp"

namespace torun {

ReportFormat report_format_from(std::string_view name) {
    if (name == "json") return ReportFormat::JSON;
    if (name == "csv") return ReportFormat::CSV;
    throw invalid_input("report format must be json or csv");
}

namespace {

void meta_json(JsonWriter& w, const RunMeta& meta) {
    w.key("command").value(meta.command);
    w.key("mu").value(meta.mu_spec);
    w.key("n").value(meta.n);
    w.key("period").value(meta.period);
    w.key("method").value(meta.method);
    w.key("tol").value(meta.tol);
    w.key("steps").value(meta.steps);
}

std::string csv_quote(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

const char* kMetaCsvHeader = "command,mu,n,period,method,tol,steps";

std::string meta_csv(const RunMeta& meta) {
    std::string out = csv_quote(meta.command);
    out += ',' + csv_quote(meta.mu_spec);
    out += ',' + std::to_string(meta.n);
    out += ',' + format_double(meta.period);
    out += ',' + csv_quote(meta.method);
    out += ',' + format_double(meta.tol);
    out += ',' + std::to_string(meta.steps);
    return out;
}

std::string joined_warnings(const std::vector<std::string>& warnings) {
    std::string out;
    for (std::size_t i = 0; i < warnings.size(); ++i) {
        if (i > 0) out += "; ";
        out += warnings[i];
    }
    return out;
}

void warnings_json(JsonWriter& w, const std::vector<std::string>& warnings) {
    w.key("warnings").begin_array();
    for (const std::string& s : warnings) w.value(s);
    w.end_array();
}

} // namespace

std::string render_solve_report(const RunMeta& meta, const SolveReport& rep, cd f_mean,
                                ReportFormat fmt) {
    if (fmt == ReportFormat::JSON) {
        JsonWriter w;
        w.begin_object();
        meta_json(w, meta);
        w.key("delta").value(rep.delta);
        w.key("iterations").value(rep.iterations);
        w.key("residual_l2").value(rep.residual_l2);
        w.key("min_abs_f").value(rep.min_abs_f);
        w.key("max_step_ratio").value(rep.max_step_ratio);
        w.key("f_mean").value(f_mean);
        warnings_json(w, rep.warnings);
        w.end_object();
        return w.str() + "\n";
    }
    std::string out = std::string(kMetaCsvHeader) +
                      ",delta,iterations,residual_l2,min_abs_f,max_step_ratio,"
                      "f_mean_re,f_mean_im,warnings\n";
    out += meta_csv(meta);
    out += ',' + format_double(rep.delta);
    out += ',' + std::to_string(rep.iterations);
    out += ',' + format_double(rep.residual_l2);
    out += ',' + format_double(rep.min_abs_f);
    out += ',' + format_double(rep.max_step_ratio);
    out += ',' + format_double(f_mean.real());
    out += ',' + format_double(f_mean.imag());
    out += ',' + csv_quote(joined_warnings(rep.warnings));
    out += '\n';
    return out;
}

std::string render_uniformize_report(const RunMeta& meta, const SolveReport& rep,
                                     const UniformizingForm& form,
                                     const TorusLattice& lat, double jac_min,
                                     ReportFormat fmt) {
    if (fmt == ReportFormat::JSON) {
        JsonWriter w;
        w.begin_object();
        meta_json(w, meta);
        w.key("delta").value(rep.delta);
        w.key("iterations").value(rep.iterations);
        w.key("residual_l2").value(rep.residual_l2);
        w.key("a").value(form.a);
        w.key("b").value(form.b);
        w.key("omega1").value(lat.omega1);
        w.key("omega2").value(lat.omega2);
        w.key("tau").value(lat.tau);
        w.key("jacobian_min").value(jac_min);
        warnings_json(w, rep.warnings);
        w.end_object();
        return w.str() + "\n";
    }
    std::string out = std::string(kMetaCsvHeader) +
                      ",delta,iterations,residual_l2,a_re,a_im,b_re,b_im,"
                      "omega1_re,omega1_im,omega2_re,omega2_im,tau_re,tau_im,"
                      "jacobian_min,warnings\n";
    out += meta_csv(meta);
    out += ',' + format_double(rep.delta);
    out += ',' + std::to_string(rep.iterations);
    out += ',' + format_double(rep.residual_l2);
    for (cd z : {form.a, form.b, lat.omega1, lat.omega2, lat.tau}) {
        out += ',' + format_double(z.real());
        out += ',' + format_double(z.imag());
    }
    out += ',' + format_double(jac_min);
    out += ',' + csv_quote(joined_warnings(rep.warnings));
    out += '\n';
    return out;
}

std::string render_convergence_report(const RunMeta& meta, const ConvergenceReport& rep,
                                      ReportFormat fmt) {
    if (fmt == ReportFormat::JSON) {
        JsonWriter w;
        w.begin_object();
        meta_json(w, meta);
        w.key("compact_half_width").value(rep.compact_half_width);
        w.key("periods").begin_array();
        for (double L : rep.periods) w.value(L);
        w.end_array();
        w.key("ns").begin_array();
        for (int n : rep.ns) w.value(n);
        w.end_array();
        w.key("taus").begin_array();
        for (cd tau : rep.taus) w.value(tau);
        w.end_array();
        w.key("iterations").begin_array();
        for (int it : rep.iterations) w.value(it);
        w.end_array();
        w.key("residuals").begin_array();
        for (double r : rep.residuals) w.value(r);
        w.end_array();
        w.key("sup_diffs").begin_array();
        for (double d : rep.sup_diffs) w.value(d);
        w.end_array();
        w.end_object();
        return w.str() + "\n";
    }
    std::string out = std::string(kMetaCsvHeader) +
                      ",L,grid_n,tau_re,tau_im,iterations,residual,sup_diff\n";
    for (std::size_t i = 0; i < rep.periods.size(); ++i) {
        out += meta_csv(meta);
        out += ',' + format_double(rep.periods[i]);
        out += ',' + std::to_string(rep.ns[i]);
        out += ',' + format_double(rep.taus[i].real());
        out += ',' + format_double(rep.taus[i].imag());
        out += ',' + std::to_string(rep.iterations[i]);
        out += ',' + format_double(rep.residuals[i]);
        out += ',';
        if (i > 0) out += format_double(rep.sup_diffs[i - 1]);
        out += '\n';
    }
    return out;
}

std::string render_certify_report(const RunMeta& meta, const GrotzschReport& rep,
                                  ReportFormat fmt) {
    if (fmt == ReportFormat::JSON) {
        JsonWriter w;
        w.begin_object();
        meta_json(w, meta);
        w.key("K").value(rep.K);
        w.key("max_dilatation").value(rep.max_dilatation);
        w.key("area").value(rep.area);
        w.key("area_g").value(rep.area_g);
        w.key("refinement_diff").value(rep.refinement_diff);
        w.key("slack").value(rep.slack);
        w.key("modulus_a1").value(rep.modulus_a1);
        w.key("modulus_lower_bound").value(rep.modulus_lower_bound);
        w.key("certified").value(rep.certified);
        w.end_object();
        return w.str() + "\n";
    }
    std::string out = std::string(kMetaCsvHeader) +
                      ",K,max_dilatation,area,area_g,refinement_diff,slack,"
                      "modulus_a1,modulus_lower_bound,certified\n";
    out += meta_csv(meta);
    out += ',' + format_double(rep.K);
    out += ',' + format_double(rep.max_dilatation);
    out += ',' + format_double(rep.area);
    out += ',' + format_double(rep.area_g);
    out += ',' + format_double(rep.refinement_diff);
    out += ',' + format_double(rep.slack);
    out += ',' + format_double(rep.modulus_a1);
    out += ',' + format_double(rep.modulus_lower_bound);
    out += rep.certified ? ",true\n" : ",false\n";
    return out;
}

std::string render_bench_report(const RunMeta& meta, const std::vector<BenchRow>& rows,
                                ReportFormat fmt) {
    if (fmt == ReportFormat::JSON) {
        JsonWriter w;
        w.begin_object();
        meta_json(w, meta);
        w.key("rows").begin_array();
        for (const BenchRow& row : rows) {
            w.begin_object();
            w.key("n").value(row.n);
            w.key("delta").value(row.delta);
            w.key("method").value(row.method);
            w.key("seconds").value(row.seconds);
            w.key("iterations").value(row.iterations);
            w.key("residual").value(row.residual);
            w.end_object();
        }
        w.end_array();
        w.end_object();
        return w.str() + "\n";
    }
    std::string out =
        std::string(kMetaCsvHeader) + ",bench_n,delta,bench_method,seconds,iterations,residual\n";
    for (const BenchRow& row : rows) {
        out += meta_csv(meta);
        out += ',' + std::to_string(row.n);
        out += ',' + format_double(row.delta);
        out += ',' + csv_quote(row.method);
        out += ',' + format_double(row.seconds);
        out += ',' + std::to_string(row.iterations);
        out += ',' + format_double(row.residual);
        out += '\n';
    }
    return out;
}

} // namespace torun
