#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "torun/plane.hpp"
#include "torun/qc.hpp"
#include "torun/solver.hpp"
#include "torun/uniformizer.hpp"

namespace torun {

enum class ReportFormat { JSON, CSV };

ReportFormat report_format_from(std::string_view name);

// Configuration echo placed at the head of every report so a report file
// identifies the run that produced it.
struct RunMeta {
    std::string command;
    std::string mu_spec;
    int n = 0;          // 0 when the command derives grids itself
    double period = kTwoPi;
    std::string method; // empty when no solver is involved
    double tol = 0.0;
    int steps = 0;      // homotopy stages, 0 otherwise
};

std::string render_solve_report(const RunMeta& meta, const SolveReport& rep,
                                cd f_mean, ReportFormat fmt);

std::string render_uniformize_report(const RunMeta& meta, const SolveReport& rep,
                                     const UniformizingForm& form,
                                     const TorusLattice& lat, double jac_min,
                                     ReportFormat fmt);

std::string render_convergence_report(const RunMeta& meta, const ConvergenceReport& rep,
                                      ReportFormat fmt);

std::string render_certify_report(const RunMeta& meta, const GrotzschReport& rep,
                                  ReportFormat fmt);

struct BenchRow {
    int n = 0;
    double delta = 0.0;
    std::string method;
    double seconds = 0.0; // wall-clock measurement, varies run to run
    int iterations = 0;
    double residual = 0.0;
};

std::string render_bench_report(const RunMeta& meta, const std::vector<BenchRow>& rows,
                                ReportFormat fmt);

} // namespace torun
