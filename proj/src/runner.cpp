#include "cachelp/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "cachelp/baselines.hpp"
#include "cachelp/lpbuild.hpp"
#include "cachelp/solver.hpp"

namespace cachelp {

namespace {

namespace fs = std::filesystem;

std::string cell(const std::optional<Rat>& v, bool exact) {
    if (!v) return "-";
    return exact ? rat_string(*v) : rat_decimal(*v, 12);
}

void write_variant(const std::string& path, const std::vector<std::string>& col_names,
                   const std::vector<std::vector<std::optional<Rat>>>& rows_by_point,
                   const std::vector<Rat>& xs, bool exact) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "M";
    for (const auto& name : col_names) out << "\t" << name;
    out << "\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out << cell(xs[i], exact);
        for (const auto& v : rows_by_point[i]) out << "\t" << cell(v, exact);
        out << "\n";
    }
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

std::string spec_stem(const TradeoffSpec& spec) {
    if (!spec.label.empty()) {
        std::string s = spec.label;
        for (char& c : s)
            if (c == '.' || c == '/' || c == ' ') c = '_';
        return s;
    }
    std::string s = std::to_string(spec.prob.num_users) + "u" +
                    std::to_string(spec.prob.num_files) + "f";
    for (const auto& d : spec.demands) s += "_" + d.label();
    return s;
}

void log_build_stats(std::ostream& log, const BuildStats& st) {
    log << "  rows " << st.kept_rows << " kept of " << st.raw_rows << " raw ("
        << st.dropped_tautologies << " tautologies, " << st.merged_duplicates
        << " duplicates), columns " << st.free_columns << " free + " << st.fixed_columns
        << " fixed, group order " << st.group_size << "\n";
}

// Solving modes bite off exponential work; big instances stay behind a flag.
bool solves_lps(RunMode mode) {
    return mode == RunMode::Solve || mode == RunMode::Sweep || mode == RunMode::Gap ||
           mode == RunMode::Search || mode == RunMode::Certificate;
}

struct SolvedPoint {
    Rat memory;
    RationalSolution sol;
};

// Shared by sweep and gap: one skeleton, one solve per grid point, every
// optimum certificate-checked.
std::vector<SolvedPoint> sweep_solve(const TradeoffSpec& spec, const std::vector<Rat>& grid,
                                     std::ostream& log) {
    LPSkeleton sk = build_skeleton(spec);
    log << "built " << spec.label << ": ";
    log_build_stats(log, sk.stats);
    std::vector<SolvedPoint> out;
    for (const Rat& m : grid) {
        LPInstance lp = instantiate(sk, m);
        auto t0 = std::chrono::steady_clock::now();
        RationalSolution sol = solve(lp);
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        if (sol.status == SolveStatus::Optimal) {
            CertificateReport cert = verify_certificate(lp, sol);
            if (!cert.pass())
                throw std::runtime_error("certificate failed at M = " + rat_string(m) + ": " +
                                         cert.first_violation);
        }
        log << "  M = " << rat_string(m) << ": ";
        if (sol.status == SolveStatus::Optimal)
            log << rat_string(sol.objective) << " = " << rat_decimal(sol.objective, 12);
        else
            log << solve_status_name(sol.status);
        log << "  (" << sol.iterations << " iterations, " << dt.count() << "s)\n";
        out.push_back({m, std::move(sol)});
    }
    return out;
}

int run_solve(const ExperimentConfig& cfg, const TradeoffSpec& spec, std::ostream& log) {
    if (!cfg.memory) {
        log << "solve mode needs a memory point\n";
        return 2;
    }
    LPInstance lp = reduce_and_assemble(spec, *cfg.memory);
    log << "built " << spec.label << " at M = " << rat_string(*cfg.memory) << ": ";
    log_build_stats(log, lp.stats);
    auto t0 = std::chrono::steady_clock::now();
    RationalSolution sol = solve(lp);
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    log << "status " << solve_status_name(sol.status) << " after " << sol.iterations
        << " iterations (" << dt.count() << "s)\n";
    if (sol.status != SolveStatus::Optimal) return 1;
    log << "optimal load " << rat_string(sol.objective) << " = "
        << rat_decimal(sol.objective, 12) << "\n";
    CertificateReport cert = verify_certificate(lp, sol);
    log << "certificate: " << (cert.pass() ? "pass" : cert.first_violation) << "\n";
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        std::string path = join_path(cfg.out_dir, "solve_" + spec_stem(spec) + ".tsv");
        write_table(path, {"load"}, {{sol.objective}}, {*cfg.memory});
        log << "wrote " << path << "\n";
    }
    return cert.pass() ? 0 : 1;
}

int run_sweep(const ExperimentConfig& cfg, const TradeoffSpec& spec, std::ostream& log) {
    std::vector<Rat> grid = cfg.grid.materialize(spec.prob);
    auto points = sweep_solve(spec, grid, log);
    std::vector<Rat> xs;
    std::vector<std::vector<std::optional<Rat>>> rows;
    for (const auto& p : points) {
        xs.push_back(p.memory);
        rows.push_back({p.sol.status == SolveStatus::Optimal
                            ? std::optional<Rat>(p.sol.objective)
                            : std::nullopt});
    }
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        std::string path = join_path(cfg.out_dir, "sweep_" + spec_stem(spec) + ".tsv");
        write_table(path, {"load"}, rows, xs);
        log << "wrote " << path << "\n";
    }
    return 0;
}

int run_baselines(const ExperimentConfig& cfg, std::ostream& log) {
    const Problem& prob = cfg.prob;
    if (prob.num_users <= 0) {
        log << "baselines mode needs users/files\n";
        return 2;
    }
    std::vector<Rat> grid = cfg.grid.materialize(prob);

    TradeoffCurve yma = lower_convex_envelope(yma_points(prob), CurveKind::Achievable);
    std::optional<TradeoffCurve> gv;
    if (auto pts = gv_points(prob)) gv = lower_convex_envelope(std::move(*pts), CurveKind::Achievable);
    TradeoffCurve yu2 = lower_convex_envelope(yu_thm2_points(prob), CurveKind::Converse);

    std::vector<std::string> names = {"yma", "gv", "cutset", "small_mem", "best_ach", "analytic"};
    std::vector<std::vector<std::optional<Rat>>> rows;
    for (const Rat& m : grid) {
        std::vector<std::optional<Rat>> row;
        row.push_back(yma.eval(m));
        row.push_back(gv ? gv->eval(m) : std::nullopt);
        row.push_back(yu2.eval(m));
        row.push_back(yu_thm4_bound(prob, m));
        row.push_back(m >= 0 ? std::optional<Rat>(best_achievable_at(prob, m)) : std::nullopt);
        row.push_back(std::optional<Rat>(analytic_converse_at(prob, m)));
        rows.push_back(std::move(row));
    }
    log << "baseline curves for " << prob.num_users << " users, " << prob.num_files
        << " files over " << grid.size() << " grid points\n";
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        std::string path = join_path(cfg.out_dir, "baselines_" +
                                     std::to_string(prob.num_users) + "u" +
                                     std::to_string(prob.num_files) + "f.tsv");
        write_table(path, names, rows, grid);
        log << "wrote " << path << "\n";
    } else {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            log << "M = " << rat_string(grid[i]) << ":";
            for (std::size_t j = 0; j < names.size(); ++j)
                log << " " << names[j] << "=" << cell(rows[i][j], true);
            log << "\n";
        }
    }
    return 0;
}

int run_gap(const ExperimentConfig& cfg, const TradeoffSpec& spec, std::ostream& log) {
    const Problem& prob = spec.prob;
    std::vector<Rat> grid = cfg.grid.materialize(prob);
    auto points = sweep_solve(spec, grid, log);

    TradeoffCurve lp_curve;
    lp_curve.kind = CurveKind::Converse;
    for (const auto& p : points)
        if (p.sol.status == SolveStatus::Optimal)
            lp_curve.breakpoints.push_back({p.memory, p.sol.objective});

    TradeoffCurve achievable;
    achievable.kind = CurveKind::Achievable;
    for (const Rat& m : grid)
        if (m >= 0) achievable.breakpoints.push_back({m, best_achievable_at(prob, m)});

    TradeoffCurve analytic;
    analytic.kind = CurveKind::Converse;
    for (const Rat& m : grid) analytic.breakpoints.push_back({m, analytic_converse_at(prob, m)});

    GapTable table = gap_table(achievable, {{spec.label, lp_curve, true},
                                            {"analytic", analytic, false}}, grid);

    std::vector<std::vector<std::optional<Rat>>> rows;
    std::vector<std::string> names = {"achievable"};
    for (const auto& n : table.names) names.push_back("gap_" + n);
    for (std::size_t i = 0; i < table.grid.size(); ++i) {
        std::vector<std::optional<Rat>> row;
        row.push_back(achievable.eval(table.grid[i]));
        for (std::size_t j = 0; j < table.names.size(); ++j) row.push_back(table.gaps[i][j]);
        rows.push_back(std::move(row));
    }
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        std::string path = join_path(cfg.out_dir, "gap_" + spec_stem(spec) + ".tsv");
        write_table(path, names, rows, table.grid);
        log << "wrote " << path << "\n";
    }
    if (table.alarm) {
        log << "ALARM: " << table.alarm_detail << "\n";
        return 1;
    }
    log << "gap table clean: no LP bound exceeds achievability\n";
    return 0;
}

int run_export(const ExperimentConfig& cfg, const TradeoffSpec& spec, std::ostream& log) {
    if (!cfg.memory) {
        log << "export mode needs a memory point\n";
        return 2;
    }
    LPInstance lp = reduce_and_assemble(spec, *cfg.memory);
    ExportFormat fmt = cfg.export_format == "mps" ? ExportFormat::Mps : ExportFormat::LpText;
    std::string text = export_lp(lp, fmt);
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        std::string path = join_path(cfg.out_dir, spec_stem(spec) + (fmt == ExportFormat::Mps ? ".mps" : ".lp"));
        std::ofstream out(path);
        out << text;
        log << "wrote " << path << " (" << text.size() << " bytes)\n";
    } else {
        log << text;
    }
    return 0;
}

int run_certificate(const ExperimentConfig& cfg, const TradeoffSpec& spec, std::ostream& log) {
    if (!cfg.memory) {
        log << "certificate mode needs a memory point\n";
        return 2;
    }
    LPInstance lp = reduce_and_assemble(spec, *cfg.memory);
    RationalSolution sol = solve(lp);
    if (sol.status != SolveStatus::Optimal) {
        log << "no optimum to certify: " << solve_status_name(sol.status) << "\n";
        return 1;
    }
    CertificateReport cert = verify_certificate(lp, sol);
    log << "objective " << rat_string(sol.objective) << "\n"
        << "primal feasible: " << (cert.primal_feasible ? "yes" : "no") << "\n"
        << "dual feasible: " << (cert.dual_feasible ? "yes" : "no") << "\n"
        << "zero duality gap: " << (cert.duality_gap_zero ? "yes" : "no") << "\n";
    if (!cert.pass()) {
        log << "violation: " << cert.first_violation << "\n";
        return 1;
    }
    return 0;
}

int run_search(const ExperimentConfig& cfg, std::ostream& log) {
    TradeoffSpec base;
    SearchTrace demand_trace;
    if (cfg.search_type) {
        auto [spec, trace] = greedy_demand_selection(cfg.prob, *cfg.search_type, cfg.budget);
        base = std::move(spec);
        demand_trace = std::move(trace);
        log << "demand selection:\n" << demand_trace.to_log();
    } else if (cfg.explicit_spec || cfg.preset_label) {
        base = cfg.resolve_spec();
        log << "refining the configured demand set " << spec_stem(base) << "\n";
    } else {
        log << "search mode needs a demand type or a base spec\n";
        return 2;
    }

    SearchTrace ci_trace;
    if (cfg.budget.max_cis > 0) {
        auto pool = ci_candidate_pool(base, cfg.ci_side_limit);
        log << "CI pool: " << pool.size() << " candidates (side limit " << cfg.ci_side_limit
            << ")\n";
        auto [spec, trace] = ci_refinement(base, pool, cfg.budget);
        base = std::move(spec);
        ci_trace = std::move(trace);
        log << "CI refinement:\n" << ci_trace.to_log();
    }

    log << "final spec: demands";
    for (const auto& d : base.demands) log << " " << d.label();
    for (const auto& ci : base.cis) log << ", CI " << ci.text();
    log << "\n";

    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        std::string path = join_path(cfg.out_dir, "search_" + spec_stem(base) + ".log");
        std::ofstream out(path);
        out << demand_trace.to_log() << ci_trace.to_log();
        log << "wrote " << path << "\n";
    }
    return 0;
}

}  // namespace

void write_table(const std::string& path, const std::vector<std::string>& col_names,
                 const std::vector<std::vector<std::optional<Rat>>>& rows_by_point,
                 const std::vector<Rat>& xs) {
    if (rows_by_point.size() != xs.size())
        throw std::invalid_argument("write_table: row count does not match grid size");
    write_variant(path, col_names, rows_by_point, xs, false);
    write_variant(path + ".exact", col_names, rows_by_point, xs, true);
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
    try {
        if (solves_lps(cfg.mode) && cfg.prob.num_users >= 6 && !cfg.long_run) {
            log << "instances with 6 or more users solve slowly; pass long_run to proceed\n";
            return 2;
        }
        switch (cfg.mode) {
            case RunMode::Solve: return run_solve(cfg, cfg.resolve_spec(), log);
            case RunMode::Sweep: return run_sweep(cfg, cfg.resolve_spec(), log);
            case RunMode::Baselines: return run_baselines(cfg, log);
            case RunMode::Gap: return run_gap(cfg, cfg.resolve_spec(), log);
            case RunMode::ExportLp: return run_export(cfg, cfg.resolve_spec(), log);
            case RunMode::Certificate: return run_certificate(cfg, cfg.resolve_spec(), log);
            case RunMode::Search: return run_search(cfg, log);
        }
        return 2;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace cachelp
