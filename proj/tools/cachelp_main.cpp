#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cachelp/config.hpp"
#include "cachelp/presets.hpp"
#include "cachelp/runner.hpp"

namespace {

using namespace cachelp;

struct CliArgs {
    std::string config_path;
    std::string preset_label;
    int users = 0, files = 0;
    std::vector<std::string> demands;
    std::vector<std::string> cis;
    std::string memory;
    std::string grid;  // start:step:stop
    std::vector<std::string> grid_points;
    std::string out_dir;
    std::string format = "lp";
    bool long_run = false;
    std::string search_type;  // comma-separated multiplicities
    int max_demands = 4;
    int max_cis = 2;
    std::vector<std::string> probes;
    std::uint64_t max_solves = 100000;
    double seconds_cap = 0;
};

void add_instance_flags(CLI::App* sub, CliArgs& a) {
    sub->add_option("--config", a.config_path, "JSON experiment file; other flags override");
    sub->add_option("-p,--preset", a.preset_label, "tradeoff preset label (see `presets`)");
    sub->add_option("-k,--users", a.users, "number of users");
    sub->add_option("-n,--files", a.files, "number of files");
    sub->add_option("-d,--demand", a.demands, "demand vector digits, e.g. 0012 (repeatable)");
    sub->add_option("--ci", a.cis, "CI side pair, e.g. W0,W1;Xd0012 (repeatable)");
    sub->add_option("-o,--out", a.out_dir, "directory for data files");
    sub->add_flag("--long-run", a.long_run, "allow slow solves on instances with >= 6 users");
}

void add_grid_flags(CLI::App* sub, CliArgs& a) {
    sub->add_option("--grid", a.grid, "memory grid start:step:stop, rationals allowed");
    sub->add_option("--point", a.grid_points, "extra memory grid point (repeatable)");
}

ExperimentConfig assemble(const CliArgs& a, RunMode mode) {
    ExperimentConfig cfg;
    if (!a.config_path.empty()) cfg = parse_config_file(a.config_path);
    cfg.mode = mode;

    if (!a.preset_label.empty()) {
        if (!is_preset_label(a.preset_label))
            throw std::runtime_error("unknown preset \"" + a.preset_label + "\"");
        cfg.preset_label = a.preset_label;
        cfg.prob = preset(a.preset_label).prob;
        cfg.explicit_spec.reset();
    }
    if (a.users > 0 || a.files > 0) {
        if (a.users <= 0 || a.files <= 0)
            throw std::runtime_error("--users and --files must be given together");
        cfg.prob = make_instance(a.users, a.files);
    }
    if (!a.demands.empty()) {
        if (cfg.preset_label)
            throw std::runtime_error("give a preset or explicit demands, not both");
        TradeoffSpec spec;
        spec.prob = cfg.prob;
        for (const auto& d : a.demands)
            spec.demands.push_back(parse_demand_label(d, cfg.prob));
        for (const auto& c : a.cis) spec.cis.push_back(parse_ci(c, cfg.prob));
        cfg.explicit_spec = std::move(spec);
    } else if (!a.cis.empty()) {
        throw std::runtime_error("--ci requires explicit --demand");
    }

    if (!a.memory.empty()) cfg.memory = parse_rat(a.memory);
    if (!a.grid.empty()) {
        auto first = a.grid.find(':');
        auto second = a.grid.find(':', first + 1);
        if (first == std::string::npos || second == std::string::npos)
            throw std::runtime_error("--grid wants start:step:stop");
        cfg.grid.start = parse_rat(a.grid.substr(0, first));
        cfg.grid.step = parse_rat(a.grid.substr(first + 1, second - first - 1));
        cfg.grid.stop = parse_rat(a.grid.substr(second + 1));
    }
    for (const auto& p : a.grid_points) cfg.grid.extra_points.push_back(parse_rat(p));

    if (!a.out_dir.empty()) cfg.out_dir = a.out_dir;
    cfg.export_format = a.format;
    if (a.long_run) cfg.long_run = true;

    if (!a.search_type.empty()) {
        DemandType t;
        std::size_t pos = 0;
        while (pos < a.search_type.size()) {
            auto comma = a.search_type.find(',', pos);
            if (comma == std::string::npos) comma = a.search_type.size();
            t.push_back(std::stoi(a.search_type.substr(pos, comma - pos)));
            pos = comma + 1;
        }
        cfg.search_type = std::move(t);
    }
    cfg.budget.max_demands = a.max_demands;
    cfg.budget.max_cis = a.max_cis;
    for (const auto& p : a.probes) cfg.budget.probe_memories.push_back(parse_rat(p));
    cfg.budget.max_lp_solves = a.max_solves;
    cfg.budget.lp_seconds_cap = a.seconds_cap;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entropic LP bounds for coded caching"};
    app.require_subcommand(1);

    CliArgs a;
    RunMode mode = RunMode::Solve;
    bool list_presets = false;

    auto make_sub = [&](const char* name, const char* help, RunMode m, bool grid, bool point) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_instance_flags(sub, a);
        if (grid) add_grid_flags(sub, a);
        if (point) sub->add_option("-m,--memory", a.memory, "cache memory M, rational");
        sub->callback([&, m] { mode = m; });
        return sub;
    };

    make_sub("solve", "build, reduce and solve one LP exactly", RunMode::Solve, false, true);
    make_sub("sweep", "solve across a memory grid", RunMode::Sweep, true, false);
    make_sub("gap", "compare LP bounds against scheme and analytic curves",
             RunMode::Gap, true, false);
    make_sub("baselines", "tabulate the closed-form scheme and converse curves",
             RunMode::Baselines, true, false);
    CLI::App* exp = make_sub("export-lp", "write the reduced LP in LP or MPS text",
                             RunMode::ExportLp, false, true);
    exp->add_option("-f,--format", a.format, "lp or mps")
        ->check(CLI::IsMember({"lp", "mps"}));
    make_sub("certificate", "re-verify optimality of a solved point", RunMode::Certificate,
             false, true);
    CLI::App* sea = make_sub("search", "greedy demand selection and CI refinement",
                             RunMode::Search, false, false);
    sea->add_option("--type", a.search_type, "demand type multiplicities, e.g. 2,1,1");
    sea->add_option("--max-demands", a.max_demands, "demand set size cap");
    sea->add_option("--max-cis", a.max_cis, "CI count cap");
    sea->add_option("--probe", a.probes, "probe memory (repeatable)");
    sea->add_option("--max-solves", a.max_solves, "LP solve budget");
    sea->add_option("--seconds-cap", a.seconds_cap, "wall-clock cap per LP, 0 = off");

    CLI::App* pre = app.add_subcommand("presets", "list the built-in tradeoff presets");
    pre->callback([&] { list_presets = true; });

    CLI11_PARSE(app, argc, argv);

    if (list_presets) {
        for (const auto& label : cachelp::preset_labels()) {
            cachelp::TradeoffSpec spec = cachelp::preset(label);
            std::cout << label << ": " << spec.prob.num_users << " users, "
                      << spec.prob.num_files << " files, " << spec.demands.size()
                      << " demands, " << spec.cis.size() << " CIs\n";
        }
        return 0;
    }

    try {
        cachelp::ExperimentConfig cfg = assemble(a, mode);
        return cachelp::run_experiment(cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
