#include "cachelp/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cachelp/baselines.hpp"
#include "cachelp/presets.hpp"

namespace cachelp {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& origin, const std::string& what) {
    throw std::runtime_error(origin + ": " + what);
}

Rat rat_field(const json& j, const std::string& origin, const std::string& field) {
    const json& v = j.at(field);
    if (v.is_number_integer()) return Rat(v.get<long>());
    if (v.is_string()) return parse_rat(v.get<std::string>());
    bad(origin, "field \"" + field + "\" must be an integer or a \"p/q\" string");
}

RunMode mode_from_name(const std::string& name, const std::string& origin) {
    if (name == "solve") return RunMode::Solve;
    if (name == "sweep") return RunMode::Sweep;
    if (name == "search") return RunMode::Search;
    if (name == "baselines") return RunMode::Baselines;
    if (name == "gap") return RunMode::Gap;
    if (name == "export") return RunMode::ExportLp;
    if (name == "certificate") return RunMode::Certificate;
    bad(origin, "unknown mode \"" + name + "\"");
}

}  // namespace

const char* run_mode_name(RunMode m) {
    switch (m) {
        case RunMode::Solve: return "solve";
        case RunMode::Sweep: return "sweep";
        case RunMode::Search: return "search";
        case RunMode::Baselines: return "baselines";
        case RunMode::Gap: return "gap";
        case RunMode::ExportLp: return "export";
        case RunMode::Certificate: return "certificate";
    }
    return "?";
}

std::vector<Rat> GridSpec::materialize(const Problem& prob) const {
    std::vector<Rat> pts;
    if (start && step && stop) {
        if (*step <= 0) throw std::runtime_error("grid step must be positive");
        for (Rat m = *start; m <= *stop; m += *step) pts.push_back(m);
    } else if (start || step || stop) {
        throw std::runtime_error("grid needs all of start/step/stop, or none");
    } else {
        pts = default_memory_grid(prob);
    }
    pts.insert(pts.end(), extra_points.begin(), extra_points.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

TradeoffSpec ExperimentConfig::resolve_spec() const {
    if (preset_label) {
        TradeoffSpec spec = preset(*preset_label);
        if (spec.prob.num_users != prob.num_users || spec.prob.num_files != prob.num_files)
            throw std::runtime_error("preset " + *preset_label + " is a " +
                                     std::to_string(spec.prob.num_users) + "-user " +
                                     std::to_string(spec.prob.num_files) +
                                     "-file instance; the configured sizes disagree");
        return spec;
    }
    if (explicit_spec) return *explicit_spec;
    throw std::runtime_error("no tradeoff given: set a preset or spell out demands");
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        bad(origin, e.what());
    }
    if (!j.is_object()) bad(origin, "top level must be a JSON object");

    ExperimentConfig cfg;
    try {
        if (j.contains("mode")) cfg.mode = mode_from_name(j.at("mode").get<std::string>(), origin);

        if (j.contains("preset")) {
            std::string label = j.at("preset").get<std::string>();
            if (!is_preset_label(label)) bad(origin, "unknown preset \"" + label + "\"");
            cfg.preset_label = label;
            cfg.prob = preset(label).prob;
        }
        if (j.contains("users") || j.contains("files")) {
            if (!j.contains("users") || !j.contains("files"))
                bad(origin, "users and files must be given together");
            cfg.prob = make_instance(j.at("users").get<int>(), j.at("files").get<int>());
        }
        if (!j.contains("preset") && !j.contains("users"))
            bad(origin, "set either a preset or users/files");

        if (j.contains("demands")) {
            if (cfg.preset_label) bad(origin, "give a preset or explicit demands, not both");
            TradeoffSpec spec;
            spec.prob = cfg.prob;
            for (const auto& d : j.at("demands"))
                spec.demands.push_back(parse_demand_label(d.get<std::string>(), cfg.prob));
            if (j.contains("cis"))
                for (const auto& c : j.at("cis"))
                    spec.cis.push_back(parse_ci(c.get<std::string>(), cfg.prob));
            spec.label = j.value("label", std::string{});
            cfg.explicit_spec = std::move(spec);
        } else if (j.contains("cis")) {
            bad(origin, "cis require explicit demands");
        }

        if (j.contains("memory")) cfg.memory = rat_field(j, origin, "memory");

        if (j.contains("grid")) {
            const json& g = j.at("grid");
            if (!g.is_object()) bad(origin, "grid must be an object");
            if (g.contains("start")) cfg.grid.start = rat_field(g, origin, "start");
            if (g.contains("step")) cfg.grid.step = rat_field(g, origin, "step");
            if (g.contains("stop")) cfg.grid.stop = rat_field(g, origin, "stop");
            if (g.contains("points"))
                for (const auto& p : g.at("points"))
                    cfg.grid.extra_points.push_back(
                        p.is_string() ? parse_rat(p.get<std::string>()) : Rat(p.get<long>()));
        }

        cfg.out_dir = j.value("out_dir", std::string{});
        cfg.export_format = j.value("format", std::string{"lp"});
        if (cfg.export_format != "lp" && cfg.export_format != "mps")
            bad(origin, "format must be \"lp\" or \"mps\"");

        if (j.contains("search")) {
            const json& s = j.at("search");
            if (s.contains("type")) {
                DemandType t;
                for (const auto& v : s.at("type")) t.push_back(v.get<int>());
                cfg.search_type = std::move(t);
            }
            if (s.contains("max_demands")) cfg.budget.max_demands = s.at("max_demands").get<int>();
            if (s.contains("max_cis")) cfg.budget.max_cis = s.at("max_cis").get<int>();
            if (s.contains("probe_memories"))
                for (const auto& p : s.at("probe_memories"))
                    cfg.budget.probe_memories.push_back(
                        p.is_string() ? parse_rat(p.get<std::string>()) : Rat(p.get<long>()));
            if (s.contains("max_lp_solves"))
                cfg.budget.max_lp_solves = s.at("max_lp_solves").get<std::uint64_t>();
            if (s.contains("lp_seconds_cap"))
                cfg.budget.lp_seconds_cap = s.at("lp_seconds_cap").get<double>();
        }
        if (j.contains("ci_side_limit")) cfg.ci_side_limit = j.at("ci_side_limit").get<int>();
        cfg.long_run = j.value("long_run", false);
    } catch (const json::exception& e) {
        bad(origin, e.what());
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

}  // namespace cachelp
