#ifndef CACHELP_CONFIG_HPP
#define CACHELP_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "cachelp/model.hpp"
#include "cachelp/search.hpp"

namespace cachelp {

enum class RunMode : std::uint8_t {
    Solve, Sweep, Search, Baselines, Gap, ExportLp, Certificate
};
const char* run_mode_name(RunMode m);

struct GridSpec {
    std::optional<Rat> start, step, stop;  // all set: explicit grid
    std::vector<Rat> extra_points;
    // Unset fields fall back to the default regime grid for the instance.
    std::vector<Rat> materialize(const Problem& prob) const;
};

struct ExperimentConfig {
    RunMode mode = RunMode::Solve;
    Problem prob;
    std::optional<std::string> preset_label;   // either a preset...
    std::optional<TradeoffSpec> explicit_spec; // ...or demands + CIs spelled out
    std::optional<Rat> memory;                 // solve/export/certificate point
    GridSpec grid;                             // sweep/gap grid
    std::string out_dir;                       // empty: stdout only
    std::string export_format = "lp";          // lp | mps (export mode)
    SearchBudget budget;                       // search mode
    std::optional<DemandType> search_type;     // search mode
    int ci_side_limit = 2;                     // search mode pool limit
    bool long_run = false;                     // unlocks K=N >= 6 solves

    TradeoffSpec resolve_spec() const;  // preset or explicit; throws when neither given
};

// Parses the JSON config format; rationals are "p/q" strings. Throws
// std::runtime_error with field diagnostics on malformed input.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

}  // namespace cachelp

#endif
