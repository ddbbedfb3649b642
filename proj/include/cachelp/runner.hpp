#ifndef CACHELP_RUNNER_HPP
#define CACHELP_RUNNER_HPP

#include <iosfwd>

#include "cachelp/config.hpp"

namespace cachelp {

// Executes a configured experiment, writing a human-readable report to `log`
// and, when cfg.out_dir is nonempty, data files beneath it. Returns a process
// exit code (0 on success, 1 when a run-level check fails, 2 on bad config).
int run_experiment(const ExperimentConfig& cfg, std::ostream& log);

// Data files use a deterministic layout: tab-separated "x y1 ... yk" with a
// header row, values printed to 12 significant digits, plus a sibling
// "<name>.exact" with the same table in p/q form.
void write_table(const std::string& path,
                 const std::vector<std::string>& col_names,
                 const std::vector<std::vector<std::optional<Rat>>>& rows_by_point,
                 const std::vector<Rat>& xs);

}  // namespace cachelp

#endif
