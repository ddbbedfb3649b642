#ifndef CACHELP_PRESETS_HPP
#define CACHELP_PRESETS_HPP

#include <string>
#include <vector>

#include "cachelp/model.hpp"

namespace cachelp {

// Registry labels in order: T4.1..T4.3, T5.1..T5.3, T6.1..T6.4, T7.1..T7.3,
// T8.1..T8.3. The T8 presets carry no CIs.
std::vector<std::string> preset_labels();

bool is_preset_label(const std::string& label);

// Throws std::out_of_range on unknown labels.
TradeoffSpec preset(const std::string& label);

// Parses the "W0,W1;W2,Xd0131" side-pair shorthand used by the preset
// registry and the CLI. Throws std::invalid_argument on malformed text.
CISpec parse_ci(const std::string& text, const Problem& prob);

}  // namespace cachelp

#endif
