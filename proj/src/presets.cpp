#include "cachelp/presets.hpp"

#include <stdexcept>

namespace cachelp {

namespace {

struct PresetDef {
    const char* label;
    int users;
    int files;
    std::vector<const char*> demands;
    std::vector<const char*> cis;  // "W0,W1;W2,Xd0131" shorthand
};

const std::vector<PresetDef>& registry() {
    static const std::vector<PresetDef> defs = {
        {"T4.1", 4, 4, {"0123", "0132", "0213", "1023"},
         {"W0,W1;Xd0123", "Xd0123,Z1;W2,W3,Z3"}},
        {"T4.2", 4, 4, {"0123", "0132", "0213", "1023"},
         {"W0,W1;Xd0123", "W1,Z2;W0,Xd0123"}},
        {"T4.3", 4, 4, {"0012", "0131", "0211"},
         {"W0,W1,Z1;W2,Xd0131,Z2", "W0,W3;Xd0131,Z1"}},
        {"T5.1", 5, 5, {"01234", "32401", "42130", "13240", "23401", "43210"},
         {"W0,W1;W2,Xd01234", "W0,W1;W2,W3,Xd01234"}},
        {"T5.2", 5, 5, {"01234", "01342", "02314", "04123", "04312"},
         {"W0,Z1;Xd01234", "W0,W1;Xd01234"}},
        {"T5.3", 5, 5, {"00123", "14003", "01230"},
         {"W0,W1;Xd00123", "W0,Z0;Xd00123,Z3"}},
        {"T6.1", 6, 6, {"012345", "012453", "021345", "013524"},
         {"W0,Z0;Xd012345,Z1", "W0,Z1;Xd012345,Z2"}},
        {"T6.2", 6, 6, {"001234", "010245", "045201"}, {"W0,W1;W2,Xd001234"}},
        {"T6.3", 6, 6, {"001234", "012353", "005312"}, {"W0,W1;W2,Xd001234"}},
        {"T6.4", 6, 6, {"001234", "001345", "004523"}, {"W0,W1;W2,Xd001345"}},
        {"T7.1", 7, 7, {"0123456", "1234560"}, {"W0,W1;Z0,Xd0123456"}},
        {"T7.2", 7, 7, {"0012345", "0123450"}, {"W0,W1;Z0,Xd0012345"}},
        {"T7.3", 7, 7, {"0001234", "0012340"}, {"W0,W1;Z0,Xd0001234"}},
        {"T8.1", 8, 8, {"01234567", "12345670"}, {}},
        {"T8.2", 8, 8, {"00123456", "01234560"}, {}},
        {"T8.3", 8, 8, {"00012345", "00123450"}, {}},
    };
    return defs;
}

VarId parse_var(const std::string& token, const Problem& prob) {
    if (token.size() >= 2 && token[0] == 'W')
        return file_var(std::stoi(token.substr(1)));
    if (token.size() >= 2 && token[0] == 'Z')
        return cache_var(std::stoi(token.substr(1)));
    if (token.size() > 2 && token[0] == 'X' && token[1] == 'd')
        return signal_var(parse_demand_label(token.substr(2), prob));
    throw std::invalid_argument("unrecognized variable token '" + token + "'");
}

std::vector<VarId> parse_side(const std::string& side, const Problem& prob) {
    std::vector<VarId> vars;
    std::size_t pos = 0;
    while (pos < side.size()) {
        std::size_t comma = side.find(',', pos);
        if (comma == std::string::npos) comma = side.size();
        vars.push_back(parse_var(side.substr(pos, comma - pos), prob));
        pos = comma + 1;
    }
    return vars;
}

}  // namespace

CISpec parse_ci(const std::string& text, const Problem& prob) {
    std::size_t semi = text.find(';');
    if (semi == std::string::npos)
        throw std::invalid_argument("CI '" + text + "' needs two ';'-separated sides");
    CISpec ci;
    ci.left = parse_side(text.substr(0, semi), prob);
    ci.right = parse_side(text.substr(semi + 1), prob);
    return ci;
}

std::vector<std::string> preset_labels() {
    std::vector<std::string> out;
    for (const auto& def : registry()) out.emplace_back(def.label);
    return out;
}

bool is_preset_label(const std::string& label) {
    for (const auto& def : registry())
        if (label == def.label) return true;
    return false;
}

TradeoffSpec preset(const std::string& label) {
    for (const auto& def : registry()) {
        if (label != def.label) continue;
        TradeoffSpec spec;
        spec.prob = make_instance(def.users, def.files);
        for (const char* d : def.demands)
            spec.demands.push_back(parse_demand_label(d, spec.prob));
        for (const char* c : def.cis) spec.cis.push_back(parse_ci(c, spec.prob));
        spec.label = label;
        return spec;
    }
    throw std::out_of_range("unknown preset label '" + label + "'");
}

}  // namespace cachelp
