#include "metarepo/hyperparameters.hpp"

#include <algorithm>
#include <sstream>

namespace metarepo {

const ToolkitFlags* AlgorithmMapping::toolkit(std::string_view name) const {
    for (const auto& t : toolkits) {
        if (t.toolkit == name) return &t;
    }
    return nullptr;
}

const std::vector<AlgorithmMapping>& hyperparameter_registry() {
    static const std::vector<AlgorithmMapping> registry = {
        {"BP",
         {"LR", "Mo", "HN", "DC", "WE"},
         {false, false, false, true, false},
         {{"weka", {"-L", "-M", "-H", "-D", std::nullopt}},
          {"waffles", {"-learningrate", "-momentum", "-addlayer", std::nullopt, "-windowsepochs"}}}},
        {"C4.5", {"Co", "MI", "UP"}, {false, false, true}, {{"weka", {"-C", "-M", "-U"}}}},
        {"1nn", {"MT"}, {false}, {{std::string(kBuiltinToolkit), {"-metric"}}}},
        {"lda", {"RG"}, {false}, {{std::string(kBuiltinToolkit), {"-ridge"}}}},
        {"stump", {"MD"}, {false}, {{std::string(kBuiltinToolkit), {"-mode"}}}},
        {"tree", {"CF", "ML", "PR"}, {false, false, true}, {{std::string(kBuiltinToolkit), {"-cf", "-m", "-pruned"}}}},
    };
    return registry;
}

const AlgorithmMapping* find_mapping(std::string_view algorithm) {
    for (const auto& m : hyperparameter_registry()) {
        if (m.algorithm == algorithm) return &m;
    }
    return nullptr;
}

std::map<std::string, std::string> normalize_hyperparameters(std::string_view algorithm, std::string_view toolkit,
                                                             std::string_view command_line) {
    std::map<std::string, std::string> out;
    const AlgorithmMapping* mapping = find_mapping(algorithm);
    if (!mapping) return out;
    const ToolkitFlags* flags = mapping->toolkit(toolkit);
    if (!flags) return out;

    std::vector<std::string> tokens;
    std::istringstream in{std::string(command_line)};
    for (std::string t; in >> t;) tokens.push_back(t);

    for (std::size_t p = 0; p < mapping->parameters.size(); ++p) {
        std::string value = "?";
        if (const auto& flag = flags->flags[p]) {
            const auto it = std::find(tokens.begin(), tokens.end(), *flag);
            if (mapping->switches[p]) {
                value = it == tokens.end() ? "0" : "1";
            } else if (it != tokens.end() && std::next(it) != tokens.end()) {
                value = *std::next(it);
            }
        }
        out[mapping->parameters[p]] = value;
    }
    return out;
}

} // namespace metarepo
