#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace metarepo {

/// Toolkit used for learners that ship with this library.
inline constexpr std::string_view kBuiltinToolkit = "builtin";

/// How one toolkit spells the shared parameters of an algorithm.
struct ToolkitFlags {
    std::string toolkit;
    /// One entry per shared parameter; empty when the toolkit lacks it.
    std::vector<std::optional<std::string>> flags;
};

/// Shared parameter names of an algorithm and their per-toolkit flags.
struct AlgorithmMapping {
    std::string algorithm;
    std::vector<std::string> parameters;
    /// Parameters given as bare flags, rendered 1 when present and 0 otherwise.
    std::vector<bool> switches;
    std::vector<ToolkitFlags> toolkits;

    const ToolkitFlags* toolkit(std::string_view name) const;
};

const std::vector<AlgorithmMapping>& hyperparameter_registry();
const AlgorithmMapping* find_mapping(std::string_view algorithm);

/// Shared name -> value for a verbatim command line. Parameters the toolkit
/// lacks, or that the command line leaves unset, map to `?`. Unknown
/// algorithms or toolkits give an empty map.
std::map<std::string, std::string> normalize_hyperparameters(std::string_view algorithm, std::string_view toolkit,
                                                             std::string_view command_line);

} // namespace metarepo
