#pragma once

#include "metarepo/error.hpp"
#include "metarepo/model.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace metarepo {

class ArffError : public DataError {
public:
    ArffError(const std::string& message, std::size_t line);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Header plus dense rows of an ARFF file, with no class attribute singled out.
struct ArffDocument {
    std::string relation;
    std::vector<AttributeSpec> attributes;
    std::vector<Row> rows;
};

/// Accepts comma- or whitespace-separated rows, `%` comments, quoted names,
/// and numeric/real/integer or `{...}` nominal attributes. Sparse rows and
/// string, date and relational attributes are rejected.
ArffDocument parse_arff_document(std::string_view text);

/// Parses and designates the class attribute: the named one, else the last declared.
Dataset parse_arff(std::string_view text, const std::optional<std::string>& class_attribute = std::nullopt);

/// Canonical form: comma separators, `\n` line ends, numbers via format_number, `?` for missing.
std::string write_arff(const Dataset& dataset);
std::string write_arff(const ArffDocument& document);

/// Fixed six decimals with trailing zeros trimmed: 0.250000 -> "0.25", 3.0 -> "3".
std::string format_number(double value);

/// Wraps a name or token in single quotes when ARFF requires it.
std::string quote_token(std::string_view token);

/// True when the whole token parses as a finite real number.
bool is_numeric_token(std::string_view token);

/// Emits a table of pre-rendered cells as an ARFF document. A column is numeric
/// when every non-`?` cell is numeric, otherwise nominal over its sorted
/// distinct cells. Cells are written verbatim, so "96.80" stays "96.80".
std::string write_meta_table(std::span<const std::string> headers,
                             std::span<const std::vector<std::string>> rows, std::string_view relation);

} // namespace metarepo
