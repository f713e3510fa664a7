#include "metarepo/arff.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_set>

namespace metarepo {

ArffError::ArffError(const std::string& message, std::size_t line)
    : DataError(line > 0 ? message + " at line " + std::to_string(line) : message), line_(line) {}

namespace {

struct Token {
    std::string text;
    bool quoted = false;
};

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

class Cursor {
public:
    Cursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    void skip_space() {
        while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
    }
    bool done() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    void advance() { ++pos_; }
    std::string_view rest() const { return text_.substr(pos_); }

    /// A quoted string, or a run of characters up to whitespace or any of `stops`.
    Token read_token(std::string_view stops) {
        Token tok;
        if (done()) return tok;
        char q = peek();
        if (q == '\'' || q == '"') {
            tok.quoted = true;
            ++pos_;
            while (true) {
                if (done()) throw ArffError("unterminated quote", line_);
                char c = text_[pos_++];
                if (c == q) break;
                if (c == '\\') {
                    if (done()) throw ArffError("unterminated quote", line_);
                    char e = text_[pos_++];
                    switch (e) {
                    case 'n': tok.text.push_back('\n'); break;
                    case 't': tok.text.push_back('\t'); break;
                    default: tok.text.push_back(e); break;
                    }
                } else {
                    tok.text.push_back(c);
                }
            }
            return tok;
        }
        while (!done() && !is_space(peek()) && stops.find(peek()) == std::string_view::npos) {
            tok.text.push_back(text_[pos_++]);
        }
        return tok;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_;
};

/// Splits a data row on commas and/or whitespace.
std::vector<Token> split_row(std::string_view line, std::size_t line_no) {
    std::vector<Token> out;
    Cursor cur(line, line_no);
    cur.skip_space();
    while (!cur.done()) {
        Token tok = cur.read_token(",");
        if (!tok.quoted && tok.text.empty()) throw ArffError("empty value", line_no);
        out.push_back(std::move(tok));
        cur.skip_space();
        if (!cur.done() && cur.peek() == ',') {
            cur.advance();
            cur.skip_space();
            if (cur.done()) throw ArffError("empty value", line_no);
        }
    }
    return out;
}

std::optional<double> parse_real(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::vector<std::string> parse_category_list(std::string_view body, std::size_t line_no) {
    std::vector<std::string> cats;
    Cursor cur(body, line_no);
    cur.skip_space();
    while (!cur.done()) {
        Token tok = cur.read_token(",");
        // unquoted categories may contain inner spaces
        if (!tok.quoted) {
            cur.skip_space();
            while (!cur.done() && cur.peek() != ',') {
                Token more = cur.read_token(",");
                tok.text += " " + more.text;
                cur.skip_space();
            }
        }
        if (!tok.quoted && tok.text.empty()) throw ArffError("empty category", line_no);
        cats.push_back(std::move(tok.text));
        cur.skip_space();
        if (!cur.done()) {
            if (cur.peek() != ',') throw ArffError("malformed category list", line_no);
            cur.advance();
            cur.skip_space();
            if (cur.done()) throw ArffError("empty category", line_no);
        }
    }
    if (cats.empty()) throw ArffError("nominal attribute has no categories", line_no);
    std::set<std::string> seen;
    for (const auto& c : cats) {
        if (!seen.insert(c).second) throw ArffError("duplicate category '" + c + "'", line_no);
    }
    return cats;
}

AttributeSpec parse_attribute(std::string_view rest, std::size_t line_no) {
    Cursor cur(rest, line_no);
    cur.skip_space();
    Token name = cur.read_token("{");
    if (name.text.empty() && !name.quoted) throw ArffError("malformed header", line_no);
    cur.skip_space();
    if (cur.done()) throw ArffError("malformed header", line_no);
    if (cur.peek() == '{') {
        std::string_view spec = cur.rest();
        auto close = spec.rfind('}');
        if (close == std::string_view::npos) throw ArffError("malformed category list", line_no);
        for (char c : spec.substr(close + 1)) {
            if (!is_space(c)) throw ArffError("malformed category list", line_no);
        }
        return AttributeSpec::nominal(std::move(name.text), parse_category_list(spec.substr(1, close - 1), line_no));
    }
    Token type = cur.read_token("");
    if (iequals(type.text, "numeric") || iequals(type.text, "real") || iequals(type.text, "integer")) {
        cur.skip_space();
        if (!cur.done()) throw ArffError("malformed header", line_no);
        return AttributeSpec::numeric(std::move(name.text));
    }
    if (iequals(type.text, "string") || iequals(type.text, "date") || iequals(type.text, "relational")) {
        throw ArffError("unsupported attribute type '" + type.text + "'", line_no);
    }
    throw ArffError("malformed header", line_no);
}

bool needs_quotes(std::string_view token) {
    if (token.empty()) return true;
    for (unsigned char c : token) {
        if (c >= 0x80) continue;
        if (std::isalnum(c) || c == '_' || c == '.' || c == '-' || c == '+') continue;
        return true;
    }
    return false;
}

std::string render_value(const AttributeSpec& attr, const Value& v) {
    if (v.is_missing()) return "?";
    if (attr.is_nominal()) return quote_token(attr.categories.at(v.category()));
    return format_number(v.number());
}

std::string render_header(std::string_view relation, std::span<const AttributeSpec> attributes) {
    std::string out = "@relation " + quote_token(relation) + "\n\n";
    for (const auto& a : attributes) {
        out += "@attribute " + quote_token(a.name) + " ";
        if (a.is_nominal()) {
            out += "{";
            for (std::size_t c = 0; c < a.categories.size(); ++c) {
                if (c) out += ",";
                out += quote_token(a.categories[c]);
            }
            out += "}\n";
        } else {
            out += "numeric\n";
        }
    }
    out += "\n@data\n";
    return out;
}

} // namespace

ArffDocument parse_arff_document(std::string_view text) {
    ArffDocument doc;
    bool have_relation = false;
    bool in_data = false;
    std::unordered_set<std::string> names;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;

        while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
        while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
        if (line.empty() || line.front() == '%') {
            if (end == text.size()) break;
            continue;
        }

        if (!in_data) {
            if (line.front() != '@') throw ArffError("malformed header", line_no);
            auto kw_end = std::find_if(line.begin(), line.end(), [](char c) { return is_space(c); });
            std::string_view keyword(line.data(), static_cast<std::size_t>(kw_end - line.begin()));
            std::string_view rest = line.substr(keyword.size());
            if (iequals(keyword, "@relation")) {
                if (have_relation) throw ArffError("malformed header", line_no);
                Cursor cur(rest, line_no);
                cur.skip_space();
                doc.relation = cur.read_token("").text;
                have_relation = true;
            } else if (iequals(keyword, "@attribute")) {
                if (!have_relation) throw ArffError("malformed header", line_no);
                AttributeSpec attr = parse_attribute(rest, line_no);
                if (!names.insert(attr.name).second) {
                    throw ArffError("duplicate attribute '" + attr.name + "'", line_no);
                }
                doc.attributes.push_back(std::move(attr));
            } else if (iequals(keyword, "@data")) {
                if (!have_relation || doc.attributes.empty()) throw ArffError("malformed header", line_no);
                in_data = true;
            } else {
                throw ArffError("malformed header", line_no);
            }
        } else {
            if (line.front() == '{') throw ArffError("sparse rows are not supported", line_no);
            auto tokens = split_row(line, line_no);
            if (tokens.size() != doc.attributes.size()) {
                throw ArffError("expected " + std::to_string(doc.attributes.size()) + " values, got " +
                                    std::to_string(tokens.size()),
                                line_no);
            }
            Row row;
            row.reserve(tokens.size());
            for (std::size_t a = 0; a < tokens.size(); ++a) {
                const Token& tok = tokens[a];
                const AttributeSpec& attr = doc.attributes[a];
                if (!tok.quoted && tok.text == "?") {
                    row.push_back(Value::missing());
                } else if (attr.is_nominal()) {
                    auto idx = attr.category_index(tok.text);
                    if (!idx) throw ArffError("undeclared category", line_no);
                    row.push_back(Value::nominal(*idx));
                } else {
                    auto v = tok.quoted ? std::nullopt : parse_real(tok.text);
                    if (!v) throw ArffError("bad numeric value '" + tok.text + "'", line_no);
                    row.push_back(Value::numeric(*v));
                }
            }
            doc.rows.push_back(std::move(row));
        }
        if (end == text.size()) break;
    }
    if (!in_data) throw ArffError("malformed header", 0);
    return doc;
}

Dataset parse_arff(std::string_view text, const std::optional<std::string>& class_attribute) {
    ArffDocument doc = parse_arff_document(text);
    std::size_t class_index = doc.attributes.size() - 1;
    if (class_attribute) {
        auto it = std::find_if(doc.attributes.begin(), doc.attributes.end(),
                               [&](const AttributeSpec& a) { return a.name == *class_attribute; });
        if (it == doc.attributes.end()) throw ArffError("unknown class attribute '" + *class_attribute + "'", 0);
        class_index = static_cast<std::size_t>(it - doc.attributes.begin());
    }
    if (!doc.attributes[class_index].is_nominal()) {
        throw ArffError("class attribute '" + doc.attributes[class_index].name + "' is not nominal", 0);
    }
    return Dataset{std::move(doc.relation), std::move(doc.attributes), class_index, std::move(doc.rows)};
}

std::string write_arff(const Dataset& dataset) {
    std::string out = render_header(dataset.name(), dataset.attributes());
    const auto attrs = dataset.attributes();
    for (const auto& row : dataset.rows()) {
        for (std::size_t a = 0; a < attrs.size(); ++a) {
            if (a) out += ",";
            out += render_value(attrs[a], row[a]);
        }
        out += "\n";
    }
    return out;
}

std::string write_arff(const ArffDocument& document) {
    std::string out = render_header(document.relation, document.attributes);
    for (const auto& row : document.rows) {
        for (std::size_t a = 0; a < document.attributes.size(); ++a) {
            if (a) out += ",";
            out += render_value(document.attributes[a], row[a]);
        }
        out += "\n";
    }
    return out;
}

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

std::string quote_token(std::string_view token) {
    if (!needs_quotes(token)) return std::string(token);
    std::string out = "'";
    for (char c : token) {
        switch (c) {
        case '\'': out += "\\'"; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out.push_back(c); break;
        }
    }
    out += "'";
    return out;
}

bool is_numeric_token(std::string_view token) { return parse_real(token).has_value(); }

std::string write_meta_table(std::span<const std::string> headers,
                             std::span<const std::vector<std::string>> rows, std::string_view relation) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != headers.size()) {
            throw DataError("row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                            " cells for " + std::to_string(headers.size()) + " columns");
        }
    }
    std::vector<AttributeSpec> attributes;
    attributes.reserve(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) {
        bool numeric = true;
        std::set<std::string> observed;
        for (const auto& row : rows) {
            if (row[c] == "?") continue;
            observed.insert(row[c]);
            if (!is_numeric_token(row[c])) numeric = false;
        }
        if (numeric) {
            attributes.push_back(AttributeSpec::numeric(headers[c]));
        } else {
            attributes.push_back(AttributeSpec::nominal(headers[c], {observed.begin(), observed.end()}));
        }
    }
    std::string out = render_header(relation, attributes);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ",";
            if (row[c] == "?" || attributes[c].is_numeric()) {
                out += row[c];
            } else {
                out += quote_token(row[c]);
            }
        }
        out += "\n";
    }
    return out;
}

} // namespace metarepo
