#include "pcnull/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>
#include <string>
#include <vector>

namespace pcnull {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_decimal(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

Location line_col(std::size_t line, std::size_t column) {
    Location l;
    l.line = line;
    l.column = column;
    return l;
}

Location cell_loc(std::size_t i, std::size_t j) {
    Location l;
    l.row = i + 1;
    l.col = j + 1;
    return l;
}

Location entry_loc(std::size_t index) {
    Location l;
    l.entry = index + 1;
    return l;
}

// Rewrites the location of an error raised by PCMatrix::set.
[[noreturn]] void rethrow_at(const Error& e, Location where) { throw Error(e.code(), e.detail(), where); }

}  // namespace

std::string format_number(double v) {
    // Shortest text that parses back to the same double; 12 digits or fewer whenever that suffices.
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Cell parse_token(std::string_view token) {
    token = trim(token);
    if (token.empty() || token == "?") return std::nullopt;
    const auto slash = token.find('/');
    if (slash == std::string_view::npos) {
        if (auto v = parse_decimal(token)) return *v;
    } else {
        const auto num = parse_decimal(token.substr(0, slash));
        const auto den = parse_decimal(token.substr(slash + 1));
        if (num && den && *den != 0.0) {
            const double v = *num / *den;
            if (std::isfinite(v)) return v;
        }
    }
    throw Error(ErrorCode::token, "cannot parse token '" + std::string(token) + "'");
}

DenseGrid parse_csv_grid(std::string_view text, double scale_bound) {
    std::vector<std::string_view> lines = split(text, '\n');
    for (auto& line : lines)
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw Error(ErrorCode::shape, "empty document");

    DenseGrid g;
    g.n = lines.size();
    g.scale_bound = scale_bound;
    g.cells.resize(g.n * g.n);
    for (std::size_t r = 0; r < g.n; ++r) {
        const auto fields = split(lines[r], ',');
        if (fields.size() != g.n)
            throw Error(ErrorCode::shape,
                        "expected " + std::to_string(g.n) + " fields, found " + std::to_string(fields.size()),
                        line_col(r + 1, std::min(fields.size(), g.n) + 1));
        for (std::size_t c = 0; c < g.n; ++c) {
            try {
                g(r, c) = parse_token(fields[c]);
            } catch (const Error& e) {
                throw Error(e.code(), e.detail(), line_col(r + 1, c + 1));
            }
        }
    }
    return g;
}

PCMatrix matrix_from_grid(const DenseGrid& g, ScaleMode mode) {
    PCMatrix m(g.n, g.scale_bound, mode);
    if (!g.labels.empty()) m.set_labels(g.labels);
    for (std::size_t i = 0; i < g.n; ++i) {
        const Cell& d = g(i, i);
        if (!d || std::abs(*d - 1.0) > kReciprocityTolerance)
            throw Error(ErrorCode::diagonal, "diagonal cell must be 1", line_col(i + 1, i + 1));
    }
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = i + 1; j < g.n; ++j) {
            const Cell& a = g(i, j);
            const Cell& b = g(j, i);
            for (auto [cell, r, c] : {std::tuple{a, i, j}, std::tuple{b, j, i}})
                if (cell && !(*cell > 0.0))
                    throw Error(ErrorCode::domain, "comparison value must be positive", line_col(r + 1, c + 1));
            try {
                if (a && b) {
                    if (std::abs(*a * *b - 1.0) > kParseReciprocityTolerance)
                        throw Error(ErrorCode::reciprocity,
                                    "a_ij * a_ji = " + format_number(*a * *b) + ", cells (" +
                                        std::to_string(i + 1) + "," + std::to_string(j + 1) + ") and (" +
                                        std::to_string(j + 1) + "," + std::to_string(i + 1) +
                                        ") are not reciprocal",
                                    cell_loc(i, j));
                    m.set(i, j, *a);
                } else if (a) {
                    m.set(i, j, *a);
                } else if (b) {
                    m.set(j, i, *b);
                }
            } catch (const Error& e) {
                if (e.code() == ErrorCode::reciprocity) throw;
                rethrow_at(e, line_col((a ? i : j) + 1, (a ? j : i) + 1));
            }
        }
    return m;
}

PCMatrix parse_csv(std::string_view text, const ParseOptions& options) {
    return matrix_from_grid(parse_csv_grid(text, options.scale_bound), options.mode);
}

std::string emit_csv(const PCMatrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j) out += ',';
            if (i == j) {
                out += '1';
            } else if (const Cell c = m.at(i, j)) {
                out += format_number(*c);
            } else {
                out += '?';
            }
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------

PCMatrix from_json(const nlohmann::json& doc, const ParseOptions& options) {
    using nlohmann::json;
    if (!doc.is_object()) throw Error(ErrorCode::malformed, "document must be a JSON object");
    if (!doc.contains("n") || !doc["n"].is_number_integer())
        throw Error(ErrorCode::malformed, "field 'n' must be an integer");
    const auto n_signed = doc["n"].get<long long>();
    if (n_signed < 2) throw Error(ErrorCode::size, "matrix needs at least 2 stimuli, got " + std::to_string(n_signed));
    const auto n = static_cast<std::size_t>(n_signed);

    double scale = options.scale_bound;
    if (doc.contains("scale") && !doc["scale"].is_null()) {
        if (!doc["scale"].is_number()) throw Error(ErrorCode::malformed, "field 'scale' must be a number");
        scale = doc["scale"].get<double>();
    }
    PCMatrix m(n, scale, options.mode);

    if (doc.contains("labels") && !doc["labels"].is_null()) {
        const json& labels = doc["labels"];
        if (!labels.is_array()) throw Error(ErrorCode::malformed, "field 'labels' must be an array of strings");
        std::vector<std::string> names;
        for (const auto& l : labels) {
            if (!l.is_string()) throw Error(ErrorCode::malformed, "field 'labels' must be an array of strings");
            names.push_back(l.get<std::string>());
        }
        m.set_labels(std::move(names));
    }

    if (!doc.contains("entries")) return m;
    const json& entries = doc["entries"];
    if (!entries.is_array()) throw Error(ErrorCode::malformed, "field 'entries' must be an array");

    std::set<std::pair<long long, long long>> seen;
    for (std::size_t idx = 0; idx < entries.size(); ++idx) {
        const json& e = entries[idx];
        const Location where = entry_loc(idx);
        if (!e.is_object() || !e.contains("i") || !e.contains("j") || !e["i"].is_number_integer() ||
            !e["j"].is_number_integer())
            throw Error(ErrorCode::malformed, "entry needs integer fields 'i' and 'j'", where);
        const auto i = e["i"].get<long long>();
        const auto j = e["j"].get<long long>();
        if (i < 1 || j < 1 || i > n_signed || j > n_signed)
            throw Error(ErrorCode::index, "entry index outside 1.." + std::to_string(n), where);
        if (i >= j) throw Error(ErrorCode::orientation, "entries must satisfy i < j (upper triangle)", where);
        if (!seen.emplace(i, j).second)
            throw Error(ErrorCode::duplicate,
                        "pair (" + std::to_string(i) + "," + std::to_string(j) + ") listed twice", where);

        Cell value;
        const json& v = e.contains("value") ? e["value"] : json();
        if (v.is_number()) {
            value = v.get<double>();
        } else if (v.is_string()) {
            try {
                value = parse_token(v.get<std::string>());
            } catch (const Error& err) {
                rethrow_at(err, where);
            }
        } else if (!v.is_null()) {
            throw Error(ErrorCode::malformed, "entry 'value' must be a number, fraction string or null", where);
        }
        if (!value) continue;
        try {
            m.set(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), *value);
        } catch (const Error& err) {
            rethrow_at(err, where);
        }
    }
    return m;
}

PCMatrix parse_json(std::string_view text, const ParseOptions& options) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        Location where;
        where.column = e.byte;
        throw Error(ErrorCode::malformed, "invalid JSON", where);
    }
    return from_json(doc, options);
}

nlohmann::ordered_json to_json(const PCMatrix& m) {
    nlohmann::ordered_json doc;
    doc["n"] = m.size();
    doc["scale"] = m.scale_bound();
    if (!m.labels().empty()) doc["labels"] = m.labels();
    auto entries = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (const Cell c = m.at(i, j)) entries.push_back({{"i", i + 1}, {"j", j + 1}, {"value", *c}});
    doc["entries"] = std::move(entries);
    return doc;
}

std::string emit_json(const PCMatrix& m) { return to_json(m).dump(); }

Format sniff_format(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return Format::json;
    return Format::csv;
}

PCMatrix parse_document(std::string_view text, const ParseOptions& options) {
    return sniff_format(text) == Format::json ? parse_json(text, options) : parse_csv(text, options);
}

}  // namespace pcnull
