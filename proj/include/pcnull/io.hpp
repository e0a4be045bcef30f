#pragma once
// CSV and JSON forms of a pairwise comparisons matrix.
//
// CSV: n lines of n comma-separated fields, no quoting. A field is a decimal
// number, a fraction "p/q", or "?"/empty for null. Both cells of a pair may
// be given; they must agree to 1e-6 relative. Numbers are emitted in their
// shortest exact form, so parsing the output gives back the same doubles.
//
// JSON: {"n": 3, "scale": 5, "labels": [...], "entries": [{"i":1,"j":3,"value":5}]}
// with 1-based upper-triangle entries only. Omitted pairs are null. Unknown
// fields are ignored.

#include <string>
#include <string_view>

#include <json.hpp>

#include "pcnull/matrix.hpp"

namespace pcnull {

inline constexpr double kParseReciprocityTolerance = 1e-6;

struct ParseOptions {
    double scale_bound = kDefaultScaleBound;  // JSON "scale" overrides this when present
    ScaleMode mode = ScaleMode::lenient;
};

/// Parses one token; nullopt for "?" or empty. Throws `token` on anything else
/// that is not a finite number or fraction.
Cell parse_token(std::string_view token);

/// Token-level parse into a full grid, no reconciliation.
DenseGrid parse_csv_grid(std::string_view text, double scale_bound = kDefaultScaleBound);
/// Reconciles a dense grid into a matrix: diagonal must be 1, a lone cell of
/// a pair determines its partner, two given cells must be reciprocal.
PCMatrix matrix_from_grid(const DenseGrid& grid, ScaleMode mode = ScaleMode::lenient);
PCMatrix parse_csv(std::string_view text, const ParseOptions& options = {});
std::string emit_csv(const PCMatrix& m);

PCMatrix parse_json(std::string_view text, const ParseOptions& options = {});
PCMatrix from_json(const nlohmann::json& doc, const ParseOptions& options = {});
nlohmann::ordered_json to_json(const PCMatrix& m);
std::string emit_json(const PCMatrix& m);

enum class Format { csv, json };

/// JSON when the first non-blank character is '{', CSV otherwise.
Format sniff_format(std::string_view text);
PCMatrix parse_document(std::string_view text, const ParseOptions& options = {});

/// Shortest decimal text that parses back to exactly v.
std::string format_number(double v);

}  // namespace pcnull
