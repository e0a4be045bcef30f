#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pcnull {

enum class ErrorCode {
    size,             // stimulus count below 2
    scale,            // scale bound <= 1, or out-of-scale value under strict mode
    index,            // index outside 0..n-1
    diagonal_write,   // attempt to set or clear a diagonal cell
    domain,           // non-positive value where a positive ratio is required
    slot_not_null,    // replacement requested for a slot that is already known
    deferred_slot,    // slot has no complete companion triad yet
    not_recoverable,  // entry graph is disconnected
    incomplete,       // operation needs a matrix without nulls
    shape,            // ragged or non-square input grid
    diagonal,         // diagonal token is not 1
    reciprocity,      // a_ij * a_ji deviates from 1
    token,            // unparseable token
    duplicate,        // same (i,j) listed twice
    orientation,      // entry with i >= j
    malformed,        // structurally invalid document
};

std::string_view to_string(ErrorCode code);

/// Location attached to a failure. Line/column for text grids, entry index
/// for JSON documents, cell for matrix operations. Fields are 1-based.
struct Location {
    std::optional<std::size_t> line;
    std::optional<std::size_t> column;
    std::optional<std::size_t> entry;
    std::optional<std::size_t> row;
    std::optional<std::size_t> col;

    bool empty() const { return !line && !column && !entry && !row && !col; }
    std::string describe() const;
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, Location where = {});

    ErrorCode code() const noexcept { return code_; }
    const Location& where() const noexcept { return where_; }
    /// Message without the location suffix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    Location where_;
    std::string detail_;
};

}  // namespace pcnull
