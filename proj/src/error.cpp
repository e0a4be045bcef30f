#include "pcnull/error.hpp"

namespace pcnull {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::size: return "size";
        case ErrorCode::scale: return "scale";
        case ErrorCode::index: return "index";
        case ErrorCode::diagonal_write: return "diagonal_write";
        case ErrorCode::domain: return "domain";
        case ErrorCode::slot_not_null: return "slot_not_null";
        case ErrorCode::deferred_slot: return "deferred_slot";
        case ErrorCode::not_recoverable: return "not_recoverable";
        case ErrorCode::incomplete: return "incomplete";
        case ErrorCode::shape: return "shape";
        case ErrorCode::diagonal: return "diagonal";
        case ErrorCode::reciprocity: return "reciprocity";
        case ErrorCode::token: return "token";
        case ErrorCode::duplicate: return "duplicate";
        case ErrorCode::orientation: return "orientation";
        case ErrorCode::malformed: return "malformed";
    }
    return "unknown";
}

std::string Location::describe() const {
    std::string out;
    auto add = [&out](const char* name, const std::optional<std::size_t>& v) {
        if (!v) return;
        if (!out.empty()) out += ", ";
        out += name;
        out += ' ';
        out += std::to_string(*v);
    };
    add("line", line);
    add("column", column);
    add("entry", entry);
    if (row && col) {
        if (!out.empty()) out += ", ";
        out += "cell (" + std::to_string(*row) + "," + std::to_string(*col) + ")";
    }
    return out;
}

namespace {
std::string compose(const std::string& message, const Location& where) {
    if (where.empty()) return message;
    return message + " [" + where.describe() + "]";
}
}  // namespace

Error::Error(ErrorCode code, const std::string& message, Location where)
    : std::runtime_error(compose(message, where)),
      code_(code),
      where_(where),
      detail_(message) {}

}  // namespace pcnull
