#pragma once
// Session store behind the HTTP API.
//
// Each session holds one matrix and a revision counter. Mutations must quote
// the revision they were based on; a stale revision is rejected with 409 and
// never changes state. Mutations on one session are serialized, reads share
// a lock, and different sessions never contend beyond the map lookup.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

#include <json.hpp>

#include "pcnull/io.hpp"
#include "pcnull/matrix.hpp"

namespace pcnull {

/// Error surfaced to HTTP clients: status, machine-readable code, message.
class ApiError : public std::runtime_error {
public:
    ApiError(int status, std::string code, const std::string& message, nlohmann::ordered_json details = nullptr)
        : std::runtime_error(message), status_(status), code_(std::move(code)), details_(std::move(details)) {}

    int status() const noexcept { return status_; }
    const std::string& code() const noexcept { return code_; }
    const nlohmann::ordered_json& details() const noexcept { return details_; }
    nlohmann::ordered_json body() const;

private:
    int status_;
    std::string code_;
    nlohmann::ordered_json details_;
};

/// Maps a library error to its HTTP status and error body.
ApiError to_api_error(const Error& e);

struct ServiceConfig {
    /// When set, every session is written to <dir>/<id>.json on mutation and
    /// reloaded from there on startup.
    std::optional<std::filesystem::path> snapshot_dir;
};

class SessionService {
public:
    using Json = nlohmann::ordered_json;

    explicit SessionService(ServiceConfig config = {});

    /// Body is an io JSON document ({"n":..,"scale":..,"entries":[..]}),
    /// optionally with "strict": true, or {"csv": "...", "scale": ..}.
    Json create_session(const Json& body);
    Json get_session(std::string_view id) const;
    /// i, j are 1-based. Body: {"value": number | "p/q" | null, "expected_revision": r}.
    Json put_entry(std::string_view id, long long i, long long j, const Json& body);
    Json get_report(std::string_view id) const;
    /// Body: {"method": "gm"|"triad"|"transitive", "commit": bool, "expected_revision": r (optional)}.
    Json recover(std::string_view id, const Json& body);
    Json get_weights(std::string_view id, bool normalize) const;
    std::string export_matrix(std::string_view id, Format format) const;

    std::size_t session_count() const;

private:
    struct Session {
        std::string id;
        PCMatrix matrix;
        std::uint64_t revision = 0;
        std::chrono::system_clock::time_point created;
        std::chrono::system_clock::time_point updated;
        mutable std::shared_mutex mutex;

        explicit Session(PCMatrix m) : matrix(std::move(m)) {}
    };

    std::shared_ptr<Session> find(std::string_view id) const;
    std::string new_id();
    static Json state_json(const Session& s);
    void snapshot(const Session& s) const;
    void load_snapshots();

    ServiceConfig config_;
    mutable std::shared_mutex sessions_mutex_;
    std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace pcnull
