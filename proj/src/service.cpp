#include "pcnull/service.hpp"

#include <ctime>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>

#include "pcnull/inconsistency.hpp"
#include "pcnull/recovery.hpp"
#include "pcnull/views.hpp"
#include "pcnull/weights.hpp"

namespace pcnull {

using Json = SessionService::Json;

namespace {

std::string iso8601(std::chrono::system_clock::time_point t) {
    const std::time_t secs = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

long long epoch_ms(std::chrono::system_clock::time_point t) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
}

std::chrono::system_clock::time_point from_epoch_ms(long long ms) {
    return std::chrono::system_clock::time_point(std::chrono::milliseconds(ms));
}

Json location_json(const Location& where) {
    Json out = Json::object();
    if (where.line) out["line"] = *where.line;
    if (where.column) out["column"] = *where.column;
    if (where.entry) out["entry"] = *where.entry;
    if (where.row) out["i"] = *where.row;
    if (where.col) out["j"] = *where.col;
    return out;
}

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::not_recoverable:
        case ErrorCode::incomplete:
        case ErrorCode::deferred_slot:
            return 422;
        default:
            return 400;
    }
}

void check_revision(const Json& body, std::uint64_t current, bool required) {
    if (!body.contains("expected_revision") || body["expected_revision"].is_null()) {
        if (required) throw ApiError(400, "malformed", "field 'expected_revision' is required");
        return;
    }
    const Json& rev = body["expected_revision"];
    if (!rev.is_number_unsigned() && !rev.is_number_integer())
        throw ApiError(400, "malformed", "field 'expected_revision' must be an integer");
    if (rev.get<long long>() < 0 || static_cast<std::uint64_t>(rev.get<long long>()) != current)
        throw ApiError(409, "conflict",
                       "stale revision: expected " + std::to_string(current) + ", got " + rev.dump(),
                       Json{{"revision", current}});
}

}  // namespace

Json ApiError::body() const {
    Json err{{"code", code_}, {"message", what()}};
    if (!details_.is_null()) err["details"] = details_;
    return Json{{"error", std::move(err)}};
}

ApiError to_api_error(const Error& e) {
    Json details = Json::object();
    const Json where = location_json(e.where());
    if (!where.empty()) details["location"] = where;
    return ApiError(status_for(e.code()), std::string(to_string(e.code())), e.what(),
                    details.empty() ? Json(nullptr) : details);
}

// ---------------------------------------------------------------------------

SessionService::SessionService(ServiceConfig config) : config_(std::move(config)) {
    if (config_.snapshot_dir) {
        std::filesystem::create_directories(*config_.snapshot_dir);
        load_snapshots();
    }
}

std::string SessionService::new_id() {
    static std::mutex rng_mutex;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(rng_mutex);
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                  static_cast<unsigned long long>(rng()));
    return buf;
}

std::shared_ptr<SessionService::Session> SessionService::find(std::string_view id) const {
    std::shared_lock lock(sessions_mutex_);
    auto it = sessions_.find(std::string(id));
    if (it == sessions_.end()) throw ApiError(404, "not_found", "no session '" + std::string(id) + "'");
    return it->second;
}

std::size_t SessionService::session_count() const {
    std::shared_lock lock(sessions_mutex_);
    return sessions_.size();
}

Json SessionService::state_json(const Session& s) {
    Json out;
    out["id"] = s.id;
    out["revision"] = s.revision;
    out["created"] = iso8601(s.created);
    out["updated"] = iso8601(s.updated);
    out["strict"] = s.matrix.scale_mode() == ScaleMode::strict;
    out["matrix"] = to_json(s.matrix);
    out["grid"] = grid_json(s.matrix);
    out["validation"] = diagnostics_json(validate(s.matrix));
    const Json analysis = analysis_json(s.matrix);
    out["report"] = analysis["report"];
    out["recoverability"] = analysis["recoverability"];
    out["null_slots"] = analysis["null_slots"];
    return out;
}

Json SessionService::create_session(const Json& body) {
    if (!body.is_object()) throw ApiError(400, "malformed", "request body must be a JSON object");
    ParseOptions options;
    if (body.contains("strict") && body["strict"].is_boolean() && body["strict"].get<bool>())
        options.mode = ScaleMode::strict;

    std::optional<PCMatrix> matrix;
    try {
        if (body.contains("csv")) {
            if (!body["csv"].is_string()) throw ApiError(400, "malformed", "field 'csv' must be a string");
            if (body.contains("scale") && body["scale"].is_number()) options.scale_bound = body["scale"].get<double>();
            matrix = parse_csv(body["csv"].get<std::string>(), options);
            if (body.contains("labels")) {
                std::vector<std::string> labels = nlohmann::json(body["labels"]).get<std::vector<std::string>>();
                matrix->set_labels(std::move(labels));
            }
        } else {
            matrix = from_json(nlohmann::json(body), options);
        }
    } catch (const Error& e) {
        throw to_api_error(e);
    } catch (const nlohmann::json::exception& e) {
        throw ApiError(400, "malformed", e.what());
    }

    auto session = std::make_shared<Session>(std::move(*matrix));
    session->created = session->updated = std::chrono::system_clock::now();
    {
        std::unique_lock lock(sessions_mutex_);
        do {
            session->id = new_id();
        } while (sessions_.contains(session->id));
        sessions_.emplace(session->id, session);
    }
    std::unique_lock lock(session->mutex);
    snapshot(*session);
    return state_json(*session);
}

Json SessionService::get_session(std::string_view id) const {
    auto s = find(id);
    std::shared_lock lock(s->mutex);
    return state_json(*s);
}

Json SessionService::put_entry(std::string_view id, long long i, long long j, const Json& body) {
    auto s = find(id);
    if (!body.is_object() || !body.contains("value"))
        throw ApiError(400, "malformed", "body needs field 'value' (number, fraction string or null)");

    std::unique_lock lock(s->mutex);
    check_revision(body, s->revision, true);
    const auto n = static_cast<long long>(s->matrix.size());
    if (i < 1 || j < 1 || i > n || j > n)
        throw ApiError(400, "index", "cell (" + std::to_string(i) + "," + std::to_string(j) + ") outside 1.." +
                                         std::to_string(n));

    PCMatrix next = s->matrix;
    try {
        const Json& v = body["value"];
        Cell value;
        if (v.is_number())
            value = v.get<double>();
        else if (v.is_string())
            value = parse_token(v.get<std::string>());
        else if (!v.is_null())
            throw ApiError(400, "malformed", "field 'value' must be a number, fraction string or null");
        const auto r = static_cast<std::size_t>(i - 1), c = static_cast<std::size_t>(j - 1);
        if (value)
            next.set(r, c, *value);
        else
            next.clear(r, c);
    } catch (const Error& e) {
        Error located(e.code(), e.detail(), [&] {
            Location l = e.where();
            l.row = static_cast<std::size_t>(i);
            l.col = static_cast<std::size_t>(j);
            return l;
        }());
        throw to_api_error(located);
    }

    s->matrix = std::move(next);
    ++s->revision;
    s->updated = std::chrono::system_clock::now();
    snapshot(*s);
    return state_json(*s);
}

Json SessionService::get_report(std::string_view id) const {
    auto s = find(id);
    std::shared_lock lock(s->mutex);
    Json out = analysis_json(s->matrix);
    out["revision"] = s->revision;
    return out;
}

Json SessionService::recover(std::string_view id, const Json& body) {
    auto s = find(id);
    if (!body.is_null() && !body.is_object()) throw ApiError(400, "malformed", "request body must be a JSON object");
    Method method = Method::triad;
    bool commit = false;
    if (body.is_object()) {
        if (body.contains("method")) {
            if (!body["method"].is_string()) throw ApiError(400, "malformed", "field 'method' must be a string");
            const auto parsed = parse_method(body["method"].get<std::string>());
            if (!parsed)
                throw ApiError(400, "malformed", "unknown method '" + body["method"].get<std::string>() +
                                                     "'; expected gm, triad or transitive");
            method = *parsed;
        }
        if (body.contains("commit")) {
            if (!body["commit"].is_boolean()) throw ApiError(400, "malformed", "field 'commit' must be a boolean");
            commit = body["commit"].get<bool>();
        }
    }

    auto run = [&](const PCMatrix& m) -> RecoveryOutcome {
        try {
            return pcnull::recover(m, method);
        } catch (const Error& e) {
            ApiError api = to_api_error(e);
            if (e.code() == ErrorCode::not_recoverable) {
                const Recoverability rec = recoverability(m);
                Json details = recoverability_json(rec);
                throw ApiError(api.status(), api.code(), api.what(), Json{{"components", details["components"]}});
            }
            throw api;
        }
    };

    auto respond = [&](const Session& sess, const RecoveryOutcome& outcome, bool committed) {
        Json out;
        out["method"] = to_string(method);
        out["committed"] = committed;
        out["revision"] = sess.revision;
        const Json log = step_log_json(outcome.log);
        out["fills"] = log["steps"];
        out["residual"] = log["residual"];
        if (outcome.path_residual) out["path_residual"] = *outcome.path_residual;
        out["matrix"] = to_json(outcome.matrix);
        out["grid"] = grid_json(outcome.matrix);
        return out;
    };

    if (!commit) {
        std::shared_lock lock(s->mutex);
        return respond(*s, run(s->matrix), false);
    }

    std::unique_lock lock(s->mutex);
    check_revision(body, s->revision, false);
    RecoveryOutcome outcome = run(s->matrix);
    if (!outcome.log.steps.empty()) {
        s->matrix = outcome.matrix;
        ++s->revision;
        s->updated = std::chrono::system_clock::now();
        snapshot(*s);
    }
    return respond(*s, outcome, true);
}

Json SessionService::get_weights(std::string_view id, bool normalize) const {
    auto s = find(id);
    std::shared_lock lock(s->mutex);
    try {
        const WeightVector w = gm_weights(s->matrix, normalize ? Normalization::sum_to_one : Normalization::raw);
        Json out = weights_json(w, s->matrix);
        out["revision"] = s->revision;
        return out;
    } catch (const Error& e) {
        ApiError api = to_api_error(e);
        if (e.code() == ErrorCode::incomplete)
            throw ApiError(api.status(), api.code(), api.what(),
                           Json{{"null_pairs", s->matrix.null_pair_count()},
                                {"hint", "POST /sessions/{id}/recover"}});
        throw api;
    }
}

std::string SessionService::export_matrix(std::string_view id, Format format) const {
    auto s = find(id);
    std::shared_lock lock(s->mutex);
    return format == Format::csv ? emit_csv(s->matrix) : emit_json(s->matrix);
}

// ---------------------------------------------------------------------------

void SessionService::snapshot(const Session& s) const {
    if (!config_.snapshot_dir) return;
    nlohmann::ordered_json doc = to_json(s.matrix);
    doc["session"] = {{"id", s.id},
                      {"revision", s.revision},
                      {"strict", s.matrix.scale_mode() == ScaleMode::strict},
                      {"created_ms", epoch_ms(s.created)},
                      {"updated_ms", epoch_ms(s.updated)}};
    const auto path = *config_.snapshot_dir / (s.id + ".json");
    const auto tmp = *config_.snapshot_dir / (s.id + ".json.tmp");
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << doc.dump(2) << '\n';
        if (!out) throw ApiError(500, "persistence", "cannot write snapshot " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void SessionService::load_snapshots() {
    for (const auto& entry : std::filesystem::directory_iterator(*config_.snapshot_dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        try {
            std::ifstream in(entry.path());
            std::stringstream buf;
            buf << in.rdbuf();
            const nlohmann::json doc = nlohmann::json::parse(buf.str());
            const auto& meta = doc.at("session");
            ParseOptions options;
            if (meta.value("strict", false)) options.mode = ScaleMode::strict;
            auto session = std::make_shared<Session>(from_json(doc, options));
            session->id = meta.at("id").get<std::string>();
            session->revision = meta.at("revision").get<std::uint64_t>();
            session->created = from_epoch_ms(meta.value("created_ms", 0LL));
            session->updated = from_epoch_ms(meta.value("updated_ms", 0LL));
            sessions_.emplace(session->id, std::move(session));
        } catch (const std::exception&) {
            // unreadable snapshots are left on disk untouched
        }
    }
}

}  // namespace pcnull
