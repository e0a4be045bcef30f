#include "pcnull/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pcnull/http_server.hpp"
#include "pcnull/inconsistency.hpp"
#include "pcnull/io.hpp"
#include "pcnull/recovery.hpp"
#include "pcnull/views.hpp"
#include "pcnull/weights.hpp"

namespace pcnull {

namespace {

constexpr std::size_t kHumanTriadLimit = 10;

std::string fixed4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string fixed4(const std::optional<double>& v) { return v ? fixed4(*v) : "undefined"; }

std::string cell_name(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

std::string read_input(const std::string& path, std::istream& in) {
    std::stringstream buf;
    if (path == "-") {
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot read '" + path + "'");
    buf << file.rdbuf();
    return buf.str();
}

struct Common {
    std::string input = "-";
    double scale = kDefaultScaleBound;
    bool strict = false;
    bool json = false;

    ParseOptions options() const { return {scale, strict ? ScaleMode::strict : ScaleMode::lenient}; }
};

std::string stimulus_name(const PCMatrix& m, std::size_t i) {
    return m.labels().empty() ? std::to_string(i + 1) : m.labels()[i];
}

// ---------------------------------------------------------------------------

int cmd_validate(const Common& c, std::istream& in, std::ostream& out) {
    const std::string text = read_input(c.input, in);
    Diagnostics diags;
    std::size_t n = 0;
    std::size_t null_pairs = 0;
    if (sniff_format(text) == Format::json) {
        const PCMatrix m = parse_json(text, c.options());
        diags = validate(m);
        n = m.size();
        null_pairs = m.null_pair_count();
    } else {
        const DenseGrid grid = parse_csv_grid(text, c.scale);
        diags = validate(grid);
        n = grid.n;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (!grid(i, j) && !grid(j, i)) ++null_pairs;
    }
    if (c.strict)
        for (auto& d : diags)
            if (d.kind == Violation::out_of_scale) d.severity = Severity::error;
    const bool valid = !has_errors(diags);

    if (c.json) {
        ojson doc{{"valid", valid}, {"n", n}, {"null_pairs", null_pairs}, {"diagnostics", diagnostics_json(diags)}};
        out << doc.dump(2) << '\n';
    } else {
        for (const auto& d : diags)
            out << to_string(d.severity) << ' ' << to_string(d.kind) << ' ' << cell_name(d.i, d.j) << ": "
                << d.message << '\n';
        out << (valid ? "valid" : "invalid") << ": " << n << 'x' << n << " matrix, " << null_pairs
            << " null pair(s)\n";
    }
    return valid ? kExitOk : kExitFailure;
}

int cmd_analyze(const Common& c, std::istream& in, std::ostream& out) {
    const PCMatrix m = parse_document(read_input(c.input, in), c.options());
    if (c.json) {
        ojson doc = analysis_json(m);
        doc["n"] = m.size();
        doc["null_pairs"] = m.null_pair_count();
        out << doc.dump(2) << '\n';
        return kExitOk;
    }

    const InconsistencyReport report = inconsistency_report(m);
    const Recoverability rec = recoverability(m);
    out << "matrix: " << m.size() << 'x' << m.size() << ", " << m.null_pair_count() << " null pair(s), scale [1/"
        << format_number(m.scale_bound()) << ", " << format_number(m.scale_bound()) << "]\n";
    out << "global inconsistency: " << fixed4(report.global) << '\n';
    if (report.triads.empty()) {
        out << "worst triads: none complete\n";
    } else {
        out << "worst triads:\n";
        const std::size_t shown = std::min(report.triads.size(), kHumanTriadLimit);
        for (std::size_t t = 0; t < shown; ++t) {
            const Triad& x = report.triads[t];
            out << "  (" << x.i + 1 << ',' << x.j + 1 << ',' << x.k + 1 << ")  ix " << fixed4(x.ix) << "  [a"
                << x.i + 1 << x.j + 1 << '=' << format_number(x.x) << " a" << x.i + 1 << x.k + 1 << '='
                << format_number(x.y) << " a" << x.j + 1 << x.k + 1 << '=' << format_number(x.z) << "]\n";
        }
        if (report.triads.size() > shown)
            out << "  ... " << report.triads.size() - shown << " more (use --json for the full list)\n";
    }
    const auto slots = m.null_slots();
    if (slots.empty()) {
        out << "null slots: none\n";
    } else {
        out << "null slots:\n";
        for (const auto& [i, j] : slots)
            out << "  " << cell_name(i, j) << "  " << (rec.recoverable(i, j) ? "recoverable" : "not recoverable")
                << "  " << triads_through(m, i, j).size() << " companion triad(s)\n";
    }
    out << "components: " << describe_components(rec.components)
        << (rec.fully_recoverable ? " (fully recoverable)" : " (not fully recoverable)") << '\n';
    return kExitOk;
}

int cmd_recover(const Common& c, const std::string& method_name, std::istream& in, std::ostream& out,
                std::ostream& err) {
    const auto method = parse_method(method_name);
    const PCMatrix m = parse_document(read_input(c.input, in), c.options());
    const RecoveryOutcome outcome = recover(m, *method);

    if (c.json) {
        ojson doc;
        doc["method"] = to_string(*method);
        const ojson log = step_log_json(outcome.log);
        doc["steps"] = log["steps"];
        doc["residual"] = log["residual"];
        if (outcome.path_residual) doc["path_residual"] = *outcome.path_residual;
        doc["matrix"] = to_json(outcome.matrix);
        doc["csv"] = emit_csv(outcome.matrix);
        out << doc.dump(2) << '\n';
        return kExitOk;
    }

    out << emit_csv(outcome.matrix);
    std::size_t n = 1;
    for (const auto& s : outcome.log.steps) {
        err << (s.local_ix ? "step " + std::to_string(n++) + ": " : std::string("filled ")) << cell_name(s.i, s.j)
            << " <- " << fixed4(s.value);
        if (s.local_ix) err << "  f* " << fixed4(*s.local_ix);
        err << '\n';
    }
    if (outcome.path_residual) err << "path residual (log): " << fixed4(*outcome.path_residual) << '\n';
    err << "residual global inconsistency: " << fixed4(outcome.log.residual) << '\n';
    return kExitOk;
}

int cmd_weights(const Common& c, bool normalize, std::istream& in, std::ostream& out) {
    const PCMatrix m = parse_document(read_input(c.input, in), c.options());
    const WeightVector w = gm_weights(m, normalize ? Normalization::sum_to_one : Normalization::raw);
    if (c.json) {
        out << weights_json(w, m).dump(2) << '\n';
        return kExitOk;
    }
    for (std::size_t i = 0; i < w.w.size(); ++i) out << stimulus_name(m, i) << '\t' << fixed4(w.w[i]) << '\n';
    return kExitOk;
}

int cmd_serve(int port, const std::string& bind, const std::string& snapshot_dir, std::ostream& out) {
    ServeOptions options;
    options.port = port;
    options.bind = bind;
    if (!snapshot_dir.empty()) options.service.snapshot_dir = snapshot_dir;
    HttpServer server(options);
    const int bound = server.bind();
    out << "listening on http://" << bind << ':' << bound << " (" << server.service().session_count()
        << " session(s) restored)" << std::endl;
    server.listen();
    return kExitOk;
}

int default_port() {
    if (const char* env = std::getenv("PCNULL_PORT")) {
        try {
            return std::stoi(env);
        } catch (const std::exception&) {
        }
    }
    return 8080;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pairwise comparisons with null entries: inconsistency analysis, recovery, weights"};
    app.name("pcnull");
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    std::string method_name = "triad";
    bool normalize = false;
    int port = default_port();
    std::string bind = "127.0.0.1";
    std::string snapshot_dir;

    app.add_option("--scale", common.scale, "Scale bound N; values live in [1/N, N]")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_flag("--strict", common.strict, "Reject out-of-scale values instead of warning");
    app.add_flag("--json", common.json, "Machine-readable output");

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("input", common.input, "CSV or JSON matrix file, '-' for stdin")->required();
    };
    CLI::App* validate_cmd = app.add_subcommand("validate", "Check reciprocity, diagonal, positivity and scale");
    add_input(validate_cmd);
    CLI::App* analyze_cmd = app.add_subcommand("analyze", "Global inconsistency, worst triads, null slots");
    add_input(analyze_cmd);
    CLI::App* recover_cmd = app.add_subcommand("recover", "Fill null entries; prints the completed matrix as CSV");
    add_input(recover_cmd);
    recover_cmd->add_option("--method", method_name, "gm | triad | transitive")
        ->capture_default_str()
        ->check(CLI::IsMember({"gm", "triad", "transitive"}));
    CLI::App* weights_cmd = app.add_subcommand("weights", "Geometric-mean weights of a complete matrix");
    add_input(weights_cmd);
    weights_cmd->add_flag("--normalize", normalize, "Scale weights to sum to one");
    CLI::App* serve_cmd = app.add_subcommand("serve", "Run the HTTP/JSON session service");
    serve_cmd->add_option("--port", port, "Port (env PCNULL_PORT, default 8080)")->capture_default_str();
    serve_cmd->add_option("--bind", bind, "Bind address")->capture_default_str();
    serve_cmd->add_option("--snapshot-dir", snapshot_dir, "Persist sessions as JSON documents here");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    }
    if (!(common.scale > 1.0)) {
        err << "usage error: --scale must be greater than 1\n";
        return kExitUsage;
    }

    try {
        if (*validate_cmd) return cmd_validate(common, in, out);
        if (*analyze_cmd) return cmd_analyze(common, in, out);
        if (*recover_cmd) return cmd_recover(common, method_name, in, out, err);
        if (*weights_cmd) return cmd_weights(common, normalize, in, out);
        if (*serve_cmd) return cmd_serve(port, bind, snapshot_dir, out);
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace pcnull
