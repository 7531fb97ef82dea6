#include "tca/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tca/agreement.hpp"
#include "tca/json_io.hpp"
#include "tca/resolver.hpp"
#include "tca/service.hpp"
#include "tca/validator.hpp"

namespace tca::cli {

namespace {

struct Failure {
    std::string message;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{"cannot read " + path};
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Failure{"cannot write " + path};
    f << text;
}

bool is_syntax_failure(const std::vector<Diagnostic>& ds) {
    for (const auto& d : ds)
        if (d.code == codes::syntax || d.code == codes::missing_header || d.code == codes::bad_date) return true;
    return false;
}

void print_diagnostics(const std::vector<Diagnostic>& ds, std::ostream& os) {
    for (const auto& d : ds) os << format_diagnostic(d) << "\n";
}

AnnotationFile load_file(const std::string& path, std::ostream& err) {
    auto parsed = parse_annotation_file(read_text(path));
    if (!parsed.ok()) {
        print_diagnostics(parsed.diagnostics, err);
        throw Failure{path + ": cannot parse annotation file"};
    }
    return std::move(*parsed.file);
}

int cmd_validate(const std::string& path, bool as_json, std::ostream& out) {
    const auto ds = validator::validate_text(read_text(path));
    if (as_json)
        out << json_io::to_json(ds).dump(2) << "\n";
    else
        print_diagnostics(ds, out);
    if (is_syntax_failure(ds)) return kExitFailure;
    return has_errors(ds) ? kExitDiagnostics : kExitOk;
}

int cmd_resolve(const std::string& path, bool apply, const std::string& output, const std::string& tod_path,
                bool as_json, std::ostream& out, std::ostream& err) {
    AnnotationFile file = load_file(path, err);
    const auto table = tod_path.empty() ? resolver::TimeOfDayTable::defaults() : resolver::TimeOfDayTable::load(tod_path);

    // With --apply-forced and no output file the completed file owns stdout.
    std::ostream& report = apply && (output.empty() || output == "-") ? err : out;
    AnnotationFile completed{file.dialog_date, {}};
    std::vector<Diagnostic> conflicts;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : file.records) {
        resolver::DialogContext ctx{file.dialog_date, completed.records};
        auto res = resolver::resolve_record(r, ctx, table);
        for (const auto& s : res.suggestions) {
            if (as_json)
                rows.push_back({{"label", format_label(r.label)},
                                {"fieldPath", s.field_path},
                                {"proposedValue", s.proposed_value},
                                {"rule", s.rule},
                                {"confidence", std::string(resolver::to_string(s.confidence))}});
            else
                report << format_label(r.label) << " " << s.field_path << " " << s.proposed_value << " " << s.rule
                       << " " << resolver::to_string(s.confidence) << "\n";
        }
        conflicts.insert(conflicts.end(), res.conflicts.begin(), res.conflicts.end());
        completed.records.push_back(res.completed);
    }
    if (as_json) report << rows.dump(2) << "\n";
    print_diagnostics(conflicts, err);
    if (apply) write_text(output, serialize_annotation_file(completed), out);
    return has_errors(conflicts) ? kExitDiagnostics : kExitOk;
}

int cmd_compare(const std::string& a_path, const std::string& b_path, bool gold, bool as_json, std::ostream& out,
                std::ostream& err) {
    const AnnotationFile a = load_file(a_path, err);
    const AnnotationFile b = load_file(b_path, err);
    try {
        if (gold) {
            const auto score = agreement::score_against_gold(a, b);
            out << (as_json ? agreement::to_json(score).dump(2) + "\n" : agreement::format_score(score));
        } else {
            const auto report = agreement::compare_files(a, b);
            out << (as_json ? agreement::to_json(report).dump(2) + "\n" : agreement::format_report(report));
        }
    } catch (const agreement::DateMismatch& e) {
        throw Failure{e.what()};
    }
    return kExitOk;
}

int cmd_template(const std::string& dialog_path, const std::string& output, std::ostream& out) {
    service::DialogTranscript t;
    try {
        t = service::load_transcript(dialog_path);
    } catch (const std::exception& e) {
        throw Failure{e.what()};
    }
    std::vector<RecordLabel> labels;
    for (const auto& u : t.utterances) labels.push_back(u.label);
    write_text(output, serialize_annotation_file(make_template(t.dialog_date, labels)), out);
    return kExitOk;
}

int cmd_serve(const std::string& dialog_path, std::optional<int> port_opt, const std::string& host,
              const std::string& session_dir, bool allow_revisit, const std::string& tod_path, std::ostream& out) {
    service::SessionOptions options;
    options.allow_revisit = allow_revisit;
    if (!tod_path.empty()) options.tod_table = resolver::TimeOfDayTable::load(tod_path);

    int port = kDefaultPort;
    if (port_opt) {
        port = *port_opt;
    } else if (const char* env = std::getenv(kPortEnv); env && *env) {
        try {
            port = std::stoi(env);
        } catch (const std::exception&) {
            throw Failure{std::string(kPortEnv) + " is not a port number"};
        }
    }

    service::SessionStore store(session_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(session_dir),
                                options);
    store.load_all();
    service::DialogTranscript t;
    try {
        t = service::load_transcript(dialog_path);
    } catch (const std::exception& e) {
        throw Failure{e.what()};
    }
    auto session = store.create(std::move(t));

    service::Api api(store);
    service::HttpServer server(api);
    const int bound = server.bind(host, port);
    if (bound < 0) throw Failure{"cannot bind " + host + ":" + std::to_string(port)};
    out << "session " << session->id() << "\n"
        << "listening on http://" << host << ":" << bound << "/session/" << session->id() << "/transcript\n"
        << std::flush;
    server.listen();
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Temporal coding annotation toolkit for scheduling dialogs", "tca"};
    app.require_subcommand(1);

    std::string file, other, output, tod_path, host = "127.0.0.1", session_dir = "tca-sessions";
    bool as_json = false, apply = false, gold = false, allow_revisit = false;
    std::optional<int> port;

    auto* validate = app.add_subcommand("validate", "Check a .tca file; exit 0 iff no E-codes");
    validate->add_option("file", file, "annotation file")->required();
    validate->add_flag("--json", as_json, "emit diagnostics as a JSON array");

    auto* resolve = app.add_subcommand("resolve", "Print completion suggestions for every record");
    resolve->add_option("file", file, "annotation file")->required();
    resolve->add_flag("--apply-forced", apply, "write the file with forced suggestions applied");
    resolve->add_option("-o,--output", output, "where --apply-forced writes (default stdout)");
    resolve->add_option("--tod-table", tod_path, "hour to time-of-day table");
    resolve->add_flag("--json", as_json, "emit suggestions as JSON");

    auto* compare = app.add_subcommand("compare", "Agreement between two annotations of one dialog");
    compare->add_option("a", file, "first annotation")->required();
    compare->add_option("b", other, "second annotation (gold with --gold)")->required();
    compare->add_flag("--gold", gold, "score the first file against the second as gold");
    compare->add_flag("--json", as_json, "emit the report as JSON");

    auto* tmpl = app.add_subcommand("template", "Emit an all-null .tca skeleton for a dialog");
    tmpl->add_option("dialog", file, "transcript JSON")->required();
    tmpl->add_option("-o,--output", output, "output path (default stdout)");

    auto* serve = app.add_subcommand("serve", "Start the annotation HTTP API");
    serve->add_option("dialog", file, "transcript JSON")->required();
    serve->add_option("--port", port, std::string("port (default $") + kPortEnv + " or " +
                                          std::to_string(kDefaultPort) + ")");
    serve->add_option("--host", host, "bind address");
    serve->add_option("--session-dir", session_dir, "session storage directory");
    serve->add_flag("--allow-revisit", allow_revisit, "allow editing records of earlier utterances");
    serve->add_option("--tod-table", tod_path, "hour to time-of-day table");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return kExitFailure;
    }

    try {
        if (*validate) return cmd_validate(file, as_json, out);
        if (*resolve) return cmd_resolve(file, apply, output, tod_path, as_json, out, err);
        if (*compare) return cmd_compare(file, other, gold, as_json, out, err);
        if (*tmpl) return cmd_template(file, output, out);
        if (*serve) return cmd_serve(file, port, host, session_dir, allow_revisit, tod_path, out);
    } catch (const Failure& f) {
        err << "tca: " << f.message << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "tca: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}

}  // namespace tca::cli
