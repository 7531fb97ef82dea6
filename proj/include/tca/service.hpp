#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "tca/format.hpp"
#include "tca/resolver.hpp"

namespace tca::service {

using nlohmann::json;

struct Utterance {
    RecordLabel label;
    std::string speaker;
    std::string text;
};

/// {"dialogDate": "1993-05-11", "utterances": [{"label": "1", "speaker": "S1", "text": "..."}]}
struct DialogTranscript {
    DialogDate dialog_date;
    std::vector<Utterance> utterances;
};

/// Throws std::invalid_argument describing the first problem found.
DialogTranscript transcript_from_json(const json& j);
json to_json(const DialogTranscript& t);
DialogTranscript load_transcript(const std::filesystem::path& path);

struct SessionOptions {
    /// Lets annotators edit records of utterances already advanced past.
    bool allow_revisit = false;
    resolver::TimeOfDayTable tod_table = resolver::TimeOfDayTable::defaults();
};

enum class PutStatus { stored, unknown_label, look_ahead, read_only };

struct PutOutcome {
    PutStatus status = PutStatus::stored;
    std::vector<Diagnostic> diagnostics;
    std::vector<resolver::Suggestion> suggestions;
};

/// One annotator working through one dialog. The cursor is the index of the
/// first utterance without a confirmed record; utterances past cursor+1 are
/// never revealed. Mutations are serialized; reads see a consistent snapshot.
class Session {
public:
    Session(std::string id, DialogTranscript transcript, SessionOptions options = {});

    const std::string& id() const { return id_; }
    const DialogDate& dialog_date() const { return transcript_.dialog_date; }
    std::size_t utterance_count() const { return transcript_.utterances.size(); }
    std::size_t cursor() const;

    json transcript_view() const;
    std::optional<TemporalRecord> record(const RecordLabel& label) const;
    std::vector<TemporalRecord> records() const;
    /// Records in label order as an annotation file.
    AnnotationFile snapshot() const;

    PutOutcome put_record(TemporalRecord record);
    /// False when the current utterance has no record or the dialog is done.
    bool advance();

    /// Canonical .tca text, or the blocking E-diagnostics.
    std::variant<std::string, std::vector<Diagnostic>> export_text() const;

    const DialogTranscript& transcript() const { return transcript_; }
    /// Reinstates persisted state; used when loading from disk.
    void restore(std::vector<TemporalRecord> records, std::size_t cursor);

private:
    std::optional<std::size_t> utterance_index(const RecordLabel& label) const;

    const std::string id_;
    const DialogTranscript transcript_;
    const SessionOptions options_;
    mutable std::shared_mutex mu_;
    std::size_t cursor_ = 0;
    std::vector<TemporalRecord> records_;  // label order
};

/// Sessions by id, optionally persisted as one directory per session holding
/// transcript.json, records.tca and state.json.
class SessionStore {
public:
    explicit SessionStore(std::optional<std::filesystem::path> root = std::nullopt, SessionOptions options = {});

    std::shared_ptr<Session> create(DialogTranscript transcript);
    std::shared_ptr<Session> find(const std::string& id) const;
    void persist(const Session& s) const;
    /// Loads every session directory under the root; returns how many.
    std::size_t load_all();

private:
    std::optional<std::filesystem::path> root_;
    SessionOptions options_;
    mutable std::shared_mutex mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
};

struct ApiRequest {
    std::string method;
    std::string path;
    std::string body;
};

struct ApiResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// Transport-independent request router behind the HTTP server.
///
///   POST /session                      create from a transcript body
///   GET  /session/:id                  summary
///   GET  /session/:id/transcript       utterances; those past cursor+1 masked
///   GET  /session/:id/records          stored records
///   GET  /session/:id/record/:label
///   PUT  /session/:id/record/:label    validate + resolve + store
///   POST /session/:id/advance
///   GET  /session/:id/export           .tca text; 409 while E-diagnostics exist
///   GET  /calendar/:year/:month        month grid
class Api {
public:
    explicit Api(SessionStore& store) : store_(store) {}
    ApiResponse handle(const ApiRequest& req) const;

private:
    SessionStore& store_;
};

json calendar_json(int year, Month month);

/// HTTP transport for an Api.
class HttpServer {
public:
    explicit HttpServer(const Api& api);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Port 0 picks a free port. Returns the bound port, or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after a successful bind().
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace tca::service
