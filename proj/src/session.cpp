#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "tca/calendar.hpp"
#include "tca/service.hpp"
#include "tca/validator.hpp"

namespace tca::service {

namespace fs = std::filesystem;

DialogTranscript transcript_from_json(const json& j) {
    auto bad = [](const std::string& why) { return std::invalid_argument("transcript: " + why); };
    if (!j.is_object()) throw bad("expected a JSON object");
    if (!j.contains("dialogDate") || !j["dialogDate"].is_string()) throw bad("missing \"dialogDate\"");
    auto date = calendar::parse_iso(j["dialogDate"].get<std::string>());
    if (!date) throw bad("\"dialogDate\" must be a real date in YYYY-MM-DD form");
    if (!j.contains("utterances") || !j["utterances"].is_array()) throw bad("missing \"utterances\" array");

    DialogTranscript t{*date, {}};
    for (const auto& u : j["utterances"]) {
        if (!u.is_object() || !u.contains("label") || !u.contains("text"))
            throw bad("each utterance needs \"label\" and \"text\"");
        const auto& lj = u["label"];
        const std::string label_text = lj.is_number_integer() ? std::to_string(lj.get<long>()) : lj.get<std::string>();
        auto label = try_parse_label(label_text);
        if (!label) throw bad("malformed utterance label '" + label_text + "'");
        if (!t.utterances.empty() && compare_labels(t.utterances.back().label, *label) >= 0)
            throw bad("utterance labels must be unique and ascending (at '" + label_text + "')");
        t.utterances.push_back({*label, u.value("speaker", std::string()), u["text"].get<std::string>()});
    }
    return t;
}

json to_json(const DialogTranscript& t) {
    json us = json::array();
    for (const auto& u : t.utterances)
        us.push_back({{"label", format_label(u.label)}, {"speaker", u.speaker}, {"text", u.text}});
    return {{"dialogDate", calendar::to_iso(t.dialog_date)}, {"utterances", us}};
}

DialogTranscript load_transcript(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("transcript: " + std::string(e.what()));
    }
    return transcript_from_json(j);
}

Session::Session(std::string id, DialogTranscript transcript, SessionOptions options)
    : id_(std::move(id)), transcript_(std::move(transcript)), options_(std::move(options)) {}

std::size_t Session::cursor() const {
    std::shared_lock lock(mu_);
    return cursor_;
}

std::optional<std::size_t> Session::utterance_index(const RecordLabel& label) const {
    const RecordLabel bare{label.base, std::nullopt};
    for (std::size_t i = 0; i < transcript_.utterances.size(); ++i) {
        const auto& u = transcript_.utterances[i].label;
        if (u == label || u == bare) return i;
    }
    return std::nullopt;
}

json Session::transcript_view() const {
    std::shared_lock lock(mu_);
    json us = json::array();
    for (std::size_t i = 0; i < transcript_.utterances.size(); ++i) {
        const auto& u = transcript_.utterances[i];
        json row = {{"label", format_label(u.label)}, {"index", i}};
        if (i <= cursor_) {
            row["speaker"] = u.speaker;
            row["text"] = u.text;
            row["masked"] = false;
        } else {
            row["speaker"] = nullptr;
            row["text"] = nullptr;
            row["masked"] = true;
        }
        us.push_back(std::move(row));
    }
    return {{"sessionId", id_},
            {"dialogDate", calendar::to_iso(transcript_.dialog_date)},
            {"cursor", cursor_},
            {"utterances", us}};
}

std::optional<TemporalRecord> Session::record(const RecordLabel& label) const {
    std::shared_lock lock(mu_);
    for (const auto& r : records_)
        if (r.label == label) return r;
    return std::nullopt;
}

std::vector<TemporalRecord> Session::records() const {
    std::shared_lock lock(mu_);
    return records_;
}

AnnotationFile Session::snapshot() const {
    std::shared_lock lock(mu_);
    return {transcript_.dialog_date, records_};
}

PutOutcome Session::put_record(TemporalRecord record) {
    std::unique_lock lock(mu_);
    PutOutcome out;
    const auto idx = utterance_index(record.label);
    if (!idx) {
        out.status = PutStatus::unknown_label;
        return out;
    }
    if (*idx > cursor_) {
        out.status = PutStatus::look_ahead;
        return out;
    }
    if (*idx < cursor_ && !options_.allow_revisit) {
        out.status = PutStatus::read_only;
        return out;
    }

    resolver::DialogContext ctx{transcript_.dialog_date, {}};
    for (const auto& r : records_) {
        auto i = utterance_index(r.label);
        if (i && *i < *idx) ctx.prior_records.push_back(r);
    }
    out.diagnostics = validator::validate_record(record, transcript_.dialog_date);
    out.suggestions = resolver::resolve_record(record, ctx, options_.tod_table).suggestions;

    auto pos = std::find_if(records_.begin(), records_.end(),
                            [&](const TemporalRecord& r) { return compare_labels(r.label, record.label) >= 0; });
    if (pos != records_.end() && pos->label == record.label)
        *pos = std::move(record);
    else
        records_.insert(pos, std::move(record));
    return out;
}

bool Session::advance() {
    std::unique_lock lock(mu_);
    if (cursor_ >= transcript_.utterances.size()) return false;
    const bool coded = std::any_of(records_.begin(), records_.end(), [&](const TemporalRecord& r) {
        auto i = utterance_index(r.label);
        return i && *i == cursor_;
    });
    if (!coded) return false;
    ++cursor_;
    return true;
}

std::variant<std::string, std::vector<Diagnostic>> Session::export_text() const {
    const AnnotationFile f = snapshot();
    auto ds = validator::validate_file(f);
    if (has_errors(ds)) {
        std::vector<Diagnostic> errors;
        std::copy_if(ds.begin(), ds.end(), std::back_inserter(errors), [](const Diagnostic& d) { return d.is_error(); });
        return errors;
    }
    return serialize_annotation_file(f);
}

void Session::restore(std::vector<TemporalRecord> records, std::size_t cursor) {
    std::unique_lock lock(mu_);
    std::sort(records.begin(), records.end(),
              [](const TemporalRecord& a, const TemporalRecord& b) { return compare_labels(a.label, b.label) < 0; });
    records_ = std::move(records);
    cursor_ = std::min(cursor, transcript_.utterances.size());
}

namespace {

std::string new_session_id() {
    static std::mutex mu;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(mu);
    std::ostringstream out;
    out << std::hex << rng();
    std::string id = out.str();
    return std::string(16 - std::min<std::size_t>(16, id.size()), '0') + id;
}

void write_file(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

SessionStore::SessionStore(std::optional<fs::path> root, SessionOptions options)
    : root_(std::move(root)), options_(std::move(options)) {}

std::shared_ptr<Session> SessionStore::create(DialogTranscript transcript) {
    auto s = std::make_shared<Session>(new_session_id(), std::move(transcript), options_);
    {
        std::unique_lock lock(mu_);
        sessions_[s->id()] = s;
    }
    persist(*s);
    return s;
}

std::shared_ptr<Session> SessionStore::find(const std::string& id) const {
    std::shared_lock lock(mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

void SessionStore::persist(const Session& s) const {
    if (!root_) return;
    const fs::path dir = *root_ / s.id();
    fs::create_directories(dir);
    write_file(dir / "transcript.json", to_json(s.transcript()).dump(2) + "\n");
    write_file(dir / "records.tca", serialize_annotation_file(s.snapshot()));
    write_file(dir / "state.json", json{{"sessionId", s.id()}, {"cursor", s.cursor()}}.dump(2) + "\n");
}

std::size_t SessionStore::load_all() {
    if (!root_ || !fs::is_directory(*root_)) return 0;
    std::size_t loaded = 0;
    for (const auto& entry : fs::directory_iterator(*root_)) {
        if (!entry.is_directory() || !fs::exists(entry.path() / "transcript.json")) continue;
        auto transcript = load_transcript(entry.path() / "transcript.json");
        auto parsed = parse_annotation_file(read_file(entry.path() / "records.tca"));
        if (!parsed.ok()) throw std::runtime_error("corrupt session records in " + entry.path().string());
        const json state = json::parse(read_file(entry.path() / "state.json"));
        auto s = std::make_shared<Session>(entry.path().filename().string(), std::move(transcript), options_);
        s->restore(std::move(parsed.file->records), state.value("cursor", std::size_t{0}));
        std::unique_lock lock(mu_);
        sessions_[s->id()] = std::move(s);
        ++loaded;
    }
    return loaded;
}

}  // namespace tca::service
