#include <charconv>

#include <httplib.h>

#include "tca/calendar.hpp"
#include "tca/json_io.hpp"
#include "tca/service.hpp"

namespace tca::service {

namespace {

ApiResponse json_response(int status, const json& body) { return {status, body.dump(), "application/json"}; }

ApiResponse error_response(int status, const std::string& message) {
    return json_response(status, {{"error", message}});
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : path.substr(0, path.find('?'))) {
        if (c == '/') {
            if (!cur.empty()) parts.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(std::move(cur));
    return parts;
}

json suggestions_json(const std::vector<resolver::Suggestion>& ss) {
    json arr = json::array();
    for (const auto& s : ss)
        arr.push_back({{"fieldPath", s.field_path},
                       {"proposedValue", s.proposed_value},
                       {"rule", s.rule},
                       {"confidence", std::string(resolver::to_string(s.confidence))}});
    return arr;
}

std::optional<int> to_int(const std::string& s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

ApiResponse handle_calendar(const std::vector<std::string>& parts) {
    if (parts.size() != 3) return error_response(404, "expected /calendar/:year/:month");
    auto year = to_int(parts[1]);
    std::optional<Month> month = parse_month(parts[2]);
    if (!month)
        if (auto n = to_int(parts[2]); n && *n >= 1 && *n <= 12) month = month_from_number(*n);
    if (!year || *year < calendar::kMinYear || *year > calendar::kMaxYear || !month)
        return error_response(404, "no such month");
    return json_response(200, calendar_json(*year, *month));
}

ApiResponse handle_session(const SessionStore& store, const ApiRequest& req, const std::vector<std::string>& parts) {
    auto session = store.find(parts[1]);
    if (!session) return error_response(404, "unknown session " + parts[1]);
    Session& s = *session;

    if (parts.size() == 2 && req.method == "GET")
        return json_response(200, {{"sessionId", s.id()},
                                   {"dialogDate", calendar::to_iso(s.dialog_date())},
                                   {"cursor", s.cursor()},
                                   {"utteranceCount", s.utterance_count()}});
    if (parts.size() == 3 && parts[2] == "transcript" && req.method == "GET")
        return json_response(200, s.transcript_view());
    if (parts.size() == 3 && parts[2] == "records" && req.method == "GET") {
        json arr = json::array();
        for (const auto& r : s.records()) arr.push_back(json_io::to_json(r));
        return json_response(200, {{"records", arr}});
    }
    if (parts.size() == 3 && parts[2] == "advance" && req.method == "POST") {
        if (!s.advance()) {
            const bool done = s.cursor() >= s.utterance_count();
            return error_response(409, done ? "dialog fully annotated"
                                            : "current utterance has no record yet");
        }
        store.persist(s);
        return json_response(200, {{"cursor", s.cursor()}});
    }
    if (parts.size() == 3 && parts[2] == "export" && req.method == "GET") {
        auto result = s.export_text();
        if (auto* text = std::get_if<std::string>(&result)) return {200, *text, "text/plain"};
        return json_response(409, {{"error", "export blocked by error diagnostics"},
                                   {"diagnostics", json_io::to_json(std::get<std::vector<Diagnostic>>(result))}});
    }
    if (parts.size() == 4 && parts[2] == "record") {
        auto label = try_parse_label(parts[3]);
        if (!label) return error_response(404, "malformed label " + parts[3]);
        if (req.method == "GET") {
            auto r = s.record(*label);
            if (!r) return error_response(404, "no record " + parts[3]);
            return json_response(200, json_io::to_json(*r));
        }
        if (req.method == "PUT") {
            json body;
            try {
                body = json::parse(req.body);
            } catch (const json::parse_error& e) {
                return json_response(422, {{"error", "body is not JSON"}, {"diagnostics", json::array()}});
            }
            auto parsed = json_io::record_from_json(body, *label);
            if (!parsed.record)
                return json_response(422, {{"error", "malformed record"},
                                           {"diagnostics", json_io::to_json(parsed.diagnostics)}});
            const TemporalRecord stored = *parsed.record;
            auto outcome = s.put_record(std::move(*parsed.record));
            switch (outcome.status) {
                case PutStatus::unknown_label: return error_response(404, "no utterance for label " + parts[3]);
                case PutStatus::look_ahead:
                    return error_response(409, "utterance " + parts[3] + " is beyond the cursor");
                case PutStatus::read_only:
                    return error_response(409, "utterance " + parts[3] + " was already advanced past");
                case PutStatus::stored: break;
            }
            store.persist(s);
            auto diags = parsed.diagnostics;  // parse-time warnings
            diags.insert(diags.end(), outcome.diagnostics.begin(), outcome.diagnostics.end());
            return json_response(200, {{"record", json_io::to_json(stored)},
                                       {"diagnostics", json_io::to_json(diags)},
                                       {"suggestions", suggestions_json(outcome.suggestions)}});
        }
    }
    return error_response(404, "no such endpoint");
}

}  // namespace

json calendar_json(int year, Month month) {
    json weeks = json::array();
    for (const auto& w : calendar::month_weeks(year, month)) {
        json row = json::array();
        for (int d : w) row.push_back(d ? json(d) : json(nullptr));
        weeks.push_back(row);
    }
    return {{"year", year},
            {"month", std::string(to_token(month))},
            {"weekdays", {"sunday", "monday", "tuesday", "wednesday", "thursday", "friday", "saturday"}},
            {"weeks", weeks},
            {"lines", calendar::month_grid(year, month)}};
}

ApiResponse Api::handle(const ApiRequest& req) const {
    const auto parts = split_path(req.path);
    try {
        if (parts.empty()) return error_response(404, "no such endpoint");
        if (parts[0] == "calendar" && req.method == "GET") return handle_calendar(parts);
        if (parts[0] == "session" && parts.size() == 1 && req.method == "POST") {
            json body;
            try {
                body = json::parse(req.body);
            } catch (const json::parse_error&) {
                return error_response(422, "body is not JSON");
            }
            DialogTranscript t;
            try {
                t = transcript_from_json(body);
            } catch (const std::invalid_argument& e) {
                return error_response(422, e.what());
            }
            auto s = store_.create(std::move(t));
            return json_response(201, {{"sessionId", s->id()}, {"cursor", s->cursor()}});
        }
        if (parts[0] == "session" && parts.size() >= 2) return handle_session(store_, req, parts);
        if (parts[0] == "health" && parts.size() == 1) return json_response(200, {{"status", "ok"}});
    } catch (const std::exception& e) {
        return error_response(500, e.what());
    }
    return error_response(404, "no such endpoint");
}

struct HttpServer::Impl {
    explicit Impl(const Api& a) : api(a) {}
    const Api& api;
    httplib::Server server;
};

HttpServer::HttpServer(const Api& api) : impl_(std::make_unique<Impl>(api)) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        const ApiResponse r = impl_->api.handle({req.method, req.path, req.body});
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    impl_->server.Get(".*", forward);
    impl_->server.Put(".*", forward);
    impl_->server.Post(".*", forward);
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace tca::service
