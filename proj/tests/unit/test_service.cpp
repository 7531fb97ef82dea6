#include <doctest.h>

#include <filesystem>
#include <thread>

#include <unistd.h>

#include <httplib.h>

#include "fixtures.hpp"
#include "tca/json_io.hpp"
#include "tca/service.hpp"
#include "tca/validator.hpp"

using namespace tca;
using namespace tca::service;
using nlohmann::json;

namespace {

DialogTranscript background() { return load_transcript(test::fixture_path("background_dialog.json")); }

AnnotationFile background_gold() { return *parse_annotation_file(test::read_fixture("background.tca")).file; }

struct Harness {
    SessionStore store;
    Api api{store};
    std::string id;

    explicit Harness(SessionOptions options = {}, std::optional<std::filesystem::path> root = std::nullopt)
        : store(std::move(root), std::move(options)) {
        id = store.create(background())->id();
    }

    ApiResponse call(const std::string& method, const std::string& path, const std::string& body = "") const {
        return api.handle({method, path, body});
    }
    ApiResponse session(const std::string& method, const std::string& rest, const std::string& body = "") const {
        return call(method, "/session/" + id + rest, body);
    }
    ApiResponse put(const TemporalRecord& r) const {
        return session("PUT", "/record/" + format_label(r.label), json_io::to_json(r).dump());
    }
};

std::vector<std::string> codes_in(const json& diags) {
    std::vector<std::string> out;
    for (const auto& d : diags) out.push_back(d["code"]);
    return out;
}

}  // namespace

TEST_CASE("transcript ingestion") {
    const auto t = background();
    CHECK(t.dialog_date == test::date(1993, 5, 11));
    REQUIRE(t.utterances.size() == 12);
    CHECK(format_label(t.utterances[10].label) == "11");

    CHECK_THROWS_AS(transcript_from_json(json::array()), std::invalid_argument);
    CHECK_THROWS_AS(transcript_from_json({{"dialogDate", "1993-02-30"}, {"utterances", json::array()}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(transcript_from_json({{"dialogDate", "1993-05-11"},
                                          {"utterances", {{{"label", 2}, {"text", "a"}}, {{"label", 1}, {"text", "b"}}}}}),
                    std::invalid_argument);
    const auto round = transcript_from_json(to_json(t));
    CHECK(round.utterances.back().text == t.utterances.back().text);
}

TEST_CASE("annotating the background dialog end to end reproduces the golden file") {
    Harness h;
    const auto gold = background_gold();
    for (std::size_t i = 0; i < gold.records.size(); ++i) {
        const auto& r = gold.records[i];
        if (i == 10) {
            // Utterance 11 gives only hours; the date is proposed from earlier records, never applied.
            auto hours = r;
            for (TimePoint* p : {&hours.start, &hours.end}) {
                p->weekday = {};
                p->month = {};
                p->date = {};
            }
            const json draft = json::parse(h.put(hours).body);
            bool carried = false;
            for (const auto& s : draft["suggestions"])
                carried |= s["rule"] == "carry-forward-date" && s["fieldPath"] == "start.date" && s["proposedValue"] == "12";
            CHECK(carried);
            CHECK(json_io::record_from_json(draft["record"]).record == hours);
        }
        const auto res = h.put(r);
        REQUIRE(res.status == 200);
        const json body = json::parse(res.body);
        CHECK(body["diagnostics"].empty());
        CHECK(json_io::record_from_json(body["record"]).record == r);

        // Storage fidelity.
        const auto got = h.session("GET", "/record/" + format_label(r.label));
        REQUIRE(got.status == 200);
        CHECK(json_io::record_from_json(json::parse(got.body)).record == r);

        const auto adv = h.session("POST", "/advance");
        REQUIRE(adv.status == 200);
        CHECK(json::parse(adv.body)["cursor"] == i + 1);
    }
    CHECK(h.session("POST", "/advance").status == 409);

    const auto exp = h.session("GET", "/export");
    REQUIRE(exp.status == 200);
    CHECK(exp.content_type == "text/plain");
    CHECK(exp.body == test::read_fixture("background.tca"));
    CHECK(*parse_annotation_file(exp.body).file == gold);
}

TEST_CASE("flagged records are stored and block export") {
    Harness h;
    auto r = test::record("1", test::point(Weekday::thursday, Month::may, 12), test::point(Weekday::thursday, Month::may, 12));
    const auto res = h.put(r);
    REQUIRE(res.status == 200);
    const json body = json::parse(res.body);
    CHECK(codes_in(body["diagnostics"]) == std::vector<std::string>{"E-WDAY", "E-WDAY"});
    CHECK(h.session("GET", "/record/1").status == 200);

    const auto exp = h.session("GET", "/export");
    CHECK(exp.status == 409);
    CHECK(codes_in(json::parse(exp.body)["diagnostics"]) == std::vector<std::string>{"E-WDAY", "E-WDAY"});

    // The current utterance may still be corrected before advancing.
    r.start.weekday = r.end.weekday = Weekday::wednesday;
    CHECK(json::parse(h.put(r).body)["diagnostics"].empty());
    CHECK(h.session("GET", "/export").status == 200);
}

TEST_CASE("cursor rules for PUT and advance") {
    Harness h;
    CHECK(h.session("POST", "/advance").status == 409);  // nothing coded yet
    CHECK(h.put(test::record("2", {}, {})).status == 409);
    CHECK(h.put(test::record("99", {}, {})).status == 404);
    REQUIRE(h.put(test::record("1", {}, {})).status == 200);
    // Conjuncts of the current utterance are accepted.
    CHECK(h.put(test::record("1_alt1", {}, {})).status == 200);
    REQUIRE(h.session("POST", "/advance").status == 200);
    CHECK(h.put(test::record("1", {}, {})).status == 409);

    Harness unlocked(SessionOptions{true, resolver::TimeOfDayTable::defaults()});
    REQUIRE(unlocked.put(test::record("1", {}, {})).status == 200);
    REQUIRE(unlocked.session("POST", "/advance").status == 200);
    CHECK(unlocked.put(test::record("1", {}, {})).status == 200);
    CHECK(unlocked.put(test::record("3", {}, {})).status == 409);
}

TEST_CASE("malformed requests") {
    Harness h;
    CHECK(h.call("GET", "/session/nope/transcript").status == 404);
    CHECK(h.session("GET", "/record/x_y").status == 404);
    CHECK(h.session("GET", "/record/1").status == 404);
    CHECK(h.session("PUT", "/record/1", "{not json").status == 422);
    CHECK(h.session("PUT", "/record/1", json{{"Label", "1"}, {"SWeekDay", {"someday"}}}.dump()).status == 422);
    CHECK(h.session("PUT", "/record/1", json{{"Label", "2"}}.dump()).status == 422);
    json marzo = json_io::to_json(test::record("1", {}, {}));
    marzo["SMonth"] = {"marzo"};
    const auto bad = h.session("PUT", "/record/1", marzo.dump());
    REQUIRE(bad.status == 422);
    CHECK(codes_in(json::parse(bad.body)["diagnostics"]) == std::vector<std::string>{"E-VOCAB"});
    CHECK(h.session("DELETE", "").status == 404);
    CHECK(h.call("GET", "/nowhere").status == 404);
    CHECK(h.call("POST", "/session", "[]").status == 422);
    CHECK(h.call("POST", "/session", "nope").status == 422);
}

TEST_CASE("sessions can be created over the API") {
    Harness h;
    const auto created = h.call("POST", "/session", to_json(background()).dump());
    REQUIRE(created.status == 201);
    const std::string id = json::parse(created.body)["sessionId"];
    CHECK(id != h.id);
    const auto summary = json::parse(h.call("GET", "/session/" + id).body);
    CHECK(summary["utteranceCount"] == 12);
    CHECK(summary["dialogDate"] == "1993-05-11");
}

TEST_CASE("calendar endpoint") {
    Harness h;
    const auto res = h.call("GET", "/calendar/1996/8");
    REQUIRE(res.status == 200);
    const json j = json::parse(res.body);
    CHECK(j["month"] == "august");
    CHECK(j["weeks"][3][1] == 19);
    CHECK(j["weeks"][0][0].is_null());
    CHECK(h.call("GET", "/calendar/1993/march").status == 200);
    CHECK(h.call("GET", "/calendar/1993/13").status == 404);
    CHECK(h.call("GET", "/calendar/3000/1").status == 404);
}

TEST_CASE("no response reveals an utterance beyond cursor+1") {
    const auto t = background();
    const auto gold = background_gold();
    Harness h;
    for (std::size_t cursor = 0; cursor <= t.utterances.size(); ++cursor) {
        std::vector<ApiResponse> seen;
        seen.push_back(h.session("GET", "/transcript"));
        seen.push_back(h.session("GET", ""));
        seen.push_back(h.session("GET", "/records"));
        seen.push_back(h.session("GET", "/export"));
        seen.push_back(h.call("GET", "/calendar/1993/5"));
        for (const auto& u : t.utterances) {
            seen.push_back(h.session("GET", "/record/" + format_label(u.label)));
            seen.push_back(h.put(TemporalRecord{parse_label(format_label(u.label) + "_alt9"), {}, {}}));
        }
        for (const auto& r : seen)
            for (std::size_t i = cursor + 1; i < t.utterances.size(); ++i) {
                INFO("cursor " << cursor << " leaked utterance " << i + 1);
                REQUIRE(r.body.find(t.utterances[i].text) == std::string::npos);
            }

        const json view = json::parse(seen[0].body);
        for (std::size_t i = 0; i < t.utterances.size(); ++i) {
            CHECK(view["utterances"][i]["masked"] == (i > cursor));
            if (i <= cursor) CHECK(view["utterances"][i]["text"] == t.utterances[i].text);
        }
        if (cursor < gold.records.size()) {
            REQUIRE(h.put(gold.records[cursor]).status == 200);
            REQUIRE(h.session("POST", "/advance").status == 200);
        }
    }
}

TEST_CASE("sessions persist and reload") {
    const auto root = std::filesystem::temp_directory_path() / ("tca-test-" + std::to_string(::getpid()));
    std::filesystem::remove_all(root);
    std::string id;
    {
        Harness h({}, root);
        id = h.id;
        const auto gold = background_gold();
        for (int i = 0; i < 9; ++i) {
            REQUIRE(h.put(gold.records[static_cast<std::size_t>(i)]).status == 200);
            REQUIRE(h.session("POST", "/advance").status == 200);
        }
        CHECK(std::filesystem::exists(root / id / "records.tca"));
        CHECK(std::filesystem::exists(root / id / "transcript.json"));
        CHECK(std::filesystem::exists(root / id / "state.json"));
    }
    SessionStore reloaded(root);
    CHECK(reloaded.load_all() == 1);
    const auto s = reloaded.find(id);
    REQUIRE(s);
    CHECK(s->cursor() == 9);
    CHECK(s->records().size() == 9);
    CHECK(s->records()[8] == background_gold().records[8]);
    std::filesystem::remove_all(root);
}

TEST_CASE("concurrent readers and a writer on one session") {
    Harness h({true, resolver::TimeOfDayTable::defaults()});
    const auto gold = background_gold();
    std::atomic<bool> done{false};
    std::atomic<int> bad{0};
    std::vector<std::thread> readers;
    for (int k = 0; k < 4; ++k)
        readers.emplace_back([&] {
            while (!done) {
                const json view = json::parse(h.session("GET", "/transcript").body);
                const std::size_t cursor = view["cursor"];
                for (std::size_t i = 0; i < view["utterances"].size(); ++i)
                    if (view["utterances"][i]["masked"] != (i > cursor)) ++bad;
                if (h.session("GET", "/records").status != 200) ++bad;
            }
        });
    for (const auto& r : gold.records) {
        if (h.put(r).status != 200) ++bad;
        if (h.session("POST", "/advance").status != 200) ++bad;
    }
    done = true;
    for (auto& t : readers) t.join();
    CHECK(bad == 0);
    CHECK(h.session("GET", "/export").body == test::read_fixture("background.tca"));
}

TEST_CASE("HTTP transport") {
    SessionStore store;
    const auto id = store.create(background())->id();
    Api api(store);
    HttpServer server(api);
    const int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread loop([&] { server.listen(); });

    httplib::Client client("127.0.0.1", port);
    auto health = client.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    auto transcript = client.Get("/session/" + id + "/transcript");
    REQUIRE(transcript);
    CHECK(json::parse(transcript->body)["utterances"].size() == 12);
    auto put = client.Put("/session/" + id + "/record/1", json_io::to_json(test::record("1", {}, {})).dump(),
                          "application/json");
    REQUIRE(put);
    CHECK(put->status == 200);
    auto adv = client.Post("/session/" + id + "/advance", "", "application/json");
    REQUIRE(adv);
    CHECK(adv->status == 200);
    auto missing = client.Get("/session/" + id + "/record/5");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    server.stop();
    loop.join();
}
