#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "fixtures.hpp"
#include "tca/cli.hpp"
#include "tca/format.hpp"

using namespace tca;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fwrite(content.data(), 1, content.size(), f);
    std::fclose(f);
    return path.string();
}

}  // namespace

TEST_CASE("validate") {
    auto r = run({"validate", test::fixture_path("golden.tca")});
    CHECK(r.code == 0);
    CHECK(r.out.empty());

    r = run({"validate", test::fixture_path("mutant_wday.tca")});
    CHECK(r.code == 1);
    CHECK(r.out.rfind("E-WDAY 21 start.weekday ", 0) == 0);

    r = run({"validate", "--json", test::fixture_path("mutant_wday.tca")});
    CHECK(r.code == 1);
    CHECK(r.out.find("\"code\": \"E-WDAY\"") != std::string::npos);

    const auto broken = temp_file("tca-broken.tca", "/* ;; Dialog Date: 5 March 1993 */ [[1, [null]");
    CHECK(run({"validate", broken}).code == 2);
    CHECK(run({"validate", "/nonexistent/file.tca"}).code == 2);

    // Warnings alone still exit 0.
    std::string text = test::read_fixture("golden.tca");
    const std::string end6 = "[friday], [march], [12], [null], [null]]";
    text.replace(text.find(end6), end6.size(), "[null], [null], [null], [null], [null]]");
    r = run({"validate", temp_file("tca-warn.tca", text)});
    CHECK(r.code == 0);
    CHECK(r.out.find("W-END-COMPLETE 6 end.weekday") != std::string::npos);
}

TEST_CASE("resolve") {
    auto r = run({"resolve", test::fixture_path("golden.tca")});
    CHECK(r.code == 0);

    const auto gold = *parse_annotation_file(test::read_fixture("background.tca")).file;
    auto partial = gold;
    partial.records[7].start.weekday = {};
    partial.records[7].end = {};
    const auto path = temp_file("tca-partial.tca", serialize_annotation_file(partial));
    r = run({"resolve", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("8 start.weekday wednesday weekday-from-date forced\n") != std::string::npos);
    CHECK(r.out.find("8 end.date 12 end-completion forced\n") != std::string::npos);

    r = run({"resolve", "--apply-forced", path});
    CHECK(r.code == 0);
    CHECK(r.err.find("weekday-from-date") != std::string::npos);
    CHECK(*parse_annotation_file(r.out).file == gold);

    const auto out_path = (std::filesystem::temp_directory_path() / "tca-applied.tca").string();
    r = run({"resolve", "--apply-forced", "-o", out_path, "--json", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"rule\": \"end-completion\"") != std::string::npos);
    CHECK(run({"validate", out_path}).code == 0);
}

TEST_CASE("compare") {
    auto r = run({"compare", test::fixture_path("golden.tca"), test::fixture_path("golden.tca")});
    CHECK(r.code == 0);
    CHECK(r.out.find("perRecordExact 1.0000") != std::string::npos);

    r = run({"compare", "--gold", test::fixture_path("golden.tca"), test::fixture_path("golden.tca")});
    CHECK(r.code == 0);
    CHECK(r.out.find("precision 1.0000") != std::string::npos);

    r = run({"compare", "--json", test::fixture_path("golden.tca"), test::fixture_path("mutant_wday.tca")});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"alignedCount\": 41") != std::string::npos);

    r = run({"compare", test::fixture_path("golden.tca"), test::fixture_path("background.tca")});
    CHECK(r.code == 2);
    CHECK(r.err.find("dialog dates differ") != std::string::npos);
}

TEST_CASE("template") {
    auto r = run({"template", test::fixture_path("golden_dialog.json")});
    REQUIRE(r.code == 0);
    const auto f = parse_annotation_file(r.out);
    REQUIRE(f.ok());
    CHECK(f.file->records.size() == 41);
    for (const auto& rec : f.file->records) CHECK((rec.start.is_all_null() && rec.end.is_all_null()));
    CHECK(run({"template", "/nonexistent.json"}).code == 2);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"validate"}).code == 2);
    const auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("validate") != std::string::npos);
    CHECK(run({"serve", test::fixture_path("background_dialog.json"), "--port", "notaport"}).code == 2);
}
