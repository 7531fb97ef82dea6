#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "generators.hpp"
#include "tca/calendar.hpp"
#include "tca/format.hpp"
#include "tca/validator.hpp"

using namespace tca;
using namespace tca::validator;
using test::date;
using test::point;

namespace {

const DialogDate kMar5 = date(1993, 3, 5);

std::vector<std::string> codes_of(const std::vector<Diagnostic>& ds) {
    std::vector<std::string> out;
    for (const auto& d : ds) out.push_back(d.code);
    return out;
}

AnnotationFile golden() { return *parse_annotation_file(test::read_fixture("golden.tca")).file; }

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("the golden file is clean") {
    CHECK(validate_file(golden()).empty());
    CHECK(validate_text(test::read_fixture("golden.tca")).empty());
    CHECK(validate_text(test::read_fixture("background.tca")).empty());
    for (const auto& r : golden().records) CHECK(validate_record(r, kMar5).empty());
}

TEST_CASE("weekday contradiction") {
    auto r = golden().records[20];
    r.start.weekday = Weekday::thursday;
    const auto ds = validate_record(r, kMar5);
    REQUIRE(codes_of(ds) == std::vector<std::string>{"E-WDAY"});
    CHECK(ds[0].field_path == "start.weekday");
    CHECK(format_label(*ds[0].label) == "21");
    // Weekday follows the year the month resolves to: February after a March dialog is next year.
    // Feb 7 1994 is a Monday; Feb 7 1993 was a Sunday.
    const auto feb = test::record("1", point(Weekday::monday, Month::february, 7), point(Weekday::monday, Month::february, 7));
    CHECK(validate_record(feb, kMar5).empty());
}

TEST_CASE("impossible dates are vocabulary errors") {
    const auto r = test::record("1", point(std::nullopt, Month::february, 30), point(std::nullopt, Month::february, 30));
    CHECK(codes_of(validate_record(r, kMar5)) == std::vector<std::string>{"E-VOCAB", "E-VOCAB"});
    // 1996 is a leap year; a February after an August dialog resolves to 1997.
    const auto leap = test::record("1", point(std::nullopt, Month::february, 29), {});
    CHECK(codes_of(validate_record(leap, date(1996, 1, 10))) == std::vector<std::string>{"W-END-COMPLETE", "W-END-COMPLETE"});
    CHECK(codes_of(validate_record(leap, date(1996, 8, 19)))[0] == "E-VOCAB");
}

TEST_CASE("ordering") {
    const auto same = [](int sh, TimeOfDay st, int eh, TimeOfDay et) {
        return test::record("1", point(Weekday::friday, Month::march, 5, HourSpec{sh, std::nullopt}, st),
                            point(Weekday::friday, Month::march, 5, HourSpec{eh, std::nullopt}, et));
    };
    CHECK(codes_of(validate_record(same(10, TimeOfDay::morning, 8, TimeOfDay::morning), kMar5)) ==
          std::vector<std::string>{"E-ORDER"});
    CHECK(validate_record(same(8, TimeOfDay::morning, 10, TimeOfDay::morning), kMar5).empty());
    CHECK(validate_record(same(12, TimeOfDay::afternoon, 2, TimeOfDay::afternoon), kMar5).empty());
    CHECK(validate_record(same(11, TimeOfDay::morning, 1, TimeOfDay::afternoon), kMar5).empty());
    CHECK(codes_of(validate_record(same(2, TimeOfDay::afternoon, 12, TimeOfDay::afternoon), kMar5)) ==
          std::vector<std::string>{"E-ORDER"});
    // No overnight intervals.
    CHECK(codes_of(validate_record(same(11, TimeOfDay::evening, 1, TimeOfDay::morning), kMar5)) ==
          std::vector<std::string>{"E-ORDER"});
    // Meal values and all-day do not order by hour.
    CHECK(validate_record(same(3, TimeOfDay::lunch, 1, TimeOfDay::lunch), kMar5).empty());
    // Zero-length intervals are legal.
    CHECK(validate_record(same(3, TimeOfDay::afternoon, 3, TimeOfDay::afternoon), kMar5).empty());

    // Period-level comparison without hours.
    const auto periods = test::record("1", point(Weekday::friday, Month::march, 5, std::nullopt, TimeOfDay::afternoon),
                                      point(Weekday::friday, Month::march, 5, std::nullopt, TimeOfDay::morning));
    CHECK(codes_of(validate_record(periods, kMar5)) == std::vector<std::string>{"E-ORDER"});

    // Across days.
    const auto backwards = test::record("1", point(Weekday::friday, Month::march, 12), point(Weekday::monday, Month::march, 8));
    CHECK(codes_of(validate_record(backwards, kMar5)) == std::vector<std::string>{"E-ORDER"});
    const auto across = test::record("1", point(Weekday::monday, Month::march, 8, HourSpec{3, std::nullopt}, TimeOfDay::afternoon),
                                     point(Weekday::friday, Month::march, 12, HourSpec{9, std::nullopt}, TimeOfDay::morning));
    CHECK(validate_record(across, kMar5).empty());

    // Missing granularity never orders.
    const auto hour_only = test::record("1", point(std::nullopt, std::nullopt, std::nullopt, HourSpec{10, std::nullopt}, TimeOfDay::morning),
                                        point(Weekday::friday, Month::march, 5, HourSpec{8, std::nullopt}, TimeOfDay::morning));
    CHECK(std::count(codes_of(validate_record(hour_only, kMar5)).begin(), codes_of(validate_record(hour_only, kMar5)).end(),
                     "E-ORDER") == 0);
}

TEST_CASE("qualifiers") {
    auto r = test::record("1", point(Weekday::friday, Month::march, 5, std::nullopt, TimeOfDay::afternoon),
                          point(Weekday::friday, Month::march, 5));
    r.start.time_of_day.qualifiers = {Qualifier::late};
    CHECK(validate_record(r, kMar5).empty());
    r.start.time_of_day.qualifiers = {Qualifier::early, Qualifier::late};
    CHECK(codes_of(validate_record(r, kMar5)) == std::vector<std::string>{"W-QUAL-MANY"});
    r.start.time_of_day.qualifiers = {Qualifier::early, Qualifier::mid, Qualifier::late};
    CHECK(codes_of(validate_record(r, kMar5)) == std::vector<std::string>{"E-VOCAB"});
    r.start.time_of_day = {};
    r.start.time_of_day.qualifiers = {Qualifier::after};
    CHECK(codes_of(validate_record(r, kMar5)) == std::vector<std::string>{"E-QUAL-NULL"});
}

TEST_CASE("end completion warnings") {
    const auto thu = point(Weekday::thursday, Month::august, 22, HourSpec{9, std::nullopt}, TimeOfDay::morning);
    const auto dd = date(1996, 8, 19);
    const auto ds = validate_record(test::record("1", thu, {}), dd);
    CHECK(codes_of(ds) == std::vector<std::string>{"W-END-COMPLETE", "W-END-COMPLETE", "W-END-COMPLETE"});
    CHECK(ds[0].field_path == "end.weekday");
    CHECK(validate_record(test::record("1", thu, point(Weekday::thursday, Month::august, 22)), dd).empty());

    const auto allday = point(Weekday::friday, Month::march, 5, std::nullopt, TimeOfDay::all_day);
    CHECK(codes_of(validate_record(test::record("1", allday, point(Weekday::friday, Month::march, 5)), kMar5)) ==
          std::vector<std::string>{"W-END-COMPLETE"});

    // An open-ended start implies nothing about the end.
    TimePoint after = point(std::nullopt, Month::august, std::nullopt);
    after.date = QualifiedField<DayOfMonth>({Qualifier::after}, DayOfMonth{25});
    CHECK(validate_record(test::record("1", after, {}), dd).empty());
}

TEST_CASE("diagnostics are ordered by field path") {
    auto r = test::record("1", point(Weekday::monday, Month::march, 5, HourSpec{4, std::nullopt}, TimeOfDay::afternoon),
                          point(std::nullopt, std::nullopt, std::nullopt, HourSpec{2, std::nullopt}, TimeOfDay::afternoon));
    r.end.time_of_day.qualifiers = {Qualifier::early, Qualifier::late};
    const auto ds = validate_record(r, kMar5);
    std::vector<std::string> paths;
    for (const auto& d : ds) paths.push_back(d.field_path.value_or(""));
    CHECK(paths == std::vector<std::string>{"start.weekday", "end.weekday", "end.month", "end.date", "end.timeOfDay"});
}

TEST_CASE("labels and conjunct families") {
    auto f = golden();
    f.records[7].label = parse_label("7");
    CHECK(codes_of(validate_file(f)) == std::vector<std::string>{"E-LABEL"});

    f = golden();
    std::swap(f.records[3], f.records[4]);
    CHECK(codes_of(validate_file(f)) == std::vector<std::string>{"E-LABEL"});

    f = golden();
    f.records[11].label = parse_label("12_alt1");
    CHECK(codes_of(validate_file(f)) == std::vector<std::string>{"W-ALT-BASE"});

    f = golden();
    f.records[11].label = parse_label("12_alt1");
    f.records.insert(f.records.begin() + 12, TemporalRecord{parse_label("12_alt2"), {}, {}});
    CHECK(validate_file(f).empty());

    f.records[12].label = parse_label("12_alt3");
    CHECK(codes_of(validate_file(f)) == std::vector<std::string>{"W-ALT-BASE"});
}

TEST_CASE("parse-stage codes surface through validate_text") {
    const std::string golden = test::read_fixture("golden.tca");
    CHECK(codes_of(validate_text(replace_once(golden, "[6, [monday], [march]", "[6, [monday], [marzo]"))) ==
          std::vector<std::string>{"E-VOCAB"});
    CHECK(codes_of(validate_text(replace_once(golden, "[7, [null], [null], [null], [null], [null], ",
                                              "[7, [null], [null], [null], [null], "))) ==
          std::vector<std::string>{"E-ARITY"});
    CHECK(codes_of(validate_text(replace_once(golden, "[null], [after, lunch]", "[null], [after, null]"))) ==
          std::vector<std::string>{"E-QUAL-NULL"});
    CHECK(codes_of(validate_text(replace_once(golden, "['11:10'], [null], \n", "['11am'], [null], \n"))) ==
          std::vector<std::string>{"W-HOUR-AMPM"});
}

TEST_CASE("minute of day") {
    CHECK(minute_of_day({12, 0}, TimeOfDay::afternoon) == 12 * 60);
    CHECK(minute_of_day({12, std::nullopt}, TimeOfDay::morning) == 0);
    CHECK(minute_of_day({2, 30}, TimeOfDay::afternoon) == 14 * 60 + 30);
    CHECK(minute_of_day({7, std::nullopt}, TimeOfDay::evening) == 19 * 60);
    CHECK_FALSE(minute_of_day({1, std::nullopt}, TimeOfDay::lunch));
    CHECK_FALSE(minute_of_day({1, std::nullopt}, TimeOfDay::all_day));
}

TEST_CASE("validator properties on random records") {
    test::RecordGen gen(42);
    for (int trial = 0; trial < 5000; ++trial) {
        const auto dd = calendar::add_days(date(1990, 1, 1), gen.uniform(0, 3651));
        TemporalRecord r = gen.record(1);
        const auto ds = validate_record(r, dd);
        REQUIRE(ds == validate_record(r, dd));
        // Only the per-record codes appear.
        for (const auto& d : ds) {
            static const std::vector<std::string> allowed = {"E-VOCAB", "E-WDAY", "E-ORDER", "E-QUAL-NULL",
                                                             "W-QUAL-MANY", "W-END-COMPLETE"};
            REQUIRE(std::find(allowed.begin(), allowed.end(), d.code) != allowed.end());
        }
        // An end without date, hour or period information can never be out of order.
        r.end = TimePoint{};
        for (const auto& d : validate_record(r, dd)) REQUIRE(d.code != "E-ORDER");
    }
}
