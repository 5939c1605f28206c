#include "taskrisk/error.hpp"
#include "taskrisk/table.hpp"

#include <doctest.h>

#include <sstream>

using namespace taskrisk;

TEST_CASE("read_table handles BOM, blank lines, quoting and trimming") {
    std::istringstream in("\xEF\xBB\xBFsoc_code, title\n\n11-1011.00,\"Chief Executives, Other\"\n  13-2011.00 ,Accountants\n");
    const auto t = read_table(in);
    REQUIRE(t.header == std::vector<std::string>{"soc_code", "title"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].fields[1] == "Chief Executives, Other");
    CHECK(t.rows[0].line == 3);
    CHECK(t.rows[1].fields[0] == "13-2011.00");
    CHECK(t.column("title") == 1);
    CHECK_FALSE(t.column("missing").has_value());
    CHECK_THROWS_AS(t.require_column("missing"), FormatError);
}

TEST_CASE("read_table rejects ragged rows and missing header") {
    std::istringstream ragged("a,b\n1,2,3\n");
    CHECK_THROWS_AS(read_table(ragged), FormatError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_table(empty), FormatError);
}

TEST_CASE("tab format") {
    CHECK(TableFormat::parse("tab").delimiter == '\t');
    CHECK(TableFormat::parse("comma").delimiter == ',');
    CHECK_THROWS(TableFormat::parse("pipe"));
    std::istringstream in("a\tb\n1\t2\n");
    const auto t = read_table(in, TableFormat::tab());
    CHECK(t.rows.at(0).fields[1] == "2");
}

TEST_CASE("format_number round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 123456789.125, 0.0}) {
        const auto text = format_number(v);
        REQUIRE(parse_number(text).has_value());
        CHECK(*parse_number(text) == v);
    }
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(2.0) == "2");
    CHECK_FALSE(parse_number("abc").has_value());
    CHECK_FALSE(parse_number("1.5x").has_value());
    CHECK(parse_integer("2010") == 2010);
    CHECK_FALSE(parse_integer("20.5").has_value());
}

TEST_CASE("TableWriter quotes fields that need it") {
    std::ostringstream out;
    TableWriter w(out);
    w.row({"a", "b,c", "say \"hi\""});
    CHECK(out.str() == "a,\"b,c\",\"say \"\"hi\"\"\"\n");
    std::istringstream back(out.str());
    const auto fields = split_fields(trim(out.str()), ',');
    CHECK(fields == std::vector<std::string>{"a", "b,c", "say \"hi\""});
}
