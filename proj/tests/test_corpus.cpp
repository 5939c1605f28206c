#include "taskrisk/corpus.hpp"
#include "taskrisk/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace taskrisk;

namespace {

AttributeCatalog small_catalog() {
    return AttributeCatalog({{"A1", AttributeCategory::Bottleneck, "one"},
                             {"A2", AttributeCategory::Routine, "two"},
                             {"A3", AttributeCategory::Hazard, "three"}});
}

}  // namespace

TEST_CASE("soc code pattern") {
    CHECK(is_soc_code("23-1011.00"));
    CHECK(is_soc_code("23-1011"));
    CHECK_FALSE(is_soc_code("231011"));
    CHECK_FALSE(is_soc_code("23-1011.0"));
    CHECK_FALSE(is_soc_code("AB-1011.00"));
    CHECK(soc_prefix("23-1011.00") == "23-1011");
}

TEST_CASE("parse_attribute_file") {
    SUBCASE("lawyer speaking importance") {
        std::istringstream in("soc_code,attribute_id,importance\n23-1011.00,2.A.1.d,70\n");
        const auto obs = parse_attribute_file(in);
        REQUIRE(obs.size() == 1);
        CHECK(obs[0].soc_code == "23-1011.00");
        CHECK(obs[0].attribute_id == "2.A.1.d");
        CHECK(obs[0].importance == 70.0);
    }
    SUBCASE("header only") {
        std::istringstream in("soc_code,attribute_id,importance\n");
        CHECK(parse_attribute_file(in).empty());
    }
    SUBCASE("importance out of range names the row") {
        std::istringstream in("soc_code,attribute_id,importance\n23-1011.00,2.A.1.d,70\n23-1011.00,2.A.1.e,105\n");
        try {
            parse_attribute_file(in);
            FAIL("expected a validation error");
        } catch (const ValidationError& e) {
            CHECK(e.line() == 3);
            CHECK(e.error_class() == ErrorClass::Validation);
        }
    }
    SUBCASE("malformed code") {
        std::istringstream in("soc_code,attribute_id,importance\nXX,2.A.1.d,70\n");
        CHECK_THROWS_AS(parse_attribute_file(in), ValidationError);
    }
    SUBCASE("tab separated") {
        std::istringstream in("soc_code\tattribute_id\timportance\n23-1011.00\t2.A.1.d\t70\n");
        CHECK(parse_attribute_file(in, TableFormat::tab()).size() == 1);
    }
}

TEST_CASE("parse_employment_file") {
    std::istringstream two("soc_code,year,employment\n11-1011,2010,100\n11-1011,2011,101\n");
    const auto s = parse_employment_file(two);
    REQUIRE(s.records.count("11-1011") == 1);
    CHECK(s.records.at("11-1011").size() == 2);
    // O*NET-style query falls back to the 6-digit BLS code.
    REQUIRE(s.find("11-1011.03") != nullptr);
    CHECK(s.find("11-1011.03")->at(2011) == 101.0);
    CHECK(s.find("99-9999") == nullptr);

    std::ostringstream nine;
    nine << "soc_code,year,employment\n";
    for (int y = 2010; y <= 2018; ++y) nine << "11-1011," << y << ",100\n";
    std::istringstream nine_in(nine.str());
    CHECK(parse_employment_file(nine_in).records.at("11-1011").size() == 9);

    std::istringstream dup("soc_code,year,employment\n11-1011,2010,100\n11-1011,2010,105\n");
    CHECK_THROWS_AS(parse_employment_file(dup), ConflictError);
    std::istringstream negative("soc_code,year,employment\n11-1011,2010,-1\n");
    CHECK_THROWS_AS(parse_employment_file(negative), ValidationError);
}

TEST_CASE("catalog") {
    const auto cat = default_catalog();
    CHECK(cat.size() == 45);
    CHECK(cat.count(AttributeCategory::Hazard) == 4);
    CHECK(cat.count(AttributeCategory::Bottleneck) + cat.count(AttributeCategory::Routine) == 41);
    CHECK(cat.count(AttributeCategory::Bottleneck) > 0);
    CHECK(cat.count(AttributeCategory::Routine) > 0);
    CHECK_THROWS_AS(AttributeCatalog({{"X", AttributeCategory::Hazard, ""}, {"X", AttributeCategory::Routine, ""}}),
                    ConflictError);

    std::istringstream in("attribute_id,category,label\nA1,bottleneck,one\nA2,hazard,two\n");
    const auto parsed = parse_catalog_file(in);
    CHECK(parsed.size() == 2);
    CHECK(parsed.entries()[1].category == AttributeCategory::Hazard);
    std::ostringstream out;
    write_catalog(out, parsed);
    std::istringstream again(out.str());
    CHECK(parse_catalog_file(again).attribute_ids() == parsed.attribute_ids());
}

TEST_CASE("build_matrix drops incomplete occupations and ignores foreign attributes") {
    std::vector<AttributeObservation> obs;
    const std::vector<std::string> codes{"15-1000.00", "11-1000.00", "13-1000.00", "17-1000.00", "19-1000.00"};
    for (std::size_t i = 0; i < codes.size(); ++i) {
        for (const char* a : {"A1", "A2", "A3"}) {
            if (codes[i] == "17-1000.00" && std::string(a) == "A2") continue;
            obs.push_back({codes[i], a, 10.0 * static_cast<double>(i) + (a[1] - '0')});
        }
        obs.push_back({codes[i], "ZZ", 1.0});
    }
    const auto built = build_matrix(obs, small_catalog());
    CHECK(built.matrix.rows() == 4);
    CHECK(built.matrix.cols() == 3);
    CHECK(built.matrix.attribute_ids == std::vector<std::string>{"A1", "A2", "A3"});
    CHECK(built.matrix.occupation_ids == std::vector<std::string>{"11-1000.00", "13-1000.00", "15-1000.00", "19-1000.00"});
    REQUIRE(built.dropped.size() == 1);
    CHECK(built.dropped[0].soc_code == "17-1000.00");
    CHECK(built.dropped[0].missing_attribute_ids == std::vector<std::string>{"A2"});
    CHECK(built.matrix.values(0, 0) == 11.0);  // 11-1000.00 is codes[1]

    std::ostringstream report;
    write_drop_report(report, built.dropped);
    CHECK(report.str().find("17-1000.00") != std::string::npos);

    obs.push_back({"11-1000.00", "A1", 50.0});
    CHECK_THROWS_AS(build_matrix(obs, small_catalog()), ConflictError);

    std::vector<AttributeObservation> none{{"11-1000.00", "A1", 1.0}};
    CHECK_THROWS_AS(build_matrix(none, small_catalog()), EmptyCorpusError);
}

TEST_CASE("standardize") {
    OccupationMatrix m;
    m.occupation_ids = {"a", "b", "c"};
    m.attribute_ids = {"x"};
    m.values = Matrix{{1.0}, {2.0}, {3.0}};
    const auto z = standardize(m);
    CHECK(z.standardized);
    CHECK(z.values(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(z.values(1, 0) == 0.0);
    CHECK(z.values(2, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(standardize(z), ParameterError);

    m.values = Matrix{{5.0}, {5.0}, {5.0}};
    CHECK_THROWS_AS(standardize(m), DegenerateColumnError);

    // 4x2 random fixture: recompute mean and sample sd directly.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    OccupationMatrix r;
    r.occupation_ids = {"a", "b", "c", "d"};
    r.attribute_ids = {"x", "y"};
    r.values.resize(4, 2);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 2; ++j) r.values(i, j) = u(rng);
    }
    const auto rz = standardize(r);
    for (int j = 0; j < 2; ++j) {
        double mean = 0, ss = 0;
        for (int i = 0; i < 4; ++i) mean += rz.values(i, j);
        mean /= 4;
        for (int i = 0; i < 4; ++i) ss += (rz.values(i, j) - mean) * (rz.values(i, j) - mean);
        CHECK(std::abs(mean) < 1e-9);
        CHECK(std::abs(std::sqrt(ss / 3) - 1.0) < 1e-9);
    }
}

TEST_CASE("matrix table round trip") {
    OccupationMatrix m;
    m.occupation_ids = {"11-1011.00", "13-1011.00"};
    m.attribute_ids = {"A1", "A2"};
    m.values = Matrix{{0.1, 1.0 / 3.0}, {-2.0, 7.25}};
    std::ostringstream out;
    write_matrix(out, m);
    std::istringstream in(out.str());
    const auto back = read_matrix(in, false);
    CHECK(back.occupation_ids == m.occupation_ids);
    CHECK(back.attribute_ids == m.attribute_ids);
    CHECK(back.values == m.values);
}
