#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "iwasawa/cli.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace iwasawa;
using namespace iwasawa::cli;
using testing::num;

namespace {

const std::string kMinimal = R"({"p": 5, "series": [[0, 1, "1"], [1, 1, "1"]], "directions": ["1:0", "1:1"]})";

std::string data_file(const std::string& name) { return std::string(IWASAWA_DATA_DIR) + "/" + name; }

std::pair<int, std::string> run(Command cmd, const ParsedInput& in) {
    std::ostringstream out;
    const int rc = run_command(cmd, in, out);
    return {rc, out.str()};
}

}  // namespace

TEST_CASE("minimal file parses to Y(1+X)") {
    const ParsedInput in = parse_input_text(kMinimal);
    PowerSeries2 want(5, in.config.policy);
    want.set({0, 1}, num(5, 1));
    want.set({1, 1}, num(5, 1));
    CHECK(in.L.series.equals_to_precision(want));
    CHECK(in.L.series.terms().size() == 2);
    CHECK(in.config.directions.size() == 2);
    CHECK(in.config.height.kind == HeightValue::Kind::DeriveFromL);
}

TEST_CASE("validation errors name the field") {
    CHECK_THROWS_WITH(parse_input_text(R"({"p": 4, "series": []})"), doctest::Contains("p must be prime"));
    CHECK_THROWS_WITH(parse_input_text(R"({"p": 5, "series": [], "directions": ["1:1", "0:0"]})"),
                      doctest::Contains("direction"));
    CHECK_THROWS_WITH(parse_input_text(R"({"p": 5, "series": [], "directions": ["0:0"]})"),
                      doctest::Contains("0:0"));
    CHECK_THROWS_WITH(parse_input_text(R"({"p": 5, "series": [[0, 1, "1:x"]]})"),
                      doctest::Contains("series"));
    CHECK_THROWS_WITH(parse_input_text(R"({"p": 5, "series": [], "colour": 1})"),
                      doctest::Contains("colour"));
    CHECK_THROWS_WITH(parse_input_text(R"({"p": 5, "coeff_prec": 0, "series": []})"),
                      doctest::Contains("coeff_prec"));
    CHECK_THROWS_AS(parse_input_text("{not json"), DomainError);
}

TEST_CASE("coefficient strings") {
    CHECK(parse_coefficient(5, "0", 20).is_exact_zero());
    CHECK(parse_coefficient(5, "-1", 20).equals_to_precision(num(5, -1)));
    CHECK(parse_coefficient(5, "2:31", 20).equals_to_precision(num(5, 200, 20)));
    CHECK(parse_coefficient(5, "20:", 20).equals_to_precision(PadicNumber::zero_to(5, 20)));
    CHECK(parse_coefficient(13, "0:12,1", 5).equals_to_precision(PadicNumber::from_integer(13, 25, 2)));
    CHECK_THROWS_AS(parse_coefficient(5, "1:7", 20), DomainError);
    CHECK_THROWS_AS(parse_coefficient(5, "1:02", 20), DomainError);
    CHECK_THROWS_AS(parse_coefficient(5, "abc", 20), DomainError);
    std::mt19937_64 rng(107);
    for (int it = 0; it < 100; ++it) {
        const long p = it % 2 ? 5 : 13;
        const PadicNumber x = testing::random_integer_padic(rng, p, 12);
        if (x.is_exact_zero()) continue;
        CHECK(parse_coefficient(p, format_coefficient(x), 40).equals_to_precision(x));
        CHECK(format_coefficient(parse_coefficient(p, format_coefficient(x), 40)) == format_coefficient(x));
    }
}

TEST_CASE("projected series survive a round trip") {
    const ParsedInput in = parse_input(data_file("y_one_plus_x.json"));
    std::mt19937_64 rng(109);
    ParsedInput rnd = in;
    rnd.L.series = testing::random_series2(rng, 5, in.config.policy, 6);
    for (const ParsedInput* src : std::vector<const ParsedInput*>{&in, &rnd}) {
        const auto [rc, text] = run(Command::Project, *src);
        CHECK(rc == 0);
        const auto doc = nlohmann::json::parse(text);
        for (std::size_t k = 0; k < src->config.directions.size(); ++k) {
            const auto& e = doc["projections"][k];
            nlohmann::json back = {{"p", 5},
                                   {"coeff_prec", e["coeff_prec"]},
                                   {"degree_bound", e["degree_bound"]},
                                   {"univariate", e["series"]}};
            const ParsedInput again = parse_input_text(back.dump());
            const PowerSeries1 want = project(src->L.series, src->config.directions[k]);
            CHECK(again.config.univariate->equals_to_precision(want));
            CHECK(again.config.univariate->terms().size() == want.terms().size());
        }
    }
}

TEST_CASE("exit codes on the example corpus") {
    CHECK(run(Command::Analyze, parse_input(data_file("y_one_plus_x.json"))).first == 0);
    CHECK(run(Command::Project, parse_input(data_file("y_one_plus_x.json"))).first == 0);
    CHECK(run(Command::Hypotheses, parse_input(data_file("y_one_plus_x.json"))).first == 0);
    CHECK(run(Command::Analyze, parse_input(data_file("starved.json"))).first == 2);
    CHECK(run(Command::Weierstrass, parse_input(data_file("weierstrass_5_plus_t.json"))).first == 0);
    CHECK(run(Command::GrowthTable, parse_input(data_file("growth_ac.json"))).first == 0);
    CHECK(run(Command::Oracle, parse_input(data_file("pseudo_null_p_x.json"))).first == 0);
    // weierstrass without a univariate series is an error, not a verdict
    CHECK_THROWS_AS(run(Command::Weierstrass, parse_input(data_file("y_one_plus_x.json"))), DomainError);
}

TEST_CASE("analyze, weierstrass and hypotheses reports") {
    const ParsedInput in = parse_input_text(
        R"({"p": 5, "series": [[0, 1, "1"], [1, 1, "1"]], "directions": ["1:0", "1:1"], "height": "derive",
            "flags": ["H_IMC_ASSUMED"], "hypotheses": {"N": 11, "D": -4}})");
    const auto [rc, text] = run(Command::Analyze, in);
    CHECK(rc == 0);
    const auto doc = nlohmann::json::parse(text);
    REQUIRE(doc["reports"].size() == 2);
    for (const auto& r : doc["reports"]) CHECK(r["predicted_c"] == 0);
    CHECK(doc["status"] == "CERTIFIED");

    const auto w = nlohmann::json::parse(run(Command::Weierstrass, parse_input(data_file("weierstrass_5_plus_t.json"))).second);
    CHECK(w["mu"] == 0);
    CHECK(w["lambda"] == 1);
    REQUIRE(w["distinguished"].size() == 2);
    CHECK(parse_coefficient(5, w["distinguished"][0][1], 40).equals_to_precision(num(5, 5)));
    CHECK(parse_coefficient(5, w["distinguished"][1][1], 40).equals_to_precision(num(5, 1)));

    const auto h = nlohmann::json::parse(run(Command::Hypotheses, in).second);
    CHECK(h["ghh_ok"] == false);
    CHECK(h["p_splits"] == true);
}

TEST_CASE("reports are byte-identical across runs") {
    for (const char* name : {"y_one_plus_x.json", "starved.json", "pseudo_null_p_x.json", "growth_ac.json"}) {
        const ParsedInput a = parse_input(data_file(name));
        const ParsedInput b = parse_input(data_file(name));
        for (Command c : {Command::Analyze, Command::Oracle, Command::GrowthTable}) {
            std::string first, second;
            try {
                first = run(c, a).second;
            } catch (const DomainError& e) {
                first = e.what();
            }
            try {
                second = run(c, b).second;
            } catch (const DomainError& e) {
                second = e.what();
            }
            CHECK(first == second);
        }
    }
}

TEST_CASE("command-line overrides win over the file") {
    Overrides ov;
    ov.precision = 7;
    ov.degree_bound = 5;
    ov.output = OutputFormat::Table;
    const ParsedInput in = parse_input(data_file("y_one_plus_x.json"), ov);
    CHECK(in.config.policy.coeff_prec == 7);
    CHECK(in.config.policy.degree_bound == 5);
    const auto [rc, text] = run(Command::Analyze, in);
    CHECK(rc == 0);
    CHECK(text.find("status CERTIFIED") != std::string::npos);
    CHECK(parse_command("growth-table") == Command::GrowthTable);
    CHECK_THROWS_AS(parse_command("plot"), DomainError);
}
