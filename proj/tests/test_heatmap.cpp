#include "doctest.h"

#include "checkembed/heatmap.hpp"
#include "support.hpp"

#include <regex>
#include <sstream>

using namespace checkembed;
using testsupport::code_of;

namespace {

std::vector<std::string> matches(const std::string& text, const std::regex& re) {
    std::vector<std::string> out;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it)
        out.push_back((*it)[1]);
    return out;
}

const std::regex kFill(R"re(<rect class="cell"[^>]*fill="([^"]+)")re");
const std::regex kValue(R"re(<text class="value"[^>]*>([^<]+)</text>)re");

SimilarityMatrix random_matrix(testsupport::Rng& rng, bool gt) {
    const std::size_t k = rng.index(2, 7);
    const std::size_t dim = rng.index(2, 16);
    std::vector<Embedding> es;
    for (std::size_t i = 0; i < k; ++i) es.emplace_back(rng.vector(dim), "m");
    std::optional<Embedding> g;
    if (gt) g = Embedding(rng.vector(dim), "m");
    return build_matrix(es, g, Measure::Cosine);
}

} // namespace

TEST_CASE("color scale anchors") {
    CHECK(heat_color(1.0) == Rgb{180, 4, 38});
    CHECK(heat_color(0.0) == Rgb{255, 255, 255});
    CHECK(heat_color(-1.0) == Rgb{59, 76, 192});
    CHECK(heat_color(7.0) == heat_color(1.0));
}

TEST_CASE("2x2 all-ones") {
    const SimilarityMatrix m(2, {1, 1, 1, 1}, false, Measure::Cosine);
    const auto svg = render_svg(m);
    CHECK(matches(svg, kFill) == std::vector<std::string>(4, "#b40426"));
    CHECK(matches(svg, kValue) == std::vector<std::string>(4, "1.00"));
    CHECK(svg.find("gt-rule") == std::string::npos);
}

TEST_CASE("gt row and column sit beyond the rule") {
    testsupport::Rng rng(81);
    const auto m = random_matrix(rng, true);
    const auto svg = render_svg(m);
    const std::regex rule(R"re(<line class="gt-rule" x1="(\d+)" y1="(\d+)" x2="(\d+)" y2="(\d+)")re");
    std::vector<std::smatch> lines;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), rule); it != std::sregex_iterator(); ++it)
        lines.push_back(*it);
    REQUIRE(lines.size() == 2);
    const int horizontal_y = std::stoi(lines[0][2]);
    CHECK(std::stoi(lines[0][4]) == horizontal_y);
    // the GT row's cells start at or below the horizontal rule, the others above it
    const std::regex cell_y(R"re(<rect class="cell" x="(\d+)" y="(\d+)")re");
    std::size_t index = 0;
    const std::size_t n = m.order();
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), cell_y); it != std::sregex_iterator(); ++it, ++index) {
        const int y = std::stoi((*it)[2]);
        if (index / n == n - 1) {
            CHECK(y >= horizontal_y);
        } else {
            CHECK(y < horizontal_y);
        }
    }
    CHECK(m.labels().back() == "GT");
}

TEST_CASE("csv round-trip and svg agreement") {
    testsupport::Rng rng(82);
    for (int it = 0; it < 50; ++it) {
        const auto m = random_matrix(rng, rng.coin());
        const auto csv = render_csv(m);
        CHECK(parse_csv(csv, Measure::Cosine) == m);

        // svg text equals the csv values rounded to two decimals
        std::vector<std::string> from_csv;
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            std::istringstream fields(line);
            std::string f;
            std::getline(fields, f, ',');
            while (std::getline(fields, f, ',')) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.2f", std::stod(f));
                from_csv.push_back(buf);
            }
        }
        CHECK(matches(render_svg(m), kValue) == from_csv);
    }
}

TEST_CASE("csv parse errors") {
    CHECK(code_of([] { parse_csv("", Measure::Cosine); }) == ErrorCode::ParseError);
    CHECK(code_of([] { parse_csv(",0,1\n0,1,0.5\n", Measure::Cosine); }) == ErrorCode::ParseError);
    CHECK(code_of([] { parse_csv(",0,1\n0,1,x\n1,0.5,1\n", Measure::Cosine); }) == ErrorCode::ParseError);
    CHECK(code_of([] { parse_csv(",0,1\n0,1,0.5\n1,0.4,1\n", Measure::Cosine); }) == ErrorCode::ParseError);
    CHECK(code_of([] { parse_csv(",a,b\na,1,0.5\nb,0.5,1\n", Measure::Cosine); }) == ErrorCode::ParseError);
    CHECK(parse_csv(",0,1\r\n0,1,0.5\r\n1,0.5,1\r\n", Measure::Cosine).at(0, 1) == 0.5);
}
