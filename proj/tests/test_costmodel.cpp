#include "doctest.h"

#include "checkembed/costmodel.hpp"
#include "checkembed/error.hpp"
#include "support.hpp"

#include "json.hpp"

using namespace checkembed;
using namespace checkembed::cost;
using testsupport::code_of;

namespace {

double work(Scheme s, Task t, const Params& p) { return estimate(s, t, p).work; }

constexpr Task kSim = Task::PairwiseSimilarity;
constexpr Task kVer = Task::OpenEndedVerification;

} // namespace

TEST_CASE("checkembed verification work at k=10, d=3072") {
    Params p;
    p.k = 10;
    p.d = 3072;
    CHECK(work(Scheme::CheckEmbed, kVer, p) == 307220.0);
}

TEST_CASE("single-embedding similarity cell") {
    Params p;
    p.k = 1;
    p.d = 768;
    p.W_M = 42;
    CHECK(work(Scheme::CheckEmbed, kSim, p) == 42.0 + 768.0);
}

TEST_CASE("n/a and unknown cells") {
    const Params p;
    CHECK(code_of([&] { estimate(Scheme::BertScore, kVer, p); }) == ErrorCode::NotApplicable);
    CHECK(code_of([&] { estimate(Scheme::SentenceBert, kVer, p); }) == ErrorCode::NotApplicable);
    CHECK(code_of([&] { estimate(Scheme::UniEval, kSim, p); }) == ErrorCode::NotApplicable);
    CHECK(code_of([&] { estimate(Scheme::GEval, kSim, p); }) == ErrorCode::NotApplicable);
    CHECK(code_of([&] { estimate(Scheme::GptScore, kSim, p); }) == ErrorCode::UnknownCost);
    CHECK_FALSE(estimate(Scheme::GptScore, kVer, p).known);
    CHECK(estimate(Scheme::CheckEmbed, kVer, p).known);
}

TEST_CASE("documented formulas") {
    Params p;
    p.k = 3;
    p.d = 256;
    p.s = 4;
    p.t = 5;
    p.W_I = 7;
    p.W_M = 11;
    CHECK(work(Scheme::SelfCheckBert, kVer, p) == 2 * 3 * 4 * (11 + 25 * 8 + 25));
    CHECK(work(Scheme::HaloCheck, kVer, p) == 9 * (16 * 7 + 16 + 1));
    CHECK(work(Scheme::CheckEmbed, kVer, p) == 3 * (11 + 7) + 9 * 256);
    CHECK(work(Scheme::CheckEmbed, kSim, p) == 3 * 11 + 256);
}

TEST_CASE("compare") {
    Params p;
    p.s = p.t = 10;
    p.k = 10;
    p.d = 4096;
    p.W_M = p.W_I = 1e6;
    const std::vector<Scheme> two{Scheme::SelfCheckBert, Scheme::CheckEmbed};
    const auto c = compare(two, kVer, p);
    CHECK(c.baseline == Scheme::CheckEmbed);
    REQUIRE(c.rows.size() == 2);
    CHECK(c.rows[0].scheme == Scheme::CheckEmbed);
    CHECK(c.rows[0].ratio == 1.0);
    CHECK(c.rows[1].scheme == Scheme::SelfCheckBert);
    CHECK(c.rows[1].ratio > 1.0);

    for (Scheme s : all_schemes()) {
        if (s == Scheme::GptScore) continue;
        const std::vector<Scheme> one{s};
        for (Task t : {kSim, kVer}) {
            if (code_of([&] { estimate(s, t, p); })) continue;
            const auto single = compare(one, t, p);
            REQUIRE(single.rows.size() == 1);
            CHECK(single.rows[0].ratio == 1.0);
        }
    }

    const std::vector<Scheme> with_unknown{Scheme::GptScore, Scheme::CheckEmbed, Scheme::HaloCheck};
    const auto u = compare(with_unknown, kVer, p);
    CHECK(u.excluded == std::vector<Scheme>{Scheme::GptScore});
    CHECK(u.rows.size() == 2);
    for (std::size_t i = 1; i < u.rows.size(); ++i) CHECK(u.rows[i - 1].work <= u.rows[i].work);

    const std::vector<Scheme> na{Scheme::BertScore, Scheme::CheckEmbed};
    CHECK(code_of([&] { compare(na, kVer, p); }) == ErrorCode::NotApplicable);

    const auto j = nlohmann::json::parse(comparison_json(c, p));
    CHECK(j["baseline"] == "checkembed");
    CHECK(j["rows"].size() == 2);
    CHECK(comparison_table(c, p).find("constants = 1, log base 2") != std::string::npos);
}

TEST_CASE("raising W_I adds k times the increase to checkembed verification work") {
    Params p;
    p.k = 7;
    p.W_I = 5;
    const double before = work(Scheme::CheckEmbed, kVer, p);
    p.W_I *= 2;
    CHECK(work(Scheme::CheckEmbed, kVer, p) - before == p.k * 5);
}

TEST_CASE("partial differences") {
    testsupport::Rng rng(71);
    for (int it = 0; it < 200; ++it) {
        Params p;
        p.k = static_cast<double>(rng.index(1, 50));
        p.d = static_cast<double>(rng.index(1, 8192));
        p.s = static_cast<double>(rng.index(1, 40));
        p.t = static_cast<double>(rng.index(1, 40));
        p.W_M = static_cast<double>(rng.index(1, 1000));

        // checkembed similarity does not see s or t
        Params q = p;
        q.s += static_cast<double>(rng.index(1, 10));
        q.t += static_cast<double>(rng.index(1, 10));
        CHECK(work(Scheme::CheckEmbed, kSim, q) == work(Scheme::CheckEmbed, kSim, p));

        // selfcheck_bert verification is linear in k*s
        Params unit = p;
        unit.k = unit.s = 1;
        const double per_ks = work(Scheme::SelfCheckBert, kVer, unit);
        CHECK(work(Scheme::SelfCheckBert, kVer, p) == doctest::Approx(p.k * p.s * per_ks).epsilon(1e-12));

        // second difference in k
        Params k1 = p, k2 = p;
        k1.k = p.k + 1;
        k2.k = p.k + 2;
        const double second = work(Scheme::CheckEmbed, kVer, k2) - 2 * work(Scheme::CheckEmbed, kVer, k1) +
                              work(Scheme::CheckEmbed, kVer, p);
        CHECK(second == 2 * p.d);
    }
}

TEST_CASE("depth never exceeds work") {
    testsupport::Rng rng(72);
    for (int it = 0; it < 500; ++it) {
        Params p;
        p.k = rng.uniform(1, 100);
        p.d = rng.uniform(1, 10000);
        p.s = rng.uniform(1, 100);
        p.t = rng.uniform(1, 100);
        p.W_I = rng.uniform(1e-3, 1e6);
        p.D_I = rng.uniform(0, 1) * p.W_I;
        p.W_M = rng.uniform(1e-3, 1e6);
        p.D_M = rng.uniform(0, 1) * p.W_M;
        if (p.D_I <= 0 || p.D_M <= 0) continue;
        for (Scheme s : all_schemes()) {
            for (Task t : {kSim, kVer}) {
                try {
                    const auto e = estimate(s, t, p);
                    CAPTURE(to_string(s));
                    CHECK(e.depth <= e.work);
                } catch (const Error& e) {
                    CHECK((e.code() == ErrorCode::NotApplicable || e.code() == ErrorCode::UnknownCost));
                }
            }
        }
    }
}

TEST_CASE("invalid params") {
    for (auto mutate : std::vector<void (*)(Params&)>{
             [](Params& p) { p.k = 0; },
             [](Params& p) { p.d = -1; },
             [](Params& p) { p.W_I = std::nan(""); },
             [](Params& p) { p.s = 0.5; },
             [](Params& p) { p.D_M = 2; },
         }) {
        Params p;
        mutate(p);
        CHECK(code_of([&] { estimate(Scheme::CheckEmbed, kVer, p); }) == ErrorCode::InvalidParams);
    }
    CHECK(parse_task("similarity") == kSim);
    CHECK(code_of([] { parse_scheme("halo"); }) == ErrorCode::InvalidInput);
    for (Scheme s : all_schemes()) CHECK(parse_scheme(to_string(s)) == s);
}
