#include "doctest.h"

#include "checkembed/scorematrix.hpp"
#include "support.hpp"

#include <cmath>
#include <numeric>

using namespace checkembed;
using testsupport::code_of;
using testsupport::Rng;

namespace {

std::vector<Embedding> random_embeddings(Rng& rng, std::size_t k, std::size_t dim) {
    std::vector<Embedding> out;
    for (std::size_t i = 0; i < k; ++i) out.emplace_back(rng.vector(dim), "m");
    return out;
}

SimilarityMatrix from_offdiag(std::size_t k, double v) {
    std::vector<double> e(k * k, v);
    for (std::size_t i = 0; i < k; ++i) e[i * k + i] = 1.0;
    return SimilarityMatrix(k, e, false, Measure::Cosine);
}

} // namespace

TEST_CASE("identical replies give an all-ones matrix and high confidence") {
    std::vector<Embedding> es(3, Embedding({0.3, -0.2, 0.9}, "m"));
    const auto m = build_matrix(es, std::nullopt, Measure::Cosine);
    for (double v : m.entries()) CHECK(v == 1.0);
    const auto s = summarize(m, {});
    CHECK(s.mean_offdiag == 1.0);
    CHECK(s.std_offdiag == 0.0);
    CHECK(s.frobenius_normalized == 1.0);
    CHECK(s.verdict == Verdict::HighConfidence);
}

TEST_CASE("orthogonal replies") {
    std::vector<Embedding> es{Embedding({1, 0, 0}, "m"), Embedding({0, 1, 0}, "m"), Embedding({0, 0, 1}, "m")};
    const auto m = build_matrix(es, std::nullopt, Measure::Cosine);
    const auto s = summarize(m, {});
    CHECK(s.mean_offdiag == 0.0);
    CHECK(s.std_offdiag == 0.0);
    CHECK(s.frobenius_normalized == doctest::Approx(std::sqrt(3.0) / 3.0));
    CHECK(s.verdict == Verdict::Inspect);
}

TEST_CASE("labels and ground truth") {
    Rng rng(3);
    const auto es = random_embeddings(rng, 4, 6);
    const Embedding gt(rng.vector(6), "m");
    const auto m = build_matrix(es, gt, Measure::Cosine);
    CHECK(m.order() == 5);
    CHECK(m.reply_count() == 4);
    CHECK(m.labels() == std::vector<std::string>{"0", "1", "2", "3", "GT"});
    const auto s = summarize(m, {});
    REQUIRE(s.gt_alignment.has_value());
    double mean = 0.0;
    for (std::size_t i = 0; i < 4; ++i) mean += cosine(es[i], gt);
    CHECK(*s.gt_alignment == doctest::Approx(mean / 4));
    // the GT row does not enter the reply statistics
    CHECK(s.mean_offdiag == summarize(build_matrix(es, std::nullopt, Measure::Cosine), {}).mean_offdiag);
}

TEST_CASE("summary statistics against direct formulas") {
    std::vector<double> e{1, 0.5, 0.2, 0.5, 1, -0.4, 0.2, -0.4, 1};
    const SimilarityMatrix m(3, e, false, Measure::Cosine);
    const auto s = summarize(m, {});
    const double mean = (0.5 + 0.2 - 0.4) / 3;
    const double var = ((0.5 - mean) * (0.5 - mean) + (0.2 - mean) * (0.2 - mean) + (-0.4 - mean) * (-0.4 - mean)) / 3;
    CHECK(s.mean_offdiag == doctest::Approx(mean));
    CHECK(s.std_offdiag == doctest::Approx(std::sqrt(var)));
    const double sq = std::accumulate(e.begin(), e.end(), 0.0, [](double a, double v) { return a + v * v; });
    CHECK(s.frobenius_normalized == doctest::Approx(std::sqrt(sq) / 3));
}

TEST_CASE("verdict thresholds are strict") {
    CHECK(summarize(from_offdiag(3, 0.9), {}).verdict == Verdict::Inspect);
    CHECK(summarize(from_offdiag(3, 0.95), {}).verdict == Verdict::HighConfidence);
    CHECK(summarize(from_offdiag(3, 0.95), {0.96, 0.05}).verdict == Verdict::Inspect);
    CHECK(code_of([] { summarize(from_offdiag(3, 0.5), {1.5, 0.05}); }) == ErrorCode::InvalidInput);
    CHECK(code_of([] { summarize(from_offdiag(3, 0.5), {0.5, -1}); }) == ErrorCode::InvalidInput);
}

TEST_CASE("matrix validation") {
    CHECK(code_of([] { SimilarityMatrix(1, {1.0}, false, Measure::Cosine); }) == ErrorCode::DegenerateMatrix);
    CHECK(code_of([] { SimilarityMatrix(2, {1, 0.5, 0.4, 1}, false, Measure::Cosine); }) == ErrorCode::InvalidInput);
    CHECK(code_of([] { SimilarityMatrix(2, {0.9, 0.5, 0.5, 1}, false, Measure::Cosine); }) ==
          ErrorCode::InvalidInput);
    CHECK(code_of([] { SimilarityMatrix(2, {1, 1.5, 1.5, 1}, false, Measure::Cosine); }) == ErrorCode::InvalidInput);
}

TEST_CASE("build_matrix errors") {
    std::vector<Embedding> one{Embedding({1, 2}, "m")};
    CHECK(code_of([&] { build_matrix(one, std::nullopt, Measure::Cosine); }) == ErrorCode::DegenerateMatrix);
    std::vector<Embedding> mixed{Embedding({1, 2}, "m"), Embedding({1, 2, 3}, "m")};
    CHECK(code_of([&] { build_matrix(mixed, std::nullopt, Measure::Cosine); }) == ErrorCode::DimensionMismatch);
    std::vector<Embedding> zero{Embedding({1, 2}, "m"), Embedding({0, 0}, "m")};
    try {
        build_matrix(zero, std::nullopt, Measure::Cosine);
        FAIL("expected ZeroVector");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroVector);
        CHECK(e.detail().find("pair (0, 1)") != std::string::npos);
    }
    std::vector<Embedding> models{Embedding({1, 2}, "a"), Embedding({1, 3}, "b")};
    CHECK(code_of([&] { build_matrix(models, std::nullopt, Measure::Cosine); }) == ErrorCode::InvalidInput);
    CHECK(code_of([] { parse_measure("euclid"); }) == ErrorCode::InvalidInput);
}

TEST_CASE("random sample sets: symmetry, equivariance, invariance, thread independence") {
    Rng rng(21);
    for (int it = 0; it < 60; ++it) {
        const std::size_t k = rng.index(2, 8);
        const std::size_t dim = rng.index(2, 24);
        const Measure measure = rng.coin() ? Measure::Cosine : Measure::Pearson;
        const auto es = random_embeddings(rng, k, dim);
        std::optional<Embedding> gt;
        if (rng.coin()) gt = Embedding(rng.vector(dim), "m");

        const auto m = build_matrix(es, gt, measure);
        const std::size_t n = m.order();
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(m.at(i, i) == 1.0);
            for (std::size_t j = 0; j < n; ++j) CHECK(m.at(i, j) == m.at(j, i));
        }

        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        rng.shuffle(perm);
        std::vector<Embedding> permuted;
        for (std::size_t p : perm) permuted.push_back(es[p]);
        const auto pm = build_matrix(permuted, gt, measure);
        const auto index = [&](std::size_t i) { return i < k ? perm[i] : i; };
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) CHECK(pm.at(i, j) == m.at(index(i), index(j)));
        CHECK(summarize(pm, {}) == summarize(m, {}));

        CHECK(build_matrix(es, gt, measure, BuildOptions{4}) == m);
    }
}

TEST_CASE("frobenius is 1 exactly for all-ones and below 1 otherwise on non-negative matrices") {
    Rng rng(5);
    CHECK(summarize(from_offdiag(5, 1.0), {}).frobenius_normalized == 1.0);
    for (int it = 0; it < 50; ++it) {
        const double v = rng.uniform(0.0, 0.999);
        CHECK(summarize(from_offdiag(4, v), {}).frobenius_normalized < 1.0);
    }
}

TEST_CASE("heatmap cells round-trip") {
    Rng rng(8);
    const auto es = random_embeddings(rng, 3, 5);
    const auto m = build_matrix(es, Embedding(rng.vector(5), "m"), Measure::Cosine);
    const auto cells = heatmap_data(m);
    CHECK(cells.size() == 16);
    CHECK(cells[3].row_label == "0");
    CHECK(cells[3].col_label == "GT");
    CHECK(matrix_from_cells(cells, Measure::Cosine) == m);
}
