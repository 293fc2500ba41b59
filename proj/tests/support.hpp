#pragma once

// Generators and brute-force reference implementations shared by the unit
// tests and the acceptance runner. The oracles deliberately avoid the library
// code paths they check: long double two-pass sums, O(n^2) ranking, explicit
// similarity tables.

#include "checkembed/baselines.hpp"
#include "checkembed/error.hpp"
#include "checkembed/eval.hpp"
#include "checkembed/vectors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <unistd.h>

namespace testsupport {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }
    /// Uniform in [lo, hi].
    std::size_t index(std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1)); }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
    }
    bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

    std::vector<double> vector(std::size_t dim, double lo = -1.0, double hi = 1.0) {
        std::vector<double> v(dim);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }
    /// Values from a small integer set, so ties are common.
    std::vector<double> tied_vector(std::size_t dim, int levels) {
        std::vector<double> v(dim);
        for (auto& x : v) x = static_cast<double>(index(0, static_cast<std::size_t>(levels - 1)));
        return v;
    }
    template <typename T>
    void shuffle(std::vector<T>& xs) {
        for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[index(0, i - 1)]);
    }

private:
    std::mt19937_64 engine_;
};

/// Code of the checkembed::Error `fn` raises; nullopt when it does not throw.
template <typename Fn>
std::optional<checkembed::ErrorCode> code_of(Fn&& fn) {
    try {
        fn();
    } catch (const checkembed::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline bool is_constant(std::span<const double> xs) {
    return std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); });
}

inline double oracle_cosine(std::span<const double> a, std::span<const double> b) {
    long double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<long double>(a[i]) * b[i];
        na += static_cast<long double>(a[i]) * a[i];
        nb += static_cast<long double>(b[i]) * b[i];
    }
    return static_cast<double>(dot / std::sqrt(na * nb));
}

inline double oracle_pearson(std::span<const double> a, std::span<const double> b) {
    const long double n = static_cast<long double>(a.size());
    long double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    long double cov = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    return static_cast<double>(cov / std::sqrt(va * vb));
}

/// rank(x_i) = 1 + #{x_j < x_i} + (#{x_j == x_i} - 1) / 2
inline std::vector<double> oracle_ranks(std::span<const double> xs) {
    std::vector<double> r(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::size_t less = 0, equal = 0;
        for (double y : xs) {
            less += y < xs[i];
            equal += y == xs[i];
        }
        r[i] = 1.0 + static_cast<double>(less) + (static_cast<double>(equal) - 1.0) / 2.0;
    }
    return r;
}

inline double oracle_spearman(std::span<const double> a, std::span<const double> b) {
    const auto ra = oracle_ranks(a);
    const auto rb = oracle_ranks(b);
    return oracle_pearson(ra, rb);
}

/// Random token sequence of `len` tokens, each with a random vector.
inline checkembed::baselines::TokenEmbeddingSeq random_seq(Rng& rng, std::size_t len, std::size_t dim,
                                                            bool with_idf) {
    checkembed::baselines::TokenEmbeddingSeq seq;
    for (std::size_t i = 0; i < len; ++i) {
        seq.tokens.push_back("t" + std::to_string(rng.index(0, 999)));
        seq.vectors.emplace_back(rng.vector(dim));
    }
    if (with_idf) {
        std::vector<double> w(len);
        for (auto& x : w) x = rng.uniform(0.0, 3.0);
        w[rng.index(0, len - 1)] = rng.uniform(0.5, 3.0); // never all zero
        seq.idf = w;
    }
    return seq;
}

/// Exhaustive BERTScore: fill the whole similarity table, then take every
/// row and column maximum by scanning.
inline checkembed::baselines::BertScore oracle_bertscore(const checkembed::baselines::TokenEmbeddingSeq& c,
                                                         const checkembed::baselines::TokenEmbeddingSeq& r) {
    const std::size_t nc = c.vectors.size(), nr = r.vectors.size();
    std::vector<std::vector<double>> sim(nc, std::vector<double>(nr));
    for (std::size_t i = 0; i < nc; ++i)
        for (std::size_t j = 0; j < nr; ++j) sim[i][j] = checkembed::cosine(c.vectors[i], r.vectors[j]);

    const auto weighted = [](const std::vector<double>& best, const std::optional<std::vector<double>>& idf) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < best.size(); ++i) {
            const double w = idf ? (*idf)[i] : 1.0;
            num += w * best[i];
            den += w;
        }
        return num / den;
    };
    std::vector<double> row_max(nc), col_max(nr);
    for (std::size_t i = 0; i < nc; ++i) {
        row_max[i] = sim[i][0];
        for (std::size_t j = 1; j < nr; ++j) row_max[i] = std::max(row_max[i], sim[i][j]);
    }
    for (std::size_t j = 0; j < nr; ++j) {
        col_max[j] = sim[0][j];
        for (std::size_t i = 1; i < nc; ++i) col_max[j] = std::max(col_max[j], sim[i][j]);
    }
    checkembed::baselines::BertScore out;
    out.precision = weighted(row_max, c.idf);
    out.recall = weighted(col_max, r.idf);
    const double p = out.precision, q = out.recall;
    out.f1 = ((p > 0 && q > 0) || (p < 0 && q < 0)) ? 2 * p * q / (p + q) : 0.0;
    return out;
}

/// Double loop over (sentence, sample) with every f1 computed explicitly.
inline std::vector<double> oracle_selfcheck_bert(
    std::span<const checkembed::baselines::TokenEmbeddingSeq> sentences,
    std::span<const std::vector<checkembed::baselines::TokenEmbeddingSeq>> samples) {
    std::vector<double> out;
    for (const auto& s : sentences) {
        double total = 0.0;
        for (const auto& doc : samples) {
            std::vector<double> f1s;
            for (const auto& other : doc) f1s.push_back(oracle_bertscore(s, other).f1);
            total += *std::max_element(f1s.begin(), f1s.end());
        }
        out.push_back(total / static_cast<double>(samples.size()));
    }
    return out;
}

struct Confusion {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

inline checkembed::eval::PrF1 oracle_prf(std::span<const double> scores,
                                         std::span<const checkembed::eval::Binary> labels, double threshold,
                                         checkembed::eval::Polarity polarity) {
    Confusion c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool flagged = polarity == checkembed::eval::Polarity::LowScoreFlags ? scores[i] < threshold
                                                                                   : scores[i] > threshold;
        const bool positive = labels[i] == checkembed::eval::Binary::Hallucinated;
        if (flagged) {
            positive ? ++c.tp : ++c.fp;
        } else {
            positive ? ++c.fn : ++c.tn;
        }
    }
    checkembed::eval::PrF1 m;
    m.precision = c.tp + c.fp ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
    m.recall = c.tp + c.fn ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    return m;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("checkembed-test-" + name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testsupport
