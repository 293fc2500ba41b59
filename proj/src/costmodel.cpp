#include "checkembed/costmodel.hpp"

#include "checkembed/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace checkembed::cost {

namespace {

constexpr std::array kSchemes{
    Scheme::BartScore, Scheme::UniEval,      Scheme::SelfCheckBert, Scheme::SelfCheckNli,
    Scheme::HaloCheck, Scheme::BertScore,    Scheme::SentenceBert,  Scheme::GEval,
    Scheme::GptScore,  Scheme::CheckEmbed,
};

[[noreturn]] void not_applicable(Scheme s, Task t) {
    throw Error(ErrorCode::NotApplicable,
                std::string(to_string(s)) + " has no " + std::string(to_string(t)) + " variant");
}

void check(bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidParams, what);
}

} // namespace

std::string_view to_string(Scheme s) noexcept {
    switch (s) {
    case Scheme::BartScore: return "bartscore";
    case Scheme::UniEval: return "unieval";
    case Scheme::SelfCheckBert: return "selfcheck_bert";
    case Scheme::SelfCheckNli: return "selfcheck_nli";
    case Scheme::HaloCheck: return "halocheck";
    case Scheme::BertScore: return "bertscore";
    case Scheme::SentenceBert: return "sentencebert";
    case Scheme::GEval: return "geval";
    case Scheme::GptScore: return "gptscore";
    case Scheme::CheckEmbed: return "checkembed";
    }
    return "unknown";
}

std::string_view to_string(Task t) noexcept {
    return t == Task::PairwiseSimilarity ? "pairwise_similarity" : "open_ended_verification";
}

Scheme parse_scheme(std::string_view name) {
    for (Scheme s : kSchemes) {
        if (to_string(s) == name) return s;
    }
    std::string valid;
    for (Scheme s : kSchemes) valid += (valid.empty() ? "" : ", ") + std::string(to_string(s));
    throw Error(ErrorCode::InvalidInput, "unknown cost scheme '" + std::string(name) + "' (valid: " + valid + ")");
}

Task parse_task(std::string_view name) {
    if (name == "pairwise_similarity" || name == "similarity") return Task::PairwiseSimilarity;
    if (name == "open_ended_verification" || name == "verification") return Task::OpenEndedVerification;
    throw Error(ErrorCode::InvalidInput, "unknown task '" + std::string(name) +
                                             "' (valid: pairwise_similarity, open_ended_verification)");
}

std::span<const Scheme> all_schemes() noexcept { return kSchemes; }

void Params::validate() const {
    for (double v : {k, d, s, t, W_I, D_I, W_M, D_M}) {
        check(std::isfinite(v) && v > 0.0, "all cost parameters must be finite and > 0");
    }
    check(k >= 1 && d >= 1 && s >= 1 && t >= 1, "k, d, s and t must be >= 1");
    check(D_I <= W_I, "D_I must not exceed W_I");
    check(D_M <= W_M, "D_M must not exceed W_M");
}

Estimate estimate(Scheme scheme, Task task, const Params& p) {
    p.validate();
    const bool sim = task == Task::PairwiseSimilarity;
    const auto lg = [](double x) { return std::log2(x); };
    const double t2 = p.t * p.t;
    Estimate e{scheme, task};

    switch (scheme) {
    case Scheme::BartScore:
        if (sim) {
            e.depth = lg(p.s * p.t);
            e.work = p.s * p.t;
        } else {
            e.depth = p.D_I + lg(p.s * p.t);
            e.work = p.W_I + p.s * p.t;
        }
        break;
    case Scheme::UniEval:
        if (sim) not_applicable(scheme, task);
        e.depth = p.D_I;
        e.work = p.W_I;
        break;
    case Scheme::SelfCheckBert:
        if (sim) {
            e.depth = p.D_M + lg(p.d * p.t * p.s);
            e.work = p.s * (2 * p.W_M + t2 * lg(p.d) + t2);
        } else {
            e.depth = p.D_M + lg(p.d * p.t * p.k * p.s);
            e.work = 2 * p.k * p.s * (p.W_M + t2 * lg(p.d) + t2);
        }
        break;
    case Scheme::SelfCheckNli:
        if (sim) {
            e.depth = p.D_I + lg(p.s);
            e.work = p.s * p.W_I + p.s;
        } else {
            e.depth = p.D_I + lg(p.k * p.s);
            e.work = p.k * p.s * p.W_I + p.k * p.s;
        }
        break;
    case Scheme::HaloCheck: {
        const double s2 = p.s * p.s;
        if (sim) {
            e.depth = p.D_I + lg(p.s);
            e.work = s2 * p.W_I + s2;
        } else {
            e.depth = p.D_I + lg(p.k * p.s);
            e.work = p.k * p.k * (s2 * p.W_I + s2 + 1);
        }
        break;
    }
    case Scheme::BertScore:
        if (!sim) not_applicable(scheme, task);
        e.depth = p.D_M + lg(p.d * p.t);
        e.work = 2 * p.W_M + t2 * lg(p.d) + t2;
        break;
    case Scheme::SentenceBert:
        if (!sim) not_applicable(scheme, task);
        e.depth = p.D_I + lg(p.d * p.t);
        e.work = 2 * p.W_I + p.t + p.d;
        break;
    case Scheme::GEval:
        if (sim) not_applicable(scheme, task);
        e.depth = p.D_I + lg(p.k);
        e.work = p.k * p.W_I + p.k;
        break;
    case Scheme::GptScore:
        if (sim) throw Error(ErrorCode::UnknownCost, "gptscore similarity cost is unknown");
        // Only the single inference run is accounted for; the rest is unknown.
        e.depth = p.D_I;
        e.work = p.W_I;
        e.known = false;
        break;
    case Scheme::CheckEmbed:
        if (sim) {
            e.depth = p.D_M + lg(p.d);
            e.work = p.k * p.W_M + p.d;
        } else {
            e.depth = p.D_I + p.D_M + lg(p.d);
            e.work = p.k * (p.W_M + p.W_I) + p.k * p.k * p.d;
        }
        break;
    }
    return e;
}

Comparison compare(std::span<const Scheme> schemes, Task task, const Params& params) {
    if (schemes.empty()) throw Error(ErrorCode::InvalidInput, "no schemes to compare");
    Comparison c{task, Scheme::CheckEmbed, {}, {}};
    std::vector<Scheme> unique(schemes.begin(), schemes.end());
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

    for (Scheme s : unique) {
        if (s == Scheme::GptScore) {
            c.excluded.push_back(s);
            continue;
        }
        const Estimate e = estimate(s, task, params);
        c.rows.push_back({s, e.depth, e.work, 0.0});
    }
    if (c.rows.empty()) throw Error(ErrorCode::UnknownCost, "no scheme in the set has a known cost");
    std::stable_sort(c.rows.begin(), c.rows.end(),
                     [](const ComparisonRow& a, const ComparisonRow& b) { return a.work < b.work; });

    const auto it = std::find_if(c.rows.begin(), c.rows.end(),
                                 [](const ComparisonRow& r) { return r.scheme == Scheme::CheckEmbed; });
    const ComparisonRow& base = it != c.rows.end() ? *it : c.rows.front();
    c.baseline = base.scheme;
    const double base_work = base.work;
    for (auto& r : c.rows) r.ratio = r.work / base_work;
    return c;
}

std::string comparison_table(const Comparison& c, const Params& p) {
    std::string out = "analytical cost model, constants = 1, log base 2; ratios are not measurements\n";
    char buf[256];
    std::snprintf(buf, sizeof buf, "task=%s k=%g d=%g s=%g t=%g W_I=%g D_I=%g W_M=%g D_M=%g\n",
                  std::string(to_string(c.task)).c_str(), p.k, p.d, p.s, p.t, p.W_I, p.D_I, p.W_M, p.D_M);
    out += buf;
    std::snprintf(buf, sizeof buf, "%-16s %16s %16s %12s\n", "scheme", "depth", "work", "ratio");
    out += buf;
    for (const auto& r : c.rows) {
        std::snprintf(buf, sizeof buf, "%-16s %16.6g %16.6g %12.4g\n", std::string(to_string(r.scheme)).c_str(),
                      r.depth, r.work, r.ratio);
        out += buf;
    }
    for (Scheme s : c.excluded) out += std::string(to_string(s)) + ": cost unknown, excluded\n";
    out += "ratio baseline: " + std::string(to_string(c.baseline)) + "\n";
    return out;
}

std::string comparison_json(const Comparison& c, const Params& p) {
    nlohmann::ordered_json j;
    j["convention"] = "constants=1, log2, analytical";
    j["task"] = to_string(c.task);
    j["params"] = {{"k", p.k},     {"d", p.d},     {"s", p.s},     {"t", p.t},
                   {"W_I", p.W_I}, {"D_I", p.D_I}, {"W_M", p.W_M}, {"D_M", p.D_M}};
    j["baseline"] = to_string(c.baseline);
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : c.rows) {
        rows.push_back({{"scheme", to_string(r.scheme)}, {"depth", r.depth}, {"work", r.work}, {"ratio", r.ratio}});
    }
    auto& excluded = j["excluded"] = nlohmann::ordered_json::array();
    for (Scheme s : c.excluded) excluded.push_back(to_string(s));
    return j.dump(2) + "\n";
}

} // namespace checkembed::cost
