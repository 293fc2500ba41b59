#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace checkembed::cost {

enum class Scheme {
    BartScore,
    UniEval,
    SelfCheckBert,
    SelfCheckNli,
    HaloCheck,
    BertScore,
    SentenceBert,
    GEval,
    GptScore,
    CheckEmbed,
};

enum class Task { PairwiseSimilarity, OpenEndedVerification };

std::string_view to_string(Scheme s) noexcept;
std::string_view to_string(Task t) noexcept;
Scheme parse_scheme(std::string_view name);
Task parse_task(std::string_view name);
std::span<const Scheme> all_schemes() noexcept;

/// k answers, embedding dim d, s sentences of t tokens; (W, D) per inference
/// run (I) and per embedding run (M).
struct Params {
    double k = 10;
    double d = 4096;
    double s = 10;
    double t = 10;
    double W_I = 1;
    double D_I = 1;
    double W_M = 1;
    double D_M = 1;

    /// All finite and > 0; k, d, s, t >= 1; D_I <= W_I; D_M <= W_M.
    void validate() const;
};

struct Estimate {
    Scheme scheme;
    Task task;
    double depth = 0.0;
    double work = 0.0;
    /// False where only part of the cost can be stated (GPTScore).
    bool known = true;
};

/// Asymptotic formulas with every constant set to 1 and log taken base 2.
/// n/a cells raise NotApplicable; cells with no formula at all raise UnknownCost.
Estimate estimate(Scheme scheme, Task task, const Params& params);

struct ComparisonRow {
    Scheme scheme;
    double depth;
    double work;
    double ratio; // work / baseline work
};

struct Comparison {
    Task task;
    /// CheckEmbed when it is in the set, else the cheapest scheme.
    Scheme baseline;
    std::vector<ComparisonRow> rows; // ascending by work
    std::vector<Scheme> excluded;    // schemes without a known cost
};

Comparison compare(std::span<const Scheme> schemes, Task task, const Params& params);

std::string comparison_table(const Comparison& c, const Params& params);
std::string comparison_json(const Comparison& c, const Params& params);

} // namespace checkembed::cost
