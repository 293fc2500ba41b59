#include "checkembed/baselines.hpp"

#include "judge_templates.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace checkembed::baselines {

namespace {

constexpr std::array kTasks{
    JudgeTask::SimilarDescriptions, JudgeTask::LegalSummary, JudgeTask::ScientificPassage,
    JudgeTask::WikiBio,             JudgeTask::WikiBioWithReference, JudgeTask::RagTruth,
};

bool is_slot_char(char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
           c == '_';
}

/// Length of the slot name starting after the '{' at `pos`, or 0 if none.
std::size_t slot_length(std::string_view text, std::size_t pos) {
    std::size_t i = pos + 1;
    while (i < text.size() && is_slot_char(text[i])) ++i;
    if (i == pos + 1 || i >= text.size() || text[i] != '}') return 0;
    return i - pos - 1;
}

} // namespace

std::string_view to_string(JudgeTask task) noexcept {
    switch (task) {
    case JudgeTask::SimilarDescriptions: return "similar_descriptions";
    case JudgeTask::LegalSummary: return "legal_summary";
    case JudgeTask::ScientificPassage: return "scientific_passage";
    case JudgeTask::WikiBio: return "wikibio";
    case JudgeTask::WikiBioWithReference: return "wikibio_with_reference";
    case JudgeTask::RagTruth: return "ragtruth";
    }
    return "unknown";
}

JudgeTask parse_judge_task(std::string_view name) {
    for (JudgeTask t : kTasks) {
        if (to_string(t) == name) return t;
    }
    std::string valid;
    for (JudgeTask t : kTasks) {
        if (!valid.empty()) valid += ", ";
        valid += to_string(t);
    }
    throw Error(ErrorCode::InvalidInput, "unknown judge task '" + std::string(name) + "' (valid: " + valid + ")");
}

std::span<const JudgeTask> all_judge_tasks() noexcept { return kTasks; }

std::string_view judge_template(JudgeTask task) noexcept {
    switch (task) {
    case JudgeTask::SimilarDescriptions: return assets::similar_descriptions;
    case JudgeTask::LegalSummary: return assets::legal_summary;
    case JudgeTask::ScientificPassage: return assets::scientific_passage;
    case JudgeTask::WikiBio: return assets::wikibio;
    case JudgeTask::WikiBioWithReference: return assets::wikibio_with_reference;
    case JudgeTask::RagTruth: return assets::ragtruth;
    }
    return {};
}

std::vector<std::string> judge_slots(JudgeTask task) {
    const std::string_view text = judge_template(task);
    std::vector<std::string> slots;
    for (std::size_t pos = text.find('{'); pos != std::string_view::npos; pos = text.find('{', pos + 1)) {
        const std::size_t len = slot_length(text, pos);
        if (len == 0) continue;
        std::string name(text.substr(pos + 1, len));
        if (std::find(slots.begin(), slots.end(), name) == slots.end()) slots.push_back(std::move(name));
    }
    return slots;
}

std::string assemble_judge_prompt(JudgeTask task, const std::map<std::string, std::string>& slots) {
    for (const auto& name : judge_slots(task)) {
        if (!slots.count(name)) {
            throw Error(ErrorCode::InvalidInput,
                        "missing slot '" + name + "' for judge task " + std::string(to_string(task)));
        }
    }
    const std::string_view text = judge_template(task);
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const std::size_t len = text[i] == '{' ? slot_length(text, i) : 0;
        if (len == 0) {
            out.push_back(text[i++]);
            continue;
        }
        out += slots.at(std::string(text.substr(i + 1, len)));
        i += len + 2;
    }
    return out;
}

JudgeVerdict parse_judge_reply(std::string_view raw_reply) {
    const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    std::size_t b = 0;
    std::size_t e = raw_reply.size();
    while (b < e && is_space(raw_reply[b])) ++b;
    while (e > b && is_space(raw_reply[e - 1])) --e;
    const std::string_view body = raw_reply.substr(b, e - b);

    if (body.empty()) throw UnparsableVerdict(std::string(raw_reply), "empty judge reply");
    for (char c : body) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw UnparsableVerdict(std::string(raw_reply),
                                    "judge reply is not a bare integer: '" + std::string(body) + "'");
        }
    }
    if (body.size() > 3) {
        throw UnparsableVerdict(std::string(raw_reply), "judge score out of range: " + std::string(body));
    }
    const int score = std::stoi(std::string(body));
    if (score > 100) {
        throw UnparsableVerdict(std::string(raw_reply), "judge score out of range: " + std::string(body));
    }
    return {score, std::string(raw_reply)};
}

JudgeVerdict llm_judge(JudgeTask task, const std::map<std::string, std::string>& slots,
                       TextGenerator& generator, const GenerationRequest& settings) {
    GenerationRequest request = settings;
    request.prompt = assemble_judge_prompt(task, slots);
    request.k = 1;
    request.validate();
    return parse_judge_reply(generator.complete(request, 0));
}

} // namespace checkembed::baselines
