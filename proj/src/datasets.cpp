#include "checkembed/error.hpp"
#include "checkembed/eval.hpp"

#include "json.hpp"

#include <fstream>

namespace checkembed::eval {

namespace {

using nlohmann::json;

/// Calls fn(parsed, where) for every nonblank line.
template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open dataset " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        try {
            fn(json::parse(line), where);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError, where + ": " + e.what());
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ParseError) throw Error(ErrorCode::ParseError, where + ": " + e.detail());
            throw e.with_context(where);
        }
    }
}

std::vector<std::string> string_array(const json& j, const char* field) {
    if (!j.contains(field)) return {};
    return j.at(field).get<std::vector<std::string>>();
}

} // namespace

std::vector<LabeledPassage> load_passages(const std::filesystem::path& path) {
    std::vector<LabeledPassage> out;
    for_each_line(path, [&](const json& j, const std::string&) {
        LabeledPassage p;
        p.id = j.at("id").get<std::string>();
        p.sentences = j.at("sentences").get<std::vector<std::string>>();
        for (const auto& l : j.at("labels")) p.labels.push_back(parse_label(l.get<std::string>()));
        p.samples = string_array(j, "samples");
        p.validate();
        out.push_back(std::move(p));
    });
    return out;
}

std::vector<BinaryRecord> load_binary_records(const std::filesystem::path& path) {
    std::vector<BinaryRecord> out;
    for_each_line(path, [&](const json& j, const std::string&) {
        BinaryRecord r;
        r.id = j.at("id").get<std::string>();
        r.response = j.at("response").get<std::string>();
        r.label = parse_binary(j.at("label").get<std::string>());
        r.samples = string_array(j, "samples");
        if (j.contains("prompt")) r.prompt = j.at("prompt").get<std::string>();
        out.push_back(std::move(r));
    });
    return out;
}

std::string passages_to_jsonl(std::span<const LabeledPassage> dataset) {
    std::string out;
    for (const auto& p : dataset) {
        nlohmann::ordered_json j;
        j["id"] = p.id;
        j["sentences"] = p.sentences;
        auto& labels = j["labels"] = nlohmann::ordered_json::array();
        for (Label l : p.labels) labels.push_back(to_string(l));
        j["samples"] = p.samples;
        out += j.dump() + "\n";
    }
    return out;
}

std::string binary_records_to_jsonl(std::span<const BinaryRecord> dataset) {
    std::string out;
    for (const auto& r : dataset) {
        nlohmann::ordered_json j;
        j["id"] = r.id;
        j["response"] = r.response;
        j["label"] = to_string(r.label);
        j["samples"] = r.samples;
        if (r.prompt) j["prompt"] = *r.prompt;
        out += j.dump() + "\n";
    }
    return out;
}

} // namespace checkembed::eval
