#include "checkembed/error.hpp"
#include "checkembed/pipeline.hpp"

#include "json.hpp"

#include <fstream>

namespace checkembed {

std::vector<Embedding> ingest_vectors(const std::filesystem::path& path, std::string model_id) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open vector file " + path.string());

    std::vector<Embedding> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        std::vector<double> values;
        try {
            const auto parsed = nlohmann::json::parse(line);
            if (!parsed.is_array()) throw Error(ErrorCode::ParseError, where + ": expected a JSON array");
            values.reserve(parsed.size());
            for (const auto& v : parsed) {
                if (!v.is_number()) throw Error(ErrorCode::ParseError, where + ": non-numeric entry");
                values.push_back(v.get<double>());
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ParseError, where + ": " + e.what());
        }
        if (!out.empty() && values.size() != out.front().dim()) {
            throw Error(ErrorCode::RaggedDims, where + ": dim " + std::to_string(values.size()) +
                                                   " differs from " + std::to_string(out.front().dim()));
        }
        try {
            out.emplace_back(std::move(values), model_id);
        } catch (const Error& e) {
            throw Error(ErrorCode::ParseError, where + ": " + e.detail());
        }
    }
    return out;
}

void write_vectors(const std::filesystem::path& path, std::span<const Embedding> embeddings) {
    std::string content;
    for (const auto& e : embeddings) {
        content += nlohmann::json(std::vector<double>(e.values().begin(), e.values().end())).dump();
        content.push_back('\n');
    }
    atomic_write(path, content);
}

} // namespace checkembed
