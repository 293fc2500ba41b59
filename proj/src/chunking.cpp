#include "checkembed/error.hpp"
#include "checkembed/pipeline.hpp"

#include <sstream>

namespace checkembed {

namespace {

bool ends_sentence(const std::string& token) {
    std::size_t end = token.size();
    // closing quotes/brackets after the terminator still end the sentence
    while (end > 0 && (token[end - 1] == '"' || token[end - 1] == '\'' || token[end - 1] == ')' ||
                       token[end - 1] == ']')) {
        --end;
    }
    if (end == 0) return false;
    const char c = token[end - 1];
    return c == '.' || c == '!' || c == '?';
}

std::string join(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (i > begin) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

} // namespace

std::vector<std::string> chunk_document(std::string_view document, std::size_t max_tokens,
                                        std::size_t overlap_tokens) {
    if (max_tokens < 25) throw Error(ErrorCode::InvalidInput, "max_tokens must be >= 25");
    if (overlap_tokens >= max_tokens) {
        throw Error(ErrorCode::InvalidInput, "overlap_tokens must be < max_tokens");
    }

    std::vector<std::string> tokens;
    std::istringstream in{std::string(document)};
    for (std::string t; in >> t;) tokens.push_back(std::move(t));
    if (tokens.empty()) throw Error(ErrorCode::EmptyDocument, "document has no tokens");

    std::vector<std::string> chunks;
    std::size_t start = 0;
    const std::size_t n = tokens.size();
    while (true) {
        const std::size_t window_end = std::min(start + max_tokens, n);
        std::size_t end = window_end;
        if (window_end < n) {
            // Last sentence boundary that still leaves progress past the overlap.
            for (std::size_t cut = window_end; cut > start + overlap_tokens; --cut) {
                if (ends_sentence(tokens[cut - 1])) {
                    end = cut;
                    break;
                }
            }
        }
        chunks.push_back(join(tokens, start, end));
        if (end == n) break;
        start = end - overlap_tokens;
    }
    return chunks;
}

} // namespace checkembed
