#include "checkembed/error.hpp"
#include "checkembed/eval.hpp"

#include <random>

namespace checkembed::eval {

namespace {

constexpr std::size_t kVocabulary = 600;

/// Pronounceable pseudo-word for vocabulary slot `i`; distinct for distinct i.
std::string vocab_word(std::size_t i) {
    static constexpr const char* syllables[] = {"ka", "lo", "mi", "ne", "ru", "sa", "ti", "vo",
                                                 "be", "da", "fu", "go", "hi", "ja", "pe", "zu"};
    std::string w;
    // three base-16 digits, so the 600 words never collide
    for (int d = 0; d < 3; ++d) {
        w += syllables[i % 16];
        i /= 16;
    }
    return w;
}

std::size_t below(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

bool coin(std::mt19937_64& rng, double p) {
    // 53-bit uniform in [0, 1)
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

} // namespace

double synthetic_fraction(std::size_t index) noexcept { return static_cast<double>(index % 10) / 10.0; }

std::vector<LabeledPassage> synthetic_corpus(const SyntheticOptions& options) {
    if (options.records == 0 || options.replies == 0 || options.sentences != 10 ||
        options.words_per_sentence == 0) {
        throw Error(ErrorCode::InvalidInput,
                    "synthetic corpus needs records, replies, words >= 1 and exactly 10 sentences");
    }
    std::mt19937_64 rng(options.seed);
    std::size_t noise_counter = 0;

    std::vector<LabeledPassage> out;
    out.reserve(options.records);
    for (std::size_t r = 0; r < options.records; ++r) {
        const double p = synthetic_fraction(r);
        const std::size_t major = r % 10; // round(10 p)

        std::vector<std::vector<std::string>> base(options.sentences);
        for (auto& sentence : base) {
            for (std::size_t w = 0; w < options.words_per_sentence; ++w) {
                sentence.push_back(vocab_word(below(rng, kVocabulary)));
            }
        }

        LabeledPassage passage;
        passage.id = "synth-" + std::to_string(r);
        for (std::size_t s = 0; s < base.size(); ++s) {
            std::string text;
            for (const auto& w : base[s]) text += (text.empty() ? "" : " ") + w;
            passage.sentences.push_back(text + ".");
            passage.labels.push_back(s < major ? Label::MajorInaccurate : Label::Accurate);
        }

        for (std::size_t k = 0; k < options.replies; ++k) {
            std::string reply;
            for (const auto& sentence : base) {
                std::string text;
                for (const auto& w : sentence) {
                    // noise tokens are never reused, so corrupted positions never agree
                    const std::string token = coin(rng, p) ? "noise" + std::to_string(noise_counter++) : w;
                    text += (text.empty() ? "" : " ") + token;
                }
                reply += (reply.empty() ? "" : " ") + text + ".";
            }
            passage.samples.push_back(std::move(reply));
        }
        out.push_back(std::move(passage));
    }
    return out;
}

} // namespace checkembed::eval
