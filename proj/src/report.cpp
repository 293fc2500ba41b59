#include "checkembed/error.hpp"
#include "checkembed/pipeline.hpp"

#include "json.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <thread>

namespace checkembed {

using ojson = nlohmann::ordered_json;

std::string report_to_json(const VerificationReport& r) {
    ojson summary{
        {"frobenius_normalized", r.summary.frobenius_normalized},
        {"mean_offdiag", r.summary.mean_offdiag},
        {"std_offdiag", r.summary.std_offdiag},
        {"gt_alignment", r.summary.gt_alignment ? ojson(*r.summary.gt_alignment) : ojson(nullptr)},
        {"verdict", to_string(r.summary.verdict)},
    };

    ojson rows = ojson::array();
    for (std::size_t i = 0; i < r.matrix.order(); ++i) {
        ojson row = ojson::array();
        for (std::size_t j = 0; j < r.matrix.order(); ++j) row.push_back(r.matrix.at(i, j));
        rows.push_back(std::move(row));
    }

    ojson doc{
        {"prompt_id", r.prompt_id},
        {"k", r.k},
        {"measure", to_string(r.measure)},
        {"thresholds", {{"mean_min", r.thresholds.mean_min}, {"std_max", r.thresholds.std_max}}},
        {"summary", std::move(summary)},
        {"matrix", {{"labels", r.matrix.labels()}, {"entries", std::move(rows)}}},
        {"provenance",
         {
             {"generation_model", r.provenance.generation_model},
             {"embedding_model", r.provenance.embedding_model},
             {"temperature", r.provenance.temperature},
             {"samples_generated_at", r.provenance.samples_generated_at},
             {"embeddings_computed_at", r.provenance.embeddings_computed_at},
         }},
    };
    return doc.dump(2) + "\n";
}

VerificationReport report_from_json(std::string_view text) {
    try {
        const auto doc = ojson::parse(text);
        const auto& m = doc.at("matrix");
        const auto labels = m.at("labels").get<std::vector<std::string>>();
        const auto& rows = m.at("entries");
        const std::size_t n = rows.size();
        if (labels.size() != n) throw Error(ErrorCode::ParseError, "label count != matrix order");

        std::vector<double> entries;
        entries.reserve(n * n);
        for (const auto& row : rows) {
            if (row.size() != n) throw Error(ErrorCode::ParseError, "matrix row has wrong length");
            for (const auto& v : row) entries.push_back(v.get<double>());
        }
        const Measure measure = parse_measure(doc.at("measure").get<std::string>());
        const bool has_gt = !labels.empty() && labels.back() == kGroundTruthLabel;

        const auto& s = doc.at("summary");
        MatrixSummary summary;
        summary.frobenius_normalized = s.at("frobenius_normalized").get<double>();
        summary.mean_offdiag = s.at("mean_offdiag").get<double>();
        summary.std_offdiag = s.at("std_offdiag").get<double>();
        if (!s.at("gt_alignment").is_null()) summary.gt_alignment = s.at("gt_alignment").get<double>();
        const auto verdict = s.at("verdict").get<std::string>();
        if (verdict == "HighConfidence") {
            summary.verdict = Verdict::HighConfidence;
        } else if (verdict == "Inspect") {
            summary.verdict = Verdict::Inspect;
        } else {
            throw Error(ErrorCode::ParseError, "unknown verdict '" + verdict + "'");
        }

        const auto& p = doc.at("provenance");
        VerificationReport report{
            doc.at("prompt_id").get<std::string>(),
            doc.at("k").get<std::size_t>(),
            measure,
            {doc.at("thresholds").at("mean_min").get<double>(),
             doc.at("thresholds").at("std_max").get<double>()},
            summary,
            SimilarityMatrix(n, std::move(entries), has_gt, measure),
            {p.at("generation_model").get<std::string>(), p.at("embedding_model").get<std::string>(),
             p.at("temperature").get<double>(), p.at("samples_generated_at").get<std::string>(),
             p.at("embeddings_computed_at").get<std::string>()},
        };
        if (report.matrix.labels() != labels) {
            throw Error(ErrorCode::ParseError, "matrix labels are not 0..k-1[,GT]");
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        throw Error(ErrorCode::ParseError, "report: " + e.detail());
    }
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());

    thread_local std::mt19937_64 rng{std::random_device{}()};
    fs::path tmp = path;
    tmp += ".tmp-" + std::to_string(rng());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot rename into " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace checkembed
