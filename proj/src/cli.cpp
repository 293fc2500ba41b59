#include "checkembed/cli.hpp"

#include "checkembed/config.hpp"
#include "checkembed/costmodel.hpp"
#include "checkembed/error.hpp"
#include "checkembed/eval.hpp"
#include "checkembed/heatmap.hpp"
#include "checkembed/pipeline.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <iostream>

namespace checkembed::cli {

namespace fs = std::filesystem;

namespace {

struct VerifyArgs {
    std::string config;
    std::string prompt;
    std::string gt;
    std::optional<std::size_t> k;
    std::string measure;
    std::string out;
};

struct EvalArgs {
    std::string config;
    std::string dataset;
    std::string scheme = "checkembed";
    std::string task = "wikibio";
    std::optional<std::size_t> k;
    std::vector<std::size_t> sweep;
    std::string out;
};

struct HeatmapArgs {
    std::string report;
    std::string out;
};

struct CostArgs {
    std::vector<std::string> schemes;
    std::string task = "open_ended_verification";
    cost::Params params;
    bool json = false;
    std::string out;
};

struct SynthArgs {
    std::string out;
    eval::SyntheticOptions options;
};

std::string require_text(const fs::path& path, const char* what) {
    std::string text = read_file(path);
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw Error(ErrorCode::InvalidInput, std::string(what) + " file is empty: " + path.string());
    }
    return text;
}

RunConfig load_with_overrides(const std::string& path, const std::optional<std::size_t>& k,
                              const std::string& measure, const std::string& out) {
    RunConfig cfg = load_config(path);
    if (k) cfg.k = *k;
    if (!measure.empty()) cfg.measure = parse_measure(measure);
    if (!out.empty()) cfg.output_dir = out;
    cfg.validate();
    return cfg;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    const RunConfig cfg = load_with_overrides(a.config, a.k, a.measure, a.out);
    const std::string prompt = require_text(a.prompt, "prompt");
    std::optional<std::string> gt;
    if (!a.gt.empty()) gt = require_text(a.gt, "ground truth");

    auto generator = make_generator(cfg.generation);
    auto embedder = make_embedder(cfg.embedding);

    VerifySettings settings;
    settings.k = cfg.k;
    settings.generation_model = cfg.generation.model;
    settings.temperature = cfg.generation.temperature;
    settings.max_tokens = cfg.generation.max_tokens;
    settings.top_p = cfg.generation.top_p;
    settings.top_k = cfg.generation.top_k;
    settings.measure = cfg.measure;
    settings.thresholds = cfg.thresholds;
    settings.max_concurrency = cfg.max_concurrency;

    const SampleCache cache(cfg.effective_cache_dir());
    const auto report = verify(prompt, gt, settings, *generator, *embedder, &cache);

    // Render everything before writing so a failure leaves no partial set.
    const std::string report_text = report_to_json(report);
    const std::string csv = render_csv(report.matrix);
    const std::string svg = render_svg(report.matrix);
    atomic_write(cfg.output_dir / "report.json", report_text);
    atomic_write(cfg.output_dir / "heatmap.csv", csv);
    atomic_write(cfg.output_dir / "heatmap.svg", svg);

    const auto& s = report.summary;
    out << "prompt_id " << report.prompt_id << "\n"
        << "k " << report.k << "  measure " << to_string(report.measure) << "\n"
        << "mean_offdiag " << s.mean_offdiag << "  std_offdiag " << s.std_offdiag
        << "  frobenius_normalized " << s.frobenius_normalized << "\n";
    if (s.gt_alignment) out << "gt_alignment " << *s.gt_alignment << "\n";
    out << "verdict " << to_string(s.verdict) << "\n"
        << "wrote " << (cfg.output_dir / "report.json").string() << "\n";
    return s.verdict == Verdict::HighConfidence ? kExitOk : kExitInspect;
}

std::string sweep_json(eval::Scheme scheme, std::span<const eval::SampleSweepRow> rows) {
    nlohmann::ordered_json j;
    j["protocol"] = "sample_sweep";
    j["scheme"] = eval::to_string(scheme);
    auto& arr = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        arr.push_back({{"k", r.k},
                       {"pearson", r.correlation.pearson},
                       {"spearman", r.correlation.spearman},
                       {"pearson_raw", r.correlation.pearson_raw},
                       {"spearman_raw", r.correlation.spearman_raw}});
    }
    return j.dump(2) + "\n";
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    const eval::Scheme scheme = eval::parse_scheme(a.scheme);
    if (a.task != "wikibio" && a.task != "ragtruth") {
        throw Error(ErrorCode::InvalidInput, "unknown eval task '" + a.task + "' (valid: wikibio, ragtruth)");
    }
    const RunConfig cfg = load_with_overrides(a.config, std::nullopt, "", a.out);

    std::unique_ptr<Embedder> embedder;
    std::unique_ptr<Embedder> token_embedder;
    std::unique_ptr<NliScorer> nli;
    std::unique_ptr<TextGenerator> judge;
    eval::Scorers scorers;
    scorers.measure = cfg.measure;
    scorers.statistic = cfg.statistic;
    scorers.threads = cfg.max_concurrency;
    switch (scheme) {
    case eval::Scheme::CheckEmbed:
        embedder = make_embedder(cfg.embedding);
        scorers.embedder = embedder.get();
        break;
    case eval::Scheme::BertScore:
    case eval::Scheme::SelfCheckBert:
        token_embedder = make_embedder(cfg.token_embedding.value_or(cfg.embedding));
        scorers.token_embedder = token_embedder.get();
        break;
    case eval::Scheme::SelfCheckNli:
        if (!cfg.nli) throw Error(ErrorCode::ConfigError, "selfcheck_nli needs an 'nli' config section");
        nli = make_nli(*cfg.nli);
        scorers.nli = nli.get();
        break;
    case eval::Scheme::LlmJudge: {
        const ProviderSection& section = cfg.judge.value_or(cfg.generation);
        judge = make_generator(section);
        scorers.judge = judge.get();
        scorers.judge_settings.model_id = section.model;
        scorers.judge_settings.temperature = section.temperature;
        scorers.judge_settings.max_tokens = section.max_tokens;
        scorers.judge_settings.top_p = section.top_p;
        scorers.judge_settings.top_k = section.top_k;
        break;
    }
    }

    std::string table;
    std::string json;
    if (a.task == "wikibio") {
        const auto dataset = eval::load_passages(a.dataset);
        if (!a.sweep.empty()) {
            const auto rows = eval::sample_sweep(dataset, a.sweep, scheme, scorers);
            table = "k     PE      SP\n";
            char buf[64];
            for (const auto& r : rows) {
                std::snprintf(buf, sizeof buf, "%-5zu %-7.1f %.1f\n", r.k, r.correlation.pearson,
                              r.correlation.spearman);
                table += buf;
            }
            json = sweep_json(scheme, rows);
        } else {
            const auto e = eval::evaluate_passages(dataset, scheme, scorers, a.k);
            table = eval::report_table(e);
            json = eval::report_json(e);
        }
    } else {
        const auto dataset = eval::load_binary_records(a.dataset);
        const auto e = eval::evaluate_binary(dataset, scheme, scorers);
        table = eval::report_table(e);
        json = eval::report_json(e);
    }
    const fs::path report_path = cfg.output_dir / ("eval-" + a.task + "-" + a.scheme + ".json");
    atomic_write(report_path, json);
    out << table << "wrote " << report_path.string() << "\n";
    return kExitOk;
}

int cmd_heatmap(const HeatmapArgs& a, std::ostream& out) {
    const auto report = report_from_json(read_file(a.report));
    fs::path svg_path = a.out;
    fs::path csv_path = svg_path;
    csv_path.replace_extension(".csv");
    const std::string svg = render_svg(report.matrix);
    const std::string csv = render_csv(report.matrix);
    atomic_write(svg_path, svg);
    atomic_write(csv_path, csv);
    out << "wrote " << svg_path.string() << " and " << csv_path.string() << "\n";
    return kExitOk;
}

int cmd_cost(const CostArgs& a, std::ostream& out) {
    const cost::Task task = cost::parse_task(a.task);
    a.params.validate();
    std::vector<cost::Scheme> schemes;
    if (a.schemes.empty()) {
        // every scheme with a defined cell for this task
        for (cost::Scheme s : cost::all_schemes()) {
            try {
                cost::estimate(s, task, a.params);
                schemes.push_back(s);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NotApplicable && e.code() != ErrorCode::UnknownCost) throw;
            }
        }
    } else {
        for (const auto& name : a.schemes) schemes.push_back(cost::parse_scheme(name));
    }
    const auto c = cost::compare(schemes, task, a.params);
    const std::string json = cost::comparison_json(c, a.params);
    if (!a.out.empty()) atomic_write(a.out, json);
    out << (a.json ? json : cost::comparison_table(c, a.params));
    return kExitOk;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
    const auto corpus = eval::synthetic_corpus(a.options);
    atomic_write(a.out, eval::passages_to_jsonl(corpus));
    out << "wrote " << corpus.size() << " records to " << a.out << "\n";
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stability-based verification of LLM replies via embedding similarity"};
    app.name("checkembed");
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Debug logging to stderr");

    VerifyArgs va;
    auto* verify_cmd = app.add_subcommand("verify", "Sample k replies, embed, score and write the report");
    verify_cmd->add_option("--config", va.config, "Run config (JSON)")->required();
    verify_cmd->add_option("--prompt", va.prompt, "File holding the prompt")->required();
    verify_cmd->add_option("--gt", va.gt, "File holding a ground-truth answer");
    verify_cmd->add_option("--k", va.k, "Number of replies (overrides config)");
    verify_cmd->add_option("--measure", va.measure, "cosine | pearson (overrides config)");
    verify_cmd->add_option("--out", va.out, "Output directory (overrides config)");

    EvalArgs ea;
    auto* eval_cmd = app.add_subcommand("eval", "Score a labelled dataset with one scheme");
    eval_cmd->add_option("--config", ea.config, "Run config (JSON)")->required();
    eval_cmd->add_option("--dataset", ea.dataset, "JSON Lines dataset")->required();
    eval_cmd->add_option("--scheme", ea.scheme, "checkembed | bertscore | selfcheck_bert | selfcheck_nli | llm_judge");
    eval_cmd->add_option("--task", ea.task, "wikibio | ragtruth");
    eval_cmd->add_option("--k", ea.k, "Use only the first k samples per record");
    eval_cmd->add_option("--sweep", ea.sweep, "Sample-count sweep over these k values (wikibio)")->delimiter(',');
    eval_cmd->add_option("--out", ea.out, "Output directory (overrides config)");

    HeatmapArgs ha;
    auto* heatmap_cmd = app.add_subcommand("heatmap", "Render a report's matrix as SVG plus CSV");
    heatmap_cmd->add_option("--report", ha.report, "report.json from verify")->required();
    heatmap_cmd->add_option("--out", ha.out, "SVG path; the CSV is written next to it")->required();

    CostArgs ca;
    auto* cost_cmd = app.add_subcommand("cost", "Analytical depth/work comparison");
    cost_cmd->add_option("--scheme", ca.schemes, "Scheme to include (repeatable; default all applicable)");
    cost_cmd->add_option("--task", ca.task, "pairwise_similarity | open_ended_verification");
    cost_cmd->add_option("--k", ca.params.k, "Answers sampled");
    cost_cmd->add_option("--d", ca.params.d, "Embedding dimensionality");
    cost_cmd->add_option("--s", ca.params.s, "Sentences per passage");
    cost_cmd->add_option("--t", ca.params.t, "Tokens per sentence");
    cost_cmd->add_option("--wi", ca.params.W_I, "Work of one inference run");
    cost_cmd->add_option("--di", ca.params.D_I, "Depth of one inference run");
    cost_cmd->add_option("--wm", ca.params.W_M, "Work of one embedding run");
    cost_cmd->add_option("--dm", ca.params.D_M, "Depth of one embedding run");
    cost_cmd->add_flag("--json", ca.json, "Print JSON instead of the table");
    cost_cmd->add_option("--out", ca.out, "Also write the JSON report here");

    SynthArgs sa;
    auto* synth_cmd = app.add_subcommand("synth", "Write the synthetic corruption corpus as JSON Lines");
    synth_cmd->add_option("--out", sa.out, "Output file")->required();
    synth_cmd->add_option("--records", sa.options.records, "Number of records");
    synth_cmd->add_option("--replies", sa.options.replies, "Replies per record");
    synth_cmd->add_option("--seed", sa.options.seed, "Generator seed");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::warn);
    try {
        if (*verify_cmd) return cmd_verify(va, out);
        if (*eval_cmd) return cmd_eval(ea, out);
        if (*heatmap_cmd) return cmd_heatmap(ha, out);
        if (*cost_cmd) return cmd_cost(ca, out);
        if (*synth_cmd) return cmd_synth(sa, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace checkembed::cli
