#include <cstdio>
#include <deque>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "patentsum/error.hpp"
#include "patentsum/pipeline.hpp"

namespace {

using namespace patentsum;

// Flags that map onto config keys; applied after the config file so they win.
class Bindings {
public:
    void value(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        auto& slot = strings_.emplace_back();
        entries_.push_back({app->add_option(flag, slot, help + " [" + key + "]"), key, &slot, nullptr, {}});
    }

    void list(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        auto& slot = lists_.emplace_back();
        entries_.push_back({app->add_option(flag, slot, help + " [" + key + "]"), key, nullptr, &slot, {}});
    }

    void flag(CLI::App* app, const std::string& flag, const std::string& key, std::string set_to,
              const std::string& help) {
        auto* opt = app->add_flag(flag)->description(help + " [" + key + "]");
        entries_.push_back({opt, key, nullptr, nullptr, std::move(set_to)});
    }

    void apply(RunConfig& cfg) const {
        for (const auto& e : entries_) {
            if (e.option->count() == 0) continue;
            if (e.text) {
                apply_setting(cfg, e.key, *e.text);
            } else if (e.items) {
                std::string joined;
                for (const auto& item : *e.items) joined += (joined.empty() ? "" : ",") + item;
                apply_setting(cfg, e.key, joined);
            } else {
                apply_setting(cfg, e.key, e.fixed);
            }
        }
    }

private:
    struct Entry {
        CLI::Option* option;
        std::string key;
        std::string* text;
        std::vector<std::string>* items;
        std::string fixed;
    };
    std::deque<std::string> strings_;
    std::deque<std::vector<std::string>> lists_;
    std::vector<Entry> entries_;
};

void print_hits(const SearchResult& result) {
    for (const auto& h : result.hits) std::printf("%zu\t%s\t%.6f\n", h.rank, h.doc_id.c_str(), h.score);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Patent prior-art retrieval toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_all_flag("--help-all", "Show help for every command");

    Bindings bind;
    std::string config_path;
    std::vector<std::string> settings;
    app.add_option("--config", config_path, "Config file of `section.key = value` lines")->check(CLI::ExistingFile);
    bind.value(&app, "--seed", "output.seed", "Random seed");
    bind.value(&app, "--backend", "backend.kind", "Embedding backend: hashed or remote");
    bind.value(&app, "--endpoint", "backend.endpoint", "Model server URL, e.g. http://127.0.0.1:8080");
    bind.value(&app, "--out", "output.dir", "Output directory");
    app.add_option("--set", settings, "Extra config override KEY=VALUE (repeatable)");

    auto corpus_flags = [&](CLI::App* cmd) {
        bind.value(cmd, "--corpus", "corpus.path", "Corpus file or directory");
        bind.value(cmd, "--format", "corpus.format", "Corpus format: jsonl or hupd");
    };

    auto* ingest = app.add_subcommand("ingest", "Validate and normalize a corpus");
    corpus_flags(ingest);
    bind.value(ingest, "--topics", "topics.path", "Topics file to cross-check");

    auto* segment = app.add_subcommand("segment", "Detect description segments and first claims");
    corpus_flags(segment);
    bind.value(segment, "--dict", "segment.dictionary", "Heading dictionary merged into the seed set");
    bind.value(segment, "--segments", "segment.store", "Output segment store");

    auto* summarize = app.add_subcommand("summarize", "Generate summaries for every document");
    corpus_flags(summarize);
    bind.value(summarize, "--dict", "segment.dictionary", "Heading dictionary");
    bind.value(summarize, "--segments", "segment.store", "Segment store from `segment`");
    bind.value(summarize, "--method", "summarize.method", "extractive or abstractive");
    bind.value(summarize, "--variant", "summarize.variant", "Extractive variant: sentence or bert-class");
    bind.value(summarize, "--source", "summarize.source", "Source section tag");
    bind.value(summarize, "--profile", "summarize.profile", "Generation profile: default or adjusted");
    bind.value(summarize, "--length-penalty", "summarize.length_penalty", "Length penalty for generation");
    bind.value(summarize, "--target-words", "summarize.target_words", "Extractive target length");
    bind.value(summarize, "--k,--clusters", "summarize.clusters", "Fixed number of extracted sentences");
    bind.flag(summarize, "--no-fallback", "summarize.fallback", "false", "Fail instead of using the local fallback");

    auto* finetune = app.add_subcommand("build-finetune-set", "Build summarizer fine-tuning pairs");
    corpus_flags(finetune);
    bind.value(finetune, "--dict", "segment.dictionary", "Heading dictionary");
    bind.value(finetune, "--summary-words", "finetune.summary_words", "Summary length range LOW-HIGH");
    bind.value(finetune, "--source-words", "finetune.source_words", "Source length range LOW-HIGH");

    auto* index = app.add_subcommand("index", "Embed the corpus into a vector index");
    corpus_flags(index);
    bind.value(index, "--index", "index.path", "Index file");
    bind.value(index, "--representation", "index.representation", "claims, abstract or description");
    bind.value(index, "--cap", "index.cap", "Token cap per text");
    bind.value(index, "--dim", "backend.dim", "Hashed backend dimension");

    std::string query;
    auto* search_cmd = app.add_subcommand("search", "Query an index");
    search_cmd->add_option("query", query, "Query text")->required();
    bind.value(search_cmd, "--index", "index.path", "Index file");
    bind.value(search_cmd, "--k", "run.k", "Number of hits");
    bind.value(search_cmd, "--dim", "backend.dim", "Hashed backend dimension");

    auto* run = app.add_subcommand("run", "Run query strategies for every topic");
    corpus_flags(run);
    bind.value(run, "--topics", "topics.path", "Topics file");
    bind.value(run, "--dict", "segment.dictionary", "Heading dictionary");
    bind.value(run, "--segments", "segment.store", "Segment store");
    bind.list(run, "--summaries", "summaries.paths", "Summary stores for generated strategies");
    bind.value(run, "--index", "index.path", "Index file (built when absent)");
    bind.value(run, "--representation", "index.representation", "Index representation when building");
    bind.value(run, "--cap", "index.cap", "Token cap");
    bind.value(run, "--dim", "backend.dim", "Hashed backend dimension");
    bind.list(run, "--strategy", "run.strategies", "Query strategy (repeatable)");
    bind.value(run, "--k", "run.k", "Depth of each ranking");

    std::vector<std::string> run_files;
    auto* eval = app.add_subcommand("eval", "Score run files, or summaries with --summaries");
    eval->add_option("runs", run_files, "Run files");
    bind.value(eval, "--qrels", "qrels.path", "Relevance judgments");
    bind.value(eval, "--map-cutoff", "eval.map_cutoff", "MAP cutoff");
    bind.value(eval, "--precision-cutoffs", "eval.precision_cutoffs", "Comma-separated P@k cutoffs");
    bind.value(eval, "--recall-cutoffs", "eval.recall_cutoffs", "Comma-separated R@k cutoffs");
    corpus_flags(eval);
    bind.value(eval, "--dict", "segment.dictionary", "Heading dictionary");
    bind.value(eval, "--segments", "segment.store", "Segment store");
    bind.list(eval, "--summaries", "summaries.paths", "Summary stores for intrinsic evaluation");
    bind.value(eval, "--reference", "eval.reference", "Reference section for intrinsic evaluation");
    bind.value(eval, "--dim", "backend.dim", "Hashed backend dimension");

    std::vector<std::string> report_files;
    auto* report = app.add_subcommand("report", "Render result tables from metric reports");
    report->add_option("reports", report_files, "Metric report files from eval")->required();
    bind.value(report, "--map-cutoff", "eval.map_cutoff", "MAP cutoff");
    bind.value(report, "--precision-cutoffs", "eval.precision_cutoffs", "Comma-separated P@k cutoffs");
    bind.value(report, "--recall-cutoffs", "eval.recall_cutoffs", "Comma-separated R@k cutoffs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    auto* cmd = app.get_subcommands().front();
    try {
        RunConfig cfg;
        if (!config_path.empty()) apply_settings(cfg, read_config_file(config_path));
        for (const auto& s : settings) {
            auto eq = s.find('=');
            if (eq == std::string::npos) throw InputError("--set expects KEY=VALUE, got '" + s + "'");
            apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        bind.apply(cfg);

        auto& log = std::cerr;
        if (cmd == ingest) {
            cmd_ingest(cfg, log);
        } else if (cmd == segment) {
            cmd_segment(cfg, log);
        } else if (cmd == summarize) {
            cmd_summarize(cfg, log);
        } else if (cmd == finetune) {
            cmd_build_finetune_set(cfg, log);
        } else if (cmd == index) {
            cmd_index(cfg, log);
        } else if (cmd == search_cmd) {
            print_hits(cmd_search(cfg, query, log));
        } else if (cmd == run) {
            for (const auto& p : cmd_run(cfg, log)) std::cout << p.string() << '\n';
        } else if (cmd == eval) {
            if (run_files.empty() && cfg.summaries.empty()) throw InputError("eval needs run files or --summaries");
            if (!run_files.empty()) {
                std::vector<fs::path> paths(run_files.begin(), run_files.end());
                for (const auto& p : cmd_eval(cfg, paths, log)) std::cout << p.string() << '\n';
            }
            if (!cfg.summaries.empty()) {
                cmd_eval_summaries(cfg, log);
                std::cout << (cfg.out / "eval" / "intrinsic.json").string() << '\n';
            }
        } else if (cmd == report) {
            std::vector<fs::path> paths(report_files.begin(), report_files.end());
            cmd_report(cfg, paths, log);
        }
    } catch (const BackendError& e) {
        std::cerr << "error: " << cmd->get_name() << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << cmd->get_name() << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}
