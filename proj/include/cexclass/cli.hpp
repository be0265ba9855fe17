#pragma once

#include "corpus.hpp"
#include "report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace cexclass {

/// Resolve a comma-separated predicate list against a model: builtin
/// aliases (eq/=, lt/<, ne/!=), predset names (expanded) and predicate
/// names.
inline PredicateSet resolve_predicates(const ModelFile& model, const std::string& list) {
    PredicateSet out;
    out.label = list;
    std::vector<std::string> work;
    std::size_t start = 0;
    while (start <= list.size()) {
        std::size_t comma = list.find(',', start);
        if (comma == std::string::npos) comma = list.size();
        std::string tok = list.substr(start, comma - start);
        while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
        while (!tok.empty() && tok.back() == ' ') tok.pop_back();
        if (!tok.empty()) work.push_back(tok);
        start = comma + 1;
    }
    std::vector<std::string> seen_sets;
    while (!work.empty()) {
        std::string tok = work.front();
        work.erase(work.begin());
        if (tok == "eq" || tok == "=") {
            out.use_eq = true;
        } else if (tok == "lt" || tok == "<") {
            out.use_lt = true;
        } else if (tok == "ne" || tok == "!=" || tok == "neq") {
            out.use_ne = true;
        } else if (auto ps = model.predsets.find(tok); ps != model.predsets.end()) {
            for (const auto& prev : seen_sets)
                if (prev == tok) throw std::invalid_argument("predset cycle involving '" + tok + "'");
            seen_sets.push_back(tok);
            for (const auto& member : ps->second) work.push_back(member);
        } else if (auto p = model.predicates.find(tok); p != model.predicates.end()) {
            bool dup = false;
            for (const auto& existing : out.preds)
                if (existing == p->second) dup = true;
            if (!dup) out.preds.push_back(p->second);
        } else {
            throw std::invalid_argument("unknown predicate or predset '" + tok + "'");
        }
    }
    return out;
}

namespace detail {

struct CliConfig {
    std::string model_path;
    std::string corpus_name;
    std::string property;
    std::string preds;
    std::vector<std::string> pred_files;
    std::string block_file;
    int bound = 0;
    bool exact_length = false;
    int max_arity = 3;
    int equality_window = 12;
    std::vector<std::string> seeds;
    bool no_seed = false;
    std::string format = "text";
    std::string out_path;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct LoadedModel {
    ModelFile model;
    std::string property_name;
    std::string origin;
};

inline LoadedModel load_model(const CliConfig& cfg) {
    LoadedModel lm;
    if (!cfg.corpus_name.empty() && !cfg.model_path.empty())
        throw std::invalid_argument("--model and --corpus are mutually exclusive");
    if (!cfg.corpus_name.empty()) {
        auto c = corpus::load(cfg.corpus_name);
        lm.model = std::move(c.model);
        lm.property_name = cfg.property.empty() ? c.default_property : cfg.property;
        lm.origin = cfg.corpus_name + " (corpus)";
    } else if (!cfg.model_path.empty()) {
        lm.model = parse_model(read_file(cfg.model_path));
        lm.origin = cfg.model_path;
        lm.property_name = cfg.property;
    } else {
        throw std::invalid_argument("one of --model or --corpus is required");
    }
    for (const auto& f : cfg.pred_files) parse_library(read_file(f), lm.model);
    if (lm.property_name.empty()) lm.property_name = lm.model.sole_property().first;
    return lm;
}

inline ConstraintSet load_block(const CliConfig& cfg, const ModelFile& model) {
    ConstraintSet assume;
    if (cfg.block_file.empty()) return assume;
    std::istringstream in(read_file(cfg.block_file));
    std::string line;
    while (std::getline(in, line)) {
        std::string trimmed = line;
        while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t')) trimmed.erase(trimmed.begin());
        if (trimmed.empty() || trimmed.rfind("--", 0) == 0) continue;
        assume.block.push_back(parse_trace_constraint(trimmed, model));
    }
    return assume;
}

inline nlohmann::json echo_config(const CliConfig& cfg, const LoadedModel& lm) {
    nlohmann::json j;
    j["model"] = lm.origin;
    j["property"] = lm.property_name;
    j["predicates"] = cfg.preds;
    j["bound"] = cfg.bound;
    j["exact_length"] = cfg.exact_length;
    j["max_arity"] = cfg.max_arity;
    j["equality_window"] = cfg.equality_window;
    return j;
}

inline void emit(const Report& report, const CliConfig& cfg, std::ostream& out) {
    std::ostringstream buffer;
    if (cfg.format == "structured")
        buffer << report.to_json().dump(2) << "\n";
    else
        report.write_text(buffer);
    if (!cfg.out_path.empty()) {
        std::ofstream f(cfg.out_path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot write output file: " + cfg.out_path);
        f << buffer.str();
    } else {
        out << buffer.str();
    }
}

} // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cexclass: classify the bounded counterexamples of a finite-state model into trace constraints"};
    app.require_subcommand(1);

    detail::CliConfig cfg;
    auto add_common = [&](CLI::App* cmd, bool needs_preds) {
        cmd->add_option("--model", cfg.model_path, "path to a .ccm model file");
        cmd->add_option("--corpus", cfg.corpus_name, "bundled model name");
        cmd->add_option("--property", cfg.property, "property name (default: the model's only property)");
        auto* preds = cmd->add_option("--pred", cfg.preds, "comma-separated predicates/predsets (eq, lt, ne, names)");
        if (needs_preds) preds->required();
        cmd->add_option("--pred-file", cfg.pred_files, "additional predicate library files (.ccp)");
        cmd->add_option("--bound", cfg.bound, "maximum trace length (transitions)")->required();
        cmd->add_flag("--exact-length", cfg.exact_length, "consider only traces of exactly the bound length");
        cmd->add_option("--max-arity", cfg.max_arity, "largest predicate arity instantiated (default 3)");
        cmd->add_option("--equality-window", cfg.equality_window,
                        "max position distance for built-in equality pairs; -1 for unlimited (default 12)");
        cmd->add_option("--format", cfg.format, "text | structured")->check(CLI::IsMember({"text", "structured"}));
        cmd->add_option("--out", cfg.out_path, "write the report to a file instead of stdout");
    };

    auto* classify_cmd = app.add_subcommand("classify", "run the classification loop");
    add_common(classify_cmd, true);
    classify_cmd->add_option("--seed", cfg.seeds, "classify traces satisfying this predicate first (repeatable)");
    classify_cmd->add_flag("--no-seed", cfg.no_seed, "disable automatic seeding of positional predicates");

    auto* check_cmd = app.add_subcommand("check", "check the property under optional blocked constraints");
    add_common(check_cmd, false);
    check_cmd->add_option("--block", cfg.block_file, "file of trace constraints to block (one per line)");

    auto* count_cmd = app.add_subcommand("count", "count bounded counterexamples");
    add_common(count_cmd, false);

    auto* enum_cmd = app.add_subcommand("enumerate", "list bounded traces in canonical order");
    add_common(enum_cmd, false);
    enum_cmd->add_option("--block", cfg.block_file, "file of trace constraints to block (one per line)");

    std::vector<const char*> argv;
    argv.push_back("cexclass");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        detail::LoadedModel lm = detail::load_model(cfg);
        const Property& phi = lm.model.property(lm.property_name);
        Report report;
        report.layout = lm.model.layout().get();
        report.config = detail::echo_config(cfg, lm);
        Bound bound{cfg.bound, cfg.exact_length};
        if (cfg.bound < 0) throw std::invalid_argument("--bound must be non-negative");

        if (classify_cmd->parsed()) {
            report.command = "classify";
            PredicateSet V = resolve_predicates(lm.model, cfg.preds);
            ClassifyOptions opts;
            opts.bound = bound;
            opts.factgen.max_arity = cfg.max_arity;
            opts.factgen.equality_window = cfg.equality_window;
            opts.seed_preds = cfg.seeds;
            opts.auto_seed = !cfg.no_seed;
            ClassifyStats stats;
            ClassifyResult result = classify(lm.model, phi, V, opts, &stats);
            report.verify_ms = stats.verify_ms;
            report.other_ms = stats.total_ms - stats.verify_ms;
            if (auto* ok = std::get_if<Classification>(&result)) {
                report.status = "ok";
                report.classification = std::move(*ok);
                Engine engine(lm.model.system);
                report.counterexamples = engine.count_counterexamples(phi, bound);
                detail::emit(report, cfg, out);
                return 0;
            }
            report.status = "error";
            report.error = std::get<ClassifyError>(result);
            detail::emit(report, cfg, out);
            err << "error: " << report.error->message << "\n";
            return 2;
        }

        if (check_cmd->parsed()) {
            report.command = "check";
            ConstraintSet assume = detail::load_block(cfg, lm.model);
            VerifyOutcome outc = verify(lm.model.system, assume, Objective{phi}, bound);
            report.status = outc.ok() ? "ok" : "violated";
            report.witness = outc.witness;
            detail::emit(report, cfg, out);
            return 0;
        }

        if (count_cmd->parsed()) {
            report.command = "count";
            report.status = "ok";
            report.count = count_counterexamples(lm.model.system, phi, bound);
            detail::emit(report, cfg, out);
            return 0;
        }

        // enumerate
        report.command = "enumerate";
        report.status = "ok";
        ConstraintSet assume = detail::load_block(cfg, lm.model);
        Engine engine(lm.model.system);
        engine.for_each_trace(bound, assume, nullptr, [&](const Trace& t) {
            report.traces.push_back(t);
            report.trace_violates.push_back(!trace_satisfies_property(t, phi));
            return Walk::next;
        });
        report.count = report.traces.size();
        detail::emit(report, cfg, out);
        return 0;
    } catch (const parse_error& e) {
        err << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::logic_error& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

inline int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, out, err);
}

} // namespace cexclass
