#include "cfaudit/augment.hpp"
#include "cfaudit/classifier.hpp"
#include "cfaudit/demos.hpp"
#include "cfaudit/errors.hpp"
#include "cfaudit/inference.hpp"
#include "cfaudit/invariance.hpp"
#include "cfaudit/models.hpp"
#include "cfaudit/scm.hpp"
#include "cfaudit/serialize.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace {

using namespace cfaudit;

// Exit codes: 0 success, 1 usage, 2 validation, 3 parse, 4 query,
// 5 demo assertion failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitParse = 3;
constexpr int kExitQuery = 4;
constexpr int kExitDemoAssertion = 5;

struct OutputSink {
    std::string format = "text";
    std::string path; // empty = stdout

    void write(const std::string& text, const Json& document) const {
        const std::string& payload = format == "json" ? document.dump(2) + "\n" : text;
        if (path.empty()) {
            std::cout << payload;
            return;
        }
        std::ofstream out(path);
        if (!out) throw QueryError("cannot write output file '" + path + "'");
        out << payload;
    }
};

std::pair<std::string, std::string> split_binding(const std::string& text) {
    const auto eq = text.find('=');
    return {text.substr(0, eq), text.substr(eq + 1)};
}

Assignment parse_assignment(const std::vector<std::string>& bindings) {
    Assignment assignment;
    for (const auto& text : bindings) {
        auto [variable, value] = split_binding(text);
        assignment.bind(std::move(variable), std::move(value));
    }
    return assignment;
}

std::string render_distribution(const Distribution& distribution) {
    std::ostringstream out;
    for (const auto& [label, mass] : distribution.pmf) {
        if (!mass.positive()) continue;
        out << "  " << label << ": " << mass.str() << "  (~" << mass.to_double() << ")\n";
    }
    return out.str();
}

std::string render_partition(const Partition& partition) {
    std::ostringstream out;
    for (std::size_t c = 0; c < partition.classes.size(); ++c) {
        if (c > 0) out << " ";
        out << "{";
        for (std::size_t m = 0; m < partition.classes[c].size(); ++m) {
            if (m > 0) out << ", ";
            out << partition.classes[c][m];
        }
        out << "}";
    }
    return out.str();
}

int cmd_validate(const std::string& model_path) {
    const Scm scm = load_scm_file(model_path);
    const ValidationReport report = validate(scm);
    if (report.ok()) {
        std::cout << "ok\n";
        return kExitOk;
    }
    for (const auto& violation : report.violations) {
        std::cerr << "violation: " << violation << "\n";
    }
    return kExitValidation;
}

struct CounterfactualArgs {
    std::string model_path;
    std::string target;
    std::vector<std::string> do_bindings;
    std::vector<std::string> evidence_bindings;
    std::string guess_context;
    OutputSink sink;
};

int cmd_counterfactual(const CounterfactualArgs& args) {
    const Scm scm = load_scm_file(args.model_path);
    const Assignment evidence = parse_assignment(args.evidence_bindings);
    const Assignment interventions = parse_assignment(args.do_bindings);

    Distribution result;
    std::string headline;
    if (!args.guess_context.empty()) {
        if (interventions.bindings().size() != 1 ||
            interventions.bindings().front().first != args.guess_context) {
            std::cerr << "with --guess-context, exactly one --do on the guessed variable is "
                         "expected\n";
            return kExitUsage;
        }
        const auto& [context_var, do_value] = interventions.bindings().front();
        result = guess_counterfactual(scm, args.target, context_var, do_value, evidence);
        headline = args.target + "(do " + interventions.str() + ") | " + evidence.str() +
                   ", guessed " + args.guess_context;
    } else {
        CounterfactualQuery query;
        query.target = args.target;
        query.intervention = interventions;
        query.evidence = evidence;
        result = counterfactual(scm, query);
        headline = args.target + "(do " + interventions.str() + ") | " + evidence.str();
    }

    args.sink.write(headline + "\n" + render_distribution(result), to_json(result));
    return kExitOk;
}

struct AuditArgs {
    std::string model_path;
    std::string input_var;
    std::string context_var;
    Exec exec = Exec::serial;
    OutputSink sink;
};

int cmd_audit(const AuditArgs& args) {
    const Scm scm = load_scm_file(args.model_path);

    const ConstraintSet cf = counterfactual_constraints(scm, args.input_var, args.context_var,
                                                        args.exec);
    const ConstraintSet cda = guess_cda_constraints(scm, args.input_var, args.context_var,
                                                    args.exec);
    const Partition cf_partition = partition_from(scm, cf);
    const Partition cda_partition = partition_from(scm, cda);
    const SupportSubsetResult subset = check_support_subset(scm, args.input_var,
                                                            args.context_var, args.exec);
    const PartitionRelation verdict = compare_partitions(cda_partition, cf_partition);

    Json document = Json::object();
    document["input"] = args.input_var;
    document["context"] = args.context_var;
    document["cf_constraints"] = to_json(cf);
    document["cda_constraints"] = to_json(cda);
    document["cf_partition"] = to_json(cf_partition);
    document["cda_partition"] = to_json(cda_partition);
    document["support_subset"] = to_json(subset);
    document["verdict"] = std::string(to_string(verdict));

    std::ostringstream text;
    text << "input " << args.input_var << ", context " << args.context_var << "\n";
    text << "cf partition:  " << render_partition(cf_partition) << "\n";
    text << "cda partition: " << render_partition(cda_partition) << "\n";
    text << "support subset: " << (subset.holds ? "holds" : "violated") << "\n";
    if (subset.witness.has_value()) {
        text << "  witness: x=" << subset.witness->x << " z=" << subset.witness->z
             << " x'=" << subset.witness->x_prime << "\n";
    }
    text << "verdict: " << to_string(verdict) << "\n";

    args.sink.write(text.str(), document);
    return kExitOk;
}

struct AugmentArgs {
    std::string model_path;
    std::string data_path;
    std::string mode = "full";
    std::string input_var = "X";
    std::string label_var = "Y";
    std::string context_var = "Z";
    std::string tau = "0";
    int draws = 0; // 0 = enumerate
    std::uint64_t seed = 0;
    int context_draws = 0; // 0 = threshold rule
    std::uint64_t context_seed = 0;
    Exec exec = Exec::serial;
    std::string output_path;
};

int cmd_augment(const AugmentArgs& args) {
    const Scm scm = load_scm_file(args.model_path);
    const std::vector<LabeledExample> data = load_dataset_file(args.data_path);
    const AugMode mode = aug_mode_from(args.mode);

    std::optional<DrawSpec> draw;
    if (args.draws > 0) draw = DrawSpec{args.draws, args.seed};

    AugmentedDataset dataset;
    switch (mode) {
    case AugMode::guess:
        dataset = guess_cda(scm, args.input_var, args.label_var, args.context_var, data, draw,
                            args.exec);
        break;
    case AugMode::full:
        dataset = full_cda(scm, args.input_var, args.label_var, args.context_var, data, draw,
                           args.exec);
        break;
    case AugMode::posterior: {
        ContextRule rule;
        rule.tau = Rat::parse(args.tau);
        if (args.context_draws > 0) rule.draw = DrawSpec{args.context_draws, args.context_seed};
        dataset = posterior_cda(scm, args.input_var, args.label_var, args.context_var, data, rule,
                                draw, args.exec);
        break;
    }
    }

    if (args.output_path.empty()) {
        write_augmented_dataset(std::cout, dataset);
    } else {
        std::ofstream out(args.output_path);
        if (!out) throw QueryError("cannot write output file '" + args.output_path + "'");
        write_augmented_dataset(out, dataset);
    }
    std::cerr << dataset.originals.size() << " original, " << dataset.augmented.size()
              << " augmented records\n";
    return kExitOk;
}

std::string render_appendix(const AppendixDemoReport& report) {
    std::ostringstream text;
    text << "appendix demo (linear model)\n";
    text << "input marginal:\n" << render_distribution(report.input_marginal);
    for (const auto& per : report.per_input) {
        text << "x=" << per.x << "  guessed context: " << per.map_context
             << (per.map_tie ? " (tie)" : "") << "\n";
        for (const auto& [z, dist] : per.counterfactuals) {
            text << "  counterfactual do(Z=" << z << "):\n" << render_distribution(dist);
        }
        for (const auto& [z, dist] : per.guess_counterfactuals) {
            text << "  guessed-context do(Z=" << z << "):\n" << render_distribution(dist);
        }
    }
    text << "cf partition:  " << render_partition(report.cf_partition) << "\n";
    text << "cda partition: " << render_partition(report.cda_partition) << "\n";
    text << "support subset: " << (report.support_subset.holds ? "holds" : "violated") << "\n";
    text << "verdict: " << to_string(report.verdict) << "\n";
    text << (report.failures.empty() ? "all assertions passed\n" : "ASSERTIONS FAILED\n");
    return text.str();
}

std::string render_review(const ReviewDemoReport& report) {
    std::ostringstream text;
    text << "review demo (train_n=" << report.params.train_n << ", seed=" << report.params.seed
         << ", test P(U_X=1)=" << report.params.test_prior_ux.str() << ")\n";
    text << "spotlight " << report.spotlight.example.x << " -> guess {";
    for (std::size_t i = 0; i < report.spotlight.guess_values.size(); ++i) {
        if (i > 0) text << ", ";
        text << report.spotlight.guess_values[i];
    }
    text << "}, full {";
    for (std::size_t i = 0; i < report.spotlight.full_values.size(); ++i) {
        if (i > 0) text << ", ";
        text << report.spotlight.full_values[i];
    }
    text << "}\n";
    text << "expected neutral-tone test mass: " << report.expected_neutral_mass.str() << "\n";
    for (const auto* variant : {&report.unfiltered, &report.rare_context_absent}) {
        text << "[" << variant->name << "] train=" << variant->train_count << "\n";
        text << "  guess partition: " << render_partition(variant->guess_partition) << "\n";
        text << "  full partition:  " << render_partition(variant->full_partition) << "\n";
        text << "  guess accuracy: " << variant->guess_eval.accuracy.str() << " (~"
             << variant->guess_eval.accuracy.to_double() << ")"
             << ", abstention " << variant->guess_eval.abstention_rate.str() << "\n";
        text << "  full accuracy:  " << variant->full_eval.accuracy.str() << " (~"
             << variant->full_eval.accuracy.to_double() << ")\n";
        text << "  gap: " << variant->accuracy_gap.str() << "\n";
    }
    text << (report.failures.empty() ? "all assertions passed\n" : "ASSERTIONS FAILED\n");
    return text.str();
}

struct DemoArgs {
    std::string which;
    std::int64_t train_n = 500;
    std::uint64_t seed = 0;
    std::string test_prior_ux = "1/10";
    OutputSink sink;
};

int cmd_demo(const DemoArgs& args) {
    std::vector<std::string> failures;
    if (args.which == "appendix") {
        const AppendixDemoReport report = run_appendix_demo();
        args.sink.write(render_appendix(report), to_json(report));
        failures = report.failures;
    } else {
        ReviewDemoParams params;
        params.train_n = args.train_n;
        params.seed = args.seed;
        params.test_prior_ux = Rat::parse(args.test_prior_ux);
        const ReviewDemoReport report = run_review_demo(params);
        args.sink.write(render_review(report), to_json(report));
        failures = report.failures;
    }
    if (!failures.empty()) {
        std::cerr << "assertion failed: " << failures.front() << "\n";
        return kExitDemoAssertion;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact counterfactual inference and augmentation audits for discrete SCMs"};
    app.require_subcommand(1);

    int threads = 1;
    app.add_option("--threads", threads, "worker threads for the parallel kernels (default 1)")
        ->check(CLI::PositiveNumber);

    const auto binding_check = CLI::Validator(
        [](std::string& text) -> std::string {
            const auto eq = text.find('=');
            if (eq == std::string::npos || eq == 0) return "expected VAR=value, got '" + text + "'";
            return {};
        },
        "VAR=value");

    auto* validate_cmd = app.add_subcommand("validate", "check a model file against every invariant");
    std::string validate_model;
    validate_cmd->add_option("model", validate_model, "model JSON file")->required();

    auto* cf_cmd = app.add_subcommand("counterfactual",
                                      "counterfactual pmf of a target variable, optionally "
                                      "through a context-guessing machine");
    CounterfactualArgs cf_args;
    cf_cmd->add_option("model", cf_args.model_path, "model JSON file")->required();
    cf_cmd->add_option("--target", cf_args.target, "endogenous target variable")->required();
    cf_cmd->add_option("--do", cf_args.do_bindings, "intervention VAR=value (repeatable)")
        ->required()
        ->check(binding_check);
    cf_cmd->add_option("--evidence", cf_args.evidence_bindings, "evidence VAR=value (repeatable)")
        ->check(binding_check);
    cf_cmd->add_option("--guess-context", cf_args.guess_context,
                       "condition on the MAP value of this variable before counterfactualizing");
    cf_cmd->add_option("--format", cf_args.sink.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    cf_cmd->add_option("--output", cf_args.sink.path, "write the result to a file");

    auto* audit_cmd = app.add_subcommand("audit",
                                         "compare the invariance partitions induced by true and "
                                         "guessed-context augmentation");
    AuditArgs audit_args;
    audit_cmd->add_option("model", audit_args.model_path, "model JSON file")->required();
    audit_cmd->add_option("--input", audit_args.input_var, "endogenous input variable")->required();
    audit_cmd->add_option("--context", audit_args.context_var, "context variable")->required();
    audit_cmd->add_option("--format", audit_args.sink.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    audit_cmd->add_option("--output", audit_args.sink.path, "write the report to a file");

    auto* augment_cmd = app.add_subcommand("augment", "write a counterfactually augmented dataset");
    AugmentArgs augment_args;
    augment_cmd->add_option("model", augment_args.model_path, "model JSON file")->required();
    augment_cmd->add_option("--data", augment_args.data_path, "dataset file (JSON lines)")
        ->required();
    augment_cmd->add_option("--mode", augment_args.mode, "full, guess, or posterior")
        ->required()
        ->check(CLI::IsMember({"full", "guess", "posterior"}));
    augment_cmd->add_option("--input", augment_args.input_var, "input variable (default X)");
    augment_cmd->add_option("--label", augment_args.label_var, "label variable (default Y)");
    augment_cmd->add_option("--context", augment_args.context_var, "context variable (default Z)");
    augment_cmd->add_option("--tau", augment_args.tau,
                            "posterior mode: keep contexts with posterior mass > tau (default 0)");
    augment_cmd->add_option("--draws", augment_args.draws,
                            "sample mode: draws per generated distribution (default: enumerate)")
        ->check(CLI::PositiveNumber);
    augment_cmd->add_option("--seed", augment_args.seed, "sample mode seed (default 0)");
    augment_cmd->add_option("--context-draws", augment_args.context_draws,
                            "posterior mode: sample this many contexts instead of thresholding")
        ->check(CLI::PositiveNumber);
    augment_cmd->add_option("--context-seed", augment_args.context_seed,
                            "seed for sampled contexts (default 0)");
    augment_cmd->add_option("--output", augment_args.output_path,
                            "write records to a file instead of stdout");

    auto* demo_cmd = app.add_subcommand("demo", "run a bundled end-to-end demonstration");
    DemoArgs demo_args;
    demo_cmd->add_option("which", demo_args.which, "appendix or review")
        ->required()
        ->check(CLI::IsMember({"appendix", "review"}));
    demo_cmd->add_option("--train-n", demo_args.train_n, "review demo: training sample size")
        ->check(CLI::PositiveNumber);
    demo_cmd->add_option("--seed", demo_args.seed, "review demo: sampling seed (default 0)");
    demo_cmd->add_option("--test-prior-ux", demo_args.test_prior_ux,
                         "review demo: P(U_X=1) of the test model (default 1/10)");
    demo_cmd->add_option("--format", demo_args.sink.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    demo_cmd->add_option("--output", demo_args.sink.path, "write the report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    set_threads(threads);
    const Exec exec = threads > 1 ? Exec::parallel : Exec::serial;
    audit_args.exec = exec;
    augment_args.exec = exec;

    try {
        if (validate_cmd->parsed()) return cmd_validate(validate_model);
        if (cf_cmd->parsed()) return cmd_counterfactual(cf_args);
        if (audit_cmd->parsed()) return cmd_audit(audit_args);
        if (augment_cmd->parsed()) return cmd_augment(augment_args);
        if (demo_cmd->parsed()) return cmd_demo(demo_args);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const QueryError& e) {
        std::cerr << "query error: " << e.what() << "\n";
        return kExitQuery;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
