#include "cfaudit/demos.hpp"

#include "cfaudit/errors.hpp"
#include "cfaudit/models.hpp"

#include <algorithm>
#include <set>

namespace cfaudit {

namespace {

void require(std::vector<std::string>& failures, bool condition, const std::string& message) {
    if (!condition) failures.push_back(message);
}

/// Dense pmf over the variable's domain from a sparse (label, mass) list.
Distribution dense(const Scm& scm, const std::string& variable,
                   const std::vector<std::pair<std::string, Rat>>& sparse) {
    Distribution expected;
    expected.variable = variable;
    for (const auto& label : scm.find_variable(variable)->domain) {
        Rat mass(0);
        for (const auto& [candidate, value] : sparse) {
            if (candidate == label) mass = value;
        }
        expected.pmf.emplace_back(label, mass);
    }
    return expected;
}

std::vector<std::string> distinct_augmented_values(const AugmentedDataset& dataset) {
    std::set<std::string> values;
    for (const auto& record : dataset.augmented) values.insert(record.x_prime);
    return {values.begin(), values.end()};
}

} // namespace

AppendixDemoReport run_appendix_demo() {
    AppendixDemoReport report;
    const Scm scm = build_linear_scm();

    report.input_marginal = marginal(scm, "X");
    const std::vector<std::string> supp_x = report.input_marginal.support();
    const std::vector<std::string> supp_z = marginal(scm, "Z").support();

    for (const auto& x : supp_x) {
        AppendixDemoReport::PerInput per;
        per.x = x;
        Assignment evidence;
        evidence.bind("X", x);

        const MapContextResult guessed = map_context(scm, "Z", evidence);
        per.map_context = guessed.value;
        per.map_tie = guessed.tie;
        per.context_posterior = guessed.posterior;

        for (const auto& z : supp_z) {
            CounterfactualQuery query;
            query.target = "X";
            query.intervention.bind("Z", z);
            query.evidence = evidence;
            per.counterfactuals.emplace_back(z, counterfactual(scm, query));
            per.guess_counterfactuals.emplace_back(z,
                                                   guess_counterfactual(scm, "X", "Z", z, evidence));
        }
        report.per_input.push_back(std::move(per));
    }

    report.cf_constraints = counterfactual_constraints(scm, "X", "Z");
    report.cda_constraints = guess_cda_constraints(scm, "X", "Z");
    report.cf_partition = partition_from(scm, report.cf_constraints);
    report.cda_partition = partition_from(scm, report.cda_constraints);
    report.support_subset = check_support_subset(scm, "X", "Z");
    report.verdict = compare_partitions(report.cda_partition, report.cf_partition);

    auto& failures = report.failures;
    const auto per_x = [&](const std::string& x) -> const AppendixDemoReport::PerInput& {
        for (const auto& per : report.per_input) {
            if (per.x == x) return per;
        }
        throw QueryError("x=" + x + " missing from the demo's observed inputs");
    };
    const auto dist_for = [](const std::vector<std::pair<std::string, Distribution>>& entries,
                             const std::string& z) -> const Distribution& {
        for (const auto& [value, dist] : entries) {
            if (value == z) return dist;
        }
        throw QueryError("context value " + z + " missing from the demo's interventions");
    };

    const auto& at_one = per_x("1");
    require(failures, at_one.map_context == "-1" && !at_one.map_tie,
            "MAP context of X=1 should be Z=-1 without tie");
    require(failures,
            dist_for(at_one.counterfactuals, "1") ==
                dense(scm, "X", {{"1", Rat(1, 3)}, {"3", Rat(2, 3)}}),
            "counterfactual under do(Z=1) given X=1 should be {1: 1/3, 3: 2/3}");
    require(failures,
            dist_for(at_one.counterfactuals, "-1") ==
                dense(scm, "X", {{"-1", Rat(1, 3)}, {"1", Rat(2, 3)}}),
            "counterfactual under do(Z=-1) given X=1 should be {-1: 1/3, 1: 2/3}");
    require(failures,
            dist_for(at_one.guess_counterfactuals, "1") == dense(scm, "X", {{"3", Rat(1)}}),
            "guessed-context counterfactual under do(Z=1) given X=1 should be the point mass at 3");
    require(failures,
            dist_for(at_one.guess_counterfactuals, "-1") == dense(scm, "X", {{"1", Rat(1)}}),
            "guessed-context counterfactual under do(Z=-1) given X=1 should be the point mass at 1");

    require(failures, report.support_subset.holds,
            "guessed-context supports must be contained in true counterfactual supports");
    require(failures,
            report.cf_partition.classes ==
                std::vector<std::vector<std::string>>{{"-3", "-1", "1", "3"}},
            "true-counterfactual constraints should force a single class");
    require(failures,
            report.cda_partition.classes ==
                std::vector<std::vector<std::string>>{{"-3", "-1"}, {"1", "3"}},
            "guess constraints should leave the two classes {-3,-1} and {1,3}");
    require(failures, report.verdict == PartitionRelation::cda_strictly_finer,
            "verdict should be cda_strictly_finer");
    return report;
}

namespace {

ReviewDemoReport::Variant evaluate_variant(const std::string& name, const Scm& train_model,
                                           const Scm& test_model,
                                           const std::vector<LabeledExample>& data) {
    ReviewDemoReport::Variant variant;
    variant.name = name;
    variant.train_count = static_cast<std::int64_t>(data.size());
    for (const auto& example : data) variant.train_histogram[example.x] += 1;

    const AugmentedDataset guess_ds = guess_cda(train_model, "X", "Y", "Z", data);
    const AugmentedDataset full_ds = full_cda(train_model, "X", "Y", "Z", data);

    variant.guess_partition = partition_from(train_model, induced_constraints(guess_ds),
                                             dataset_values(train_model, guess_ds));
    variant.full_partition = partition_from(train_model, induced_constraints(full_ds),
                                            dataset_values(train_model, full_ds));

    const PartitionClassifier guess_classifier = fit_partition_classifier(
        train_model, "Y", data, variant.guess_partition, Fallback::abstain);
    const PartitionClassifier full_classifier = fit_partition_classifier(
        train_model, "Y", data, variant.full_partition, Fallback::abstain);

    variant.guess_eval = ood_eval_exact(guess_classifier, test_model);
    variant.full_eval = ood_eval_exact(full_classifier, test_model);
    variant.accuracy_gap = variant.full_eval.accuracy - variant.guess_eval.accuracy;
    return variant;
}

bool is_neutral(const std::string& x) {
    return x.ends_with("|neutral");
}

/// "full abstains at x" implies "guess abstains at x", per input value.
bool abstention_superset(const Scm& train_model, const std::vector<LabeledExample>& data,
                         const ReviewDemoReport::Variant& variant) {
    const PartitionClassifier guess_classifier = fit_partition_classifier(
        train_model, "Y", data, variant.guess_partition, Fallback::abstain);
    const PartitionClassifier full_classifier = fit_partition_classifier(
        train_model, "Y", data, variant.full_partition, Fallback::abstain);
    for (const auto& x : train_model.find_variable("X")->domain) {
        const bool full_abstains = !full_classifier.classify(x).has_value();
        const bool guess_abstains = !guess_classifier.classify(x).has_value();
        if (full_abstains && !guess_abstains) return false;
    }
    return true;
}

} // namespace

ReviewDemoReport run_review_demo(const ReviewDemoParams& params) {
    if (params.train_n < 1) {
        throw QueryError("training sample size must be at least 1, got " +
                         std::to_string(params.train_n));
    }

    ReviewDemoReport report;
    report.params = params;

    const Scm train_model = build_review_scm();
    const Scm test_model = build_review_scm(params.test_prior_ux);

    const Distribution test_marginal = marginal(test_model, "X");
    report.expected_neutral_mass = Rat(0);
    for (const auto& [label, mass] : test_marginal.pmf) {
        if (is_neutral(label)) report.expected_neutral_mass += mass;
    }

    // The worked single example: a good review in a positive tone.
    report.spotlight.example = LabeledExample{"good_1|positive", "helpful", 1};
    const std::vector<LabeledExample> spot{report.spotlight.example};
    report.spotlight.guess_records = guess_cda(train_model, "X", "Y", "Z", spot).augmented;
    report.spotlight.full_records = full_cda(train_model, "X", "Y", "Z", spot).augmented;
    {
        AugmentedDataset guess_ds;
        guess_ds.augmented = report.spotlight.guess_records;
        AugmentedDataset full_ds;
        full_ds.augmented = report.spotlight.full_records;
        report.spotlight.guess_values = distinct_augmented_values(guess_ds);
        report.spotlight.full_values = distinct_augmented_values(full_ds);
    }

    const std::vector<LabeledExample> train =
        sample_dataset(train_model, "X", "Y", params.train_n, params.seed);
    std::vector<LabeledExample> train_rare;
    for (const auto& example : train) {
        if (!is_neutral(example.x)) train_rare.push_back(example);
    }

    report.unfiltered = evaluate_variant("unfiltered", train_model, test_model, train);
    report.rare_context_absent =
        evaluate_variant("rare_context_absent", train_model, test_model, train_rare);

    auto& failures = report.failures;
    require(failures,
            report.spotlight.guess_values ==
                std::vector<std::string>{"good_1|negative", "good_1|positive"},
            "guess augmentation of the spotlight example should emit exactly "
            "good_1|negative and good_1|positive");
    require(failures,
            report.spotlight.full_values ==
                std::vector<std::string>{"good_1|negative", "good_1|neutral", "good_1|positive"},
            "true augmentation of the spotlight example should add good_1|neutral");
    const auto labels_preserved = [](const std::vector<AugmentedExample>& records) {
        return std::all_of(records.begin(), records.end(),
                           [](const AugmentedExample& r) { return r.y == "helpful"; });
    };
    require(failures,
            labels_preserved(report.spotlight.guess_records) &&
                labels_preserved(report.spotlight.full_records),
            "augmented records must keep the source label");

    // Coverage the rare-context-absent argument needs: at least one good
    // and one poor non-neutral example survived the filter.
    const bool covered =
        std::any_of(train_rare.begin(), train_rare.end(),
                    [](const LabeledExample& e) { return e.x.starts_with("good_"); }) &&
        std::any_of(train_rare.begin(), train_rare.end(),
                    [](const LabeledExample& e) { return e.x.starts_with("poor_"); });
    require(failures, covered,
            "filtered training sample must still cover good and poor contents");

    require(failures, report.rare_context_absent.full_eval.accuracy == Rat(1),
            "true augmentation classifier should be exactly right on the shifted test model");
    require(failures,
            report.rare_context_absent.guess_eval.accuracy ==
                Rat(1) - report.expected_neutral_mass,
            "guess augmentation classifier should lose exactly the neutral-tone test mass");
    require(failures, report.rare_context_absent.accuracy_gap == report.expected_neutral_mass,
            "accuracy gap should equal the neutral-tone test mass");

    require(failures, abstention_superset(train_model, train, report.unfiltered),
            "guess classifier abstentions must cover the full classifier's (unfiltered)");
    require(failures, abstention_superset(train_model, train_rare, report.rare_context_absent),
            "guess classifier abstentions must cover the full classifier's (rare-context-absent)");
    return report;
}

} // namespace cfaudit
