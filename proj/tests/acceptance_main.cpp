// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Every tolerance is pinned here, in code.

#include "cfaudit/augment.hpp"
#include "cfaudit/classifier.hpp"
#include "cfaudit/demos.hpp"
#include "cfaudit/inference.hpp"
#include "cfaudit/invariance.hpp"
#include "cfaudit/models.hpp"
#include "cfaudit/random_scm.hpp"
#include "cfaudit/scm.hpp"

#include "support/oracle.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace cfaudit;

struct Harness {
    int failed = 0;

    void run(int number, const std::string& title, const std::function<void()>& body) {
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            body();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (error.empty()) {
            std::printf("[PASS] criterion %d: %s (%.3f s)\n", number, title.c_str(), seconds);
        } else {
            std::printf("[FAIL] criterion %d: %s (%.3f s)\n       %s\n", number, title.c_str(),
                        seconds, error.c_str());
            ++failed;
        }
        std::fflush(stdout);
    }
};

void require(bool condition, const std::string& message) {
    if (!condition) throw std::runtime_error(message);
}

Assignment given(const std::string& variable, const std::string& value) {
    Assignment assignment;
    assignment.bind(variable, value);
    return assignment;
}

Distribution run_counterfactual(const Scm& scm, const std::string& target,
                                const std::string& context, const std::string& do_value,
                                const Assignment& evidence) {
    CounterfactualQuery query;
    query.target = target;
    query.intervention.bind(context, do_value);
    query.evidence = evidence;
    return counterfactual(scm, query);
}

void check_pmf(const Distribution& actual, const std::vector<std::pair<std::string, Rat>>& want,
               const std::string& what) {
    for (const auto& [label, mass] : actual.pmf) {
        Rat expected(0);
        for (const auto& [want_label, want_mass] : want) {
            if (want_label == label) expected = want_mass;
        }
        require(mass == expected, what + ": mass of " + label + " is " + mass.str() +
                                      ", expected " + expected.str());
    }
}

std::map<std::string, std::set<std::string>> values_by_source(const AugmentedDataset& dataset) {
    std::map<std::string, std::set<std::string>> result;
    for (const auto& record : dataset.augmented) result[record.source_x].insert(record.x_prime);
    return result;
}

constexpr std::uint64_t kModels = 200;

void criterion_appendix_exactness() {
    const Scm scm = build_linear_scm();
    const Assignment evidence = given("X", "1");

    check_pmf(run_counterfactual(scm, "X", "Z", "1", evidence),
              {{"1", Rat(1, 3)}, {"3", Rat(2, 3)}}, "P(X(Z=1)|X=1)");
    check_pmf(run_counterfactual(scm, "X", "Z", "-1", evidence),
              {{"-1", Rat(1, 3)}, {"1", Rat(2, 3)}}, "P(X(Z=-1)|X=1)");

    const MapContextResult guessed = map_context(scm, "Z", evidence);
    require(guessed.value == "-1" && !guessed.tie, "MAP context of X=1 must be Z=-1");

    check_pmf(guess_counterfactual(scm, "X", "Z", "1", evidence), {{"3", Rat(1)}},
              "guess P(X(Z=1)|X=1,Z=-1)");
    check_pmf(guess_counterfactual(scm, "X", "Z", "-1", evidence), {{"1", Rat(1)}},
              "guess P(X(Z=-1)|X=1,Z=-1)");
}

void criterion_strictness_witness() {
    const Scm scm = build_linear_scm();
    const Partition cf = partition_from(scm, counterfactual_constraints(scm, "X", "Z"));
    const Partition cda = partition_from(scm, guess_cda_constraints(scm, "X", "Z"));
    require(cf.classes == std::vector<std::vector<std::string>>{{"-3", "-1", "1", "3"}},
            "true-counterfactual partition must be the single class {-3,-1,1,3}");
    require(cda.classes == std::vector<std::vector<std::string>>{{"-3", "-1"}, {"1", "3"}},
            "guess partition must be {{-3,-1},{1,3}}");
    require(compare_partitions(cda, cf) == PartitionRelation::cda_strictly_finer,
            "verdict must be cda_strictly_finer");
}

void criterion_support_subset_property() {
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        const Scm scm = random_scm(seed);
        const std::string input = random_scm_input_var(scm);
        for (const auto& context : random_scm_context_vars(scm)) {
            const SupportSubsetResult result = check_support_subset(scm, input, context);
            if (!result.holds) {
                std::ostringstream witness;
                witness << "seed " << seed << " context " << context << " witness (x="
                        << result.witness->x << ", z=" << result.witness->z
                        << ", x'=" << result.witness->x_prime << ")";
                throw std::runtime_error("support subset violated: " + witness.str());
            }
            const Partition cf =
                partition_from(scm, counterfactual_constraints(scm, input, context));
            const Partition cda = partition_from(scm, guess_cda_constraints(scm, input, context));
            require(compare_partitions(cda, cf) != PartitionRelation::inconsistent,
                    "partitions inconsistent at seed " + std::to_string(seed));
        }
    }
}

void criterion_oracle_equivalence() {
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        const Scm scm = random_scm(seed);
        for (const auto& target : scm.variables) {
            if (target.kind != VarKind::endogenous) continue;
            for (const auto& evidence_value : marginal(scm, target.name).support()) {
                for (const auto& intervened : scm.variables) {
                    for (const auto& do_value : intervened.domain) {
                        CounterfactualQuery query;
                        query.target = target.name;
                        query.intervention.bind(intervened.name, do_value);
                        query.evidence = given(target.name, evidence_value);
                        const Distribution actual = counterfactual(scm, query);
                        for (const auto& [value, mass] : actual.pmf) {
                            const Rat expected = oracle::counterfactual_mass(
                                scm, target.name, value, {{intervened.name, do_value}},
                                {{target.name, evidence_value}});
                            require(mass == expected,
                                    "seed " + std::to_string(seed) + ": mismatch at " +
                                        target.name + "(" + intervened.name + "=" + do_value +
                                        ")|" + evidence_value + ", value " + value);
                        }
                    }
                }
            }
        }
    }
}

void criterion_review_augmentation_sets() {
    const Scm scm = build_review_scm();
    const std::vector<LabeledExample> spot = {{"good_1|positive", "helpful", 1}};

    const AugmentedDataset guess = guess_cda(scm, "X", "Y", "Z", spot);
    const AugmentedDataset full = full_cda(scm, "X", "Y", "Z", spot);

    std::set<std::string> guess_values;
    for (const auto& record : guess.augmented) {
        require(record.y == "helpful", "guess augmentation must preserve the label");
        guess_values.insert(record.x_prime);
    }
    require(guess_values == std::set<std::string>{"good_1|negative", "good_1|positive"},
            "guess augmentation must emit exactly {good_1|negative, good_1|positive}");

    std::set<std::string> full_values;
    for (const auto& record : full.augmented) {
        require(record.y == "helpful", "full augmentation must preserve the label");
        full_values.insert(record.x_prime);
    }
    require(full_values == std::set<std::string>{"good_1|negative", "good_1|neutral",
                                                 "good_1|positive"},
            "full augmentation must add good_1|neutral");
}

void criterion_posterior_completeness() {
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        const Scm scm = random_scm(seed);
        const std::string input = random_scm_input_var(scm);
        const std::string label = scm.variables.front().name;
        const std::string label_value = scm.variables.front().domain.front();
        std::vector<LabeledExample> data;
        for (const auto& x : marginal(scm, input).support()) data.push_back({x, label_value, 1});

        for (const auto& context : random_scm_context_vars(scm)) {
            const AugmentedDataset full = full_cda(scm, input, label, context, data);
            const AugmentedDataset tau0 = posterior_cda(scm, input, label, context, data);
            require(values_by_source(full) == values_by_source(tau0),
                    "tau=0 supports differ from full augmentation at seed " +
                        std::to_string(seed) + ", context " + context);
        }
    }

    const Scm review = build_review_scm();
    const std::vector<LabeledExample> spot = {{"good_1|positive", "helpful", 1}};
    ContextRule half;
    half.tau = Rat(1, 2);
    require(values_by_source(posterior_cda(review, "X", "Y", "Z", spot, half)) ==
                values_by_source(guess_cda(review, "X", "Y", "Z", spot)),
            "tau=1/2 must reproduce the guess augmentation set on the review example");
}

void criterion_ood_gap() {
    ReviewDemoParams params; // train_n = 500, seed = 0, test prior 1/10
    const ReviewDemoReport report = run_review_demo(params);
    require(report.failures.empty(),
            report.failures.empty() ? "" : "demo assertion: " + report.failures.front());
    const auto& rare = report.rare_context_absent;
    require(rare.full_eval.accuracy == Rat(1),
            "full-augmentation accuracy must be exactly 1, got " +
                rare.full_eval.accuracy.str());
    require(rare.guess_eval.accuracy == Rat(11, 20),
            "guess-augmentation accuracy must be exactly 11/20, got " +
                rare.guess_eval.accuracy.str());
    require(rare.accuracy_gap == Rat(9, 20),
            "accuracy gap must be exactly 9/20, got " + rare.accuracy_gap.str());
}

void criterion_sampling_soundness() {
    const Scm scm = build_review_scm();
    const std::vector<LabeledExample> spot = {{"good_1|positive", "helpful", 1}};

    const AugmentedDataset enumerated = full_cda(scm, "X", "Y", "Z", spot);
    // 5000 draws per context value, two context values: 10000 records.
    const AugmentedDataset sampled = full_cda(scm, "X", "Y", "Z", spot, DrawSpec{5000, 0});
    require(sampled.augmented.size() == 10000, "expected 10000 sampled records");

    // Exact pooled distribution: contexts contribute equally many draws.
    std::map<std::string, Rat> exact;
    std::set<std::string> support;
    for (const auto& record : enumerated.augmented) {
        exact[record.x_prime] += record.mass / Rat(2);
        support.insert(record.x_prime);
    }

    std::map<std::string, std::int64_t> counts;
    for (const auto& record : sampled.augmented) {
        require(support.contains(record.x_prime),
                "sampled value " + record.x_prime + " outside the enumerated support");
        counts[record.x_prime] += 1;
    }

    Rat tvd(0);
    for (const auto& [value, mass] : exact) {
        const Rat empirical(counts[value], 10000);
        tvd += abs(empirical - mass);
    }
    tvd /= Rat(2);
    require(tvd <= Rat(1, 50), "total variation distance " + tvd.str() + " exceeds 0.02");
}

} // namespace

int main() {
    Harness harness;
    harness.run(1, "linear-model counterfactual exactness", criterion_appendix_exactness);
    harness.run(2, "strictness witness partitions and verdict", criterion_strictness_witness);
    harness.run(3, "support-subset property on 200 seeded models",
                criterion_support_subset_property);
    harness.run(4, "oracle equivalence on 200 seeded models", criterion_oracle_equivalence);
    harness.run(5, "review augmentation sets with preserved labels",
                criterion_review_augmentation_sets);
    harness.run(6, "posterior-context completeness at tau 0 and tau 1/2",
                criterion_posterior_completeness);
    harness.run(7, "out-of-distribution gap by exact evaluation", criterion_ood_gap);
    harness.run(8, "sampling soundness over 10000 draws", criterion_sampling_soundness);

    if (harness.failed > 0) {
        std::printf("%d criterion(s) failed\n", harness.failed);
        return 1;
    }
    std::printf("all 8 criteria passed\n");
    return 0;
}
