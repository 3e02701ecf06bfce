#ifndef CFAUDIT_DEMOS_HPP
#define CFAUDIT_DEMOS_HPP

#include "cfaudit/augment.hpp"
#include "cfaudit/classifier.hpp"
#include "cfaudit/distribution.hpp"
#include "cfaudit/inference.hpp"
#include "cfaudit/invariance.hpp"
#include "cfaudit/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cfaudit {

/**
 * End-to-end audit of the linear model with every intermediate quantity:
 * the MAP context and both families of counterfactual distributions per
 * observed input value, both constraint sets and partitions, the
 * support-subset check, and the comparison verdict. `failures` lists
 * every internal assertion that did not hold (empty on a correct build).
 */
struct AppendixDemoReport {
    struct PerInput {
        std::string x;
        std::string map_context;
        bool map_tie = false;
        Distribution context_posterior;
        // (intervened context value, resulting pmf of the input variable)
        std::vector<std::pair<std::string, Distribution>> counterfactuals;
        std::vector<std::pair<std::string, Distribution>> guess_counterfactuals;
    };

    Distribution input_marginal;
    std::vector<PerInput> per_input;
    ConstraintSet cf_constraints;
    ConstraintSet cda_constraints;
    Partition cf_partition;
    Partition cda_partition;
    SupportSubsetResult support_subset;
    PartitionRelation verdict = PartitionRelation::equal;
    std::vector<std::string> failures;
};

AppendixDemoReport run_appendix_demo();

struct ReviewDemoParams {
    std::int64_t train_n = 500;
    std::uint64_t seed = 0;
    Rat test_prior_ux = Rat(1, 10); // P(straightforward reviewer) at test time
};

/**
 * The review-classification demonstration: training data sampled from the
 * bundled review model, augmented by the guessing and the true scheme,
 * dataset-level induced partitions, partition classifiers, and exact
 * out-of-distribution evaluation on a test model with a shifted
 * reviewer-type prior. Runs twice: on the sample as drawn, and on a
 * rare-context-absent variant with the neutral-tone examples removed,
 * which is exactly where the guessing scheme's missing constraints bite.
 */
struct ReviewDemoReport {
    struct Spotlight {
        LabeledExample example;
        std::vector<AugmentedExample> guess_records;
        std::vector<AugmentedExample> full_records;
        std::vector<std::string> guess_values; // distinct augmented inputs
        std::vector<std::string> full_values;
    };

    struct Variant {
        std::string name;
        std::int64_t train_count = 0;
        std::map<std::string, std::int64_t> train_histogram;
        Partition guess_partition;
        Partition full_partition;
        OodReport guess_eval; // exact expectation over the test model
        OodReport full_eval;
        Rat accuracy_gap; // full accuracy - guess accuracy
    };

    ReviewDemoParams params;
    Rat expected_neutral_mass; // P(neutral tone) under the test model
    Spotlight spotlight;
    Variant unfiltered;
    Variant rare_context_absent;
    std::vector<std::string> failures;
};

ReviewDemoReport run_review_demo(const ReviewDemoParams& params = {});

} // namespace cfaudit

#endif
