#ifndef CFAUDIT_CLASSIFIER_HPP
#define CFAUDIT_CLASSIFIER_HPP

#include "cfaudit/augment.hpp"
#include "cfaudit/exec.hpp"
#include "cfaudit/invariance.hpp"
#include "cfaudit/rational.hpp"
#include "cfaudit/scm.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfaudit {

enum class Fallback { abstain, majority_global };

/**
 * Deterministic classifier that can only see the partition class of its
 * input: every class maps to the weighted majority label of the training
 * examples it contains. Inputs in unlabeled classes, or outside every
 * class, resolve through the fallback. Exact and optimization-free, so
 * accuracy differences trace back to the partitions alone.
 */
struct PartitionClassifier {
    Partition partition;
    std::string label_var;
    std::vector<std::string> input_domain; // copied from the training model
    std::vector<std::string> label_domain;
    std::vector<std::optional<std::string>> class_labels; // one per class
    std::vector<bool> class_tie;                          // majority was a tie
    Fallback fallback = Fallback::abstain;
    std::optional<std::string> global_majority;
    bool global_tie = false;

    /// Predicted label, or nullopt for abstain.
    std::optional<std::string> classify(std::string_view x) const;
};

/**
 * Fits class labels by weighted majority vote. Ties break to the label
 * earliest in canonical domain order and set the class's tie flag.
 * Every training x must belong to some class. classes without training
 * examples stay unlabeled and resolve by fallback at prediction time.
 */
PartitionClassifier fit_partition_classifier(const Scm& scm, std::string_view label_var,
                                             std::span<const LabeledExample> train,
                                             Partition partition, Fallback fallback);

struct ClassStats {
    std::string key; // least member of the class, or "(unassigned)"
    std::optional<std::string> label;
    Rat mass;
    Rat correct;
    Rat abstained;
};

/**
 * Evaluation report. For sampled evaluation the rationals are exact
 * counts over n; for expectation-based evaluation they are exact
 * probabilities under the test model. Abstentions count as errors in
 * `accuracy` and are also reported separately.
 */
struct OodReport {
    bool exact = false;
    std::int64_t n = 0; // draws (sampled evaluation only)
    Rat accuracy;
    Rat abstention_rate;
    std::vector<ClassStats> per_class;
};

/**
 * Scores the classifier on n seeded draws from the test model. The test
 * model must carry the classifier's input and label variables with
 * identical domains; otherwise QueryError.
 */
OodReport ood_eval(const PartitionClassifier& classifier, const Scm& scm_test, std::int64_t n,
                   std::uint64_t seed, Exec exec = Exec::serial);

/// Scores the classifier in exact expectation over the test model (no
/// sampling): accuracy is the exact probability of a correct prediction.
OodReport ood_eval_exact(const PartitionClassifier& classifier, const Scm& scm_test);

} // namespace cfaudit

#endif
