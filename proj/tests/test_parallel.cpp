// The OpenMP kernels must be invisible in results: everything here runs
// each kernel under both policies and demands identical output.

#include "cfaudit/augment.hpp"
#include "cfaudit/classifier.hpp"
#include "cfaudit/errors.hpp"
#include "cfaudit/invariance.hpp"
#include "cfaudit/models.hpp"
#include "cfaudit/random_scm.hpp"
#include "cfaudit/scm.hpp"

#include <vector>

#include "doctest.h"

using namespace cfaudit;

TEST_CASE("world enumeration agrees across policies") {
    for (const Scm& scm : {build_linear_scm(), build_review_scm(), random_scm(5)}) {
        CHECK(enumerate_worlds(scm, Exec::serial) == enumerate_worlds(scm, Exec::parallel));
    }
}

TEST_CASE("constraint extraction and the support check agree across policies") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const Scm scm = random_scm(seed);
        const std::string input = random_scm_input_var(scm);
        for (const auto& context : random_scm_context_vars(scm)) {
            CHECK(counterfactual_constraints(scm, input, context, Exec::serial) ==
                  counterfactual_constraints(scm, input, context, Exec::parallel));
            CHECK(guess_cda_constraints(scm, input, context, Exec::serial) ==
                  guess_cda_constraints(scm, input, context, Exec::parallel));
            CHECK(check_support_subset(scm, input, context, Exec::serial) ==
                  check_support_subset(scm, input, context, Exec::parallel));
        }
    }
}

TEST_CASE("dataset sampling agrees across policies") {
    const Scm scm = build_review_scm();
    CHECK(sample_dataset(scm, "X", "Y", 500, 3, Exec::serial) ==
          sample_dataset(scm, "X", "Y", 500, 3, Exec::parallel));
}

TEST_CASE("augmentation agrees across policies in both draw modes") {
    const Scm scm = build_review_scm();
    const auto data = sample_dataset(scm, "X", "Y", 120, 9);

    const auto serial_enumerated = full_cda(scm, "X", "Y", "Z", data, {}, Exec::serial);
    const auto parallel_enumerated = full_cda(scm, "X", "Y", "Z", data, {}, Exec::parallel);
    CHECK(serial_enumerated.augmented == parallel_enumerated.augmented);

    const DrawSpec draw{3, 21};
    const auto serial_sampled = guess_cda(scm, "X", "Y", "Z", data, draw, Exec::serial);
    const auto parallel_sampled = guess_cda(scm, "X", "Y", "Z", data, draw, Exec::parallel);
    CHECK(serial_sampled.augmented == parallel_sampled.augmented);

    ContextRule rule;
    const auto serial_posterior = posterior_cda(scm, "X", "Y", "Z", data, rule, {}, Exec::serial);
    const auto parallel_posterior =
        posterior_cda(scm, "X", "Y", "Z", data, rule, {}, Exec::parallel);
    CHECK(serial_posterior.augmented == parallel_posterior.augmented);
}

TEST_CASE("sampled evaluation agrees across policies") {
    const Scm train_model = build_review_scm();
    const Scm test_model = build_review_scm(Rat(1, 10));

    Partition partition;
    partition.input_var = "X";
    std::vector<std::string> good_class;
    std::vector<std::string> poor_class;
    for (const auto& x : train_model.find_variable("X")->domain) {
        (x.starts_with("good_") ? good_class : poor_class).push_back(x);
    }
    partition.classes = {good_class, poor_class};
    const std::vector<LabeledExample> train = {
        {"good_1|positive", "helpful", 1},
        {"poor_1|negative", "not_helpful", 1},
    };
    const PartitionClassifier classifier =
        fit_partition_classifier(train_model, "Y", train, partition, Fallback::abstain);

    const OodReport serial = ood_eval(classifier, test_model, 1000, 17, Exec::serial);
    const OodReport parallel = ood_eval(classifier, test_model, 1000, 17, Exec::parallel);
    CHECK(serial.accuracy == parallel.accuracy);
    CHECK(serial.abstention_rate == parallel.abstention_rate);
}

TEST_CASE("parallel errors match the serial first failure") {
    const Scm certain = build_review_scm(Rat(1));
    std::vector<LabeledExample> data(64, LabeledExample{"good_1|positive", "helpful", 1});
    data[10] = {"good_1|neutral", "helpful", 1}; // zero-probability input
    data[40] = {"poor_1|neutral", "not_helpful", 1};

    std::string serial_message;
    std::string parallel_message;
    try {
        guess_cda(certain, "X", "Y", "Z", data, {}, Exec::serial);
    } catch (const QueryError& error) {
        serial_message = error.what();
    }
    try {
        guess_cda(certain, "X", "Y", "Z", data, {}, Exec::parallel);
    } catch (const QueryError& error) {
        parallel_message = error.what();
    }
    CHECK(serial_message == parallel_message);
    CHECK(serial_message.find("example 10") != std::string::npos);
}
