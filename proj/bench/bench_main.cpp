// Times the serial reference implementation of each data-parallel kernel
// against its OpenMP version and verifies that both produce identical
// results. Sizes are scaled up from the desk-scale defaults so the
// comparison measures something.

#include "cfaudit/augment.hpp"
#include "cfaudit/classifier.hpp"
#include "cfaudit/exec.hpp"
#include "cfaudit/invariance.hpp"
#include "cfaudit/models.hpp"
#include "cfaudit/random_scm.hpp"
#include "cfaudit/scm.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>

namespace {

using namespace cfaudit;

double time_best_of(int reps, const std::function<void()>& body) {
    double best = 1e100;
    for (int r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        body();
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        if (ms < best) best = ms;
    }
    return best;
}

int g_mismatches = 0;

template <typename Fn>
void bench(const char* name, Fn&& kernel) {
    using Result = decltype(kernel(Exec::serial));
    const Result serial_result = kernel(Exec::serial);
    const Result parallel_result = kernel(Exec::parallel);
    const bool equal = serial_result == parallel_result;
    if (!equal) ++g_mismatches;

    const double serial_ms = time_best_of(3, [&] { (void)kernel(Exec::serial); });
    const double parallel_ms = time_best_of(3, [&] { (void)kernel(Exec::parallel); });
    std::printf("%-28s %10.2f ms %10.2f ms   x%-6.2f %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, equal ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    int scale = 1;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--large") == 0) scale = 4;
    }

    std::printf("threads: %d\n", hardware_threads());
    std::printf("%-28s %13s %13s   %-7s %s\n", "kernel", "serial", "parallel", "speedup",
                "results");

    // A wide exogenous space: world enumeration dominates.
    RandomScmParams wide;
    wide.min_exogenous = wide.max_exogenous = 13;
    wide.min_endogenous = wide.max_endogenous = 4;
    wide.min_domain = wide.max_domain = 2;
    const Scm wide_model = random_scm(1, wide);
    bench("enumerate_worlds (8k)", [&](Exec exec) { return enumerate_worlds(wide_model, exec); });

    // Larger domains: the audit fans out over observed input values.
    RandomScmParams audit_shape;
    audit_shape.min_exogenous = audit_shape.max_exogenous = 9;
    audit_shape.min_endogenous = audit_shape.max_endogenous = 3;
    audit_shape.min_domain = audit_shape.max_domain = 4;
    const Scm audit_model = random_scm(2, audit_shape);
    const std::string input = random_scm_input_var(audit_model);
    const std::string context = random_scm_context_vars(audit_model).front();
    bench("audit constraints", [&](Exec exec) {
        return std::pair(counterfactual_constraints(audit_model, input, context, exec),
                         guess_cda_constraints(audit_model, input, context, exec));
    });
    bench("support subset check", [&](Exec exec) {
        return check_support_subset(audit_model, input, context, exec);
    });

    const Scm review = build_review_scm();
    bench("sample_dataset (100k)", [&](Exec exec) {
        return sample_dataset(review, "X", "Y", 100'000 * scale, 7, exec);
    });

    const auto data = sample_dataset(review, "X", "Y", 3'000 * scale, 7);
    bench("full_cda (3k examples)", [&](Exec exec) {
        return full_cda(review, "X", "Y", "Z", data, {}, exec).augmented;
    });
    bench("guess_cda sampled", [&](Exec exec) {
        return guess_cda(review, "X", "Y", "Z", data, DrawSpec{2, 5}, exec).augmented;
    });

    Partition partition;
    partition.input_var = "X";
    partition.classes = {{}, {}};
    for (const auto& x : review.find_variable("X")->domain) {
        partition.classes[x.starts_with("good_") ? 0 : 1].push_back(x);
    }
    const std::vector<LabeledExample> train = {
        {"good_1|positive", "helpful", 1},
        {"poor_1|negative", "not_helpful", 1},
    };
    const PartitionClassifier classifier =
        fit_partition_classifier(review, "Y", train, partition, Fallback::abstain);
    const Scm test_model = build_review_scm(Rat(1, 10));
    bench("ood_eval sampled (100k)", [&](Exec exec) {
        const OodReport report = ood_eval(classifier, test_model, 100'000 * scale, 11, exec);
        return std::pair(report.accuracy, report.abstention_rate);
    });

    if (g_mismatches > 0) {
        std::printf("%d kernel(s) diverged between policies\n", g_mismatches);
        return 1;
    }
    return 0;
}
