#include "cfaudit/classifier.hpp"

#include "cfaudit/errors.hpp"
#include "cfaudit/rng.hpp"
#include "compiled.hpp"

#include <algorithm>
#include <map>

namespace cfaudit {

namespace {

std::optional<std::size_t> class_of(const Partition& partition, std::string_view x) {
    for (std::size_t c = 0; c < partition.classes.size(); ++c) {
        for (const auto& member : partition.classes[c]) {
            if (member == x) return c;
        }
    }
    return std::nullopt;
}

/// Majority label among weighted counts; ties break to the earliest label
/// in canonical order.
std::pair<std::optional<std::string>, bool> majority(const std::vector<std::string>& label_domain,
                                                     const std::map<std::string, std::int64_t>& counts) {
    std::optional<std::string> best;
    std::int64_t best_count = 0;
    bool tie = false;
    for (const auto& label : label_domain) {
        const auto it = counts.find(label);
        if (it == counts.end()) continue;
        if (!best.has_value() || it->second > best_count) {
            best = label;
            best_count = it->second;
            tie = false;
        } else if (it->second == best_count) {
            tie = true;
        }
    }
    return {best, tie};
}

} // namespace

std::optional<std::string> PartitionClassifier::classify(std::string_view x) const {
    const auto fall_back = [this]() -> std::optional<std::string> {
        if (fallback == Fallback::majority_global) return global_majority;
        return std::nullopt;
    };
    const auto cls = class_of(partition, x);
    if (!cls.has_value()) return fall_back();
    if (!class_labels[*cls].has_value()) return fall_back();
    return class_labels[*cls];
}

PartitionClassifier fit_partition_classifier(const Scm& scm, std::string_view label_var,
                                             std::span<const LabeledExample> train,
                                             Partition partition, Fallback fallback) {
    const detail::Compiled model(scm);
    const int input = model.var(partition.input_var);
    const int label = model.var(label_var);

    PartitionClassifier classifier;
    classifier.label_var = std::string(label_var);
    classifier.input_domain = scm.variables[input].domain;
    classifier.label_domain = scm.variables[label].domain;
    classifier.fallback = fallback;

    std::vector<std::map<std::string, std::int64_t>> counts(partition.classes.size());
    std::map<std::string, std::int64_t> global_counts;
    for (const auto& example : train) {
        model.value(input, example.x);
        model.value(label, example.y);
        const auto cls = class_of(partition, example.x);
        if (!cls.has_value()) {
            throw QueryError("training example (x=" + example.x + ", y=" + example.y +
                             ") is not covered by the partition");
        }
        counts[*cls][example.y] += example.weight;
        global_counts[example.y] += example.weight;
    }

    classifier.class_labels.resize(partition.classes.size());
    classifier.class_tie.assign(partition.classes.size(), false);
    for (std::size_t c = 0; c < partition.classes.size(); ++c) {
        const auto [best, tie] = majority(classifier.label_domain, counts[c]);
        classifier.class_labels[c] = best;
        classifier.class_tie[c] = tie;
    }
    const auto [global_best, global_tie] = majority(classifier.label_domain, global_counts);
    classifier.global_majority = global_best;
    classifier.global_tie = global_tie;
    classifier.partition = std::move(partition);
    return classifier;
}

namespace {

struct EvalAccumulator {
    std::map<std::string, ClassStats> per_class;
    Rat correct;
    Rat abstained;
    Rat total;

    void add(const PartitionClassifier& classifier, const std::string& x, const std::string& y,
             const Rat& mass) {
        const auto cls = class_of(classifier.partition, x);
        const std::string key = cls.has_value() ? classifier.partition.classes[*cls].front()
                                                : std::string("(unassigned)");
        ClassStats& stats = per_class[key];
        if (stats.key.empty()) {
            stats.key = key;
            if (cls.has_value()) stats.label = classifier.class_labels[*cls];
        }
        stats.mass += mass;
        total += mass;

        const std::optional<std::string> predicted = classifier.classify(x);
        if (!predicted.has_value()) {
            stats.abstained += mass;
            abstained += mass;
        } else if (*predicted == y) {
            stats.correct += mass;
            correct += mass;
        }
    }

    OodReport report() const {
        OodReport result;
        result.accuracy = total.is_zero() ? Rat(0) : correct / total;
        result.abstention_rate = total.is_zero() ? Rat(0) : abstained / total;
        for (const auto& [_, stats] : per_class) result.per_class.push_back(stats);
        return result;
    }
};

void check_domains(const PartitionClassifier& classifier, const detail::Compiled& model,
                   int input, int label) {
    if (model.scm().variables[input].domain != classifier.input_domain) {
        throw QueryError("test model domain of '" + classifier.partition.input_var +
                         "' differs from the training model's");
    }
    if (model.scm().variables[label].domain != classifier.label_domain) {
        throw QueryError("test model domain of '" + classifier.label_var +
                         "' differs from the training model's");
    }
}

} // namespace

OodReport ood_eval(const PartitionClassifier& classifier, const Scm& scm_test, std::int64_t n,
                   std::uint64_t seed, Exec exec) {
    if (n < 1) throw QueryError("evaluation size must be at least 1, got " + std::to_string(n));
    const detail::Compiled model(scm_test);
    const int input = model.var(classifier.partition.input_var);
    const int label = model.var(classifier.label_var);
    check_domains(classifier, model, input, label);

    std::vector<std::pair<std::string, std::string>> drawn(static_cast<std::size_t>(n));
    for_each_index(exec, static_cast<std::size_t>(n), [&](std::size_t i) {
        SplitMix64 stream = make_stream(seed, i);
        std::vector<int> values(static_cast<std::size_t>(model.n_vars()), 0);
        for (const int var : model.exogenous_vars()) {
            values[var] = static_cast<int>(draw_index(stream, model.prior(var)));
        }
        model.propagate(values);
        drawn[i] = {model.label(input, values[input]), model.label(label, values[label])};
    });

    EvalAccumulator accumulator;
    for (const auto& [x, y] : drawn) accumulator.add(classifier, x, y, Rat(1, n));
    OodReport report = accumulator.report();
    report.exact = false;
    report.n = n;
    return report;
}

OodReport ood_eval_exact(const PartitionClassifier& classifier, const Scm& scm_test) {
    const detail::Compiled model(scm_test);
    const int input = model.var(classifier.partition.input_var);
    const int label = model.var(classifier.label_var);
    check_domains(classifier, model, input, label);

    const detail::WorldTable worlds = detail::enumerate(model);
    EvalAccumulator accumulator;
    for (std::size_t i = 0; i < worlds.size(); ++i) {
        if (worlds.mass[i].is_zero()) continue;
        accumulator.add(classifier, model.label(input, worlds.values[i][input]),
                        model.label(label, worlds.values[i][label]), worlds.mass[i]);
    }
    OodReport report = accumulator.report();
    report.exact = true;
    return report;
}

} // namespace cfaudit
