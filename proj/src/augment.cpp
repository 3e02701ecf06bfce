#include "cfaudit/augment.hpp"

#include "cfaudit/errors.hpp"
#include "cfaudit/rng.hpp"
#include "compiled.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cfaudit {

std::string_view to_string(AugMode mode) {
    switch (mode) {
    case AugMode::full: return "full";
    case AugMode::guess: return "guess";
    case AugMode::posterior: return "posterior";
    }
    return "unknown";
}

AugMode aug_mode_from(std::string_view name) {
    if (name == "full") return AugMode::full;
    if (name == "guess") return AugMode::guess;
    if (name == "posterior") return AugMode::posterior;
    throw ParseError("unknown augmentation mode '" + std::string(name) +
                     "' (expected full, guess, or posterior)");
}

std::vector<LabeledExample> sample_dataset(const Scm& scm, std::string_view input_var,
                                           std::string_view label_var, std::int64_t n,
                                           std::uint64_t seed, Exec exec) {
    if (n < 1) throw QueryError("dataset size must be at least 1, got " + std::to_string(n));

    const detail::Compiled model(scm);
    const int input = model.var(input_var);
    const int label = model.var(label_var);

    std::vector<LabeledExample> data(static_cast<std::size_t>(n));
    for_each_index(exec, static_cast<std::size_t>(n), [&](std::size_t i) {
        SplitMix64 stream = make_stream(seed, i);
        std::vector<int> values(static_cast<std::size_t>(model.n_vars()), 0);
        for (const int var : model.exogenous_vars()) {
            values[var] = static_cast<int>(draw_index(stream, model.prior(var)));
        }
        model.propagate(values);
        data[i] = LabeledExample{model.label(input, values[input]),
                                 model.label(label, values[label]), 1};
    });
    return data;
}

namespace {

struct AugmentJob {
    const detail::Compiled& model;
    const detail::WorldTable& worlds;
    int input;
    int label;
    int context;
};

/// Emits one distribution's worth of records: the whole support with
/// exact masses, or `draws` sampled values (mass = mass of the draw).
void emit(const AugmentJob& job, const std::vector<Rat>& pmf, const LabeledExample& source,
          int intervened_z, AugMode mode, const std::optional<std::string>& context_used,
          const std::optional<DrawSpec>& draw, SplitMix64* stream,
          std::vector<AugmentedExample>& out) {
    const auto record = [&](std::size_t value) {
        out.push_back(AugmentedExample{
            job.model.label(job.input, static_cast<int>(value)),
            source.y,
            source.x,
            job.model.label(job.context, intervened_z),
            mode,
            context_used,
            pmf[value],
        });
    };
    if (draw.has_value()) {
        for (int d = 0; d < draw->draws; ++d) record(draw_index(*stream, pmf));
    } else {
        for (std::size_t v = 0; v < pmf.size(); ++v) {
            if (pmf[v].positive()) record(v);
        }
    }
}

/// Checks example validity against the model; the marginal is shared
/// across examples so zero-probability inputs are detected exactly.
void check_example(const AugmentJob& job, const std::vector<Rat>& input_marginal,
                   const LabeledExample& example, std::size_t index) {
    const auto describe = [&] {
        return "example " + std::to_string(index) + " (x=" + example.x + ", y=" + example.y + ")";
    };
    if (example.weight < 1) {
        throw QueryError(describe() + " has non-positive weight");
    }
    const int x = job.model.value(job.input, example.x);  // throws if outside the domain
    job.model.value(job.label, example.y);
    if (!input_marginal[x].positive()) {
        throw QueryError(describe() + " is outside the model support");
    }
}

AugmentedDataset run_augmentation(const Scm& scm, std::string_view input_var,
                                  std::string_view label_var, std::string_view context_var,
                                  std::span<const LabeledExample> data, AugMode mode,
                                  const ContextRule& rule, const std::optional<DrawSpec>& draw,
                                  Exec exec) {
    const detail::Compiled model(scm);
    const detail::WorldTable worlds = detail::enumerate(model);
    const AugmentJob job{
        model,
        worlds,
        model.var(input_var),
        model.var(label_var),
        model.var(context_var),
    };
    if (model.kind(job.input) != VarKind::endogenous) {
        throw QueryError("input variable '" + std::string(input_var) + "' must be endogenous");
    }
    if (mode == AugMode::posterior && (rule.tau < Rat(0) || rule.tau >= Rat(1))) {
        throw QueryError("context threshold must lie in [0, 1), got " + rule.tau.str());
    }

    std::vector<Rat> input_marginal(static_cast<std::size_t>(model.domain_size(job.input)),
                                    Rat(0));
    for (std::size_t i = 0; i < worlds.size(); ++i) {
        input_marginal[worlds.values[i][job.input]] += worlds.mass[i];
    }
    const std::vector<int> supp_z = detail::support_ids(model, worlds, job.context);

    // Validate serially first so the parallel loop cannot throw and the
    // first bad record is always the one reported.
    for (std::size_t i = 0; i < data.size(); ++i) {
        check_example(job, input_marginal, data[i], i);
    }

    AugmentedDataset dataset;
    dataset.input_var = std::string(input_var);
    dataset.label_var = std::string(label_var);
    dataset.context_var = std::string(context_var);
    dataset.mode = mode;
    dataset.tau = rule.tau;
    dataset.draw = draw;
    dataset.context_draw = rule.draw;
    dataset.originals.assign(data.begin(), data.end());

    // Contexts with posterior mass above tau carry a "no admissible
    // context" error; detect it serially before the parallel loop.
    std::vector<std::vector<AugmentedExample>> per_example(data.size());
    std::vector<std::string> no_context_error(data.size());

    for_each_index(exec, data.size(), [&](std::size_t i) {
        const LabeledExample& example = data[i];
        const int x = job.model.value(job.input, example.x);
        const std::vector<std::pair<int, int>> evidence{{job.input, x}};
        SplitMix64 stream = make_stream(draw.has_value() ? draw->seed : 0, i);
        auto& out = per_example[i];

        switch (mode) {
        case AugMode::guess: {
            const detail::MapValue guessed =
                detail::map_value(model, worlds, job.context, evidence);
            std::vector<std::pair<int, int>> extended = evidence;
            extended.emplace_back(job.context, guessed.value);
            std::sort(extended.begin(), extended.end());
            const std::string context_used = model.label(job.context, guessed.value);
            for (const int z : supp_z) {
                const std::pair<int, int> intervention{job.context, z};
                const std::vector<Rat> pmf = detail::counterfactual_pmf(
                    model, worlds, job.input, std::span(&intervention, 1), extended);
                emit(job, pmf, example, z, mode, context_used, draw, &stream, out);
            }
            break;
        }
        case AugMode::full: {
            for (const int z : supp_z) {
                const std::pair<int, int> intervention{job.context, z};
                const std::vector<Rat> pmf = detail::counterfactual_pmf(
                    model, worlds, job.input, std::span(&intervention, 1), evidence);
                emit(job, pmf, example, z, mode, std::nullopt, draw, &stream, out);
            }
            break;
        }
        case AugMode::posterior: {
            const std::vector<Rat> context_posterior =
                detail::posterior_pmf(model, worlds, job.context, evidence);
            std::vector<int> contexts;
            if (rule.draw.has_value()) {
                SplitMix64 context_stream = make_stream(rule.draw->seed, i);
                for (int d = 0; d < rule.draw->draws; ++d) {
                    contexts.push_back(
                        static_cast<int>(draw_index(context_stream, context_posterior)));
                }
            } else {
                for (std::size_t z = 0; z < context_posterior.size(); ++z) {
                    if (context_posterior[z] > rule.tau) contexts.push_back(static_cast<int>(z));
                }
                if (contexts.empty()) {
                    no_context_error[i] = "no admissible context for example " +
                                          std::to_string(i) + " (x=" + example.x +
                                          "): no posterior mass above " + rule.tau.str();
                    return;
                }
            }
            for (const int context_value : contexts) {
                std::vector<std::pair<int, int>> extended = evidence;
                extended.emplace_back(job.context, context_value);
                std::sort(extended.begin(), extended.end());
                const std::string context_used = model.label(job.context, context_value);
                for (const int z : supp_z) {
                    const std::pair<int, int> intervention{job.context, z};
                    const std::vector<Rat> pmf = detail::counterfactual_pmf(
                        model, worlds, job.input, std::span(&intervention, 1), extended);
                    emit(job, pmf, example, z, mode, context_used, draw, &stream, out);
                }
            }
            break;
        }
        }
    });

    for (const auto& error : no_context_error) {
        if (!error.empty()) throw QueryError(error);
    }
    for (auto& out : per_example) {
        dataset.augmented.insert(dataset.augmented.end(), std::make_move_iterator(out.begin()),
                                 std::make_move_iterator(out.end()));
    }
    return dataset;
}

} // namespace

AugmentedDataset guess_cda(const Scm& scm, std::string_view input_var, std::string_view label_var,
                           std::string_view context_var, std::span<const LabeledExample> data,
                           std::optional<DrawSpec> draw, Exec exec) {
    return run_augmentation(scm, input_var, label_var, context_var, data, AugMode::guess, {},
                            draw, exec);
}

AugmentedDataset full_cda(const Scm& scm, std::string_view input_var, std::string_view label_var,
                          std::string_view context_var, std::span<const LabeledExample> data,
                          std::optional<DrawSpec> draw, Exec exec) {
    return run_augmentation(scm, input_var, label_var, context_var, data, AugMode::full, {}, draw,
                            exec);
}

AugmentedDataset posterior_cda(const Scm& scm, std::string_view input_var,
                               std::string_view label_var, std::string_view context_var,
                               std::span<const LabeledExample> data, const ContextRule& rule,
                               std::optional<DrawSpec> draw, Exec exec) {
    return run_augmentation(scm, input_var, label_var, context_var, data, AugMode::posterior,
                            rule, draw, exec);
}

ConstraintSet induced_constraints(const AugmentedDataset& dataset) {
    std::map<std::string, std::set<std::string>> peers_of;
    for (const auto& record : dataset.augmented) {
        peers_of[record.source_x].insert(record.x_prime);
    }

    ConstraintSet result;
    result.input_var = dataset.input_var;
    for (const auto& [x, peers] : peers_of) {
        Constraint constraint;
        constraint.x = x;
        constraint.peers.assign(peers.begin(), peers.end());
        result.constraints.push_back(std::move(constraint));
    }
    return result;
}

std::vector<std::string> dataset_values(const Scm& scm, const AugmentedDataset& dataset) {
    const detail::Compiled model(scm);
    const int input = model.var(dataset.input_var);
    std::set<int> ids;
    for (const auto& example : dataset.originals) {
        ids.insert(model.value(input, example.x));
    }
    for (const auto& record : dataset.augmented) {
        ids.insert(model.value(input, record.x_prime));
        ids.insert(model.value(input, record.source_x));
    }
    std::vector<std::string> values;
    values.reserve(ids.size());
    for (const int id : ids) values.push_back(model.label(input, id));
    return values;
}

} // namespace cfaudit
