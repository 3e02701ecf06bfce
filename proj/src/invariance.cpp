#include "cfaudit/invariance.hpp"

#include "cfaudit/errors.hpp"
#include "compiled.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace cfaudit {

namespace {

/// Plain union-find over dense value ids.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    void merge(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

enum class PeerSource { true_counterfactual, guessed_context };

/**
 * Shared loop of the two constraint extractions and the support-subset
 * check: for each x in supp(input) and z in supp(context), the support of
 * the chosen counterfactual distribution. Worlds are enumerated once; the
 * per-x work is independent, so it parallelizes over x.
 */
std::vector<std::vector<std::vector<int>>> counterfactual_supports(
    const detail::Compiled& model, const detail::WorldTable& worlds, int input, int context,
    std::span<const int> supp_x, std::span<const int> supp_z, PeerSource source, Exec exec) {
    std::vector<std::vector<std::vector<int>>> supports(supp_x.size());
    for_each_index(exec, supp_x.size(), [&](std::size_t xi) {
        const int x = supp_x[xi];
        std::vector<std::pair<int, int>> evidence{{input, x}};
        if (source == PeerSource::guessed_context) {
            const detail::MapValue guessed = detail::map_value(model, worlds, context, evidence);
            evidence.emplace_back(context, guessed.value);
            std::sort(evidence.begin(), evidence.end());
        }
        supports[xi].reserve(supp_z.size());
        for (const int z : supp_z) {
            const std::pair<int, int> intervention{context, z};
            const std::vector<Rat> pmf = detail::counterfactual_pmf(
                model, worlds, input, std::span(&intervention, 1), evidence);
            std::vector<int> support;
            for (std::size_t v = 0; v < pmf.size(); ++v) {
                if (pmf[v].positive()) support.push_back(static_cast<int>(v));
            }
            supports[xi].push_back(std::move(support));
        }
    });
    return supports;
}

ConstraintSet extract_constraints(const Scm& scm, std::string_view input_var,
                                  std::string_view context_var, PeerSource source, Exec exec) {
    const detail::Compiled model(scm);
    const detail::WorldTable worlds = detail::enumerate(model);
    const int input = model.var(input_var);
    const int context = model.var(context_var);
    if (model.kind(input) != VarKind::endogenous) {
        throw QueryError("input variable '" + std::string(input_var) + "' must be endogenous");
    }

    const std::vector<int> supp_x = detail::support_ids(model, worlds, input);
    const std::vector<int> supp_z = detail::support_ids(model, worlds, context);

    const auto supports =
        counterfactual_supports(model, worlds, input, context, supp_x, supp_z, source, exec);

    ConstraintSet result;
    result.input_var = std::string(input_var);
    for (std::size_t xi = 0; xi < supp_x.size(); ++xi) {
        std::set<int> peer_ids;
        for (const auto& support : supports[xi]) peer_ids.insert(support.begin(), support.end());
        Constraint constraint;
        constraint.x = model.label(input, supp_x[xi]);
        for (const int peer : peer_ids) constraint.peers.push_back(model.label(input, peer));
        result.constraints.push_back(std::move(constraint));
    }
    return result;
}

} // namespace

ConstraintSet counterfactual_constraints(const Scm& scm, std::string_view input_var,
                                         std::string_view context_var, Exec exec) {
    return extract_constraints(scm, input_var, context_var, PeerSource::true_counterfactual, exec);
}

ConstraintSet guess_cda_constraints(const Scm& scm, std::string_view input_var,
                                    std::string_view context_var, Exec exec) {
    return extract_constraints(scm, input_var, context_var, PeerSource::guessed_context, exec);
}

namespace {

Partition close_constraints(const detail::Compiled& model, const ConstraintSet& constraints,
                            const std::vector<int>& report_ids) {
    const int input = model.var(constraints.input_var);
    const auto n = static_cast<std::size_t>(model.domain_size(input));

    // Merge over the whole domain: constraints may route through values
    // outside the reporting set, and a single representation must satisfy
    // all of them at once.
    UnionFind components(n);
    for (const auto& constraint : constraints.constraints) {
        const int x = model.value(input, constraint.x);
        for (const auto& peer : constraint.peers) {
            components.merge(x, model.value(input, peer));
        }
    }

    std::map<std::size_t, std::vector<int>> classes;
    for (const int id : report_ids) {
        classes[components.find(static_cast<std::size_t>(id))].push_back(id);
    }

    Partition partition;
    partition.input_var = constraints.input_var;
    std::vector<std::vector<int>> ordered;
    ordered.reserve(classes.size());
    for (auto& [_, members] : classes) {
        std::sort(members.begin(), members.end());
        ordered.push_back(std::move(members));
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    for (const auto& members : ordered) {
        std::vector<std::string> labels;
        labels.reserve(members.size());
        for (const int id : members) labels.push_back(model.label(input, id));
        partition.classes.push_back(std::move(labels));
    }
    return partition;
}

} // namespace

Partition partition_from(const Scm& scm, const ConstraintSet& constraints) {
    const detail::Compiled model(scm);
    const detail::WorldTable worlds = detail::enumerate(model);
    const int input = model.var(constraints.input_var);
    return close_constraints(model, constraints, detail::support_ids(model, worlds, input));
}

Partition partition_from(const Scm& scm, const ConstraintSet& constraints,
                         std::span<const std::string> report_values) {
    const detail::Compiled model(scm);
    const int input = model.var(constraints.input_var);
    std::set<int> ids;
    for (const auto& value : report_values) ids.insert(model.value(input, value));
    return close_constraints(model, constraints, std::vector<int>(ids.begin(), ids.end()));
}

SupportSubsetResult check_support_subset(const Scm& scm, std::string_view input_var,
                                         std::string_view context_var, Exec exec) {
    const detail::Compiled model(scm);
    const detail::WorldTable worlds = detail::enumerate(model);
    const int input = model.var(input_var);
    const int context = model.var(context_var);
    if (model.kind(input) != VarKind::endogenous) {
        throw QueryError("input variable '" + std::string(input_var) + "' must be endogenous");
    }

    const std::vector<int> supp_x = detail::support_ids(model, worlds, input);
    const std::vector<int> supp_z = detail::support_ids(model, worlds, context);

    const auto true_supports = counterfactual_supports(
        model, worlds, input, context, supp_x, supp_z, PeerSource::true_counterfactual, exec);
    const auto guess_supports = counterfactual_supports(
        model, worlds, input, context, supp_x, supp_z, PeerSource::guessed_context, exec);

    for (std::size_t xi = 0; xi < supp_x.size(); ++xi) {
        for (std::size_t zi = 0; zi < supp_z.size(); ++zi) {
            const auto& true_support = true_supports[xi][zi];
            for (const int v : guess_supports[xi][zi]) {
                if (!std::binary_search(true_support.begin(), true_support.end(), v)) {
                    SupportSubsetResult result;
                    result.holds = false;
                    result.witness = SupportSubsetWitness{
                        model.label(input, supp_x[xi]),
                        model.label(context, supp_z[zi]),
                        model.label(input, v),
                    };
                    return result;
                }
            }
        }
    }
    return SupportSubsetResult{true, std::nullopt};
}

std::string_view to_string(PartitionRelation relation) {
    switch (relation) {
    case PartitionRelation::equal: return "equal";
    case PartitionRelation::cda_strictly_finer: return "cda_strictly_finer";
    case PartitionRelation::inconsistent: return "inconsistent";
    }
    return "unknown";
}

PartitionRelation compare_partitions(const Partition& cda, const Partition& cf) {
    if (cda.input_var != cf.input_var) {
        throw QueryError("cannot compare partitions of '" + cda.input_var + "' and '" +
                         cf.input_var + "'");
    }

    std::set<std::string> cda_values;
    for (const auto& members : cda.classes) cda_values.insert(members.begin(), members.end());
    std::set<std::string> cf_values;
    for (const auto& members : cf.classes) cf_values.insert(members.begin(), members.end());
    if (cda_values != cf_values) {
        throw QueryError("partitions of '" + cda.input_var + "' cover different supports");
    }

    std::map<std::string, std::size_t> cf_class_of;
    for (std::size_t c = 0; c < cf.classes.size(); ++c) {
        for (const auto& member : cf.classes[c]) cf_class_of[member] = c;
    }

    bool identical = cda.classes.size() == cf.classes.size();
    for (const auto& members : cda.classes) {
        const std::size_t first_class = cf_class_of.at(members.front());
        for (const auto& member : members) {
            if (cf_class_of.at(member) != first_class) return PartitionRelation::inconsistent;
        }
        if (identical && cf.classes[first_class] != members) identical = false;
    }
    return identical ? PartitionRelation::equal : PartitionRelation::cda_strictly_finer;
}

} // namespace cfaudit
