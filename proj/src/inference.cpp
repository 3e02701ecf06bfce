#include "cfaudit/inference.hpp"

#include "cfaudit/errors.hpp"
#include "compiled.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace cfaudit {

void Assignment::bind(std::string variable, std::string value) {
    const auto it = std::lower_bound(
        bindings_.begin(), bindings_.end(), variable,
        [](const auto& binding, const std::string& name) { return binding.first < name; });
    if (it != bindings_.end() && it->first == variable) {
        if (it->second != value) {
            throw QueryError("variable '" + variable + "' bound to both '" + it->second +
                             "' and '" + value + "'");
        }
        return;
    }
    bindings_.emplace(it, std::move(variable), std::move(value));
}

Assignment Assignment::with(std::string variable, std::string value) const {
    Assignment extended = *this;
    extended.bind(std::move(variable), std::move(value));
    return extended;
}

bool Assignment::binds(std::string_view variable) const {
    return value_of(variable) != nullptr;
}

const std::string* Assignment::value_of(std::string_view variable) const {
    for (const auto& [name, value] : bindings_) {
        if (name == variable) return &value;
    }
    return nullptr;
}

std::string Assignment::str() const {
    std::string text = "{";
    for (std::size_t i = 0; i < bindings_.size(); ++i) {
        if (i > 0) text += ", ";
        text += bindings_[i].first + "=" + bindings_[i].second;
    }
    return text + "}";
}

namespace {

Distribution dense_distribution(const detail::Compiled& model, int var,
                                const std::vector<Rat>& pmf) {
    Distribution result;
    result.variable = model.scm().variables[var].name;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        result.pmf.emplace_back(model.label(var, static_cast<int>(i)), pmf[i]);
    }
    return result;
}

} // namespace

JointDistribution posterior(const Scm& scm, std::span<const std::string> query_vars,
                            const Assignment& evidence) {
    const detail::Compiled model(scm);
    const detail::WorldTable worlds = detail::enumerate(model);
    const auto evidence_ids = model.compile_bindings(evidence.bindings());

    std::vector<int> query_ids;
    query_ids.reserve(query_vars.size());
    for (const auto& name : query_vars) query_ids.push_back(model.var(name));

    const detail::Abduction abduction = detail::abduct(model, worlds, evidence_ids);

    std::map<std::vector<int>, Rat> joint;
    for (std::size_t i = 0; i < abduction.worlds.size(); ++i) {
        std::vector<int> key;
        key.reserve(query_ids.size());
        for (const int var : query_ids) key.push_back(worlds.values[abduction.worlds[i]][var]);
        joint[key] += abduction.weight[i];
    }

    JointDistribution result;
    for (const auto& name : query_vars) result.variables.push_back(name);
    for (const auto& [key, mass] : joint) {
        if (mass.is_zero()) continue;
        std::vector<std::string> labels;
        labels.reserve(key.size());
        for (std::size_t i = 0; i < key.size(); ++i) {
            labels.push_back(model.label(query_ids[i], key[i]));
        }
        result.pmf.emplace_back(std::move(labels), mass);
    }
    return result;
}

Distribution posterior(const Scm& scm, std::string_view query_var, const Assignment& evidence) {
    const detail::Compiled model(scm);
    const detail::WorldTable worlds = detail::enumerate(model);
    const int var = model.var(query_var);
    return dense_distribution(
        model, var,
        detail::posterior_pmf(model, worlds, var, model.compile_bindings(evidence.bindings())));
}

MapContextResult map_context(const Scm& scm, std::string_view context_var,
                             const Assignment& evidence) {
    const detail::Compiled model(scm);
    const detail::WorldTable worlds = detail::enumerate(model);
    const int var = model.var(context_var);
    const detail::MapValue map = detail::map_value(model, worlds, var,
                                                   model.compile_bindings(evidence.bindings()));

    MapContextResult result;
    result.value = model.label(var, map.value);
    result.tie = map.tie;
    result.posterior = dense_distribution(model, var, map.posterior);
    return result;
}

Distribution counterfactual(const Scm& scm, const CounterfactualQuery& query) {
    const detail::Compiled model(scm);
    const detail::WorldTable worlds = detail::enumerate(model);
    const int target = model.var(query.target);
    if (model.kind(target) != VarKind::endogenous) {
        throw QueryError("counterfactual target '" + query.target + "' must be endogenous");
    }
    const auto interventions = model.compile_bindings(query.intervention.bindings());
    const auto evidence = model.compile_bindings(query.evidence.bindings());
    return dense_distribution(
        model, target, detail::counterfactual_pmf(model, worlds, target, interventions, evidence));
}

Distribution guess_counterfactual(const Scm& scm, std::string_view target,
                                  std::string_view context_var, std::string_view do_value,
                                  const Assignment& evidence) {
    const MapContextResult guessed = map_context(scm, context_var, evidence);

    CounterfactualQuery query;
    query.target = std::string(target);
    query.intervention.bind(std::string(context_var), std::string(do_value));
    query.evidence = evidence.with(std::string(context_var), guessed.value);

    // The guessed context has strictly positive posterior, so the extended
    // evidence cannot be impossible.
    assert(guessed.posterior.mass(guessed.value).positive());
    return counterfactual(scm, query);
}

} // namespace cfaudit
