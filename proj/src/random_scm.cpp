#include "cfaudit/random_scm.hpp"

#include "cfaudit/rng.hpp"

#include <algorithm>
#include <numeric>

namespace cfaudit {

namespace {

std::vector<std::string> make_domain(SplitMix64& rng, const RandomScmParams& params) {
    const auto size = bounded(rng, params.min_domain, params.max_domain);
    std::vector<std::string> domain;
    for (std::int64_t v = 0; v < size; ++v) domain.push_back("v" + std::to_string(v));
    return domain;
}

} // namespace

Scm random_scm(std::uint64_t seed, const RandomScmParams& params) {
    SplitMix64 rng{mix64(seed)};
    Scm scm;

    const auto n_exogenous = bounded(rng, params.min_exogenous, params.max_exogenous);
    const auto n_endogenous = bounded(rng, params.min_endogenous, params.max_endogenous);

    for (std::int64_t i = 0; i < n_exogenous; ++i) {
        VariableSpec variable;
        variable.name = "u" + std::to_string(i);
        variable.kind = VarKind::exogenous;
        variable.domain = make_domain(rng, params);
        scm.variables.push_back(variable);

        std::vector<std::int64_t> weights(variable.domain.size(), 0);
        for (auto& weight : weights) {
            const bool zero = bounded(rng, 1, params.zero_mass_den) <= params.zero_mass_num;
            weight = zero ? 0 : bounded(rng, 1, params.max_prior_weight);
        }
        if (std::all_of(weights.begin(), weights.end(),
                        [](std::int64_t w) { return w == 0; })) {
            weights.front() = 1;
        }
        const std::int64_t total = std::accumulate(weights.begin(), weights.end(),
                                                   static_cast<std::int64_t>(0));
        ExogenousPrior prior;
        prior.variable = variable.name;
        for (std::size_t v = 0; v < variable.domain.size(); ++v) {
            prior.pmf.emplace_back(variable.domain[v], Rat(weights[v], total));
        }
        scm.priors.push_back(std::move(prior));
    }

    for (std::int64_t i = 0; i < n_endogenous; ++i) {
        VariableSpec variable;
        variable.name = "x" + std::to_string(i);
        variable.kind = VarKind::endogenous;
        variable.domain = make_domain(rng, params);

        // Parents: a random nonempty subset of the variables declared so
        // far, so the dependency graph is acyclic by construction.
        const auto available = static_cast<std::int64_t>(scm.variables.size());
        const auto n_parents = bounded(rng, 1, std::min<std::int64_t>(3, available));
        std::vector<std::int64_t> candidates(available);
        std::iota(candidates.begin(), candidates.end(), 0);
        for (std::int64_t p = 0; p < n_parents; ++p) { // partial Fisher-Yates
            const auto j = bounded(rng, p, available - 1);
            std::swap(candidates[p], candidates[j]);
        }

        StructuralEquation equation;
        equation.child = variable.name;
        std::vector<const VariableSpec*> parents;
        for (std::int64_t p = 0; p < n_parents; ++p) {
            const auto& parent = scm.variables[candidates[p]];
            equation.parents.push_back(parent.name);
            parents.push_back(&parent);
        }

        std::size_t rows = 1;
        for (const auto* parent : parents) rows *= parent->domain.size();
        for (std::size_t r = 0; r < rows; ++r) {
            EquationRow row;
            std::size_t rest = r;
            std::vector<std::size_t> digits(parents.size(), 0);
            for (std::size_t p = parents.size(); p-- > 0;) { // last parent fastest
                digits[p] = rest % parents[p]->domain.size();
                rest /= parents[p]->domain.size();
            }
            for (std::size_t p = 0; p < parents.size(); ++p) {
                row.given.push_back(parents[p]->domain[digits[p]]);
            }
            row.value = variable.domain[bounded(
                rng, 0, static_cast<std::int64_t>(variable.domain.size()) - 1)];
            equation.table.push_back(std::move(row));
        }
        scm.variables.push_back(std::move(variable));
        scm.equations.push_back(std::move(equation));
    }

    return scm;
}

std::string random_scm_input_var(const Scm& scm) {
    for (auto it = scm.variables.rbegin(); it != scm.variables.rend(); ++it) {
        if (it->kind == VarKind::endogenous) return it->name;
    }
    return {};
}

std::vector<std::string> random_scm_context_vars(const Scm& scm) {
    const std::string input = random_scm_input_var(scm);
    std::vector<std::string> contexts;
    for (const auto& variable : scm.variables) {
        if (variable.name != input) contexts.push_back(variable.name);
    }
    return contexts;
}

} // namespace cfaudit
