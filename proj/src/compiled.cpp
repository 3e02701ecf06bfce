#include "compiled.hpp"

#include "cfaudit/errors.hpp"

#include <algorithm>
#include <cstddef>

namespace cfaudit::detail {

namespace {

int find_var_index(const Scm& scm, std::string_view name) {
    for (std::size_t i = 0; i < scm.variables.size(); ++i) {
        if (scm.variables[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

} // namespace

Compiled::Compiled(const Scm& scm) : scm_(&scm) {
    const ValidationReport report = validate(scm);
    if (!report.ok()) {
        std::string message = "invalid model:";
        for (const auto& violation : report.violations) {
            message += "\n  - " + violation;
        }
        throw ModelError(message);
    }

    priors_.resize(scm.variables.size());
    for (std::size_t i = 0; i < scm.variables.size(); ++i) {
        if (scm.variables[i].kind != VarKind::exogenous) continue;
        const int id = static_cast<int>(i);
        exogenous_.push_back(id);
        world_count_ *= scm.variables[i].domain.size();

        for (const auto& prior : scm.priors) {
            if (prior.variable != scm.variables[i].name) continue;
            std::vector<Rat> dense(scm.variables[i].domain.size());
            for (const auto& [label, mass] : prior.pmf) {
                const auto& domain = scm.variables[i].domain;
                const auto it = std::find(domain.begin(), domain.end(), label);
                dense[static_cast<std::size_t>(it - domain.begin())] = mass;
            }
            priors_[i] = std::move(dense);
            break;
        }
    }

    // Equations in topological order (validation guarantees one exists).
    std::vector<bool> ready(scm.variables.size(), false);
    for (const int id : exogenous_) ready[id] = true;
    std::vector<bool> placed(scm.equations.size(), false);
    while (equations_.size() < scm.equations.size()) {
        for (std::size_t e = 0; e < scm.equations.size(); ++e) {
            if (placed[e]) continue;
            const auto& eq = scm.equations[e];
            const bool all_ready = std::all_of(
                eq.parents.begin(), eq.parents.end(),
                [&](const std::string& p) { return ready[find_var_index(scm, p)]; });
            if (!all_ready) continue;

            Equation compiled;
            compiled.child = find_var_index(scm, eq.child);
            std::size_t rows = 1;
            for (const auto& parent : eq.parents) {
                const int pid = find_var_index(scm, parent);
                compiled.parents.push_back(pid);
                rows *= scm.variables[pid].domain.size();
            }
            compiled.table.assign(rows, 0);
            for (const auto& row : eq.table) {
                std::size_t index = 0;
                for (std::size_t p = 0; p < compiled.parents.size(); ++p) {
                    const auto& domain = scm.variables[compiled.parents[p]].domain;
                    const auto it = std::find(domain.begin(), domain.end(), row.given[p]);
                    index = index * domain.size() + static_cast<std::size_t>(it - domain.begin());
                }
                const auto& child_domain = scm.variables[compiled.child].domain;
                const auto it = std::find(child_domain.begin(), child_domain.end(), row.value);
                compiled.table[index] = static_cast<int>(it - child_domain.begin());
            }
            ready[compiled.child] = true;
            placed[e] = true;
            equations_.push_back(std::move(compiled));
        }
    }
}

int Compiled::var(std::string_view name) const {
    const int id = find_var_index(*scm_, name);
    if (id < 0) throw QueryError("unknown variable '" + std::string(name) + "'");
    return id;
}

int Compiled::value(int var, std::string_view label) const {
    const auto& domain = scm_->variables[var].domain;
    for (std::size_t i = 0; i < domain.size(); ++i) {
        if (domain[i] == label) return static_cast<int>(i);
    }
    throw QueryError("value '" + std::string(label) + "' is not in the domain of variable '" +
                     scm_->variables[var].name + "'");
}

const std::string& Compiled::label(int var, int value) const {
    return scm_->variables[var].domain[value];
}

const std::vector<Rat>& Compiled::prior(int var) const {
    return priors_[var];
}

void Compiled::decode_exogenous(std::uint64_t index, std::span<int> values) const {
    for (std::size_t i = exogenous_.size(); i-- > 0;) {
        const int var = exogenous_[i];
        const auto size = static_cast<std::uint64_t>(domain_size(var));
        values[var] = static_cast<int>(index % size);
        index /= size;
    }
}

Rat Compiled::exogenous_mass(std::span<const int> values) const {
    Rat mass(1);
    for (const int var : exogenous_) {
        mass *= priors_[var][values[var]];
    }
    return mass;
}

void Compiled::propagate(std::span<int> values,
                         std::span<const std::pair<int, int>> overrides) const {
    for (const auto& [var, value] : overrides) {
        if (kind(var) == VarKind::exogenous) values[var] = value;
    }
    for (const auto& eq : equations_) {
        int clamped = -1;
        for (const auto& [var, value] : overrides) {
            if (var == eq.child) {
                clamped = value;
                break;
            }
        }
        if (clamped >= 0) {
            values[eq.child] = clamped;
            continue;
        }
        std::size_t index = 0;
        for (const int parent : eq.parents) {
            index = index * static_cast<std::size_t>(domain_size(parent)) +
                    static_cast<std::size_t>(values[parent]);
        }
        values[eq.child] = eq.table[index];
    }
}

std::vector<std::pair<int, int>> Compiled::compile_bindings(
    std::span<const std::pair<std::string, std::string>> bindings) const {
    std::vector<std::pair<int, int>> compiled;
    compiled.reserve(bindings.size());
    for (const auto& [name, value_label] : bindings) {
        const int id = var(name);
        compiled.emplace_back(id, value(id, value_label));
    }
    std::sort(compiled.begin(), compiled.end());
    return compiled;
}

std::string Compiled::describe(std::span<const std::pair<int, int>> bindings) const {
    std::string text = "{";
    for (std::size_t i = 0; i < bindings.size(); ++i) {
        if (i > 0) text += ", ";
        text += scm_->variables[bindings[i].first].name + "=" +
                label(bindings[i].first, bindings[i].second);
    }
    return text + "}";
}

WorldTable enumerate(const Compiled& model, Exec exec) {
    const std::uint64_t count = model.world_count();
    if (count > (1ull << 26)) {
        throw Error("exogenous product space too large to enumerate (" + std::to_string(count) +
                    " worlds)");
    }

    WorldTable table;
    table.values.assign(count, {});
    table.mass.assign(count, Rat(0));
    for_each_index(exec, count, [&](std::size_t i) {
        std::vector<int> values(static_cast<std::size_t>(model.n_vars()), 0);
        model.decode_exogenous(i, values);
        model.propagate(values);
        table.mass[i] = model.exogenous_mass(values);
        table.values[i] = std::move(values);
    });
    return table;
}

namespace {

bool matches(std::span<const int> values, std::span<const std::pair<int, int>> bindings) {
    for (const auto& [var, value] : bindings) {
        if (values[var] != value) return false;
    }
    return true;
}

} // namespace

Abduction abduct(const Compiled& model, const WorldTable& worlds,
                 std::span<const std::pair<int, int>> evidence) {
    Abduction abduction;
    Rat total(0);
    for (std::size_t i = 0; i < worlds.size(); ++i) {
        if (worlds.mass[i].is_zero()) continue;
        if (!matches(worlds.values[i], evidence)) continue;
        abduction.worlds.push_back(i);
        abduction.weight.push_back(worlds.mass[i]);
        total += worlds.mass[i];
    }
    if (total.is_zero()) {
        throw QueryError("impossible evidence " + model.describe(evidence));
    }
    for (auto& weight : abduction.weight) weight /= total;
    return abduction;
}

std::vector<Rat> posterior_pmf(const Compiled& model, const WorldTable& worlds, int var,
                               std::span<const std::pair<int, int>> evidence) {
    const Abduction abduction = abduct(model, worlds, evidence);
    std::vector<Rat> pmf(static_cast<std::size_t>(model.domain_size(var)), Rat(0));
    for (std::size_t i = 0; i < abduction.worlds.size(); ++i) {
        pmf[worlds.values[abduction.worlds[i]][var]] += abduction.weight[i];
    }
    return pmf;
}

MapValue map_value(const Compiled& model, const WorldTable& worlds, int var,
                   std::span<const std::pair<int, int>> evidence) {
    MapValue result;
    result.posterior = posterior_pmf(model, worlds, var, evidence);
    result.value = 0;
    for (std::size_t i = 1; i < result.posterior.size(); ++i) {
        if (result.posterior[i] > result.posterior[result.value]) {
            result.value = static_cast<int>(i);
        }
    }
    int at_max = 0;
    for (const auto& mass : result.posterior) {
        if (mass == result.posterior[result.value]) ++at_max;
    }
    result.tie = at_max > 1;
    return result;
}

std::vector<Rat> counterfactual_pmf(const Compiled& model, const WorldTable& worlds, int target,
                                    std::span<const std::pair<int, int>> interventions,
                                    std::span<const std::pair<int, int>> evidence) {
    const Abduction abduction = abduct(model, worlds, evidence);
    std::vector<Rat> pmf(static_cast<std::size_t>(model.domain_size(target)), Rat(0));
    std::vector<int> values(static_cast<std::size_t>(model.n_vars()), 0);
    for (std::size_t i = 0; i < abduction.worlds.size(); ++i) {
        const auto& world = worlds.values[abduction.worlds[i]];
        std::copy(world.begin(), world.end(), values.begin());
        model.propagate(values, interventions);
        pmf[values[target]] += abduction.weight[i];
    }
    return pmf;
}

std::vector<int> support_ids(const Compiled& model, const WorldTable& worlds, int var) {
    std::vector<Rat> pmf(static_cast<std::size_t>(model.domain_size(var)), Rat(0));
    for (std::size_t i = 0; i < worlds.size(); ++i) {
        pmf[worlds.values[i][var]] += worlds.mass[i];
    }
    std::vector<int> support;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        if (pmf[i].positive()) support.push_back(static_cast<int>(i));
    }
    return support;
}

} // namespace cfaudit::detail
