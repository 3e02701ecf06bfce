#include "cfaudit/scm.hpp"

#include "cfaudit/errors.hpp"
#include "compiled.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace cfaudit {

const VariableSpec* Scm::find_variable(std::string_view name) const {
    for (const auto& variable : variables) {
        if (variable.name == name) return &variable;
    }
    return nullptr;
}

namespace {

bool in_domain(const VariableSpec& variable, const std::string& label) {
    return std::find(variable.domain.begin(), variable.domain.end(), label) !=
           variable.domain.end();
}

void check_variables(const Scm& scm, std::vector<std::string>& violations) {
    std::unordered_set<std::string> seen;
    for (const auto& variable : scm.variables) {
        if (!seen.insert(variable.name).second) {
            violations.push_back("duplicate variable name '" + variable.name + "'");
        }
        if (variable.domain.empty()) {
            violations.push_back("variable '" + variable.name + "' has an empty domain");
        }
        std::unordered_set<std::string> labels;
        for (const auto& label : variable.domain) {
            if (!labels.insert(label).second) {
                violations.push_back("variable '" + variable.name + "' repeats domain value '" +
                                     label + "'");
            }
        }
    }
}

void check_priors(const Scm& scm, std::vector<std::string>& violations) {
    std::unordered_set<std::string> with_prior;
    for (const auto& prior : scm.priors) {
        const VariableSpec* variable = scm.find_variable(prior.variable);
        if (variable == nullptr) {
            violations.push_back("prior refers to unknown variable '" + prior.variable + "'");
            continue;
        }
        if (variable->kind != VarKind::exogenous) {
            violations.push_back("prior on endogenous variable '" + prior.variable + "'");
            continue;
        }
        if (!with_prior.insert(prior.variable).second) {
            violations.push_back("duplicate prior for variable '" + prior.variable + "'");
            continue;
        }

        std::unordered_set<std::string> covered;
        bool entries_ok = true;
        Rat sum(0);
        for (const auto& [label, mass] : prior.pmf) {
            if (!in_domain(*variable, label)) {
                violations.push_back("prior for '" + prior.variable + "' names '" + label +
                                     "', which is not in its domain");
                entries_ok = false;
                continue;
            }
            if (!covered.insert(label).second) {
                violations.push_back("prior for '" + prior.variable + "' repeats value '" + label +
                                     "'");
                entries_ok = false;
                continue;
            }
            if (mass < Rat(0)) {
                violations.push_back("prior mass of '" + prior.variable + "=" + label +
                                     "' is negative (" + mass.str() + ")");
                entries_ok = false;
            }
            sum += mass;
        }
        if (covered.size() != variable->domain.size()) {
            violations.push_back("prior for '" + prior.variable +
                                 "' is not total: zero-mass values must be explicit");
            entries_ok = false;
        }
        if (entries_ok && sum != Rat(1)) {
            violations.push_back("prior mass for '" + prior.variable + "' sums to " + sum.str() +
                                 ", expected 1");
        }
    }

    for (const auto& variable : scm.variables) {
        if (variable.kind == VarKind::exogenous && !with_prior.contains(variable.name)) {
            violations.push_back("exogenous variable '" + variable.name + "' has no prior");
        }
    }
}

void check_equations(const Scm& scm, std::vector<std::string>& violations) {
    std::unordered_set<std::string> with_equation;
    for (const auto& equation : scm.equations) {
        const VariableSpec* child = scm.find_variable(equation.child);
        if (child == nullptr) {
            violations.push_back("equation for unknown variable '" + equation.child + "'");
            continue;
        }
        if (child->kind == VarKind::exogenous) {
            violations.push_back("exogenous variable '" + equation.child + "' has an equation");
            continue;
        }
        if (!with_equation.insert(equation.child).second) {
            violations.push_back("duplicate equation for variable '" + equation.child + "'");
            continue;
        }

        std::vector<const VariableSpec*> parents;
        std::unordered_set<std::string> parent_names;
        bool parents_ok = true;
        unsigned __int128 expected_rows = 1;
        for (const auto& parent_name : equation.parents) {
            const VariableSpec* parent = scm.find_variable(parent_name);
            if (parent == nullptr) {
                violations.push_back("equation for '" + equation.child +
                                     "' names unknown parent '" + parent_name + "'");
                parents_ok = false;
                continue;
            }
            if (!parent_names.insert(parent_name).second) {
                violations.push_back("equation for '" + equation.child +
                                     "' repeats parent '" + parent_name + "'");
                parents_ok = false;
                continue;
            }
            parents.push_back(parent);
            expected_rows *= parent->domain.size();
        }
        if (!parents_ok) continue;

        std::set<std::vector<std::string>> rows_seen;
        bool rows_ok = true;
        for (const auto& row : equation.table) {
            if (row.given.size() != parents.size()) {
                violations.push_back("equation for '" + equation.child +
                                     "' has a row with the wrong number of parent values");
                rows_ok = false;
                continue;
            }
            bool row_valid = true;
            for (std::size_t p = 0; p < parents.size(); ++p) {
                if (!in_domain(*parents[p], row.given[p])) {
                    violations.push_back("equation for '" + equation.child + "' row names '" +
                                         row.given[p] + "', not in the domain of '" +
                                         parents[p]->name + "'");
                    row_valid = false;
                }
            }
            if (!in_domain(*child, row.value)) {
                violations.push_back("equation for '" + equation.child + "' maps a row to '" +
                                     row.value + "', not in its domain");
                row_valid = false;
            }
            if (!row_valid) {
                rows_ok = false;
                continue;
            }
            if (!rows_seen.insert(row.given).second) {
                violations.push_back("equation for '" + equation.child +
                                     "' has duplicate rows for the same parent values");
                rows_ok = false;
            }
        }
        if (rows_ok && rows_seen.size() != expected_rows) {
            violations.push_back("equation for '" + equation.child + "' is not total: covers " +
                                 std::to_string(rows_seen.size()) + " of " +
                                 std::to_string(static_cast<unsigned long long>(expected_rows)) +
                                 " parent value combinations");
        }
    }

    for (const auto& variable : scm.variables) {
        if (variable.kind == VarKind::endogenous && !with_equation.contains(variable.name)) {
            violations.push_back("endogenous variable '" + variable.name + "' has no equation");
        }
    }
}

void check_acyclic(const Scm& scm, std::vector<std::string>& violations) {
    // Only equations whose child and parents all resolve take part; other
    // problems are already reported above.
    std::unordered_map<std::string, const StructuralEquation*> by_child;
    for (const auto& equation : scm.equations) {
        const VariableSpec* child = scm.find_variable(equation.child);
        if (child == nullptr || child->kind != VarKind::endogenous) continue;
        const bool resolvable =
            std::all_of(equation.parents.begin(), equation.parents.end(),
                        [&](const std::string& p) { return scm.find_variable(p) != nullptr; });
        if (resolvable) by_child.emplace(equation.child, &equation);
    }

    std::unordered_set<std::string> ready;
    for (const auto& variable : scm.variables) {
        if (!by_child.contains(variable.name)) ready.insert(variable.name);
    }

    bool progress = true;
    while (progress) {
        progress = false;
        for (auto it = by_child.begin(); it != by_child.end();) {
            const auto& parents = it->second->parents;
            const bool all_ready = std::all_of(parents.begin(), parents.end(),
                                               [&](const std::string& p) { return ready.contains(p); });
            if (all_ready) {
                ready.insert(it->first);
                it = by_child.erase(it);
                progress = true;
            } else {
                ++it;
            }
        }
    }

    if (!by_child.empty()) {
        std::vector<std::string> cycle;
        cycle.reserve(by_child.size());
        for (const auto& [name, _] : by_child) cycle.push_back(name);
        std::sort(cycle.begin(), cycle.end());
        std::string names;
        for (const auto& name : cycle) {
            if (!names.empty()) names += ", ";
            names += "'" + name + "'";
        }
        violations.push_back("cyclic dependency among " + names);
    }
}

} // namespace

ValidationReport validate(const Scm& scm) {
    ValidationReport report;
    check_variables(scm, report.violations);
    check_priors(scm, report.violations);
    check_equations(scm, report.violations);
    check_acyclic(scm, report.violations);
    return report;
}

std::vector<World> enumerate_worlds(const Scm& scm, Exec exec) {
    const detail::Compiled model(scm);
    const detail::WorldTable table = detail::enumerate(model, exec);

    std::vector<World> worlds(table.size());
    for_each_index(exec, table.size(), [&](std::size_t i) {
        World world;
        world.probability = table.mass[i];
        world.values.reserve(table.values[i].size());
        for (int var = 0; var < model.n_vars(); ++var) {
            world.values.push_back(model.label(var, table.values[i][var]));
        }
        worlds[i] = std::move(world);
    });
    return worlds;
}

Distribution marginal(const Scm& scm, std::string_view variable) {
    const detail::Compiled model(scm);
    const detail::WorldTable table = detail::enumerate(model);
    const int var = model.var(variable);

    std::vector<Rat> pmf(static_cast<std::size_t>(model.domain_size(var)), Rat(0));
    for (std::size_t i = 0; i < table.size(); ++i) {
        pmf[table.values[i][var]] += table.mass[i];
    }

    Distribution result;
    result.variable = std::string(variable);
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        result.pmf.emplace_back(model.label(var, static_cast<int>(i)), pmf[i]);
    }
    return result;
}

std::vector<std::string> Distribution::support() const {
    std::vector<std::string> result;
    for (const auto& [label, mass] : pmf) {
        if (mass.positive()) result.push_back(label);
    }
    return result;
}

const Rat& Distribution::mass(std::string_view label) const {
    for (const auto& [candidate, mass] : pmf) {
        if (candidate == label) return mass;
    }
    throw QueryError("value '" + std::string(label) + "' is not in the pmf of variable '" +
                     variable + "'");
}

} // namespace cfaudit
