#ifndef CFAUDIT_SCM_HPP
#define CFAUDIT_SCM_HPP

#include "cfaudit/distribution.hpp"
#include "cfaudit/exec.hpp"
#include "cfaudit/rational.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cfaudit {

enum class VarKind { exogenous, endogenous };

/**
 * One model variable. The domain is an ordered finite list of distinct
 * value labels; declaration order is the canonical order used for
 * tie-breaking and for all deterministic output ordering.
 */
struct VariableSpec {
    std::string name;
    VarKind kind = VarKind::exogenous;
    std::vector<std::string> domain;

    bool operator==(const VariableSpec&) const = default;
};

/**
 * Prior of one exogenous variable: an explicit entry for every domain
 * value (zero masses spelled out), masses summing to exactly 1.
 */
struct ExogenousPrior {
    std::string variable;
    std::vector<std::pair<std::string, Rat>> pmf;

    bool operator==(const ExogenousPrior&) const = default;
};

struct EquationRow {
    std::vector<std::string> given; // one value per parent, aligned
    std::string value;              // resulting child value

    bool operator==(const EquationRow&) const = default;
};

/**
 * Deterministic mechanism of one endogenous variable, as an explicit
 * table with one row per element of the Cartesian product of the parent
 * domains.
 */
struct StructuralEquation {
    std::string child;
    std::vector<std::string> parents;
    std::vector<EquationRow> table;

    bool operator==(const StructuralEquation&) const = default;
};

/**
 * Discrete structural causal model. All randomness lives in mutually
 * independent exogenous variables (joint prior = product of the
 * per-variable priors); every endogenous variable is a deterministic
 * function of its parents.
 *
 * The struct itself is permissive so that ill-formed models can be loaded
 * and reported on; validate() checks every invariant, and operations that
 * need a valid model reject models that do not pass.
 */
struct Scm {
    std::vector<VariableSpec> variables;
    std::vector<ExogenousPrior> priors;
    std::vector<StructuralEquation> equations;

    const VariableSpec* find_variable(std::string_view name) const;

    bool operator==(const Scm&) const = default;
};

/// Outcome of validate(): empty list means the model is well-formed.
struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// Checks every model invariant; violations are data, not exceptions.
ValidationReport validate(const Scm& scm);

/**
 * One joint outcome: a total assignment (one label per variable, aligned
 * with scm.variables) and its exact probability, the product of the prior
 * masses of the exogenous values.
 */
struct World {
    std::vector<std::string> values;
    Rat probability;

    bool operator==(const World&) const = default;
};

/**
 * Materializes every world, one per element of the exogenous product
 * space, ordered lexicographically by exogenous values in canonical
 * order. Probabilities sum to exactly 1. Throws ModelError if the model
 * does not validate.
 */
std::vector<World> enumerate_worlds(const Scm& scm, Exec exec = Exec::serial);

/// Exact marginal pmf of one variable. Throws QueryError on unknown names.
Distribution marginal(const Scm& scm, std::string_view variable);

} // namespace cfaudit

#endif
