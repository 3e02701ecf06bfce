#ifndef CFAUDIT_INFERENCE_HPP
#define CFAUDIT_INFERENCE_HPP

#include "cfaudit/distribution.hpp"
#include "cfaudit/scm.hpp"

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cfaudit {

/**
 * Partial variable-to-value binding, used both as evidence and as a
 * do-intervention. Bindings are kept sorted by variable name; binding the
 * same variable to two different values is rejected.
 */
class Assignment {
public:
    Assignment() = default;

    /// Adds a binding. Throws QueryError if the variable is already bound
    /// to a different value; rebinding to the same value is a no-op.
    void bind(std::string variable, std::string value);

    /// Copy of this assignment with one more binding.
    Assignment with(std::string variable, std::string value) const;

    bool binds(std::string_view variable) const;
    const std::string* value_of(std::string_view variable) const;
    bool empty() const { return bindings_.empty(); }

    const std::vector<std::pair<std::string, std::string>>& bindings() const {
        return bindings_;
    }

    /// "{X=1, Z=-1}" — used in error messages and reports.
    std::string str() const;

    bool operator==(const Assignment&) const = default;

private:
    std::vector<std::pair<std::string, std::string>> bindings_; // sorted by variable
};

/**
 * Exact joint posterior over `query_vars` given the evidence, computed by
 * filtering the enumerated worlds and renormalizing. Throws QueryError
 * when the evidence has zero probability.
 */
JointDistribution posterior(const Scm& scm, std::span<const std::string> query_vars,
                            const Assignment& evidence);

/// Single-variable posterior as a total pmf (zero masses explicit).
Distribution posterior(const Scm& scm, std::string_view query_var, const Assignment& evidence);

struct MapContextResult {
    std::string value;      // argmax of the posterior
    bool tie = false;       // two or more values attain the maximum
    Distribution posterior; // the full posterior the argmax was taken from
};

/**
 * Maximum a posteriori value of `context_var` given the evidence, under
 * exact rational comparison. Ties break to the earliest value in
 * canonical domain order and set the tie flag.
 */
MapContextResult map_context(const Scm& scm, std::string_view context_var,
                             const Assignment& evidence);

struct CounterfactualQuery {
    std::string target;      // endogenous variable whose pmf is returned
    Assignment intervention; // do(...) bindings, exogenous or endogenous
    Assignment evidence;
};

/**
 * Counterfactual pmf of the target by abduction-action-prediction:
 * posterior over all exogenous completions given the evidence, mechanisms
 * replaced by constants for intervened variables (an intervened exogenous
 * variable's abducted value is overridden by the constant), each
 * completion propagated through the mutilated model.
 */
Distribution counterfactual(const Scm& scm, const CounterfactualQuery& query);

/**
 * Counterfactual pmf computed by a context-guessing machine: the context
 * variable is fixed at its MAP value given the evidence, the evidence is
 * extended with that value, and the counterfactual under
 * do(context_var = do_value) is evaluated against the extended evidence.
 */
Distribution guess_counterfactual(const Scm& scm, std::string_view target,
                                  std::string_view context_var, std::string_view do_value,
                                  const Assignment& evidence);

} // namespace cfaudit

#endif
