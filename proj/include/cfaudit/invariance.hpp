#ifndef CFAUDIT_INVARIANCE_HPP
#define CFAUDIT_INVARIANCE_HPP

#include "cfaudit/exec.hpp"
#include "cfaudit/scm.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfaudit {

/// "The representation's output at x must equal its output at every peer."
struct Constraint {
    std::string x;
    std::vector<std::string> peers; // deterministically ordered, unique

    bool operator==(const Constraint&) const = default;
};

/**
 * Equality constraints forced on a representation of `input_var` by an
 * augmentation scheme: one entry per value of positive marginal mass,
 * peers collected from counterfactual supports. Self-peers are kept.
 */
struct ConstraintSet {
    std::string input_var;
    std::vector<Constraint> constraints;

    bool operator==(const ConstraintSet&) const = default;
};

/**
 * Constraints a true counterfactual augmentation forces: for each x with
 * positive mass and each context value z' of positive mass, the support
 * of the counterfactual (input under do(context = z') given input = x)
 * joins x's peer set.
 */
ConstraintSet counterfactual_constraints(const Scm& scm, std::string_view input_var,
                                         std::string_view context_var, Exec exec = Exec::serial);

/**
 * Constraints forced by augmentation through a context-guessing machine:
 * identical to counterfactual_constraints but every support is taken from
 * the guessed-context counterfactual (evidence extended with the MAP
 * context of x).
 */
ConstraintSet guess_cda_constraints(const Scm& scm, std::string_view input_var,
                                    std::string_view context_var, Exec exec = Exec::serial);

/**
 * Equivalence classes over a set of values of one variable. Classes are
 * disjoint, nonempty, cover the reporting set, and are canonically
 * ordered: members ascending in domain order, classes by least member.
 */
struct Partition {
    std::string input_var;
    std::vector<std::vector<std::string>> classes;

    bool operator==(const Partition&) const = default;
};

/**
 * Transitive closure of a constraint set into a partition: x is merged
 * with every peer, and the connected components are reported restricted
 * to the support of the input variable. Idempotent and independent of
 * constraint order.
 */
Partition partition_from(const Scm& scm, const ConstraintSet& constraints);

/// Same closure, reported over an explicit set of values instead of the
/// model support (used for dataset-level audits).
Partition partition_from(const Scm& scm, const ConstraintSet& constraints,
                         std::span<const std::string> report_values);

struct SupportSubsetWitness {
    std::string x;       // observed input value
    std::string z;       // intervened context value
    std::string x_prime; // counterfactual value present under guessing only

    bool operator==(const SupportSubsetWitness&) const = default;
};

struct SupportSubsetResult {
    bool holds = false;
    std::optional<SupportSubsetWitness> witness; // first violation in canonical order

    bool operator==(const SupportSubsetResult&) const = default;
};

/**
 * Verifies, for every x and every context value z of positive mass, that
 * the support of the guessed-context counterfactual is contained in the
 * support of the true counterfactual. This must hold for every valid
 * model; a witness indicates an implementation fault.
 */
SupportSubsetResult check_support_subset(const Scm& scm, std::string_view input_var,
                                         std::string_view context_var, Exec exec = Exec::serial);

enum class PartitionRelation {
    equal,             // identical class sets
    cda_strictly_finer, // every guess-side class sits inside a true-side class, with more classes
    inconsistent       // some guess-side class straddles two true-side classes
};

std::string_view to_string(PartitionRelation relation);

/**
 * Relates the guess-augmentation partition to the true-counterfactual
 * partition over the same support. `inconsistent` is impossible when the
 * support-subset property holds, so it signals a fault. Throws QueryError
 * if the partitions cover different values or different variables.
 */
PartitionRelation compare_partitions(const Partition& cda, const Partition& cf);

} // namespace cfaudit

#endif
