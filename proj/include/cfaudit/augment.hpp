#ifndef CFAUDIT_AUGMENT_HPP
#define CFAUDIT_AUGMENT_HPP

#include "cfaudit/exec.hpp"
#include "cfaudit/invariance.hpp"
#include "cfaudit/rational.hpp"
#include "cfaudit/scm.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfaudit {

struct LabeledExample {
    std::string x;
    std::string y;
    std::int64_t weight = 1; // positive multiplicity

    bool operator==(const LabeledExample&) const = default;
};

enum class AugMode { full, guess, posterior };

std::string_view to_string(AugMode mode);
AugMode aug_mode_from(std::string_view name); // throws ParseError

/**
 * One augmented record. The label is copied from the source example; the
 * mass is the exact probability of x_prime under the counterfactual
 * distribution the record was generated from (always positive).
 * context_used is the conditioning context, or empty when the true
 * counterfactual was used (all contexts abducted).
 */
struct AugmentedExample {
    std::string x_prime;
    std::string y;
    std::string source_x;
    std::string intervened_z;
    AugMode mode = AugMode::full;
    std::optional<std::string> context_used; // nullopt = "all"
    Rat mass;

    bool operator==(const AugmentedExample&) const = default;
};

/// Sampling settings: `draws` draws per generated distribution, streams
/// derived from `seed` and the example index.
struct DrawSpec {
    int draws = 1;
    std::uint64_t seed = 0;

    bool operator==(const DrawSpec&) const = default;
};

struct AugmentedDataset {
    std::string input_var;
    std::string label_var;
    std::string context_var;
    AugMode mode = AugMode::full;
    Rat tau;                              // posterior mode threshold
    std::optional<DrawSpec> draw;         // sample mode; enumerate when absent
    std::optional<DrawSpec> context_draw; // posterior mode: sampled contexts
    std::vector<LabeledExample> originals;
    std::vector<AugmentedExample> augmented;
};

/**
 * Draws n labeled examples from the model: each exogenous variable is
 * sampled from its prior (one SplitMix64 stream per example, derived from
 * the seed and the example index), the equations are propagated, and the
 * (input, label) pair is recorded. Reproducible given (scm, n, seed);
 * serial and parallel runs agree. Throws QueryError when n < 1.
 */
std::vector<LabeledExample> sample_dataset(const Scm& scm, std::string_view input_var,
                                           std::string_view label_var, std::int64_t n,
                                           std::uint64_t seed, Exec exec = Exec::serial);

/**
 * Counterfactual data augmentation through a context-guessing machine:
 * for each example (x, y) and each context value z of positive mass, the
 * counterfactual of the input under do(context = z) is evaluated with the
 * evidence extended by the MAP context of x, and either its whole support
 * is emitted with exact masses (enumerate, the default) or `draw->draws`
 * values are sampled from it. Labels are copied. Throws QueryError when
 * an example's x has zero marginal probability.
 */
AugmentedDataset guess_cda(const Scm& scm, std::string_view input_var, std::string_view label_var,
                           std::string_view context_var, std::span<const LabeledExample> data,
                           std::optional<DrawSpec> draw = std::nullopt, Exec exec = Exec::serial);

/// Same shape as guess_cda but with the true counterfactual distribution
/// (abduction over all contexts); provenance records context_used = all.
AugmentedDataset full_cda(const Scm& scm, std::string_view input_var, std::string_view label_var,
                          std::string_view context_var, std::span<const LabeledExample> data,
                          std::optional<DrawSpec> draw = std::nullopt, Exec exec = Exec::serial);

/// Context selection for posterior_cda: all contexts with posterior mass
/// strictly above tau (default, tau = 0), or `draw->draws` contexts
/// sampled from the posterior.
struct ContextRule {
    Rat tau;
    std::optional<DrawSpec> draw;
};

/**
 * Posterior-context augmentation: for each example, conditioning contexts
 * are selected from the posterior of the context variable given x (by
 * threshold or by sampling), and the counterfactual under each
 * do(context = z) is evaluated against the evidence extended by each
 * selected context. With tau = 0 the emitted supports equal full_cda's.
 * Throws QueryError if tau is outside [0, 1) or no context qualifies.
 */
AugmentedDataset posterior_cda(const Scm& scm, std::string_view input_var,
                               std::string_view label_var, std::string_view context_var,
                               std::span<const LabeledExample> data, const ContextRule& rule = {},
                               std::optional<DrawSpec> draw = std::nullopt,
                               Exec exec = Exec::serial);

/**
 * The equality constraints a finite augmented dataset forces on a trained
 * representation: one constraint per source value, peers being every
 * x_prime generated from it. Masses and multiplicities are ignored;
 * constraints are support-level.
 */
ConstraintSet induced_constraints(const AugmentedDataset& dataset);

/// Distinct values appearing in the dataset (originals and augmented),
/// in canonical domain order: the reporting set for dataset-level partitions.
std::vector<std::string> dataset_values(const Scm& scm, const AugmentedDataset& dataset);

} // namespace cfaudit

#endif
