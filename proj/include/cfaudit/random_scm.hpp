#ifndef CFAUDIT_RANDOM_SCM_HPP
#define CFAUDIT_RANDOM_SCM_HPP

#include "cfaudit/rational.hpp"
#include "cfaudit/scm.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cfaudit {

/**
 * Shape of the seeded model generator used by property tests, the
 * acceptance suite, and the bench target. Defaults are small enough for
 * exhaustive verification and rich enough to exercise zero-mass priors
 * and unreachable endogenous values.
 */
struct RandomScmParams {
    int min_exogenous = 2;
    int max_exogenous = 3;
    int min_endogenous = 1;
    int max_endogenous = 2;
    int min_domain = 2;
    int max_domain = 3;
    /// Chance (as num/den drawn against a 1..den roll) that a prior entry
    /// gets weight zero; at least one entry per prior stays positive.
    int zero_mass_num = 1;
    int zero_mass_den = 5;
    int max_prior_weight = 5;
};

/**
 * Deterministic model from a single SplitMix64 stream seeded with `seed`:
 * exogenous variables u0, u1, ... with normalized small-integer-weight
 * priors, endogenous variables x0, x1, ... whose parents are drawn from
 * the variables declared before them and whose tables are uniform draws
 * over the child domain. Always passes validate().
 */
Scm random_scm(std::uint64_t seed, const RandomScmParams& params = {});

/// The endogenous variable audited as the input in generated models (the
/// last declared one, the most downstream).
std::string random_scm_input_var(const Scm& scm);

/// Candidate context variables for audits of a generated model: every
/// variable except the audited input.
std::vector<std::string> random_scm_context_vars(const Scm& scm);

} // namespace cfaudit

#endif
