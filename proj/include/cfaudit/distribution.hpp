#ifndef CFAUDIT_DISTRIBUTION_HPP
#define CFAUDIT_DISTRIBUTION_HPP

#include "cfaudit/rational.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cfaudit {

/**
 * Exact pmf over one variable's domain.
 *
 * The pmf is total: one entry per domain value, in canonical domain order,
 * zero masses explicit. Masses are exact rationals summing to exactly 1.
 */
struct Distribution {
    std::string variable;
    std::vector<std::pair<std::string, Rat>> pmf;

    /// Values with strictly positive mass, in canonical domain order.
    std::vector<std::string> support() const;

    /// Mass of one value; throws QueryError if the label is not in the pmf.
    const Rat& mass(std::string_view label) const;

    bool operator==(const Distribution&) const = default;
};

/**
 * Exact joint pmf over a tuple of variables. Sparse: only entries with
 * strictly positive mass, ordered lexicographically in canonical domain
 * order.
 */
struct JointDistribution {
    std::vector<std::string> variables;
    std::vector<std::pair<std::vector<std::string>, Rat>> pmf;

    bool operator==(const JointDistribution&) const = default;
};

} // namespace cfaudit

#endif
