#ifndef CFAUDIT_SRC_COMPILED_HPP
#define CFAUDIT_SRC_COMPILED_HPP

#include "cfaudit/exec.hpp"
#include "cfaudit/rational.hpp"
#include "cfaudit/scm.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cfaudit::detail {

/**
 * Index-based view of a validated Scm: variables and values as dense ids,
 * priors as dense vectors, equations as mixed-radix lookup tables in
 * topological order. Construction validates the model and throws
 * ModelError if it is ill-formed. Holds a reference to the Scm; the Scm
 * must outlive the Compiled.
 */
class Compiled {
public:
    explicit Compiled(const Scm& scm);

    const Scm& scm() const { return *scm_; }
    int n_vars() const { return static_cast<int>(scm_->variables.size()); }

    int var(std::string_view name) const;            // throws QueryError on unknown name
    int value(int var, std::string_view label) const; // throws QueryError if not in domain
    const std::string& label(int var, int value) const;
    VarKind kind(int var) const { return scm_->variables[var].kind; }
    int domain_size(int var) const { return static_cast<int>(scm_->variables[var].domain.size()); }

    const std::vector<int>& exogenous_vars() const { return exogenous_; }
    /// Dense prior pmf (by value id) of the exogenous variable with id `var`.
    const std::vector<Rat>& prior(int var) const;

    std::uint64_t world_count() const { return world_count_; }

    /// Writes the exogenous coordinates of world `index` into `values`
    /// (size n_vars). The first declared exogenous variable is the most
    /// significant digit, so increasing index is lexicographic order.
    void decode_exogenous(std::uint64_t index, std::span<int> values) const;

    Rat exogenous_mass(std::span<const int> values) const;

    /**
     * Computes every endogenous value in topological order. Overrides are
     * (var, value) pairs: an overridden exogenous coordinate is replaced
     * before propagation, an overridden endogenous variable is clamped to
     * the constant instead of its mechanism.
     */
    void propagate(std::span<int> values,
                   std::span<const std::pair<int, int>> overrides = {}) const;

    /// Validates and converts (name, label) pairs to sorted (var, value)
    /// id pairs. Throws QueryError on unknown names or out-of-domain values.
    std::vector<std::pair<int, int>> compile_bindings(
        std::span<const std::pair<std::string, std::string>> bindings) const;

    std::string describe(std::span<const std::pair<int, int>> bindings) const;

private:
    struct Equation {
        int child = 0;
        std::vector<int> parents;
        std::vector<int> table; // mixed radix over parent values, last parent fastest
    };

    const Scm* scm_;
    std::vector<int> exogenous_;              // var ids, declaration order
    std::vector<std::vector<Rat>> priors_;    // by var id (empty for endogenous)
    std::vector<Equation> equations_;         // topological order
    std::uint64_t world_count_ = 1;
};

/// All worlds, index-parallel arrays. values[i] is a full assignment by var id.
struct WorldTable {
    std::vector<std::vector<int>> values;
    std::vector<Rat> mass;

    std::size_t size() const { return mass.size(); }
};

WorldTable enumerate(const Compiled& model, Exec exec = Exec::serial);

/// Worlds consistent with the evidence, weights renormalized to sum 1.
/// Throws QueryError ("impossible evidence ...") when the evidence has
/// zero probability.
struct Abduction {
    std::vector<std::size_t> worlds;
    std::vector<Rat> weight;
};

Abduction abduct(const Compiled& model, const WorldTable& worlds,
                 std::span<const std::pair<int, int>> evidence);

/// Dense posterior pmf (by value id) of one variable given evidence.
std::vector<Rat> posterior_pmf(const Compiled& model, const WorldTable& worlds, int var,
                               std::span<const std::pair<int, int>> evidence);

/// MAP value of `var` given evidence; ties break to the lowest value id.
struct MapValue {
    int value = 0;
    bool tie = false;
    std::vector<Rat> posterior;
};

MapValue map_value(const Compiled& model, const WorldTable& worlds, int var,
                   std::span<const std::pair<int, int>> evidence);

/**
 * Abduction-action-prediction on ids: posterior over all exogenous
 * completions given the evidence, mechanisms mutilated by the
 * interventions, target pmf accumulated over the propagated completions.
 * Returns a dense pmf by target value id.
 */
std::vector<Rat> counterfactual_pmf(const Compiled& model, const WorldTable& worlds, int target,
                                    std::span<const std::pair<int, int>> interventions,
                                    std::span<const std::pair<int, int>> evidence);

/// Value ids with strictly positive marginal mass, ascending.
std::vector<int> support_ids(const Compiled& model, const WorldTable& worlds, int var);

} // namespace cfaudit::detail

#endif
