// Property suite over the seeded model generator: the support-subset
// theorem as an executable statement, exact agreement with the
// brute-force oracle, and the support-level equivalences between the
// augmentation modes.

#include "cfaudit/augment.hpp"
#include "cfaudit/inference.hpp"
#include "cfaudit/invariance.hpp"
#include "cfaudit/random_scm.hpp"
#include "cfaudit/scm.hpp"

#include "support/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

using namespace cfaudit;

namespace {

constexpr std::uint64_t kModels = 200;

std::map<std::string, std::set<std::string>> values_by_source(const AugmentedDataset& dataset) {
    std::map<std::string, std::set<std::string>> result;
    for (const auto& record : dataset.augmented) {
        result[record.source_x].insert(record.x_prime);
    }
    return result;
}

} // namespace

TEST_CASE("generated models are valid and enumerate to a unit total") {
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        const Scm scm = random_scm(seed);
        REQUIRE_MESSAGE(validate(scm).ok(), "seed ", seed);

        const auto worlds = enumerate_worlds(scm);
        Rat total(0);
        for (const auto& world : worlds) total += world.probability;
        CHECK(total == Rat(1));

        // Every stored world re-evaluates consistently through the
        // independent recursive evaluator.
        for (const auto& world : worlds) {
            if (!world.probability.positive()) continue;
            oracle::Bindings exogenous;
            for (std::size_t v = 0; v < scm.variables.size(); ++v) {
                if (scm.variables[v].kind == VarKind::exogenous) {
                    exogenous[scm.variables[v].name] = world.values[v];
                }
            }
            for (std::size_t v = 0; v < scm.variables.size(); ++v) {
                CHECK(oracle::eval_var(scm, scm.variables[v].name, exogenous, {}) ==
                      world.values[v]);
            }
        }

        // An exogenous marginal is its own prior.
        for (const auto& prior : scm.priors) {
            const Distribution computed = marginal(scm, prior.variable);
            for (const auto& [label, mass] : prior.pmf) {
                CHECK(computed.mass(label) == mass);
            }
        }
    }
}

TEST_CASE("the guessed-context support is never larger than the true one") {
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        const Scm scm = random_scm(seed);
        const std::string input = random_scm_input_var(scm);
        for (const auto& context : random_scm_context_vars(scm)) {
            const SupportSubsetResult result = check_support_subset(scm, input, context);
            REQUIRE_MESSAGE(result.holds, "seed ", seed, " context ", context);

            const Partition cf = partition_from(scm, counterfactual_constraints(scm, input, context));
            const Partition cda = partition_from(scm, guess_cda_constraints(scm, input, context));
            CHECK(compare_partitions(cda, cf) != PartitionRelation::inconsistent);
        }
    }
}

TEST_CASE("counterfactuals equal the brute-force double sum on every query") {
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        const Scm scm = random_scm(seed);
        for (const auto& target_spec : scm.variables) {
            if (target_spec.kind != VarKind::endogenous) continue;
            const Distribution target_marginal = marginal(scm, target_spec.name);
            for (const auto& intervention_spec : scm.variables) {
                for (const auto& evidence_value : target_marginal.support()) {
                    Assignment evidence;
                    evidence.bind(target_spec.name, evidence_value);
                    for (const auto& do_value : intervention_spec.domain) {
                        CounterfactualQuery query;
                        query.target = target_spec.name;
                        query.intervention.bind(intervention_spec.name, do_value);
                        query.evidence = evidence;
                        const Distribution actual = counterfactual(scm, query);

                        Rat total(0);
                        for (const auto& [value, mass] : actual.pmf) {
                            const Rat expected = oracle::counterfactual_mass(
                                scm, target_spec.name, value,
                                {{intervention_spec.name, do_value}},
                                {{target_spec.name, evidence_value}});
                            CHECK_MESSAGE(mass == expected, "seed ", seed, " target ",
                                          target_spec.name, " do ", intervention_spec.name, "=",
                                          do_value, " | ", evidence_value);
                            total += mass;
                        }
                        CHECK(total == Rat(1));
                    }
                }
            }
        }
    }
}

TEST_CASE("pinning all exogenous variables makes counterfactuals deterministic") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Scm scm = random_scm(seed);
        const auto worlds = enumerate_worlds(scm);
        const World* pinned = nullptr;
        for (const auto& world : worlds) {
            if (world.probability.positive()) {
                pinned = &world;
                break;
            }
        }
        REQUIRE(pinned != nullptr);

        Assignment evidence;
        for (std::size_t v = 0; v < scm.variables.size(); ++v) {
            if (scm.variables[v].kind == VarKind::exogenous) {
                evidence.bind(scm.variables[v].name, pinned->values[v]);
            }
        }
        const std::string input = random_scm_input_var(scm);
        for (const auto& context : random_scm_context_vars(scm)) {
            for (const auto& do_value : scm.find_variable(context)->domain) {
                CounterfactualQuery query;
                query.target = input;
                query.intervention.bind(context, do_value);
                query.evidence = evidence;
                CHECK(counterfactual(scm, query).support().size() == 1);
            }
        }
    }
}

TEST_CASE("posterior-context augmentation at tau 0 reproduces the full supports") {
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        const Scm scm = random_scm(seed);
        const std::string input = random_scm_input_var(scm);
        const std::string label = scm.variables.front().name; // labels are only copied
        const std::string label_value = scm.variables.front().domain.front();

        std::vector<LabeledExample> data;
        for (const auto& x : marginal(scm, input).support()) {
            data.push_back({x, label_value, 1});
        }

        for (const auto& context : random_scm_context_vars(scm)) {
            const AugmentedDataset full = full_cda(scm, input, label, context, data);
            const AugmentedDataset tau0 = posterior_cda(scm, input, label, context, data);
            CHECK_MESSAGE(values_by_source(full) == values_by_source(tau0), "seed ", seed,
                          " context ", context);

            const AugmentedDataset guess = guess_cda(scm, input, label, context, data);
            const auto full_values = values_by_source(full);
            for (const auto& [source, values] : values_by_source(guess)) {
                const auto& reference = full_values.at(source);
                CHECK(std::includes(reference.begin(), reference.end(), values.begin(),
                                    values.end()));
            }

            // Labels ride along unchanged.
            for (const auto& record : full.augmented) CHECK(record.y == label_value);
        }
    }
}
