#ifndef CFAUDIT_SERIALIZE_HPP
#define CFAUDIT_SERIALIZE_HPP

#include "cfaudit/augment.hpp"
#include "cfaudit/classifier.hpp"
#include "cfaudit/demos.hpp"
#include "cfaudit/distribution.hpp"
#include "cfaudit/invariance.hpp"
#include "cfaudit/scm.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace cfaudit {

using Json = nlohmann::ordered_json;

/**
 * Model file schema: a JSON object with exactly the keys `variables`
 * (array of {name, kind, domain}), `priors` (object mapping exogenous
 * names to {value: rational-string}), and `equations` (array of {child,
 * parents, table: [{given, value}]}). Rationals are strings ("9/10",
 * "0.9", "1"), converted exactly. Unknown keys are rejected anywhere.
 *
 * Parsing checks structure only; semantic problems (masses not summing
 * to 1, non-total tables, cycles) are left for validate().
 */
Scm scm_from_json(const Json& document);
Json scm_to_json(const Scm& scm);

/// Reads and parses a model file. ParseError on unreadable files, bad
/// JSON (with position diagnostics), or schema violations (with a field path).
Scm load_scm_file(const std::filesystem::path& path);

Json to_json(const Distribution& distribution);
Json to_json(const JointDistribution& joint);
Json to_json(const Partition& partition);
Json to_json(const ConstraintSet& constraints);
Json to_json(const SupportSubsetResult& result);
Json to_json(const OodReport& report);
Json to_json(const AppendixDemoReport& report);
Json to_json(const ReviewDemoReport& report);

/// Inverses for the documents that round-trip (exact: rationals travel
/// as strings). The model resolves labels and validates membership.
Distribution distribution_from_json(const Scm& scm, const Json& document);
Partition partition_from_json(const Json& document);

/**
 * Dataset files are JSON Lines: one object per record. Plain records
 * carry {x, y, weight?}; weight defaults to 1 and must be positive.
 * Augmented records additionally carry {source_x, intervened_z, mode,
 * context_used, mass}. Unknown keys are rejected.
 */
std::vector<LabeledExample> load_dataset_file(const std::filesystem::path& path);
std::vector<LabeledExample> dataset_from_lines(std::istream& in, const std::string& origin);

void write_dataset(std::ostream& out, std::span<const LabeledExample> data);
void write_augmented_dataset(std::ostream& out, const AugmentedDataset& dataset);

} // namespace cfaudit

#endif
