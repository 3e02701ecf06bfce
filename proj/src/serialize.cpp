#include "cfaudit/serialize.hpp"

#include "cfaudit/errors.hpp"

#include <fstream>
#include <sstream>

namespace cfaudit {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ParseError(path + ": " + message);
}

void reject_unknown_keys(const Json& object, const std::vector<std::string>& allowed,
                         const std::string& path) {
    for (const auto& [key, _] : object.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            fail(path, "unknown key '" + key + "'");
        }
    }
}

const Json& expect(const Json& object, const std::string& key, const std::string& path) {
    const auto it = object.find(key);
    if (it == object.end()) fail(path, "missing key '" + key + "'");
    return *it;
}

std::string expect_string(const Json& value, const std::string& path) {
    if (!value.is_string()) fail(path, "expected a string");
    return value.get<std::string>();
}

Rat expect_rational(const Json& value, const std::string& path) {
    if (!value.is_string()) {
        fail(path, "expected a rational as a string (\"p/q\", \"0.9\", ...)");
    }
    try {
        return Rat::parse(value.get<std::string>());
    } catch (const ParseError& error) {
        fail(path, error.what());
    }
}

std::vector<std::string> expect_string_array(const Json& value, const std::string& path) {
    if (!value.is_array()) fail(path, "expected an array of strings");
    std::vector<std::string> result;
    for (std::size_t i = 0; i < value.size(); ++i) {
        result.push_back(expect_string(value[i], path + "[" + std::to_string(i) + "]"));
    }
    return result;
}

} // namespace

Scm scm_from_json(const Json& document) {
    if (!document.is_object()) fail("$", "expected a JSON object");
    reject_unknown_keys(document, {"variables", "priors", "equations"}, "$");

    Scm scm;

    const Json& variables = expect(document, "variables", "$");
    if (!variables.is_array()) fail("$.variables", "expected an array");
    for (std::size_t i = 0; i < variables.size(); ++i) {
        const std::string path = "$.variables[" + std::to_string(i) + "]";
        const Json& entry = variables[i];
        if (!entry.is_object()) fail(path, "expected an object");
        reject_unknown_keys(entry, {"name", "kind", "domain"}, path);

        VariableSpec variable;
        variable.name = expect_string(expect(entry, "name", path), path + ".name");
        const std::string kind = expect_string(expect(entry, "kind", path), path + ".kind");
        if (kind == "exogenous") {
            variable.kind = VarKind::exogenous;
        } else if (kind == "endogenous") {
            variable.kind = VarKind::endogenous;
        } else {
            fail(path + ".kind", "expected \"exogenous\" or \"endogenous\", got \"" + kind + "\"");
        }
        variable.domain = expect_string_array(expect(entry, "domain", path), path + ".domain");
        scm.variables.push_back(std::move(variable));
    }

    const Json& priors = expect(document, "priors", "$");
    if (!priors.is_object()) fail("$.priors", "expected an object");
    for (const auto& [name, pmf] : priors.items()) {
        const std::string path = "$.priors." + name;
        if (!pmf.is_object()) fail(path, "expected an object mapping values to rationals");
        ExogenousPrior prior;
        prior.variable = name;
        for (const auto& [label, mass] : pmf.items()) {
            prior.pmf.emplace_back(label, expect_rational(mass, path + "." + label));
        }
        scm.priors.push_back(std::move(prior));
    }

    const Json& equations = expect(document, "equations", "$");
    if (!equations.is_array()) fail("$.equations", "expected an array");
    for (std::size_t i = 0; i < equations.size(); ++i) {
        const std::string path = "$.equations[" + std::to_string(i) + "]";
        const Json& entry = equations[i];
        if (!entry.is_object()) fail(path, "expected an object");
        reject_unknown_keys(entry, {"child", "parents", "table"}, path);

        StructuralEquation equation;
        equation.child = expect_string(expect(entry, "child", path), path + ".child");
        equation.parents =
            expect_string_array(expect(entry, "parents", path), path + ".parents");

        const Json& table = expect(entry, "table", path);
        if (!table.is_array()) fail(path + ".table", "expected an array");
        for (std::size_t r = 0; r < table.size(); ++r) {
            const std::string row_path = path + ".table[" + std::to_string(r) + "]";
            const Json& row = table[r];
            if (!row.is_object()) fail(row_path, "expected an object");
            reject_unknown_keys(row, {"given", "value"}, row_path);
            EquationRow parsed;
            parsed.given =
                expect_string_array(expect(row, "given", row_path), row_path + ".given");
            parsed.value = expect_string(expect(row, "value", row_path), row_path + ".value");
            equation.table.push_back(std::move(parsed));
        }
        scm.equations.push_back(std::move(equation));
    }

    return scm;
}

Json scm_to_json(const Scm& scm) {
    Json document = Json::object();

    Json variables = Json::array();
    for (const auto& variable : scm.variables) {
        Json entry = Json::object();
        entry["name"] = variable.name;
        entry["kind"] = variable.kind == VarKind::exogenous ? "exogenous" : "endogenous";
        entry["domain"] = variable.domain;
        variables.push_back(std::move(entry));
    }
    document["variables"] = std::move(variables);

    Json priors = Json::object();
    for (const auto& prior : scm.priors) {
        Json pmf = Json::object();
        for (const auto& [label, mass] : prior.pmf) pmf[label] = mass.str();
        priors[prior.variable] = std::move(pmf);
    }
    document["priors"] = std::move(priors);

    Json equations = Json::array();
    for (const auto& equation : scm.equations) {
        Json entry = Json::object();
        entry["child"] = equation.child;
        entry["parents"] = equation.parents;
        Json table = Json::array();
        for (const auto& row : equation.table) {
            Json parsed = Json::object();
            parsed["given"] = row.given;
            parsed["value"] = row.value;
            table.push_back(std::move(parsed));
        }
        entry["table"] = std::move(table);
        equations.push_back(std::move(entry));
    }
    document["equations"] = std::move(equations);

    return document;
}

Scm load_scm_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read model file '" + path.string() + "'");
    Json document;
    try {
        document = Json::parse(in);
    } catch (const nlohmann::json::parse_error& error) {
        throw ParseError("model file '" + path.string() + "': " + error.what());
    }
    try {
        return scm_from_json(document);
    } catch (const ParseError& error) {
        throw ParseError("model file '" + path.string() + "': " + error.what());
    }
}

Json to_json(const Distribution& distribution) {
    Json document = Json::object();
    document["variable"] = distribution.variable;
    Json pmf = Json::object();
    for (const auto& [label, mass] : distribution.pmf) pmf[label] = mass.str();
    document["pmf"] = std::move(pmf);
    return document;
}

Json to_json(const JointDistribution& joint) {
    Json document = Json::object();
    document["variables"] = joint.variables;
    Json pmf = Json::array();
    for (const auto& [labels, mass] : joint.pmf) {
        Json entry = Json::object();
        entry["values"] = labels;
        entry["mass"] = mass.str();
        pmf.push_back(std::move(entry));
    }
    document["pmf"] = std::move(pmf);
    return document;
}

Json to_json(const Partition& partition) {
    Json document = Json::object();
    document["variable"] = partition.input_var;
    document["classes"] = partition.classes;
    return document;
}

Json to_json(const ConstraintSet& constraints) {
    Json document = Json::object();
    document["variable"] = constraints.input_var;
    Json list = Json::array();
    for (const auto& constraint : constraints.constraints) {
        Json entry = Json::object();
        entry["x"] = constraint.x;
        entry["peers"] = constraint.peers;
        list.push_back(std::move(entry));
    }
    document["constraints"] = std::move(list);
    return document;
}

Json to_json(const SupportSubsetResult& result) {
    Json document = Json::object();
    document["holds"] = result.holds;
    if (result.witness.has_value()) {
        Json witness = Json::object();
        witness["x"] = result.witness->x;
        witness["z"] = result.witness->z;
        witness["x_prime"] = result.witness->x_prime;
        document["witness"] = std::move(witness);
    }
    return document;
}

Json to_json(const OodReport& report) {
    Json document = Json::object();
    document["method"] = report.exact ? "exact_expectation" : "sampled";
    if (!report.exact) document["n"] = report.n;
    document["accuracy"] = report.accuracy.str();
    document["accuracy_decimal"] = report.accuracy.to_double();
    document["abstention_rate"] = report.abstention_rate.str();
    Json per_class = Json::array();
    for (const auto& stats : report.per_class) {
        Json entry = Json::object();
        entry["class"] = stats.key;
        entry["label"] = stats.label.has_value() ? Json(*stats.label) : Json(nullptr);
        entry["mass"] = stats.mass.str();
        entry["correct"] = stats.correct.str();
        entry["abstained"] = stats.abstained.str();
        per_class.push_back(std::move(entry));
    }
    document["per_class"] = std::move(per_class);
    return document;
}

Json to_json(const AppendixDemoReport& report) {
    Json document = Json::object();
    document["demo"] = "appendix";
    document["input_marginal"] = to_json(report.input_marginal);

    Json per_input = Json::array();
    for (const auto& per : report.per_input) {
        Json entry = Json::object();
        entry["x"] = per.x;
        entry["map_context"] = per.map_context;
        entry["map_tie"] = per.map_tie;
        entry["context_posterior"] = to_json(per.context_posterior);
        Json counterfactuals = Json::object();
        for (const auto& [z, dist] : per.counterfactuals) counterfactuals[z] = to_json(dist);
        entry["counterfactuals"] = std::move(counterfactuals);
        Json guesses = Json::object();
        for (const auto& [z, dist] : per.guess_counterfactuals) guesses[z] = to_json(dist);
        entry["guess_counterfactuals"] = std::move(guesses);
        per_input.push_back(std::move(entry));
    }
    document["per_input"] = std::move(per_input);

    document["cf_constraints"] = to_json(report.cf_constraints);
    document["cda_constraints"] = to_json(report.cda_constraints);
    document["cf_partition"] = to_json(report.cf_partition);
    document["cda_partition"] = to_json(report.cda_partition);
    document["support_subset"] = to_json(report.support_subset);
    document["verdict"] = std::string(to_string(report.verdict));
    document["failures"] = report.failures;
    return document;
}

namespace {

Json to_json(const AugmentedExample& record) {
    Json entry = Json::object();
    entry["x"] = record.x_prime;
    entry["y"] = record.y;
    entry["source_x"] = record.source_x;
    entry["intervened_z"] = record.intervened_z;
    entry["mode"] = std::string(to_string(record.mode));
    entry["context_used"] = record.context_used.has_value() ? *record.context_used : "all";
    entry["mass"] = record.mass.str();
    return entry;
}

Json to_json(const ReviewDemoReport::Variant& variant) {
    Json entry = Json::object();
    entry["name"] = variant.name;
    entry["train_count"] = variant.train_count;
    Json histogram = Json::object();
    for (const auto& [x, count] : variant.train_histogram) histogram[x] = count;
    entry["train_histogram"] = std::move(histogram);
    entry["guess_partition"] = to_json(variant.guess_partition);
    entry["full_partition"] = to_json(variant.full_partition);
    entry["guess_eval"] = to_json(variant.guess_eval);
    entry["full_eval"] = to_json(variant.full_eval);
    entry["accuracy_gap"] = variant.accuracy_gap.str();
    entry["accuracy_gap_decimal"] = variant.accuracy_gap.to_double();
    return entry;
}

} // namespace

Json to_json(const ReviewDemoReport& report) {
    Json document = Json::object();
    document["demo"] = "review";
    Json params = Json::object();
    params["train_n"] = report.params.train_n;
    params["seed"] = report.params.seed;
    params["test_prior_ux"] = report.params.test_prior_ux.str();
    document["params"] = std::move(params);
    document["expected_neutral_mass"] = report.expected_neutral_mass.str();

    Json spotlight = Json::object();
    spotlight["x"] = report.spotlight.example.x;
    spotlight["y"] = report.spotlight.example.y;
    Json guess_records = Json::array();
    for (const auto& record : report.spotlight.guess_records) {
        guess_records.push_back(to_json(record));
    }
    spotlight["guess_records"] = std::move(guess_records);
    Json full_records = Json::array();
    for (const auto& record : report.spotlight.full_records) {
        full_records.push_back(to_json(record));
    }
    spotlight["full_records"] = std::move(full_records);
    spotlight["guess_values"] = report.spotlight.guess_values;
    spotlight["full_values"] = report.spotlight.full_values;
    document["spotlight"] = std::move(spotlight);

    document["unfiltered"] = to_json(report.unfiltered);
    document["rare_context_absent"] = to_json(report.rare_context_absent);
    document["failures"] = report.failures;
    return document;
}

Distribution distribution_from_json(const Scm& scm, const Json& document) {
    if (!document.is_object()) fail("$", "expected a distribution object");
    reject_unknown_keys(document, {"variable", "pmf"}, "$");
    Distribution distribution;
    distribution.variable = expect_string(expect(document, "variable", "$"), "$.variable");

    const VariableSpec* variable = scm.find_variable(distribution.variable);
    if (variable == nullptr) {
        fail("$.variable", "unknown variable '" + distribution.variable + "'");
    }

    const Json& pmf = expect(document, "pmf", "$");
    if (!pmf.is_object()) fail("$.pmf", "expected an object");
    for (const auto& label : variable->domain) {
        const auto it = pmf.find(label);
        const Rat mass =
            it == pmf.end() ? Rat(0) : expect_rational(*it, "$.pmf." + label);
        distribution.pmf.emplace_back(label, mass);
    }
    for (const auto& [label, _] : pmf.items()) {
        if (std::find(variable->domain.begin(), variable->domain.end(), label) ==
            variable->domain.end()) {
            fail("$.pmf", "value '" + label + "' is not in the domain of '" +
                              distribution.variable + "'");
        }
    }
    return distribution;
}

Partition partition_from_json(const Json& document) {
    if (!document.is_object()) fail("$", "expected a partition object");
    reject_unknown_keys(document, {"variable", "classes"}, "$");
    Partition partition;
    partition.input_var = expect_string(expect(document, "variable", "$"), "$.variable");
    const Json& classes = expect(document, "classes", "$");
    if (!classes.is_array()) fail("$.classes", "expected an array of arrays");
    for (std::size_t c = 0; c < classes.size(); ++c) {
        partition.classes.push_back(
            expect_string_array(classes[c], "$.classes[" + std::to_string(c) + "]"));
    }
    return partition;
}

std::vector<LabeledExample> dataset_from_lines(std::istream& in, const std::string& origin) {
    std::vector<LabeledExample> data;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string path = origin + " line " + std::to_string(line_number);
        Json record;
        try {
            record = Json::parse(line);
        } catch (const nlohmann::json::parse_error& error) {
            fail(path, error.what());
        }
        if (!record.is_object()) fail(path, "expected an object");
        reject_unknown_keys(record, {"x", "y", "weight"}, path);
        LabeledExample example;
        example.x = expect_string(expect(record, "x", path), path + ".x");
        example.y = expect_string(expect(record, "y", path), path + ".y");
        if (const auto it = record.find("weight"); it != record.end()) {
            if (!it->is_number_integer()) fail(path + ".weight", "expected an integer");
            example.weight = it->get<std::int64_t>();
            if (example.weight < 1) fail(path + ".weight", "weight must be positive");
        }
        data.push_back(std::move(example));
    }
    return data;
}

std::vector<LabeledExample> load_dataset_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read dataset file '" + path.string() + "'");
    return dataset_from_lines(in, "dataset file '" + path.string() + "'");
}

void write_dataset(std::ostream& out, std::span<const LabeledExample> data) {
    for (const auto& example : data) {
        Json record = Json::object();
        record["x"] = example.x;
        record["y"] = example.y;
        record["weight"] = example.weight;
        out << record.dump() << '\n';
    }
}

void write_augmented_dataset(std::ostream& out, const AugmentedDataset& dataset) {
    write_dataset(out, dataset.originals);
    for (const auto& record : dataset.augmented) {
        out << to_json(record).dump() << '\n';
    }
}

} // namespace cfaudit
