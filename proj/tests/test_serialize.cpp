#include "cfaudit/serialize.hpp"

#include "cfaudit/errors.hpp"
#include "cfaudit/inference.hpp"
#include "cfaudit/models.hpp"
#include "cfaudit/random_scm.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

using namespace cfaudit;

namespace {

const std::filesystem::path kFixtures = CFAUDIT_FIXTURE_DIR;

struct TempFile {
    std::filesystem::path path;

    explicit TempFile(const std::string& name, const std::string& content)
        : path(std::filesystem::temp_directory_path() / name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::filesystem::remove(path); }
};

} // namespace

TEST_CASE("bundled model fixtures parse to exactly the built-in models") {
    CHECK(load_scm_file(kFixtures / "linear.scm.json") == build_linear_scm());
    CHECK(load_scm_file(kFixtures / "review.scm.json") == build_review_scm());
}

TEST_CASE("models round-trip through their JSON form") {
    for (const Scm& scm : {build_linear_scm(), build_review_scm(), random_scm(3),
                           random_scm(77)}) {
        CHECK(scm_from_json(scm_to_json(scm)) == scm);
    }
}

TEST_CASE("decimal prior strings convert exactly") {
    Json document = scm_to_json(build_review_scm());
    document["priors"]["U_X"]["1"] = "0.9";
    document["priors"]["U_X"]["-1"] = "0.1";
    CHECK(scm_from_json(document) == build_review_scm());
}

TEST_CASE("unknown keys are rejected wherever they appear") {
    Json document = scm_to_json(build_linear_scm());

    Json top = document;
    top["comment"] = "nope";
    CHECK_THROWS_WITH_AS(scm_from_json(top), doctest::Contains("unknown key"), ParseError);

    Json variable = document;
    variable["variables"][0]["color"] = "red";
    CHECK_THROWS_WITH_AS(scm_from_json(variable), doctest::Contains("$.variables[0]"),
                         ParseError);

    Json row = document;
    row["equations"][0]["table"][0]["note"] = "x";
    CHECK_THROWS_AS(scm_from_json(row), ParseError);
}

TEST_CASE("schema violations carry a field path") {
    Json document = scm_to_json(build_linear_scm());
    document["priors"]["Z"]["-1"] = "not-a-number";
    try {
        scm_from_json(document);
        FAIL("expected a parse error");
    } catch (const ParseError& error) {
        CHECK(std::string(error.what()).find("$.priors.Z.-1") != std::string::npos);
    }

    Json bad_kind = scm_to_json(build_linear_scm());
    bad_kind["variables"][0]["kind"] = "latent";
    CHECK_THROWS_WITH_AS(scm_from_json(bad_kind), doctest::Contains("exogenous"), ParseError);
}

TEST_CASE("unreadable and ill-formed files raise parse errors") {
    CHECK_THROWS_AS(load_scm_file(kFixtures / "does-not-exist.json"), ParseError);

    const TempFile truncated("cfaudit_truncated.json", "{\"variables\": [");
    CHECK_THROWS_AS(load_scm_file(truncated.path), ParseError);
}

TEST_CASE("semantic problems are left to validate, not parsing") {
    Json document = scm_to_json(build_linear_scm());
    document["priors"]["Z"]["-1"] = "2/5"; // masses now sum to 9/10
    const Scm scm = scm_from_json(document);
    CHECK_FALSE(validate(scm).ok());
}

TEST_CASE("distribution documents round-trip exactly") {
    const Scm scm = build_linear_scm();
    Assignment evidence;
    evidence.bind("X", "1");
    const Distribution original = posterior(scm, "U_X", evidence);
    const Distribution reparsed = distribution_from_json(scm, to_json(original));
    CHECK(reparsed == original);

    Json tampered = to_json(original);
    tampered["pmf"]["5"] = "1/2";
    CHECK_THROWS_AS(distribution_from_json(scm, tampered), ParseError);
}

TEST_CASE("partition documents round-trip exactly") {
    const Scm scm = build_linear_scm();
    const Partition original = partition_from(scm, guess_cda_constraints(scm, "X", "Z"));
    CHECK(partition_from_json(to_json(original)) == original);
}

TEST_CASE("dataset files parse records and reject malformed ones") {
    const TempFile data("cfaudit_data.jsonl",
                        "{\"x\": \"good_1|positive\", \"y\": \"helpful\"}\n"
                        "\n"
                        "{\"x\": \"poor_1|negative\", \"y\": \"not_helpful\", \"weight\": 3}\n");
    const auto examples = load_dataset_file(data.path);
    REQUIRE(examples.size() == 2);
    CHECK(examples[0].weight == 1);
    CHECK(examples[1].weight == 3);

    const TempFile bad_weight("cfaudit_bad_weight.jsonl",
                              "{\"x\": \"a\", \"y\": \"b\", \"weight\": 0}\n");
    CHECK_THROWS_WITH_AS(load_dataset_file(bad_weight.path), doctest::Contains("line 1"),
                         ParseError);

    const TempFile unknown_key("cfaudit_unknown.jsonl", "{\"x\": \"a\", \"y\": \"b\", \"q\": 1}\n");
    CHECK_THROWS_AS(load_dataset_file(unknown_key.path), ParseError);

    const TempFile bad_json("cfaudit_bad.jsonl", "{\"x\": \n");
    CHECK_THROWS_AS(load_dataset_file(bad_json.path), ParseError);
}

TEST_CASE("datasets round-trip through the line format") {
    const auto data = sample_dataset(build_review_scm(), "X", "Y", 25, 4);
    std::ostringstream out;
    write_dataset(out, data);
    std::istringstream in(out.str());
    CHECK(dataset_from_lines(in, "roundtrip") == data);
}

TEST_CASE("augmented records carry provenance fields") {
    const Scm scm = build_review_scm();
    const std::vector<LabeledExample> spot = {{"good_1|positive", "helpful", 1}};
    const AugmentedDataset dataset = full_cda(scm, "X", "Y", "Z", spot);

    std::ostringstream out;
    write_augmented_dataset(out, dataset);
    std::istringstream in(out.str());
    std::string line;

    // First line: the original record.
    REQUIRE(std::getline(in, line));
    const Json original = Json::parse(line);
    CHECK(original.at("x") == "good_1|positive");
    CHECK(original.at("weight") == 1);

    std::size_t augmented_lines = 0;
    Rat mass_sum(0);
    while (std::getline(in, line)) {
        const Json record = Json::parse(line);
        CHECK(record.at("source_x") == "good_1|positive");
        CHECK(record.at("mode") == "full");
        CHECK(record.at("context_used") == "all");
        mass_sum += Rat::parse(record.at("mass").get<std::string>());
        ++augmented_lines;
    }
    CHECK(augmented_lines == dataset.augmented.size());
    // Two context values, each distribution summing to one.
    CHECK(mass_sum == Rat(2));
}
