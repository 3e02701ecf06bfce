#include "cfaudit/models.hpp"

#include "cfaudit/errors.hpp"

#include <string>

namespace cfaudit {

Scm build_linear_scm() {
    Scm scm;
    scm.variables = {
        {"Z", VarKind::exogenous, {"-1", "1"}},
        {"U_X", VarKind::exogenous, {"-1", "0", "1"}},
        {"X", VarKind::endogenous, {"-3", "-1", "1", "3"}},
    };
    scm.priors = {
        {"Z", {{"-1", Rat(1, 2)}, {"1", Rat(1, 2)}}},
        {"U_X", {{"-1", Rat(2, 5)}, {"0", Rat(1, 5)}, {"1", Rat(2, 5)}}},
    };

    StructuralEquation sum;
    sum.child = "X";
    sum.parents = {"Z", "U_X"};
    for (const int z : {-1, 1}) {
        for (const int u : {-1, 0, 1}) {
            sum.table.push_back(
                {{std::to_string(z), std::to_string(u)}, std::to_string(z + 2 * u)});
        }
    }
    scm.equations = {sum};
    return scm;
}

Scm build_review_scm(const Rat& p_straightforward, int n_contents) {
    if (n_contents < 1) {
        throw QueryError("review model needs at least one content value");
    }
    if (p_straightforward < Rat(0) || p_straightforward > Rat(1)) {
        throw QueryError("reviewer-type probability must lie in [0, 1], got " +
                         p_straightforward.str());
    }

    std::vector<std::string> contents;
    for (int i = 0; i < n_contents; ++i) {
        const std::string stem = i % 2 == 0 ? "good_" : "poor_";
        contents.push_back(stem + std::to_string(i / 2 + 1));
    }
    const std::vector<std::string> tones = {"positive", "negative", "neutral"};

    Scm scm;
    VariableSpec reviewer{"U_X", VarKind::exogenous, {"1", "-1"}};
    VariableSpec sentiment{"Z", VarKind::exogenous, {"like", "dislike"}};
    VariableSpec content{"C", VarKind::exogenous, contents};
    VariableSpec label_noise{"U_Y", VarKind::exogenous, {"0"}};
    VariableSpec review{"X", VarKind::endogenous, {}};
    for (const auto& c : contents) {
        for (const auto& tone : tones) review.domain.push_back(c + "|" + tone);
    }
    VariableSpec helpfulness{"Y", VarKind::endogenous, {"helpful", "not_helpful"}};
    scm.variables = {reviewer, sentiment, content, label_noise, review, helpfulness};

    ExogenousPrior reviewer_prior{"U_X",
                                  {{"1", p_straightforward}, {"-1", Rat(1) - p_straightforward}}};
    ExogenousPrior sentiment_prior{"Z", {{"like", Rat(1, 2)}, {"dislike", Rat(1, 2)}}};
    ExogenousPrior content_prior{"C", {}};
    for (const auto& c : contents) {
        content_prior.pmf.emplace_back(c, Rat(1, static_cast<std::int64_t>(contents.size())));
    }
    ExogenousPrior label_noise_prior{"U_Y", {{"0", Rat(1)}}};
    scm.priors = {reviewer_prior, sentiment_prior, content_prior, label_noise_prior};

    // Tone: straightforward reviewers write as they feel; sarcastic ones
    // write positively about what they dislike and neutrally about what
    // they like.
    const auto tone_of = [](const std::string& reviewer_type, const std::string& z) {
        if (reviewer_type == "1") return z == "like" ? "positive" : "negative";
        return z == "like" ? "neutral" : "positive";
    };

    StructuralEquation review_eq;
    review_eq.child = "X";
    review_eq.parents = {"C", "Z", "U_X"};
    for (const auto& c : contents) {
        for (const auto& z : sentiment.domain) {
            for (const auto& u : reviewer.domain) {
                review_eq.table.push_back({{c, z, u}, c + "|" + tone_of(u, z)});
            }
        }
    }

    StructuralEquation label_eq;
    label_eq.child = "Y";
    label_eq.parents = {"C"};
    for (const auto& c : contents) {
        label_eq.table.push_back({{c}, c.starts_with("good_") ? "helpful" : "not_helpful"});
    }

    scm.equations = {review_eq, label_eq};
    return scm;
}

} // namespace cfaudit
