#ifndef CFAUDIT_MODELS_HPP
#define CFAUDIT_MODELS_HPP

#include "cfaudit/rational.hpp"
#include "cfaudit/scm.hpp"

namespace cfaudit {

/**
 * The linear strictness witness: X = Z + 2*U_X tabulated over
 * Z in {-1, 1} (each 1/2) and U_X in {-1, 0, 1} (2/5, 1/5, 2/5), so
 * X ranges over {-3, -1, 1, 3}. On this model the true-counterfactual
 * constraints force a constant representation while guessed-context
 * constraints leave two classes.
 */
Scm build_linear_scm();

/**
 * The review-classification model. Exogenous: reviewer type U_X in
 * {1, -1} (straightforward with probability p_straightforward, sarcastic
 * otherwise), sentiment Z in {like, dislike} (1/2 each), content C over
 * n_contents values alternating good_k / poor_k (uniform), label noise
 * U_Y fixed at 0. Endogenous: the review X = "content|tone" where a
 * straightforward reviewer maps like -> positive and dislike -> negative,
 * and a sarcastic reviewer maps like -> neutral and dislike -> positive;
 * the helpfulness Y depends only on whether the content is a good_k.
 */
Scm build_review_scm(const Rat& p_straightforward = Rat(9, 10), int n_contents = 2);

} // namespace cfaudit

#endif
