#ifndef CATCOV_UNIVERSAL_HPP
#define CATCOV_UNIVERSAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "catcov/covering.hpp"
#include "catcov/presentation.hpp"

namespace catcov {

/// All freely reduced words of length <= radius over `rank` generators, in
/// breadth-first order (the empty word first, then by length, letters in
/// generator order with the positive sign first).
std::vector<Word> free_ball_words(int rank, int radius);

/// A bounded piece of the universal cover of a connected category whose
/// vertex group simplifies to a free presentation. Objects are pairs
/// (b, w): the base object b together with a reduced word w of length at
/// most `radius`; a boundary object is one whose star is truncated by the
/// radius bound, so the projection is only star-bijective on the interior.
struct CoverBall {
    CategoryPtr total;
    CatFunctor projection;       // total -> base; not a covering at the boundary
    std::vector<bool> boundary;  // per object of total
    std::vector<Word> words;     // per object of total
    GroupPresentation group;     // free presentation of the base vertex group
    ObjId base_point = 0;
    int radius = 0;

    std::vector<ObjId> interior() const;
};

/// Builds the radius-bounded universal cover of `base` at `base_point`.
/// Throws NotConnected, or BudgetOrNonFree when the simplified vertex-group
/// presentation still has relators (or the simplification budget ran out).
CoverBall universal_ball(CategoryPtr base, ObjId base_point, int radius,
                         int max_tietze = kDefaultTietzeSteps);

/// The functor (b, w) -> (b, g.w) from one ball into a larger one, built
/// by word translation; nullopt when some translated word falls outside
/// `to`. Both balls must be over the same base and base point. With g
/// empty this is the inclusion of the smaller ball. Commutation with the
/// projections is verified.
std::optional<CatFunctor> ball_translation(const CoverBall& from, const CoverBall& to,
                                           const Word& g);

struct DoubleResult {
    CoverBall ball;          // universal ball of the two-object arrow category
    CategoryPtr double_cat;  // double of the Cayley-graph ball, built from words only
    CatFunctor iso;          // double_cat -> ball.total, matching words letterwise
};

/// The double of the radius-bounded Cayley graph of the free group on all
/// arrows but the first, checked against the universal ball of the
/// category with two objects and the given parallel arrows. Throws EmptyE.
DoubleResult cayley_double(const std::vector<std::string>& arrows, int radius);

/// The map of pointed coverings from the ball onto a Galois covering F of
/// the same base: each object (b, w) goes to the endpoint of the lift of
/// its defining walk starting at `pointed`. Functoriality and commutation
/// with the projections are verified. Throws NotGalois, FibreMismatch,
/// EndpointMismatch.
CatFunctor covers_all(const CoverBall& ball, const CoveringFunctor& F, ObjId pointed);

}  // namespace catcov

#endif
