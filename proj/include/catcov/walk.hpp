#ifndef CATCOV_WALK_HPP
#define CATCOV_WALK_HPP

#include <map>
#include <vector>

#include "catcov/category.hpp"

namespace catcov {

/// One step of a walk; an inverse letter traverses the morphism backwards.
struct Letter {
    MorId mor;
    bool inverse;
    auto operator<=>(const Letter&) const = default;
};

/// A reduced sequence of forward/inverse morphism letters, in application
/// order (letters.front() is applied first).
struct Walk {
    ObjId src;
    ObjId tgt;
    std::vector<Letter> letters;

    bool empty() const { return letters.empty(); }
    auto operator<=>(const Walk&) const = default;
};

Walk empty_walk(ObjId at);

/// Checks endpoint chaining; throws EndpointMismatch.
void check_walk(const FiniteCategory& c, const Walk& w);

/// Fractions-mode normal form: cancels adjacent (m,fwd)(m,inv) and
/// (m,inv)(m,fwd) pairs and composes adjacent forward pairs through the
/// composition table, repeatedly.
Walk normalize(const FiniteCategory& c, Walk w);

/// Composition w2 after w1: concatenation followed by normalization.
Walk free_compose(const FiniteCategory& c, const Walk& w2, const Walk& w1);

Walk inverse_walk(const Walk& w);

std::string walk_to_string(const FiniteCategory& c, const Walk& w);

/// Evaluates the functor induced by F and an assignment theta of inverse
/// letters on a walk; composes images in F's target.
MorVal eval_universal(const CatFunctor& F, const std::map<MorId, MorVal>& theta,
                      const Walk& w);

/// All walks between any endpoints with exactly `len` letters (not
/// necessarily reduced), in deterministic order. Test/oracle helper.
std::vector<Walk> enumerate_walks(const FiniteCategory& c, int len);

/// Brute-force oracle for equality in the category of fractions: closes the
/// cancellation congruence over all walks of length <= max_len and reports
/// whether a and b fall in one class. Both walks (and the intermediate
/// sequences that witness equality) must fit in the bound for a True answer;
/// the closure is exact on the fixtures used at desk scale.
bool walks_equal_oracle(const FiniteCategory& c, const Walk& a, const Walk& b,
                        int max_len);

}  // namespace catcov

#endif
