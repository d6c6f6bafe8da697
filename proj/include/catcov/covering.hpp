#ifndef CATCOV_COVERING_HPP
#define CATCOV_COVERING_HPP

#include <optional>
#include <vector>

#include "catcov/category.hpp"

namespace catcov {

/// Non-identity morphisms at an object, tagged by direction. A loop shows
/// up in both lists.
struct Star {
    ObjId object;
    std::vector<MorId> source_star;
    std::vector<MorId> target_star;
};

Star star_at(const FiniteCategory& c, ObjId x);

/// A functor verified to be a covering, with its fibres indexed by base
/// object.
struct CoveringFunctor {
    CatFunctor functor;
    std::vector<std::vector<ObjId>> fibres;

    const FiniteCategory& total() const { return functor.source(); }
    const FiniteCategory& base() const { return functor.target(); }
};

/// Checks object-surjectivity and that every star maps bijectively onto the
/// star downstairs, tag by tag. Throws NotSurjectiveOnObjects,
/// StarNotInjective or StarNotSurjective.
CoveringFunctor check_covering(CatFunctor F);

/// A finite group acting on a category through automorphisms.
/// table[i][j] is the index of element i*j, where products compose like
/// functors (i after j).
struct GroupAction {
    std::vector<std::string> element_names;
    std::vector<std::vector<int>> table;
    int identity = 0;
    std::vector<CatFunctor> functors;

    int size() const { return static_cast<int>(element_names.size()); }
    int mult(int i, int j) const { return table[i][j]; }
    std::optional<int> inverse_of(int i) const;
};

/// Structural validation: sizes agree, identity acts as the identity
/// functor, each element acts by an automorphism, the table is a group and
/// the action is a homomorphism. Throws BadAction. When require_free is
/// set, additionally throws ActionNotFree if a non-identity element fixes
/// an object.
void check_action(const GroupAction& a, bool require_free);

/// Deck transformations: all automorphisms g of the total category with
/// F.g = F, found by unique star-transport extension from the fibre over
/// the image of object 0. Requires the total category connected.
GroupAction aut_group(const CoveringFunctor& F);

/// True iff the total category is connected and the deck group is as large
/// as the fibre (freeness makes this transitivity).
bool is_galois(const CoveringFunctor& F);

struct OrbitResult {
    CategoryPtr quotient;
    CoveringFunctor projection;
};

/// Orbit category of a free action: objects and morphisms are orbits,
/// composition goes through the unique composable translate. The
/// projection is returned as a verified covering.
OrbitResult orbit_category(CategoryPtr c, const GroupAction& a);

/// The unique functor H with G.H = F and H(c) = d, by star transport
/// across the connected total category of F. Returns nullopt when the
/// transport contradicts itself (no lift). Throws FibreMismatch when
/// F(c) != G(d), NotConnected otherwise. A seed permutes the traversal;
/// the result never depends on it.
std::optional<CatFunctor> lift_pointed(const CoveringFunctor& F, const CoveringFunctor& G,
                                       ObjId c, ObjId d,
                                       std::optional<unsigned> traversal_seed = {});

/// The group homomorphism induced on deck groups by a map of Galois
/// coverings H: total(F) -> total(G) with G.H = F.
struct LambdaResult {
    GroupAction source_group;  // deck group of F
    GroupAction target_group;  // deck group of G
    std::vector<int> map;      // source element -> target element
    std::vector<int> kernel;   // source elements fixed by H-conjugation
    bool surjective = false;
};

/// For each deck transformation g of F finds the unique g' of G with
/// H.g = g'.H (matched on one object, verified globally). Throws
/// NotEquivariant when no partner exists or the assignment is not a
/// surjective homomorphism.
LambdaResult lambda_of(const CoveringFunctor& F, const CoveringFunctor& G,
                       const CatFunctor& H);

struct PullbackResult {
    CategoryPtr total;
    CoveringFunctor projection;   // onto the source of theta
    CatFunctor fibre_projection;  // onto the total category of G
};

/// Pullback of the covering G along an identity-on-objects functor theta.
/// Objects are pairs (b, g) with g in the fibre over b; morphisms pairs
/// (f, h) with theta(f) = G(h). Throws ObjectSetMismatch unless theta is
/// identity on objects.
PullbackResult pullback_covering(const CatFunctor& theta, const CoveringFunctor& G);

}  // namespace catcov

#endif
