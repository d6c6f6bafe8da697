#ifndef CATCOV_GRADING_HPP
#define CATCOV_GRADING_HPP

#include <optional>
#include <vector>

#include "catcov/covering.hpp"

namespace catcov {

/// A finite category in which every morphism is invertible, together with
/// the inverse map on non-identity morphisms.
struct FiniteGroupoid {
    CategoryPtr cat;
    std::vector<MorId> inverse;

    MorVal inv(MorVal v) const { return v.is_id() ? v : MorVal::gen(inverse[v.mor()]); }
};

/// Validates the inverse map: two-sided inverses, involution. Throws
/// NotAGroupoid.
FiniteGroupoid make_groupoid(CategoryPtr cat, std::vector<MorId> inverse);

/// Finds the inverse of every morphism by search; throws NotAGroupoid when
/// one is missing.
FiniteGroupoid infer_groupoid(CategoryPtr cat);

/// A degree functor into a groupoid.
struct Grading {
    CatFunctor functor;  // X, with target target.cat
    FiniteGroupoid target;
};

/// A totally disconnected normal subgroupoid: per object, a subgroup of the
/// vertex group given by its non-identity members.
struct NormalSubgroupoid {
    CategoryPtr parent;
    std::vector<std::vector<MorId>> loops;
};

/// Validates endpoints, subgroup closure and conjugation-invariance.
/// Throws NotTotallyDisconnected or NotNormal.
void check_normal_subgroupoid(const FiniteGroupoid& g, const NormalSubgroupoid& n);

/// Morphisms killed by a functor between groupoids that is injective on
/// objects. Throws NotInjectiveOnObjects.
NormalSubgroupoid kernel_functor(const FiniteGroupoid& g, const FiniteGroupoid& h,
                                 const CatFunctor& F);

struct GroupoidQuotient {
    FiniteGroupoid quotient;
    CatFunctor projection;
};

/// Quotient by a totally disconnected normal subgroupoid: f and g are
/// identified when f = beta.g.alpha with alpha, beta in N.
GroupoidQuotient quotient_groupoid(const FiniteGroupoid& g, const NormalSubgroupoid& n);

struct SmashResult {
    CategoryPtr total;
    CoveringFunctor projection;  // forgets the second coordinate
    GroupAction vertex_action;   // the vertex group at x0, acting freely
};

/// Smash product of a grading at a groupoid object x0: objects are pairs
/// (b, gamma: Xb -> x0), a morphism f: b -> c connects (b, gamma) to
/// (c, gamma.X(f)^-1). Verifies the projection is a covering and that its
/// fibres coincide with the vertex-group orbits.
SmashResult smash_product(const Grading& x, ObjId x0);

/// True iff the smash product at any object is connected; requires the
/// target connected and the grading bijective on objects. Throws
/// NotBijectiveOnObjects or TargetNotConnected.
bool is_effective(const Grading& x);

/// The unique functor Z with Z.X = Y, when the generator assignment
/// Z(X(f)) = Y(f) extends multiplicatively; nullopt otherwise.
std::optional<CatFunctor> grading_morphism(const Grading& x, const Grading& y);

/// Least object of each fibre, as a section of the covering.
std::vector<ObjId> default_section(const CoveringFunctor& p);

/// Grading associated with a Galois covering presented by its deck action:
/// the target has a copy of the deck group between any two base objects,
/// and [f] maps to d(y')^-1 d(x') for any representative f': x' -> y',
/// where d is the deviation of the section. Verifies representative
/// independence and effectiveness. Throws SectionNotEquivariant for an
/// invalid section, BadAction when the deck action is not simply
/// transitive on fibres.
Grading associated_grading(const CoveringFunctor& p, const GroupAction& deck,
                           const std::vector<ObjId>& section);

struct RoundtripResult {
    Grading grading;
    SmashResult smash;
    CatFunctor iso;  // smash total -> total of the covering
};

/// Rebuilds the covering from its associated grading: the smash of the
/// grading at base_orbit is isomorphic to the original total category via
/// ([x], gamma) -> gamma.[x]0, commuting with both projections on the
/// nose. The commutation and invertibility are verified.
RoundtripResult roundtrip_iso(const CoveringFunctor& p, const GroupAction& deck,
                              const std::vector<ObjId>& section, ObjId base_orbit);

/// Checks the slice-pullback model of the smash product: the slice
/// groupoid at x0 covers the target, and the comma pullback of that
/// covering along X is isomorphic to smash_product(x, x0). Returns true;
/// any mismatch throws.
bool slice_pullback_check(const Grading& x, ObjId x0);

}  // namespace catcov

#endif
