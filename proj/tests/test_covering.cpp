#include "catcov/covering.hpp"

#include <random>

#include "doctest.h"
#include "fixtures.hpp"

using namespace catcov;

namespace {

// Connected 2-fold cover of K2: alpha lifts straight, beta crosses.
CoveringFunctor double_cover_k2(CategoryPtr base) {
    auto total = fixtures::make({{"x@0", "x@1", "x0@0", "x0@1"},
                                 {{"alpha@0", "x@0", "x0@0"},
                                  {"beta@0", "x@0", "x0@1"},
                                  {"alpha@1", "x@1", "x0@1"},
                                  {"beta@1", "x@1", "x0@0"}},
                                 {}});
    CatFunctor F(total, std::move(base), {0, 0, 1, 1},
                 {MorVal::gen(0), MorVal::gen(1), MorVal::gen(0), MorVal::gen(1)});
    return check_covering(std::move(F));
}

CoveringFunctor identity_covering(CategoryPtr c) {
    return check_covering(CatFunctor::identity(std::move(c)));
}

CoveringFunctor fold_covering(CategoryPtr base) {
    auto total = fixtures::k2_pair();
    CatFunctor F(total, std::move(base), {0, 1, 0, 1},
                 {MorVal::gen(0), MorVal::gen(1), MorVal::gen(0), MorVal::gen(1)});
    return check_covering(std::move(F));
}

// 3-fold cover of K3 glued along the permutations id, (01), (012); their
// common centralizer in S3 is trivial, so the cover has no deck
// transformations besides the identity.
CoveringFunctor asym_triple_cover_k3() {
    auto perm2 = [](int i) { return i == 0 ? 1 : i == 1 ? 0 : 2; };
    auto perm3 = [](int i) { return (i + 1) % 3; };
    RawCategory raw;
    for (int i = 0; i < 3; ++i) raw.objects.push_back("x@" + std::to_string(i));
    for (int i = 0; i < 3; ++i) raw.objects.push_back("x0@" + std::to_string(i));
    std::vector<MorVal> down;
    for (int i = 0; i < 3; ++i) {
        raw.morphisms.push_back(
            {"e1@" + std::to_string(i), "x@" + std::to_string(i), "x0@" + std::to_string(i)});
        raw.morphisms.push_back({"e2@" + std::to_string(i), "x@" + std::to_string(i),
                                 "x0@" + std::to_string(perm2(i))});
        raw.morphisms.push_back({"e3@" + std::to_string(i), "x@" + std::to_string(i),
                                 "x0@" + std::to_string(perm3(i))});
        down.push_back(MorVal::gen(0));
        down.push_back(MorVal::gen(1));
        down.push_back(MorVal::gen(2));
    }
    auto total = fixtures::make(raw);
    auto base = fixtures::k_e(3);
    CatFunctor F(total, base, {0, 0, 0, 1, 1, 1}, std::move(down));
    return check_covering(std::move(F));
}

GroupAction z2_swap_action(CategoryPtr c, std::vector<ObjId> om, std::vector<MorVal> mm) {
    CatFunctor swap(c, c, std::move(om), std::move(mm));
    swap.check();
    return GroupAction{{"1", "s"}, {{0, 1}, {1, 0}}, 0,
                       {CatFunctor::identity(c), std::move(swap)}};
}

}  // namespace

TEST_CASE("identity functor is a covering with singleton fibres") {
    CoveringFunctor cov = identity_covering(fixtures::k2());
    for (const auto& fibre : cov.fibres) CHECK(fibre.size() == 1);
    CHECK(is_galois(cov));
    CHECK(aut_group(cov).size() == 1);
}

TEST_CASE("folding two copies of K2 is a covering with two-point fibres") {
    CoveringFunctor cov = fold_covering(fixtures::k2());
    for (const auto& fibre : cov.fibres) CHECK(fibre.size() == 2);
    CHECK_THROWS_WITH_AS(aut_group(cov), doctest::Contains("NotConnected"), CatError);
    CHECK_FALSE(is_galois(cov));
}

TEST_CASE("star checks reject non-coverings") {
    auto k2 = fixtures::k2();
    // both arrows onto alpha: the star at x is not injective downstairs
    CatFunctor pinch(k2, k2, {0, 1}, {MorVal::gen(0), MorVal::gen(0)});
    CHECK_THROWS_WITH_AS(check_covering(pinch), doctest::Contains("StarNotInjective"),
                         CatError);

    // inclusion of a single arrow misses beta
    auto k1 = fixtures::make({{"x", "x0"}, {{"alpha", "x", "x0"}}, {}});
    CatFunctor incl(k1, k2, {0, 1}, {MorVal::gen(0)});
    CHECK_THROWS_WITH_AS(check_covering(incl), doctest::Contains("StarNotSurjective"),
                         CatError);

    // collapsing the idempotent onto an identity
    auto idem = fixtures::idem();
    auto point = fixtures::make({{"o"}, {}, {}});
    CatFunctor collapse(idem, point, {0}, {MorVal::id(0)});
    CHECK_THROWS_WITH_AS(check_covering(collapse), doctest::Contains("StarNotInjective"),
                         CatError);

    // nothing over x0
    CatFunctor thin(point, k2, {0}, {});
    CHECK_THROWS_WITH_AS(check_covering(thin),
                         doctest::Contains("NotSurjectiveOnObjects"), CatError);
}

TEST_CASE("every verified covering preserves star sizes") {
    for (const CoveringFunctor& cov :
         {identity_covering(fixtures::idem()), double_cover_k2(fixtures::k2()),
          fold_covering(fixtures::k2()), asym_triple_cover_k3()}) {
        const FiniteCategory& c = cov.total();
        for (ObjId x = 0; x < c.num_objects(); ++x) {
            Star up = star_at(c, x);
            Star down = star_at(cov.base(), cov.functor.apply(x));
            CHECK(up.source_star.size() == down.source_star.size());
            CHECK(up.target_star.size() == down.target_star.size());
        }
    }
}

TEST_CASE("the 2-fold cover of K2 is Galois with deck group Z/2") {
    CoveringFunctor cov = double_cover_k2(fixtures::k2());
    GroupAction a = aut_group(cov);
    REQUIRE(a.size() == 2);
    check_action(a, true);
    int s = 1 - a.identity;
    CHECK(a.mult(s, s) == a.identity);
    for (const CatFunctor& g : a.functors) CHECK(cov.functor.after(g) == cov.functor);
    CHECK(is_galois(cov));
}

TEST_CASE("the asymmetric 3-fold cover of K3 is connected but not Galois") {
    CoveringFunctor cov = asym_triple_cover_k3();
    CHECK(cov.total().is_connected());
    CHECK(aut_group(cov).size() == 1);
    CHECK_FALSE(is_galois(cov));
}

TEST_CASE("orbit category of I2 under the swap is the group Z/2") {
    auto i2 = fixtures::i2();
    GroupAction a = z2_swap_action(i2, {1, 0}, {MorVal::gen(1), MorVal::gen(0)});
    OrbitResult orb = orbit_category(i2, a);
    CHECK(orb.quotient->num_objects() == 1);
    REQUIRE(orb.quotient->num_morphisms() == 1);
    CHECK(orb.quotient->compose(MorVal::gen(0), MorVal::gen(0)).is_id());
    CHECK(is_galois(orb.projection));
    GroupAction deck = aut_group(orb.projection);
    CHECK(deck.size() == 2);
}

TEST_CASE("orbit category under the trivial group returns the category itself") {
    auto k2 = fixtures::k2();
    GroupAction triv{{"1"}, {{0}}, 0, {CatFunctor::identity(k2)}};
    OrbitResult orb = orbit_category(k2, triv);
    CHECK(orb.quotient->num_objects() == k2->num_objects());
    CHECK(orb.quotient->num_morphisms() == k2->num_morphisms());
}

TEST_CASE("orbit category of the doubled K2 under the swap folds back to K2") {
    auto pair = fixtures::k2_pair();
    GroupAction a = z2_swap_action(
        pair, {2, 3, 0, 1},
        {MorVal::gen(2), MorVal::gen(3), MorVal::gen(0), MorVal::gen(1)});
    OrbitResult orb = orbit_category(pair, a);
    CHECK(orb.quotient->num_objects() == 2);
    CHECK(orb.quotient->num_morphisms() == 2);
    for (const auto& fibre : orb.projection.fibres) CHECK(fibre.size() == 2);
}

TEST_CASE("orbit category rejects actions with fixed objects") {
    auto k2 = fixtures::k2();
    GroupAction stuck{{"1", "s"},
                      {{0, 1}, {1, 0}},
                      0,
                      {CatFunctor::identity(k2), CatFunctor::identity(k2)}};
    CHECK_THROWS_WITH_AS(orbit_category(k2, stuck), doctest::Contains("ActionNotFree"),
                         CatError);
}

TEST_CASE("pointed lifts") {
    auto k2 = fixtures::k2();
    CoveringFunctor two = double_cover_k2(k2);
    CoveringFunctor one = identity_covering(k2);

    auto self = lift_pointed(two, two, 0, 0);
    REQUIRE(self);
    CHECK(self->is_identity());

    // lifting along the terminal covering recovers the projection itself
    auto down = lift_pointed(two, one, 0, two.functor.apply(0));
    REQUIRE(down);
    CHECK(*down == two.functor);

    // the identity covering cannot lift through a 2-fold cover
    CHECK_FALSE(lift_pointed(one, two, 0, 0).has_value());

    CHECK_THROWS_WITH_AS(lift_pointed(two, two, 0, 2), doctest::Contains("FibreMismatch"),
                         CatError);
}

TEST_CASE("pointed lifts are independent of the traversal order") {
    auto k2 = fixtures::k2();
    CoveringFunctor two = double_cover_k2(k2);
    CoveringFunctor one = identity_covering(k2);
    auto ref = lift_pointed(two, one, 0, 0);
    REQUIRE(ref);
    for (unsigned seed = 1; seed <= 10; ++seed) {
        auto again = lift_pointed(two, one, 0, 0, seed);
        REQUIRE(again);
        CHECK(*again == *ref);
        CHECK_FALSE(lift_pointed(one, two, 0, 0, seed).has_value());
    }
}

TEST_CASE("lambda of the identity map is the identity isomorphism") {
    CoveringFunctor two = double_cover_k2(fixtures::k2());
    LambdaResult l = lambda_of(two, two, CatFunctor::identity(two.functor.source_ptr()));
    CHECK(l.surjective);
    CHECK(l.kernel == std::vector<int>{l.source_group.identity});
    for (int i = 0; i < l.source_group.size(); ++i) CHECK(l.map[i] == i);
}

TEST_CASE("lambda of the projection collapses the whole deck group") {
    auto k2 = fixtures::k2();
    CoveringFunctor two = double_cover_k2(k2);
    CoveringFunctor one = identity_covering(k2);
    LambdaResult l = lambda_of(two, one, two.functor);
    CHECK(l.source_group.size() == 2);
    CHECK(l.target_group.size() == 1);
    CHECK(l.kernel.size() == 2);
    CHECK(l.surjective);
}

TEST_CASE("lambda rejects maps that do not live over the base") {
    auto k2 = fixtures::k2();
    CoveringFunctor two = double_cover_k2(k2);
    CoveringFunctor one = identity_covering(k2);
    CHECK_THROWS_WITH_AS(lambda_of(one, two, two.functor),
                         doctest::Contains("NotEquivariant"), CatError);
}

TEST_CASE("pullback along the identity reproduces the covering") {
    auto k2 = fixtures::k2();
    CoveringFunctor two = double_cover_k2(k2);
    PullbackResult pb = pullback_covering(CatFunctor::identity(k2), two);
    CHECK(pb.total->num_objects() == two.total().num_objects());
    CHECK(pb.total->num_morphisms() == two.total().num_morphisms());
    CHECK(is_galois(pb.projection));
    CHECK(aut_group(pb.projection).size() == 2);

    PullbackResult flat = pullback_covering(CatFunctor::identity(k2),
                                            identity_covering(k2));
    CHECK(flat.total->num_objects() == 2);
    CHECK(flat.total->num_morphisms() == 2);
}

TEST_CASE("pullback demands an identity-on-objects functor") {
    auto k2 = fixtures::k2();
    auto z2 = fixtures::z2grp();
    CatFunctor grading(k2, z2, {0, 0}, {MorVal::id(0), MorVal::gen(0)});
    CHECK_THROWS_WITH_AS(pullback_covering(grading, identity_covering(z2)),
                         doctest::Contains("ObjectSetMismatch"), CatError);
}
