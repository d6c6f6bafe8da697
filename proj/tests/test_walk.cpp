#include "catcov/walk.hpp"

#include <random>

#include "doctest.h"
#include "fixtures.hpp"

using namespace catcov;

namespace {

Walk make_walk(const FiniteCategory& c, ObjId src, std::vector<Letter> letters) {
    ObjId at = src;
    for (Letter l : letters) {
        const MorData& m = c.morphism(l.mor);
        at = l.inverse ? m.src : m.tgt;
    }
    Walk w{src, at, std::move(letters)};
    check_walk(c, w);
    return w;
}

}  // namespace

TEST_CASE("beta-inverse then beta cancels to the empty walk") {
    auto k2 = fixtures::k2();
    MorId beta = *k2->morphism_index("beta");
    ObjId x = *k2->object_index("x");
    Walk fwd = make_walk(*k2, x, {{beta, false}});
    Walk inv = make_walk(*k2, *k2->object_index("x0"), {{beta, true}});
    Walk composed = free_compose(*k2, inv, fwd);
    CHECK(composed.empty());
    CHECK(composed.src == x);
    CHECK(composed.tgt == x);
}

TEST_CASE("adjacent forward letters compose through the table") {
    auto idem = fixtures::idem();
    Walk e = make_walk(*idem, 0, {{0, false}});
    Walk ee = free_compose(*idem, e, e);
    CHECK(ee.letters.size() == 1);
    CHECK(ee == normalize(*idem, ee));
}

TEST_CASE("the empty walk is a two-sided unit") {
    auto k2 = fixtures::k2();
    Walk w = make_walk(*k2, 0, {{0, false}, {1, true}, {1, false}});
    Walk n = normalize(*k2, w);
    CHECK(free_compose(*k2, empty_walk(n.tgt), n) == n);
    CHECK(free_compose(*k2, n, empty_walk(n.src)) == n);
}

TEST_CASE("free_compose rejects endpoint mismatches") {
    auto k2 = fixtures::k2();
    Walk a = make_walk(*k2, 0, {{0, false}});
    CHECK_THROWS_WITH_AS(free_compose(*k2, a, a), doctest::Contains("EndpointMismatch"),
                         CatError);
}

TEST_CASE("free_compose is associative on random normal-form walks") {
    auto k3 = fixtures::k_e(3);
    auto k2 = fixtures::k2();
    std::mt19937 rng(7);
    for (const auto& cat : {k3, k2}) {
        std::vector<Walk> walks;
        for (const Walk& w : enumerate_walks(*cat, 3)) walks.push_back(normalize(*cat, w));
        for (int trial = 0; trial < 200; ++trial) {
            const Walk& w1 = walks[rng() % walks.size()];
            std::vector<Walk> sec, thr;
            for (const Walk& w : walks)
                if (w.src == w1.tgt) sec.push_back(w);
            if (sec.empty()) continue;
            const Walk& w2 = sec[rng() % sec.size()];
            for (const Walk& w : walks)
                if (w.src == w2.tgt) thr.push_back(w);
            if (thr.empty()) continue;
            const Walk& w3 = thr[rng() % thr.size()];
            Walk left = free_compose(*cat, w3, free_compose(*cat, w2, w1));
            Walk right = free_compose(*cat, free_compose(*cat, w3, w2), w1);
            REQUIRE(left == right);
        }
    }
}

// Confluence holds when no two composable forward letters can also cancel
// against a shared factor; categories without composable pairs qualify.
// With compositions present (e.g. IDEM, where [e,e,e-] reduces to both [e]
// and []) only the walk congruence oracle decides equality.
TEST_CASE("normalization is confluent under randomized reduction orders") {
    auto k3 = fixtures::k_e(3);
    auto k2 = fixtures::k2();
    std::mt19937 rng(11);
    for (const auto& cat : {k3, k2}) {
        const FiniteCategory& c = *cat;
        auto walks = enumerate_walks(c, 6);
        auto reduce_once_random = [&](Walk w) {
            // Collect every applicable single reduction and apply one at random.
            struct Red {
                size_t pos;
                bool compose;
            };
            std::vector<Red> reds;
            for (size_t p = 0; p + 1 < w.letters.size(); ++p) {
                Letter a = w.letters[p], b = w.letters[p + 1];
                if (a.mor == b.mor && a.inverse != b.inverse) reds.push_back({p, false});
                else if (!a.inverse && !b.inverse) reds.push_back({p, true});
            }
            if (reds.empty()) return std::pair{w, false};
            Red r = reds[rng() % reds.size()];
            Letter a = w.letters[r.pos], b = w.letters[r.pos + 1];
            w.letters.erase(w.letters.begin() + r.pos, w.letters.begin() + r.pos + 2);
            if (r.compose) {
                MorVal comp = c.compose(MorVal::gen(b.mor), MorVal::gen(a.mor));
                if (!comp.is_id())
                    w.letters.insert(w.letters.begin() + r.pos, Letter{comp.mor(), false});
            }
            return std::pair{w, true};
        };
        for (int trial = 0; trial < 100; ++trial) {
            const Walk& w = walks[rng() % walks.size()];
            Walk random_route = w;
            for (bool more = true; more;)
                std::tie(random_route, more) = reduce_once_random(random_route);
            REQUIRE(random_route == normalize(c, w));
        }
    }
}

TEST_CASE("eval_universal on the K2 grading") {
    auto k2 = fixtures::k2();
    auto z2 = fixtures::z2grp();
    MorId alpha = *k2->morphism_index("alpha");
    MorId beta = *k2->morphism_index("beta");
    MorId s = *z2->morphism_index("g1");
    CatFunctor grading(k2, z2, {0, 0}, {MorVal::id(0), MorVal::gen(s)});
    std::map<MorId, MorVal> theta{{alpha, MorVal::id(0)}, {beta, MorVal::gen(s)}};

    CHECK(eval_universal(grading, theta, empty_walk(0)) == MorVal::id(0));
    // walk alpha then beta-inverse evaluates to s
    Walk w = make_walk(*k2, 0, {{alpha, false}, {beta, true}});
    CHECK(eval_universal(grading, theta, w) == MorVal::gen(s));
    // single forward letter agrees with the functor
    Walk single = make_walk(*k2, 0, {{beta, false}});
    CHECK(eval_universal(grading, theta, single) == MorVal::gen(s));
}

TEST_CASE("walk oracle identifies the idempotent with the identity") {
    auto idem = fixtures::idem();
    Walk e = make_walk(*idem, 0, {{0, false}});
    CHECK(walks_equal_oracle(*idem, e, empty_walk(0), 8));
    Walk einv = make_walk(*idem, 0, {{0, true}});
    CHECK(walks_equal_oracle(*idem, einv, empty_walk(0), 8));
}

TEST_CASE("walk oracle distinguishes free loops in K2") {
    auto k2 = fixtures::k2();
    MorId alpha = *k2->morphism_index("alpha");
    MorId beta = *k2->morphism_index("beta");
    Walk loop = make_walk(*k2, 0, {{alpha, false}, {beta, true}});
    Walk loop_inv = make_walk(*k2, 0, {{beta, false}, {alpha, true}});
    CHECK_FALSE(walks_equal_oracle(*k2, loop, loop_inv, 8));
    CHECK(walks_equal_oracle(*k2, loop, loop, 8));
}
