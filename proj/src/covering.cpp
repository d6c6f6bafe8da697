#include "catcov/covering.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>

namespace catcov {

Star star_at(const FiniteCategory& c, ObjId x) {
    return Star{x, c.source_star(x), c.target_star(x)};
}

namespace {

void check_star_tag(const CatFunctor& F, ObjId c, const std::vector<MorId>& up,
                    const std::vector<MorId>& down) {
    const FiniteCategory& src = F.source();
    std::map<MorId, MorId> image;  // base morphism -> witness upstairs
    for (MorId m : up) {
        MorVal v = F.apply(MorVal::gen(m));
        if (v.is_id())
            throw CatError("StarNotInjective",
                           "star at " + src.object_name(c) + ": " + src.morphism_name(m) +
                               " collapses onto the identity");
        auto [it, fresh] = image.emplace(v.mor(), m);
        if (!fresh)
            throw CatError("StarNotInjective",
                           "star at " + src.object_name(c) + ": " +
                               src.morphism_name(it->second) + " and " + src.morphism_name(m) +
                               " have the same image");
    }
    for (MorId d : down)
        if (!image.count(d))
            throw CatError("StarNotSurjective",
                           "star at " + src.object_name(c) + " misses " +
                               F.target().morphism_name(d));
    // image is contained in `down` because F preserves endpoints
}

}  // namespace

CoveringFunctor check_covering(CatFunctor F) {
    F.check();
    const FiniteCategory& c = F.source();
    const FiniteCategory& b = F.target();
    std::vector<std::vector<ObjId>> fibres(b.num_objects());
    for (ObjId x = 0; x < c.num_objects(); ++x) fibres[F.apply(x)].push_back(x);
    for (ObjId y = 0; y < b.num_objects(); ++y)
        if (fibres[y].empty())
            throw CatError("NotSurjectiveOnObjects", "nothing lies over " + b.object_name(y));
    for (ObjId x = 0; x < c.num_objects(); ++x) {
        check_star_tag(F, x, c.source_star(x), b.source_star(F.apply(x)));
        check_star_tag(F, x, c.target_star(x), b.target_star(F.apply(x)));
    }
    return CoveringFunctor{std::move(F), std::move(fibres)};
}

std::optional<int> GroupAction::inverse_of(int i) const {
    for (int j = 0; j < size(); ++j)
        if (table[i][j] == identity && table[j][i] == identity) return j;
    return std::nullopt;
}

void check_action(const GroupAction& a, bool require_free) {
    const int n = a.size();
    if (n == 0 || static_cast<int>(a.table.size()) != n ||
        static_cast<int>(a.functors.size()) != n || a.identity < 0 || a.identity >= n)
        throw CatError("BadAction", "sizes are inconsistent");
    for (const auto& row : a.table) {
        if (static_cast<int>(row.size()) != n) throw CatError("BadAction", "ragged table");
        for (int v : row)
            if (v < 0 || v >= n) throw CatError("BadAction", "table entry out of range");
    }
    if (!a.functors[a.identity].is_identity())
        throw CatError("BadAction", "identity element does not act as the identity");
    for (int i = 0; i < n; ++i) {
        if (a.table[a.identity][i] != i || a.table[i][a.identity] != i)
            throw CatError("BadAction", "identity is not neutral in the table");
        if (!a.inverse_of(i)) throw CatError("BadAction", "element has no inverse");
        a.functors[i].check();
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k)
                if (a.table[a.table[i][j]][k] != a.table[i][a.table[j][k]])
                    throw CatError("BadAction", "table is not associative");
            if (!(a.functors[i].after(a.functors[j]) == a.functors[a.table[i][j]]))
                throw CatError("BadAction", "action is not a homomorphism");
        }
    if (require_free) {
        const FiniteCategory& c = a.functors[a.identity].source();
        for (int i = 0; i < n; ++i) {
            if (i == a.identity) continue;
            for (ObjId x = 0; x < c.num_objects(); ++x)
                if (a.functors[i].apply(x) == x)
                    throw CatError("ActionNotFree",
                                   a.element_names[i] + " fixes " + c.object_name(x));
        }
    }
}

namespace {

// Unique morphism over `down` in the given tag of the star at y; the
// covering property of G guarantees at most one.
std::optional<MorId> match_in_star(const CatFunctor& G, const std::vector<MorId>& star,
                                   MorId down) {
    for (MorId m : star)
        if (G.apply(MorVal::gen(m)) == MorVal::gen(down)) return m;
    return std::nullopt;
}

// The unique functor H with G.H = F and H(c0) = d0, grown outward from c0
// by star transport. Assumes the source of F is connected and both F and G
// are coverings over the same base. Returns nullopt on contradiction.
std::optional<CatFunctor> star_transport(const CatFunctor& F, const CoveringFunctor& Gcov,
                                         ObjId c0, ObjId d0, std::mt19937* rng) {
    const FiniteCategory& c = F.source();
    const CatFunctor& G = Gcov.functor;
    const FiniteCategory& d = G.source();
    std::vector<ObjId> obj_img(c.num_objects(), -1);
    std::vector<MorId> mor_img(c.num_morphisms(), -1);
    obj_img[c0] = d0;
    std::vector<ObjId> work{c0};

    auto transport = [&](MorId m, MorId mhat, ObjId other, ObjId other_hat) {
        if (mor_img[m] >= 0 && mor_img[m] != mhat) return false;
        mor_img[m] = mhat;
        if (obj_img[other] < 0) {
            obj_img[other] = other_hat;
            work.push_back(other);
        }
        return obj_img[other] == other_hat;
    };

    while (!work.empty()) {
        size_t pick = rng ? (*rng)() % work.size() : 0;
        ObjId x = work[pick];
        work.erase(work.begin() + pick);
        ObjId y = obj_img[x];
        std::vector<MorId> out = c.source_star(x), in = c.target_star(x);
        if (rng) {
            std::shuffle(out.begin(), out.end(), *rng);
            std::shuffle(in.begin(), in.end(), *rng);
        }
        for (MorId m : out) {
            MorVal down = F.apply(MorVal::gen(m));
            if (down.is_id()) return std::nullopt;
            auto mhat = match_in_star(G, d.source_star(y), down.mor());
            if (!mhat) return std::nullopt;
            if (!transport(m, *mhat, c.morphism(m).tgt, d.morphism(*mhat).tgt))
                return std::nullopt;
        }
        for (MorId m : in) {
            MorVal down = F.apply(MorVal::gen(m));
            if (down.is_id()) return std::nullopt;
            auto mhat = match_in_star(G, d.target_star(y), down.mor());
            if (!mhat) return std::nullopt;
            if (!transport(m, *mhat, c.morphism(m).src, d.morphism(*mhat).src))
                return std::nullopt;
        }
    }
    for (ObjId x = 0; x < c.num_objects(); ++x)
        if (obj_img[x] < 0) return std::nullopt;  // source not connected
    std::vector<MorVal> mm;
    for (MorId m = 0; m < c.num_morphisms(); ++m) {
        if (mor_img[m] < 0) return std::nullopt;
        mm.push_back(MorVal::gen(mor_img[m]));
    }
    CatFunctor H(F.source_ptr(), G.source_ptr(), std::move(obj_img), std::move(mm));
    try {
        H.check();
    } catch (const CatError&) {
        return std::nullopt;
    }
    if (!(G.after(H) == F)) return std::nullopt;
    return H;
}

bool is_bijective(const CatFunctor& F) {
    if (F.source().num_objects() != F.target().num_objects() ||
        F.source().num_morphisms() != F.target().num_morphisms())
        return false;
    std::set<ObjId> objs;
    for (ObjId x : F.object_map()) objs.insert(x);
    std::set<MorVal> mors(F.morphism_map().begin(), F.morphism_map().end());
    for (MorVal v : mors)
        if (v.is_id()) return false;
    return static_cast<int>(objs.size()) == F.source().num_objects() &&
           static_cast<int>(mors.size()) == F.source().num_morphisms();
}

}  // namespace

GroupAction aut_group(const CoveringFunctor& F) {
    const FiniteCategory& c = F.total();
    if (!c.is_connected()) throw CatError("NotConnected", "total category is not connected");
    ObjId c0 = 0;
    GroupAction a;
    std::map<ObjId, int> by_image;  // g(c0) -> element index
    for (ObjId d0 : F.fibres[F.functor.apply(c0)]) {
        auto g = star_transport(F.functor, F, c0, d0, nullptr);
        if (!g || !is_bijective(*g)) continue;
        by_image[d0] = a.size();
        a.element_names.push_back(d0 == c0 ? "1" : "to_" + c.object_name(d0));
        a.functors.push_back(std::move(*g));
        if (d0 == c0) a.identity = static_cast<int>(a.functors.size()) - 1;
    }
    a.table.assign(a.size(), std::vector<int>(a.size(), -1));
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) {
            ObjId at = a.functors[i].apply(a.functors[j].apply(c0));
            auto it = by_image.find(at);
            if (it == by_image.end() ||
                !(a.functors[i].after(a.functors[j]) == a.functors[it->second]))
                throw CatError("BadAction", "deck transformations fail to close");
            a.table[i][j] = it->second;
        }
    return a;
}

bool is_galois(const CoveringFunctor& F) {
    if (!F.total().is_connected()) return false;
    GroupAction a = aut_group(F);
    return a.size() == static_cast<int>(F.fibres[F.functor.apply(0)].size());
}

OrbitResult orbit_category(CategoryPtr c, const GroupAction& a) {
    check_action(a, true);
    if (!(a.functors[a.identity].source_ptr() == c))
        throw CatError("BadAction", "action does not act on the given category");

    auto obj_orbit = [&](ObjId x) {
        ObjId rep = x;
        for (const CatFunctor& g : a.functors) rep = std::min(rep, g.apply(x));
        return rep;
    };
    // Morphism orbit representative: the translate whose source object is
    // least. Freeness makes the sources of the translates distinct.
    auto mor_orbit = [&](MorId m) {
        MorId rep = m;
        for (const CatFunctor& g : a.functors) {
            MorId t = g.apply(MorVal::gen(m)).mor();
            if (c->morphism(t).src < c->morphism(rep).src) rep = t;
        }
        return rep;
    };

    std::vector<ObjId> obj_reps;
    std::map<ObjId, int> obj_class;  // representative -> quotient id
    for (ObjId x = 0; x < c->num_objects(); ++x)
        if (obj_orbit(x) == x) {
            obj_class[x] = static_cast<int>(obj_reps.size());
            obj_reps.push_back(x);
        }
    std::vector<MorId> mor_reps;
    std::map<MorId, int> mor_class;
    for (MorId m = 0; m < c->num_morphisms(); ++m)
        if (mor_orbit(m) == m) {
            mor_class[m] = static_cast<int>(mor_reps.size());
            mor_reps.push_back(m);
        }

    std::vector<std::string> names;
    for (ObjId x : obj_reps) names.push_back("[" + c->object_name(x) + "]");
    std::vector<MorData> mors;
    for (MorId m : mor_reps)
        mors.push_back({"[" + c->morphism_name(m) + "]",
                        obj_class.at(obj_orbit(c->morphism(m).src)),
                        obj_class.at(obj_orbit(c->morphism(m).tgt))});

    auto project = [&](MorVal v) -> MorVal {
        if (v.is_id()) return MorVal::id(obj_class.at(obj_orbit(v.obj())));
        return MorVal::gen(mor_class.at(mor_orbit(v.mor())));
    };
    std::map<std::pair<MorId, MorId>, MorVal> table;
    for (int fi = 0; fi < static_cast<int>(mor_reps.size()); ++fi) {
        MorId f = mor_reps[fi];
        ObjId t_orbit = obj_orbit(c->morphism(f).tgt);
        for (int gi = 0; gi < static_cast<int>(mor_reps.size()); ++gi) {
            MorId g = mor_reps[gi];
            if (obj_orbit(c->morphism(g).src) != t_orbit) continue;
            // the unique translate of g whose source is tgt(f)
            std::optional<MorVal> comp;
            for (const CatFunctor& gamma : a.functors) {
                MorVal gt = gamma.apply(MorVal::gen(g));
                if (c->morphism(gt.mor()).src == c->morphism(f).tgt) {
                    comp = c->compose(gt, MorVal::gen(f));
                    break;
                }
            }
            if (!comp) throw CatError("BadAction", "orbit composition has no translate");
            table.emplace(std::pair{gi, fi}, project(*comp));
        }
    }
    auto quot = std::make_shared<FiniteCategory>(
        FiniteCategory::build(std::move(names), std::move(mors), std::move(table)));

    std::vector<ObjId> om;
    for (ObjId x = 0; x < c->num_objects(); ++x) om.push_back(obj_class.at(obj_orbit(x)));
    std::vector<MorVal> mm;
    for (MorId m = 0; m < c->num_morphisms(); ++m) mm.push_back(project(MorVal::gen(m)));
    CatFunctor proj(c, quot, std::move(om), std::move(mm));
    return OrbitResult{quot, check_covering(std::move(proj))};
}

std::optional<CatFunctor> lift_pointed(const CoveringFunctor& F, const CoveringFunctor& G,
                                       ObjId c, ObjId d,
                                       std::optional<unsigned> traversal_seed) {
    if (F.functor.apply(c) != G.functor.apply(d))
        throw CatError("FibreMismatch", "the chosen objects lie over different base objects");
    if (!F.total().is_connected())
        throw CatError("NotConnected", "total category is not connected");
    std::mt19937 rng(traversal_seed.value_or(0));
    return star_transport(F.functor, G, c, d, traversal_seed ? &rng : nullptr);
}

LambdaResult lambda_of(const CoveringFunctor& F, const CoveringFunctor& G,
                       const CatFunctor& H) {
    if (&H.source() != &F.total() || &H.target() != &G.total() ||
        !(G.functor.after(H) == F.functor))
        throw CatError("NotEquivariant", "H is not a map from F to G over the base");
    LambdaResult out{aut_group(F), aut_group(G), {}, {}, false};
    ObjId c0 = 0;
    for (int i = 0; i < out.source_group.size(); ++i) {
        const CatFunctor& g = out.source_group.functors[i];
        CatFunctor hg = H.after(g);
        ObjId probe = hg.apply(c0);
        int partner = -1;
        for (int j = 0; j < out.target_group.size(); ++j)
            if (out.target_group.functors[j].apply(H.apply(c0)) == probe &&
                out.target_group.functors[j].after(H) == hg) {
                partner = j;
                break;
            }
        if (partner < 0)
            throw CatError("NotEquivariant",
                           "no deck transformation downstairs matches " +
                               out.source_group.element_names[i]);
        out.map.push_back(partner);
        if (partner == out.target_group.identity) out.kernel.push_back(i);
    }
    for (int i = 0; i < out.source_group.size(); ++i)
        for (int j = 0; j < out.source_group.size(); ++j)
            if (out.map[out.source_group.mult(i, j)] !=
                out.target_group.mult(out.map[i], out.map[j]))
                throw CatError("NotEquivariant", "induced map is not a homomorphism");
    std::set<int> image(out.map.begin(), out.map.end());
    out.surjective = static_cast<int>(image.size()) == out.target_group.size();
    if (!out.surjective)
        throw CatError("NotEquivariant", "induced homomorphism is not surjective");
    return out;
}

PullbackResult pullback_covering(const CatFunctor& theta, const CoveringFunctor& G) {
    const FiniteCategory& b = theta.source();
    const FiniteCategory& d = theta.target();
    if (b.num_objects() != d.num_objects())
        throw CatError("ObjectSetMismatch", "object sets differ in size");
    for (ObjId x = 0; x < b.num_objects(); ++x)
        if (theta.apply(x) != x)
            throw CatError("ObjectSetMismatch",
                           "functor moves object " + b.object_name(x));
    if (&G.functor.target() != &theta.target())
        throw CatError("ObjectSetMismatch", "covering lives over a different category");
    const FiniteCategory& g = G.total();

    std::vector<std::pair<ObjId, ObjId>> objs;  // (b, g)
    std::map<std::pair<ObjId, ObjId>, int> obj_idx;
    for (ObjId x = 0; x < b.num_objects(); ++x)
        for (ObjId y : G.fibres[x]) {
            obj_idx[{x, y}] = static_cast<int>(objs.size());
            objs.emplace_back(x, y);
        }
    std::vector<std::string> names;
    for (auto [x, y] : objs)
        names.push_back("(" + b.object_name(x) + "," + g.object_name(y) + ")");

    // morphisms: (f, h) with theta(f) = G(h); h may be an identity value
    std::vector<std::pair<MorId, MorVal>> mors;
    std::map<std::pair<MorId, MorVal>, int> mor_idx;
    std::vector<MorData> mor_data;
    for (MorId f = 0; f < b.num_morphisms(); ++f) {
        MorVal down = theta.apply(MorVal::gen(f));
        for (MorId h = 0; h < g.num_morphisms(); ++h)
            if (G.functor.apply(MorVal::gen(h)) == down) {
                mor_idx[{f, MorVal::gen(h)}] = static_cast<int>(mors.size());
                mors.emplace_back(f, MorVal::gen(h));
            }
        if (down.is_id())
            for (ObjId y : G.fibres[down.obj()]) {
                mor_idx[{f, MorVal::id(y)}] = static_cast<int>(mors.size());
                mors.emplace_back(f, MorVal::id(y));
            }
    }
    for (auto [f, h] : mors) {
        const MorData& fd = b.morphism(f);
        mor_data.push_back({fd.name + "|" + g.describe(h),
                            obj_idx.at({fd.src, g.src(h)}), obj_idx.at({fd.tgt, g.tgt(h)})});
    }

    std::map<std::pair<MorId, MorId>, MorVal> table;
    for (int fi = 0; fi < static_cast<int>(mors.size()); ++fi)
        for (int gi = 0; gi < static_cast<int>(mors.size()); ++gi) {
            auto [f1, h1] = mors[fi];
            auto [f2, h2] = mors[gi];
            if (mor_data[gi].src != mor_data[fi].tgt) continue;
            MorVal fc = b.compose(MorVal::gen(f2), MorVal::gen(f1));
            MorVal hc = g.compose(h2, h1);
            // G never collapses, so hc is an identity exactly when fc is
            MorVal down = fc.is_id() ? MorVal::id(obj_idx.at({fc.obj(), hc.obj()}))
                                     : MorVal::gen(mor_idx.at({fc.mor(), hc}));
            table.emplace(std::pair{gi, fi}, down);
        }
    auto total = std::make_shared<FiniteCategory>(
        FiniteCategory::build(std::move(names), std::move(mor_data), std::move(table)));

    std::vector<ObjId> om1, om2;
    std::vector<MorVal> mm1, mm2;
    for (auto [x, y] : objs) {
        om1.push_back(x);
        om2.push_back(y);
    }
    for (auto [f, h] : mors) {
        mm1.push_back(MorVal::gen(f));
        mm2.push_back(h);
    }
    CatFunctor proj(total, theta.source_ptr(), std::move(om1), std::move(mm1));
    CatFunctor fibre_proj(total, G.functor.source_ptr(), std::move(om2), std::move(mm2));
    fibre_proj.check();
    return PullbackResult{total, check_covering(std::move(proj)), std::move(fibre_proj)};
}

}  // namespace catcov
