#include "catcov/grading.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace catcov {

namespace {

bool functor_bijective(const CatFunctor& f) {
    if (f.source().num_objects() != f.target().num_objects() ||
        f.source().num_morphisms() != f.target().num_morphisms())
        return false;
    std::set<ObjId> objs(f.object_map().begin(), f.object_map().end());
    std::set<MorVal> mors(f.morphism_map().begin(), f.morphism_map().end());
    for (MorVal v : mors)
        if (v.is_id()) return false;
    return static_cast<int>(objs.size()) == f.source().num_objects() &&
           static_cast<int>(mors.size()) == f.source().num_morphisms();
}

}  // namespace

FiniteGroupoid make_groupoid(CategoryPtr cat, std::vector<MorId> inverse) {
    const FiniteCategory& c = *cat;
    if (static_cast<int>(inverse.size()) != c.num_morphisms())
        throw CatError("NotAGroupoid", "inverse map has the wrong size");
    for (MorId m = 0; m < c.num_morphisms(); ++m) {
        MorId i = inverse[m];
        if (i < 0 || i >= c.num_morphisms())
            throw CatError("NotAGroupoid", "inverse of " + c.morphism_name(m) + " missing");
        if (inverse[i] != m)
            throw CatError("NotAGroupoid", "inverse map is not an involution at " +
                                               c.morphism_name(m));
        const MorData& md = c.morphism(m);
        const MorData& id_ = c.morphism(i);
        if (id_.src != md.tgt || id_.tgt != md.src ||
            !c.compose(MorVal::gen(i), MorVal::gen(m)).is_id() ||
            !c.compose(MorVal::gen(m), MorVal::gen(i)).is_id())
            throw CatError("NotAGroupoid",
                           c.morphism_name(i) + " is not a two-sided inverse of " +
                               c.morphism_name(m));
    }
    return FiniteGroupoid{std::move(cat), std::move(inverse)};
}

FiniteGroupoid infer_groupoid(CategoryPtr cat) {
    const FiniteCategory& c = *cat;
    std::vector<MorId> inverse(c.num_morphisms(), -1);
    for (MorId m = 0; m < c.num_morphisms(); ++m) {
        for (MorId n : c.source_star(c.morphism(m).tgt))
            if (c.morphism(n).tgt == c.morphism(m).src &&
                c.compose(MorVal::gen(n), MorVal::gen(m)).is_id() &&
                c.compose(MorVal::gen(m), MorVal::gen(n)).is_id()) {
                inverse[m] = n;
                break;
            }
        if (inverse[m] < 0)
            throw CatError("NotAGroupoid", c.morphism_name(m) + " has no inverse");
    }
    return make_groupoid(std::move(cat), std::move(inverse));
}

void check_normal_subgroupoid(const FiniteGroupoid& g, const NormalSubgroupoid& n) {
    const FiniteCategory& c = *g.cat;
    if (n.parent.get() != g.cat.get() ||
        static_cast<int>(n.loops.size()) != c.num_objects())
        throw CatError("NotTotallyDisconnected", "subgroupoid shape mismatch");
    std::vector<std::set<MorId>> member(c.num_objects());
    for (ObjId x = 0; x < c.num_objects(); ++x)
        for (MorId m : n.loops[x]) {
            if (c.morphism(m).src != x || c.morphism(m).tgt != x)
                throw CatError("NotTotallyDisconnected",
                               c.morphism_name(m) + " is not a loop at " + c.object_name(x));
            member[x].insert(m);
        }
    auto contains = [&](ObjId x, MorVal v) {
        return v.is_id() || member[x].count(v.mor()) > 0;
    };
    for (ObjId x = 0; x < c.num_objects(); ++x)
        for (MorId a : member[x]) {
            if (!contains(x, g.inv(MorVal::gen(a))))
                throw CatError("NotNormal", "not closed under inverses at " + c.object_name(x));
            for (MorId b : member[x])
                if (!contains(x, c.compose(MorVal::gen(a), MorVal::gen(b))))
                    throw CatError("NotNormal",
                                   "not closed under composition at " + c.object_name(x));
        }
    for (MorId m = 0; m < c.num_morphisms(); ++m) {
        ObjId x = c.morphism(m).src, y = c.morphism(m).tgt;
        for (MorId b : member[y]) {
            MorVal conj = c.compose(g.inv(MorVal::gen(m)),
                                    c.compose(MorVal::gen(b), MorVal::gen(m)));
            if (!contains(x, conj))
                throw CatError("NotNormal", "conjugation by " + c.morphism_name(m) +
                                                " leaves the subgroupoid");
        }
    }
}

NormalSubgroupoid kernel_functor(const FiniteGroupoid& g, const FiniteGroupoid& h,
                                 const CatFunctor& F) {
    if (&F.source() != g.cat.get() || &F.target() != h.cat.get())
        throw CatError("NotInjectiveOnObjects", "functor endpoints mismatch");
    F.check();
    std::set<ObjId> images;
    for (ObjId x : F.object_map())
        if (!images.insert(x).second)
            throw CatError("NotInjectiveOnObjects",
                           "two objects share the image " + h.cat->object_name(x));
    NormalSubgroupoid n{g.cat, std::vector<std::vector<MorId>>(g.cat->num_objects())};
    for (MorId m = 0; m < g.cat->num_morphisms(); ++m)
        if (F.apply(MorVal::gen(m)).is_id())
            n.loops[g.cat->morphism(m).src].push_back(m);
    check_normal_subgroupoid(g, n);
    return n;
}

GroupoidQuotient quotient_groupoid(const FiniteGroupoid& g, const NormalSubgroupoid& n) {
    check_normal_subgroupoid(g, n);
    std::vector<std::pair<MorVal, MorVal>> pairs;
    for (ObjId x = 0; x < g.cat->num_objects(); ++x)
        for (MorId m : n.loops[x]) pairs.emplace_back(MorVal::gen(m), MorVal::id(x));
    auto [quot, proj] = quotient_category(congruence_close(g.cat, pairs));
    return GroupoidQuotient{infer_groupoid(quot), std::move(proj)};
}

SmashResult smash_product(const Grading& x, ObjId x0) {
    const FiniteCategory& b = x.functor.source();
    const FiniteCategory& g = *x.target.cat;
    if (x0 < 0 || x0 >= g.num_objects())
        throw CatError("NoSuchObject", "smash point out of range");

    auto hom_to_x0 = [&](ObjId y) {
        std::vector<MorVal> out;
        if (y == x0) out.push_back(MorVal::id(x0));
        for (MorId m : g.source_star(y))
            if (g.morphism(m).tgt == x0) out.push_back(MorVal::gen(m));
        return out;
    };
    auto gamma_name = [&](MorVal v) {
        return v.is_id() ? std::string("1") : g.morphism_name(v.mor());
    };

    std::vector<std::pair<ObjId, MorVal>> objs;
    std::map<std::pair<ObjId, MorVal>, int> obj_idx;
    for (ObjId bo = 0; bo < b.num_objects(); ++bo)
        for (MorVal gamma : hom_to_x0(x.functor.apply(bo))) {
            obj_idx[{bo, gamma}] = static_cast<int>(objs.size());
            objs.emplace_back(bo, gamma);
        }
    std::vector<std::string> names;
    for (auto [bo, gamma] : objs)
        names.push_back(b.object_name(bo) + "@" + gamma_name(gamma));

    // a morphism (f, gamma) starts at (src f, gamma) and ends at
    // (tgt f, gamma.X(f)^-1)
    std::vector<std::pair<MorId, MorVal>> mors;
    std::map<std::pair<MorId, MorVal>, int> mor_idx;
    std::vector<MorData> mor_data;
    for (MorId f = 0; f < b.num_morphisms(); ++f)
        for (MorVal gamma : hom_to_x0(x.functor.apply(b.morphism(f).src))) {
            MorVal delta = g.compose(gamma, x.target.inv(x.functor.apply(MorVal::gen(f))));
            mor_idx[{f, gamma}] = static_cast<int>(mors.size());
            mors.emplace_back(f, gamma);
            mor_data.push_back({b.morphism_name(f) + "@" + gamma_name(gamma),
                                obj_idx.at({b.morphism(f).src, gamma}),
                                obj_idx.at({b.morphism(f).tgt, delta})});
        }

    std::map<std::pair<MorId, MorId>, MorVal> table;
    for (int fi = 0; fi < static_cast<int>(mors.size()); ++fi)
        for (int gi = 0; gi < static_cast<int>(mors.size()); ++gi) {
            if (mor_data[gi].src != mor_data[fi].tgt) continue;
            MorVal comp = b.compose(MorVal::gen(mors[gi].first), MorVal::gen(mors[fi].first));
            MorVal down = comp.is_id() ? MorVal::id(mor_data[fi].src)
                                       : MorVal::gen(mor_idx.at({comp.mor(), mors[fi].second}));
            table.emplace(std::pair{gi, fi}, down);
        }
    auto total = std::make_shared<FiniteCategory>(
        FiniteCategory::build(std::move(names), std::move(mor_data), std::move(table)));

    std::vector<ObjId> om;
    std::vector<MorVal> mm;
    for (auto [bo, gamma] : objs) om.push_back(bo);
    for (auto [f, gamma] : mors) mm.push_back(MorVal::gen(f));
    CoveringFunctor proj =
        check_covering(CatFunctor(total, x.functor.source_ptr(), std::move(om), std::move(mm)));

    // vertex group at x0 acting by post-composition on the second coordinate
    std::vector<MorVal> elems = hom_to_x0(x0);
    GroupAction action;
    action.identity = 0;  // the identity morphism comes first in hom_to_x0
    for (MorVal alpha : elems) action.element_names.push_back(gamma_name(alpha));
    action.table.assign(elems.size(), std::vector<int>(elems.size(), -1));
    auto elem_index = [&](MorVal v) {
        return static_cast<int>(std::find(elems.begin(), elems.end(), v) - elems.begin());
    };
    for (size_t i = 0; i < elems.size(); ++i)
        for (size_t j = 0; j < elems.size(); ++j)
            action.table[i][j] = elem_index(g.compose(elems[i], elems[j]));
    for (MorVal alpha : elems) {
        std::vector<ObjId> aom;
        std::vector<MorVal> amm;
        for (auto [bo, gamma] : objs) aom.push_back(obj_idx.at({bo, g.compose(alpha, gamma)}));
        for (auto [f, gamma] : mors)
            amm.push_back(MorVal::gen(mor_idx.at({f, g.compose(alpha, gamma)})));
        action.functors.emplace_back(total, total, std::move(aom), std::move(amm));
    }
    check_action(action, true);

    // the orbits of the action are exactly the fibres of the projection
    for (const auto& fibre : proj.fibres) {
        std::set<ObjId> orbit;
        for (const CatFunctor& a : action.functors) orbit.insert(a.apply(fibre.front()));
        if (orbit != std::set<ObjId>(fibre.begin(), fibre.end()))
            throw CatError("Internal", "vertex orbits do not match the fibres");
    }
    return SmashResult{total, std::move(proj), std::move(action)};
}

bool is_effective(const Grading& x) {
    const FiniteCategory& g = *x.target.cat;
    // A one-object target is a group grading, always admissible; a proper
    // groupoid target must match objects bijectively.
    if (g.num_objects() > 1) {
        if (x.functor.source().num_objects() != g.num_objects())
            throw CatError("NotBijectiveOnObjects", "object counts differ");
        std::set<ObjId> images(x.functor.object_map().begin(), x.functor.object_map().end());
        if (static_cast<int>(images.size()) != g.num_objects())
            throw CatError("NotBijectiveOnObjects", "objects collide under the grading");
    }
    if (!g.is_connected()) throw CatError("TargetNotConnected", "grading target");
    return smash_product(x, 0).total->is_connected();
}

std::optional<CatFunctor> grading_morphism(const Grading& x, const Grading& y) {
    if (&x.functor.source() != &y.functor.source()) return std::nullopt;
    const FiniteCategory& b = x.functor.source();
    const FiniteCategory& g = *x.target.cat;
    const FiniteCategory& h = *y.target.cat;

    std::vector<ObjId> om(g.num_objects(), -1);
    for (ObjId bo = 0; bo < b.num_objects(); ++bo) {
        ObjId u = x.functor.apply(bo);
        ObjId v = y.functor.apply(bo);
        if (om[u] >= 0 && om[u] != v) return std::nullopt;
        om[u] = v;
    }
    for (ObjId u = 0; u < g.num_objects(); ++u)
        if (om[u] < 0) return std::nullopt;  // object outside the grading image

    std::vector<std::optional<MorVal>> img(g.num_morphisms());
    auto assign = [&](MorVal from, MorVal to) {
        if (from.is_id()) return to.is_id() && om[from.obj()] == to.obj();
        if (img[from.mor()]) return *img[from.mor()] == to;
        img[from.mor()] = to;
        return true;
    };
    for (MorId f = 0; f < b.num_morphisms(); ++f)
        if (!assign(x.functor.apply(MorVal::gen(f)), y.functor.apply(MorVal::gen(f))))
            return std::nullopt;

    bool changed = true;
    while (changed) {
        changed = false;
        for (MorId m = 0; m < g.num_morphisms(); ++m) {
            if (!img[m]) continue;
            MorVal gm = MorVal::gen(m);
            MorVal minv = x.target.inv(gm);
            if (!minv.is_id() && !img[minv.mor()]) {
                img[minv.mor()] = y.target.inv(*img[m]);
                changed = true;
            }
            for (MorId n = 0; n < g.num_morphisms(); ++n) {
                if (!img[n] || g.morphism(n).tgt != g.morphism(m).src) continue;
                MorVal comp = g.compose(gm, MorVal::gen(n));
                MorVal down = h.compose(*img[m], *img[n]);
                if (comp.is_id()) {
                    if (!down.is_id()) return std::nullopt;
                } else if (!img[comp.mor()]) {
                    img[comp.mor()] = down;
                    changed = true;
                } else if (!(*img[comp.mor()] == down)) {
                    return std::nullopt;
                }
            }
        }
    }
    std::vector<MorVal> mm;
    for (const auto& v : img) {
        if (!v) return std::nullopt;  // grading does not generate its target
        mm.push_back(*v);
    }
    CatFunctor z(x.target.cat, y.target.cat, std::move(om), std::move(mm));
    try {
        z.check();
    } catch (const CatError&) {
        return std::nullopt;
    }
    if (!(z.after(x.functor) == y.functor)) return std::nullopt;
    return z;
}

std::vector<ObjId> default_section(const CoveringFunctor& p) {
    std::vector<ObjId> out;
    for (const auto& fibre : p.fibres) out.push_back(fibre.front());
    return out;
}

namespace {

struct DeckGrading {
    Grading grading;
    // decode of target morphisms: (src object, tgt object, deck element)
    std::vector<std::array<int, 3>> triple;
    std::map<std::array<int, 3>, MorVal> lookup;
    std::vector<int> deviation;  // per total object, the deck element index
};

DeckGrading associated_grading_impl(const CoveringFunctor& p, const GroupAction& deck,
                                    const std::vector<ObjId>& section) {
    check_action(deck, true);
    const FiniteCategory& total = p.total();
    const FiniteCategory& base = p.base();
    if (&deck.functors[deck.identity].source() != &total)
        throw CatError("BadAction", "deck action lives on a different category");
    if (static_cast<int>(section.size()) != base.num_objects())
        throw CatError("SectionNotEquivariant", "section has the wrong length");
    for (ObjId w = 0; w < base.num_objects(); ++w) {
        if (section[w] < 0 || section[w] >= total.num_objects() ||
            p.functor.apply(section[w]) != w)
            throw CatError("SectionNotEquivariant",
                           "section element does not lie over " + base.object_name(w));
    }

    DeckGrading out{Grading{CatFunctor::identity(p.functor.source_ptr()), FiniteGroupoid{}},
                    {}, {}, {}};
    out.deviation.assign(total.num_objects(), -1);
    for (ObjId x = 0; x < total.num_objects(); ++x) {
        for (int i = 0; i < deck.size(); ++i)
            if (deck.functors[i].apply(section[p.functor.apply(x)]) == x) {
                if (out.deviation[x] >= 0)
                    throw CatError("BadAction", "deck action is not free on the fibre");
                out.deviation[x] = i;
            }
        if (out.deviation[x] < 0)
            throw CatError("BadAction", "deck action is not transitive on the fibre of " +
                                            total.object_name(x));
    }

    // target groupoid: a copy of the deck group between any two base objects
    std::vector<std::string> names;
    for (ObjId w = 0; w < base.num_objects(); ++w) names.push_back(base.object_name(w));
    std::vector<MorData> mors;
    for (ObjId w = 0; w < base.num_objects(); ++w)
        for (ObjId v = 0; v < base.num_objects(); ++v)
            for (int i = 0; i < deck.size(); ++i) {
                if (w == v && i == deck.identity) continue;
                std::array<int, 3> key{w, v, i};
                out.lookup.emplace(key, MorVal::gen(static_cast<int>(mors.size())));
                out.triple.push_back(key);
                mors.push_back({deck.element_names[i] + ":" + base.object_name(w) + ">" +
                                    base.object_name(v),
                                w, v});
            }
    for (ObjId w = 0; w < base.num_objects(); ++w)
        out.lookup.emplace(std::array<int, 3>{w, w, deck.identity}, MorVal::id(w));

    std::map<std::pair<MorId, MorId>, MorVal> table;
    for (size_t fi = 0; fi < out.triple.size(); ++fi)
        for (size_t gi = 0; gi < out.triple.size(); ++gi) {
            auto [fw, fv, i] = out.triple[fi];
            auto [gw, gv, j] = out.triple[gi];
            if (gw != fv) continue;
            table.emplace(std::pair{static_cast<int>(gi), static_cast<int>(fi)},
                          out.lookup.at({fw, gv, deck.mult(j, i)}));
        }
    auto gcat = std::make_shared<FiniteCategory>(
        FiniteCategory::build(std::move(names), std::move(mors), std::move(table)));
    std::vector<MorId> inverse;
    for (auto [w, v, i] : out.triple)
        inverse.push_back(out.lookup.at({v, w, *deck.inverse_of(i)}).mor());
    out.grading.target = make_groupoid(gcat, std::move(inverse));

    // X([f]) = d(y')^-1 d(x') for any representative f': x' -> y'
    std::vector<std::optional<MorVal>> degree(base.num_morphisms());
    for (MorId m = 0; m < total.num_morphisms(); ++m) {
        MorVal down = p.functor.apply(MorVal::gen(m));
        int dx = out.deviation[total.morphism(m).src];
        int dy = out.deviation[total.morphism(m).tgt];
        int e = deck.mult(*deck.inverse_of(dy), dx);
        MorVal val = out.lookup.at({base.morphism(down.mor()).src,
                                    base.morphism(down.mor()).tgt, e});
        if (degree[down.mor()] && !(*degree[down.mor()] == val))
            throw CatError("BadAction",
                           "representatives of " + base.morphism_name(down.mor()) +
                               " disagree on the degree");
        degree[down.mor()] = val;
    }
    std::vector<ObjId> om;
    for (ObjId w = 0; w < base.num_objects(); ++w) om.push_back(w);
    std::vector<MorVal> mm;
    for (MorId f = 0; f < base.num_morphisms(); ++f) {
        if (!degree[f]) throw CatError("Internal", "morphism with empty fibre");
        mm.push_back(*degree[f]);
    }
    out.grading.functor = CatFunctor(p.functor.target_ptr(), gcat, std::move(om),
                                     std::move(mm));
    out.grading.functor.check();
    if (!is_effective(out.grading))
        throw CatError("Internal", "associated grading is not effective");
    return out;
}

}  // namespace

Grading associated_grading(const CoveringFunctor& p, const GroupAction& deck,
                           const std::vector<ObjId>& section) {
    return associated_grading_impl(p, deck, section).grading;
}

RoundtripResult roundtrip_iso(const CoveringFunctor& p, const GroupAction& deck,
                              const std::vector<ObjId>& section, ObjId base_orbit) {
    DeckGrading dg = associated_grading_impl(p, deck, section);
    SmashResult smash = smash_product(dg.grading, base_orbit);
    const FiniteCategory& total = p.total();
    const FiniteCategory& stot = *smash.total;
    const FiniteCategory& base = p.base();

    auto decode = [&](MorVal gamma) -> int {
        // deck element carried by a morphism into base_orbit of the target
        if (gamma.is_id()) return deck.identity;
        return dg.triple[gamma.mor()][2];
    };

    // smash object (w, gamma) -> gamma . section[w]; the smash construction
    // enumerates hom(Xw, x0) in a fixed order, rebuild it to recover gamma
    std::vector<ObjId> om(stot.num_objects(), -1);
    {
        const FiniteCategory& g = *dg.grading.target.cat;
        std::map<std::pair<ObjId, MorVal>, int> obj_idx;
        std::vector<std::pair<ObjId, MorVal>> objs;
        for (ObjId bo = 0; bo < base.num_objects(); ++bo) {
            ObjId y = dg.grading.functor.apply(bo);
            std::vector<MorVal> hom;
            if (y == base_orbit) hom.push_back(MorVal::id(base_orbit));
            for (MorId m : g.source_star(y))
                if (g.morphism(m).tgt == base_orbit) hom.push_back(MorVal::gen(m));
            for (MorVal gamma : hom) {
                obj_idx[{bo, gamma}] = static_cast<int>(objs.size());
                objs.emplace_back(bo, gamma);
            }
        }
        if (static_cast<int>(objs.size()) != stot.num_objects())
            throw CatError("Internal", "smash enumeration mismatch");
        for (int s = 0; s < stot.num_objects(); ++s) {
            auto [w, gamma] = objs[s];
            om[s] = deck.functors[decode(gamma)].apply(section[w]);
        }
    }

    // smash morphism ([f], gamma) -> the representative of [f] whose source
    // is the image of the smash source object
    std::vector<MorVal> mm(stot.num_morphisms(), MorVal::id(0));
    for (MorId sm = 0; sm < stot.num_morphisms(); ++sm) {
        MorVal down = smash.projection.functor.apply(MorVal::gen(sm));
        ObjId src_up = om[stot.morphism(sm).src];
        std::optional<MorId> rep;
        for (MorId m : total.source_star(src_up))
            if (p.functor.apply(MorVal::gen(m)) == down) {
                rep = m;
                break;
            }
        if (!rep) throw CatError("Internal", "no representative with the required source");
        mm[sm] = MorVal::gen(*rep);
    }

    CatFunctor iso(smash.total, p.functor.source_ptr(), std::move(om), std::move(mm));
    iso.check();
    if (!functor_bijective(iso))
        throw CatError("Internal", "round trip is not an isomorphism");
    if (!(p.functor.after(iso) == smash.projection.functor))
        throw CatError("Internal", "round trip does not commute with the projections");
    return RoundtripResult{std::move(dg.grading), std::move(smash), std::move(iso)};
}

bool slice_pullback_check(const Grading& x, ObjId x0) {
    const FiniteCategory& b = x.functor.source();
    const FiniteCategory& g = *x.target.cat;

    // slice: objects are morphisms into x0, with a unique morphism between
    // any two of them
    std::vector<MorVal> sobjs;
    if (x0 < 0 || x0 >= g.num_objects())
        throw CatError("NoSuchObject", "slice point out of range");
    sobjs.push_back(MorVal::id(x0));
    for (MorId m = 0; m < g.num_morphisms(); ++m)
        if (g.morphism(m).tgt == x0) sobjs.push_back(MorVal::gen(m));
    auto sname = [&](MorVal v) {
        return v.is_id() ? std::string("1") : g.morphism_name(v.mor());
    };
    auto sidx = [&](MorVal v) {
        return static_cast<int>(std::find(sobjs.begin(), sobjs.end(), v) - sobjs.begin());
    };

    std::vector<std::string> names;
    for (MorVal a : sobjs) names.push_back(sname(a));
    std::vector<MorData> mors;  // ordered pairs (alpha, beta), alpha != beta
    std::vector<std::pair<int, int>> spairs;
    std::map<std::pair<int, int>, int> pair_idx;
    for (int a = 0; a < static_cast<int>(sobjs.size()); ++a)
        for (int bb = 0; bb < static_cast<int>(sobjs.size()); ++bb) {
            if (a == bb) continue;
            pair_idx[{a, bb}] = static_cast<int>(mors.size());
            spairs.emplace_back(a, bb);
            mors.push_back({"(" + sname(sobjs[a]) + ">" + sname(sobjs[bb]) + ")", a, bb});
        }
    std::map<std::pair<MorId, MorId>, MorVal> table;
    for (int fi = 0; fi < static_cast<int>(spairs.size()); ++fi)
        for (int gi = 0; gi < static_cast<int>(spairs.size()); ++gi) {
            if (spairs[gi].first != spairs[fi].second) continue;
            int a = spairs[fi].first, c = spairs[gi].second;
            table.emplace(std::pair{gi, fi},
                          a == c ? MorVal::id(a) : MorVal::gen(pair_idx.at({a, c})));
        }
    auto slice = std::make_shared<FiniteCategory>(
        FiniteCategory::build(std::move(names), std::move(mors), std::move(table)));

    // covering of the target: alpha -> src(alpha), (alpha, beta) -> beta^-1.alpha
    std::vector<ObjId> uom;
    for (MorVal a : sobjs) uom.push_back(g.src(a));
    std::vector<MorVal> umm;
    for (auto [a, bb] : spairs)
        umm.push_back(g.compose(x.target.inv(sobjs[bb]), sobjs[a]));
    CoveringFunctor U = check_covering(CatFunctor(slice, x.target.cat, uom, umm));

    // comma pullback of U along X, then match it with the smash product
    SmashResult smash = smash_product(x, x0);
    const FiniteCategory& stot = *smash.total;

    std::vector<std::pair<ObjId, int>> pobjs;  // (b object, slice object)
    std::map<std::pair<ObjId, int>, int> pobj_idx;
    for (ObjId bo = 0; bo < b.num_objects(); ++bo)
        for (int s = 0; s < static_cast<int>(sobjs.size()); ++s)
            if (uom[s] == x.functor.apply(bo)) {
                pobj_idx[{bo, s}] = static_cast<int>(pobjs.size());
                pobjs.emplace_back(bo, s);
            }
    // morphisms: (f, h) with U(h) = X(f); h is a slice pair or identity
    std::vector<std::pair<MorId, MorVal>> pmors;
    for (MorId f = 0; f < b.num_morphisms(); ++f) {
        MorVal down = x.functor.apply(MorVal::gen(f));
        for (int hp = 0; hp < static_cast<int>(spairs.size()); ++hp)
            if (umm[hp] == down) pmors.emplace_back(f, MorVal::gen(hp));
        if (down.is_id())
            for (int s = 0; s < static_cast<int>(sobjs.size()); ++s)
                if (uom[s] == down.obj()) pmors.emplace_back(f, MorVal::id(s));
    }

    if (static_cast<int>(pobjs.size()) != stot.num_objects() ||
        static_cast<int>(pmors.size()) != stot.num_morphisms())
        throw CatError("Internal", "pullback and smash have different sizes");

    // explicit matching: (b, alpha) <-> smash object (b, alpha); morphism
    // (f, h) <-> smash morphism (f, source alpha). Rebuild the smash
    // enumeration, which is deterministic, to address its objects.
    std::map<std::pair<ObjId, MorVal>, int> smash_idx;
    {
        int next = 0;
        for (ObjId bo = 0; bo < b.num_objects(); ++bo) {
            ObjId y = x.functor.apply(bo);
            if (y == x0) smash_idx[{bo, MorVal::id(x0)}] = next++;
            for (MorId m : g.source_star(y))
                if (g.morphism(m).tgt == x0) smash_idx[{bo, MorVal::gen(m)}] = next++;
        }
        if (next != stot.num_objects())
            throw CatError("Internal", "smash object enumeration mismatch");
    }
    std::map<std::pair<MorId, MorVal>, int> smash_mor_idx;
    {
        int next = 0;
        for (MorId f = 0; f < b.num_morphisms(); ++f) {
            ObjId y = x.functor.apply(b.morphism(f).src);
            if (y == x0) smash_mor_idx[{f, MorVal::id(x0)}] = next++;
            for (MorId m : g.source_star(y))
                if (g.morphism(m).tgt == x0) smash_mor_idx[{f, MorVal::gen(m)}] = next++;
        }
        if (next != stot.num_morphisms())
            throw CatError("Internal", "smash morphism enumeration mismatch");
    }

    // build the functor pullback -> smash and verify it is an isomorphism
    // commuting with the projections; the pullback itself is assembled as a
    // category to confirm its composition agrees
    std::vector<std::string> pnames;
    for (auto [bo, s] : pobjs)
        pnames.push_back(b.object_name(bo) + "*" + sname(sobjs[s]));
    std::vector<MorData> pdata;
    for (auto [f, h] : pmors) {
        int hs = h.is_id() ? h.obj() : spairs[h.mor()].first;
        int ht = h.is_id() ? h.obj() : spairs[h.mor()].second;
        pdata.push_back({b.morphism_name(f) + "*" + slice->describe(h),
                         pobj_idx.at({b.morphism(f).src, hs}),
                         pobj_idx.at({b.morphism(f).tgt, ht})});
    }
    std::map<std::pair<MorId, MorId>, MorVal> ptable;
    for (int fi = 0; fi < static_cast<int>(pmors.size()); ++fi)
        for (int gi = 0; gi < static_cast<int>(pmors.size()); ++gi) {
            if (pdata[gi].src != pdata[fi].tgt) continue;
            MorVal fc = b.compose(MorVal::gen(pmors[gi].first), MorVal::gen(pmors[fi].first));
            MorVal hc = slice->compose(pmors[gi].second, pmors[fi].second);
            if (fc.is_id()) {
                ptable.emplace(std::pair{gi, fi}, MorVal::id(pdata[fi].src));
            } else {
                auto it = std::find(pmors.begin(), pmors.end(), std::pair{fc.mor(), hc});
                if (it == pmors.end())
                    throw CatError("Internal", "pullback composition left the pullback");
                ptable.emplace(std::pair{gi, fi},
                               MorVal::gen(static_cast<int>(it - pmors.begin())));
            }
        }
    auto pullback = std::make_shared<FiniteCategory>(
        FiniteCategory::build(std::move(pnames), std::move(pdata), std::move(ptable)));

    std::vector<ObjId> iom;
    for (auto [bo, s] : pobjs) iom.push_back(smash_idx.at({bo, sobjs[s]}));
    std::vector<MorVal> imm;
    for (auto [f, h] : pmors) {
        int hs = h.is_id() ? h.obj() : spairs[h.mor()].first;
        imm.push_back(MorVal::gen(smash_mor_idx.at({f, sobjs[hs]})));
    }
    CatFunctor iso(pullback, smash.total, std::move(iom), std::move(imm));
    iso.check();
    if (!functor_bijective(iso))
        throw CatError("Internal", "slice pullback is not isomorphic to the smash");
    return true;
}

}  // namespace catcov
