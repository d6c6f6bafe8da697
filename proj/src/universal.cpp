#include "catcov/universal.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace catcov {

namespace {

using Step = std::pair<MorId, bool>;  // morphism, traversed forward?

std::vector<Step> reverse_path(const std::vector<Step>& p) {
    std::vector<Step> out(p.rbegin(), p.rend());
    for (Step& s : out) s.second = !s.second;
    return out;
}

// Application-order walks from base_point to every object along the
// spanning-tree edges recorded in the presentation.
std::vector<std::vector<Step>> tree_paths(const FiniteCategory& base,
                                          const GroupPresentation& p, ObjId base_point) {
    std::vector<std::vector<Step>> path(base.num_objects());
    std::vector<bool> seen(base.num_objects(), false);
    seen[base_point] = true;
    std::vector<ObjId> queue{base_point};
    std::vector<MorId> edges;
    for (const std::string& name : p.tree_edges) {
        auto m = base.morphism_index(name);
        if (!m) throw CatError("Internal", "tree edge " + name + " is not a base morphism");
        edges.push_back(*m);
    }
    for (size_t head = 0; head < queue.size(); ++head) {
        ObjId x = queue[head];
        for (MorId m : edges) {
            const MorData& d = base.morphism(m);
            if (d.src == x && !seen[d.tgt]) {
                seen[d.tgt] = true;
                path[d.tgt] = path[x];
                path[d.tgt].emplace_back(m, true);
                queue.push_back(d.tgt);
            }
            if (d.tgt == x && !seen[d.src]) {
                seen[d.src] = true;
                path[d.src] = path[x];
                path[d.src].emplace_back(m, false);
                queue.push_back(d.src);
            }
        }
    }
    return path;
}

CategoryPtr freeze(FiniteCategory c) {
    return std::make_shared<const FiniteCategory>(std::move(c));
}

}  // namespace

std::vector<Word> free_ball_words(int rank, int radius) {
    std::vector<Word> out{Word{}};
    size_t shell_begin = 0;
    for (int len = 1; len <= radius; ++len) {
        size_t shell_end = out.size();
        for (size_t i = shell_begin; i < shell_end; ++i)
            for (int g = 0; g < rank; ++g)
                for (int s : {1, -1}) {
                    const Word& w = out[i];
                    if (!w.empty() && w.back().first == g && w.back().second == -s)
                        continue;
                    Word next = w;
                    next.emplace_back(g, s);
                    out.push_back(std::move(next));
                }
        shell_begin = shell_end;
    }
    return out;
}

std::vector<ObjId> CoverBall::interior() const {
    std::vector<ObjId> out;
    for (ObjId x = 0; x < total->num_objects(); ++x)
        if (!boundary[x]) out.push_back(x);
    return out;
}

CoverBall universal_ball(CategoryPtr base, ObjId base_point, int radius, int max_tietze) {
    const FiniteCategory& c = *base;
    GroupPresentation p = pi1_presentation(c, base_point, max_tietze);
    if (!p.simplified_fully || !p.relators.empty())
        throw CatError("BudgetOrNonFree",
                       "the vertex group did not simplify to a free presentation");

    std::vector<Word> ball_words =
        free_ball_words(static_cast<int>(p.generators.size()), radius);
    std::map<Word, int> widx;
    for (size_t i = 0; i < ball_words.size(); ++i)
        widx[ball_words[i]] = static_cast<int>(i);

    std::vector<Word> deg(c.num_morphisms());
    for (MorId m = 0; m < c.num_morphisms(); ++m)
        deg[m] = free_reduce(p.morphism_words.at(c.morphism_name(m)));

    const int n = c.num_objects();
    auto oid = [&](int wi, ObjId b) { return wi * n + b; };

    std::vector<std::string> objects;
    for (size_t wi = 0; wi < ball_words.size(); ++wi)
        for (ObjId b = 0; b < n; ++b)
            objects.push_back(c.object_name(b) + "@" + p.word_to_string(ball_words[wi]));

    // A copy of the base morphism f exists at the word w whenever the
    // target word w.deg(f)^-1 stays inside the ball.
    std::vector<MorData> mors;
    std::vector<std::pair<MorId, int>> copy_of;  // (base morphism, source word)
    std::map<std::pair<MorId, int>, MorId> copy_idx;
    for (size_t wi = 0; wi < ball_words.size(); ++wi)
        for (MorId m = 0; m < c.num_morphisms(); ++m) {
            Word tw = word_concat(ball_words[wi], word_inverse(deg[m]));
            auto it = widx.find(tw);
            if (it == widx.end()) continue;
            const MorData& d = c.morphism(m);
            copy_idx[{m, static_cast<int>(wi)}] = static_cast<MorId>(mors.size());
            copy_of.emplace_back(m, static_cast<int>(wi));
            mors.push_back({d.name + "@" + p.word_to_string(ball_words[wi]),
                            oid(static_cast<int>(wi), d.src), oid(it->second, d.tgt)});
        }

    std::map<std::pair<MorId, MorId>, MorVal> table;
    for (MorId i = 0; i < static_cast<MorId>(copy_of.size()); ++i) {
        auto [f, wi] = copy_of[i];
        ObjId mid = c.morphism(f).tgt;
        int twi = (mors[i].tgt - mid) / n;
        for (MorId g : c.source_star(mid)) {
            auto jt = copy_idx.find({g, twi});
            if (jt == copy_idx.end()) continue;
            MorVal h = c.compose(MorVal::gen(g), MorVal::gen(f));
            if (h.is_id()) {
                table.emplace(std::pair{jt->second, i}, MorVal::id(mors[i].src));
            } else {
                auto ht = copy_idx.find({h.mor(), wi});
                if (ht == copy_idx.end())
                    throw CatError("Internal", "composite copy missing from the ball");
                table.emplace(std::pair{jt->second, i}, MorVal::gen(ht->second));
            }
        }
    }

    CategoryPtr total =
        freeze(FiniteCategory::build(std::move(objects), std::move(mors), std::move(table)));
    std::vector<ObjId> om(total->num_objects());
    std::vector<MorVal> mm;
    for (auto [m, wi] : copy_of) mm.push_back(MorVal::gen(m));
    for (size_t wi = 0; wi < ball_words.size(); ++wi)
        for (ObjId b = 0; b < n; ++b) om[oid(static_cast<int>(wi), b)] = b;
    CatFunctor projection(total, base, std::move(om), std::move(mm));
    projection.check();

    std::vector<bool> boundary(total->num_objects(), false);
    std::vector<Word> obj_words(total->num_objects());
    for (size_t wi = 0; wi < ball_words.size(); ++wi)
        for (ObjId b = 0; b < n; ++b) {
            ObjId x = oid(static_cast<int>(wi), b);
            obj_words[x] = ball_words[wi];
            for (MorId m : c.source_star(b))
                if (!widx.count(word_concat(ball_words[wi], word_inverse(deg[m]))))
                    boundary[x] = true;
            for (MorId m : c.target_star(b))
                if (!widx.count(word_concat(ball_words[wi], deg[m]))) boundary[x] = true;
        }
    return CoverBall{std::move(total), std::move(projection), std::move(boundary),
                     std::move(obj_words), std::move(p), base_point, radius};
}

std::optional<CatFunctor> ball_translation(const CoverBall& from, const CoverBall& to,
                                           const Word& g) {
    if (from.projection.target_ptr() != to.projection.target_ptr() ||
        from.base_point != to.base_point || from.group.generators != to.group.generators)
        throw CatError("EndpointMismatch", "the balls cover different bases");

    std::map<std::pair<ObjId, Word>, ObjId> to_idx;
    for (ObjId x = 0; x < to.total->num_objects(); ++x)
        to_idx[{to.projection.apply(x), to.words[x]}] = x;

    std::vector<ObjId> om(from.total->num_objects());
    for (ObjId x = 0; x < from.total->num_objects(); ++x) {
        auto it = to_idx.find({from.projection.apply(x), word_concat(g, from.words[x])});
        if (it == to_idx.end()) return std::nullopt;
        om[x] = it->second;
    }
    std::vector<MorVal> mm;
    for (MorId j = 0; j < from.total->num_morphisms(); ++j) {
        MorId base_m = from.projection.apply(MorVal::gen(j)).mor();
        ObjId src_up = om[from.total->morphism(j).src];
        std::optional<MorId> hit;
        for (MorId k : to.total->source_star(src_up))
            if (to.projection.apply(MorVal::gen(k)) == MorVal::gen(base_m)) hit = k;
        if (!hit) return std::nullopt;
        mm.push_back(MorVal::gen(*hit));
    }
    CatFunctor t(from.projection.source_ptr(), to.projection.source_ptr(),
                 std::move(om), std::move(mm));
    t.check();
    if (!(to.projection.after(t) == from.projection))
        throw CatError("Internal", "translation does not commute with the projections");
    return t;
}

DoubleResult cayley_double(const std::vector<std::string>& arrows, int radius) {
    if (arrows.empty()) throw CatError("EmptyE", "at least one arrow is required");

    std::vector<MorData> base_mors;
    for (const std::string& a : arrows) base_mors.push_back({a, 0, 1});
    CategoryPtr base = freeze(FiniteCategory::build({"x", "x0"}, base_mors, {}));

    CoverBall ball = universal_ball(base, 1, radius);

    // The double is rebuilt from the word data alone: one x and one x0
    // column per reduced word, a horizontal first-arrow edge everywhere and
    // one diagonal edge per remaining arrow.
    const int rank = static_cast<int>(arrows.size()) - 1;
    std::vector<Word> words = free_ball_words(rank, radius);
    std::map<Word, int> widx;
    for (size_t i = 0; i < words.size(); ++i) widx[words[i]] = static_cast<int>(i);
    auto render = [&](const Word& w) {
        if (w.empty()) return std::string("1");
        std::string out;
        for (auto [g, e] : w) {
            if (!out.empty()) out += ".";
            out += arrows[g + 1];
            if (e < 0) out += "-";
        }
        return out;
    };

    std::vector<std::string> objects;
    for (const Word& w : words) {
        objects.push_back("x|" + render(w));
        objects.push_back("x0|" + render(w));
    }
    std::vector<MorData> edges;
    for (size_t wi = 0; wi < words.size(); ++wi) {
        ObjId top = static_cast<ObjId>(2 * wi), bottom = top + 1;
        edges.push_back({arrows[0] + "|" + render(words[wi]), top, bottom});
        for (int j = 0; j < rank; ++j) {
            auto it = widx.find(word_concat(words[wi], {{j, -1}}));
            if (it == widx.end()) continue;
            edges.push_back({arrows[j + 1] + "|" + render(words[wi]), top,
                             static_cast<ObjId>(2 * it->second + 1)});
        }
    }
    CategoryPtr dbl = freeze(FiniteCategory::build(std::move(objects), std::move(edges), {}));

    // Word-translation isomorphism onto the ball, matched by name.
    auto translate = [&](const Word& w) {
        Word out;
        for (auto [g, e] : w) {
            auto gi = ball.group.generator_index(arrows[g + 1]);
            if (!gi) throw CatError("Internal", "arrow " + arrows[g + 1] + " lost its generator");
            out.emplace_back(*gi, e);
        }
        return out;
    };
    std::vector<ObjId> om;
    for (const Word& w : words) {
        std::string suffix = "@" + ball.group.word_to_string(translate(w));
        for (const char* col : {"x", "x0"}) {
            auto x = ball.total->object_index(col + suffix);
            if (!x) throw CatError("Internal", "ball object " + (col + suffix) + " missing");
            om.push_back(*x);
        }
    }
    std::vector<MorVal> mm;
    for (MorId j = 0; j < dbl->num_morphisms(); ++j) {
        const std::string& name = dbl->morphism_name(j);
        size_t bar = name.find('|');
        const Word& w = ball.words[om[dbl->morphism(j).src]];
        std::string target = name.substr(0, bar) + "@" + ball.group.word_to_string(w);
        auto k = ball.total->morphism_index(target);
        if (!k) throw CatError("Internal", "ball morphism " + target + " missing");
        mm.push_back(MorVal::gen(*k));
    }
    CatFunctor iso(dbl, ball.total, std::move(om), std::move(mm));
    iso.check();
    if (dbl->num_objects() != ball.total->num_objects() ||
        dbl->num_morphisms() != ball.total->num_morphisms())
        throw CatError("Internal", "double and universal ball sizes differ");
    std::vector<bool> hit(ball.total->num_objects(), false);
    for (ObjId x = 0; x < dbl->num_objects(); ++x) hit[iso.apply(x)] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end())
        throw CatError("Internal", "double does not map onto the universal ball");
    return DoubleResult{std::move(ball), std::move(dbl), std::move(iso)};
}

CatFunctor covers_all(const CoverBall& ball, const CoveringFunctor& F, ObjId pointed) {
    if (F.functor.target_ptr() != ball.projection.target_ptr())
        throw CatError("EndpointMismatch", "the covering is over a different base");
    if (!is_galois(F)) throw CatError("NotGalois", "the target covering is not Galois");
    if (pointed < 0 || pointed >= F.total().num_objects() ||
        F.functor.apply(pointed) != ball.base_point)
        throw CatError("FibreMismatch", "the pointed object does not sit over the base point");

    const FiniteCategory& base = ball.projection.target();
    const FiniteCategory& up = F.total();
    std::vector<std::vector<Step>> path = tree_paths(base, ball.group, ball.base_point);

    auto lift_step = [&](ObjId cur, Step s) {
        const auto& star = s.second ? up.source_star(cur) : up.target_star(cur);
        for (MorId m : star)
            if (F.functor.apply(MorVal::gen(m)) == MorVal::gen(s.first))
                return s.second ? up.morphism(m).tgt : up.morphism(m).src;
        throw CatError("Internal", "no lift of a base step");
    };
    auto lift_walk = [&](ObjId cur, const std::vector<Step>& steps) {
        for (Step s : steps) cur = lift_step(cur, s);
        return cur;
    };

    // Application-order loop at the base point for each free generator.
    std::vector<std::vector<Step>> loop(ball.group.generators.size());
    for (size_t g = 0; g < loop.size(); ++g) {
        auto m = base.morphism_index(ball.group.generators[g]);
        if (!m) throw CatError("Internal", "generator is not a base morphism");
        const MorData& d = base.morphism(*m);
        loop[g] = path[d.src];
        loop[g].emplace_back(*m, true);
        auto back = reverse_path(path[d.tgt]);
        loop[g].insert(loop[g].end(), back.begin(), back.end());
    }

    std::vector<ObjId> om(ball.total->num_objects());
    for (ObjId x = 0; x < ball.total->num_objects(); ++x) {
        ObjId cur = pointed;
        // traverse the inverse of the word, then the tree path down to the
        // projected object
        for (auto [g, e] : ball.words[x])
            cur = lift_walk(cur, e > 0 ? reverse_path(loop[g]) : loop[g]);
        om[x] = lift_walk(cur, path[ball.projection.apply(x)]);
    }
    std::vector<MorVal> mm;
    for (MorId j = 0; j < ball.total->num_morphisms(); ++j) {
        MorVal down = ball.projection.apply(MorVal::gen(j));
        ObjId src_up = om[ball.total->morphism(j).src];
        std::optional<MorId> hit;
        for (MorId k : up.source_star(src_up))
            if (F.functor.apply(MorVal::gen(k)) == down) hit = k;
        if (!hit) throw CatError("Internal", "no lift of a ball morphism");
        mm.push_back(MorVal::gen(*hit));
    }
    CatFunctor out(ball.projection.source_ptr(), F.functor.source_ptr(),
                   std::move(om), std::move(mm));
    out.check();
    if (!(F.functor.after(out) == ball.projection))
        throw CatError("NotEquivariant", "the ball map does not commute with the projections");
    return out;
}

}  // namespace catcov
