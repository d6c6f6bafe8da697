#include "catcov/category.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace catcov {

std::optional<ObjId> FiniteCategory::object_index(std::string_view name) const {
    auto it = obj_index_.find(name);
    if (it == obj_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<MorId> FiniteCategory::morphism_index(std::string_view name) const {
    auto it = mor_index_.find(name);
    if (it == mor_index_.end()) return std::nullopt;
    return it->second;
}

std::string FiniteCategory::describe(MorVal v) const {
    if (v.is_id()) return "ID(" + objects_[v.obj()] + ")";
    return mors_[v.mor()].name;
}

MorVal FiniteCategory::compose(MorVal g, MorVal f) const {
    if (tgt(f) != src(g))
        throw CatError("EndpointMismatch",
                       "cannot compose " + describe(g) + " after " + describe(f));
    if (f.is_id()) return g;
    if (g.is_id()) return f;
    auto it = table_.find({g.mor(), f.mor()});
    if (it == table_.end())
        throw CatError("MissingComposite",
                       "no table entry for " + describe(g) + " . " + describe(f));
    return it->second;
}

std::vector<std::vector<ObjId>> FiniteCategory::connected_components() const {
    std::vector<int> comp(objects_.size(), -1);
    std::vector<std::vector<ObjId>> out;
    for (ObjId start = 0; start < num_objects(); ++start) {
        if (comp[start] != -1) continue;
        int c = static_cast<int>(out.size());
        out.emplace_back();
        std::deque<ObjId> queue{start};
        comp[start] = c;
        while (!queue.empty()) {
            ObjId x = queue.front();
            queue.pop_front();
            out[c].push_back(x);
            auto visit = [&](ObjId y) {
                if (comp[y] == -1) {
                    comp[y] = c;
                    queue.push_back(y);
                }
            };
            for (MorId m : src_star_[x]) visit(mors_[m].tgt);
            for (MorId m : tgt_star_[x]) visit(mors_[m].src);
        }
        std::sort(out[c].begin(), out[c].end());
    }
    return out;
}

void FiniteCategory::index() {
    obj_index_.clear();
    mor_index_.clear();
    for (ObjId i = 0; i < num_objects(); ++i) {
        if (!obj_index_.emplace(objects_[i], i).second)
            throw CatError("DuplicateName", "object " + objects_[i]);
    }
    src_star_.assign(objects_.size(), {});
    tgt_star_.assign(objects_.size(), {});
    for (MorId m = 0; m < num_morphisms(); ++m) {
        if (obj_index_.count(mors_[m].name))
            throw CatError("DuplicateName",
                           "morphism " + mors_[m].name + " clashes with an object");
        if (!mor_index_.emplace(mors_[m].name, m).second)
            throw CatError("DuplicateName", "morphism " + mors_[m].name);
        src_star_[mors_[m].src].push_back(m);
        tgt_star_[mors_[m].tgt].push_back(m);
    }
}

void FiniteCategory::check_invariants() const {
    // Table entries are exactly the composable non-identity pairs.
    for (const auto& [pair, val] : table_) {
        auto [g, f] = pair;
        if (mors_[f].tgt != mors_[g].src)
            throw CatError("EndpointMismatch",
                           "table entry " + mors_[g].name + " . " + mors_[f].name +
                               " is not composable");
        if (val.is_id()) {
            if (mors_[f].src != mors_[g].tgt || val.obj() != mors_[f].src)
                throw CatError("EndpointMismatch",
                               "identity composite " + mors_[g].name + " . " +
                                   mors_[f].name + " at the wrong object");
        } else {
            const MorData& h = mors_[val.mor()];
            if (h.src != mors_[f].src || h.tgt != mors_[g].tgt)
                throw CatError("EndpointMismatch",
                               "composite " + h.name + " of " + mors_[g].name + " . " +
                                   mors_[f].name + " has wrong endpoints");
        }
    }
    for (MorId f = 0; f < num_morphisms(); ++f)
        for (MorId g : src_star_[mors_[f].tgt])
            if (!table_.count({g, f}))
                throw CatError("MissingComposite",
                               mors_[g].name + " . " + mors_[f].name);
    // Associativity over all composable triples.
    for (MorId f = 0; f < num_morphisms(); ++f)
        for (MorId g : src_star_[mors_[f].tgt])
            for (MorId h : src_star_[mors_[g].tgt]) {
                MorVal gf = table_.at({g, f});
                MorVal hg = table_.at({h, g});
                MorVal left = compose(MorVal::gen(h), gf);
                MorVal right = compose(hg, MorVal::gen(f));
                if (left != right)
                    throw CatError("NotAssociative",
                                   "(" + mors_[h].name + " . " + mors_[g].name + ") . " +
                                       mors_[f].name + " = " + describe(right) + " but " +
                                       mors_[h].name + " . (" + mors_[g].name + " . " +
                                       mors_[f].name + ") = " + describe(left));
            }
}

FiniteCategory FiniteCategory::build(std::vector<std::string> objects,
                                     std::vector<MorData> morphisms,
                                     std::map<std::pair<MorId, MorId>, MorVal> table) {
    FiniteCategory c;
    c.objects_ = std::move(objects);
    c.mors_ = std::move(morphisms);
    c.table_ = std::move(table);
    for (const MorData& m : c.mors_)
        if (m.src < 0 || m.src >= c.num_objects() || m.tgt < 0 || m.tgt >= c.num_objects())
            throw CatError("EndpointMismatch", "morphism " + m.name + " endpoint out of range");
    c.index();
    c.check_invariants();
    return c;
}

FiniteCategory FiniteCategory::validate(const RawCategory& raw) {
    FiniteCategory c;
    c.objects_ = raw.objects;
    std::map<std::string, ObjId, std::less<>> objs;
    for (ObjId i = 0; i < c.num_objects(); ++i) {
        if (!objs.emplace(c.objects_[i], i).second)
            throw CatError("DuplicateName", "object " + c.objects_[i]);
    }
    for (const RawMorphism& rm : raw.morphisms) {
        auto s = objs.find(rm.src);
        auto t = objs.find(rm.tgt);
        if (s == objs.end())
            throw CatError("EndpointMismatch", "morphism " + rm.name + ": unknown source " + rm.src);
        if (t == objs.end())
            throw CatError("EndpointMismatch", "morphism " + rm.name + ": unknown target " + rm.tgt);
        c.mors_.push_back({rm.name, s->second, t->second});
    }
    c.index();
    for (const RawComposition& rc : raw.compositions) {
        auto g = c.morphism_index(rc.g);
        auto f = c.morphism_index(rc.f);
        if (!g || !f)
            throw CatError("EndpointMismatch",
                           "composition entry references unknown morphism " +
                               (g ? rc.f : rc.g));
        MorVal val = MorVal::id(c.mors_[*f].src);
        if (rc.gf != "ID") {
            auto h = c.morphism_index(rc.gf);
            if (!h)
                throw CatError("EndpointMismatch",
                               "composition entry references unknown composite " + rc.gf);
            val = MorVal::gen(*h);
        }
        if (!c.table_.emplace(std::make_pair(*g, *f), val).second)
            throw CatError("DuplicateName",
                           "duplicate composition entry " + rc.g + " . " + rc.f);
    }
    c.check_invariants();
    return c;
}

CatFunctor::CatFunctor(CategoryPtr source, CategoryPtr target,
                       std::vector<ObjId> object_map, std::vector<MorVal> morphism_map)
    : src_(std::move(source)),
      tgt_(std::move(target)),
      object_map_(std::move(object_map)),
      morphism_map_(std::move(morphism_map)) {
    if (static_cast<int>(object_map_.size()) != src_->num_objects() ||
        static_cast<int>(morphism_map_.size()) != src_->num_morphisms())
        throw CatError("EndpointMismatch", "functor map size mismatch");
}

void CatFunctor::check() const {
    for (MorId m = 0; m < src_->num_morphisms(); ++m) {
        const MorData& d = src_->morphism(m);
        MorVal img = morphism_map_[m];
        if (tgt_->src(img) != object_map_[d.src] || tgt_->tgt(img) != object_map_[d.tgt])
            throw CatError("EndpointMismatch",
                           "image of " + d.name + " has wrong endpoints");
    }
    for (MorId f = 0; f < src_->num_morphisms(); ++f)
        for (MorId g : src_->source_star(src_->morphism(f).tgt)) {
            MorVal gf = src_->compose(MorVal::gen(g), MorVal::gen(f));
            MorVal lhs = tgt_->compose(morphism_map_[g], morphism_map_[f]);
            MorVal rhs = apply(gf);
            if (lhs != rhs)
                throw CatError("NotFunctorial",
                               "F(" + src_->morphism_name(g) + ") . F(" +
                                   src_->morphism_name(f) + ") = " + tgt_->describe(lhs) +
                                   " but F(" + src_->describe(gf) + ") = " +
                                   tgt_->describe(rhs));
        }
}

bool CatFunctor::is_identity() const {
    if (src_.get() != tgt_.get()) return false;
    for (ObjId x = 0; x < src_->num_objects(); ++x)
        if (object_map_[x] != x) return false;
    for (MorId m = 0; m < src_->num_morphisms(); ++m)
        if (morphism_map_[m] != MorVal::gen(m)) return false;
    return true;
}

bool CatFunctor::operator==(const CatFunctor& other) const {
    return src_.get() == other.src_.get() && tgt_.get() == other.tgt_.get() &&
           object_map_ == other.object_map_ && morphism_map_ == other.morphism_map_;
}

CatFunctor CatFunctor::after(const CatFunctor& g) const {
    if (g.tgt_.get() != src_.get())
        throw CatError("EndpointMismatch", "functor composition mismatch");
    std::vector<ObjId> om(g.src_->num_objects());
    std::vector<MorVal> mm;
    mm.reserve(g.src_->num_morphisms());
    for (ObjId x = 0; x < g.src_->num_objects(); ++x) om[x] = object_map_[g.object_map_[x]];
    for (MorId m = 0; m < g.src_->num_morphisms(); ++m) mm.push_back(apply(g.morphism_map_[m]));
    return CatFunctor(g.src_, tgt_, std::move(om), std::move(mm));
}

CatFunctor CatFunctor::identity(CategoryPtr c) {
    std::vector<ObjId> om(c->num_objects());
    std::vector<MorVal> mm;
    for (ObjId x = 0; x < c->num_objects(); ++x) om[x] = x;
    for (MorId m = 0; m < c->num_morphisms(); ++m) mm.push_back(MorVal::gen(m));
    return CatFunctor(c, c, std::move(om), std::move(mm));
}

Congruence::Congruence(CategoryPtr cat) : cat_(std::move(cat)) {
    parent_.resize(cat_->num_morphisms() + cat_->num_objects());
    for (size_t i = 0; i < parent_.size(); ++i) parent_[i] = static_cast<int>(i);
}

int Congruence::slot(MorVal v) const {
    return v.is_id() ? cat_->num_morphisms() + v.obj() : v.mor();
}

MorVal Congruence::unslot(int s) const {
    return s < cat_->num_morphisms() ? MorVal::gen(s) : MorVal::id(s - cat_->num_morphisms());
}

int Congruence::find_slot(int s) const {
    while (parent_[s] != s) {
        parent_[s] = parent_[parent_[s]];
        s = parent_[s];
    }
    return s;
}

bool Congruence::merge(int a, int b) {
    a = find_slot(a);
    b = find_slot(b);
    if (a == b) return false;
    // Identity slots win as representatives; otherwise the least morphism.
    const int m = cat_->num_morphisms();
    auto prio = [m](int s) { return s >= m ? s - m : s + m; };
    if (prio(a) > prio(b)) std::swap(a, b);
    parent_[b] = a;
    return true;
}

bool Congruence::related(MorVal a, MorVal b) const {
    return find_slot(slot(a)) == find_slot(slot(b));
}

MorVal Congruence::find(MorVal a) const { return unslot(find_slot(slot(a))); }

std::vector<std::vector<MorVal>> Congruence::classes() const {
    std::map<int, std::vector<MorVal>> by_rep;
    for (size_t s = 0; s < parent_.size(); ++s)
        by_rep[find_slot(static_cast<int>(s))].push_back(unslot(static_cast<int>(s)));
    std::vector<std::vector<MorVal>> out;
    for (auto& [rep, members] : by_rep) {
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    return out;
}

bool Congruence::is_discrete() const {
    for (size_t s = 0; s < parent_.size(); ++s)
        if (find_slot(static_cast<int>(s)) != static_cast<int>(s)) return false;
    return true;
}

Congruence congruence_close(CategoryPtr cat,
                            const std::vector<std::pair<MorVal, MorVal>>& pairs) {
    Congruence q(cat);
    const FiniteCategory& c = *cat;
    for (const auto& [a, b] : pairs)
        if (c.src(a) != c.src(b) || c.tgt(a) != c.tgt(b))
            throw CatError("PairEndpointMismatch",
                           c.describe(a) + " ~ " + c.describe(b));
    std::deque<std::pair<MorVal, MorVal>> work(pairs.begin(), pairs.end());
    while (!work.empty()) {
        auto [a, b] = work.front();
        work.pop_front();
        if (!q.merge(q.slot(a), q.slot(b))) continue;
        // Rescan: compose the merged pair with everything on both sides.
        auto enqueue = [&](MorVal u, MorVal v) {
            if (!q.related(u, v)) work.emplace_back(u, v);
        };
        for (MorId g : c.source_star(c.tgt(a)))
            enqueue(c.compose(MorVal::gen(g), a), c.compose(MorVal::gen(g), b));
        for (MorId f : c.target_star(c.src(a)))
            enqueue(c.compose(a, MorVal::gen(f)), c.compose(b, MorVal::gen(f)));
        // Identities compose trivially, so only non-identity neighbours matter.
    }
    return q;
}

QuotientResult quotient_category(const Congruence& q) {
    CategoryPtr cat = q.category_ptr();
    const FiniteCategory& c = *cat;
    // Each class becomes one morphism; a class containing an identity value
    // collapses to that identity.
    std::vector<ObjId> obj_of_class;   // identity classes
    std::map<MorVal, int> class_id;    // representative -> new MorId, identity classes excluded
    std::vector<std::string> names(c.num_objects());
    for (ObjId x = 0; x < c.num_objects(); ++x) names[x] = c.object_name(x);

    std::vector<MorData> mors;
    std::vector<MorVal> rep_of;  // new MorId -> representative in c
    for (MorId m = 0; m < c.num_morphisms(); ++m) {
        MorVal rep = q.find(MorVal::gen(m));
        if (rep.is_id()) continue;
        if (rep.mor() != m) continue;  // not the least member
        int id = static_cast<int>(mors.size());
        class_id[rep] = id;
        rep_of.push_back(rep);
        mors.push_back({"[" + c.morphism_name(m) + "]", c.src(rep), c.tgt(rep)});
    }
    auto project = [&](MorVal v) -> MorVal {
        MorVal rep = q.find(v);
        if (rep.is_id()) return MorVal::id(rep.obj());
        return MorVal::gen(class_id.at(rep));
    };
    std::map<std::pair<MorId, MorId>, MorVal> table;
    for (int gi = 0; gi < static_cast<int>(rep_of.size()); ++gi)
        for (int fi = 0; fi < static_cast<int>(rep_of.size()); ++fi) {
            if (c.tgt(rep_of[fi]) != c.src(rep_of[gi])) continue;
            table.emplace(std::pair{gi, fi}, project(c.compose(rep_of[gi], rep_of[fi])));
        }
    auto quot = std::make_shared<FiniteCategory>(
        FiniteCategory::build(names, std::move(mors), std::move(table)));

    std::vector<ObjId> om(c.num_objects());
    for (ObjId x = 0; x < c.num_objects(); ++x) om[x] = x;
    std::vector<MorVal> mm;
    for (MorId m = 0; m < c.num_morphisms(); ++m) mm.push_back(project(MorVal::gen(m)));
    CatFunctor proj(cat, quot, std::move(om), std::move(mm));
    proj.check();
    return {quot, std::move(proj)};
}

}  // namespace catcov
