#include "catcov/presentation.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <deque>
#include <set>

namespace catcov {

using boost::multiprecision::cpp_int;

Word free_reduce(Word w) {
    Word out;
    for (auto [g, e] : w) {
        if (!out.empty() && out.back().first == g && out.back().second == -e)
            out.pop_back();
        else
            out.emplace_back(g, e);
    }
    return out;
}

Word word_inverse(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.emplace_back(it->first, -it->second);
    return out;
}

Word word_concat(const Word& u, const Word& v) {
    Word out = u;
    out.insert(out.end(), v.begin(), v.end());
    return free_reduce(std::move(out));
}

std::optional<int> GroupPresentation::generator_index(const std::string& name) const {
    for (size_t i = 0; i < generators.size(); ++i)
        if (generators[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

std::string GroupPresentation::word_to_string(const Word& w) const {
    if (w.empty()) return "1";
    std::string out;
    for (auto [g, e] : w) {
        if (!out.empty()) out += ".";
        out += generators[g];
        if (e < 0) out += "-";
    }
    return out;
}

namespace {

// Substitute gen -> sub inside a word, then freely reduce.
Word substitute(const Word& w, int gen, const Word& sub) {
    Word out;
    for (auto [g, e] : w) {
        if (g == gen) {
            const Word& piece = sub;  // exponent handled below
            if (e > 0)
                out.insert(out.end(), piece.begin(), piece.end());
            else {
                Word inv = word_inverse(piece);
                out.insert(out.end(), inv.begin(), inv.end());
            }
        } else {
            out.emplace_back(g, e);
        }
    }
    return free_reduce(std::move(out));
}

struct SpanningTree {
    std::vector<MorId> edges;        // tree morphisms, in BFS discovery order
    std::vector<bool> in_tree;       // per morphism
    std::vector<ObjId> order;        // BFS object order from the base
};

// BFS over the underlying undirected graph, ties broken by declared
// morphism order.
SpanningTree bfs_tree(int num_objects, const std::vector<MorData>& mors, ObjId base) {
    SpanningTree t;
    t.in_tree.assign(mors.size(), false);
    std::vector<bool> seen(num_objects, false);
    std::deque<ObjId> queue{base};
    seen[base] = true;
    while (!queue.empty()) {
        ObjId x = queue.front();
        queue.pop_front();
        t.order.push_back(x);
        for (MorId m = 0; m < static_cast<int>(mors.size()); ++m) {
            if (mors[m].src == x && !seen[mors[m].tgt]) {
                seen[mors[m].tgt] = true;
                t.in_tree[m] = true;
                t.edges.push_back(m);
                queue.push_back(mors[m].tgt);
            }
            if (mors[m].tgt == x && !seen[mors[m].src]) {
                seen[mors[m].src] = true;
                t.in_tree[m] = true;
                t.edges.push_back(m);
                queue.push_back(mors[m].src);
            }
        }
    }
    if (static_cast<int>(t.order.size()) != num_objects)
        throw CatError("NotConnected", "the underlying graph is not connected");
    return t;
}

GroupPresentation assemble(std::vector<std::string> gen_names,
                           const std::vector<MorData>& edges, ObjId base,
                           const std::string& base_name,
                           std::vector<Word> extra_relators, int num_objects,
                           int max_tietze) {
    SpanningTree tree = bfs_tree(num_objects, edges, base);
    GroupPresentation p;
    p.generators = std::move(gen_names);
    p.base_object = base_name;
    p.relators = std::move(extra_relators);
    for (MorId m : tree.edges) {
        p.relators.push_back({{m, 1}});
        p.tree_edges.push_back(p.generators[m]);
    }
    for (size_t m = 0; m < p.generators.size(); ++m)
        p.morphism_words[p.generators[m]] = {{static_cast<int>(m), 1}};
    return tietze_simplify(std::move(p), max_tietze);
}

}  // namespace

GroupPresentation pi1_presentation(const FiniteCategory& c, ObjId base, int max_tietze) {
    if (base < 0 || base >= c.num_objects())
        throw CatError("NoSuchObject", "base object index out of range");
    std::vector<std::string> gens;
    std::vector<MorData> edges;
    for (MorId m = 0; m < c.num_morphisms(); ++m) {
        gens.push_back(c.morphism_name(m));
        edges.push_back(c.morphism(m));
    }
    // One relator per composition-table entry: g.f.(gf)^-1.
    std::vector<Word> rels;
    for (MorId f = 0; f < c.num_morphisms(); ++f)
        for (MorId g : c.source_star(c.morphism(f).tgt)) {
            MorVal h = c.compose(MorVal::gen(g), MorVal::gen(f));
            Word r{{g, 1}, {f, 1}};
            if (!h.is_id()) r.emplace_back(h.mor(), -1);
            rels.push_back(free_reduce(std::move(r)));
        }
    return assemble(std::move(gens), edges, base, c.object_name(base), std::move(rels),
                    c.num_objects(), max_tietze);
}

GroupPresentation pi1_presentation(const PresentedQuiver& q, const std::string& base,
                                   int max_tietze) {
    std::map<std::string, ObjId> objs;
    for (size_t i = 0; i < q.objects.size(); ++i) {
        if (!objs.emplace(q.objects[i], static_cast<ObjId>(i)).second)
            throw CatError("DuplicateName", "object " + q.objects[i]);
    }
    auto base_it = objs.find(base);
    if (base_it == objs.end()) throw CatError("NoSuchObject", "base object " + base);

    std::vector<std::string> gens;
    std::vector<MorData> edges;
    std::map<std::string, MorId> arrow_idx;
    for (const RawMorphism& a : q.arrows) {
        if (objs.count(a.name) || arrow_idx.count(a.name))
            throw CatError("DuplicateName", "arrow " + a.name);
        auto s = objs.find(a.src), t = objs.find(a.tgt);
        if (s == objs.end() || t == objs.end())
            throw CatError("EndpointMismatch", "arrow " + a.name + " endpoint unknown");
        arrow_idx[a.name] = static_cast<MorId>(edges.size());
        gens.push_back(a.name);
        edges.push_back({a.name, s->second, t->second});
    }
    auto path_word = [&](const std::vector<std::string>& path, ObjId* s, ObjId* t) {
        Word w;
        ObjId at = -1;
        for (const std::string& name : path) {
            auto it = arrow_idx.find(name);
            if (it == arrow_idx.end())
                throw CatError("EndpointMismatch", "relation references unknown arrow " + name);
            const MorData& a = edges[it->second];
            if (at != -1 && a.src != at)
                throw CatError("EndpointMismatch", "relation path does not chain at " + name);
            if (at == -1) *s = a.src;
            at = a.tgt;
            w.emplace_back(it->second, 1);
        }
        *t = at;
        std::reverse(w.begin(), w.end());  // application order -> product order
        return w;
    };
    std::vector<Word> rels;
    for (const auto& [lhs, rhs] : q.relations) {
        ObjId ls = -1, lt = -1, rs = -1, rt = -1;
        Word lw = path_word(lhs, &ls, &lt);
        Word rw = path_word(rhs, &rs, &rt);
        if (!lhs.empty() && !rhs.empty() && (ls != rs || lt != rt))
            throw CatError("EndpointMismatch", "relation sides have different endpoints");
        if (lhs.empty() != rhs.empty()) {
            ObjId s = lhs.empty() ? rs : ls, t = lhs.empty() ? rt : lt;
            if (s != t)
                throw CatError("EndpointMismatch", "relation equates a path with an identity "
                                                   "but the path is not closed");
        }
        rels.push_back(word_concat(lw, word_inverse(rw)));
    }
    return assemble(std::move(gens), edges, base_it->second, base,
                    std::move(rels), static_cast<int>(q.objects.size()), max_tietze);
}

GroupPresentation tietze_simplify(GroupPresentation p, int max_steps) {
    int steps = 0;
    const int n = static_cast<int>(p.generators.size());
    std::vector<bool> alive(n, true);
    p.simplified_fully = true;

    auto budget = [&]() {
        if (steps >= max_steps) {
            p.simplified_fully = false;
            return false;
        }
        return true;
    };

    // Free-reduce everything up front; each relator pass is one step.
    for (Word& r : p.relators) {
        if (!budget()) break;
        ++steps;
        r = free_reduce(std::move(r));
    }

    bool changed = true;
    while (changed && budget()) {
        changed = false;
        std::erase_if(p.relators, [](const Word& r) { return r.empty(); });

        // Find a relator with a generator occurring exactly once.
        int victim_rel = -1, victim_gen = -1, victim_pos = -1;
        for (size_t ri = 0; ri < p.relators.size() && victim_rel < 0; ++ri) {
            std::map<int, int> count;
            for (auto [g, e] : p.relators[ri]) count[g]++;
            for (size_t pos = 0; pos < p.relators[ri].size(); ++pos) {
                int g = p.relators[ri][pos].first;
                if (count[g] == 1) {
                    victim_rel = static_cast<int>(ri);
                    victim_gen = g;
                    victim_pos = static_cast<int>(pos);
                    break;
                }
            }
        }
        if (victim_rel < 0) break;

        // Rotate the relator so the victim leads: r = g^e . w, hence
        // g = w^-1 (e=+1) or g = w (e=-1).
        Word r = p.relators[victim_rel];
        std::rotate(r.begin(), r.begin() + victim_pos, r.end());
        int e = r.front().second;
        Word w(r.begin() + 1, r.end());
        Word sub = (e > 0) ? word_inverse(w) : w;
        p.relators.erase(p.relators.begin() + victim_rel);
        ++steps;  // one generator elimination

        // Substitution always runs to completion so the state stays
        // consistent even when it overshoots the budget.
        for (Word& rel : p.relators) {
            Word next = substitute(rel, victim_gen, sub);
            if (next != rel) {
                rel = std::move(next);
                ++steps;
            }
        }
        for (auto& [name, word] : p.morphism_words)
            word = substitute(word, victim_gen, sub);
        alive[victim_gen] = false;
        changed = true;
    }
    std::erase_if(p.relators, [](const Word& r) { return r.empty(); });

    // Compact the surviving generators.
    std::vector<int> remap(n, -1);
    std::vector<std::string> gens;
    for (int g = 0; g < n; ++g)
        if (alive[g]) {
            remap[g] = static_cast<int>(gens.size());
            gens.push_back(p.generators[g]);
        }
    auto apply_remap = [&](Word& w) {
        for (auto& [g, e] : w) g = remap[g];
    };
    for (Word& r : p.relators) apply_remap(r);
    for (auto& [name, w] : p.morphism_words) apply_remap(w);
    p.generators = std::move(gens);
    return p;
}

AbelianInvariants abelianize(const GroupPresentation& p) {
    const int cols = static_cast<int>(p.generators.size());
    const int rows = static_cast<int>(p.relators.size());
    std::vector<std::vector<cpp_int>> a(rows, std::vector<cpp_int>(cols, 0));
    for (int r = 0; r < rows; ++r)
        for (auto [g, e] : p.relators[r]) a[r][g] += e;

    // Smith normal form by exact integer reduction.
    int t = 0;
    std::vector<cpp_int> diag;
    while (t < rows && t < cols) {
        // Locate a nonzero pivot of least absolute value.
        int pr = -1, pc = -1;
        cpp_int best = 0;
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j)
                if (a[i][j] != 0 && (pr < 0 || abs(a[i][j]) < best)) {
                    pr = i;
                    pc = j;
                    best = abs(a[i][j]);
                }
        if (pr < 0) break;
        std::swap(a[t], a[pr]);
        for (int i = 0; i < rows; ++i) std::swap(a[i][t], a[i][pc]);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = t + 1; i < rows; ++i)
                if (a[i][t] != 0) {
                    cpp_int q = a[i][t] / a[t][t];
                    for (int j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
                    if (a[i][t] != 0) {  // remainder became the smaller pivot
                        std::swap(a[t], a[i]);
                        clean = false;
                    }
                }
            for (int j = t + 1; j < cols; ++j)
                if (a[t][j] != 0) {
                    cpp_int q = a[t][j] / a[t][t];
                    for (int i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
                    if (a[t][j] != 0) {
                        for (int i = 0; i < rows; ++i) std::swap(a[i][t], a[i][j]);
                        clean = false;
                    }
                }
            if (clean) {
                // The pivot must divide the rest of the submatrix.
                for (int i = t + 1; i < rows && clean; ++i)
                    for (int j = t + 1; j < cols && clean; ++j)
                        if (a[i][j] % a[t][t] != 0) {
                            for (int k = t; k < cols; ++k) a[t][k] += a[i][k];
                            clean = false;
                        }
            }
        }
        diag.push_back(abs(a[t][t]));
        ++t;
    }
    AbelianInvariants inv;
    inv.free_rank = cols - static_cast<int>(diag.size());
    for (const cpp_int& d : diag)
        if (d >= 2) inv.torsion.push_back(d.convert_to<std::int64_t>());
    std::sort(inv.torsion.begin(), inv.torsion.end());
    return inv;
}

namespace {

// Todd-Coxeter coset table over the trivial subgroup. Columns 2g and 2g+1
// are the actions of generator g and its inverse.
class CosetTable {
public:
    CosetTable(int ngens, int max_rows) : ngens_(ngens), max_rows_(max_rows) {
        add_row();
    }

    bool overflowed() const { return overflow_; }
    int col(int g, int e) const { return 2 * g + (e < 0 ? 1 : 0); }

    int rep(int c) const {
        while (parent_[c] != c) c = parent_[c];
        return c;
    }

    bool dead(int c) const { return rep(c) != c; }
    int rows() const { return static_cast<int>(table_.size()); }

    int get(int c, int col) const { return table_[c][col]; }

    void set(int a, int col, int b) {
        table_[a][col] = b;
        table_[b][col ^ 1] = a;
    }

    int define(int c, int col) {
        if (rows() >= max_rows_) {
            overflow_ = true;
            return -1;
        }
        int n = add_row();
        set(c, col, n);
        return n;
    }

    void scan_and_fill(int start, const Word& w) {
        if (w.empty()) return;
        int f = start, b = start;
        int i = 0, j = static_cast<int>(w.size()) - 1;
        while (true) {
            while (i <= j) {
                int d = table_[f][col(w[i].first, w[i].second)];
                if (d < 0) break;
                f = d;
                ++i;
            }
            if (i > j) {
                if (f != b) coincidence(f, b);
                return;
            }
            while (j >= i) {
                int d = table_[b][col(w[j].first, -w[j].second)];
                if (d < 0) break;
                b = d;
                --j;
            }
            if (j < i) {
                coincidence(f, b);
                return;
            }
            if (j == i) {
                set(f, col(w[i].first, w[i].second), b);
                return;
            }
            if (define(f, col(w[i].first, w[i].second)) < 0) return;
        }
    }

    void coincidence(int a, int b) {
        std::deque<int> queue;
        merge(a, b, queue);
        while (!queue.empty()) {
            int y = queue.front();
            queue.pop_front();
            for (int c = 0; c < 2 * ngens_; ++c) {
                int d = table_[y][c];
                if (d < 0) continue;
                table_[d][c ^ 1] = -1;
                table_[y][c] = -1;
                int mu = rep(y), nu = rep(d);
                if (table_[mu][c] >= 0)
                    merge(nu, rep(table_[mu][c]), queue);
                else if (table_[nu][c ^ 1] >= 0)
                    merge(mu, rep(table_[nu][c ^ 1]), queue);
                else
                    set(mu, c, nu);
            }
        }
    }

    std::int64_t live_count() const {
        std::int64_t n = 0;
        for (int c = 0; c < rows(); ++c)
            if (!dead(c)) ++n;
        return n;
    }

    // Runs HLT with row filling; true when the table closed within budget.
    bool enumerate(const std::vector<Word>& relators) {
        for (int c = 0; c < rows(); ++c) {
            if (dead(c)) continue;
            for (const Word& r : relators) {
                scan_and_fill(c, r);
                if (overflow_) return false;
                if (dead(c)) break;
            }
            if (dead(c)) continue;
            for (int col = 0; col < 2 * ngens_; ++col) {
                if (dead(c)) break;
                if (table_[c][col] < 0 && define(c, col) < 0) return false;
            }
        }
        return !overflow_;
    }

    // Traces a word from the live coset 0; table must be closed.
    int trace(const Word& w) const {
        int c = rep(0);
        for (auto [g, e] : w) c = rep(table_[c][col(g, e)]);
        return c;
    }

private:
    int add_row() {
        table_.emplace_back(2 * ngens_, -1);
        parent_.push_back(static_cast<int>(parent_.size()));
        return rows() - 1;
    }

    void merge(int a, int b, std::deque<int>& queue) {
        a = rep(a);
        b = rep(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent_[b] = a;
        queue.push_back(b);
    }

    int ngens_;
    int max_rows_;
    bool overflow_ = false;
    std::vector<std::vector<int>> table_;
    mutable std::vector<int> parent_;
};

}  // namespace

std::optional<std::int64_t> coset_enumerate(const GroupPresentation& p, int max_rows) {
    if (max_rows < 1) throw CatError("EndpointMismatch", "coset budget must be >= 1");
    CosetTable t(static_cast<int>(p.generators.size()), max_rows);
    if (!t.enumerate(p.relators)) return std::nullopt;
    return t.live_count();
}

Tri word_equal(const GroupPresentation& p, const Word& u, const Word& v,
               int coset_budget, int search_depth) {
    Word w = word_concat(u, word_inverse(v));
    if (w.empty()) return Tri::True;

    // Re-simplify with generator tracking so w can be rewritten into the
    // simplified generators.
    GroupPresentation q = p;
    q.morphism_words.clear();
    for (size_t g = 0; g < p.generators.size(); ++g)
        q.morphism_words[p.generators[g]] = {{static_cast<int>(g), 1}};
    q = tietze_simplify(std::move(q));
    Word wq;
    for (auto [g, e] : w) {
        Word piece = q.morphism_words.at(p.generators[g]);
        if (e < 0) piece = word_inverse(piece);
        wq = word_concat(wq, piece);
    }
    if (wq.empty()) return Tri::True;
    if (q.relators.empty()) return Tri::False;  // free group, reduced nonempty word

    if (q.simplified_fully) {
        CosetTable t(static_cast<int>(q.generators.size()), coset_budget);
        if (t.enumerate(q.relators)) return t.trace(wq) == t.rep(0) ? Tri::True : Tri::False;
    }

    // Bounded relator-insertion search; only a reduction to the empty word
    // is conclusive.
    size_t max_len = wq.size() + 2 * search_depth;
    std::set<Word> seen{wq};
    std::deque<std::pair<Word, int>> frontier{{wq, 0}};
    std::vector<Word> moves;
    for (const Word& r : q.relators) {
        for (size_t k = 0; k < r.size(); ++k) {
            Word rot = r;
            std::rotate(rot.begin(), rot.begin() + k, rot.end());
            moves.push_back(rot);
            moves.push_back(word_inverse(rot));
        }
    }
    while (!frontier.empty()) {
        auto [cur, depth] = frontier.front();
        frontier.pop_front();
        if (depth >= search_depth) continue;
        for (const Word& m : moves)
            for (size_t pos = 0; pos <= cur.size(); ++pos) {
                Word next(cur.begin(), cur.begin() + pos);
                next.insert(next.end(), m.begin(), m.end());
                next.insert(next.end(), cur.begin() + pos, cur.end());
                next = free_reduce(std::move(next));
                if (next.empty()) return Tri::True;
                if (next.size() > max_len || seen.size() > 200000) continue;
                if (seen.insert(next).second) frontier.emplace_back(next, depth + 1);
            }
    }
    return Tri::Unknown;
}

Word walk_to_word(const FiniteCategory& c, const GroupPresentation& p, const Walk& w) {
    check_walk(c, w);
    Word out;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        Word piece = p.morphism_words.at(c.morphism_name(it->mor));
        if (it->inverse) piece = word_inverse(piece);
        out = word_concat(out, piece);
    }
    return out;
}

}  // namespace catcov
