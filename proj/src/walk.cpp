#include "catcov/walk.hpp"

#include <algorithm>
#include <numeric>

namespace catcov {

namespace {

ObjId letter_src(const FiniteCategory& c, Letter l) {
    const MorData& m = c.morphism(l.mor);
    return l.inverse ? m.tgt : m.src;
}

ObjId letter_tgt(const FiniteCategory& c, Letter l) {
    const MorData& m = c.morphism(l.mor);
    return l.inverse ? m.src : m.tgt;
}

}  // namespace

Walk empty_walk(ObjId at) { return Walk{at, at, {}}; }

void check_walk(const FiniteCategory& c, const Walk& w) {
    ObjId at = w.src;
    for (Letter l : w.letters) {
        if (letter_src(c, l) != at)
            throw CatError("EndpointMismatch", "walk letter " + c.morphism_name(l.mor) +
                                                   " does not chain");
        at = letter_tgt(c, l);
    }
    if (at != w.tgt) throw CatError("EndpointMismatch", "walk target mismatch");
}

Walk normalize(const FiniteCategory& c, Walk w) {
    check_walk(c, w);
    std::vector<Letter> stack;
    stack.reserve(w.letters.size());
    for (Letter l : w.letters) {
        stack.push_back(l);
        while (stack.size() >= 2) {
            Letter b = stack.back();
            Letter a = stack[stack.size() - 2];
            if (a.mor == b.mor && a.inverse != b.inverse) {
                stack.pop_back();
                stack.pop_back();
                continue;
            }
            if (!a.inverse && !b.inverse) {
                MorVal comp = c.compose(MorVal::gen(b.mor), MorVal::gen(a.mor));
                stack.pop_back();
                stack.pop_back();
                if (!comp.is_id()) stack.push_back({comp.mor(), false});
                continue;
            }
            break;
        }
    }
    return Walk{w.src, w.tgt, std::move(stack)};
}

Walk free_compose(const FiniteCategory& c, const Walk& w2, const Walk& w1) {
    if (w1.tgt != w2.src)
        throw CatError("EndpointMismatch", "walk composition mismatch");
    Walk out{w1.src, w2.tgt, w1.letters};
    out.letters.insert(out.letters.end(), w2.letters.begin(), w2.letters.end());
    return normalize(c, std::move(out));
}

Walk inverse_walk(const Walk& w) {
    Walk out{w.tgt, w.src, {}};
    out.letters.reserve(w.letters.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        out.letters.push_back({it->mor, !it->inverse});
    return out;
}

std::string walk_to_string(const FiniteCategory& c, const Walk& w) {
    if (w.letters.empty()) return "1@" + c.object_name(w.src);
    std::string out;
    for (Letter l : w.letters) {
        if (!out.empty()) out += ".";
        out += c.morphism_name(l.mor);
        if (l.inverse) out += "-";
    }
    return out;
}

MorVal eval_universal(const CatFunctor& F, const std::map<MorId, MorVal>& theta,
                      const Walk& w) {
    const FiniteCategory& src = F.source();
    const FiniteCategory& tgt = F.target();
    check_walk(src, w);
    MorVal acc = MorVal::id(F.apply(w.src));
    for (Letter l : w.letters) {
        MorVal step = F.apply(MorVal::gen(l.mor));
        if (l.inverse) {
            auto it = theta.find(l.mor);
            if (it == theta.end())
                throw CatError("EndpointMismatch",
                               "no assignment for inverse letter " + src.morphism_name(l.mor));
            step = it->second;
            if (tgt.src(step) != F.apply(src.morphism(l.mor).tgt) ||
                tgt.tgt(step) != F.apply(src.morphism(l.mor).src))
                throw CatError("EndpointMismatch",
                               "assignment for " + src.morphism_name(l.mor) +
                                   " has wrong endpoints");
        }
        acc = tgt.compose(step, acc);
    }
    return acc;
}

std::vector<Walk> enumerate_walks(const FiniteCategory& c, int len) {
    std::vector<Walk> cur;
    for (ObjId x = 0; x < c.num_objects(); ++x) cur.push_back(empty_walk(x));
    for (int i = 0; i < len; ++i) {
        std::vector<Walk> next;
        for (const Walk& w : cur)
            for (MorId m = 0; m < c.num_morphisms(); ++m)
                for (bool inv : {false, true}) {
                    Letter l{m, inv};
                    if (letter_src(c, l) != w.tgt) continue;
                    Walk e = w;
                    e.letters.push_back(l);
                    e.tgt = letter_tgt(c, l);
                    next.push_back(std::move(e));
                }
        cur = std::move(next);
    }
    return cur;
}

bool walks_equal_oracle(const FiniteCategory& c, const Walk& a, const Walk& b,
                        int max_len) {
    check_walk(c, a);
    check_walk(c, b);
    if (a.src != b.src || a.tgt != b.tgt) return false;

    // Enumerate every walk of length <= max_len.
    std::vector<Walk> walks;
    for (int len = 0; len <= max_len; ++len) {
        auto layer = enumerate_walks(c, len);
        walks.insert(walks.end(), layer.begin(), layer.end());
    }
    std::map<Walk, int> index;
    for (size_t i = 0; i < walks.size(); ++i) index[walks[i]] = static_cast<int>(i);
    auto lookup = [&](const Walk& w) -> int {
        auto it = index.find(w);
        return it == index.end() ? -1 : it->second;
    };
    if (lookup(a) < 0 || lookup(b) < 0)
        throw CatError("EndpointMismatch", "oracle walks exceed the length bound");

    std::vector<int> parent(walks.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto merge = [&](int x, int y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        parent[std::max(x, y)] = std::min(x, y);
        return true;
    };

    // Seed with the generating relations: cancellation pairs and composition
    // of adjacent forward letters, applied at every position of every walk.
    for (size_t i = 0; i < walks.size(); ++i) {
        const Walk& w = walks[i];
        for (size_t p = 0; p + 1 < w.letters.size(); ++p) {
            Letter x = w.letters[p], y = w.letters[p + 1];
            Walk r = w;
            if (x.mor == y.mor && x.inverse != y.inverse) {
                r.letters.erase(r.letters.begin() + p, r.letters.begin() + p + 2);
            } else if (!x.inverse && !y.inverse) {
                MorVal comp = c.compose(MorVal::gen(y.mor), MorVal::gen(x.mor));
                r.letters.erase(r.letters.begin() + p, r.letters.begin() + p + 2);
                if (!comp.is_id())
                    r.letters.insert(r.letters.begin() + p, Letter{comp.mor(), false});
            } else {
                continue;
            }
            merge(static_cast<int>(i), lookup(r));
        }
    }

    // Congruence closure: extending related walks by the same letter (on
    // either side) must land in related walks.
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<std::pair<int, int>, int> pre, post;  // (letter key, class) -> class
        for (size_t i = 0; i < walks.size(); ++i) {
            const Walk& w = walks[i];
            if (w.letters.empty()) continue;
            int wc = find(static_cast<int>(i));
            // w = rest + last letter (post-composition by the last letter)
            {
                Walk rest{w.src, letter_src(c, w.letters.back()),
                          {w.letters.begin(), w.letters.end() - 1}};
                int key = w.letters.back().mor * 2 + (w.letters.back().inverse ? 1 : 0);
                auto [it, fresh] = post.try_emplace({key, find(lookup(rest))}, wc);
                if (!fresh && merge(it->second, wc)) changed = true;
            }
            // w = first letter + rest (pre-composition by the first letter)
            {
                Walk rest{letter_tgt(c, w.letters.front()), w.tgt,
                          {w.letters.begin() + 1, w.letters.end()}};
                int key = w.letters.front().mor * 2 + (w.letters.front().inverse ? 1 : 0);
                auto [it, fresh] = pre.try_emplace({key, find(lookup(rest))}, wc);
                if (!fresh && merge(it->second, wc)) changed = true;
            }
        }
    }
    return find(lookup(a)) == find(lookup(b));
}

}  // namespace catcov
