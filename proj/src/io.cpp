#include "catcov/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace catcov::io {

namespace {

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CatError("ParseError", "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw CatError("ParseError", path + ": " + e.what());
    }
    return j;
}

void expect_format(const json& j, const std::string& fmt) {
    if (!j.is_object() || j.value("format", "") != fmt)
        throw CatError("ParseError", "expected a " + fmt + " document");
}

std::vector<std::string> string_list(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw CatError("ParseError", std::string("missing array ") + key);
    std::vector<std::string> out;
    for (const auto& e : j.at(key)) {
        if (!e.is_string()) throw CatError("ParseError", std::string(key) + " entries must be strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

MorVal parse_image(const FiniteCategory& target, const std::string& s) {
    if (s.rfind("ID:", 0) == 0) {
        auto o = target.object_index(s.substr(3));
        if (!o) throw CatError("ParseError", "unknown object in image " + s);
        return MorVal::id(*o);
    }
    auto m = target.morphism_index(s);
    if (!m) throw CatError("ParseError", "unknown morphism image " + s);
    return MorVal::gen(*m);
}

CatFunctor parse_functor_maps(const json& j, CategoryPtr src, CategoryPtr tgt) {
    const FiniteCategory& s = *src;
    const FiniteCategory& t = *tgt;
    if (!j.contains("object_map") || !j.contains("morphism_map"))
        throw CatError("ParseError", "functor needs object_map and morphism_map");
    std::vector<ObjId> om(s.num_objects(), -1);
    for (const auto& [k, v] : j.at("object_map").items()) {
        auto so = s.object_index(k);
        auto to = t.object_index(v.get<std::string>());
        if (!so || !to) throw CatError("ParseError", "unknown object in object_map: " + k);
        om[*so] = *to;
    }
    std::vector<MorVal> mm;
    for (MorId m = 0; m < s.num_morphisms(); ++m) {
        const auto& name = s.morphism_name(m);
        if (!j.at("morphism_map").contains(name))
            throw CatError("ParseError", "morphism_map misses " + name);
        mm.push_back(parse_image(t, j.at("morphism_map").at(name).get<std::string>()));
    }
    if (std::find(om.begin(), om.end(), -1) != om.end())
        throw CatError("ParseError", "object_map does not cover the source objects");
    CatFunctor f(std::move(src), std::move(tgt), std::move(om), std::move(mm));
    f.check();
    return f;
}

}  // namespace

CategoryFile parse_category(const json& j) {
    expect_format(j, "catcov-category/1");
    CategoryFile out;
    out.mode = j.value("mode", "explicit");
    if (out.mode == "explicit") {
        RawCategory raw;
        raw.objects = string_list(j, "objects");
        for (const auto& m : j.value("morphisms", json::array()))
            raw.morphisms.push_back({m.at("name").get<std::string>(),
                                     m.at("src").get<std::string>(),
                                     m.at("tgt").get<std::string>()});
        for (const auto& c : j.value("compositions", json::array()))
            raw.compositions.push_back({c.at("g").get<std::string>(),
                                        c.at("f").get<std::string>(),
                                        c.at("gf").get<std::string>()});
        try {
            out.category =
                std::make_shared<const FiniteCategory>(FiniteCategory::validate(raw));
        } catch (const json::exception& e) {
            throw CatError("ParseError", e.what());
        }
        if (j.contains("inverses")) {
            std::vector<MorId> inv(out.category->num_morphisms(), -1);
            for (const auto& [k, v] : j.at("inverses").items()) {
                auto a = out.category->morphism_index(k);
                auto b = out.category->morphism_index(v.get<std::string>());
                if (!a || !b) throw CatError("ParseError", "unknown morphism in inverses: " + k);
                inv[*a] = *b;
            }
            if (std::find(inv.begin(), inv.end(), -1) != inv.end())
                throw CatError("ParseError", "inverses must cover every morphism");
            out.inverses = std::move(inv);
        }
    } else if (out.mode == "presented") {
        PresentedQuiver q;
        q.objects = string_list(j, "objects");
        for (const auto& m : j.value("morphisms", json::array()))
            q.arrows.push_back({m.at("name").get<std::string>(),
                                m.at("src").get<std::string>(),
                                m.at("tgt").get<std::string>()});
        for (const auto& r : j.value("relations", json::array()))
            q.relations.emplace_back(r.at("lhs").get<std::vector<std::string>>(),
                                     r.at("rhs").get<std::vector<std::string>>());
        out.quiver = std::move(q);
    } else {
        throw CatError("ParseError", "unknown mode " + out.mode);
    }
    return out;
}

CategoryFile load_category(const std::string& path) {
    try {
        return parse_category(read_file(path));
    } catch (const json::exception& e) {
        throw CatError("ParseError", path + ": " + e.what());
    }
}

CategoryPtr require_explicit(const CategoryFile& f, const std::string& what) {
    if (!f.category)
        throw CatError("ParseError", what + " requires an explicit category file");
    return f.category;
}

FunctorFile load_functor(const std::string& path) {
    json j = read_file(path);
    expect_format(j, "catcov-functor/1");
    std::filesystem::path dir = std::filesystem::path(path).parent_path();
    try {
        CategoryFile source = load_category((dir / j.at("source_file").get<std::string>()).string());
        CategoryFile target = load_category((dir / j.at("target_file").get<std::string>()).string());
        CatFunctor f = parse_functor_maps(j, require_explicit(source, "functor source"),
                                          require_explicit(target, "functor target"));
        return FunctorFile{std::move(source), std::move(target), std::move(f)};
    } catch (const json::exception& e) {
        throw CatError("ParseError", path + ": " + e.what());
    }
}

GroupAction parse_action(const json& j, CategoryPtr cat) {
    expect_format(j, "catcov-action/1");
    GroupAction a;
    a.element_names = string_list(j, "elements");
    int n = static_cast<int>(a.element_names.size());
    std::map<std::string, int> idx;
    for (int i = 0; i < n; ++i) idx[a.element_names[i]] = i;
    a.table.assign(n, std::vector<int>(n, -1));
    for (const auto& [k, v] : j.at("table").items()) {
        size_t comma = k.find(',');
        if (comma == std::string::npos) throw CatError("ParseError", "table key " + k);
        auto l = idx.find(k.substr(0, comma));
        auto r = idx.find(k.substr(comma + 1));
        auto p = idx.find(v.get<std::string>());
        if (l == idx.end() || r == idx.end() || p == idx.end())
            throw CatError("ParseError", "unknown element in table entry " + k);
        a.table[l->second][r->second] = p->second;
    }
    for (auto& row : a.table)
        if (std::find(row.begin(), row.end(), -1) != row.end())
            throw CatError("ParseError", "multiplication table is incomplete");
    // the identity is the element acting as a two-sided unit
    a.identity = -1;
    for (int e = 0; e < n; ++e) {
        bool unit = true;
        for (int x = 0; x < n; ++x) unit = unit && a.table[e][x] == x && a.table[x][e] == x;
        if (unit) a.identity = e;
    }
    if (a.identity < 0) throw CatError("ParseError", "the table has no identity element");
    json functors = j.value("functors", json::object());
    for (int e = 0; e < n; ++e) {
        if (e == a.identity && !functors.contains(a.element_names[e])) {
            a.functors.push_back(CatFunctor::identity(cat));
            continue;
        }
        if (!functors.contains(a.element_names[e]))
            throw CatError("ParseError", "no functor for element " + a.element_names[e]);
        a.functors.push_back(parse_functor_maps(functors.at(a.element_names[e]), cat, cat));
    }
    return a;
}

GroupAction load_action(const std::string& path, CategoryPtr cat) {
    try {
        return parse_action(read_file(path), std::move(cat));
    } catch (const json::exception& e) {
        throw CatError("ParseError", path + ": " + e.what());
    }
}

json category_json(const FiniteCategory& c, const std::vector<MorId>* inverses) {
    json j;
    j["format"] = "catcov-category/1";
    j["mode"] = "explicit";
    j["objects"] = json::array();
    for (ObjId x = 0; x < c.num_objects(); ++x) j["objects"].push_back(c.object_name(x));
    j["morphisms"] = json::array();
    for (MorId m = 0; m < c.num_morphisms(); ++m) {
        const MorData& d = c.morphism(m);
        j["morphisms"].push_back({{"name", d.name},
                                  {"src", c.object_name(d.src)},
                                  {"tgt", c.object_name(d.tgt)}});
    }
    j["compositions"] = json::array();
    for (MorId f = 0; f < c.num_morphisms(); ++f)
        for (MorId g : c.source_star(c.morphism(f).tgt)) {
            MorVal h = c.compose(MorVal::gen(g), MorVal::gen(f));
            j["compositions"].push_back({{"g", c.morphism_name(g)},
                                         {"f", c.morphism_name(f)},
                                         {"gf", h.is_id() ? "ID" : c.morphism_name(h.mor())}});
        }
    if (inverses) {
        json inv = json::object();
        for (MorId m = 0; m < c.num_morphisms(); ++m)
            inv[c.morphism_name(m)] = c.morphism_name((*inverses)[m]);
        j["inverses"] = std::move(inv);
    }
    return j;
}

json functor_json(const CatFunctor& f) {
    json j;
    j["format"] = "catcov-functor/1";
    json om = json::object(), mm = json::object();
    const FiniteCategory& s = f.source();
    const FiniteCategory& t = f.target();
    for (ObjId x = 0; x < s.num_objects(); ++x)
        om[s.object_name(x)] = t.object_name(f.apply(x));
    for (MorId m = 0; m < s.num_morphisms(); ++m) {
        MorVal v = f.apply(MorVal::gen(m));
        mm[s.morphism_name(m)] =
            v.is_id() ? "ID:" + t.object_name(v.obj()) : t.morphism_name(v.mor());
    }
    j["object_map"] = std::move(om);
    j["morphism_map"] = std::move(mm);
    return j;
}

json pi1_json(const GroupPresentation& p) {
    json j;
    j["format"] = "catcov-pi1/1";
    j["base"] = p.base_object;
    j["generators"] = p.generators;
    j["relators"] = json::array();
    for (const Word& r : p.relators) {
        json w = json::array();
        for (auto [g, e] : r) w.push_back({p.generators[g], e});
        j["relators"].push_back(std::move(w));
    }
    j["tree"] = p.tree_edges;
    AbelianInvariants ab = abelianize(p);
    j["abelian"] = {{"rank", ab.free_rank}, {"torsion", ab.torsion}};
    j["simplified"] = p.simplified_fully;
    return j;
}

json covering_json(const CoveringFunctor& f, const GroupAction* aut,
                   std::optional<bool> galois) {
    json j;
    j["format"] = "catcov-covering-report/1";
    j["star_check"] = "ok";
    json fib = json::object();
    for (ObjId b = 0; b < f.base().num_objects(); ++b) {
        json members = json::array();
        for (ObjId x : f.fibres[b]) members.push_back(f.total().object_name(x));
        fib[f.base().object_name(b)] = std::move(members);
    }
    j["fibres"] = std::move(fib);
    if (aut) {
        json table = json::object();
        for (int a = 0; a < aut->size(); ++a)
            for (int b = 0; b < aut->size(); ++b)
                table[aut->element_names[a] + "," + aut->element_names[b]] =
                    aut->element_names[aut->mult(a, b)];
        j["aut"] = {{"elements", aut->element_names}, {"table", std::move(table)}};
    }
    if (galois.has_value()) j["galois"] = *galois;
    return j;
}

json ball_json(const CoverBall& b) {
    json j = category_json(*b.total);
    json boundary = json::array();
    for (ObjId x = 0; x < b.total->num_objects(); ++x)
        if (b.boundary[x]) boundary.push_back(b.total->object_name(x));
    j["boundary"] = std::move(boundary);
    j["projection"] = functor_json(b.projection);
    j["base_point"] = b.projection.target().object_name(b.base_point);
    j["radius"] = b.radius;
    return j;
}

std::string render_dot(const FiniteCategory& c, const std::vector<bool>* boundary) {
    std::vector<std::pair<std::string, ObjId>> nodes;
    for (ObjId x = 0; x < c.num_objects(); ++x) nodes.emplace_back(c.object_name(x), x);
    std::sort(nodes.begin(), nodes.end());
    std::vector<MorId> edges(c.num_morphisms());
    for (MorId m = 0; m < c.num_morphisms(); ++m) edges[m] = m;
    std::sort(edges.begin(), edges.end(), [&](MorId a, MorId b) {
        return c.morphism_name(a) < c.morphism_name(b);
    });
    std::ostringstream out;
    out << "digraph category {\n";
    for (const auto& [name, x] : nodes) {
        out << "  \"" << name << "\"";
        if (boundary && (*boundary)[x]) out << " [style=dashed]";
        out << ";\n";
    }
    for (MorId m : edges) {
        const MorData& d = c.morphism(m);
        out << "  \"" << c.object_name(d.src) << "\" -> \"" << c.object_name(d.tgt)
            << "\" [label=\"" << d.name << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace catcov::io
