#include "catcov/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "catcov/grading.hpp"
#include "catcov/io.hpp"

namespace catcov {

namespace {

void emit(const io::json& j, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << j.dump(2) << "\n";
    } else {
        std::ofstream f(path);
        if (!f) throw CatError("ParseError", "cannot write " + path);
        f << j.dump(2) << "\n";
    }
}

void emit_text(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
    } else {
        std::ofstream f(path);
        if (!f) throw CatError("ParseError", "cannot write " + path);
        f << text;
    }
}

ObjId need_object(const FiniteCategory& c, const std::string& name) {
    auto o = c.object_index(name);
    if (!o) throw CatError("NoSuchObject", "no object named " + name);
    return *o;
}

bool star_failure(const CatError& e) {
    return e.kind() == "StarNotInjective" || e.kind() == "StarNotSurjective" ||
           e.kind() == "NotSurjectiveOnObjects";
}

Grading load_grading(const io::FunctorFile& ff) {
    if (!ff.target.inverses)
        throw CatError("ParseError", "grading target must be a groupoid file with inverses");
    FiniteGroupoid g = make_groupoid(ff.target.category, *ff.target.inverses);
    return Grading{ff.functor, std::move(g)};
}

std::vector<ObjId> parse_section(const CoveringFunctor& cov, const std::string& arg) {
    if (arg.empty()) return default_section(cov);
    std::vector<ObjId> out;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(need_object(cov.total(), item));
    return out;
}

GroupPresentation load_pi1(const io::CategoryFile& cf, const std::string& base,
                           int max_tietze) {
    if (cf.quiver) return pi1_presentation(*cf.quiver, base, max_tietze);
    return pi1_presentation(*cf.category, need_object(*cf.category, base), max_tietze);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"coverings, gradings and smash products of finite categories"};
    app.require_subcommand(1);

    std::string in_file, second_file, out_file, dot_file;
    std::string base, point, section;
    int radius = 0;
    int max_tietze = kDefaultTietzeSteps;
    int code = 0;

    auto add_common = [&](CLI::App* cmd, bool with_out = true) {
        cmd->add_option("file", in_file, "input file")->required();
        if (with_out) cmd->add_option("-o,--output", out_file, "write the JSON report here");
    };

    CLI::App* validate = app.add_subcommand("validate", "parse and validate a category file");
    add_common(validate);
    validate->callback([&] {
        io::CategoryFile cf = io::load_category(in_file);
        io::json j;
        if (cf.category) {
            j = io::category_json(*cf.category,
                                  cf.inverses ? &*cf.inverses : nullptr);
        } else {
            j = {{"format", "catcov-category/1"},
                 {"mode", "presented"},
                 {"objects", cf.quiver->objects.size()},
                 {"arrows", cf.quiver->arrows.size()},
                 {"relations", cf.quiver->relations.size()}};
        }
        emit(j, out_file, out);
        err << "valid\n";
    });

    CLI::App* pi1 = app.add_subcommand("pi1", "vertex group of the category of fractions");
    add_common(pi1);
    pi1->add_option("--base", base, "base object")->required();
    pi1->add_option("--max-tietze", max_tietze, "simplification budget");
    pi1->callback([&] {
        GroupPresentation p = load_pi1(io::load_category(in_file), base, max_tietze);
        emit(io::pi1_json(p), out_file, out);
        err << "pi1 at " << base << ": " << p.generators.size() << " generators, "
            << p.relators.size() << " relators\n";
        if (!p.simplified_fully) code = 3;
    });

    CLI::App* abel = app.add_subcommand("abelianize", "abelian invariants of the vertex group");
    add_common(abel);
    abel->add_option("--base", base, "base object")->required();
    abel->add_option("--max-tietze", max_tietze, "simplification budget");
    abel->callback([&] {
        AbelianInvariants ab = abelianize(load_pi1(io::load_category(in_file), base, max_tietze));
        emit({{"rank", ab.free_rank}, {"torsion", ab.torsion}}, out_file, out);
        err << "rank " << ab.free_rank << ", " << ab.torsion.size() << " torsion factors\n";
    });

    CLI::App* ccheck = app.add_subcommand("cover-check", "verify a functor file is a covering");
    add_common(ccheck);
    ccheck->callback([&] {
        io::FunctorFile ff = io::load_functor(in_file);
        try {
            CoveringFunctor cov = check_covering(ff.functor);
            emit(io::covering_json(cov), out_file, out);
            err << "covering\n";
        } catch (const CatError& e) {
            if (!star_failure(e)) throw;
            emit({{"format", "catcov-covering-report/1"}, {"star_check", e.kind()}},
                 out_file, out);
            err << "not a covering: " << e.kind() << "\n";
            code = 1;
        }
    });

    CLI::App* gcheck = app.add_subcommand("galois-check", "verify a covering is Galois");
    add_common(gcheck);
    gcheck->callback([&] {
        io::FunctorFile ff = io::load_functor(in_file);
        try {
            CoveringFunctor cov = check_covering(ff.functor);
            bool galois = is_galois(cov);
            if (cov.total().is_connected()) {
                GroupAction aut = aut_group(cov);
                emit(io::covering_json(cov, &aut, galois), out_file, out);
            } else {
                emit(io::covering_json(cov, nullptr, galois), out_file, out);
            }
            err << (galois ? "galois\n" : "not galois\n");
            if (!galois) code = 1;
        } catch (const CatError& e) {
            if (!star_failure(e)) throw;
            emit({{"format", "catcov-covering-report/1"},
                  {"star_check", e.kind()},
                  {"galois", false}},
                 out_file, out);
            err << "not a covering: " << e.kind() << "\n";
            code = 1;
        }
    });

    CLI::App* orbit = app.add_subcommand("orbit", "orbit category of a free action");
    orbit->add_option("file", in_file, "category file")->required();
    orbit->add_option("action", second_file, "action file")->required();
    orbit->add_option("-o,--output", out_file, "write the JSON report here");
    orbit->callback([&] {
        CategoryPtr cat = io::require_explicit(io::load_category(in_file), "orbit");
        GroupAction a = io::load_action(second_file, cat);
        OrbitResult r = orbit_category(cat, a);
        emit({{"quotient", io::category_json(*r.quotient)},
              {"projection", io::functor_json(r.projection.functor)}},
             out_file, out);
        err << "orbit category: " << r.quotient->num_objects() << " objects\n";
    });

    CLI::App* smash = app.add_subcommand("smash", "smash product of a grading");
    add_common(smash);
    smash->add_option("--point", point, "groupoid object to smash at")->required();
    smash->callback([&] {
        Grading g = load_grading(io::load_functor(in_file));
        SmashResult s = smash_product(g, need_object(*g.target.cat, point));
        bool galois = is_galois(s.projection);
        emit({{"total", io::category_json(*s.total)},
              {"projection", io::functor_json(s.projection.functor)},
              {"report", io::covering_json(s.projection, &s.vertex_action, galois)}},
             out_file, out);
        err << "smash: " << s.total->num_objects() << " objects\n";
    });

    CLI::App* eff = app.add_subcommand("effective", "is the grading effective?");
    add_common(eff);
    eff->callback([&] {
        bool e = is_effective(load_grading(io::load_functor(in_file)));
        emit({{"effective", e}}, out_file, out);
        err << (e ? "effective\n" : "not effective\n");
        if (!e) code = 1;
    });

    CLI::App* grade = app.add_subcommand("grade", "grading associated with a Galois covering");
    add_common(grade);
    grade->add_option("--section", section, "comma-separated fibre representatives");
    grade->callback([&] {
        io::FunctorFile ff = io::load_functor(in_file);
        CoveringFunctor cov = check_covering(ff.functor);
        if (!is_galois(cov)) {
            emit({{"galois", false}}, out_file, out);
            err << "not galois\n";
            code = 1;
            return;
        }
        GroupAction deck = aut_group(cov);
        Grading x = associated_grading(cov, deck, parse_section(cov, section));
        emit({{"grading", io::functor_json(x.functor)},
              {"target", io::category_json(*x.target.cat, &x.target.inverse)}},
             out_file, out);
        err << "graded by a groupoid with " << x.target.cat->num_morphisms()
            << " morphisms\n";
    });

    CLI::App* rtrip = app.add_subcommand("roundtrip", "rebuild a Galois covering from its grading");
    add_common(rtrip);
    rtrip->add_option("--section", section, "comma-separated fibre representatives");
    rtrip->add_option("--point", point, "base object to smash at");
    rtrip->callback([&] {
        io::FunctorFile ff = io::load_functor(in_file);
        CoveringFunctor cov = check_covering(ff.functor);
        if (!is_galois(cov)) {
            emit({{"galois", false}}, out_file, out);
            err << "not galois\n";
            code = 1;
            return;
        }
        GroupAction deck = aut_group(cov);
        ObjId b = point.empty() ? 0 : need_object(cov.base(), point);
        RoundtripResult rt = roundtrip_iso(cov, deck, parse_section(cov, section), b);
        emit({{"roundtrip", "ok"},
              {"iso", io::functor_json(rt.iso)},
              {"grading", io::functor_json(rt.grading.functor)}},
             out_file, out);
        err << "roundtrip ok\n";
    });

    CLI::App* univ = app.add_subcommand("universal", "bounded universal cover");
    add_common(univ);
    univ->add_option("--base", base, "base object")->required();
    univ->add_option("--radius", radius, "word-length bound")->required();
    univ->add_option("--max-tietze", max_tietze, "simplification budget");
    univ->add_option("--dot", dot_file, "also write a DOT rendering here");
    univ->callback([&] {
        CategoryPtr cat = io::require_explicit(io::load_category(in_file), "universal");
        CoverBall ball = universal_ball(cat, need_object(*cat, base), radius, max_tietze);
        emit(io::ball_json(ball), out_file, out);
        if (!dot_file.empty())
            emit_text(io::render_dot(*ball.total, &ball.boundary), dot_file, out);
        err << "ball: " << ball.total->num_objects() << " objects, "
            << ball.total->num_morphisms() << " morphisms\n";
    });

    CLI::App* dot = app.add_subcommand("dot", "DOT rendering of a category");
    add_common(dot);
    dot->callback([&] {
        CategoryPtr cat = io::require_explicit(io::load_category(in_file), "dot");
        emit_text(io::render_dot(*cat), out_file, out);
    });

    std::vector<const char*> argv{"catcov"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    } catch (const CatError& e) {
        err << e.what() << "\n";
        return e.kind() == "BudgetOrNonFree" ? 3 : 2;
    }
    return code;
}

}  // namespace catcov
