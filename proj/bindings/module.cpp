#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "catcov/cli.hpp"
#include "catcov/grading.hpp"
#include "catcov/io.hpp"
#include "catcov/universal.hpp"

namespace py = pybind11;
using namespace catcov;

namespace {

// Categories are immutable shared values; a plain handle keeps pybind11
// away from the const shared_ptr.
struct PyCategory {
    CategoryPtr ptr;
    const FiniteCategory& get() const { return *ptr; }
};

PyCategory category_from_json(const std::string& text) {
    io::CategoryFile f = io::parse_category(io::json::parse(text));
    return PyCategory{io::require_explicit(f, "python binding")};
}

ObjId need_object(const FiniteCategory& c, const std::string& name) {
    auto o = c.object_index(name);
    if (!o) throw CatError("NoSuchObject", "no object named " + name);
    return *o;
}

}  // namespace

PYBIND11_MODULE(_catcov, m) {
    m.doc() = "coverings, gradings and smash products of finite categories";

    py::register_exception<CatError>(m, "CatError");

    py::class_<PyCategory>(m, "Category")
        .def_static("from_json", &category_from_json)
        .def_property_readonly("num_objects",
                               [](const PyCategory& c) { return c.get().num_objects(); })
        .def_property_readonly("num_morphisms",
                               [](const PyCategory& c) { return c.get().num_morphisms(); })
        .def("object_name",
             [](const PyCategory& c, ObjId x) { return c.get().object_name(x); })
        .def("morphism_name",
             [](const PyCategory& c, MorId m) { return c.get().morphism_name(m); })
        .def("is_connected", [](const PyCategory& c) { return c.get().is_connected(); })
        .def("to_json", [](const PyCategory& c) { return io::category_json(c.get()).dump(); })
        .def("dot", [](const PyCategory& c) { return io::render_dot(c.get()); });

    m.def("pi1", [](const PyCategory& c, const std::string& base) {
        return io::pi1_json(pi1_presentation(c.get(), need_object(c.get(), base))).dump();
    });

    m.def("smash", [](const std::string& functor_path, const std::string& point) {
        io::FunctorFile ff = io::load_functor(functor_path);
        if (!ff.target.inverses)
            throw CatError("ParseError", "grading target must carry inverses");
        FiniteGroupoid g = make_groupoid(ff.target.category, *ff.target.inverses);
        Grading x{ff.functor, std::move(g)};
        SmashResult s = smash_product(x, need_object(*x.target.cat, point));
        io::json j{{"total", io::category_json(*s.total)},
                   {"projection", io::functor_json(s.projection.functor)},
                   {"galois", is_galois(s.projection)}};
        return j.dump();
    });

    m.def("universal_ball", [](const PyCategory& c, const std::string& base, int radius) {
        return io::ball_json(universal_ball(c.ptr, need_object(c.get(), base), radius))
            .dump();
    });

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
