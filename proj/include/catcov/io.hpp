#ifndef CATCOV_IO_HPP
#define CATCOV_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "catcov/covering.hpp"
#include "catcov/presentation.hpp"
#include "catcov/universal.hpp"
#include "json.hpp"

namespace catcov::io {

using json = nlohmann::json;

/// A parsed category file: either explicit data or a presented quiver, plus
/// the optional inverse map of a groupoid file.
struct CategoryFile {
    std::string mode;  // "explicit" or "presented"
    CategoryPtr category;                 // set in explicit mode
    std::optional<PresentedQuiver> quiver;  // set in presented mode
    std::optional<std::vector<MorId>> inverses;
};

CategoryFile parse_category(const json& j);
CategoryFile load_category(const std::string& path);

/// Requires explicit mode; throws ParseError otherwise.
CategoryPtr require_explicit(const CategoryFile& f, const std::string& what);

struct FunctorFile {
    CategoryFile source;
    CategoryFile target;
    CatFunctor functor;  // endpoint categories from the referenced files
};

/// Loads a functor file, resolving source_file/target_file relative to the
/// functor file's directory. The functor is validated.
FunctorFile load_functor(const std::string& path);

GroupAction parse_action(const json& j, CategoryPtr cat);
GroupAction load_action(const std::string& path, CategoryPtr cat);

json category_json(const FiniteCategory& c,
                   const std::vector<MorId>* inverses = nullptr);
json functor_json(const CatFunctor& f);
json pi1_json(const GroupPresentation& p);
json covering_json(const CoveringFunctor& f, const GroupAction* aut = nullptr,
                   std::optional<bool> galois = std::nullopt);
json ball_json(const CoverBall& b);

/// Deterministic DOT text: nodes then edges, each sorted by name; boundary
/// objects come out dashed.
std::string render_dot(const FiniteCategory& c,
                       const std::vector<bool>* boundary = nullptr);

}  // namespace catcov::io

#endif
