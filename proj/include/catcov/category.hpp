#ifndef CATCOV_CATEGORY_HPP
#define CATCOV_CATEGORY_HPP

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace catcov {

using ObjId = int;
using MorId = int;

/// Error with a machine-readable kind ("DuplicateName", "NotAssociative", ...).
class CatError : public std::runtime_error {
public:
    CatError(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

/// A morphism value: a named non-identity morphism or an identity at an object.
/// Identities are never stored in category data; they only appear as values.
class MorVal {
public:
    static MorVal gen(MorId m) { return MorVal(m); }
    static MorVal id(ObjId x) { return MorVal(-x - 1); }

    bool is_id() const { return code_ < 0; }
    ObjId obj() const { return -code_ - 1; }
    MorId mor() const { return code_; }

    auto operator<=>(const MorVal&) const = default;

private:
    explicit MorVal(int code) : code_(code) {}
    int code_;
};

struct MorData {
    std::string name;
    ObjId src;
    ObjId tgt;
};

struct RawMorphism {
    std::string name, src, tgt;
};

struct RawComposition {
    std::string g, f, gf;  // gf == "ID" denotes an identity composite
};

/// Unvalidated category description, as parsed from a category file.
struct RawCategory {
    std::vector<std::string> objects;
    std::vector<RawMorphism> morphisms;
    std::vector<RawComposition> compositions;
};

/// A finite category: objects, non-identity morphisms, total composition
/// table on composable non-identity pairs. Immutable after construction.
class FiniteCategory {
public:
    int num_objects() const { return static_cast<int>(objects_.size()); }
    int num_morphisms() const { return static_cast<int>(mors_.size()); }

    const std::string& object_name(ObjId x) const { return objects_[x]; }
    const MorData& morphism(MorId m) const { return mors_[m]; }
    const std::string& morphism_name(MorId m) const { return mors_[m].name; }

    std::optional<ObjId> object_index(std::string_view name) const;
    std::optional<MorId> morphism_index(std::string_view name) const;

    ObjId src(MorVal v) const { return v.is_id() ? v.obj() : mors_[v.mor()].src; }
    ObjId tgt(MorVal v) const { return v.is_id() ? v.obj() : mors_[v.mor()].tgt; }

    /// Composition g after f. Throws EndpointMismatch when tgt(f) != src(g).
    MorVal compose(MorVal g, MorVal f) const;

    /// Non-identity morphisms with the given source (resp. target), in
    /// declared order.
    const std::vector<MorId>& source_star(ObjId x) const { return src_star_[x]; }
    const std::vector<MorId>& target_star(ObjId x) const { return tgt_star_[x]; }

    /// Components of the underlying undirected graph, each sorted.
    std::vector<std::vector<ObjId>> connected_components() const;
    bool is_connected() const { return connected_components().size() == 1; }

    std::string describe(MorVal v) const;

    /// Validates and builds. Checks unique names, endpoints, table
    /// completeness/exactness and associativity.
    static FiniteCategory validate(const RawCategory& raw);

    /// Builds from already-indexed parts, running the same checks.
    static FiniteCategory build(std::vector<std::string> objects,
                                std::vector<MorData> morphisms,
                                std::map<std::pair<MorId, MorId>, MorVal> table);

private:
    FiniteCategory() = default;
    void index();
    void check_invariants() const;

    std::vector<std::string> objects_;
    std::vector<MorData> mors_;
    std::map<std::pair<MorId, MorId>, MorVal> table_;  // (g,f) -> g.f
    std::map<std::string, ObjId, std::less<>> obj_index_;
    std::map<std::string, MorId, std::less<>> mor_index_;
    std::vector<std::vector<MorId>> src_star_, tgt_star_;
};

using CategoryPtr = std::shared_ptr<const FiniteCategory>;

/// A functor between finite categories. Non-identity morphisms may map to
/// identity values.
class CatFunctor {
public:
    CatFunctor(CategoryPtr source, CategoryPtr target,
               std::vector<ObjId> object_map, std::vector<MorVal> morphism_map);

    const FiniteCategory& source() const { return *src_; }
    const FiniteCategory& target() const { return *tgt_; }
    CategoryPtr source_ptr() const { return src_; }
    CategoryPtr target_ptr() const { return tgt_; }

    ObjId apply(ObjId x) const { return object_map_[x]; }
    MorVal apply(MorVal v) const {
        return v.is_id() ? MorVal::id(object_map_[v.obj()]) : morphism_map_[v.mor()];
    }

    const std::vector<ObjId>& object_map() const { return object_map_; }
    const std::vector<MorVal>& morphism_map() const { return morphism_map_; }

    /// Checks endpoint preservation and functoriality; throws NotFunctorial.
    void check() const;

    bool is_identity() const;
    bool operator==(const CatFunctor& other) const;

    /// Composition: this after g (requires g.target == this->source).
    CatFunctor after(const CatFunctor& g) const;

    static CatFunctor identity(CategoryPtr c);

private:
    CategoryPtr src_, tgt_;
    std::vector<ObjId> object_map_;
    std::vector<MorVal> morphism_map_;
};

/// A congruence (ideal relation) on the morphisms of a finite category,
/// including the identity values. Classes refine (src,tgt) pairs.
class Congruence {
public:
    explicit Congruence(CategoryPtr cat);

    const FiniteCategory& category() const { return *cat_; }
    CategoryPtr category_ptr() const { return cat_; }

    bool related(MorVal a, MorVal b) const;
    MorVal find(MorVal a) const;  // class representative (least value)

    /// Classes in order of least member; members sorted.
    std::vector<std::vector<MorVal>> classes() const;

    bool is_discrete() const;

    friend Congruence congruence_close(CategoryPtr cat,
                                       const std::vector<std::pair<MorVal, MorVal>>& pairs);

private:
    int slot(MorVal v) const;
    MorVal unslot(int s) const;
    int find_slot(int s) const;
    bool merge(int a, int b);  // returns true if classes were distinct

    CategoryPtr cat_;
    mutable std::vector<int> parent_;  // union-find over morphisms + identities
};

/// Smallest congruence containing the given parallel pairs (fixpoint of
/// union-find merging plus left/right composition rescans).
Congruence congruence_close(CategoryPtr cat,
                            const std::vector<std::pair<MorVal, MorVal>>& pairs);

struct QuotientResult {
    CategoryPtr quotient;
    CatFunctor projection;
};

/// Quotient category by a congruence, with the projection functor.
QuotientResult quotient_category(const Congruence& q);

}  // namespace catcov

#endif
