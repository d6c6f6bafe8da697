#ifndef CATCOV_PRESENTATION_HPP
#define CATCOV_PRESENTATION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catcov/category.hpp"
#include "catcov/walk.hpp"

namespace catcov {

/// A word over the generators of a presentation, read left to right in
/// product order (the leftmost factor is the outermost morphism of the
/// corresponding composite).
using Word = std::vector<std::pair<int, int>>;  // (generator index, +1/-1)

Word free_reduce(Word w);
Word word_inverse(const Word& w);
Word word_concat(const Word& u, const Word& v);  // u then v, freely reduced

/// A quiver with path relations ("presented" category input mode).
struct PresentedQuiver {
    std::vector<std::string> objects;
    std::vector<RawMorphism> arrows;
    // Each relation equates two paths, written in application order
    // (first element applied first).
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> relations;
};

/// A finite group presentation with the provenance of its generators:
/// base object, spanning-tree edges, and for every morphism (or arrow) of
/// the input the word it maps to over the current generator set.
struct GroupPresentation {
    std::vector<std::string> generators;
    std::vector<Word> relators;

    std::string base_object;
    std::vector<std::string> tree_edges;
    std::map<std::string, Word> morphism_words;
    bool simplified_fully = true;  // false when the Tietze budget ran out

    std::optional<int> generator_index(const std::string& name) const;
    std::string word_to_string(const Word& w) const;
};

constexpr int kDefaultTietzeSteps = 10000;
constexpr int kDefaultCosetRows = 100000;
constexpr int kDefaultWordSearchDepth = 12;

/// Vertex group of the category of fractions at `base`: generators are the
/// non-identity morphisms, relators the composition triangles plus a BFS
/// spanning tree. The result is Tietze-simplified.
GroupPresentation pi1_presentation(const FiniteCategory& c, ObjId base,
                                   int max_tietze = kDefaultTietzeSteps);
GroupPresentation pi1_presentation(const PresentedQuiver& q, const std::string& base,
                                   int max_tietze = kDefaultTietzeSteps);

/// Repeated free reduction, empty-relator deletion and single-occurrence
/// generator elimination, up to max_steps rewrites. Preserves the presented
/// group and keeps morphism_words in step.
GroupPresentation tietze_simplify(GroupPresentation p, int max_steps = kDefaultTietzeSteps);

/// Canonical invariants of the abelianization: free rank plus the torsion
/// divisor chain d1 | d2 | ... (each >= 2).
struct AbelianInvariants {
    int free_rank = 0;
    std::vector<std::int64_t> torsion;
    bool operator==(const AbelianInvariants&) const = default;
};

AbelianInvariants abelianize(const GroupPresentation& p);

/// Todd-Coxeter enumeration of the trivial subgroup. Returns the group
/// order, or nullopt when the row budget is exhausted.
std::optional<std::int64_t> coset_enumerate(const GroupPresentation& p,
                                            int max_rows = kDefaultCosetRows);

enum class Tri { False = 0, True = 1, Unknown = 2 };

/// Decides u = v in the presented group when possible; never guesses.
Tri word_equal(const GroupPresentation& p, const Word& u, const Word& v,
               int coset_budget = kDefaultCosetRows,
               int search_depth = kDefaultWordSearchDepth);

/// Translates a walk into a word over p's generators via morphism_words.
Word walk_to_word(const FiniteCategory& c, const GroupPresentation& p, const Walk& w);

}  // namespace catcov

#endif
