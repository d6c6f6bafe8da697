#ifndef CATCOV_TEST_FIXTURES_HPP
#define CATCOV_TEST_FIXTURES_HPP

#include <memory>
#include <string>
#include <vector>

#include "catcov/category.hpp"

namespace catcov::fixtures {

inline CategoryPtr make(const RawCategory& raw) {
    return std::make_shared<FiniteCategory>(FiniteCategory::validate(raw));
}

// Two objects x, x0 and two parallel arrows alpha, beta: x -> x0.
inline CategoryPtr k2() {
    return make({{"x", "x0"},
                 {{"alpha", "x", "x0"}, {"beta", "x", "x0"}},
                 {}});
}

// Two objects and n parallel arrows e1..en: x -> x0.
inline CategoryPtr k_e(int n) {
    RawCategory raw;
    raw.objects = {"x", "x0"};
    for (int i = 1; i <= n; ++i)
        raw.morphisms.push_back({"e" + std::to_string(i), "x", "x0"});
    return make(raw);
}

// One object, one idempotent e with e.e = e.
inline CategoryPtr idem() {
    return make({{"o"}, {{"e", "o", "o"}}, {{"e", "e", "e"}}});
}

// One-object groupoid for Z/n: morphisms g1..g_{n-1}, gi.gj = g_{i+j mod n}.
inline CategoryPtr zn_grp(int n) {
    RawCategory raw;
    raw.objects = {"o"};
    for (int i = 1; i < n; ++i)
        raw.morphisms.push_back({"g" + std::to_string(i), "o", "o"});
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j) {
            int k = (i + j) % n;
            raw.compositions.push_back({"g" + std::to_string(i), "g" + std::to_string(j),
                                        k == 0 ? "ID" : "g" + std::to_string(k)});
        }
    return make(raw);
}

inline CategoryPtr z2grp() { return zn_grp(2); }

// Trivial connected groupoid on two objects a, b.
inline CategoryPtr i2() {
    return make({{"a", "b"},
                 {{"f", "a", "b"}, {"finv", "b", "a"}},
                 {{"finv", "f", "ID"}, {"f", "finv", "ID"}}});
}

// Commutative square with its diagonal filled in.
inline CategoryPtr square() {
    return make({{"p", "q", "r", "s"},
                 {{"a", "p", "q"},
                  {"b", "q", "s"},
                  {"c", "p", "r"},
                  {"d", "r", "s"},
                  {"e", "p", "s"}},
                 {{"b", "a", "e"}, {"d", "c", "e"}}});
}

// Two disjoint copies of k2, objects suffixed 1/2.
inline CategoryPtr k2_pair() {
    return make({{"x1", "x01", "x2", "x02"},
                 {{"alpha1", "x1", "x01"},
                  {"beta1", "x1", "x01"},
                  {"alpha2", "x2", "x02"},
                  {"beta2", "x2", "x02"}},
                 {}});
}

}  // namespace catcov::fixtures

#endif
