#include "cornerhom/sampling.hpp"

#include <algorithm>

namespace cornerhom::sampling {

LabeledCube random_labeled_cube(std::mt19937_64& rng, int k, std::size_t n, bool collapse) {
    std::uniform_int_distribution<int> half(0, 8);
    std::bernoulli_distribution coin(0.5);
    int collapsed = collapse && k > 0 && coin(rng) ? 1 : 0;
    const int free = k - collapsed;

    std::vector<std::size_t> comps(n);
    for (std::size_t i = 0; i < n; ++i) comps[i] = i;
    std::shuffle(comps.begin(), comps.end(), rng);
    comps.resize(static_cast<std::size_t>(free));

    ElementaryCube q;
    for (std::size_t i = 0; i < n; ++i) {
        int a = half(rng);
        if (std::find(comps.begin(), comps.end(), i) != comps.end()) {
            int b = half(rng);
            while (b == a) b = half(rng);
            if (a > b) std::swap(a, b);
            q.components.push_back({Dyadic(a, 1), Dyadic(b, 1)});
        } else {
            q.components.push_back(Interval::point(Dyadic(a, 1)));
        }
    }
    LabeledCube l{q, {}};
    for (std::size_t j : comps)
        l.axes.push_back({j, coin(rng) ? FormalAxis::Direction::Increasing : FormalAxis::Direction::Decreasing});
    if (collapsed) {
        std::uniform_int_distribution<std::size_t> at(0, l.axes.size());
        l.axes.insert(l.axes.begin() + static_cast<std::ptrdiff_t>(at(rng)), {0, FormalAxis::Direction::Collapsed});
    }
    return l;
}

CubicalChain random_chain(std::mt19937_64& rng, int k, std::size_t n, int terms, bool collapse) {
    std::uniform_int_distribution<int> coeff(-3, 3);
    CubicalChain c(k);
    for (int i = 0; i < terms; ++i) c.add(random_labeled_cube(rng, k, n, collapse), coeff(rng));
    return c;
}

namespace {

Dyadic pick_level(std::mt19937_64& rng, const std::set<Dyadic>& endpoints) {
    std::uniform_int_distribution<int> quarter(0, 15);
    while (true) {
        const Dyadic l(2 * quarter(rng) + 1, 2);  // odd quarters never hit half-integers
        if (!endpoints.count(l)) return l;
    }
}

}  // namespace

Dyadic generic_level(std::mt19937_64& rng, const CubicalChain& c, std::size_t axis) {
    std::set<Dyadic> ends;
    for (const auto& [q, coeff] : c.terms()) {
        ends.insert(q.target.components[axis].lo);
        ends.insert(q.target.components[axis].hi);
    }
    return pick_level(rng, ends);
}

Dyadic generic_level(std::mt19937_64& rng, const std::set<ElementaryCube>& cubes, std::size_t axis) {
    std::set<Dyadic> ends;
    for (const auto& q : cubes) {
        ends.insert(q.components[axis].lo);
        ends.insert(q.components[axis].hi);
    }
    return pick_level(rng, ends);
}

std::set<ElementaryCube> random_cubical_set(std::mt19937_64& rng, std::size_t n, int count) {
    std::uniform_int_distribution<int> start(0, 2), dimension(0, static_cast<int>(n));
    std::set<ElementaryCube> out;
    for (int i = 0; i < count; ++i) {
        const int d = dimension(rng);
        std::vector<std::size_t> axes(n);
        for (std::size_t j = 0; j < n; ++j) axes[j] = j;
        std::shuffle(axes.begin(), axes.end(), rng);
        ElementaryCube q;
        for (std::size_t j = 0; j < n; ++j) {
            const int a = start(rng);
            const bool free = std::find(axes.begin(), axes.begin() + d, j) != axes.begin() + d;
            q.components.push_back(free ? Interval{a, a + 1} : Interval::point(a));
        }
        out.insert(q);
    }
    return out;
}

}  // namespace cornerhom::sampling
