#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rfit/errors.hpp"
#include "rfit/permutation.hpp"

namespace rfit {

inline constexpr std::size_t kDefaultElementCap = 10080;

// A finite permutation group, closed by breadth-first enumeration from its
// generators.  Element 0 is always the identity, and every later element
// records the (parent, generator) edge through which it was first reached, so
// that any map defined on the generators extends deterministically to the
// whole group.
class PermGroup {
public:
    PermGroup(std::size_t degree, std::vector<Permutation> generators, std::string name,
              std::size_t element_cap)
        : degree_(degree), generators_(std::move(generators)), name_(std::move(name)) {
        if (degree == 0) throw validation_error("group degree must be positive");
        for (const auto& g : generators_)
            if (g.degree() != degree)
                throw validation_error("generator degree does not match group degree");

        elements_.push_back(Permutation::identity(degree));
        edges_.push_back({0, 0});
        index_.emplace(elements_[0], 0);
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            for (std::size_t j = 0; j < generators_.size(); ++j) {
                Permutation p = generators_[j] * elements_[i];
                if (index_.count(p)) continue;
                if (elements_.size() >= element_cap)
                    throw cap_exceeded_error("group closure exceeds element cap of " +
                                             std::to_string(element_cap));
                index_.emplace(p, elements_.size());
                elements_.push_back(std::move(p));
                edges_.push_back({i, j});
            }
        }

        generator_index_.reserve(generators_.size());
        for (const auto& g : generators_) generator_index_.push_back(index_.at(g));
        inverse_.resize(elements_.size());
        for (std::size_t i = 0; i < elements_.size(); ++i)
            inverse_[i] = index_.at(elements_[i].inverse());
    }

    std::size_t degree() const { return degree_; }
    std::size_t size() const { return elements_.size(); }
    const std::string& name() const { return name_; }
    const std::vector<Permutation>& generators() const { return generators_; }
    const std::vector<Permutation>& elements() const { return elements_; }
    const Permutation& element(std::size_t i) const { return elements_[i]; }

    // First-discovery edge of element i: elements[i] == generators[edge.second] * elements[edge.first].
    using Edge = std::pair<std::size_t, std::size_t>;
    const std::vector<Edge>& construction_edges() const { return edges_; }
    const std::vector<std::size_t>& generator_indices() const { return generator_index_; }

    std::size_t index_of(const Permutation& p) const {
        auto it = index_.find(p);
        if (it == index_.end()) throw validation_error("permutation is not a group element");
        return it->second;
    }
    bool contains(const Permutation& p) const { return index_.count(p) != 0; }

    std::size_t mul(std::size_t a, std::size_t b) const {
        return index_.at(elements_[a] * elements_[b]);
    }
    std::size_t inverse_of(std::size_t a) const { return inverse_[a]; }
    std::size_t conjugate(std::size_t g, std::size_t x) const {
        return mul(mul(g, x), inverse_[g]);
    }

private:
    std::size_t degree_;
    std::vector<Permutation> generators_;
    std::string name_;
    std::vector<Permutation> elements_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> generator_index_;
    std::vector<std::size_t> inverse_;
    std::unordered_map<Permutation, std::size_t, PermutationHash> index_;
};

using GroupPtr = std::shared_ptr<const PermGroup>;

inline GroupPtr make_group(std::size_t degree, const std::vector<std::vector<std::uint32_t>>& generators,
                           std::string name = "", std::size_t element_cap = kDefaultElementCap) {
    std::vector<Permutation> gens;
    gens.reserve(generators.size());
    for (const auto& im : generators) gens.emplace_back(im);
    return std::make_shared<PermGroup>(degree, std::move(gens), std::move(name), element_cap);
}

// True when the two handles describe the same abstract enumeration: same
// degree and identical element lists.
inline bool same_group(const PermGroup& a, const PermGroup& b) {
    if (&a == &b) return true;
    return a.degree() == b.degree() && a.elements() == b.elements();
}

// Conjugacy classes as element-index lists, each sorted; classes ordered by
// their minimal element index, so the identity class comes first.
inline std::vector<std::vector<std::size_t>> conjugacy_classes(const PermGroup& g) {
    std::vector<std::vector<std::size_t>> classes;
    std::vector<bool> seen(g.size(), false);
    for (std::size_t x = 0; x < g.size(); ++x) {
        if (seen[x]) continue;
        std::set<std::size_t> cls;
        for (std::size_t h = 0; h < g.size(); ++h) cls.insert(g.conjugate(h, x));
        std::vector<std::size_t> members(cls.begin(), cls.end());
        for (std::size_t m : members) seen[m] = true;
        classes.push_back(std::move(members));
    }
    return classes;
}

// A subgroup is held as the sorted index list of its members in the parent
// enumeration.
struct Subgroup {
    GroupPtr group;
    std::vector<std::size_t> members;

    std::size_t size() const { return members.size(); }
};

namespace detail {

inline std::vector<std::size_t> subgroup_closure(const PermGroup& g,
                                                 std::vector<std::size_t> seed) {
    std::set<std::size_t> members(seed.begin(), seed.end());
    members.insert(0);
    std::vector<std::size_t> frontier(members.begin(), members.end());
    while (!frontier.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t a : frontier) {
            for (std::size_t b : members) {
                for (std::size_t p : {g.mul(a, b), g.mul(b, a)}) {
                    if (members.insert(p).second) next.push_back(p);
                }
            }
            std::size_t inv = g.inverse_of(a);
            if (members.insert(inv).second) next.push_back(inv);
        }
        frontier = std::move(next);
    }
    return {members.begin(), members.end()};
}

inline std::vector<std::size_t> conjugate_subgroup(const PermGroup& g,
                                                   const std::vector<std::size_t>& members,
                                                   std::size_t by) {
    std::vector<std::size_t> out;
    out.reserve(members.size());
    for (std::size_t m : members) out.push_back(g.conjugate(by, m));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<std::size_t> canonical_conjugate(const PermGroup& g,
                                                    const std::vector<std::size_t>& members) {
    std::vector<std::size_t> best = members;
    for (std::size_t h = 0; h < g.size(); ++h) {
        auto c = conjugate_subgroup(g, members, h);
        if (c < best) best = c;
    }
    return best;
}

}  // namespace detail

inline bool is_subgroup(const PermGroup& g, const std::vector<std::size_t>& members) {
    std::set<std::size_t> s(members.begin(), members.end());
    if (s.size() != members.size() || !s.count(0)) return false;
    for (std::size_t a : s)
        for (std::size_t b : s)
            if (!s.count(g.mul(a, b))) return false;
    return true;
}

// One representative per conjugacy class of subgroups.  Seeds with the cyclic
// subgroups, closes the collection under pairwise join, then keeps the
// lexicographically least conjugate of each class.  Representatives are
// ordered by size, ties broken lexicographically.
inline std::vector<Subgroup> subgroups_up_to_conjugacy(const GroupPtr& g) {
    std::set<std::vector<std::size_t>> all;
    for (std::size_t x = 0; x < g->size(); ++x)
        all.insert(detail::subgroup_closure(*g, {x}));

    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<std::size_t>> current(all.begin(), all.end());
        for (std::size_t i = 0; i < current.size(); ++i) {
            for (std::size_t j = i + 1; j < current.size(); ++j) {
                std::vector<std::size_t> seed = current[i];
                seed.insert(seed.end(), current[j].begin(), current[j].end());
                auto joined = detail::subgroup_closure(*g, std::move(seed));
                if (all.insert(std::move(joined)).second) grew = true;
            }
        }
    }

    std::set<std::vector<std::size_t>> reps;
    for (const auto& h : all) reps.insert(detail::canonical_conjugate(*g, h));

    std::vector<Subgroup> out;
    out.reserve(reps.size());
    for (const auto& h : reps) out.push_back(Subgroup{g, h});
    std::stable_sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
        return a.members < b.members;
    });
    return out;
}

}  // namespace rfit
