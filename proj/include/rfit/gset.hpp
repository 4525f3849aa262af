#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rfit/errors.hpp"
#include "rfit/group.hpp"

namespace rfit {

// A finite left G-action: one permutation of the point set per group element,
// indexed by element order.  Checking every generator edge of the Cayley graph
// pins the map down as a homomorphism.
class GSet {
public:
    GSet(GroupPtr group, std::vector<Permutation> action, std::string provenance)
        : group_(std::move(group)), action_(std::move(action)), provenance_(std::move(provenance)) {
        if (action_.size() != group_->size())
            throw validation_error("G-set action must list one permutation per group element");
        std::size_t n = action_.empty() ? 0 : action_[0].degree();
        for (const auto& p : action_)
            if (p.degree() != n) throw validation_error("G-set action degrees are inconsistent");
        if (!action_[0].is_identity())
            throw validation_error("G-set action must send the identity to the identity");
        const auto& gidx = group_->generator_indices();
        for (std::size_t i = 0; i < action_.size(); ++i) {
            for (std::size_t j : gidx) {
                if (!(action_[group_->mul(j, i)] == action_[j] * action_[i]))
                    throw validation_error("G-set action is not a homomorphism");
            }
        }
    }

    const GroupPtr& group() const { return group_; }
    std::size_t size() const { return action_[0].degree(); }
    const Permutation& action(std::size_t element) const { return action_[element]; }
    const std::string& provenance() const { return provenance_; }

private:
    GroupPtr group_;
    std::vector<Permutation> action_;
    std::string provenance_;
};

// Builds a G-set from the action of the generators alone, extending along the
// group's construction edges.
inline GSet gset_from_generator_actions(const GroupPtr& group,
                                        const std::vector<Permutation>& generator_actions,
                                        std::string provenance = "user") {
    if (generator_actions.size() != group->generators().size())
        throw validation_error("expected one action permutation per group generator");
    std::size_t n = generator_actions.empty() ? 1 : generator_actions[0].degree();
    std::vector<Permutation> action(group->size(), Permutation::identity(n));
    const auto& edges = group->construction_edges();
    for (std::size_t k = 1; k < group->size(); ++k) {
        auto [parent, gen] = edges[k];
        action[k] = generator_actions[gen] * action[parent];
    }
    // The GSet constructor re-checks every edge, catching ill-defined inputs.
    return GSet(group, std::move(action), std::move(provenance));
}

// The left coset space G/H with cosets ordered by minimal member index, so the
// coset of the identity is point 0.
inline GSet coset_space(const GroupPtr& group, const Subgroup& h) {
    if (!same_group(*group, *h.group))
        throw validation_error("subgroup belongs to a different group");
    if (!is_subgroup(*group, h.members))
        throw validation_error("member list is not a subgroup");

    constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
    std::vector<std::size_t> coset_of(group->size(), kUnassigned);
    std::vector<std::size_t> representative;
    for (std::size_t x = 0; x < group->size(); ++x) {
        if (coset_of[x] != kUnassigned) continue;
        std::size_t id = representative.size();
        representative.push_back(x);
        for (std::size_t m : h.members) coset_of[group->mul(x, m)] = id;
    }

    std::size_t points = representative.size();
    std::vector<Permutation> action;
    action.reserve(group->size());
    for (std::size_t g = 0; g < group->size(); ++g) {
        std::vector<std::uint32_t> im(points);
        for (std::size_t p = 0; p < points; ++p)
            im[p] = static_cast<std::uint32_t>(coset_of[group->mul(g, representative[p])]);
        action.emplace_back(std::move(im));
    }
    return GSet(group, std::move(action), "coset-space");
}

inline GSet disjoint_union(const GSet& x, const GSet& y) {
    if (!same_group(*x.group(), *y.group()))
        throw validation_error("cannot union G-sets over different groups");
    std::size_t nx = x.size(), ny = y.size();
    std::vector<Permutation> action;
    action.reserve(x.group()->size());
    for (std::size_t g = 0; g < x.group()->size(); ++g) {
        std::vector<std::uint32_t> im(nx + ny);
        for (std::uint32_t p = 0; p < nx; ++p) im[p] = x.action(g)(p);
        for (std::uint32_t p = 0; p < ny; ++p)
            im[nx + p] = static_cast<std::uint32_t>(nx) + y.action(g)(p);
        action.emplace_back(std::move(im));
    }
    return GSet(x.group(), std::move(action), "disjoint-union");
}

inline std::size_t fixed_point_count(const GSet& x, std::size_t element) {
    return x.action(element).fixed_points();
}

}  // namespace rfit
