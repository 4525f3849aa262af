#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rfit/errors.hpp"
#include "rfit/gset.hpp"
#include "rfit/group.hpp"
#include "rfit/linalg.hpp"

namespace rfit {

// A unitary representation, one matrix per group element in element order.
struct Representation {
    GroupPtr group;
    std::size_t dimension = 0;
    std::vector<CMat> matrices;

    const CMat& matrix(std::size_t element) const { return matrices[element]; }
};

// Extends generator matrices along the group's construction edges, then
// checks every generator edge of the Cayley graph, which is exactly the
// well-definedness of the extension.
inline Representation make_representation(const GroupPtr& group,
                                          const std::vector<CMat>& generator_matrices,
                                          Tolerance tol = {}) {
    if (generator_matrices.size() != group->generators().size())
        throw validation_error("expected one matrix per group generator");
    std::size_t dim = 0;
    for (const auto& m : generator_matrices) {
        if (m.rows() != m.cols()) throw validation_error("generator matrix is not square");
        if (dim == 0) dim = static_cast<std::size_t>(m.rows());
        if (static_cast<std::size_t>(m.rows()) != dim)
            throw validation_error("generator matrices have mixed dimensions");
        auto check = is_unitary(m, tol);
        if (!check.ok)
            throw validation_error("generator matrix is not unitary (defect " +
                                   std::to_string(check.defect) + ")");
    }
    if (dim == 0) throw validation_error("representation needs at least dimension data");

    Representation rep{group, dim, {}};
    rep.matrices.assign(group->size(), CMat::Identity(dim, dim));
    const auto& edges = group->construction_edges();
    for (std::size_t k = 1; k < group->size(); ++k) {
        auto [parent, gen] = edges[k];
        rep.matrices[k] = generator_matrices[gen] * rep.matrices[parent];
    }
    for (std::size_t i = 0; i < group->size(); ++i) {
        for (std::size_t j = 0; j < generator_matrices.size(); ++j) {
            std::size_t k = group->mul(group->generator_indices()[j], i);
            if (!approx_equal(rep.matrices[k], generator_matrices[j] * rep.matrices[i], tol.eps))
                throw validation_error("generator matrices do not define a representation of this group");
        }
    }
    return rep;
}

// 0/1 matrices of a G-set action: column x carries a single 1 in row g(x).
inline Representation permutation_representation(const GSet& x) {
    Representation rep{x.group(), x.size(), {}};
    rep.matrices.reserve(x.group()->size());
    for (std::size_t g = 0; g < x.group()->size(); ++g) {
        CMat m = CMat::Zero(x.size(), x.size());
        for (std::uint32_t p = 0; p < x.size(); ++p) m(x.action(g)(p), p) = 1.0;
        rep.matrices.push_back(std::move(m));
    }
    return rep;
}

// A function constant on conjugacy classes, stored per class in class order
// (identity class first).
struct ClassFunction {
    GroupPtr group;
    std::vector<std::vector<std::size_t>> classes;
    std::vector<Complex> values;
};

inline ClassFunction character(const Representation& rep, Tolerance tol = {}) {
    ClassFunction chi{rep.group, conjugacy_classes(*rep.group), {}};
    chi.values.reserve(chi.classes.size());
    for (const auto& cls : chi.classes) {
        Complex v = rep.matrices[cls[0]].trace();
        for (std::size_t m : cls) {
            Complex w = rep.matrices[m].trace();
            if (std::abs(w - v) > tol.eps)
                throw validation_error("trace is not constant on a conjugacy class");
        }
        chi.values.push_back(v);
    }
    return chi;
}

// Character of the conjugation action on d x d operators: |chi(g)|^2.
inline ClassFunction end_character(const Representation& rep, Tolerance tol = {}) {
    ClassFunction chi = character(rep, tol);
    for (auto& v : chi.values) v = Complex(std::norm(v), 0.0);
    return chi;
}

// The integer characters of the coset-space actions G/H, one per conjugacy
// class of subgroups, aligned with subgroups_up_to_conjugacy order.
struct PermutationBasics {
    std::vector<Subgroup> subgroups;
    std::vector<std::vector<long>> characters;  // [subgroup][class] fixed-point counts
};

inline PermutationBasics basic_permutation_characters(const GroupPtr& group) {
    PermutationBasics out;
    out.subgroups = subgroups_up_to_conjugacy(group);
    auto classes = conjugacy_classes(*group);
    out.characters.reserve(out.subgroups.size());
    for (const auto& h : out.subgroups) {
        GSet x = coset_space(group, h);
        std::vector<long> chi;
        chi.reserve(classes.size());
        for (const auto& cls : classes)
            chi.push_back(static_cast<long>(fixed_point_count(x, cls[0])));
        out.characters.push_back(std::move(chi));
    }
    return out;
}

struct FeasibilityCertificate {
    bool feasible = false;
    std::vector<long> coefficients;    // multiplicities per basic, when feasible
    std::vector<long> explored_bounds; // per-basic search bounds
    std::string reason;                // "non-integer-target" or "search-exhausted" when infeasible
};

namespace detail {

inline bool decompose_dfs(const std::vector<std::vector<long>>& basics, std::size_t i,
                          std::vector<long>& remaining, std::vector<long>& coeffs) {
    if (i == basics.size()) {
        for (long r : remaining)
            if (r != 0) return false;
        return true;
    }
    long bound = basics[i][0] > 0 ? remaining[0] / basics[i][0] : 0;
    for (long c = 0; c <= bound; ++c) {
        bool viable = true;
        for (std::size_t k = 0; k < remaining.size(); ++k)
            if (remaining[k] < 0) { viable = false; break; }
        if (viable && decompose_dfs(basics, i + 1, remaining, coeffs)) {
            coeffs[i] = c;
            return true;
        }
        for (std::size_t k = 0; k < remaining.size(); ++k) remaining[k] -= basics[i][k];
    }
    for (std::size_t k = 0; k < remaining.size(); ++k)
        remaining[k] += (bound + 1) * basics[i][k];
    return false;
}

}  // namespace detail

// Exhaustive search for non-negative integer multiplicities writing the target
// as a sum of basic permutation characters.  The first solution in ascending
// coefficient order is the lexicographically least one.
inline FeasibilityCertificate decompose_into_basics(const ClassFunction& target,
                                                    const PermutationBasics& basics,
                                                    Tolerance tol = {}) {
    FeasibilityCertificate cert;
    std::vector<long> t;
    t.reserve(target.values.size());
    for (Complex v : target.values) {
        double r = std::round(v.real());
        if (std::abs(v.imag()) > tol.eps || std::abs(v.real() - r) > tol.eps || r < 0) {
            cert.reason = "non-integer-target";
            return cert;
        }
        t.push_back(static_cast<long>(r));
    }
    for (const auto& b : basics.characters)
        if (b.size() != t.size())
            throw validation_error("basic characters and target disagree on class count");

    cert.explored_bounds.reserve(basics.characters.size());
    for (const auto& b : basics.characters)
        cert.explored_bounds.push_back(b[0] > 0 ? t[0] / b[0] : 0);

    std::vector<long> coeffs(basics.characters.size(), 0);
    std::vector<long> remaining = t;
    if (detail::decompose_dfs(basics.characters, 0, remaining, coeffs)) {
        cert.feasible = true;
        cert.coefficients = std::move(coeffs);
    } else {
        cert.reason = "search-exhausted";
    }
    return cert;
}

// Recovers a G-set from a representation whose matrices are all permutation
// matrices within tolerance.
inline std::optional<GSet> is_permutation_basis(const Representation& rep, Tolerance tol = {}) {
    std::vector<Permutation> action;
    action.reserve(rep.matrices.size());
    for (const auto& m : rep.matrices) {
        std::vector<std::uint32_t> images(rep.dimension);
        for (std::size_t col = 0; col < rep.dimension; ++col) {
            int ones = 0;
            std::size_t row_of_one = 0;
            for (std::size_t row = 0; row < rep.dimension; ++row) {
                Complex v = m(row, col);
                if (std::abs(v - Complex(1.0, 0.0)) <= tol.eps) {
                    ++ones;
                    row_of_one = row;
                } else if (std::abs(v) > tol.eps) {
                    return std::nullopt;
                }
            }
            if (ones != 1) return std::nullopt;
            images[col] = static_cast<std::uint32_t>(row_of_one);
        }
        try {
            action.emplace_back(std::move(images));
        } catch (const validation_error&) {
            return std::nullopt;
        }
    }
    return GSet(rep.group, std::move(action), "user");
}

struct EquivariantOnb {
    enum class Status { found, infeasible, retries_exhausted };
    Status status = Status::retries_exhausted;
    CMat basis;  // unitary B with B† pi(g) B a permutation matrix for all g
    std::optional<GSet> gset;
    FeasibilityCertificate certificate;
};

namespace detail {

// Coset representatives read off a coset-space G-set: point 0 is the identity
// coset, and the least g moving point 0 to p is the canonical representative.
inline std::vector<std::size_t> coset_representatives(const GSet& x) {
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> reps(x.size(), kUnset);
    for (std::size_t g = 0; g < x.group()->size(); ++g) {
        std::uint32_t p = x.action(g)(0);
        if (reps[p] == kUnset) reps[p] = g;
    }
    return reps;
}

}  // namespace detail

// Searches for a unitary change of basis after which the representation acts
// by permutation matrices.  Feasibility of the character as a sum of basic
// permutation characters decides existence; the basis itself is assembled one
// orbit per certificate term, by symmetric orthogonalization of the orbit of
// a random H-fixed vector inside the unused complement.
inline EquivariantOnb find_equivariant_onb(const Representation& rep, Tolerance tol = {},
                                           std::uint64_t seed = 7, int max_retries = 32) {
    EquivariantOnb result;

    if (auto direct = is_permutation_basis(rep, tol)) {
        result.status = EquivariantOnb::Status::found;
        result.basis = CMat::Identity(rep.dimension, rep.dimension);
        result.gset = std::move(direct);
        result.certificate.feasible = true;
        return result;
    }

    PermutationBasics basics = basic_permutation_characters(rep.group);
    result.certificate = decompose_into_basics(character(rep, tol), basics, tol);
    if (!result.certificate.feasible) {
        result.status = EquivariantOnb::Status::infeasible;
        return result;
    }

    struct OrbitTerm {
        CMat fixed_projector;
        std::vector<std::size_t> coset_reps;
    };
    std::vector<OrbitTerm> terms;
    for (std::size_t i = 0; i < basics.subgroups.size(); ++i) {
        if (result.certificate.coefficients[i] == 0) continue;
        const Subgroup& h = basics.subgroups[i];
        CMat proj = CMat::Zero(rep.dimension, rep.dimension);
        for (std::size_t m : h.members) proj += rep.matrices[m];
        proj /= static_cast<double>(h.members.size());
        GSet cosets = coset_space(rep.group, h);
        auto reps = detail::coset_representatives(cosets);
        for (long c = 0; c < result.certificate.coefficients[i]; ++c)
            terms.push_back({proj, reps});
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Index dim = static_cast<Eigen::Index>(rep.dimension);

    for (int attempt = 0; attempt < max_retries; ++attempt) {
        CMat b(dim, 0);
        bool failed = false;
        for (const auto& term : terms) {
            CMat complement = CMat::Identity(dim, dim) - b * b.adjoint();
            CMat proj = complement * term.fixed_projector * complement;
            CVec v(dim);
            for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
            v = proj * v;
            if (v.norm() < 1e-8) { failed = true; break; }
            v.normalize();

            CMat orbit(dim, static_cast<Eigen::Index>(term.coset_reps.size()));
            for (std::size_t k = 0; k < term.coset_reps.size(); ++k)
                orbit.col(static_cast<Eigen::Index>(k)) = rep.matrices[term.coset_reps[k]] * v;
            CMat gram = orbit.adjoint() * orbit;
            try {
                orbit = orbit * inverse_sqrt_hermitian(gram, 1e-8);
            } catch (const certification_error&) {
                failed = true;
                break;
            }
            CMat wider(dim, b.cols() + orbit.cols());
            wider << b, orbit;
            b = std::move(wider);
        }
        if (failed || b.cols() != dim) continue;
        if (!is_unitary(b, Tolerance{10 * tol.eps}).ok) continue;

        Representation conjugated{rep.group, rep.dimension, {}};
        conjugated.matrices.reserve(rep.matrices.size());
        for (const auto& m : rep.matrices) conjugated.matrices.push_back(b.adjoint() * m * b);
        if (auto gs = is_permutation_basis(conjugated, Tolerance{10 * tol.eps})) {
            result.status = EquivariantOnb::Status::found;
            result.basis = std::move(b);
            result.gset = std::move(gs);
            return result;
        }
    }
    result.status = EquivariantOnb::Status::retries_exhausted;
    return result;
}

}  // namespace rfit
