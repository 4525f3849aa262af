#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "rfit/errors.hpp"
#include "rfit/linalg.hpp"
#include "rfit/rep.hpp"
#include "rfit/ueb.hpp"

namespace rfit {

enum class Verdict { impossible, constructed, unknown };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::impossible: return "IMPOSSIBLE";
        case Verdict::constructed: return "CONSTRUCTED";
        default: return "UNKNOWN";
    }
}

// Existence analysis for an equivariant unitary error basis.
//
// The necessary condition: the endomorphism character |chi|^2 must be a
// non-negative integer combination of basic permutation characters; failure is
// a proof of impossibility.  The sufficient route: a change of basis making
// the representation act by permutation matrices, plus the Hadamard
// construction in dimension <= 4.  The two conditions do not meet, so the
// verdict in between is UNKNOWN, with the evidence attached.
struct AnalysisResult {
    Verdict verdict = Verdict::unknown;
    ClassFunction end_char;
    FeasibilityCertificate end_certificate;  // decides IMPOSSIBLE
    EquivariantOnb onb;                      // basis search outcome and its certificate
    std::optional<GuebConstruction> construction;  // in the permutation basis
    std::optional<GEquivariantUEB> certified;      // conjugated back, re-verified
    std::string detail;
};

inline AnalysisResult analyze_representation(const Representation& rep, Tolerance tol = {},
                                             std::uint64_t seed = 7) {
    AnalysisResult r;
    r.end_char = end_character(rep, tol);
    PermutationBasics basics = basic_permutation_characters(rep.group);
    r.end_certificate = decompose_into_basics(r.end_char, basics, tol);
    if (!r.end_certificate.feasible) {
        r.verdict = Verdict::impossible;
        r.detail = "endomorphism character is not a non-negative integer combination of "
                   "basic permutation characters (" + r.end_certificate.reason + ")";
        return r;
    }

    r.onb = find_equivariant_onb(rep, tol, seed);
    if (r.onb.status != EquivariantOnb::Status::found) {
        r.verdict = Verdict::unknown;
        r.detail = r.onb.status == EquivariantOnb::Status::infeasible
                       ? "no equivariant orthonormal basis: the character itself is not a "
                         "non-negative integer combination (" + r.onb.certificate.reason + ")"
                       : "equivariant basis search exhausted its retries";
        return r;
    }
    if (rep.dimension > 4) {
        r.verdict = Verdict::unknown;
        r.detail = "equivariant basis found, but the Hadamard construction only covers "
                   "dimension at most 4; supply a commuting Hadamard matrix via construct";
        return r;
    }

    Representation conjugated{rep.group, rep.dimension, {}};
    conjugated.matrices.reserve(rep.matrices.size());
    for (const auto& m : rep.matrices)
        conjugated.matrices.push_back(r.onb.basis.adjoint() * m * r.onb.basis);
    r.construction = construct_gueb_dim_le4(conjugated, Tolerance{10 * tol.eps});

    UnitaryErrorBasis back = conjugated_ueb(r.construction->gueb.base, r.onb.basis);
    auto basis_report = verify_ueb(back, Tolerance{10 * tol.eps});
    if (!basis_report.valid)
        throw certification_error("conjugated basis failed re-verification");
    auto equiv = verify_equivariance(back, rep, Tolerance{10 * tol.eps});
    if (equiv.status != EquivarianceReport::Status::equivariant)
        throw certification_error("conjugated basis failed equivariance re-verification: " +
                                  equiv.detail);

    r.certified = GEquivariantUEB{std::move(back), rep, std::move(equiv.sigma)};
    r.verdict = Verdict::constructed;
    return r;
}

}  // namespace rfit
