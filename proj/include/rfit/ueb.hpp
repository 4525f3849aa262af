#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "rfit/errors.hpp"
#include "rfit/linalg.hpp"
#include "rfit/rep.hpp"

namespace rfit {

// d^2 unitaries on C^d, orthogonal under the Hilbert-Schmidt pairing.
struct UnitaryErrorBasis {
    std::size_t dimension = 0;
    std::vector<CMat> elements;
};

struct UebReport {
    bool valid = false;
    double max_unitarity_defect = 0.0;
    double max_orthogonality_defect = 0.0;  // worst |Tr(Ui† Uj) - d delta_ij|
    std::pair<std::size_t, std::size_t> worst_pair{0, 0};
};

inline UebReport verify_ueb(const UnitaryErrorBasis& ueb, Tolerance tol = {}) {
    std::size_t d = ueb.dimension;
    if (d == 0) throw validation_error("unitary error basis needs positive dimension");
    if (ueb.elements.size() != d * d)
        throw validation_error("unitary error basis must have exactly d^2 elements");
    for (const auto& m : ueb.elements)
        if (m.rows() != static_cast<Eigen::Index>(d) || m.cols() != static_cast<Eigen::Index>(d))
            throw validation_error("unitary error basis element has the wrong shape");

    UebReport report;
    for (const auto& m : ueb.elements)
        report.max_unitarity_defect = std::max(report.max_unitarity_defect, is_unitary(m, tol).defect);
    double dd = static_cast<double>(d);
    for (std::size_t i = 0; i < ueb.elements.size(); ++i) {
        for (std::size_t j = i; j < ueb.elements.size(); ++j) {
            Complex v = hs_inner(ueb.elements[i], ueb.elements[j]);
            double defect = std::abs(v - (i == j ? Complex(dd, 0.0) : Complex(0.0, 0.0)));
            if (defect > report.max_orthogonality_defect) {
                report.max_orthogonality_defect = defect;
                report.worst_pair = {i, j};
            }
        }
    }
    report.valid = report.max_unitarity_defect <= tol.eps &&
                   report.max_orthogonality_defect <= tol.eps * dd;
    return report;
}

struct EquivarianceReport {
    enum class Status { equivariant, not_equivariant, ambiguous };
    Status status = Status::not_equivariant;
    std::vector<Permutation> sigma;  // one permutation of the d^2 labels per group element
    double max_defect = 0.0;
    std::string detail;
};

// Checks that conjugation by every pi(g) permutes the basis elements exactly,
// with no phase freedom.  Generators are matched entrywise against the element
// list; an image matching two list entries within tolerance is reported as
// ambiguous rather than silently picked.  The generator matches are extended
// multiplicatively and then every group element is re-verified.
inline EquivarianceReport verify_equivariance(const UnitaryErrorBasis& ueb,
                                              const Representation& rep, Tolerance tol = {}) {
    if (rep.dimension != ueb.dimension)
        throw validation_error("representation dimension does not match basis dimension");
    std::size_t labels = ueb.elements.size();
    EquivarianceReport report;

    std::vector<Permutation> gen_sigma;
    for (std::size_t j = 0; j < rep.group->generators().size(); ++j) {
        const CMat& g = rep.matrices[rep.group->generator_indices()[j]];
        std::vector<std::uint32_t> images(labels);
        for (std::size_t i = 0; i < labels; ++i) {
            CMat conj = g * ueb.elements[i] * g.adjoint();
            int hits = 0;
            double best = 1e300;
            for (std::size_t k = 0; k < labels; ++k) {
                double dist = max_abs(conj - ueb.elements[k]);
                best = std::min(best, dist);
                if (dist <= tol.eps) {
                    ++hits;
                    images[i] = static_cast<std::uint32_t>(k);
                }
            }
            if (hits == 0) {
                report.status = EquivarianceReport::Status::not_equivariant;
                report.max_defect = best;
                report.detail = "conjugate of element " + std::to_string(i) +
                                " by generator " + std::to_string(j) +
                                " matches no basis element";
                return report;
            }
            if (hits > 1) {
                report.status = EquivarianceReport::Status::ambiguous;
                report.detail = "conjugate of element " + std::to_string(i) +
                                " by generator " + std::to_string(j) +
                                " matches several basis elements; tolerance too coarse";
                return report;
            }
        }
        gen_sigma.emplace_back(std::move(images));
    }

    report.sigma.assign(rep.group->size(), Permutation::identity(labels));
    const auto& edges = rep.group->construction_edges();
    for (std::size_t k = 1; k < rep.group->size(); ++k) {
        auto [parent, gen] = edges[k];
        report.sigma[k] = gen_sigma[gen] * report.sigma[parent];
    }

    for (std::size_t g = 0; g < rep.group->size(); ++g) {
        for (std::size_t i = 0; i < labels; ++i) {
            CMat conj = rep.matrices[g] * ueb.elements[i] * rep.matrices[g].adjoint();
            double defect = max_abs(conj - ueb.elements[report.sigma[g](static_cast<std::uint32_t>(i))]);
            report.max_defect = std::max(report.max_defect, defect);
        }
    }
    if (report.max_defect > tol.eps) {
        report.status = EquivarianceReport::Status::not_equivariant;
        report.detail = "extension of the generator matches fails on some group element";
        report.sigma.clear();
        return report;
    }
    report.status = EquivarianceReport::Status::equivariant;
    return report;
}

// An n x n unitary with constant diagonal a and constant off-diagonal b.
// Unitarity pins |b| and the relative phase once |a| and n are chosen:
//   |b|^2 = (1 - |a|^2) / (n - 1),  Re(conj(alpha) beta) = ((2 - n)/2)(|b|/|a|)
// with alpha, beta the phases of a, b; |a| must lie in [(n-2)/n, 1).
struct TwoParameterUnitary {
    std::size_t n = 0;
    Complex a;
    Complex b;
    CMat matrix;
};

inline TwoParameterUnitary two_parameter_unitary(std::size_t n, double abs_a, double phase_a,
                                                 int sign_choice, Tolerance tol = {}) {
    if (n < 2) throw validation_error("the two-parameter family needs n >= 2");
    if (sign_choice != 1 && sign_choice != -1)
        throw validation_error("sign choice must be +1 or -1");
    double lower = (static_cast<double>(n) - 2.0) / static_cast<double>(n);
    if (abs_a <= 0.0) throw validation_error("|a| = 0 is excluded");
    if (abs_a < lower - tol.eps)
        throw validation_error("|a| below the unitarity interval [(n-2)/n, 1)");
    if (abs_a >= 1.0)
        throw validation_error("|a| = 1 forces b = 0, leaving the two-parameter family");

    double abs_b = std::sqrt((1.0 - abs_a * abs_a) / (static_cast<double>(n) - 1.0));
    double cos_rel = ((2.0 - static_cast<double>(n)) / 2.0) * (abs_b / abs_a);
    // acos amplifies rounding near +-1 (where the boundary case lands) to
    // ~1e-8 in the phase, so snap to the exact endpoint inside a window that
    // swamps the rounding; the induced unitarity defect is second order.
    if (cos_rel <= -1.0 + 1e-12) cos_rel = -1.0;
    if (cos_rel >= 1.0 - 1e-12) cos_rel = 1.0;
    double phase_b = phase_a + sign_choice * std::acos(cos_rel);

    TwoParameterUnitary t;
    t.n = n;
    t.a = std::polar(abs_a, phase_a);
    t.b = std::polar(abs_b, phase_b);
    t.matrix = CMat::Constant(n, n, t.b);
    for (std::size_t i = 0; i < n; ++i) t.matrix(i, i) = t.a;
    auto check = is_unitary(t.matrix, Tolerance{10 * tol.eps});
    if (!check.ok)
        throw certification_error("two-parameter matrix failed its unitarity post-check (defect " +
                                  std::to_string(check.defect) + ")");
    return t;
}

struct CommutationCheck {
    bool ok = false;
    double defect = 0.0;
};

inline CommutationCheck commutes_with_rep(const CMat& m, const Representation& rep,
                                          Tolerance tol = {}) {
    if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != rep.dimension)
        throw validation_error("matrix dimension does not match the representation");
    CommutationCheck r;
    for (std::size_t j : rep.group->generator_indices())
        r.defect = std::max(r.defect, max_abs(m * rep.matrices[j] - rep.matrices[j] * m));
    r.ok = r.defect <= tol.eps;
    return r;
}

struct HadamardCheck {
    bool ok = false;
    double unitarity_defect = 0.0;
    double modulus_defect = 0.0;  // worst | |entry| - 1/sqrt(n) |
};

inline HadamardCheck is_hadamard(const CMat& m, Tolerance tol = {}) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw validation_error("Hadamard check requires a nonempty square matrix");
    HadamardCheck r;
    r.unitarity_defect = is_unitary(m, tol).defect;
    double want = 1.0 / std::sqrt(static_cast<double>(m.rows()));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            r.modulus_defect = std::max(r.modulus_defect, std::abs(std::abs(m(i, j)) - want));
    r.ok = r.unitarity_defect <= tol.eps && r.modulus_defect <= tol.eps;
    return r;
}

namespace detail {

enum class DiagConvention { column, row };

inline CMat diag_slice(const CMat& m, std::size_t k, DiagConvention c) {
    CMat d = CMat::Zero(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        d(i, i) = (c == DiagConvention::column) ? m(i, static_cast<Eigen::Index>(k))
                                                : m(static_cast<Eigen::Index>(k), i);
    return d;
}

inline UnitaryErrorBasis hadamard_ueb_with(const CMat& h, DiagConvention c) {
    std::size_t n = static_cast<std::size_t>(h.rows());
    double scale = static_cast<double>(n);
    CMat ht = h.transpose();
    UnitaryErrorBasis ueb;
    ueb.dimension = n;
    ueb.elements.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            ueb.elements.push_back(scale * h * diag_slice(h, j, c).adjoint() * h.adjoint() *
                                   diag_slice(ht, i, c));
    return ueb;
}

}  // namespace detail

struct HadamardUeb {
    UnitaryErrorBasis ueb;
    std::string diag_convention;  // "column" or "row"
};

// Builds the d^2 basis elements indexed by (i, j) -> i*n + j from a Hadamard
// matrix.  The column convention for the diagonal slices is tried first; if
// the result fails the basis check the row convention is used instead, and the
// surviving convention is recorded.
inline HadamardUeb hadamard_ueb(const CMat& h, Tolerance tol = {}) {
    auto check = is_hadamard(h, tol);
    if (!check.ok)
        throw validation_error("input matrix is not a Hadamard matrix (unitarity defect " +
                               std::to_string(check.unitarity_defect) + ", modulus defect " +
                               std::to_string(check.modulus_defect) + ")");
    UnitaryErrorBasis cols = detail::hadamard_ueb_with(h, detail::DiagConvention::column);
    if (verify_ueb(cols, Tolerance{10 * tol.eps}).valid)
        return {std::move(cols), "column"};
    UnitaryErrorBasis rows = detail::hadamard_ueb_with(h, detail::DiagConvention::row);
    if (verify_ueb(rows, Tolerance{10 * tol.eps}).valid)
        return {std::move(rows), "row"};
    throw certification_error("Hadamard construction produced no valid basis under either convention");
}

// A unitary error basis certified equivariant for a representation: the sigma
// table holds, per group element, the label permutation realized by
// conjugation.
struct GEquivariantUEB {
    UnitaryErrorBasis base;
    Representation rep;
    std::vector<Permutation> sigma;
};

struct GuebConstruction {
    GEquivariantUEB gueb;
    CMat hadamard;
    std::string diag_convention;
};

// Equivariant basis for a representation that already acts by permutation
// matrices, in dimensions 2 through 4 where the two-parameter family contains
// a Hadamard matrix (|a| = 1/sqrt(n) needs sqrt(n) >= n - 2).  Dimension 1 is
// the trivial basis.
inline GuebConstruction construct_gueb_dim_le4(const Representation& rep, Tolerance tol = {}) {
    if (rep.dimension > 4)
        throw validation_error("the Hadamard route needs dimension at most 4; supply a "
                               "commuting Hadamard matrix for higher dimensions");
    if (!is_permutation_basis(rep, tol))
        throw validation_error("representation must act by permutation matrices; "
                               "change basis first");

    CMat h;
    if (rep.dimension == 1) {
        h = CMat::Identity(1, 1);
    } else {
        h = two_parameter_unitary(rep.dimension, 1.0 / std::sqrt(static_cast<double>(rep.dimension)),
                                  0.0, +1, tol)
                .matrix;
    }
    auto commutation = commutes_with_rep(h, rep, Tolerance{10 * tol.eps});
    if (!commutation.ok)
        throw certification_error("constructed Hadamard fails to commute with the representation");

    HadamardUeb built = hadamard_ueb(h, tol);
    auto basis_report = verify_ueb(built.ueb, Tolerance{10 * tol.eps});
    if (!basis_report.valid)
        throw certification_error("constructed basis failed verification");
    auto equiv = verify_equivariance(built.ueb, rep, Tolerance{10 * tol.eps});
    if (equiv.status != EquivarianceReport::Status::equivariant)
        throw certification_error("constructed basis failed the equivariance check: " + equiv.detail);

    GuebConstruction out;
    out.gueb = GEquivariantUEB{std::move(built.ueb), rep, std::move(equiv.sigma)};
    out.hadamard = std::move(h);
    out.diag_convention = built.diag_convention;
    return out;
}

// Transports a certified basis through a unitary change of basis: conjugating
// every element by B preserves both the basis property and the label action.
inline UnitaryErrorBasis conjugated_ueb(const UnitaryErrorBasis& ueb, const CMat& basis) {
    UnitaryErrorBasis out;
    out.dimension = ueb.dimension;
    out.elements.reserve(ueb.elements.size());
    for (const auto& u : ueb.elements) out.elements.push_back(basis * u * basis.adjoint());
    return out;
}

struct Z2Example {
    GroupPtr group;
    Representation rep;
    GEquivariantUEB gueb;
};

// The worked two-dimensional example: a reflection action of the two-element
// group and four real basis elements that conjugation swaps in pairs,
// sigma(a) = (0 1)(2 3).
inline Z2Example builtin_z2_example(Tolerance tol = {}) {
    const double s2 = std::numbers::sqrt2;
    const double s3 = std::numbers::sqrt3;
    const double s6 = s2 * s3;

    GroupPtr group = make_group(2, {{1, 0}}, "Z2");
    CMat pi_a(2, 2);
    pi_a << s3 / 2.0, 0.5, 0.5, -s3 / 2.0;
    Representation rep = make_representation(group, {pi_a}, tol);

    UnitaryErrorBasis ueb;
    ueb.dimension = 2;
    ueb.elements.resize(4, CMat(2, 2));
    ueb.elements[0] << 1.0 / s2, 1.0 / s2, -1.0 / s2, 1.0 / s2;
    ueb.elements[1] << 1.0 / s2, -1.0 / s2, 1.0 / s2, 1.0 / s2;
    ueb.elements[2] << (-s2 - s6) / 4.0, (-s2 + s6) / 4.0, (-s2 + s6) / 4.0, (s2 + s6) / 4.0;
    ueb.elements[3] << (s2 - s6) / 4.0, (-s2 - s6) / 4.0, (-s2 - s6) / 4.0, (-s2 + s6) / 4.0;

    auto basis_report = verify_ueb(ueb, tol);
    if (!basis_report.valid) throw certification_error("built-in example failed basis verification");
    auto equiv = verify_equivariance(ueb, rep, tol);
    if (equiv.status != EquivarianceReport::Status::equivariant)
        throw certification_error("built-in example failed equivariance verification");
    return Z2Example{group, rep, GEquivariantUEB{std::move(ueb), rep, std::move(equiv.sigma)}};
}

}  // namespace rfit
