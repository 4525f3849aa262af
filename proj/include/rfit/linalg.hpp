#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "rfit/errors.hpp"

namespace rfit {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Every approximate comparison in the library is an absolute entrywise bound.
struct Tolerance {
    double eps = 1e-9;
};

inline double max_abs(const CMat& m) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, std::abs(m(i, j)));
    return best;
}

inline bool approx_equal(const CMat& a, const CMat& b, double eps) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return max_abs(a - b) <= eps;
}

struct UnitaryCheck {
    bool ok = false;
    double defect = 0.0;  // max |(M†M - I)_ij|
};

inline UnitaryCheck is_unitary(const CMat& m, Tolerance tol = {}) {
    if (m.rows() != m.cols()) throw validation_error("unitarity check requires a square matrix");
    CMat gram = m.adjoint() * m;
    gram -= CMat::Identity(m.rows(), m.cols());
    double defect = max_abs(gram);
    return {defect <= tol.eps, defect};
}

inline Complex hs_inner(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw validation_error("Hilbert-Schmidt inner product requires equal shapes");
    return (a.adjoint() * b).trace();
}

// Kronecker product with row-major index convention: block (i,j) of the result
// is a(i,j) * b, so composite index (i_a, i_b) flattens to i_a * rows(b) + i_b.
inline CMat tensor(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline CVec tensor(const CVec& v, const CVec& w) {
    CVec out(v.size() * w.size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.segment(i * w.size(), w.size()) = v(i) * w;
    return out;
}

// (1/sqrt(d)) sum_i |i>|i>.
inline CVec bell_state(std::size_t d) {
    if (d == 0) throw validation_error("bell state needs positive dimension");
    CVec out = CVec::Zero(static_cast<Eigen::Index>(d * d));
    double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) out(static_cast<Eigen::Index>(i * d + i)) = amp;
    return out;
}

enum class Factor { first, second };

// Partial trace of an operator on C^{d1} (x) C^{d2} over the named factor.
inline CMat partial_trace(const CMat& rho, std::size_t d1, std::size_t d2, Factor traced_out) {
    if (rho.rows() != rho.cols() ||
        rho.rows() != static_cast<Eigen::Index>(d1 * d2))
        throw validation_error("partial trace dimensions do not match the operator");
    if (traced_out == Factor::second) {
        CMat out = CMat::Zero(d1, d1);
        for (std::size_t i = 0; i < d1; ++i)
            for (std::size_t j = 0; j < d1; ++j)
                for (std::size_t k = 0; k < d2; ++k)
                    out(i, j) += rho(i * d2 + k, j * d2 + k);
        return out;
    }
    CMat out = CMat::Zero(d2, d2);
    for (std::size_t i = 0; i < d2; ++i)
        for (std::size_t j = 0; j < d2; ++j)
            for (std::size_t k = 0; k < d1; ++k)
                out(i, j) += rho(k * d2 + i, k * d2 + j);
    return out;
}

// <psi| rho |psi> for a normalized pure reference state.
inline double fidelity(const CVec& psi, const CMat& rho, Tolerance tol = {}) {
    if (rho.rows() != rho.cols() || rho.rows() != psi.size())
        throw validation_error("fidelity dimensions do not match");
    if (std::abs(psi.squaredNorm() - 1.0) > 10 * tol.eps)
        throw validation_error("fidelity reference state is not normalized");
    Complex v = (psi.adjoint() * rho * psi)(0, 0);
    if (std::abs(v.imag()) > 10 * tol.eps)
        throw validation_error("fidelity value has a non-real component: " +
                               std::to_string(v.imag()));
    return v.real();
}

struct DensityCheck {
    bool ok = false;
    double hermiticity_defect = 0.0;
    double trace_defect = 0.0;
    double min_eigenvalue = 0.0;
};

inline DensityCheck is_density_matrix(const CMat& rho, Tolerance tol = {}) {
    if (rho.rows() != rho.cols()) throw validation_error("density check requires a square matrix");
    DensityCheck r;
    r.hermiticity_defect = max_abs(rho - CMat(rho.adjoint()));
    r.trace_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
    Eigen::SelfAdjointEigenSolver<CMat> es((rho + rho.adjoint()) / 2.0);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.ok = r.hermiticity_defect <= tol.eps && r.trace_defect <= tol.eps &&
           r.min_eigenvalue >= -tol.eps;
    return r;
}

inline double purity(const CMat& rho) { return (rho * rho).trace().real(); }

// S^{-1/2} of a Hermitian positive definite matrix; throws when an eigenvalue
// sits below the floor, which callers use as the linear-independence gate.
inline CMat inverse_sqrt_hermitian(const CMat& s, double eigenvalue_floor = 1e-10) {
    Eigen::SelfAdjointEigenSolver<CMat> es((s + s.adjoint()) / 2.0);
    const auto& vals = es.eigenvalues();
    if (vals.minCoeff() < eigenvalue_floor)
        throw certification_error("matrix is numerically singular");
    CMat d = CMat::Zero(s.rows(), s.cols());
    for (Eigen::Index i = 0; i < vals.size(); ++i) d(i, i) = 1.0 / std::sqrt(vals(i));
    return es.eigenvectors() * d * es.eigenvectors().adjoint();
}

}  // namespace rfit
