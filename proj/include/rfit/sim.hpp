#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rfit/errors.hpp"
#include "rfit/linalg.hpp"
#include "rfit/rep.hpp"
#include "rfit/ueb.hpp"

namespace rfit {

enum class Procedure { speakable, unspeakable };

inline std::string to_string(Procedure p) {
    return p == Procedure::speakable ? "speakable" : "unspeakable";
}

// Alice's and Bob's lab orientations, as group element indices.
struct FrameConfig {
    std::size_t alice = 0;
    std::size_t bob = 0;
};

struct ProtocolSpec {
    Representation rep;
    UnitaryErrorBasis ueb;
    Procedure procedure = Procedure::unspeakable;
};

// The maximally entangled measurement basis attached to the error basis:
// phi_x = (1/sqrt(d)) sum_i |i> (x) Ux|i>.
inline std::vector<CVec> measurement_basis(const UnitaryErrorBasis& ueb) {
    std::size_t d = ueb.dimension;
    std::vector<CVec> basis;
    basis.reserve(ueb.elements.size());
    double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (const auto& u : ueb.elements) {
        CVec phi(static_cast<Eigen::Index>(d * d));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) phi(i * d + j) = amp * u(j, i);
        basis.push_back(std::move(phi));
    }
    return basis;
}

namespace detail {

// (<m| (x) I) rho (|m> (x) I) for rho on C^{D} (x) C^{d} with D = dim(m).
inline CMat project_pair(const CVec& m, const CMat& rho, std::size_t d) {
    std::size_t big = static_cast<std::size_t>(m.size());
    CMat out = CMat::Zero(d, d);
    for (std::size_t k = 0; k < big; ++k) {
        for (std::size_t l = 0; l < big; ++l) {
            Complex w = std::conj(m(k)) * m(l);
            if (w == Complex(0.0, 0.0)) continue;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) out(i, j) += w * rho(k * d + i, l * d + j);
        }
    }
    return out;
}

struct ChannelSetup {
    std::size_t d;
    CMat rho_joint;          // rho_in (x) |eta><eta| on systems (1,2,3)
    std::vector<CVec> alice_basis;
    std::vector<CVec> bob_basis;
    std::vector<CMat> corrections;  // pi_B Ux^T pi_B†
};

inline ChannelSetup channel_setup(const Representation& rep, const UnitaryErrorBasis& ueb,
                                  FrameConfig frames, const CMat& rho_in, Tolerance tol) {
    if (rep.dimension != ueb.dimension)
        throw validation_error("representation dimension does not match basis dimension");
    if (frames.alice >= rep.group->size() || frames.bob >= rep.group->size())
        throw validation_error("frame element index out of range");
    auto density = is_density_matrix(rho_in, Tolerance{10 * tol.eps});
    if (rho_in.rows() != static_cast<Eigen::Index>(rep.dimension) || !density.ok)
        throw validation_error("channel input is not a density matrix of the right dimension");

    ChannelSetup s;
    s.d = rep.dimension;
    CVec eta = bell_state(s.d);
    s.rho_joint = tensor(rho_in, CMat(eta * eta.adjoint()));

    const CMat& pi_a = rep.matrices[frames.alice];
    const CMat& pi_b = rep.matrices[frames.bob];
    CMat pi_a2 = tensor(pi_a, pi_a);
    CMat pi_b2 = tensor(pi_b, pi_b);
    for (const CVec& phi : measurement_basis(ueb)) {
        s.alice_basis.push_back(pi_a2 * phi);
        s.bob_basis.push_back(pi_b2 * phi);
    }
    for (const auto& u : ueb.elements)
        s.corrections.push_back(pi_b * u.transpose() * pi_b.adjoint());
    return s;
}

}  // namespace detail

// Procedure 1: Alice measures in her rotated basis, the outcome label travels
// classically, Bob applies his rotated transpose correction.
inline CMat teleport_speakable(const Representation& rep, const UnitaryErrorBasis& ueb,
                               FrameConfig frames, const CMat& rho_in, Tolerance tol = {}) {
    auto s = detail::channel_setup(rep, ueb, frames, rho_in, tol);
    CMat out = CMat::Zero(s.d, s.d);
    for (std::size_t x = 0; x < s.alice_basis.size(); ++x) {
        CMat collapsed = detail::project_pair(s.alice_basis[x], s.rho_joint, s.d);
        out += s.corrections[x] * collapsed * s.corrections[x].adjoint();
    }
    return out;
}

// Procedure 2: Alice's measurement decoheres her two systems in her rotated
// basis, the systems travel physically, and Bob measures in his own rotated
// basis before correcting.
inline CMat teleport_unspeakable(const Representation& rep, const UnitaryErrorBasis& ueb,
                                 FrameConfig frames, const CMat& rho_in, Tolerance tol = {}) {
    auto s = detail::channel_setup(rep, ueb, frames, rho_in, tol);
    std::size_t joint = s.d * s.d * s.d;

    // (P_x (x) I) rho (P_x (x) I) for the rank-1 projector onto a_x equals
    // |a_x><a_x| (x) project_pair(a_x, rho); summing over x decoheres.
    CMat decohered = CMat::Zero(joint, joint);
    for (const CVec& ax : s.alice_basis) {
        CMat block = detail::project_pair(ax, s.rho_joint, s.d);
        for (std::size_t k = 0; k < s.d * s.d; ++k) {
            for (std::size_t l = 0; l < s.d * s.d; ++l) {
                Complex w = ax(k) * std::conj(ax(l));
                if (w == Complex(0.0, 0.0)) continue;
                for (std::size_t i = 0; i < s.d; ++i)
                    for (std::size_t j = 0; j < s.d; ++j)
                        decohered(k * s.d + i, l * s.d + j) += w * block(i, j);
            }
        }
    }

    CMat out = CMat::Zero(s.d, s.d);
    for (std::size_t y = 0; y < s.bob_basis.size(); ++y) {
        CMat collapsed = detail::project_pair(s.bob_basis[y], decohered, s.d);
        out += s.corrections[y] * collapsed * s.corrections[y].adjoint();
    }
    return out;
}

inline CMat teleport(const ProtocolSpec& spec, FrameConfig frames, const CMat& rho_in,
                     Tolerance tol = {}) {
    return spec.procedure == Procedure::speakable
               ? teleport_speakable(spec.rep, spec.ueb, frames, rho_in, tol)
               : teleport_unspeakable(spec.rep, spec.ueb, frames, rho_in, tol);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline CVec random_pure_state(std::size_t d, std::uint64_t seed) {
    if (d == 0) throw validation_error("state dimension must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVec v(static_cast<Eigen::Index>(d));
    do {
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(gauss(rng), gauss(rng));
    } while (v.norm() < 1e-6);
    v.normalize();
    return v;
}

struct FidelityReport {
    std::string group;
    std::string procedure;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> grid_min;  // [alice][bob] worst fidelity over trials
    double global_min = 1.0;
    double global_max = 0.0;
    double tolerance = 0.0;
};

// Worst-case fidelity over every frame pair, with the same seeded pure inputs
// used in every cell; independent of evaluation order by construction.
inline FidelityReport sweep(const ProtocolSpec& spec, std::size_t trials = 8,
                            std::uint64_t seed = 7, Tolerance tol = {}) {
    if (trials == 0) throw validation_error("sweep needs at least one trial");
    std::size_t order = spec.rep.group->size();

    std::vector<CVec> states;
    states.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t)
        states.push_back(random_pure_state(spec.rep.dimension, splitmix64(seed ^ (t + 1))));

    FidelityReport report;
    report.group = spec.rep.group->name();
    report.procedure = to_string(spec.procedure);
    report.trials = trials;
    report.seed = seed;
    report.tolerance = tol.eps;
    report.grid_min.assign(order, std::vector<double>(order, 1.0));
    report.global_min = 2.0;
    report.global_max = -1.0;
    for (std::size_t a = 0; a < order; ++a) {
        for (std::size_t b = 0; b < order; ++b) {
            double cell = 2.0;
            for (const CVec& psi : states) {
                CMat rho = psi * psi.adjoint();
                CMat out = teleport(spec, FrameConfig{a, b}, rho, tol);
                cell = std::min(cell, fidelity(psi, out, tol));
            }
            report.grid_min[a][b] = cell;
            report.global_min = std::min(report.global_min, cell);
            report.global_max = std::max(report.global_max, cell);
        }
    }
    return report;
}

}  // namespace rfit
