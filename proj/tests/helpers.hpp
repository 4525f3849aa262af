#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "rfit/gset.hpp"
#include "rfit/group.hpp"
#include "rfit/linalg.hpp"
#include "rfit/rep.hpp"
#include "rfit/sim.hpp"
#include "rfit/ueb.hpp"

namespace helpers {

inline rfit::GroupPtr z_n(std::size_t n) {
    std::vector<std::uint32_t> cycle(n);
    for (std::size_t i = 0; i < n; ++i) cycle[i] = static_cast<std::uint32_t>((i + 1) % n);
    if (n == 1) return rfit::make_group(1, {}, "Z1");
    return rfit::make_group(n, {cycle}, "Z" + std::to_string(n));
}

inline rfit::GroupPtr s3() { return rfit::make_group(3, {{1, 0, 2}, {1, 2, 0}}, "S3"); }
inline rfit::GroupPtr s4() { return rfit::make_group(4, {{1, 0, 2, 3}, {1, 2, 3, 0}}, "S4"); }
inline rfit::GroupPtr d8() { return rfit::make_group(4, {{1, 2, 3, 0}, {3, 2, 1, 0}}, "D8"); }

// The quaternion units acting on themselves by left multiplication, in the
// order 1, -1, i, -i, j, -j, k, -k.
inline rfit::GroupPtr q8() {
    return rfit::make_group(8, {{2, 3, 1, 0, 6, 7, 5, 4}, {4, 5, 7, 6, 1, 0, 2, 3}}, "Q8");
}

inline rfit::GroupPtr full_symmetric(std::size_t n, std::string name = "") {
    if (n == 1) return rfit::make_group(1, {}, name.empty() ? "S1" : name);
    std::vector<std::uint32_t> swap01(n), cycle(n);
    for (std::size_t i = 0; i < n; ++i) {
        swap01[i] = static_cast<std::uint32_t>(i);
        cycle[i] = static_cast<std::uint32_t>((i + 1) % n);
    }
    swap01[0] = 1;
    swap01[1] = 0;
    if (n == 2) return rfit::make_group(2, {swap01}, name.empty() ? "S2" : name);
    return rfit::make_group(n, {swap01, cycle}, name.empty() ? "S" + std::to_string(n) : name);
}

// The natural point action of a permutation group on {0..degree-1}.
inline rfit::GSet natural_gset(const rfit::GroupPtr& g) {
    std::vector<rfit::Permutation> action(g->elements());
    return rfit::GSet(g, std::move(action), "user");
}

// Independent subgroup enumeration: grow every known subgroup by one element
// at a time until nothing new appears.  Returns all subgroups as sorted
// member-index lists.
inline std::set<std::vector<std::size_t>> exhaustive_subgroups(const rfit::PermGroup& g) {
    std::set<std::vector<std::size_t>> all;
    all.insert({0});
    std::vector<std::vector<std::size_t>> frontier(all.begin(), all.end());
    while (!frontier.empty()) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& h : frontier) {
            std::set<std::size_t> members(h.begin(), h.end());
            for (std::size_t x = 0; x < g.size(); ++x) {
                if (members.count(x)) continue;
                auto grown = rfit::detail::subgroup_closure(g, [&] {
                    std::vector<std::size_t> seed = h;
                    seed.push_back(x);
                    return seed;
                }());
                if (all.insert(grown).second) next.push_back(std::move(grown));
            }
        }
        frontier = std::move(next);
    }
    return all;
}

// Orbit count of the conjugation action via the averaged fixed-point count,
// an independent route to the number of conjugacy classes.
inline std::size_t class_count_by_averaging(const rfit::PermGroup& g) {
    std::size_t total = 0;
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t x = 0; x < g.size(); ++x)
            if (g.conjugate(a, x) == x) ++total;
    return total / g.size();
}

inline rfit::UnitaryErrorBasis pauli_basis() {
    using namespace rfit;
    UnitaryErrorBasis ueb;
    ueb.dimension = 2;
    ueb.elements.resize(4, CMat(2, 2));
    ueb.elements[0] << 1, 0, 0, 1;
    ueb.elements[1] << 0, 1, 1, 0;
    ueb.elements[2] << 0, Complex(0, -1), Complex(0, 1), 0;
    ueb.elements[3] << 1, 0, 0, -1;
    return ueb;
}

// Shift-and-multiply basis in dimension d: U_{(a,b)} = X^a Z^b with clock and
// shift matrices.
inline rfit::UnitaryErrorBasis shift_multiply_basis(std::size_t d) {
    using namespace rfit;
    CMat x = CMat::Zero(d, d), z = CMat::Zero(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        x((i + 1) % d, i) = 1.0;
        z(i, i) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(d));
    }
    UnitaryErrorBasis ueb;
    ueb.dimension = d;
    for (std::size_t a = 0; a < d; ++a) {
        CMat xa = CMat::Identity(d, d);
        for (std::size_t k = 0; k < a; ++k) xa = x * xa;
        for (std::size_t b = 0; b < d; ++b) {
            CMat zb = CMat::Identity(d, d);
            for (std::size_t k = 0; k < b; ++k) zb = z * zb;
            ueb.elements.push_back(xa * zb);
        }
    }
    return ueb;
}

inline rfit::CMat fourier_matrix(std::size_t n) {
    rfit::CMat f(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                                 2.0 * std::numbers::pi * static_cast<double>(j * k) /
                                     static_cast<double>(n));
    return f;
}

// Haar-ish random unitary from the QR factorization of a seeded Gaussian
// matrix.
inline rfit::CMat random_unitary(std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    rfit::CMat m(d, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) m(i, j) = rfit::Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<rfit::CMat> qr(m);
    rfit::CMat q = qr.householderQ();
    rfit::CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::size_t i = 0; i < d; ++i) {
        rfit::Complex p = r(i, i) / std::abs(r(i, i));
        q.col(i) *= p;
    }
    return q;
}

// Literal evaluation of procedure 1: full projectors on the joint space and
// an explicit partial trace, no shortcuts shared with the simulator.
inline rfit::CMat oracle_speakable(const rfit::Representation& rep,
                                   const rfit::UnitaryErrorBasis& ueb, rfit::FrameConfig f,
                                   const rfit::CMat& rho_in) {
    using namespace rfit;
    std::size_t d = ueb.dimension;
    CVec eta = bell_state(d);
    CMat joint = tensor(rho_in, CMat(eta * eta.adjoint()));
    CMat pi_a = rep.matrices[f.alice], pi_b = rep.matrices[f.bob];
    CMat rot = tensor(pi_a, pi_a);
    CMat eye = CMat::Identity(d, d);
    CMat out = CMat::Zero(d, d);
    for (const auto& u : ueb.elements) {
        CVec m = rot * (tensor(eye, u) * eta);
        CMat p_big = tensor(CMat(m * m.adjoint()), eye);
        CMat collapsed = partial_trace(p_big * joint * p_big, d * d, d, Factor::first);
        CMat c = pi_b * u.transpose() * pi_b.adjoint();
        out += c * collapsed * c.adjoint();
    }
    return out;
}

// Literal evaluation of procedure 2: decohere with full projectors, then
// measure and correct, again via explicit dense algebra.
inline rfit::CMat oracle_unspeakable(const rfit::Representation& rep,
                                     const rfit::UnitaryErrorBasis& ueb, rfit::FrameConfig f,
                                     const rfit::CMat& rho_in) {
    using namespace rfit;
    std::size_t d = ueb.dimension;
    CVec eta = bell_state(d);
    CMat joint = tensor(rho_in, CMat(eta * eta.adjoint()));
    CMat pi_a = rep.matrices[f.alice], pi_b = rep.matrices[f.bob];
    CMat rot_a = tensor(pi_a, pi_a), rot_b = tensor(pi_b, pi_b);
    CMat eye = CMat::Identity(d, d);

    CMat decohered = CMat::Zero(d * d * d, d * d * d);
    for (const auto& u : ueb.elements) {
        CVec m = rot_a * (tensor(eye, u) * eta);
        CMat p_big = tensor(CMat(m * m.adjoint()), eye);
        decohered += p_big * joint * p_big;
    }
    CMat out = CMat::Zero(d, d);
    for (const auto& u : ueb.elements) {
        CVec m = rot_b * (tensor(eye, u) * eta);
        CMat q_big = tensor(CMat(m * m.adjoint()), eye);
        CMat collapsed = partial_trace(q_big * decohered * q_big, d * d, d, Factor::first);
        CMat c = pi_b * u.transpose() * pi_b.adjoint();
        out += c * collapsed * c.adjoint();
    }
    return out;
}

}  // namespace helpers
