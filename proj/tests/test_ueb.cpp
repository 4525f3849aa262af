#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "rfit/ueb.hpp"

using namespace rfit;

TEST_CASE("basis verification accepts the standard bases") {
    auto report = verify_ueb(helpers::pauli_basis());
    CHECK(report.valid);
    CHECK(report.max_unitarity_defect < 1e-12);
    CHECK(report.max_orthogonality_defect < 1e-12);

    for (std::size_t d : {2, 3, 4, 5})
        CHECK(verify_ueb(helpers::shift_multiply_basis(d)).valid);
}

TEST_CASE("basis verification rejects malformed input") {
    UnitaryErrorBasis empty;
    CHECK_THROWS_AS(verify_ueb(empty), validation_error);

    auto three = helpers::pauli_basis();
    three.elements.pop_back();
    CHECK_THROWS_AS(verify_ueb(three), validation_error);

    auto misshapen = helpers::pauli_basis();
    misshapen.elements[2] = CMat::Identity(3, 3);
    CHECK_THROWS_AS(verify_ueb(misshapen), validation_error);

    auto duplicated = helpers::pauli_basis();
    duplicated.elements[3] = duplicated.elements[0];
    auto report = verify_ueb(duplicated);
    CHECK_FALSE(report.valid);
    CHECK(report.max_orthogonality_defect == Catch::Approx(2.0));
    CHECK(report.worst_pair == std::pair<std::size_t, std::size_t>{0, 3});

    auto skewed = helpers::pauli_basis();
    skewed.elements[1](0, 1) = 1.1;
    report = verify_ueb(skewed);
    CHECK_FALSE(report.valid);
    CHECK(report.max_unitarity_defect > 0.1);
}

TEST_CASE("the built-in example is certified on construction") {
    auto example = builtin_z2_example();
    CHECK(example.gueb.base.dimension == 2);
    REQUIRE(example.gueb.sigma.size() == 2);
    CHECK(example.gueb.sigma[0].is_identity());
    CHECK(example.gueb.sigma[1].cycle_string() == "(0 1)(2 3)");

    const double s2 = std::numbers::sqrt2, s6 = std::numbers::sqrt2 * std::numbers::sqrt3;
    CMat u2(2, 2);
    u2 << (-s2 - s6) / 4.0, (-s2 + s6) / 4.0, (-s2 + s6) / 4.0, (s2 + s6) / 4.0;
    CHECK(max_abs(example.gueb.base.elements[2] - u2) < 1e-15);
    CHECK(example.rep.matrices[1](0, 0).real() == Catch::Approx(std::numbers::sqrt3 / 2.0));
}

TEST_CASE("equivariance verification matches conjugates exactly") {
    auto example = builtin_z2_example();
    auto report = verify_equivariance(example.gueb.base, example.rep);
    REQUIRE(report.status == EquivarianceReport::Status::equivariant);
    CHECK(report.max_defect < 1e-12);
    CHECK(report.sigma[1].cycle_string() == "(0 1)(2 3)");

    // The same matrices in a different label order carry a different sigma.
    UnitaryErrorBasis shuffled = example.gueb.base;
    std::swap(shuffled.elements[0], shuffled.elements[2]);
    auto shuffled_report = verify_equivariance(shuffled, example.rep);
    REQUIRE(shuffled_report.status == EquivarianceReport::Status::equivariant);
    CHECK(shuffled_report.sigma[1].cycle_string() == "(0 3)(1 2)");
}

TEST_CASE("equivariance verification reports failures distinctly") {
    auto example = builtin_z2_example();

    auto report = verify_equivariance(helpers::pauli_basis(), example.rep);
    CHECK(report.status == EquivarianceReport::Status::not_equivariant);
    CHECK(report.max_defect > 0.1);
    CHECK(report.sigma.empty());

    // Two equal elements make every match of their conjugates ambiguous.
    auto doubled = helpers::pauli_basis();
    doubled.elements[1] = doubled.elements[0];
    CMat eye = CMat::Identity(2, 2);
    auto ambiguous = verify_equivariance(doubled, make_representation(example.group, {eye}));
    CHECK(ambiguous.status == EquivarianceReport::Status::ambiguous);

    CHECK_THROWS_AS(verify_equivariance(helpers::shift_multiply_basis(3), example.rep),
                    validation_error);
}

TEST_CASE("two-parameter family frozen instances") {
    auto t2 = two_parameter_unitary(2, 1.0 / std::numbers::sqrt2, 0.0, +1);
    CHECK(std::abs(t2.a - Complex(1.0 / std::numbers::sqrt2, 0.0)) < 1e-12);
    CHECK(std::abs(t2.b - Complex(0.0, 1.0 / std::numbers::sqrt2)) < 1e-12);

    auto t3 = two_parameter_unitary(3, 1.0 / std::numbers::sqrt3, 0.0, +1);
    Complex expected_b3 = std::polar(1.0 / std::numbers::sqrt3, 2.0 * std::numbers::pi / 3.0);
    CHECK(std::abs(t3.b - expected_b3) < 1e-12);

    // Boundary instances sit where acos flattens, so the phase carries a few
    // orders more rounding than the interior ones.
    auto t3_boundary = two_parameter_unitary(3, 1.0 / 3.0, 0.0, +1);
    CHECK(std::abs(t3_boundary.b - Complex(-2.0 / 3.0, 0.0)) < 1e-7);

    auto t4 = two_parameter_unitary(4, 0.5, 0.0, +1);
    CHECK(std::abs(t4.b - Complex(-0.5, 0.0)) < 1e-7);
    CHECK(is_hadamard(t4.matrix, Tolerance{1e-12}).ok);
}

TEST_CASE("two-parameter family rejects out-of-range parameters") {
    CHECK_THROWS_AS(two_parameter_unitary(1, 0.5, 0.0, +1), validation_error);
    CHECK_THROWS_AS(two_parameter_unitary(2, 0.0, 0.0, +1), validation_error);
    CHECK_THROWS_AS(two_parameter_unitary(2, 1.0, 0.0, +1), validation_error);
    CHECK_THROWS_AS(two_parameter_unitary(4, 0.4, 0.0, +1), validation_error);
    CHECK_THROWS_AS(two_parameter_unitary(3, 0.5, 0.0, 0), validation_error);
    CHECK_THROWS_AS(two_parameter_unitary(3, 0.5, 0.0, 2), validation_error);
    // No Hadamard point inside the family once sqrt(n) < n - 2.
    CHECK_THROWS_AS(two_parameter_unitary(5, 1.0 / std::sqrt(5.0), 0.0, +1), validation_error);
}

TEST_CASE("two-parameter family satisfies its defining relations") {
    std::mt19937_64 rng(2026);
    for (std::size_t n : {2, 3, 4}) {
        double lower = (static_cast<double>(n) - 2.0) / static_cast<double>(n);
        std::uniform_real_distribution<double> pick_a(lower + 1e-6, 1.0 - 1e-6);
        std::uniform_real_distribution<double> pick_phase(0.0, 2.0 * std::numbers::pi);
        for (int trial = 0; trial < 100; ++trial) {
            double abs_a = pick_a(rng), phase_a = pick_phase(rng);
            for (int sign : {+1, -1}) {
                auto t = two_parameter_unitary(n, abs_a, phase_a, sign);
                CHECK(is_unitary(t.matrix, Tolerance{1e-10}).ok);
                CHECK(std::abs(t.a) == Catch::Approx(abs_a));
                double abs_b2 = (1.0 - abs_a * abs_a) / (static_cast<double>(n) - 1.0);
                CHECK(std::norm(t.b) == Catch::Approx(abs_b2).margin(1e-12));
                double cross = (t.a * std::conj(t.b)).real();
                CHECK(cross ==
                      Catch::Approx((2.0 - static_cast<double>(n)) / 2.0 * abs_b2).margin(1e-12));
                if (std::abs(abs_a - 1.0 / std::sqrt(static_cast<double>(n))) > 1e-3)
                    CHECK_FALSE(is_hadamard(t.matrix, Tolerance{1e-6}).ok);
            }
        }
        auto at_hadamard =
            two_parameter_unitary(n, 1.0 / std::sqrt(static_cast<double>(n)), 1.0, -1);
        CHECK(is_hadamard(at_hadamard.matrix, Tolerance{1e-12}).ok);
        // On the boundary the two signs coincide and b is antipodal to a.
        if (n > 2) {
            auto plus = two_parameter_unitary(n, lower, 0.25, +1);
            auto minus = two_parameter_unitary(n, lower, 0.25, -1);
            CHECK(max_abs(plus.matrix - minus.matrix) < 1e-6);
            CHECK(std::abs(plus.b + std::polar(std::abs(plus.b), 0.25)) < 1e-6);
        }
    }
}

TEST_CASE("a Hadamard matrix generates a unitary error basis") {
    const double s2 = std::numbers::sqrt2;
    CMat h(2, 2);
    h << 1.0 / s2, 1.0 / s2, 1.0 / s2, -1.0 / s2;
    auto built = hadamard_ueb(h);
    CHECK(built.diag_convention == "column");
    REQUIRE(built.ueb.elements.size() == 4);

    CMat eye(2, 2), x(2, 2), z(2, 2), xz(2, 2);
    eye << 1, 0, 0, 1;
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    xz << 0, -1, 1, 0;
    CHECK(max_abs(built.ueb.elements[0] - eye) < 1e-12);
    CHECK(max_abs(built.ueb.elements[1] - x) < 1e-12);
    CHECK(max_abs(built.ueb.elements[2] - z) < 1e-12);
    CHECK(max_abs(built.ueb.elements[3] - xz) < 1e-12);
    CHECK(verify_ueb(built.ueb).valid);

    for (std::size_t n : {2, 3, 4, 5, 6})
        CHECK(verify_ueb(hadamard_ueb(helpers::fourier_matrix(n)).ueb).valid);

    CHECK_THROWS_AS(hadamard_ueb(CMat::Identity(2, 2)), validation_error);
}

TEST_CASE("hadamard detection") {
    CHECK(is_hadamard(helpers::fourier_matrix(4)).ok);
    CHECK_FALSE(is_hadamard(CMat::Identity(2, 2)).ok);
    CHECK_THROWS_AS(is_hadamard(CMat::Zero(2, 3)), validation_error);
}

TEST_CASE("construction succeeds on permutation actions in dimensions 1 through 4") {
    auto z2 = helpers::z_n(2);
    CMat one = CMat::Identity(1, 1);
    Representation tiny = make_representation(z2, {one});
    auto built1 = construct_gueb_dim_le4(tiny);
    CHECK(built1.gueb.base.elements.size() == 1);
    CHECK(max_abs(built1.gueb.base.elements[0] - one) == 0.0);

    for (std::size_t n : {2, 3, 4}) {
        auto g = helpers::full_symmetric(n);
        Representation rep = permutation_representation(helpers::natural_gset(g));
        auto built = construct_gueb_dim_le4(rep);
        CHECK(verify_ueb(built.gueb.base).valid);
        CHECK(is_hadamard(built.hadamard).ok);
        REQUIRE(built.gueb.sigma.size() == g->size());

        // Conjugation relabels (i, j) diagonally through the point action.
        for (std::size_t e = 0; e < g->size(); ++e) {
            const Permutation& point = g->elements()[e];
            for (std::uint32_t i = 0; i < n; ++i)
                for (std::uint32_t j = 0; j < n; ++j)
                    CHECK(built.gueb.sigma[e](i * n + j) == point(i) * n + point(j));
        }
    }
}

TEST_CASE("construction rejects what it cannot certify") {
    auto s5 = helpers::full_symmetric(5);
    Representation big = permutation_representation(helpers::natural_gset(s5));
    CHECK_THROWS_AS(construct_gueb_dim_le4(big), validation_error);

    auto example = builtin_z2_example();
    CHECK_THROWS_AS(construct_gueb_dim_le4(example.rep), validation_error);
}

TEST_CASE("conjugating a basis preserves validity and the label action") {
    auto example = builtin_z2_example();
    CMat q = helpers::random_unitary(2, 11);
    UnitaryErrorBasis moved = conjugated_ueb(example.gueb.base, q);
    CHECK(verify_ueb(moved, Tolerance{1e-8}).valid);

    Representation moved_rep{example.group, 2, {}};
    for (const auto& m : example.rep.matrices) moved_rep.matrices.push_back(q * m * q.adjoint());
    auto report = verify_equivariance(moved, moved_rep, Tolerance{1e-8});
    REQUIRE(report.status == EquivarianceReport::Status::equivariant);
    CHECK(report.sigma[1].cycle_string() == "(0 1)(2 3)");
}

TEST_CASE("commutation checks reject intertwiner impostors") {
    GroupPtr s3 = helpers::full_symmetric(3, "S3");
    Representation nat = permutation_representation(helpers::natural_gset(s3));
    auto fourier = commutes_with_rep(helpers::fourier_matrix(3), nat);
    CHECK_FALSE(fourier.ok);
    CHECK(fourier.defect > 0.1);
    CHECK(commutes_with_rep(CMat::Identity(3, 3), nat).ok);
}

TEST_CASE("the one-dimensional Hadamard basis is the unit scalar") {
    CMat one = CMat::Identity(1, 1);
    REQUIRE(is_hadamard(one).ok);
    HadamardUeb built = hadamard_ueb(one);
    REQUIRE(built.ueb.elements.size() == 1);
    CHECK(max_abs(built.ueb.elements[0] - one) < 1e-15);
    CHECK(verify_ueb(built.ueb).valid);
}

TEST_CASE("dephased Hadamards still generate valid bases") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 2.0 * std::numbers::pi);
    for (std::size_t n : {std::size_t{2}, std::size_t{3}, std::size_t{4}}) {
        CMat h = two_parameter_unitary(n, 1.0 / std::sqrt(static_cast<double>(n)),
                                       unit(rng), rng() % 2 ? +1 : -1)
                     .matrix;
        for (int trial = 0; trial < 7; ++trial) {
            CMat d1 = CMat::Zero(n, n), d2 = CMat::Zero(n, n);
            for (std::size_t i = 0; i < n; ++i) {
                d1(i, i) = std::polar(1.0, unit(rng));
                d2(i, i) = std::polar(1.0, unit(rng));
            }
            CMat dephased = d1 * h * d2;
            REQUIRE(is_hadamard(dephased, Tolerance{1e-10}).ok);
            HadamardUeb built = hadamard_ueb(dephased, Tolerance{1e-10});
            CHECK(verify_ueb(built.ueb, Tolerance{1e-9}).valid);
            CHECK((built.diag_convention == "column" || built.diag_convention == "row"));
        }
    }
}
