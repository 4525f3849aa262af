#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rfit/analyze.hpp"
#include "rfit/group.hpp"
#include "rfit/gset.hpp"
#include "rfit/io.hpp"
#include "rfit/linalg.hpp"
#include "rfit/rep.hpp"
#include "rfit/sim.hpp"
#include "rfit/ueb.hpp"

namespace fs = std::filesystem;
using rfit::io::Json;

namespace {

struct Common {
    double tol = 1e-9;
    std::uint64_t seed = 7;
    std::size_t cap = rfit::kDefaultElementCap;
    std::string out = ".";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--tol", c.tol, "numerical tolerance")->capture_default_str();
    cmd->add_option("--seed", c.seed, "deterministic seed")->capture_default_str();
    cmd->add_option("--cap", c.cap, "group element cap")->capture_default_str();
    cmd->add_option("--out", c.out, "output directory")->capture_default_str();
}

fs::path ensure_out_dir(const Common& c) {
    fs::path dir(c.out);
    fs::create_directories(dir);
    return dir;
}

int fail(int code, const std::string& type, const std::string& message) {
    Json j;
    j["version"] = rfit::io::kToolVersion;
    j["error"] = Json{{"type", type}, {"message", message}};
    std::cout << j.dump(2) << "\n";
    std::cerr << "error: " << message << "\n";
    return code;
}

rfit::Representation load_rep(const fs::path& path, const Common& c) {
    return rfit::io::rep_from_json(rfit::io::read_json_file(path), path.parent_path(),
                                   rfit::Tolerance{c.tol}, c.cap);
}

rfit::io::Bundle load_bundle(const fs::path& path) {
    return rfit::io::bundle_from_json(rfit::io::read_json_file(path));
}

std::string onb_status_name(rfit::EquivariantOnb::Status s) {
    switch (s) {
        case rfit::EquivariantOnb::Status::found: return "found";
        case rfit::EquivariantOnb::Status::infeasible: return "infeasible";
        default: return "retries-exhausted";
    }
}

// Writes analysis.json (and the constructed bundle when the verdict allows),
// re-verifying the bundle from its written bytes before claiming CONSTRUCTED.
rfit::AnalysisResult write_analysis(const rfit::Representation& rep, const fs::path& dir,
                                    const Common& c, const std::string& bundle_name) {
    rfit::Tolerance tol{c.tol};
    rfit::AnalysisResult res = rfit::analyze_representation(rep, tol, c.seed);

    Json j;
    j["version"] = rfit::io::kToolVersion;
    j["tolerance"] = c.tol;
    j["seed"] = c.seed;
    j["verdict"] = rfit::to_string(res.verdict);
    j["end_character"] = rfit::io::class_function_to_json(res.end_char);
    j["end_certificate"] = rfit::io::certificate_to_json(res.end_certificate);
    if (res.verdict != rfit::Verdict::impossible) {
        Json onb;
        onb["status"] = onb_status_name(res.onb.status);
        onb["certificate"] = rfit::io::certificate_to_json(res.onb.certificate);
        j["onb"] = std::move(onb);
    }
    j["bundle"] = Json();
    j["detail"] = res.detail;

    if (res.verdict == rfit::Verdict::constructed) {
        rfit::io::Bundle bundle;
        bundle.ueb = res.certified->base;
        bundle.sigma = res.certified->sigma;
        bundle.method = "hadamard";
        bundle.diag_convention = res.construction->diag_convention;
        bundle.hadamard = res.construction->hadamard;
        rfit::io::write_json_file(dir / bundle_name, rfit::io::bundle_to_json(bundle));

        rfit::io::Bundle reread = load_bundle(dir / bundle_name);
        rfit::Tolerance wide{10 * c.tol};
        if (!rfit::verify_ueb(reread.ueb, wide).valid)
            throw rfit::certification_error("written bundle failed basis re-verification");
        auto equiv = rfit::verify_equivariance(reread.ueb, rep, wide);
        if (equiv.status != rfit::EquivarianceReport::Status::equivariant)
            throw rfit::certification_error("written bundle failed equivariance re-verification");
        j["bundle"] = bundle_name;
    }
    rfit::io::write_json_file(dir / "analysis.json", j);
    return res;
}

int run_analyze(const fs::path& rep_file, const Common& c, bool require_answer) {
    rfit::Representation rep = load_rep(rep_file, c);
    fs::path dir = ensure_out_dir(c);
    rfit::AnalysisResult res = write_analysis(rep, dir, c, "bundle.json");

    std::cout << "verdict: " << rfit::to_string(res.verdict) << "\n";
    if (!res.detail.empty()) std::cout << "detail: " << res.detail << "\n";
    if (res.verdict == rfit::Verdict::constructed)
        std::cout << "bundle: " << (dir / "bundle.json").string() << "\n";
    std::cout << "report: " << (dir / "analysis.json").string() << "\n";
    if (res.verdict == rfit::Verdict::unknown && require_answer) return 4;
    return 0;
}

int run_construct(const fs::path& input_file, const std::string& hadamard_file, const Common& c) {
    rfit::Tolerance tol{c.tol};
    Json j = rfit::io::read_json_file(input_file);
    rfit::Representation rep = j.contains("generator_actions")
        ? rfit::permutation_representation(
              rfit::io::gset_from_json(j, input_file.parent_path(), c.cap))
        : rfit::io::rep_from_json(j, input_file.parent_path(), tol, c.cap);

    rfit::io::Bundle bundle;
    if (hadamard_file.empty()) {
        if (rep.dimension > 4)
            throw rfit::validation_error(
                "the built-in construction is guaranteed only for dimension <= 4 (the "
                "two-parameter family contains a Hadamard matrix only there); pass "
                "--hadamard with a commuting Hadamard matrix for dimension " +
                std::to_string(rep.dimension));
        auto built = rfit::construct_gueb_dim_le4(rep, tol);
        bundle.ueb = std::move(built.gueb.base);
        bundle.sigma = std::move(built.gueb.sigma);
        bundle.method = "hadamard";
        bundle.diag_convention = built.diag_convention;
        bundle.hadamard = std::move(built.hadamard);
    } else {
        rfit::CMat h = rfit::io::matrix_from_json(rfit::io::read_json_file(hadamard_file),
                                                  "hadamard matrix");
        auto check = rfit::is_hadamard(h, tol);
        if (!check.ok)
            throw rfit::validation_error("supplied matrix is not a Hadamard matrix");
        if (h.rows() != static_cast<Eigen::Index>(rep.dimension))
            throw rfit::validation_error("Hadamard dimension does not match the representation");
        if (!rfit::commutes_with_rep(h, rep, rfit::Tolerance{10 * c.tol}).ok)
            throw rfit::validation_error("supplied Hadamard does not commute with the representation");
        auto built = rfit::hadamard_ueb(h, tol);
        auto basis_report = rfit::verify_ueb(built.ueb, rfit::Tolerance{10 * c.tol});
        if (!basis_report.valid)
            throw rfit::certification_error("constructed basis failed verification");
        auto equiv = rfit::verify_equivariance(built.ueb, rep, rfit::Tolerance{10 * c.tol});
        if (equiv.status != rfit::EquivarianceReport::Status::equivariant)
            throw rfit::certification_error("constructed basis failed the equivariance check: " +
                                            equiv.detail);
        bundle.ueb = std::move(built.ueb);
        bundle.sigma = std::move(equiv.sigma);
        bundle.method = "user";
        bundle.diag_convention = built.diag_convention;
        bundle.hadamard = std::move(h);
    }

    fs::path dir = ensure_out_dir(c);
    rfit::io::write_json_file(dir / "bundle.json", rfit::io::bundle_to_json(bundle));
    std::cout << "certified bundle: " << bundle.ueb.elements.size() << " elements, dimension "
              << bundle.ueb.dimension << ", diagonal convention " << bundle.diag_convention
              << "\n";
    std::cout << "bundle: " << (dir / "bundle.json").string() << "\n";
    return 0;
}

int run_verify(const fs::path& rep_file, const fs::path& bundle_file, const Common& c) {
    rfit::Tolerance tol{c.tol};
    rfit::Representation rep = load_rep(rep_file, c);
    rfit::io::Bundle bundle = load_bundle(bundle_file);

    auto basis_report = rfit::verify_ueb(bundle.ueb, tol);
    Json j;
    j["version"] = rfit::io::kToolVersion;
    j["tolerance"] = c.tol;
    j["ueb"] = Json{{"valid", basis_report.valid},
                    {"max_unitarity_defect", basis_report.max_unitarity_defect},
                    {"max_orthogonality_defect", basis_report.max_orthogonality_defect},
                    {"worst_pair", Json::array({basis_report.worst_pair.first,
                                                basis_report.worst_pair.second})}};
    std::cout << "basis: " << (basis_report.valid ? "valid" : "INVALID")
              << " (unitarity defect " << basis_report.max_unitarity_defect
              << ", orthogonality defect " << basis_report.max_orthogonality_defect
              << ", worst pair " << basis_report.worst_pair.first << ","
              << basis_report.worst_pair.second << ")\n";

    bool equivariant = false;
    if (basis_report.valid) {
        auto equiv = rfit::verify_equivariance(bundle.ueb, rep, tol);
        equivariant = equiv.status == rfit::EquivarianceReport::Status::equivariant;
        Json e;
        e["status"] = equivariant ? "equivariant"
                     : equiv.status == rfit::EquivarianceReport::Status::ambiguous
                         ? "ambiguous"
                         : "not-equivariant";
        e["max_defect"] = equiv.max_defect;
        if (!equiv.detail.empty()) e["detail"] = equiv.detail;
        if (equivariant) {
            Json sigma = Json::object();
            for (std::size_t g = 0; g < equiv.sigma.size(); ++g)
                sigma[std::to_string(g)] = rfit::io::permutation_to_json(equiv.sigma[g]);
            e["sigma"] = std::move(sigma);
            std::cout << "equivariance: ok (defect " << equiv.max_defect << ")\n";
            for (std::size_t gi : rep.group->generator_indices())
                std::cout << "  sigma[" << rep.group->element(gi).cycle_string()
                          << "] = " << equiv.sigma[gi].cycle_string() << "\n";
        } else {
            std::cout << "equivariance: FAILED (" << equiv.detail << ")\n";
        }
        j["equivariance"] = std::move(e);
    } else {
        j["equivariance"] = Json{{"status", "skipped"}};
    }

    fs::path dir = ensure_out_dir(c);
    rfit::io::write_json_file(dir / "verify.json", j);
    std::cout << "report: " << (dir / "verify.json").string() << "\n";
    return (basis_report.valid && equivariant) ? 0 : 3;
}

int run_simulate(const fs::path& rep_file, const fs::path& bundle_file, const std::string& procedure,
                 std::size_t trials, bool expect_perfect, const Common& c) {
    rfit::Tolerance tol{c.tol};
    rfit::Representation rep = load_rep(rep_file, c);
    rfit::io::Bundle bundle = load_bundle(bundle_file);

    rfit::ProtocolSpec spec{rep, bundle.ueb,
                            procedure == "speakable" ? rfit::Procedure::speakable
                                                     : rfit::Procedure::unspeakable};
    rfit::FidelityReport report = rfit::sweep(spec, trials, c.seed, tol);

    fs::path dir = ensure_out_dir(c);
    rfit::io::write_json_file(dir / "fidelity.json", rfit::io::fidelity_to_json(report));
    std::cout << "procedure: " << report.procedure << "\n";
    std::cout << "global_min: " << report.global_min << "\n";
    std::cout << "global_max: " << report.global_max << "\n";
    std::cout << "report: " << (dir / "fidelity.json").string() << "\n";
    if (expect_perfect && report.global_min < 1.0 - 10 * c.tol) {
        std::cerr << "error: expected perfect fidelity, got global_min " << report.global_min
                  << "\n";
        return 3;
    }
    return 0;
}

int run_demo(const std::string& name, std::size_t trials, const Common& c) {
    if (name != "z2") throw rfit::validation_error("unknown demo name: " + name);
    rfit::Tolerance tol{c.tol};
    rfit::Z2Example ex = rfit::builtin_z2_example(tol);
    fs::path dir = ensure_out_dir(c);

    rfit::io::write_json_file(dir / "group.json", rfit::io::group_to_json(*ex.group));
    Json rep_j = rfit::io::rep_to_json(ex.rep);
    rep_j["group"] = "group.json";
    rfit::io::write_json_file(dir / "rep.json", rep_j);

    rfit::io::Bundle bundle;
    bundle.ueb = ex.gueb.base;
    bundle.sigma = ex.gueb.sigma;
    bundle.method = "builtin-z2";
    rfit::io::write_json_file(dir / "bundle.json", rfit::io::bundle_to_json(bundle));

    std::size_t a = ex.group->generator_indices()[0];
    std::cout << "conjugation by the reflection permutes the basis:\n";
    for (std::uint32_t x = 0; x < 4; ++x)
        std::cout << "  pi(a) U_" << x << " pi(a)^-1 = U_" << ex.gueb.sigma[a](x) << "\n";
    std::cout << "sigma_a = " << ex.gueb.sigma[a].cycle_string() << "\n";

    rfit::AnalysisResult res = write_analysis(ex.rep, dir, c, "bundle-constructed.json");
    std::cout << "analysis verdict: " << rfit::to_string(res.verdict) << "\n";

    rfit::ProtocolSpec spec{ex.rep, ex.gueb.base, rfit::Procedure::unspeakable};
    rfit::FidelityReport report = rfit::sweep(spec, trials, c.seed, tol);
    rfit::io::write_json_file(dir / "fidelity.json", rfit::io::fidelity_to_json(report));
    std::cout << "unspeakable sweep: global_min " << report.global_min << ", global_max "
              << report.global_max << "\n";
    std::cout << "files: " << (dir / "group.json").string() << " " << (dir / "rep.json").string()
              << " " << (dir / "bundle.json").string() << " "
              << (dir / "analysis.json").string() << " " << (dir / "fidelity.json").string()
              << "\n";

    bool ok = res.verdict == rfit::Verdict::constructed &&
              report.global_min >= 1.0 - 10 * c.tol;
    if (!ok) {
        std::cerr << "error: demo failed its own certification\n";
        return 3;
    }
    return 0;
}

int run_subgroups(const fs::path& group_file, const Common& c) {
    rfit::GroupPtr group =
        rfit::io::group_from_json(rfit::io::read_json_file(group_file), c.cap);
    rfit::PermutationBasics basics = rfit::basic_permutation_characters(group);

    auto classes = rfit::conjugacy_classes(*group);
    std::cout << "group order " << group->size() << ", " << basics.subgroups.size()
              << " subgroup classes\n";
    std::cout << "classes:";
    for (const auto& cls : classes) std::cout << " " << group->element(cls[0]).cycle_string();
    std::cout << "\n";
    for (std::size_t i = 0; i < basics.subgroups.size(); ++i) {
        std::cout << "|H|=" << basics.subgroups[i].size()
                  << " cosets=" << group->size() / basics.subgroups[i].size() << " character=(";
        for (std::size_t k = 0; k < basics.characters[i].size(); ++k)
            std::cout << (k ? "," : "") << basics.characters[i][k];
        std::cout << ")\n";
    }

    fs::path dir = ensure_out_dir(c);
    rfit::io::write_json_file(dir / "subgroups.json",
                              rfit::io::subgroups_to_json(group, basics));
    std::cout << "report: " << (dir / "subgroups.json").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"equivariant teleportation toolkit"};
    app.set_version_flag("--version", rfit::io::kToolVersion);
    app.require_subcommand(1);

    Common c_analyze, c_construct, c_verify, c_simulate, c_demo, c_subgroups;
    std::string analyze_rep, construct_input, construct_hadamard;
    std::string verify_rep, verify_bundle, simulate_rep, simulate_bundle;
    std::string procedure = "unspeakable", demo_name;
    std::size_t sim_trials = 8, demo_trials = 8;
    bool require_answer = false, expect_perfect = false;
    std::string subgroups_group;

    CLI::App* analyze = app.add_subcommand(
        "analyze", "decide existence of an equivariant basis for a representation");
    analyze->add_option("rep", analyze_rep, "representation file")->required();
    analyze->add_flag("--require-answer", require_answer,
                      "exit 4 when the verdict is UNKNOWN");
    add_common(analyze, c_analyze);

    CLI::App* construct = app.add_subcommand(
        "construct", "build a certified equivariant basis from a G-set or permutation-basis "
                     "representation");
    construct->add_option("input", construct_input, "G-set or representation file")->required();
    construct->add_option("--hadamard", construct_hadamard,
                          "commuting Hadamard matrix file (required above dimension 4)");
    add_common(construct, c_construct);

    CLI::App* verify = app.add_subcommand("verify", "re-verify a bundle against a representation");
    verify->add_option("rep", verify_rep, "representation file")->required();
    verify->add_option("bundle", verify_bundle, "bundle file")->required();
    add_common(verify, c_verify);

    CLI::App* simulate = app.add_subcommand("simulate", "sweep teleportation fidelity over frames");
    simulate->add_option("rep", simulate_rep, "representation file")->required();
    simulate->add_option("bundle", simulate_bundle, "bundle file")->required();
    simulate->add_option("--procedure", procedure, "speakable or unspeakable")
        ->check(CLI::IsMember({"speakable", "unspeakable"}))
        ->capture_default_str();
    simulate->add_option("--trials", sim_trials, "random states per frame pair")
        ->capture_default_str();
    simulate->add_flag("--expect-perfect", expect_perfect,
                       "exit 3 unless global_min >= 1 - 10*tol");
    add_common(simulate, c_simulate);

    CLI::App* demo = app.add_subcommand("demo", "write and exercise a built-in worked example");
    demo->add_option("name", demo_name, "demo name (z2)")->required();
    demo->add_option("--trials", demo_trials, "random states per frame pair")
        ->capture_default_str();
    add_common(demo, c_demo);

    CLI::App* subgroups = app.add_subcommand(
        "subgroups", "subgroup conjugacy classes with coset-space characters");
    subgroups->add_option("group", subgroups_group, "group file")->required();
    add_common(subgroups, c_subgroups);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        Json j;
        j["version"] = rfit::io::kToolVersion;
        j["error"] = Json{{"type", "usage"}, {"message", e.what()}};
        std::cout << j.dump(2) << "\n";
        return 2;
    }

    try {
        if (analyze->parsed()) return run_analyze(analyze_rep, c_analyze, require_answer);
        if (construct->parsed())
            return run_construct(construct_input, construct_hadamard, c_construct);
        if (verify->parsed()) return run_verify(verify_rep, verify_bundle, c_verify);
        if (simulate->parsed())
            return run_simulate(simulate_rep, simulate_bundle, procedure, sim_trials,
                                expect_perfect, c_simulate);
        if (demo->parsed()) return run_demo(demo_name, demo_trials, c_demo);
        if (subgroups->parsed()) return run_subgroups(subgroups_group, c_subgroups);
    } catch (const rfit::cap_exceeded_error& e) {
        return fail(2, "cap-exceeded", e.what());
    } catch (const rfit::certification_error& e) {
        return fail(3, "certification", e.what());
    } catch (const rfit::validation_error& e) {
        return fail(2, "validation", e.what());
    } catch (const std::exception& e) {
        return fail(2, "internal", e.what());
    }
    return 0;
}
