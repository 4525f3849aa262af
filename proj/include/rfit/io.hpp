#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rfit/errors.hpp"
#include "rfit/group.hpp"
#include "rfit/gset.hpp"
#include "rfit/linalg.hpp"
#include "rfit/rep.hpp"
#include "rfit/sim.hpp"
#include "rfit/ueb.hpp"

namespace rfit::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

inline Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open file: " + path.string());
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("cannot parse " + path.string() + ": " + e.what());
    }
    return j;
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write file: " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw validation_error("write failed: " + path.string());
}

inline std::size_t size_from_json(const Json& j, const std::string& where) {
    if (j.is_number_unsigned()) return j.get<std::size_t>();
    if (j.is_number_integer() && j.get<long long>() >= 0)
        return static_cast<std::size_t>(j.get<long long>());
    throw validation_error(where + " must be a non-negative integer");
}

// Complex values travel as [re, im]; matrices as arrays of row arrays.

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw validation_error(where + ": complex values must be [re, im] number pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Json matrix_to_json(const CMat& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline CMat matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw validation_error(where + ": matrix must be a nonempty array of rows");
    std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        throw validation_error(where + ": matrix rows must be nonempty arrays");
    std::size_t cols = j[0].size();
    CMat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw validation_error(where + ": matrix rows have inconsistent lengths");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                complex_from_json(j[r][c], where);
    }
    return m;
}

inline Json permutation_to_json(const Permutation& p) { return Json(p.images()); }

inline std::vector<std::uint32_t> images_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw validation_error(where + ": permutation must be an image array");
    std::vector<std::uint32_t> images;
    images.reserve(j.size());
    for (const auto& v : j)
        images.push_back(static_cast<std::uint32_t>(size_from_json(v, where + ": image")));
    return images;
}

inline Json group_to_json(const PermGroup& g) {
    Json j;
    j["degree"] = g.degree();
    Json gens = Json::array();
    for (const auto& p : g.generators()) gens.push_back(permutation_to_json(p));
    j["generators"] = std::move(gens);
    if (!g.name().empty()) j["name"] = g.name();
    return j;
}

inline GroupPtr group_from_json(const Json& j, std::size_t cap = kDefaultElementCap) {
    if (!j.is_object() || !j.contains("degree") || !j.contains("generators"))
        throw validation_error("group: expected an object with degree and generators");
    std::size_t degree = size_from_json(j["degree"], "group: degree");
    if (!j["generators"].is_array())
        throw validation_error("group: generators must be an array");
    std::vector<std::vector<std::uint32_t>> gens;
    for (const auto& g : j["generators"]) gens.push_back(images_from_json(g, "group generator"));
    std::string name = j.value("name", std::string{});
    return make_group(degree, gens, name, cap);
}

// A group field is either an inline object or a string path relative to the
// directory of the file that referenced it.
inline GroupPtr group_from_spec(const Json& j, const std::filesystem::path& base_dir,
                                std::size_t cap = kDefaultElementCap) {
    if (j.is_string())
        return group_from_json(read_json_file(base_dir / j.get<std::string>()), cap);
    return group_from_json(j, cap);
}

inline Json rep_to_json(const Representation& rep) {
    Json j;
    j["group"] = group_to_json(*rep.group);
    j["dimension"] = rep.dimension;
    Json mats = Json::array();
    for (std::size_t i : rep.group->generator_indices())
        mats.push_back(matrix_to_json(rep.matrices[i]));
    j["generator_matrices"] = std::move(mats);
    return j;
}

inline Representation rep_from_json(const Json& j, const std::filesystem::path& base_dir,
                                    Tolerance tol = {}, std::size_t cap = kDefaultElementCap) {
    if (!j.is_object() || !j.contains("group") || !j.contains("dimension") ||
        !j.contains("generator_matrices"))
        throw validation_error(
            "representation: expected an object with group, dimension, generator_matrices");
    GroupPtr group = group_from_spec(j["group"], base_dir, cap);
    std::size_t dim = size_from_json(j["dimension"], "representation: dimension");
    if (dim == 0) throw validation_error("representation: dimension must be positive");
    if (!j["generator_matrices"].is_array())
        throw validation_error("representation: generator_matrices must be an array");

    std::vector<CMat> mats;
    for (const auto& m : j["generator_matrices"])
        mats.push_back(matrix_from_json(m, "generator matrix"));
    if (mats.empty()) {
        // A generator-free group is the trivial group; the identity matrices
        // of the declared dimension are the whole representation.
        if (group->size() != 1)
            throw validation_error("representation: generator matrices missing for a nontrivial group");
        return Representation{group, dim, {CMat::Identity(dim, dim)}};
    }
    Representation rep = make_representation(group, mats, tol);
    if (rep.dimension != dim)
        throw validation_error("representation: declared dimension does not match the matrices");
    return rep;
}

inline Json gset_to_json(const GSet& x) {
    Json j;
    j["group"] = group_to_json(*x.group());
    j["size"] = x.size();
    Json actions = Json::array();
    for (std::size_t i : x.group()->generator_indices())
        actions.push_back(permutation_to_json(x.action(i)));
    j["generator_actions"] = std::move(actions);
    j["provenance"] = x.provenance();
    return j;
}

inline GSet gset_from_json(const Json& j, const std::filesystem::path& base_dir,
                           std::size_t cap = kDefaultElementCap) {
    if (!j.is_object() || !j.contains("group") || !j.contains("size") ||
        !j.contains("generator_actions"))
        throw validation_error("gset: expected an object with group, size, generator_actions");
    GroupPtr group = group_from_spec(j["group"], base_dir, cap);
    std::size_t size = size_from_json(j["size"], "gset: size");
    if (!j["generator_actions"].is_array())
        throw validation_error("gset: generator_actions must be an array");
    std::vector<Permutation> actions;
    for (const auto& a : j["generator_actions"])
        actions.emplace_back(images_from_json(a, "gset action"));
    for (const auto& a : actions)
        if (a.degree() != size)
            throw validation_error("gset: action degree does not match declared size");
    if (actions.empty() && group->size() == 1) {
        std::vector<Permutation> identity_only{Permutation::identity(size)};
        return GSet(group, std::move(identity_only), j.value("provenance", std::string{"user"}));
    }
    return gset_from_generator_actions(group, actions, j.value("provenance", std::string{"user"}));
}

// The certified bundle: basis elements, the label action per group element,
// and how the basis was made.
struct Bundle {
    UnitaryErrorBasis ueb;
    std::vector<Permutation> sigma;  // may be empty for uncertified bundles
    std::string method;              // "builtin-z2" | "hadamard" | "user"
    std::string diag_convention;     // "column" | "row" | ""
    std::optional<CMat> hadamard;
};

inline Json bundle_to_json(const Bundle& b) {
    Json j;
    j["dimension"] = b.ueb.dimension;
    Json elems = Json::array();
    for (const auto& m : b.ueb.elements) elems.push_back(matrix_to_json(m));
    j["elements"] = std::move(elems);
    Json sigma = Json::object();
    for (std::size_t e = 0; e < b.sigma.size(); ++e)
        sigma[std::to_string(e)] = permutation_to_json(b.sigma[e]);
    j["sigma"] = std::move(sigma);
    Json prov = Json::object();
    prov["method"] = b.method;
    if (!b.diag_convention.empty()) prov["diag_convention"] = b.diag_convention;
    if (b.hadamard) prov["hadamard"] = matrix_to_json(*b.hadamard);
    prov["tool_version"] = kToolVersion;
    j["provenance"] = std::move(prov);
    return j;
}

inline Bundle bundle_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("dimension") || !j.contains("elements"))
        throw validation_error("bundle: expected an object with dimension and elements");
    Bundle b;
    b.ueb.dimension = size_from_json(j["dimension"], "bundle: dimension");
    if (!j["elements"].is_array()) throw validation_error("bundle: elements must be an array");
    for (const auto& m : j["elements"])
        b.ueb.elements.push_back(matrix_from_json(m, "bundle element"));
    if (j.contains("sigma") && j["sigma"].is_object()) {
        b.sigma.assign(j["sigma"].size(), Permutation::identity(0));
        for (const auto& [key, val] : j["sigma"].items()) {
            std::size_t e = 0;
            try {
                e = std::stoul(key);
            } catch (...) {
                throw validation_error("bundle: sigma keys must be element indices");
            }
            if (e >= b.sigma.size())
                throw validation_error("bundle: sigma keys must cover 0..|G|-1 exactly");
            b.sigma[e] = Permutation(images_from_json(val, "bundle sigma"));
        }
    }
    if (j.contains("provenance") && j["provenance"].is_object()) {
        const auto& prov = j["provenance"];
        b.method = prov.value("method", std::string{});
        b.diag_convention = prov.value("diag_convention", std::string{});
        if (prov.contains("hadamard"))
            b.hadamard = matrix_from_json(prov["hadamard"], "bundle hadamard");
    }
    return b;
}

inline Json fidelity_to_json(const FidelityReport& r) {
    Json j;
    j["version"] = kToolVersion;
    j["group"] = r.group;
    j["procedure"] = r.procedure;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    Json grid = Json::array();
    for (const auto& row : r.grid_min) grid.push_back(row);
    j["grid_min"] = std::move(grid);
    j["global_min"] = r.global_min;
    j["global_max"] = r.global_max;
    j["tolerance"] = r.tolerance;
    return j;
}

inline Json class_function_to_json(const ClassFunction& chi) {
    Json j;
    Json reps = Json::array();
    for (const auto& cls : chi.classes)
        reps.push_back(chi.group->elements()[cls[0]].cycle_string());
    j["class_representatives"] = std::move(reps);
    Json values = Json::array();
    for (Complex v : chi.values) values.push_back(complex_to_json(v));
    j["values"] = std::move(values);
    return j;
}

inline Json certificate_to_json(const FeasibilityCertificate& cert) {
    Json j;
    j["feasible"] = cert.feasible;
    if (cert.feasible)
        j["coefficients"] = cert.coefficients;
    else
        j["reason"] = cert.reason;
    j["explored_bounds"] = cert.explored_bounds;
    return j;
}

inline Json subgroups_to_json(const GroupPtr& group, const PermutationBasics& basics) {
    Json j;
    j["version"] = kToolVersion;
    j["group"] = group->name().empty() ? Json() : Json(group->name());
    j["order"] = group->size();
    auto classes = conjugacy_classes(*group);
    Json reps = Json::array();
    for (const auto& cls : classes) reps.push_back(group->elements()[cls[0]].cycle_string());
    j["class_representatives"] = std::move(reps);
    Json rows = Json::array();
    for (std::size_t i = 0; i < basics.subgroups.size(); ++i) {
        Json row;
        row["subgroup"] = basics.subgroups[i].members;
        row["order"] = basics.subgroups[i].members.size();
        row["coset_count"] = group->size() / basics.subgroups[i].members.size();
        row["character"] = basics.characters[i];
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j;
}

}  // namespace rfit::io
