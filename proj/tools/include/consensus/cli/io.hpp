#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>

#include <json.hpp>

#include "consensus/consensus.hpp"

namespace consensus::cli {

using json = nlohmann::json;

/// {"rows": r, "cols": c, "data": [row-major reals]}. Throws InvalidInput naming the offending field.
Matrix parse_matrix(const json& j, const std::string& what = "matrix");

/// Same shape as parse_matrix; each entry is a real or {"re": x, "im": y}.
ComplexMatrix parse_complex_matrix(const json& j, const std::string& what = "matrix");

/// First non-empty line "m=<count>", then "i,j,w" lines with 1-based indices. '#' starts a comment.
EdgeList parse_edge_list(std::istream& in);

std::string read_text(const std::filesystem::path& path);

json read_json_file(const std::filesystem::path& path);

Matrix read_matrix_file(const std::filesystem::path& path);

/// A JSON matrix file (first character '{') or an edge-list file.
CouplingMatrix read_coupling_file(const std::filesystem::path& path);

/**
 * System file contents before assembly. Keys: "A", then either "Gamma" or "C" (+ optional "F"),
 * the coupling as "L" (matrix object, or a path to a coupling file relative to the system file),
 * and "c" (default 1).
 */
struct SystemInput {
    Matrix a;
    std::optional<Matrix> gamma;
    std::optional<Matrix> f;
    std::optional<Matrix> c_out;
    double c = 1.0;
    CouplingMatrix l;

    [[nodiscard]] bool has_coupling_gain() const { return gamma.has_value() || (f.has_value() && c_out.has_value()); }

    /// Throws InvalidInput when neither Gamma nor F with C is present.
    [[nodiscard]] SystemSpec build() const;
};

SystemInput read_system_file(const std::filesystem::path& path);

}  // namespace consensus::cli
