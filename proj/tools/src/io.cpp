#include "consensus/cli/io.hpp"

#include <fstream>
#include <sstream>

namespace consensus::cli {

namespace {

std::size_t require_dimension(const json& j, const char* key, const std::string& what) {
    if (!j.contains(key) || !j.at(key).is_number_unsigned()) {
        throw InvalidInput(what + ": field '" + key + "' must be a nonnegative integer");
    }
    return j.at(key).get<std::size_t>();
}

const json& require_data(const json& j, std::size_t rows, std::size_t cols, const std::string& what) {
    if (!j.is_object()) throw InvalidInput(what + ": expected an object with rows, cols, data");
    if (!j.contains("data") || !j.at("data").is_array()) throw InvalidInput(what + ": field 'data' must be an array");
    const json& data = j.at("data");
    if (data.size() != rows * cols) {
        throw InvalidInput(what + ": data has " + std::to_string(data.size()) + " entries, expected " +
                           std::to_string(rows * cols));
    }
    return data;
}

double as_real(const json& v, const std::string& what) {
    if (!v.is_number()) throw InvalidInput(what + ": entries must be numbers");
    return v.get<double>();
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::size_t parse_index(const std::string& field, std::size_t line_no) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(field, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != field.size() || field.front() == '-') {
        throw InvalidInput("edge list line " + std::to_string(line_no) + ": '" + field + "' is not a positive index");
    }
    return static_cast<std::size_t>(v);
}

double parse_weight(const std::string& field, std::size_t line_no) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != field.size()) {
        throw InvalidInput("edge list line " + std::to_string(line_no) + ": '" + field + "' is not a number");
    }
    return v;
}

}  // namespace

Matrix parse_matrix(const json& j, const std::string& what) {
    if (!j.is_object()) throw InvalidInput(what + ": expected an object with rows, cols, data");
    const std::size_t rows = require_dimension(j, "rows", what);
    const std::size_t cols = require_dimension(j, "cols", what);
    const json& data = require_data(j, rows, cols, what);
    std::vector<double> values;
    values.reserve(data.size());
    for (const auto& v : data) values.push_back(as_real(v, what));
    return Matrix(rows, cols, std::move(values));
}

ComplexMatrix parse_complex_matrix(const json& j, const std::string& what) {
    if (!j.is_object()) throw InvalidInput(what + ": expected an object with rows, cols, data");
    const std::size_t rows = require_dimension(j, "rows", what);
    const std::size_t cols = require_dimension(j, "cols", what);
    const json& data = require_data(j, rows, cols, what);
    std::vector<Complex> values;
    values.reserve(data.size());
    for (const auto& v : data) {
        if (v.is_object()) {
            if (!v.contains("re") || !v.contains("im")) throw InvalidInput(what + ": complex entries need re and im");
            values.emplace_back(as_real(v.at("re"), what), as_real(v.at("im"), what));
        } else {
            values.emplace_back(as_real(v, what), 0.0);
        }
    }
    return ComplexMatrix(rows, cols, std::move(values));
}

EdgeList parse_edge_list(std::istream& in) {
    EdgeList g;
    bool have_header = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (!have_header) {
            if (line.rfind("m=", 0) != 0) {
                throw InvalidInput("edge list line " + std::to_string(line_no) + ": expected header 'm=<count>'");
            }
            g.agents = parse_index(trim(line.substr(2)), line_no);
            have_header = true;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(trim(field));
        if (fields.size() != 3) {
            throw InvalidInput("edge list line " + std::to_string(line_no) + ": expected 'i,j,w'");
        }
        g.edges.push_back({parse_index(fields[0], line_no), parse_index(fields[1], line_no),
                           parse_weight(fields[2], line_no)});
    }
    if (!have_header) throw InvalidInput("edge list is empty; expected header 'm=<count>'");
    return g;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

Matrix read_matrix_file(const std::filesystem::path& path) { return parse_matrix(read_json_file(path), path.string()); }

CouplingMatrix read_coupling_file(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        return validate_coupling(read_matrix_file(path));
    }
    std::istringstream in(text);
    return laplacian_from_edges(parse_edge_list(in));
}

SystemSpec SystemInput::build() const {
    if (gamma) return SystemSpec(a, *gamma, c, l);
    if (f && c_out) return SystemSpec::with_observer(a, *f, *c_out, c, l);
    throw InvalidInput("system needs 'Gamma', or both 'F' and 'C'");
}

SystemInput read_system_file(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    if (!j.is_object()) throw InvalidInput("system file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key != "A" && key != "Gamma" && key != "F" && key != "C" && key != "L" && key != "c") {
            throw InvalidInput("system file: unknown field '" + key + "'");
        }
    }
    if (!j.contains("A")) throw InvalidInput("system file: missing 'A'");
    if (!j.contains("L")) throw InvalidInput("system file: missing 'L'");

    SystemInput s{parse_matrix(j.at("A"), "A"), std::nullopt, std::nullopt, std::nullopt, 1.0,
                  [&] {
                      const json& l = j.at("L");
                      if (l.is_string()) return read_coupling_file(path.parent_path() / l.get<std::string>());
                      return validate_coupling(parse_matrix(l, "L"));
                  }()};
    if (j.contains("Gamma")) s.gamma = parse_matrix(j.at("Gamma"), "Gamma");
    if (j.contains("F")) s.f = parse_matrix(j.at("F"), "F");
    if (j.contains("C")) s.c_out = parse_matrix(j.at("C"), "C");
    if (s.gamma && (s.f || s.c_out)) throw InvalidInput("system file: give either 'Gamma' or 'F'/'C', not both");
    if (j.contains("c")) {
        if (!j.at("c").is_number()) throw InvalidInput("system file: 'c' must be a number");
        s.c = j.at("c").get<double>();
    }
    return s;
}

}  // namespace consensus::cli
