#include "consensus/cli/report.hpp"

#include <cmath>
#include <cstdio>

namespace consensus::cli {

namespace {

void emit(const json& j, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            // nlohmann::json objects are std::map backed, so iteration is already key-sorted.
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad + json(key).dump() + ": ";
                emit(value, out, depth + 1);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                emit(j[i], out, depth + 1);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case json::value_t::number_float: out += format_real(j.get<double>()); return;
        default: out += j.dump(); return;
    }
}

}  // namespace

std::string format_real(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string canonical_dump(const json& j) {
    std::string out;
    emit(j, out, 0);
    out += "\n";
    return out;
}

json to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const Matrix& m) {
    json data = json::array();
    for (double v : m.data()) data.push_back(v);
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json to_json(const ComplexMatrix& m) {
    json data = json::array();
    for (const Complex& v : m.data()) data.push_back(to_json(v));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json to_json(const Spectrum& s) {
    json out = json::array();
    for (const auto& v : s) out.push_back(to_json(v));
    return out;
}

json to_json(const CouplingSpectrum& s) {
    return {
        {"full", to_json(s.full)},
        {"reduced", to_json(s.reduced)},
        {"lambda2", to_json(s.lambda2)},
        {"zero_eigenvalue", to_json(s.zero_eigenvalue)},
        {"correspondence_error", s.correspondence_error},
        {"zero_found", s.zero_found},
        {"correspondence_ok", s.correspondence_ok},
        {"connectivity_hint", connectivity_hint(s)},
    };
}

json to_json(const ConsensusCertificate& c) {
    json modes = json::array();
    for (const auto& m : c.per_mode) modes.push_back({{"lambda", to_json(m.lambda)}, {"value", m.value}});
    json params = json::object();
    for (const auto& [k, v] : c.parameters) params[k] = v;
    return {
        {"criterion", std::string(to_string(c.criterion))},
        {"verdict", c.verdict},
        {"margin", c.margin},
        {"per_mode", std::move(modes)},
        {"P", c.p ? to_json(*c.p) : json(nullptr)},
        {"Q", c.q ? to_json(*c.q) : json(nullptr)},
        {"parameters", std::move(params)},
        {"notes", c.notes},
    };
}

json to_json(const ObserverDesign& d) {
    return {
        {"P", to_json(d.p)},
        {"F", to_json(d.f)},
        {"inequality_max_eig", d.inequality_max_eig},
        {"c_min", d.c_min ? json(*d.c_min) : json(nullptr)},
        {"method", d.method},
        {"candidates_tried", d.candidates_tried},
    };
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
    const char prefix = t.kind == TrajectoryKind::reduced ? 'y' : 'x';
    const std::size_t offset = t.kind == TrajectoryKind::reduced ? 2 : 1;
    out << 't';
    for (std::size_t i = 0; i < t.blocks; ++i)
        for (std::size_t j = 0; j < t.dim; ++j) out << ',' << prefix << '_' << i + offset << '_' << j + 1;
    out << '\n';
    for (std::size_t k = 0; k < t.size(); ++k) {
        out << format_real(t.times[k]);
        for (double v : t.states[k]) out << ',' << format_real(v);
        out << '\n';
    }
}

}  // namespace consensus::cli
