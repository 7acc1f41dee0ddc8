#include "beamfamily/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "beamfamily/errors.hpp"

namespace beamfamily::io {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

template <typename T>
T require(const json& doc, const char* key, const char* what) {
    if (!doc.is_object() || !doc.contains(key)) {
        throw ParseError(std::string(what) + ": missing field '" + key + "'");
    }
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ParseError(std::string(what) + ": field '" + key + "' has the wrong type");
    }
}

template <typename T>
T optional_field(const json& doc, const char* key, T fallback, const char* what) {
    if (!doc.contains(key)) return fallback;
    return require<T>(doc, key, what);
}

std::string number_array(const std::vector<double>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        s += format_number(xs[i]);
    }
    return s + "]";
}

BeamVector beam_vector_from(const json& doc) {
    constexpr const char* what = "beam vector";
    const int m = require<int>(doc, "m", what);
    const double spacing = require<double>(doc, "spacing", what);
    const auto re = require<std::vector<double>>(doc, "re", what);
    const auto im = require<std::vector<double>>(doc, "im", what);
    if (m < 0 || re.size() != static_cast<std::size_t>(m) || im.size() != static_cast<std::size_t>(m)) {
        throw ParseError("beam vector: 're' and 'im' must both hold m = " + std::to_string(m) +
                         " entries (got " + std::to_string(re.size()) + " and " +
                         std::to_string(im.size()) + ")");
    }
    CVector w(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = cplx{re[i], im[i]};
    try {
        return BeamVector(ArrayGeometry(m, spacing), std::move(w));
    } catch (const DomainError& e) {
        throw ParseError(std::string("beam vector: ") + e.what());
    }
}

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent), ' '); }

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    std::string s(buf);
    if (s == "-0") return "0";
    return s;
}

std::string beam_vector_json(const BeamVector& w, int indent) {
    std::vector<double> re, im;
    for (const auto& x : w.weights()) {
        re.push_back(x.real());
        im.push_back(x.imag());
    }
    const std::string in = pad(indent + 2);
    std::ostringstream s;
    s << "{\n"
      << in << "\"m\": " << w.geometry().element_count() << ",\n"
      << in << "\"spacing\": " << format_number(w.geometry().spacing()) << ",\n"
      << in << "\"re\": " << number_array(re) << ",\n"
      << in << "\"im\": " << number_array(im) << "\n"
      << pad(indent) << "}";
    return s.str();
}

BeamVector parse_beam_vector(const std::string& text) {
    return beam_vector_from(parse_json(text, "beam vector"));
}

BeamVector read_beam_vector(const std::string& path) { return parse_beam_vector(read_text(path)); }

void write_beam_vector(const std::string& path, const BeamVector& w) {
    write_text(path, beam_vector_json(w) + "\n");
}

std::string family_json(const Family& family) {
    std::ostringstream s;
    s << "{\n  \"distinct_count\": " << family.distinct_count << ",\n"
      << "  \"mother\": " << beam_vector_json(family.mother, 2) << ",\n"
      << "  \"members\": [";
    for (std::size_t i = 0; i < family.members.size(); ++i) {
        s << (i ? ",\n" : "\n") << "    {\n      \"mask\": \"" << family.masks[i].to_string()
          << "\",\n      \"vector\": " << beam_vector_json(family.members[i], 6) << "\n    }";
    }
    s << (family.members.empty() ? "]\n}\n" : "\n  ]\n}\n");
    return s.str();
}

Family parse_family(const std::string& text) {
    constexpr const char* what = "family";
    const json doc = parse_json(text, what);
    if (!doc.is_object() || !doc.contains("mother") || !doc.contains("members") ||
        !doc.at("members").is_array()) {
        throw ParseError("family: expected 'mother' and a 'members' array");
    }
    Family family{beam_vector_from(doc.at("mother")), {}, {}, 0};
    for (const auto& entry : doc.at("members")) {
        BeamVector v = beam_vector_from(require<json>(entry, "vector", what));
        if (v.geometry() != family.mother.geometry()) {
            throw ParseError("family: member geometry differs from the mother");
        }
        FlipMask mask = FlipMask::parse(require<std::string>(entry, "mask", what));
        if (mask.root_count() != family.mother.geometry().element_count() - 1) {
            throw ParseError("family: mask length must be M - 1");
        }
        family.members.push_back(std::move(v));
        family.masks.push_back(mask);
    }
    family.distinct_count = family.members.size();
    const auto declared = require<std::size_t>(doc, "distinct_count", what);
    if (declared != family.distinct_count) {
        throw ParseError("family: distinct_count does not match the number of members");
    }
    return family;
}

Family read_family(const std::string& path) { return parse_family(read_text(path)); }

void write_family(const std::string& path, const Family& family) {
    write_text(path, family_json(family));
}

std::string selection_json(const Selection& selection, const Family& family, double total_power,
                           UniformityMetric metric, double mother_uniformity) {
    std::ostringstream s;
    s << "{\n  \"k\": " << selection.indices.size() << ",\n"
      << "  \"total_power\": " << format_number(total_power) << ",\n"
      << "  \"metric\": \"" << (metric == UniformityMetric::MaxDeviation ? "maxdev" : "var")
      << "\",\n"
      << "  \"search\": \"" << (selection.exhaustive ? "exhaustive" : "heuristic") << "\",\n"
      << "  \"mother_uniformity\": " << format_number(mother_uniformity) << ",\n"
      << "  \"uniformity\": " << format_number(selection.profile.uniformity) << ",\n"
      << "  \"members\": [";
    for (std::size_t i = 0; i < selection.indices.size(); ++i) {
        s << (i ? ",\n" : "\n") << "    {\n      \"index\": " << selection.indices[i]
          << ",\n      \"mask\": \"" << family.masks[selection.indices[i]].to_string()
          << "\",\n      \"vector\": " << beam_vector_json(selection.vectors[i], 6) << "\n    }";
    }
    s << "\n  ]\n}\n";
    return s.str();
}

DesignSpec parse_design_spec(const std::string& text) {
    constexpr const char* what = "design spec";
    const json doc = parse_json(text, what);
    try {
        const ArrayGeometry geometry(require<int>(doc, "m", what), require<double>(doc, "spacing", what));
        const auto sector = require<std::vector<double>>(doc, "sector", what);
        if (sector.size() != 2) throw ParseError("design spec: 'sector' must be [lo, hi]");

        std::vector<AngleInterval> out;
        if (doc.contains("out_sector")) {
            for (const auto& iv : require<std::vector<std::vector<double>>>(doc, "out_sector", what)) {
                if (iv.size() != 2) throw ParseError("design spec: out_sector entries must be [lo, hi]");
                out.push_back({iv[0], iv[1]});
            }
        } else {
            const double gap = optional_field<double>(doc, "transition_deg", 5.0, what);
            if (sector[0] - gap > -90.0) out.push_back({-90.0, sector[0] - gap});
            if (sector[1] + gap < 90.0) out.push_back({sector[1] + gap, 90.0});
        }

        DesignSpec spec{geometry,
                        {sector[0], sector[1]},
                        std::move(out),
                        require<double>(doc, "total_power", what),
                        optional_field<double>(doc, "delta", 0.1, what),
                        optional_field<int>(doc, "insector_grid_count", 41, what),
                        optional_field<int>(doc, "outsector_grid_count", 180, what),
                        PhaseProfile{},
                        optional_field<int>(doc, "quadrature_points", 2048, what)};
        if (doc.contains("phase_profile")) {
            const json& p = doc.at("phase_profile");
            spec.phase.amplitude = optional_field<double>(p, "amplitude", 2.0 * kPi, what);
            spec.phase.offset = optional_field<double>(p, "offset", 0.0, what);
        }
        spec.validate();
        return spec;
    } catch (const DomainError& e) {
        throw ParseError(std::string("design spec: ") + e.what());
    }
}

DesignSpec read_design_spec(const std::string& path) { return parse_design_spec(read_text(path)); }

std::string design_spec_json(const DesignSpec& spec) {
    std::ostringstream s;
    s << "{\n  \"m\": " << spec.geometry.element_count() << ",\n"
      << "  \"spacing\": " << format_number(spec.geometry.spacing()) << ",\n"
      << "  \"sector\": " << number_array({spec.sector.lo_deg, spec.sector.hi_deg}) << ",\n"
      << "  \"out_sector\": [";
    for (std::size_t i = 0; i < spec.out_sector.size(); ++i) {
        s << (i ? ", " : "") << number_array({spec.out_sector[i].lo_deg, spec.out_sector[i].hi_deg});
    }
    s << "],\n"
      << "  \"total_power\": " << format_number(spec.total_power) << ",\n"
      << "  \"delta\": " << format_number(spec.delta) << ",\n"
      << "  \"insector_grid_count\": " << spec.insector_grid_count << ",\n"
      << "  \"outsector_grid_count\": " << spec.outsector_grid_count << ",\n"
      << "  \"quadrature_points\": " << spec.quadrature_points << ",\n"
      << "  \"phase_profile\": {\"amplitude\": " << format_number(spec.phase.amplitude)
      << ", \"offset\": " << format_number(spec.phase.offset) << "}\n}\n";
    return s.str();
}

void write_pattern_csv(std::ostream& out, const std::vector<PatternGrid>& patterns) {
    if (patterns.empty()) throw DomainError("no patterns to write");
    const auto& angles = patterns.front().angles;
    for (const auto& p : patterns) {
        if (p.angles != angles) throw DomainError("patterns do not share an angle grid");
    }
    if (patterns.size() == 1) {
        out << "theta_deg,power_linear,power_db\n";
    } else {
        out << "theta_deg";
        for (std::size_t j = 1; j <= patterns.size(); ++j) {
            out << ",power_linear_" << j << ",power_db_" << j;
        }
        out << "\n";
    }
    for (std::size_t i = 0; i < angles.size(); ++i) {
        out << format_number(angles[i]);
        for (const auto& p : patterns) {
            out << ',' << format_number(p.powers[i]) << ',' << format_number(to_db(p.powers[i]));
        }
        out << "\n";
    }
}

void write_profile_csv(std::ostream& out, const PowerProfile& profile) {
    const double flat = profile.total_power / static_cast<double>(profile.per_element.size());
    out << "element,power_linear,power_db_rel_avg\n";
    for (std::size_t i = 0; i < profile.per_element.size(); ++i) {
        out << (i + 1) << ',' << format_number(profile.per_element[i]) << ','
            << format_number(to_db(profile.per_element[i] / flat)) << "\n";
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace beamfamily::io
