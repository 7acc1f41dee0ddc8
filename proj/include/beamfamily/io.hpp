#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "beamfamily/core.hpp"
#include "beamfamily/design.hpp"
#include "beamfamily/enumerate.hpp"
#include "beamfamily/select.hpp"

namespace beamfamily::io {

/// 12 significant digits, lowercase exponent, "-0" printed as "0",
/// non-finite values as inf / -inf / nan.
std::string format_number(double x);

// Beam-vector document: {"m": M, "spacing": d, "re": [...], "im": [...]}.
std::string beam_vector_json(const BeamVector& w, int indent = 0);
BeamVector parse_beam_vector(const std::string& text);
BeamVector read_beam_vector(const std::string& path);
void write_beam_vector(const std::string& path, const BeamVector& w);

// Family document: {"distinct_count": N, "mother": {...},
// "members": [{"mask": "0110...", "vector": {...}}, ...]}. Mask character i
// is '1' when root i (sorted by magnitude, then phase) is flipped.
std::string family_json(const Family& family);
Family parse_family(const std::string& text);
Family read_family(const std::string& path);
void write_family(const std::string& path, const Family& family);

std::string selection_json(const Selection& selection, const Family& family, double total_power,
                           UniformityMetric metric, double mother_uniformity);

DesignSpec parse_design_spec(const std::string& text);
DesignSpec read_design_spec(const std::string& path);
std::string design_spec_json(const DesignSpec& spec);

/// theta_deg,power_linear,power_db for one pattern; for several patterns
/// theta_deg,power_linear_1,power_db_1,power_linear_2,... All patterns must
/// share the angle grid.
void write_pattern_csv(std::ostream& out, const std::vector<PatternGrid>& patterns);

/// element,power_linear,power_db_rel_avg (element is 1-based).
void write_profile_csv(std::ostream& out, const PowerProfile& profile);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace beamfamily::io
