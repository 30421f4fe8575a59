#pragma once

// JSON document IO: maps and designs (user-facing angles in degrees) and
// deployment traces (SI units throughout). Every emitter round-trips through
// its parser.

#include <stdexcept>
#include <string>

#include "vinenav/deployment.hpp"
#include "vinenav/geometry.hpp"
#include "vinenav/kinematics.hpp"

namespace vinenav {

// Parse or validation failure. `where` is the offending field path (for
// semantic errors) or a line:column position (for syntax errors); it is also
// folded into what().
class ParseError : public std::runtime_error {
  public:
    ParseError(std::string where_, const std::string& what_)
        : std::runtime_error(where_.empty() ? what_ : where_ + ": " + what_),
          where(std::move(where_)) {}
    std::string where;
};

// A design document: the nominal program plus the manufacturable turn bound.
struct DesignDoc {
    RobotDesign design;
    double theta_max = M_PI / 2;  // radians
};

MapModel parse_map(const std::string& text);
DesignDoc parse_design(const std::string& text);

std::string emit_map(const MapModel& map);
std::string emit_design(const RobotDesign& design, double theta_max = M_PI / 2);
// Trace document: ordered events, the tip path, and the final robot state.
std::string emit_trace(const DeploymentTrace& trace, const RobotState& final_state);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

MapModel load_map(const std::string& path);
DesignDoc load_design(const std::string& path);

}  // namespace vinenav
