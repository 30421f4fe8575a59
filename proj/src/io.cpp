#include "vinenav/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace vinenav {

namespace {

using json = nlohmann::ordered_json;

constexpr double kDeg = M_PI / 180.0;

std::string join(const std::string& path, const char* key) {
    return path.empty() ? key : path + "." + key;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError("line " + std::to_string(line) + ":" + std::to_string(col),
                         "invalid JSON");
    }
}

const json& need_field(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw ParseError(path.empty() ? "document" : path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(join(path, key), "missing field");
    return *it;
}

double need_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path, "expected a number");
    return j.get<double>();
}

Vec2 need_vec(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2)
        throw ParseError(path, "expected a two-element [x, y] array");
    return {need_number(j[0], path + "[0]"), need_number(j[1], path + "[1]")};
}

void need_version(const json& j) {
    const json& v = need_field(j, "version", "");
    if (!v.is_number_integer() || v.get<long>() != 1)
        throw ParseError("version", "unsupported version (expected 1)");
}

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

const char* kind_name(PivotKind k) {
    switch (k) {
        case PivotKind::base: return "base";
        case PivotKind::contact: return "contact";
        case PivotKind::designed_turn: return "designed_turn";
    }
    return "?";
}

}  // namespace

MapModel parse_map(const std::string& text) {
    json j = parse_json(text);
    need_version(j);
    MapModel m;

    const json& bounds = need_field(j, "bounds", "");
    m.bounds.min = need_vec(need_field(bounds, "min", "bounds"), "bounds.min");
    m.bounds.max = need_vec(need_field(bounds, "max", "bounds"), "bounds.max");

    const json& obs = need_field(j, "obstacles", "");
    if (!obs.is_array()) throw ParseError("obstacles", "expected an array");
    for (std::size_t i = 0; i < obs.size(); ++i) {
        std::string p = "obstacles[" + std::to_string(i) + "]";
        const json& poly = obs[i];
        if (!poly.is_array()) throw ParseError(p, "expected an array of [x, y] vertices");
        Polygon pg;
        for (std::size_t k = 0; k < poly.size(); ++k)
            pg.vertices.push_back(need_vec(poly[k], p + "[" + std::to_string(k) + "]"));
        m.obstacles.push_back(std::move(pg));
    }

    const json& start = need_field(j, "start", "");
    m.start.x = need_number(need_field(start, "x", "start"), "start.x");
    m.start.y = need_number(need_field(start, "y", "start"), "start.y");
    const json& ang = need_field(start, "angle_deg", "start");
    if (ang.is_string()) {
        if (ang.get<std::string>() != "free")
            throw ParseError("start.angle_deg", "expected a number or \"free\"");
    } else {
        m.start_angle = need_number(ang, "start.angle_deg") * kDeg;
    }

    const json& goal = need_field(j, "goal", "");
    m.goal.x = need_number(need_field(goal, "x", "goal"), "goal.x");
    m.goal.y = need_number(need_field(goal, "y", "goal"), "goal.y");

    m.success_radius = need_number(need_field(j, "success_radius_m", ""), "success_radius_m");

    try {
        m.validate();
    } catch (const std::exception& e) {
        // validation messages already carry their own field prefixes
        throw ParseError("", e.what());
    }
    return m;
}

DesignDoc parse_design(const std::string& text) {
    json j = parse_json(text);
    need_version(j);
    DesignDoc d;

    const json& segs = need_field(j, "segments", "");
    if (!segs.is_array()) throw ParseError("segments", "expected an array");
    for (std::size_t i = 0; i < segs.size(); ++i) {
        std::string p = "segments[" + std::to_string(i) + "]";
        double len = need_number(need_field(segs[i], "length_m", p), p + ".length_m");
        double turn = need_number(need_field(segs[i], "turn_deg", p), p + ".turn_deg");
        d.design.segments.push_back({len, turn * kDeg});
    }
    if (j.contains("theta_max_deg"))
        d.theta_max = need_number(j["theta_max_deg"], "theta_max_deg") * kDeg;

    try {
        d.design.validate();
    } catch (const std::exception& e) {
        throw ParseError("segments", e.what());
    }
    // the first pair's turn doubles as the launch aim on free-start maps and
    // may exceed the manufacturable bound; later turns are always bends
    for (std::size_t i = 1; i < d.design.segments.size(); ++i)
        if (std::abs(d.design.segments[i].turn) > d.theta_max + 1e-12)
            throw ParseError("segments[" + std::to_string(i) + "].turn_deg",
                             "turn magnitude exceeds theta_max_deg");
    return d;
}

std::string emit_map(const MapModel& map) {
    json j;
    j["version"] = 1;
    j["bounds"] = {{"min", vec_json(map.bounds.min)}, {"max", vec_json(map.bounds.max)}};
    json obs = json::array();
    for (const auto& poly : map.obstacles) {
        json pj = json::array();
        for (Vec2 v : poly.vertices) pj.push_back(vec_json(v));
        obs.push_back(std::move(pj));
    }
    j["obstacles"] = std::move(obs);
    json start;
    start["x"] = map.start.x;
    start["y"] = map.start.y;
    if (map.start_angle)
        start["angle_deg"] = *map.start_angle / kDeg;
    else
        start["angle_deg"] = "free";
    j["start"] = std::move(start);
    j["goal"] = {{"x", map.goal.x}, {"y", map.goal.y}};
    j["success_radius_m"] = map.success_radius;
    return j.dump(2) + "\n";
}

std::string emit_design(const RobotDesign& design, double theta_max) {
    json j;
    j["version"] = 1;
    json segs = json::array();
    for (const auto& s : design.segments)
        segs.push_back({{"length_m", s.length}, {"turn_deg", s.turn / kDeg}});
    j["segments"] = std::move(segs);
    j["theta_max_deg"] = theta_max / kDeg;
    return j.dump(2) + "\n";
}

std::string emit_trace(const DeploymentTrace& trace, const RobotState& final_state) {
    json j;
    j["version"] = 1;
    j["termination"] = trace.termination ? to_string(*trace.termination) : "running";

    json events = json::array();
    for (const auto& e : trace.events) {
        json ej;
        ej["type"] = to_string(e.type);
        ej["length_m"] = e.length;
        if (e.type == EventType::free_growth || e.type == EventType::slide) {
            ej["from"] = vec_json(e.from);
            ej["to"] = vec_json(e.to);
        }
        if (e.pivot >= 0) ej["pivot"] = e.pivot;
        if (e.obstacle >= 0) ej["obstacle"] = e.obstacle;
        if (e.type == EventType::turn_everted || e.type == EventType::slide)
            ej["angle_rad"] = e.angle;
        if (e.type == EventType::terminated) ej["reason"] = to_string(e.reason);
        events.push_back(std::move(ej));
    }
    j["events"] = std::move(events);

    json path = json::array();
    for (std::size_t i = 0; i < trace.tip_path.size(); ++i)
        path.push_back(json::array(
            {trace.tip_path[i].x, trace.tip_path[i].y, trace.tip_path_length[i]}));
    j["tip_path"] = std::move(path);

    json fin;
    fin["tip"] = vec_json(final_state.tip);
    fin["heading_rad"] = final_state.heading.angle();
    fin["length_m"] = final_state.length();
    json pivots = json::array();
    for (const auto& p : final_state.pivots) {
        json pj;
        pj["position"] = vec_json(p.position);
        pj["kind"] = kind_name(p.kind);
        if (p.obstacle >= 0) pj["obstacle"] = p.obstacle;
        if (p.design_index >= 0) pj["design_index"] = p.design_index;
        pj["touching"] = p.touching;
        pivots.push_back(std::move(pj));
    }
    fin["pivots"] = std::move(pivots);
    j["final"] = std::move(fin);
    return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad()) throw std::runtime_error("read failed on " + path);
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed on " + path);
}

MapModel load_map(const std::string& path) {
    try {
        return parse_map(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError("", path + ": " + e.what());
    }
}

DesignDoc load_design(const std::string& path) {
    try {
        return parse_design(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError("", path + ": " + e.what());
    }
}

}  // namespace vinenav
