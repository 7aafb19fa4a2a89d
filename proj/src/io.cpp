#include "swarm/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>
#include <yaml-cpp/yaml.h>

namespace swarm {

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_vec(const Vec3& v) {
  return "[" + format_double(v.x()) + ", " + format_double(v.y()) + ", " + format_double(v.z()) +
         "]";
}

class ScenarioReader {
 public:
  explicit ScenarioReader(std::string source) : source_(std::move(source)) {}

  Scenario read(const YAML::Node& root) {
    Scenario s;
    if (root.IsNull()) {
      notice("params", "section missing, all parameters at defaults");
    } else if (!root.IsMap()) {
      fail(root, "scenario", "top level must be a mapping");
    }
    keys(root, "", {"params", "formation", "environment", "placement", "run"});

    read_params(root["params"], s.params);
    read_run(root["run"], s);
    read_environment(root["environment"], s);
    read_formation(root["formation"], s);
    read_placement(root["placement"], s);
    check(s);
    return s;
  }

 private:
  [[noreturn]] void fail(const YAML::Node& node, const std::string& field,
                         const std::string& message) const {
    std::string where = source_;
    if (node.IsDefined() && node.Mark().line >= 0) {
      where += ":" + std::to_string(node.Mark().line + 1);
    }
    throw ValidationError(where + ": " + field + ": " + message);
  }

  void notice(const std::string& field, const std::string& what) const {
    spdlog::info("{}: {} {}", source_, field, what);
  }

  void remember(const std::string& field, const YAML::Node& node) {
    if (node.IsDefined() && node.Mark().line >= 0) lines_[field] = node.Mark().line + 1;
  }

  void keys(const YAML::Node& map, const std::string& path,
            std::initializer_list<const char*> allowed) {
    if (!map.IsDefined() || map.IsNull()) return;
    if (!map.IsMap()) fail(map, path, "expected a mapping");
    const std::set<std::string> names(allowed.begin(), allowed.end());
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      const std::string field = path.empty() ? key : path + "." + key;
      if (!names.contains(key)) fail(kv.first, field, "unknown field");
      remember(field, kv.second);
    }
  }

  static bool present(const YAML::Node& map, const char* key) {
    return map.IsDefined() && map.IsMap() && map[key].IsDefined() && !map[key].IsNull();
  }

  double number(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a number");
    try {
      return node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node, field, "expected a number, got '" + node.Scalar() + "'");
    }
  }

  std::size_t count(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a nonnegative integer");
    try {
      const auto value = node.as<long long>();
      if (value < 0) fail(node, field, "expected a nonnegative integer");
      return static_cast<std::size_t>(value);
    } catch (const YAML::Exception&) {
      fail(node, field, "expected a nonnegative integer, got '" + node.Scalar() + "'");
    }
  }

  std::string text(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a string");
    return node.Scalar();
  }

  Vec3 vec(const YAML::Node& node, const std::string& field) const {
    if (!node.IsSequence() || node.size() < 2 || node.size() > 3) {
      fail(node, field, "expected [x, y] or [x, y, z]");
    }
    Vec3 v = Vec3::Zero();
    for (std::size_t a = 0; a < node.size(); ++a) {
      v[static_cast<Eigen::Index>(a)] = number(node[a], field);
    }
    return v;
  }

  Box box(const YAML::Node& node, const std::string& field) {
    keys(node, field, {"min", "max"});
    if (!present(node, "min") || !present(node, "max")) fail(node, field, "needs min and max");
    return Box{vec(node["min"], field + ".min"), vec(node["max"], field + ".max")};
  }

  void scalar(const YAML::Node& map, const char* key, const std::string& path, double& out) {
    const std::string field = path + "." + key;
    if (present(map, key)) {
      out = number(map[key], field);
    } else {
      notice(field, "not set, using default " + format_double(out));
    }
  }

  void read_params(const YAML::Node& node, SwarmParams& p) {
    keys(node, "params",
         {"n", "r", "r_s", "r_a", "v_max", "u_max", "tau", "k_f", "k_t", "k_i", "k_o", "v_ref",
          "u_ref", "d_ref", "lambda"});
    if (present(node, "n")) {
      p.n = count(node["n"], "params.n");
    } else {
      notice("params.n", "not set, using default " + std::to_string(p.n));
    }
    scalar(node, "r", "params", p.r);
    scalar(node, "r_s", "params", p.r_s);
    scalar(node, "r_a", "params", p.r_a);
    scalar(node, "v_max", "params", p.v_max);
    scalar(node, "u_max", "params", p.u_max);
    scalar(node, "tau", "params", p.tau);
    scalar(node, "k_f", "params", p.k_f);
    scalar(node, "k_t", "params", p.k_t);
    scalar(node, "k_i", "params", p.k_i);
    scalar(node, "k_o", "params", p.k_o);
    scalar(node, "v_ref", "params", p.v_ref);
    scalar(node, "d_ref", "params", p.d_ref);
    scalar(node, "lambda", "params", p.lambda);
    if (present(node, "u_ref")) {
      p.u_ref = vec(node["u_ref"], "params.u_ref");
    } else {
      notice("params.u_ref", "not set, using default " + format_vec(p.u_ref));
    }
  }

  void read_run(const YAML::Node& node, Scenario& s) {
    keys(node, "run", {"max_steps", "goal_line", "controller"});
    if (present(node, "max_steps")) {
      s.max_steps = count(node["max_steps"], "run.max_steps");
    } else {
      notice("run.max_steps", "not set, using default " + std::to_string(s.max_steps));
    }
    scalar(node, "goal_line", "run", s.environment.goal_line);
    if (lines_.contains("run.goal_line")) {
      lines_["environment.goal_line"] = lines_["run.goal_line"];
    }
    if (present(node, "controller")) {
      try {
        s.controller = controller_from_string(text(node["controller"], "run.controller"));
      } catch (const ValidationError& e) {
        fail(node["controller"], "run.controller", e.what());
      }
    } else {
      notice("run.controller", "not set, using default erc");
    }
  }

  void read_environment(const YAML::Node& node, Scenario& s) {
    keys(node, "environment", {"bounds", "obstacles", "forest"});
    Environment& env = s.environment;
    if (present(node, "bounds")) {
      env.bounds = box(node["bounds"], "environment.bounds");
    } else {
      notice("environment.bounds",
             "not set, using default " + format_vec(env.bounds.min) + " to " +
                 format_vec(env.bounds.max));
    }
    if (present(node, "obstacles")) {
      const YAML::Node list = node["obstacles"];
      if (!list.IsSequence()) fail(list, "environment.obstacles", "expected a list");
      for (std::size_t k = 0; k < list.size(); ++k) {
        env.obstacles.push_back(obstacle(list[k], "environment.obstacles[" + std::to_string(k) + "]"));
      }
    }
    if (present(node, "forest")) s.forest = forest(node["forest"]);
  }

  Obstacle obstacle(const YAML::Node& node, const std::string& field) {
    keys(node, field, {"circle", "box"});
    if (!node.IsMap() || node.size() != 1) fail(node, field, "expected exactly one of circle, box");
    Obstacle result;
    if (present(node, "circle")) {
      const YAML::Node c = node["circle"];
      keys(c, field + ".circle", {"center", "radius"});
      if (!present(c, "center") || !present(c, "radius")) {
        fail(c, field + ".circle", "needs center and radius");
      }
      result = Circle{vec(c["center"], field + ".circle.center"),
                      number(c["radius"], field + ".circle.radius")};
    } else {
      result = box(node["box"], field + ".box");
    }
    try {
      validate(result);
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      fail(node, field, what.substr(what.find(": ") + 2));
    }
    return result;
  }

  ForestSpec forest(const YAML::Node& node) {
    const std::string path = "environment.forest";
    keys(node, path,
         {"region", "density", "radius_min", "radius_max", "min_gap", "lane_depth", "keepout"});
    ForestSpec f;
    if (present(node, "region")) {
      f.region = box(node["region"], path + ".region");
    } else {
      notice(path + ".region", "not set, using default " + format_vec(f.region.min) + " to " +
                                   format_vec(f.region.max));
    }
    scalar(node, "density", path, f.density);
    scalar(node, "radius_min", path, f.radius_min);
    scalar(node, "radius_max", path, f.radius_max);
    scalar(node, "min_gap", path, f.min_gap);
    scalar(node, "lane_depth", path, f.lane_depth);
    if (present(node, "radius_min")) lines_[path + ".radius"] = lines_[path + ".radius_min"];
    if (present(node, "keepout")) {
      const YAML::Node list = node["keepout"];
      if (!list.IsSequence()) fail(list, path + ".keepout", "expected a list");
      for (std::size_t k = 0; k < list.size(); ++k) {
        f.keepout.push_back(box(list[k], path + ".keepout[" + std::to_string(k) + "]"));
      }
    }
    return f;
  }

  void read_formation(const YAML::Node& node, Scenario& s) {
    keys(node, "formation", {"name", "generator", "spacing", "depth", "stagger", "offsets"});
    const bool has_generator = present(node, "generator");
    const bool has_offsets = present(node, "offsets");
    if (has_generator && has_offsets) {
      fail(node, "formation", "give either generator or offsets, not both");
    }
    std::string name;
    if (present(node, "name")) name = text(node["name"], "formation.name");

    if (has_offsets) {
      const YAML::Node list = node["offsets"];
      if (!list.IsSequence()) fail(list, "formation.offsets", "expected a list of vectors");
      for (std::size_t k = 0; k < list.size(); ++k) {
        s.config.offsets.push_back(vec(list[k], "formation.offsets[" + std::to_string(k) + "]"));
      }
      for (const char* key : {"spacing", "depth", "stagger"}) {
        if (present(node, key)) {
          fail(node[key], std::string("formation.") + key, "only valid with a generator");
        }
      }
      try {
        s.config = make_formation(name.empty() ? "custom" : name, std::move(s.config.offsets));
      } catch (const ValidationError& e) {
        rethrow(e);
      }
      return;
    }

    std::string generator = "pentagon";
    if (has_generator) {
      generator = text(node["generator"], "formation.generator");
    } else {
      notice("formation", "not set, using default generator pentagon");
    }
    double spacing = 2.0;
    double depth = 1.0;
    double stagger = 0.0;
    scalar(node, "spacing", "formation", spacing);
    if (present(node, "depth")) depth = number(node["depth"], "formation.depth");
    if (present(node, "stagger")) stagger = number(node["stagger"], "formation.stagger");
    // Generators need a usable heading; bad params are reported by check().
    Vec3 heading = s.params.u_ref;
    if (!(heading.allFinite() && heading.norm() > 0)) heading = Vec3::UnitX();
    try {
      s.config = named_formation(generator, s.params.n, spacing, heading.normalized(), depth,
                                 stagger);
    } catch (const ValidationError& e) {
      rethrow(e);
    }
    if (!name.empty()) s.config.name = name;
  }

  void read_placement(const YAML::Node& node, Scenario& s) {
    keys(node, "placement", {"positions", "random"});
    if (present(node, "positions") && present(node, "random")) {
      fail(node, "placement", "give either positions or random, not both");
    }
    if (present(node, "positions")) {
      const YAML::Node list = node["positions"];
      if (!list.IsSequence()) fail(list, "placement.positions", "expected a list of vectors");
      std::vector<Vec3> positions;
      for (std::size_t k = 0; k < list.size(); ++k) {
        positions.push_back(vec(list[k], "placement.positions[" + std::to_string(k) + "]"));
      }
      s.placement = std::move(positions);
    } else if (present(node, "random")) {
      s.placement = RandomPlacement{box(node["random"], "placement.random")};
    } else {
      const auto& region = std::get<RandomPlacement>(s.placement).region;
      notice("placement", "not set, using random placement in " + format_vec(region.min) +
                              " to " + format_vec(region.max));
    }
  }

  // Seed-independent part of resolve(): everything except the forest layout
  // and the random start positions.
  void check(const Scenario& s) {
    try {
      validated(s.params);
      if (s.config.offsets.size() != s.params.n) {
        throw ValidationError("formation: " + std::to_string(s.config.offsets.size()) +
                              " offsets for " + std::to_string(s.params.n) + " robots");
      }
      for (const auto& d : s.config.offsets) {
        if (!d.allFinite()) throw ValidationError("formation.offsets: non-finite offset");
      }
      validate(s.environment, s.params.u_ref.normalized());
      if (s.forest) validate(*s.forest);
      if (s.max_steps == 0) throw ValidationError("run.max_steps: must be > 0");
      if (const auto* positions = std::get_if<std::vector<Vec3>>(&s.placement)) {
        if (positions->size() != s.params.n) {
          throw ValidationError("placement.positions: expected " + std::to_string(s.params.n) +
                                " positions, got " + std::to_string(positions->size()));
        }
      } else {
        const Box& b = std::get<RandomPlacement>(s.placement).region;
        if (!(b.min.x() < b.max.x() && b.min.y() < b.max.y())) {
          throw ValidationError("placement.random: empty start region");
        }
      }
    } catch (const ValidationError& e) {
      rethrow(e);
    }
  }

  // Prefixes a library message "field: text" with the source and the line of
  // the closest recorded field.
  [[noreturn]] void rethrow(const ValidationError& e) const {
    const std::string what = e.what();
    std::string field = what.substr(0, what.find(':'));
    while (!field.empty()) {
      if (auto it = lines_.find(field); it != lines_.end()) {
        throw ValidationError(source_ + ":" + std::to_string(it->second) + ": " + what);
      }
      const auto cut = field.find_last_of(".[");
      field = cut == std::string::npos ? "" : field.substr(0, cut);
    }
    throw ValidationError(source_ + ": " + what);
  }

  std::string source_;
  std::map<std::string, int> lines_;
};

void emit_vec(YAML::Emitter& out, const Vec3& v) {
  out << YAML::Flow << YAML::BeginSeq << v.x() << v.y() << v.z() << YAML::EndSeq;
}

void emit_box(YAML::Emitter& out, const Box& b) {
  out << YAML::BeginMap << YAML::Key << "min" << YAML::Value;
  emit_vec(out, b.min);
  out << YAML::Key << "max" << YAML::Value;
  emit_vec(out, b.max);
  out << YAML::EndMap;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_size(std::string_view text, std::size_t& out) {
  if (text.empty()) return false;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

bool same_order(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ValidationError(source + ":" + std::to_string(e.mark.line + 1) + ": syntax error: " +
                          e.msg);
  }
  return ScenarioReader(source).read(root);
}

Scenario parse_scenario(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path.string());
}

std::string dump_scenario(const Scenario& s) {
  using namespace YAML;
  Emitter out;
  out.SetDoublePrecision(17);
  out << BeginMap;

  const SwarmParams& p = s.params;
  out << Key << "params" << Value << BeginMap;
  out << Key << "n" << Value << static_cast<unsigned long long>(p.n);
  const std::pair<const char*, double> scalars[] = {
      {"r", p.r},         {"r_s", p.r_s},     {"r_a", p.r_a},     {"v_max", p.v_max},
      {"u_max", p.u_max}, {"tau", p.tau},     {"k_f", p.k_f},     {"k_t", p.k_t},
      {"k_i", p.k_i},     {"k_o", p.k_o},     {"v_ref", p.v_ref}, {"d_ref", p.d_ref},
      {"lambda", p.lambda}};
  for (const auto& [key, value] : scalars) out << Key << key << Value << value;
  out << Key << "u_ref" << Value;
  emit_vec(out, p.u_ref);
  out << EndMap;

  out << Key << "formation" << Value << BeginMap;
  out << Key << "name" << Value << s.config.name;
  out << Key << "offsets" << Value << BeginSeq;
  for (const auto& d : s.config.offsets) emit_vec(out, d);
  out << EndSeq << EndMap;

  const Environment& env = s.environment;
  out << Key << "environment" << Value << BeginMap;
  out << Key << "bounds" << Value;
  emit_box(out, env.bounds);
  out << Key << "obstacles" << Value << BeginSeq;
  for (const auto& obstacle : env.obstacles) {
    out << BeginMap;
    if (const auto* c = std::get_if<Circle>(&obstacle)) {
      out << Key << "circle" << Value << BeginMap << Key << "center" << Value;
      emit_vec(out, c->center);
      out << Key << "radius" << Value << c->radius << EndMap;
    } else {
      out << Key << "box" << Value;
      emit_box(out, std::get<Box>(obstacle));
    }
    out << EndMap;
  }
  out << EndSeq;
  if (s.forest) {
    const ForestSpec& f = *s.forest;
    out << Key << "forest" << Value << BeginMap;
    out << Key << "region" << Value;
    emit_box(out, f.region);
    out << Key << "density" << Value << f.density;
    out << Key << "radius_min" << Value << f.radius_min;
    out << Key << "radius_max" << Value << f.radius_max;
    out << Key << "min_gap" << Value << f.min_gap;
    out << Key << "lane_depth" << Value << f.lane_depth;
    if (!f.keepout.empty()) {
      out << Key << "keepout" << Value << BeginSeq;
      for (const auto& b : f.keepout) emit_box(out, b);
      out << EndSeq;
    }
    out << EndMap;
  }
  out << EndMap;

  out << Key << "placement" << Value << BeginMap;
  if (const auto* positions = std::get_if<std::vector<Vec3>>(&s.placement)) {
    out << Key << "positions" << Value << BeginSeq;
    for (const auto& q : *positions) emit_vec(out, q);
    out << EndSeq;
  } else {
    out << Key << "random" << Value;
    emit_box(out, std::get<RandomPlacement>(s.placement).region);
  }
  out << EndMap;

  out << Key << "run" << Value << BeginMap;
  out << Key << "max_steps" << Value << static_cast<unsigned long long>(s.max_steps);
  out << Key << "goal_line" << Value << env.goal_line;
  out << Key << "controller" << Value << to_string(s.controller);
  out << EndMap;

  out << EndMap;
  return std::string(out.c_str()) + "\n";
}

void write_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << dump_scenario(scenario);
  finish(out, path);
}

void write_trajectory(const TrajectoryLog& log, std::ostream& out) {
  out << "# scenario_digest=" << log.scenario_digest << " outcome=" << to_string(log.outcome)
      << " outcome_step=" << log.outcome_step << "\n";
  out << kTrajectoryHeader << "\n";
  char buf[512];
  for (const StepRecord& step : log.steps) {
    for (std::size_t i = 0; i < step.robots.size(); ++i) {
      const RobotRecord& r = step.robots[i];
      std::snprintf(buf, sizeof buf,
                    "%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g\n",
                    step.step, i, r.position.x(), r.position.y(), r.position.z(), r.velocity.x(),
                    r.velocity.y(), r.velocity.z(), r.accel.x(), r.accel.y(), r.accel.z(),
                    static_cast<int>(r.mode), r.kappa, step.order);
      out << buf;
    }
  }
}

void write_trajectory(const TrajectoryLog& log, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_trajectory(log, out);
  finish(out, path);
}

TrajectoryLog read_trajectory(std::istream& in) {
  TrajectoryLog log;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> void {
    throw IoError("trajectory line " + std::to_string(line_no) + ": " + what);
  };

  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      for (auto field : split(std::string_view(line).substr(1), ' ')) {
        const auto eq = field.find('=');
        if (eq == std::string_view::npos) continue;
        const auto key = field.substr(0, eq);
        const auto value = std::string(field.substr(eq + 1));
        if (key == "scenario_digest") {
          log.scenario_digest = value;
        } else if (key == "outcome") {
          auto outcome = outcome_from_string(value);
          if (!outcome) fail("unknown outcome '" + value + "'");
          log.outcome = *outcome;
        } else if (key == "outcome_step") {
          if (!parse_size(value, log.outcome_step)) fail("bad outcome_step");
        }
      }
      continue;
    }
    if (!have_header) {
      if (line != kTrajectoryHeader) fail("expected header '" + std::string(kTrajectoryHeader) + "'");
      have_header = true;
      continue;
    }

    const auto cells = split(line, ',');
    if (cells.size() != 14) fail("expected 14 columns, got " + std::to_string(cells.size()));
    std::size_t step = 0;
    std::size_t id = 0;
    if (!parse_size(cells[0], step)) fail("bad step");
    if (!parse_size(cells[1], id)) fail("bad robot_id");
    double v[12];
    for (int c = 0; c < 9; ++c) {
      if (!parse_double(cells[2 + c], v[c])) fail("bad number in column " + std::to_string(3 + c));
    }
    std::size_t mode = 0;
    if (!parse_size(cells[11], mode) || mode > 1) fail("mode must be 0 or 1");
    if (!parse_double(cells[12], v[9])) fail("bad kappa");
    if (!parse_double(cells[13], v[10])) fail("bad order");

    if (id == 0) {
      if (!log.steps.empty()) {
        if (step <= log.steps.back().step) fail("rows not sorted by step");
        if (log.steps.back().robots.size() != log.steps.front().robots.size()) {
          fail("step " + std::to_string(log.steps.back().step) + " has a different robot count");
        }
      }
      StepRecord record;
      record.step = step;
      record.order = v[10];
      log.steps.push_back(std::move(record));
    } else {
      if (log.steps.empty() || step != log.steps.back().step ||
          id != log.steps.back().robots.size()) {
        fail("rows not sorted by (step, robot_id)");
      }
      if (!same_order(v[10], log.steps.back().order)) fail("order differs within a step");
    }
    RobotRecord r;
    r.position = Vec3(v[0], v[1], v[2]);
    r.velocity = Vec3(v[3], v[4], v[5]);
    r.accel = Vec3(v[6], v[7], v[8]);
    r.mode = mode == 0 ? Mode::Formation : Mode::Tailgating;
    r.kappa = v[9];
    log.steps.back().robots.push_back(r);
  }
  if (!have_header) {
    line_no = 0;
    fail("missing header");
  }
  if (log.steps.size() > 1 &&
      log.steps.back().robots.size() != log.steps.front().robots.size()) {
    fail("last step has a different robot count");
  }
  return log;
}

TrajectoryLog read_trajectory(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_trajectory(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_metrics(const MetricsRecord& record, std::ostream& out) {
  const RunMetrics& m = record.metrics;
  out << "scenario_digest=" << record.scenario_digest << "\n";
  out << "seed=" << record.seed << "\n";
  out << "controller=" << to_string(record.controller) << "\n";
  out << "outcome=" << to_string(record.outcome) << "\n";
  out << "outcome_step=" << record.outcome_step << "\n";
  out << "success=" << (m.success ? 1 : 0) << "\n";
  out << "mean_order=" << format_double(m.mean_order) << "\n";
  out << "mean_speed=" << format_double(m.mean_speed) << "\n";
  out << "travel_time=" << (m.travel_time ? format_double(*m.travel_time) : "none") << "\n";
  out << "mean_energy=" << format_double(m.mean_energy) << "\n";
  out << "max_formation_error=" << format_double(m.max_formation_error) << "\n";
  out << "min_interrobot_distance=" << format_double(m.min_interrobot_distance) << "\n";
  out << "min_obstacle_distance=" << format_double(m.min_obstacle_distance) << "\n";
}

void write_metrics(const MetricsRecord& record, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_metrics(record, out);
  finish(out, path);
}

MetricsRecord read_metrics(std::istream& in) {
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw IoError("metrics line " + std::to_string(line_no) + ": expected key=value");
    }
    values[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = values.find(key);
    if (it == values.end()) throw IoError("metrics: missing key " + key);
    return it->second;
  };
  auto real = [&](const std::string& key) {
    double x = 0;
    if (!parse_double(get(key), x)) throw IoError("metrics: bad value for " + key);
    return x;
  };
  auto whole = [&](const std::string& key) {
    std::size_t x = 0;
    if (!parse_size(get(key), x)) throw IoError("metrics: bad value for " + key);
    return x;
  };

  MetricsRecord r;
  r.scenario_digest = get("scenario_digest");
  r.seed = whole("seed");
  try {
    r.controller = controller_from_string(get("controller"));
  } catch (const ValidationError& e) {
    throw IoError(std::string("metrics: ") + e.what());
  }
  const auto outcome = outcome_from_string(get("outcome"));
  if (!outcome) throw IoError("metrics: bad value for outcome");
  r.outcome = *outcome;
  r.outcome_step = whole("outcome_step");
  r.metrics.success = whole("success") == 1;
  r.metrics.mean_order = real("mean_order");
  r.metrics.mean_speed = real("mean_speed");
  if (get("travel_time") != "none") r.metrics.travel_time = real("travel_time");
  r.metrics.mean_energy = real("mean_energy");
  r.metrics.max_formation_error = real("max_formation_error");
  r.metrics.min_interrobot_distance = real("min_interrobot_distance");
  r.metrics.min_obstacle_distance = real("min_obstacle_distance");
  return r;
}

MetricsRecord read_metrics(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_metrics(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

AggregateRow aggregate(const std::string& configuration, const std::string& method,
                       std::span<const MetricsRecord> records) {
  AggregateRow row;
  row.configuration = configuration;
  row.method = method;
  row.runs = records.size();
  double travel = 0.0;
  for (const auto& r : records) {
    row.mean_order += r.metrics.mean_order;
    row.mean_speed += r.metrics.mean_speed;
    row.mean_energy += r.metrics.mean_energy;
    if (r.metrics.success && r.metrics.travel_time) {
      ++row.successes;
      travel += *r.metrics.travel_time;
    }
  }
  if (row.runs > 0) {
    const auto k = static_cast<double>(row.runs);
    row.mean_order /= k;
    row.mean_speed /= k;
    row.mean_energy /= k;
  }
  if (row.successes > 0) row.travel_time = travel / static_cast<double>(row.successes);
  return row;
}

void write_aggregate(std::span<const AggregateRow> rows, std::ostream& out) {
  out << kAggregateHeader << "\n";
  char buf[256];
  for (const auto& row : rows) {
    char travel[32] = "";
    if (row.travel_time) std::snprintf(travel, sizeof travel, "%.4f", *row.travel_time);
    std::snprintf(buf, sizeof buf, "%s,%s,%zu/%zu,%.4f,%.4f,%s,%.4f\n", row.configuration.c_str(),
                  row.method.c_str(), row.successes, row.runs, row.mean_order, row.mean_speed,
                  travel, row.mean_energy);
    out << buf;
  }
}

void write_aggregate(std::span<const AggregateRow> rows, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_aggregate(rows, out);
  finish(out, path);
}

Controller controller_from_string(const std::string& text) {
  if (text == "erc") return Controller::Erc;
  if (text == "rigid_baseline" || text == "rigid") return Controller::RigidBaseline;
  throw ValidationError("unknown controller '" + text + "' (expected erc or rigid_baseline)");
}

}  // namespace swarm
