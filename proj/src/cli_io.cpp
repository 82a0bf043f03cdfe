#include "snake/cli_io.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace snake {

namespace {

// Reads one JSON object, remembers which keys were consumed and writes the
// normalized value of each into `out`.
class Section {
 public:
  Section(const json& j, std::string path) : path_(std::move(path)) {
    if (!j.is_object()) fail("", "expected an object");
    j_ = &j;
  }

  bool has(const std::string& key) const { return j_->contains(key); }

  const json& get(const std::string& key) {
    used_.insert(key);
    if (!j_->contains(key)) fail(key, "missing required key");
    return j_->at(key);
  }

  double number(const std::string& key) {
    const double v = as_number(get(key), key);
    out[key] = v;
    return v;
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : (out[key] = fallback, fallback);
  }

  long integer(const std::string& key, std::optional<long> fallback = std::nullopt) {
    if (!has(key) && fallback) {
      used_.insert(key);
      out[key] = *fallback;
      return *fallback;
    }
    const json& v = get(key);
    if (!v.is_number_integer() && !(v.is_number() && std::floor(v.get<double>()) == v.get<double>())) {
      fail(key, "expected an integer");
    }
    const long i = long(v.get<double>());
    out[key] = i;
    return i;
  }

  std::string choice(const std::string& key, const std::vector<std::string>& options,
                     std::optional<std::string> fallback = std::nullopt) {
    std::string v;
    if (!has(key) && fallback) {
      used_.insert(key);
      v = *fallback;
    } else {
      const json& j = get(key);
      if (!j.is_string()) fail(key, "expected a string");
      v = j.get<std::string>();
    }
    if (std::find(options.begin(), options.end(), v) == options.end()) {
      std::string list;
      for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
      fail(key, "unknown value '" + v + "' (expected one of: " + list + ")");
    }
    out[key] = v;
    return v;
  }

  std::string text(const std::string& key, std::string fallback) {
    if (!has(key)) {
      used_.insert(key);
      out[key] = fallback;
      return fallback;
    }
    const json& j = get(key);
    if (!j.is_string()) fail(key, "expected a string");
    out[key] = j.get<std::string>();
    return j.get<std::string>();
  }

  Twistd twist(const std::string& key) {
    const json& j = get(key);
    if (!j.is_array() || j.size() != 6) fail(key, "expected an array of 6 numbers");
    Vec6 c;
    for (int k = 0; k < 6; ++k) c[k] = as_number(j[k], key);
    out[key] = std::vector<double>(c.data(), c.data() + 6);
    return Twistd(c);
  }

  /// Either one scalar or one value per node.
  std::vector<double> per_node(const std::string& key, std::size_t n) {
    const json& j = get(key);
    std::vector<double> v;
    if (j.is_array()) {
      if (j.size() != n) fail(key, "expected " + std::to_string(n) + " values (one per node)");
      for (const auto& e : j) v.push_back(as_number(e, key));
      out[key] = v;
    } else {
      const double x = as_number(j, key);
      v.assign(n, x);
      out[key] = x;
    }
    return v;
  }

  Section sub(const std::string& key) { return Section(get(key), join(key)); }

  /// Default-constructs a missing subsection from `fallback`.
  const json& sub_or(const std::string& key, const json& fallback) {
    used_.insert(key);
    return j_->contains(key) ? j_->at(key) : fallback;
  }

  void finish() const {
    for (const auto& [k, v] : j_->items()) {
      (void)v;
      if (!used_.count(k)) fail(k, "unknown key");
    }
  }

  std::string join(const std::string& key) const {
    if (key.empty()) return path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(join(key) + ": " + what);
  }

  double as_number(const json& j, const std::string& key) const {
    if (j.is_string()) {
      fail(key, "expected a number in SI units, got the string \"" + j.get<std::string>() +
                    "\" (unit suffixes are not accepted)");
    }
    if (!j.is_number()) fail(key, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(key, "expected a finite number");
    return v;
  }

  json out = json::object();

 private:
  const json* j_ = nullptr;
  std::string path_;
  std::set<std::string> used_;
};

Mat3 read_mat3(Section& s, const json& j, const std::string& key) {
  Mat3 M;
  if (j.is_array() && j.size() == 3 && j[0].is_number()) {
    M = Mat3::Zero();
    for (int k = 0; k < 3; ++k) M(k, k) = s.as_number(j[k], key);
    return M;
  }
  if (!j.is_array() || j.size() != 3) s.fail(key, "expected a 3x3 matrix or its diagonal");
  for (int r = 0; r < 3; ++r) {
    if (!j[r].is_array() || j[r].size() != 3) s.fail(key, "expected a 3x3 matrix");
    for (int c = 0; c < 3; ++c) M(r, c) = s.as_number(j[r][c], key);
  }
  return M;
}

json mat_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(row);
  }
  return rows;
}

Mat6 read_mat6(Section& s, const json& j, const std::string& key) {
  Mat6 M;
  if (!j.is_array() || j.size() != 6) s.fail(key, "expected a 6x6 matrix");
  for (int r = 0; r < 6; ++r) {
    if (!j[r].is_array() || j[r].size() != 6) s.fail(key, "expected a 6x6 matrix");
    for (int c = 0; c < 6; ++c) M(r, c) = s.as_number(j[r][c], key);
  }
  return M;
}

std::string absolute_path(const std::string& p, const fs::path& base) {
  fs::path path(p);
  if (path.is_relative()) path = base / path;
  return fs::weakly_canonical(path).string();
}

// Parses and normalizes; the typed objects are built by build_setup.
json normalize(const json& raw, const fs::path& base) {
  static const json empty = json::object();
  static const json straight = {{"kind", "straight"}};
  static const json at_rest = {{"kind", "zero"}};
  static const json passive = {{"kind", "none"}};
  Section top(raw, "");
  json out;

  Section rod = top.sub("rod");
  const double L = rod.number("length");
  if (!(L > 0.0)) rod.fail("length", "must be positive");
  const long n = rod.integer("n_nodes");
  if (n < 3) rod.fail("n_nodes", "must be at least 3");
  rod.choice("reference_curve", {"straight", "origin"}, "straight");
  {
    Section mm = rod.sub("mass_model");
    const std::string kind = mm.choice("kind", {"cylinder", "uniform", "explicit"});
    if (kind == "cylinder") {
      if (!(mm.number("radius") > 0.0)) mm.fail("radius", "must be positive");
      mm.per_node("density", std::size_t(n));
    } else if (kind == "uniform") {
      mm.number("mass");
      mm.out["inertia"] = mat_json(read_mat3(mm, mm.get("inertia"), "inertia"));
    } else {
      mm.per_node("mass", std::size_t(n));
      const json& I = mm.get("inertia");
      if (!I.is_array() || I.size() != std::size_t(n)) {
        mm.fail("inertia", "expected one 3x3 matrix per node");
      }
      json list = json::array();
      for (const auto& e : I) list.push_back(mat_json(read_mat3(mm, e, "inertia")));
      mm.out["inertia"] = list;
    }
    mm.finish();
    rod.out["mass_model"] = mm.out;
  }
  rod.finish();
  out["rod"] = rod.out;

  {
    Section c(top.sub_or("conventions", empty), "conventions");
    c.choice("action_convention", {"inverse", "direct"}, "inverse");
    c.choice("mass_coefficient", {"area", "double-area"}, "area");
    c.finish();
    out["conventions"] = c.out;
  }

  {
    Section k = top.sub("stiffness");
    const std::string kind = k.choice("kind", {"diagonal", "cylinder", "matrix"});
    if (kind == "diagonal") {
      for (const char* key : {"EI1", "EI2", "GJ", "GA1", "GA2", "EA"}) k.per_node(key, std::size_t(n));
    } else if (kind == "cylinder") {
      k.number("youngs_modulus");
      k.number("shear_modulus");
      if (k.has("radius") || out["rod"]["mass_model"]["kind"] != "cylinder") {
        if (!(k.number("radius") > 0.0)) k.fail("radius", "must be positive");
      }
    } else {
      const json& K = k.get("K");
      if (K.is_array() && K.size() == 6 && K[0].is_array() && !K[0].empty() && K[0][0].is_number()) {
        k.out["K"] = mat_json(read_mat6(k, K, "K"));
      } else {
        if (!K.is_array() || K.size() != std::size_t(n)) {
          k.fail("K", "expected a 6x6 matrix or one per node");
        }
        json list = json::array();
        for (const auto& e : K) list.push_back(mat_json(read_mat6(k, e, "K")));
        k.out["K"] = list;
      }
    }
    k.finish();
    out["stiffness"] = k.out;
  }

  {
    Section ic(top.sub_or("initial", empty), "initial");
    {
      Section sh(ic.sub_or("shape", straight), "initial.shape");
      const std::string kind = sh.choice("kind", {"straight", "screw", "file"});
      if (kind == "screw") sh.twist("twist");
      if (kind == "file") sh.out["path"] = absolute_path(sh.text("path", ""), base);
      sh.finish();
      ic.out["shape"] = sh.out;
    }
    {
      Section ve(ic.sub_or("velocity", at_rest), "initial.velocity");
      const std::string kind = ve.choice("kind", {"zero", "uniform", "cosine", "file"});
      if (kind == "uniform" || kind == "cosine") ve.twist("twist");
      if (kind == "file") ve.out["path"] = absolute_path(ve.text("path", ""), base);
      ve.finish();
      ic.out["velocity"] = ve.out;
    }
    ic.finish();
    out["initial"] = ic.out;
  }

  {
    Section so = top.sub("solver");
    if (!so.has("dt") || (so.get("dt").is_string() && so.get("dt") == "auto")) {
      so.out["dt"] = "auto";
    } else if (!(so.number("dt") > 0.0)) {
      so.fail("dt", "must be positive or \"auto\"");
    }
    const double cfl = so.number("cfl_number", 0.5);
    if (!(cfl > 0.0 && cfl <= 1.0)) so.fail("cfl_number", "must lie in (0, 1]");
    if (!(so.number("t_end") >= 0.0)) so.fail("t_end", "must be non-negative");
    so.choice("scheme", {"rk4", "midpoint"}, "rk4");
    so.choice("wrench_form", {"conservative", "literal"}, "conservative");
    so.finish();
    out["solver"] = so.out;
  }

  {
    Section co(top.sub_or("control", passive), "control");
    const std::string kind = co.choice("kind", {"none", "cpg"});
    if (kind == "cpg") {
      if (!(co.number("amplitude") >= 0.0)) co.fail("amplitude", "must be non-negative");
      co.number("omega");
      co.number("wavenumber");
      const long c = co.integer("component", 0);
      if (c < 0 || c > 5) co.fail("component", "must be in 0..5");
      co.number("phase", 0.0);
    }
    co.finish();
    out["control"] = co.out;
  }

  {
    Section o(top.sub_or("output", empty), "output");
    o.text("directory", "");
    if (o.integer("stride", 1) < 1) o.fail("stride", "must be at least 1");
    if (o.has("formats")) {
      const json& f = o.get("formats");
      if (!f.is_array()) o.fail("formats", "expected an array");
      for (const auto& e : f) {
        if (e != "csv") o.fail("formats", "only \"csv\" is supported");
      }
    }
    o.out["formats"] = json::array({"csv"});
    o.finish();
    out["output"] = o.out;
  }

  top.finish();
  return out;
}

Twistd twist_of(const json& j) {
  Vec6 c;
  for (int k = 0; k < 6; ++k) c[k] = j[k].get<double>();
  return Twistd(c);
}

Mat3 mat3_of(const json& j) {
  Mat3 M;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) M(r, c) = j[r][c].get<double>();
  return M;
}

Mat6 mat6_of(const json& j) {
  Mat6 M;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) M(r, c) = j[r][c].get<double>();
  return M;
}

std::vector<double> values_of(const json& j, std::size_t n) {
  if (j.is_array()) return j.get<std::vector<double>>();
  return std::vector<double>(n, j.get<double>());
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw ConfigError(what + ": cannot parse '" + s + "'");
  return v;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << content;
}

}  // namespace

Scenario parse_scenario(const json& raw, const fs::path& base_dir, std::string name) {
  Scenario s;
  s.config = normalize(raw, base_dir);
  s.name = std::move(name);
  build_setup(s);
  return s;
}

Scenario load_scenario(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open scenario file " + path.string());
  json raw;
  try {
    raw = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_scenario(raw, fs::absolute(path).parent_path(), path.stem().string());
}

json serialize(const Scenario& s) { return s.config; }

Setup build_setup(const Scenario& s) {
  const json& c = s.config;
  try {
    const json& rod = c["rod"];
    const Grid grid(rod["n_nodes"].get<std::size_t>(), rod["length"].get<double>());
    const std::size_t n = grid.size();
    const ReferenceCurve curve =
        rod["reference_curve"] == "straight" ? ReferenceCurve::Straight : ReferenceCurve::Origin;
    const MassCoefficient coef = c["conventions"]["mass_coefficient"] == "double-area"
                                     ? MassCoefficient::DoubleArea
                                     : MassCoefficient::Area;

    const json& mm = rod["mass_model"];
    RodProperties props;
    if (mm["kind"] == "cylinder") {
      props = cylinder_properties(mm["radius"].get<double>(), values_of(mm["density"], n), grid,
                                  coef, curve);
    } else if (mm["kind"] == "uniform") {
      props = uniform_properties(mm["mass"].get<double>(), mat3_of(mm["inertia"]), curve, grid);
    } else {
      props.mass = values_of(mm["mass"], n);
      for (const auto& I : mm["inertia"]) props.inertia.push_back(mat3_of(I));
      props.p0 = reference_curve(curve, grid);
      props.validate(grid);
    }

    const json& k = c["stiffness"];
    std::optional<StiffnessLaw> law;
    if (k["kind"] == "diagonal") {
      std::vector<SectionStiffness> per(n);
      const auto EI1 = values_of(k["EI1"], n), EI2 = values_of(k["EI2"], n),
                 GJ = values_of(k["GJ"], n), GA1 = values_of(k["GA1"], n),
                 GA2 = values_of(k["GA2"], n), EA = values_of(k["EA"], n);
      for (std::size_t i = 0; i < n; ++i) per[i] = {EI1[i], EI2[i], GJ[i], GA1[i], GA2[i], EA[i]};
      law = StiffnessLaw::diagonal(per, props, grid);
    } else if (k["kind"] == "cylinder") {
      const double R = k.contains("radius") ? k["radius"].get<double>() : mm["radius"].get<double>();
      law = StiffnessLaw::uniform(
          cylinder_stiffness(k["youngs_modulus"].get<double>(), k["shear_modulus"].get<double>(), R),
          props, grid);
    } else {
      std::vector<Mat6> K;
      if (k["K"].size() == 6 && k["K"][0][0].is_number()) {
        K.assign(n, mat6_of(k["K"]));
      } else {
        for (const auto& e : k["K"]) K.push_back(mat6_of(e));
      }
      law = StiffnessLaw::from_section_matrices(K, props, grid);
    }

    ControlLaw control;
    if (c["control"]["kind"] == "cpg") {
      const json& p = c["control"];
      CpgParams cp;
      cp.amplitude = p["amplitude"].get<double>();
      cp.omega = p["omega"].get<double>();
      cp.wavenumber = p["wavenumber"].get<double>();
      cp.component = p["component"].get<int>();
      cp.phase = p["phase"].get<double>();
      control = cpg_law(cp, grid);
    }

    SolverConfig solver;
    const json& so = c["solver"];
    if (so["dt"].is_number()) solver.dt = so["dt"].get<double>();
    solver.cfl_number = so["cfl_number"].get<double>();
    solver.t_end = so["t_end"].get<double>();
    solver.scheme = so["scheme"] == "midpoint" ? Scheme::Midpoint : Scheme::RK4;
    solver.output_stride = c["output"]["stride"].get<std::size_t>();
    solver.validate();
    const WrenchForm form =
        so["wrench_form"] == "literal" ? WrenchForm::Literal : WrenchForm::Conservative;

    PoseField g0(n);
    const json& shape = c["initial"]["shape"];
    if (shape["kind"] == "screw") {
      const Twistd Xi = twist_of(shape["twist"]);
      for (std::size_t i = 0; i < n; ++i) {
        g0[i] = compose(exp_se3(grid.z(i) * Xi), Posed::Translation(-props.p0[i]));
      }
    } else if (shape["kind"] == "file") {
      const auto recs = read_snapshots(shape["path"].get<std::string>());
      if (recs.empty() || recs.front().nodes.size() != n) {
        throw ConfigError("initial.shape.path: snapshot does not have " + std::to_string(n) +
                          " nodes");
      }
      for (std::size_t i = 0; i < n; ++i) {
        const NodeRecord& r = recs.front().nodes[i];
        g0[i] = Posed(r.q.normalized().toRotationMatrix(), r.u);
      }
    }

    TwistField W0(n);
    const json& vel = c["initial"]["velocity"];
    if (vel["kind"] == "uniform") {
      W0.assign(n, twist_of(vel["twist"]));
    } else if (vel["kind"] == "cosine") {
      const Twistd V = twist_of(vel["twist"]);
      for (std::size_t i = 0; i < n; ++i) {
        W0[i] = std::cos(std::numbers::pi * grid.z(i) / grid.length()) * V;
      }
    } else if (vel["kind"] == "file") {
      const auto recs = read_snapshots(vel["path"].get<std::string>());
      if (recs.empty() || recs.front().nodes.size() != n) {
        throw ConfigError("initial.velocity.path: snapshot does not have " + std::to_string(n) +
                          " nodes");
      }
      for (std::size_t i = 0; i < n; ++i) W0[i] = recs.front().nodes[i].W;
    }

    const ActionConvention conv = c["conventions"]["action_convention"] == "direct"
                                      ? ActionConvention::Direct
                                      : ActionConvention::Inverse;
    return Setup{grid, props, *law, control, form, solver, conv, g0, W0};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const MeshTooCoarse& e) {
    throw ConfigError(std::string("initial.shape: ") + e.what());
  }
}

fs::path output_root() {
  const char* env = std::getenv(kOutputRootEnv);
  return (env && *env) ? fs::path(env) : fs::path("runs");
}

fs::path run_directory(const Scenario& s) {
  const std::string dir = s.config["output"]["directory"].get<std::string>();
  const fs::path p(dir.empty() ? s.name : dir);
  return p.is_absolute() ? p : output_root() / p;
}

// ---------------------------------------------------------------------------
// Snapshots
// ---------------------------------------------------------------------------

SnapshotRecord make_snapshot(const SimState& s, const Setup& setup) {
  const std::vector<Vec3> p = apply_configuration(s.g, setup.props, setup.convention);
  SnapshotRecord rec;
  rec.t = s.t;
  for (std::size_t i = 0; i < setup.grid.size(); ++i) {
    NodeRecord r;
    r.z = setup.grid.z(i);
    r.q = Eigen::Quaterniond(s.g[i].rotation()).normalized();
    if (r.q.w() < 0.0) r.q.coeffs() = -r.q.coeffs();
    r.u = s.g[i].translation();
    r.p = p[i];
    r.W = s.W[i];
    r.xi = s.xi[i];
    rec.nodes.push_back(r);
  }
  return rec;
}

const std::string& snapshot_header() {
  static const std::string h =
      "t,node,z,qw,qx,qy,qz,ux,uy,uz,px,py,pz,W0,W1,W2,W3,W4,W5,xi0,xi1,xi2,xi3,xi4,xi5";
  return h;
}

std::string snapshot_rows(const SnapshotRecord& rec) {
  std::string out;
  for (std::size_t i = 0; i < rec.nodes.size(); ++i) {
    const NodeRecord& r = rec.nodes[i];
    std::vector<double> v = {rec.t, double(i), r.z, r.q.w(), r.q.x(), r.q.y(), r.q.z()};
    for (int k = 0; k < 3; ++k) v.push_back(r.u[k]);
    for (int k = 0; k < 3; ++k) v.push_back(r.p[k]);
    for (int k = 0; k < 6; ++k) v.push_back(r.W[k]);
    for (int k = 0; k < 6; ++k) v.push_back(r.xi[k]);
    for (std::size_t k = 0; k < v.size(); ++k) {
      out += (k == 1) ? std::to_string(i) : fmt(v[k]);
      out += k + 1 < v.size() ? ',' : '\n';
    }
  }
  return out;
}

std::vector<SnapshotRecord> read_snapshots(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open snapshot file " + path.string());
  std::string line;
  if (!std::getline(f, line) || line != snapshot_header()) {
    throw ConfigError(path.string() + ": not a snapshot file (unexpected header)");
  }
  std::vector<SnapshotRecord> out;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (cols.size() != 25) throw ConfigError(where + ": expected 25 columns");
    std::vector<double> v;
    for (const auto& c : cols) v.push_back(parse_double(c, where));
    const std::size_t node = std::size_t(v[1]);
    if (node == 0) out.push_back(SnapshotRecord{v[0], {}});
    if (out.empty() || out.back().nodes.size() != node || out.back().t != v[0]) {
      throw ConfigError(where + ": nodes out of order");
    }
    NodeRecord r;
    r.z = v[2];
    r.q = Eigen::Quaterniond(v[3], v[4], v[5], v[6]);
    r.u = Vec3(v[7], v[8], v[9]);
    r.p = Vec3(v[10], v[11], v[12]);
    for (int k = 0; k < 6; ++k) {
      r.W[k] = v[13 + k];
      r.xi[k] = v[19 + k];
    }
    out.back().nodes.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

RunSummary run_scenario(const Scenario& s, const fs::path& dir) {
  const Setup setup = build_setup(s);
  const RodSystem sys(setup.grid, setup.props, setup.law, setup.control, setup.form);
  fs::create_directories(dir);

  json manifest;
  manifest["version"] = kVersion;
  manifest["scenario"] = s.config;
  manifest["conventions"] = {
      {"twist_order", "angular, linear"},
      {"action_convention", s.config["conventions"]["action_convention"]},
      {"mass_coefficient", s.config["conventions"]["mass_coefficient"]},
      {"wrench_form", s.config["solver"]["wrench_form"]},
      {"quaternion", "w, x, y, z with w >= 0"},
  };
  const double dt = resolve_dt(setup.solver, sys);
  manifest["resolved_dt"] = dt;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");

  std::ofstream snaps(dir / "snapshots.csv", std::ios::binary);
  std::ofstream energy(dir / "energy.csv", std::ios::binary);
  if (!snaps || !energy) throw ConfigError("cannot write into " + dir.string());
  snaps << snapshot_header() << '\n';
  energy << "t,kinetic,elastic,total,control_work,P0,P1,P2,P3,P4,P5\n";

  RunSummary summary;
  const std::size_t mid = setup.grid.size() / 2;
  Vec3 mid0 = Vec3::Zero(), forward = Vec3::Zero();
  double displacement_sum = 0.0;

  const Observer observe = [&](std::size_t k, const SimState& st) {
    check_invariants(st, setup.grid);
    const SnapshotRecord rec = make_snapshot(st, setup);
    snaps << snapshot_rows(rec);
    const double ke = kinetic_energy(st.W, setup.props, setup.grid);
    const double pe = elastic_energy(st.xi, setup.law, setup.props, setup.grid);
    const Twistd P = spatial_momentum(st, setup.props, setup.grid);
    energy << fmt(st.t) << ',' << fmt(ke) << ',' << fmt(pe) << ',' << fmt(ke + pe) << ','
           << fmt(st.control_work);
    for (int c = 0; c < 6; ++c) energy << ',' << fmt(P[c]);
    energy << '\n';

    if (k == 0) {
      mid0 = rec.nodes[mid].p;
      const Vec3 axis = rec.nodes.front().p - rec.nodes.back().p;
      if (axis.norm() > 0.0) forward = axis.normalized();
    }
    displacement_sum += (rec.nodes[mid].p - mid0).dot(forward);
    for (const auto& x : st.xi) summary.max_abs_xi = std::max(summary.max_abs_xi, x.coeffs().cwiseAbs().maxCoeff());
    summary.final_energy = ke + pe;
    summary.steps = k;
    ++summary.outputs;
  };

  SolverConfig cfg = setup.solver;
  cfg.dt = dt;
  simulate(initial_state(setup.g0, setup.W0, setup.grid), sys, cfg, observe);
  summary.mean_forward_displacement = displacement_sum / double(summary.outputs);
  if (!snaps || !energy) throw ConfigError("write error in " + dir.string());
  return summary;
}

SweepAxis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--axis '" + text + "': expected key=start:stop:n");
  }
  const auto parts = split(text.substr(eq + 1), ':');
  if (parts.size() != 3) throw ConfigError("--axis '" + text + "': expected key=start:stop:n");
  SweepAxis a;
  a.key = text.substr(0, eq);
  a.start = parse_double(parts[0], "--axis start");
  a.stop = parse_double(parts[1], "--axis stop");
  const double n = parse_double(parts[2], "--axis n");
  if (!(n >= 1.0) || std::floor(n) != n) throw ConfigError("--axis '" + text + "': n must be a positive integer");
  a.count = std::size_t(n);
  return a;
}

std::vector<RunSummary> run_sweep(const Scenario& s, const std::vector<SweepAxis>& axes,
                                  const fs::path& dir) {
  if (axes.empty() || axes.size() > 2) throw ConfigError("sweep takes one or two --axis options");
  for (const auto& a : axes) {
    const json::json_pointer ptr("/" + [&] {
      std::string k = a.key;
      std::replace(k.begin(), k.end(), '.', '/');
      return k;
    }());
    if (!s.config.contains(ptr)) throw ConfigError("--axis: unknown key '" + a.key + "'");
  }
  const auto value = [](const SweepAxis& a, std::size_t i) {
    return a.count == 1 ? a.start : a.start + (a.stop - a.start) * double(i) / double(a.count - 1);
  };

  fs::create_directories(dir);
  std::string table = "point";
  for (const auto& a : axes) table += "," + a.key;
  table += ",final_energy,max_abs_xi,mean_forward_displacement\n";

  std::vector<RunSummary> out;
  const std::size_t n0 = axes[0].count, n1 = axes.size() > 1 ? axes[1].count : 1;
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t j = 0; j < n1; ++j) {
      json cfg = s.config;
      std::vector<double> vals;
      for (std::size_t a = 0; a < axes.size(); ++a) {
        std::string k = axes[a].key;
        std::replace(k.begin(), k.end(), '.', '/');
        const double v = value(axes[a], a == 0 ? i : j);
        const json::json_pointer ptr("/" + k);
        cfg[ptr] = (cfg[ptr].is_number_integer() && std::floor(v) == v) ? json(long(v)) : json(v);
        vals.push_back(v);
      }
      const std::size_t point = i * n1 + j;
      char name[64];
      std::snprintf(name, sizeof name, "point_%04zu", point);
      const Scenario ps = parse_scenario(cfg, fs::current_path(), name);
      const RunSummary r = run_scenario(ps, dir / name);
      out.push_back(r);
      table += std::to_string(point);
      for (double v : vals) table += "," + fmt(v);
      table += "," + fmt(r.final_energy) + "," + fmt(r.max_abs_xi) + "," +
               fmt(r.mean_forward_displacement) + "\n";
    }
  }
  write_file(dir / "summary.csv", table);
  return out;
}

std::vector<fs::path> export_plot_data(const fs::path& run_dir) {
  const fs::path energy_csv = run_dir / "energy.csv";
  std::ifstream ef(energy_csv);
  if (!ef) throw ConfigError("cannot open " + energy_csv.string());
  const fs::path out_dir = run_dir / "export";
  fs::create_directories(out_dir);
  std::vector<fs::path> written;

  std::string line, text = "# columns: t kinetic elastic total control_work\n";
  std::getline(ef, line);
  while (std::getline(ef, line)) {
    if (line.empty()) continue;
    const auto c = split(line, ',');
    if (c.size() < 5) throw ConfigError(energy_csv.string() + ": malformed row");
    text += c[0] + " " + c[1] + " " + c[2] + " " + c[3] + " " + c[4] + "\n";
  }
  write_file(out_dir / "energy.dat", text);
  written.push_back(out_dir / "energy.dat");

  const auto recs = read_snapshots(run_dir / "snapshots.csv");
  std::vector<std::size_t> picks;
  if (!recs.empty()) {
    const std::size_t last = recs.size() - 1;
    for (std::size_t q = 0; q <= 4; ++q) picks.push_back(last * q / 4);
    picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
  }
  for (std::size_t k = 0; k < picks.size(); ++k) {
    const SnapshotRecord& r = recs[picks[k]];
    std::string t = "# t = " + fmt(r.t) + "\n# columns: node z px py pz\n";
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const NodeRecord& n = r.nodes[i];
      t += std::to_string(i) + " " + fmt(n.z) + " " + fmt(n.p.x()) + " " + fmt(n.p.y()) + " " +
           fmt(n.p.z()) + "\n";
    }
    char name[64];
    std::snprintf(name, sizeof name, "centerline_%zu.dat", k);
    write_file(out_dir / name, t);
    written.push_back(out_dir / name);
  }
  return written;
}

}  // namespace snake
