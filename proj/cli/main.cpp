// Command line front end. All numerical work goes through the shared C
// library; this file only parses configuration, shapes the output, and
// maps statuses onto process exit codes (0 ok, 2 validation, 3 numerical,
// 4 domain). Structured results are JSON with a fixed 17 significant digit
// float format so identical runs produce byte-identical artifacts; time
// series can be emitted as CSV instead. Files are written to a temporary
// sibling and renamed into place.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "r4nbody.h"

using nlohmann::json;

namespace {

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void die(int exit_code, const std::string& message) {
  throw CliError{exit_code, message};
}

// convert a library status into a thrown CliError carrying its exit class
void check(r4nb_status st, const std::string& what) {
  if (st == R4NB_OK) return;
  die(r4nb_status_exit_class(st),
      what + ": " + r4nb_status_name(st) + ": " + r4nb_last_error());
}

/* ------------------------------------------------------------ output tree */

std::string fmt_num(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_int(long long v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld", v);
  return buf;
}

std::string jesc(const std::string& s) {
  std::string r = "\"";
  for (char c : s) {
    switch (c) {
      case '"': r += "\\\""; break;
      case '\\': r += "\\\\"; break;
      case '\n': r += "\\n"; break;
      case '\r': r += "\\r"; break;
      case '\t': r += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          r += buf;
        } else {
          r += c;
        }
    }
  }
  return r + "\"";
}

// Minimal ordered JSON value for output. Insertion order is preserved and
// every float goes through fmt_num, which keeps artifacts reproducible.
class JVal {
 public:
  JVal() : kind_(Kind::Null) {}
  JVal(double v) : kind_(Kind::Num), num_(v) {}
  JVal(int v) : kind_(Kind::Int), int_(v) {}
  JVal(long v) : kind_(Kind::Int), int_(v) {}
  JVal(long long v) : kind_(Kind::Int), int_(v) {}
  JVal(size_t v) : kind_(Kind::Int), int_(static_cast<long long>(v)) {}
  JVal(bool v) : kind_(Kind::Bool), bool_(v) {}
  JVal(const char* v) : kind_(Kind::Str), str_(v) {}
  JVal(std::string v) : kind_(Kind::Str), str_(std::move(v)) {}

  static JVal obj() {
    JVal v;
    v.kind_ = Kind::Obj;
    return v;
  }
  static JVal arr() {
    JVal v;
    v.kind_ = Kind::Arr;
    return v;
  }

  JVal& set(const std::string& key, JVal v) {
    fields_.emplace_back(key, std::move(v));
    return *this;
  }
  JVal& push(JVal v) {
    items_.push_back(std::move(v));
    return *this;
  }

  std::string dump() const {
    std::string out;
    write(out, 0);
    out += '\n';
    return out;
  }

 private:
  enum class Kind { Null, Num, Int, Bool, Str, Obj, Arr };

  bool scalar() const { return kind_ != Kind::Obj && kind_ != Kind::Arr; }

  void write(std::string& out, int level) const {
    const std::string pad(2 * static_cast<size_t>(level), ' ');
    const std::string pad1(2 * static_cast<size_t>(level + 1), ' ');
    switch (kind_) {
      case Kind::Null: out += "null"; return;
      case Kind::Num: out += fmt_num(num_); return;
      case Kind::Int: out += fmt_int(int_); return;
      case Kind::Bool: out += bool_ ? "true" : "false"; return;
      case Kind::Str: out += jesc(str_); return;
      case Kind::Obj: {
        if (fields_.empty()) {
          out += "{}";
          return;
        }
        out += "{\n";
        for (size_t i = 0; i < fields_.size(); ++i) {
          out += pad1 + jesc(fields_[i].first) + ": ";
          fields_[i].second.write(out, level + 1);
          out += i + 1 < fields_.size() ? ",\n" : "\n";
        }
        out += pad + "}";
        return;
      }
      case Kind::Arr: {
        if (items_.empty()) {
          out += "[]";
          return;
        }
        bool flat = true;
        for (const JVal& v : items_) flat = flat && v.scalar();
        if (flat) {
          out += "[";
          for (size_t i = 0; i < items_.size(); ++i) {
            items_[i].write(out, level);
            if (i + 1 < items_.size()) out += ", ";
          }
          out += "]";
          return;
        }
        out += "[\n";
        for (size_t i = 0; i < items_.size(); ++i) {
          out += pad1;
          items_[i].write(out, level + 1);
          out += i + 1 < items_.size() ? ",\n" : "\n";
        }
        out += pad + "]";
        return;
      }
    }
  }

  Kind kind_;
  double num_ = 0.0;
  long long int_ = 0;
  bool bool_ = false;
  std::string str_;
  std::vector<std::pair<std::string, JVal>> fields_;
  std::vector<JVal> items_;
};

JVal vec4_json(const double* v) {
  JVal a = JVal::arr();
  for (int c = 0; c < 4; ++c) a.push(v[c]);
  return a;
}

/* --------------------------------------------------------- artifact output */

void write_artifact(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << content;
    f.flush();
    if (!f) die(2, "cannot write '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    die(2, "cannot move '" + tmp + "' to '" + path + "'");
}

/* ------------------------------------------------------ config validation */

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!j.is_object()) die(2, where + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) die(2, "unknown key '" + item.key() + "' in " + where);
  }
}

double as_num(const json& j, const std::string& where) {
  if (!j.is_number()) die(2, where + " must be a number");
  return j.get<double>();
}

long as_long(const json& j, const std::string& where) {
  if (!j.is_number_integer()) die(2, where + " must be an integer");
  return j.get<long>();
}

int as_int(const json& j, const std::string& where) {
  return static_cast<int>(as_long(j, where));
}

bool as_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) die(2, where + " must be a boolean");
  return j.get<bool>();
}

std::string as_str(const json& j, const std::string& where) {
  if (!j.is_string()) die(2, where + " must be a string");
  return j.get<std::string>();
}

std::vector<double> as_num_list(const json& j, const std::string& where) {
  if (!j.is_array()) die(2, where + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(as_num(v, where + " entry"));
  return out;
}

// a point or momentum: exactly four numbers
void as_vec4(const json& j, const std::string& where, double out[4]) {
  const std::vector<double> v = as_num_list(j, where);
  if (v.size() != 4) die(2, where + " must hold exactly 4 numbers");
  for (int c = 0; c < 4; ++c) out[c] = v[c];
}

std::vector<double> as_vec4_list(const json& j, const std::string& where) {
  if (!j.is_array()) die(2, where + " must be an array of 4-vectors");
  std::vector<double> flat;
  for (size_t i = 0; i < j.size(); ++i) {
    double v[4];
    as_vec4(j[i], where + "[" + std::to_string(i) + "]", v);
    flat.insert(flat.end(), v, v + 4);
  }
  return flat;
}

/* -------------------------------------------------- effective configuration */

struct PotentialSpec {
  std::string kind = "newtonian";
  double k = 1.0;
  double alpha = 1.0;
};

struct IntegratorSpec {
  double dt = 1e-3;
  long steps = 1000;
  long output_every = 1;
  double collision_threshold = 1e-6;
};

struct OutputSpec {
  std::string path;
  std::string format;  // empty means the command default
};

// RAII over the C handles used here
struct Pot {
  r4nb_potential* p = nullptr;
  explicit Pot(const PotentialSpec& ps) {
    check(r4nb_potential_create(ps.kind.c_str(), ps.k, ps.alpha, &p), "potential");
  }
  ~Pot() { r4nb_potential_destroy(p); }
  operator r4nb_potential*() const { return p; }
};

struct State {
  r4nb_state* s = nullptr;
  State() = default;
  ~State() { r4nb_state_destroy(s); }
  operator r4nb_state*() const { return s; }
};

// Everything a command needs: the parsed config file (if any) plus the
// command line values and whether each was given explicitly.
struct Ctx {
  json cfg;  // null when no --config
  bool has_cfg = false;

  PotentialSpec pot_flags;
  bool kind_set = false, k_set = false, alpha_set = false;

  IntegratorSpec integ_flags;
  bool dt_set = false, steps_set = false, every_set = false, coll_set = false;

  std::string out_path;
  bool out_set = false;
  std::string format;
  bool format_set = false;

  double tol = -1.0;
  bool tol_set = false;

  const json* params() const {
    if (!has_cfg || !cfg.contains("params")) return nullptr;
    return &cfg.at("params");
  }
};

void load_config(Ctx& ctx, const std::string& path, const std::string& problem) {
  std::ifstream f(path);
  if (!f) die(2, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    ctx.cfg = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    die(2, std::string("config is not valid JSON: ") + e.what());
  }
  ctx.has_cfg = true;
  check_keys(ctx.cfg, {"potential", "problem", "params", "integrator", "output"}, "config");
  if (ctx.cfg.contains("problem")) {
    const std::string p = as_str(ctx.cfg.at("problem"), "config.problem");
    if (p != problem)
      die(2, "config.problem is '" + p + "' but this command expects '" + problem + "'");
  }
  if (ctx.cfg.contains("potential"))
    check_keys(ctx.cfg.at("potential"), {"kind", "k", "alpha"}, "config.potential");
  if (ctx.cfg.contains("integrator"))
    check_keys(ctx.cfg.at("integrator"), {"dt", "steps", "output_every", "collision_threshold"},
               "config.integrator");
  if (ctx.cfg.contains("output"))
    check_keys(ctx.cfg.at("output"), {"path", "format"}, "config.output");
}

PotentialSpec eff_potential(const Ctx& ctx) {
  PotentialSpec ps;
  if (ctx.has_cfg && ctx.cfg.contains("potential")) {
    const json& j = ctx.cfg.at("potential");
    if (j.contains("kind")) ps.kind = as_str(j.at("kind"), "config.potential.kind");
    if (j.contains("k")) ps.k = as_num(j.at("k"), "config.potential.k");
    if (j.contains("alpha")) ps.alpha = as_num(j.at("alpha"), "config.potential.alpha");
  }
  if (ctx.kind_set) ps.kind = ctx.pot_flags.kind;
  if (ctx.k_set) ps.k = ctx.pot_flags.k;
  if (ctx.alpha_set) ps.alpha = ctx.pot_flags.alpha;
  return ps;
}

IntegratorSpec eff_integrator(const Ctx& ctx) {
  IntegratorSpec is;
  if (ctx.has_cfg && ctx.cfg.contains("integrator")) {
    const json& j = ctx.cfg.at("integrator");
    if (j.contains("dt")) is.dt = as_num(j.at("dt"), "config.integrator.dt");
    if (j.contains("steps")) is.steps = as_long(j.at("steps"), "config.integrator.steps");
    if (j.contains("output_every"))
      is.output_every = as_long(j.at("output_every"), "config.integrator.output_every");
    if (j.contains("collision_threshold"))
      is.collision_threshold =
          as_num(j.at("collision_threshold"), "config.integrator.collision_threshold");
  }
  if (ctx.dt_set) is.dt = ctx.integ_flags.dt;
  if (ctx.steps_set) is.steps = ctx.integ_flags.steps;
  if (ctx.every_set) is.output_every = ctx.integ_flags.output_every;
  if (ctx.coll_set) is.collision_threshold = ctx.integ_flags.collision_threshold;
  return is;
}

OutputSpec eff_output(const Ctx& ctx, const char* default_format) {
  OutputSpec os;
  if (ctx.has_cfg && ctx.cfg.contains("output")) {
    const json& j = ctx.cfg.at("output");
    if (j.contains("path")) os.path = as_str(j.at("path"), "config.output.path");
    if (j.contains("format")) os.format = as_str(j.at("format"), "config.output.format");
  }
  if (ctx.out_set) os.path = ctx.out_path;
  if (ctx.format_set) os.format = ctx.format;
  if (os.format.empty()) os.format = default_format;
  if (os.format != "json" && os.format != "csv")
    die(2, "output format must be 'json' or 'csv'");
  return os;
}

r4nb_integrate_opts to_opts(const IntegratorSpec& is) {
  r4nb_integrate_opts o;
  r4nb_integrate_opts_init(&o);
  o.dt = is.dt;
  o.steps = is.steps;
  o.output_every = is.output_every;
  o.collision_threshold = is.collision_threshold;
  return o;
}

JVal potential_json(const PotentialSpec& ps) {
  JVal o = JVal::obj();
  o.set("kind", ps.kind).set("k", ps.k).set("alpha", ps.alpha);
  return o;
}

std::vector<double> parse_grid(const std::string& text, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      const double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      die(2, where + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) die(2, where + " must not be empty");
  return out;
}

/* -------------------------------------------------------- reduced 3b state */

const char* const kStateKeys[14] = {"r1",   "r2",   "s1",   "s2",   "phi1",   "phi2",
                                    "p_r1", "p_r2", "p_s1", "p_s2", "p_phi1", "p_phi2",
                                    "mu1",  "mu2"};

r4nb_reduced3b parse_state(const json& j, const std::string& where) {
  check_keys(j, {"r1", "r2", "s1", "s2", "phi1", "phi2", "p_r1", "p_r2", "p_s1", "p_s2",
                 "p_phi1", "p_phi2", "mu1", "mu2"},
             where);
  double v[14];
  for (int i = 0; i < 14; ++i) {
    if (!j.contains(kStateKeys[i]))
      die(2, where + " is missing key '" + std::string(kStateKeys[i]) + "'");
    v[i] = as_num(j.at(kStateKeys[i]), where + "." + kStateKeys[i]);
  }
  return {v[0], v[1], v[2],  v[3],  v[4],  v[5],  v[6],
          v[7], v[8], v[9],  v[10], v[11], v[12], v[13]};
}

JVal state_json(const r4nb_reduced3b& s) {
  const double v[14] = {s.r1,   s.r2,   s.s1,   s.s2,   s.phi1,   s.phi2,  s.p_r1,
                        s.p_r2, s.p_s1, s.p_s2, s.p_phi1, s.p_phi2, s.mu1, s.mu2};
  JVal o = JVal::obj();
  for (int i = 0; i < 14; ++i) o.set(kStateKeys[i], v[i]);
  return o;
}

void parse_threebody_masses(const json& params, const std::string& where, double out[3]) {
  if (!params.contains("masses")) die(2, where + ".masses is required");
  const std::vector<double> m = as_num_list(params.at("masses"), where + ".masses");
  if (m.size() != 3) die(2, where + ".masses must hold exactly 3 entries");
  for (int i = 0; i < 3; ++i) {
    if (!(m[i] > 0.0) || !std::isfinite(m[i]))
      die(2, where + ".masses must be positive and finite");
    out[i] = m[i];
  }
}

/* ---------------------------------------------------------------- commands */

int run_central(const Ctx& ctx, const std::string& q_flag, const std::string& p_flag) {
  const PotentialSpec ps = eff_potential(ctx);
  const IntegratorSpec is = eff_integrator(ctx);
  const OutputSpec os = eff_output(ctx, "json");

  double q[4] = {1.0, 0.0, 0.0, 0.0};
  double p[4] = {0.0, 0.0, 0.0, 0.0};
  bool have_q = false, have_p = false;
  if (const json* params = ctx.params()) {
    check_keys(*params, {"q", "p"}, "config.params");
    if (params->contains("q")) {
      as_vec4(params->at("q"), "config.params.q", q);
      have_q = true;
    }
    if (params->contains("p")) {
      as_vec4(params->at("p"), "config.params.p", p);
      have_p = true;
    }
  }
  if (!q_flag.empty()) {
    const std::vector<double> v = parse_grid(q_flag, "--q");
    if (v.size() != 4) die(2, "--q must hold exactly 4 numbers");
    for (int c = 0; c < 4; ++c) q[c] = v[c];
    have_q = true;
  }
  if (!p_flag.empty()) {
    const std::vector<double> v = parse_grid(p_flag, "--p");
    if (v.size() != 4) die(2, "--p must hold exactly 4 numbers");
    for (int c = 0; c < 4; ++c) p[c] = v[c];
    have_p = true;
  }
  if (!have_q || !have_p) die(2, "central-force needs initial q and p (flags or config)");

  Pot pot(ps);
  const r4nb_integrate_opts opts = to_opts(is);
  r4nb_central_trajectory* traj = nullptr;
  check(r4nb_central_integrate(q, p, pot, &opts, &traj), "central-force");

  const size_t count = r4nb_central_trajectory_samples(traj);
  const bool collided = r4nb_central_trajectory_collided(traj) != 0;
  const double final_time = r4nb_central_trajectory_final_time(traj);

  std::string artifact;
  if (os.format == "csv") {
    std::string csv = "t,q0,q1,q2,q3,p0,p1,p2,p3,energy,mu1,mu2,area_xy,area_zw\n";
    for (size_t i = 0; i < count; ++i) {
      r4nb_central_sample s;
      check(r4nb_central_trajectory_sample(traj, i, &s), "sample");
      const double row[14] = {s.t,    s.q[0], s.q[1], s.q[2],  s.q[3],  s.p[0], s.p[1],
                              s.p[2], s.p[3], s.energy, s.mu1, s.mu2, s.area_xy, s.area_zw};
      for (int c = 0; c < 14; ++c) csv += fmt_num(row[c]) + (c < 13 ? "," : "\n");
    }
    artifact = csv;
  } else {
    JVal root = JVal::obj();
    root.set("problem", "central");
    root.set("potential", potential_json(ps));
    root.set("stop", collided ? "collision" : "completed");
    root.set("collided", collided);
    root.set("final_time", final_time);
    JVal samples = JVal::arr();
    for (size_t i = 0; i < count; ++i) {
      r4nb_central_sample s;
      check(r4nb_central_trajectory_sample(traj, i, &s), "sample");
      JVal e = JVal::obj();
      e.set("t", s.t);
      e.set("q", vec4_json(s.q));
      e.set("p", vec4_json(s.p));
      e.set("energy", s.energy);
      e.set("mu1", s.mu1);
      e.set("mu2", s.mu2);
      e.set("area_xy", s.area_xy);
      e.set("area_zw", s.area_zw);
      samples.push(std::move(e));
    }
    root.set("samples", std::move(samples));
    artifact = root.dump();
  }
  r4nb_central_trajectory_destroy(traj);
  write_artifact(os.path, artifact);
  if (collided) {
    std::cerr << "r4nbody: stopped by collision at t = " << fmt_num(final_time) << "\n";
    return 3;
  }
  return 0;
}

// shared by nbody and find-re: masses plus positions (and optional momenta)
void parse_bodies(const json& params, std::vector<double>& masses, std::vector<double>& q,
                  std::vector<double>& p, bool& mass_weighted) {
  check_keys(params, {"masses", "positions", "momenta", "mass_weighted"}, "config.params");
  if (!params.contains("masses")) die(2, "config.params.masses is required");
  if (!params.contains("positions")) die(2, "config.params.positions is required");
  masses = as_num_list(params.at("masses"), "config.params.masses");
  for (double m : masses)
    if (!(m > 0.0) || !std::isfinite(m)) die(2, "config.params.masses must be positive");
  q = as_vec4_list(params.at("positions"), "config.params.positions");
  if (q.size() != 4 * masses.size())
    die(2, "config.params.positions must hold one 4-vector per mass");
  if (params.contains("momenta")) {
    p = as_vec4_list(params.at("momenta"), "config.params.momenta");
    if (p.size() != 4 * masses.size())
      die(2, "config.params.momenta must hold one 4-vector per mass");
  }
  if (params.contains("mass_weighted"))
    mass_weighted = as_bool(params.at("mass_weighted"), "config.params.mass_weighted");
}

int run_nbody(const Ctx& ctx) {
  if (!ctx.has_cfg) die(2, "nbody requires --config");
  const PotentialSpec ps = eff_potential(ctx);
  const IntegratorSpec is = eff_integrator(ctx);
  const OutputSpec os = eff_output(ctx, "json");
  const json* params = ctx.params();
  if (!params) die(2, "config.params is required for nbody");

  std::vector<double> masses, q, p;
  bool mass_weighted = false;
  parse_bodies(*params, masses, q, p, mass_weighted);
  const size_t n = masses.size();

  Pot pot(ps);
  State st;
  check(r4nb_state_create(n, masses.data(), q.data(), p.empty() ? nullptr : p.data(), &st.s),
        "state");

  r4nb_integrate_opts opts = to_opts(is);
  opts.mass_weighted = mass_weighted ? 1 : 0;
  r4nb_trajectory* traj = nullptr;
  check(r4nb_integrate(st, pot, &opts, &traj), "nbody");

  const size_t count = r4nb_trajectory_samples(traj);
  const bool collided = r4nb_trajectory_collided(traj) != 0;
  const double final_time = r4nb_trajectory_final_time(traj);
  std::vector<double> qs(4 * n), ms(4 * n);

  std::string artifact;
  if (os.format == "csv") {
    std::string csv = "t,energy,mu1,mu2";
    for (size_t i = 0; i < n; ++i)
      for (const char* c : {"_x", "_y", "_z", "_w"}) csv += ",q" + std::to_string(i) + c;
    for (size_t i = 0; i < n; ++i)
      for (const char* c : {"_x", "_y", "_z", "_w"}) csv += ",p" + std::to_string(i) + c;
    csv += "\n";
    for (size_t i = 0; i < count; ++i) {
      r4nb_sample_info info;
      check(r4nb_trajectory_sample(traj, i, &info, qs.data(), ms.data()), "sample");
      csv += fmt_num(info.t) + "," + fmt_num(info.energy) + "," + fmt_num(info.mu1) + "," +
             fmt_num(info.mu2);
      for (double v : qs) csv += "," + fmt_num(v);
      for (double v : ms) csv += "," + fmt_num(v);
      csv += "\n";
    }
    artifact = csv;
  } else {
    JVal root = JVal::obj();
    root.set("problem", "nbody");
    root.set("potential", potential_json(ps));
    root.set("n", n);
    root.set("stop", collided ? "collision" : "completed");
    root.set("collided", collided);
    root.set("final_time", final_time);
    JVal samples = JVal::arr();
    for (size_t i = 0; i < count; ++i) {
      r4nb_sample_info info;
      check(r4nb_trajectory_sample(traj, i, &info, qs.data(), ms.data()), "sample");
      JVal e = JVal::obj();
      e.set("t", info.t);
      e.set("energy", info.energy);
      e.set("mu1", info.mu1);
      e.set("mu2", info.mu2);
      e.set("centroid", vec4_json(info.centroid));
      JVal qa = JVal::arr(), pa = JVal::arr();
      for (size_t b = 0; b < n; ++b) {
        qa.push(vec4_json(&qs[4 * b]));
        pa.push(vec4_json(&ms[4 * b]));
      }
      e.set("positions", std::move(qa));
      e.set("momenta", std::move(pa));
      samples.push(std::move(e));
    }
    root.set("samples", std::move(samples));
    artifact = root.dump();
  }
  r4nb_trajectory_destroy(traj);
  write_artifact(os.path, artifact);
  if (collided) {
    std::cerr << "r4nbody: stopped by collision at t = " << fmt_num(final_time) << "\n";
    return 3;
  }
  return 0;
}

int run_find_re(const Ctx& ctx) {
  if (!ctx.has_cfg) die(2, "find-re requires --config");
  const PotentialSpec ps = eff_potential(ctx);
  const OutputSpec os = eff_output(ctx, "json");
  if (os.format != "json") die(2, "find-re emits json only");
  const json* params = ctx.params();
  if (!params) die(2, "config.params is required for find-re");

  std::vector<double> masses, q, p;
  bool mass_weighted = false;
  parse_bodies(*params, masses, q, p, mass_weighted);

  Pot pot(ps);
  State st;
  check(r4nb_state_create(masses.size(), masses.data(), q.data(), nullptr, &st.s), "state");

  JVal root = JVal::obj();
  root.set("problem", "nbody");

  r4nb_re_result re;
  const r4nb_status rc =
      r4nb_solve_balanced(st, pot, mass_weighted ? 1 : 0, ctx.tol_set ? ctx.tol : -1.0, &re);
  if (rc == R4NB_ERR_NOT_BALANCED) {
    // still an artifact: the configuration was examined and rejected
    root.set("balanced", false);
    root.set("message", r4nb_last_error());
    write_artifact(os.path, root.dump());
    std::cerr << "r4nbody: " << r4nb_last_error() << "\n";
    return r4nb_status_exit_class(rc);
  }
  check(rc, "find-re");

  root.set("balanced", true);
  root.set("omega1", re.omega1);
  root.set("omega2", re.omega2);
  root.set("omega1_undetermined", re.omega1_undetermined != 0);
  root.set("omega2_undetermined", re.omega2_undetermined != 0);
  root.set("residual_norm", re.residual_norm);
  root.set("central", re.central != 0);
  root.set("lambda", re.lambda);
  write_artifact(os.path, root.dump());
  return 0;
}

r4nb_ngon_spec config_ngon_spec(const json* params) {
  r4nb_ngon_spec spec;
  r4nb_ngon_spec_init(&spec);
  if (params) {
    if (params->contains("a1")) spec.a1 = as_int(params->at("a1"), "config.params.a1");
    if (params->contains("b1")) spec.b1 = as_int(params->at("b1"), "config.params.b1");
    if (params->contains("a2")) spec.a2 = as_int(params->at("a2"), "config.params.a2");
    if (params->contains("b2")) spec.b2 = as_int(params->at("b2"), "config.params.b2");
    if (params->contains("r1")) spec.r1 = as_num(params->at("r1"), "config.params.r1");
    if (params->contains("r2")) spec.r2 = as_num(params->at("r2"), "config.params.r2");
    if (params->contains("theta1"))
      spec.theta1 = as_num(params->at("theta1"), "config.params.theta1");
    if (params->contains("theta2"))
      spec.theta2 = as_num(params->at("theta2"), "config.params.theta2");
  }
  return spec;
}

JVal ngon_spec_json(const r4nb_ngon_spec& spec) {
  JVal o = JVal::obj();
  o.set("a1", spec.a1).set("b1", spec.b1).set("a2", spec.a2).set("b2", spec.b2);
  o.set("r1", spec.r1).set("r2", spec.r2);
  o.set("theta1", spec.theta1).set("theta2", spec.theta2);
  return o;
}

int run_ngon_build(const Ctx& ctx, const r4nb_ngon_spec& spec) {
  const OutputSpec os = eff_output(ctx, "json");
  int n = 0;
  check(r4nb_ngon_order(&spec, &n), "ngon");
  std::vector<double> verts(4 * static_cast<size_t>(n));
  check(r4nb_ngon_vertices(&spec, verts.data()), "ngon");

  std::string artifact;
  if (os.format == "csv") {
    std::string csv = "x,y,z,w\n";
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < 4; ++c)
        csv += fmt_num(verts[4 * static_cast<size_t>(i) + c]) + (c < 3 ? "," : "\n");
    }
    artifact = csv;
  } else {
    JVal root = JVal::obj();
    root.set("problem", "ngon");
    root.set("spec", ngon_spec_json(spec));
    root.set("n", n);
    JVal va = JVal::arr();
    for (int i = 0; i < n; ++i) va.push(vec4_json(&verts[4 * static_cast<size_t>(i)]));
    root.set("vertices", std::move(va));
    artifact = root.dump();
  }
  write_artifact(os.path, artifact);
  return 0;
}

int run_ngon_classify(const Ctx& ctx, const r4nb_ngon_spec& spec) {
  const OutputSpec os = eff_output(ctx, "json");
  if (os.format != "json") die(2, "ngon classify emits json only");
  r4nb_ngon_class cls;
  check(r4nb_ngon_classify(&spec, &cls), "ngon");

  JVal root = JVal::obj();
  root.set("problem", "ngon");
  root.set("spec", ngon_spec_json(spec));
  root.set("tag", r4nb_ngon_tag_name(cls.tag));
  root.set("n", cls.n);
  root.set("proj1", cls.proj1);
  root.set("proj2", cls.proj2);
  int sync = 0;
  if (r4nb_ngon_synchronised(&spec, &sync) == R4NB_OK)
    root.set("synchronised", sync != 0);
  else
    root.set("synchronised", JVal());  // not applicable for these orders
  write_artifact(os.path, root.dump());
  return 0;
}

int run_ngon_solve_re(const Ctx& ctx, const r4nb_ngon_spec& spec, double c1, double c2) {
  const PotentialSpec ps = eff_potential(ctx);
  const OutputSpec os = eff_output(ctx, "json");
  if (os.format != "json") die(2, "ngon solve-re emits json only");

  Pot pot(ps);
  double r1 = 0, r2 = 0;
  check(r4nb_ngon_solve_re_radii(&spec, c1, c2, pot, &r1, &r2), "ngon solve-re");

  r4nb_ngon_spec solved = spec;
  solved.r1 = r1;
  solved.r2 = r2;
  State full;
  check(r4nb_ngon_state(&solved, 0.0, 0.0, c1, c2, &full.s), "ngon state");
  const double w1 = r1 > 0.0 ? c1 / (r1 * r1) : 0.0;
  const double w2 = r2 > 0.0 ? c2 / (r2 * r2) : 0.0;
  double residual = 0.0;
  check(r4nb_re_residual_norm(full, w1, w2, pot, 0, &residual), "ngon residual");

  JVal root = JVal::obj();
  root.set("problem", "ngon");
  root.set("potential", potential_json(ps));
  root.set("spec", ngon_spec_json(spec));
  root.set("c1", c1);
  root.set("c2", c2);
  root.set("r1", r1);
  root.set("r2", r2);
  root.set("omega1", w1);
  root.set("omega2", w2);
  root.set("residual_norm", residual);
  write_artifact(os.path, root.dump());
  return 0;
}

int run_threebody_reduce(const Ctx& ctx) {
  if (!ctx.has_cfg) die(2, "three-body reduce requires --config");
  const PotentialSpec ps = eff_potential(ctx);
  const OutputSpec os = eff_output(ctx, "json");
  if (os.format != "json") die(2, "three-body reduce emits json only");
  const json* params = ctx.params();
  if (!params) die(2, "config.params is required");
  check_keys(*params, {"masses", "positions", "momenta"}, "config.params");

  double masses[3];
  parse_threebody_masses(*params, "config.params", masses);
  if (!params->contains("positions")) die(2, "config.params.positions is required");
  const std::vector<double> q =
      as_vec4_list(params->at("positions"), "config.params.positions");
  if (q.size() != 12) die(2, "config.params.positions must hold 3 bodies");
  std::vector<double> p(12, 0.0);
  if (params->contains("momenta")) {
    p = as_vec4_list(params->at("momenta"), "config.params.momenta");
    if (p.size() != 12) die(2, "config.params.momenta must hold 3 bodies");
  }

  const std::vector<double> mvec = {masses[0], masses[1], masses[2]};
  State st;
  check(r4nb_state_create(3, mvec.data(), q.data(), p.data(), &st.s), "state");
  r4nb_reduced3b red;
  check(r4nb_threebody_reduce(st, &red), "three-body reduce");

  Pot pot(ps);
  double energy = 0, d12 = 0, d13 = 0, d23 = 0;
  check(r4nb_reduced3b_energy(&red, masses, pot, &energy), "energy");
  check(r4nb_reduced3b_distances(&red, masses, &d12, &d13, &d23), "distances");

  JVal root = JVal::obj();
  root.set("problem", "threebody");
  root.set("potential", potential_json(ps));
  root.set("state", state_json(red));
  root.set("energy", energy);
  JVal dist = JVal::obj();
  dist.set("d12", d12).set("d13", d13).set("d23", d23);
  root.set("distances", std::move(dist));
  write_artifact(os.path, root.dump());
  return 0;
}

int run_threebody_simulate(const Ctx& ctx) {
  if (!ctx.has_cfg) die(2, "three-body simulate requires --config");
  const PotentialSpec ps = eff_potential(ctx);
  const IntegratorSpec is = eff_integrator(ctx);
  const OutputSpec os = eff_output(ctx, "json");
  const json* params = ctx.params();
  if (!params) die(2, "config.params is required");
  check_keys(*params, {"masses", "state"}, "config.params");

  double masses[3];
  parse_threebody_masses(*params, "config.params", masses);
  if (!params->contains("state")) die(2, "config.params.state is required");
  const r4nb_reduced3b s0 = parse_state(params->at("state"), "config.params.state");

  Pot pot(ps);
  const r4nb_integrate_opts opts = to_opts(is);
  r4nb_r3b_trajectory* traj = nullptr;
  check(r4nb_reduced3b_integrate(&s0, masses, pot, &opts, &traj), "three-body simulate");

  const size_t count = r4nb_r3b_trajectory_samples(traj);
  const bool collided = r4nb_r3b_trajectory_collided(traj) != 0;
  const double final_time = r4nb_r3b_trajectory_final_time(traj);

  std::string artifact;
  if (os.format == "csv") {
    std::string csv =
        "t,r1,r2,s1,s2,phi1,phi2,p_r1,p_r2,p_s1,p_s2,p_phi1,p_phi2,mu1,mu2,energy\n";
    for (size_t i = 0; i < count; ++i) {
      double t = 0, h = 0;
      r4nb_reduced3b si;
      check(r4nb_r3b_trajectory_sample(traj, i, &t, &si, &h), "sample");
      const double row[16] = {t,       si.r1,   si.r2,   si.s1,    si.s2,    si.phi1,
                              si.phi2, si.p_r1, si.p_r2, si.p_s1,  si.p_s2,  si.p_phi1,
                              si.p_phi2, si.mu1, si.mu2, h};
      for (int c = 0; c < 16; ++c) csv += fmt_num(row[c]) + (c < 15 ? "," : "\n");
    }
    artifact = csv;
  } else {
    JVal root = JVal::obj();
    root.set("problem", "threebody");
    root.set("potential", potential_json(ps));
    root.set("stop", collided ? "collision" : "completed");
    root.set("collided", collided);
    root.set("final_time", final_time);
    JVal samples = JVal::arr();
    for (size_t i = 0; i < count; ++i) {
      double t = 0, h = 0;
      r4nb_reduced3b si;
      check(r4nb_r3b_trajectory_sample(traj, i, &t, &si, &h), "sample");
      JVal e = JVal::obj();
      e.set("t", t);
      e.set("state", state_json(si));
      e.set("energy", h);
      samples.push(std::move(e));
    }
    root.set("samples", std::move(samples));
    artifact = root.dump();
  }
  r4nb_r3b_trajectory_destroy(traj);
  write_artifact(os.path, artifact);
  if (collided) {
    std::cerr << "r4nbody: stopped by collision at t = " << fmt_num(final_time) << "\n";
    return 3;
  }
  return 0;
}

int run_threebody_equilibrium(const Ctx& ctx, double mu1, double mu2, bool mu1_set,
                              bool mu2_set) {
  const PotentialSpec ps = eff_potential(ctx);
  const OutputSpec os = eff_output(ctx, "json");
  if (os.format != "json") die(2, "three-body equilibrium emits json only");

  double masses[3] = {1.0, 1.0, 1.0};
  r4nb_reduced3b state;
  Pot pot(ps);

  const json* params = ctx.params();
  bool search = false;
  bool mu_given = mu1_set || mu2_set;
  if (params) {
    check_keys(*params, {"mu1", "mu2", "masses", "seed"}, "config.params");
    if (params->contains("seed")) {
      search = true;
      parse_threebody_masses(*params, "config.params", masses);
      const r4nb_reduced3b seed = parse_state(params->at("seed"), "config.params.seed");
      check(r4nb_find_equilibrium(&seed, masses, pot, ctx.tol_set ? ctx.tol : -1.0, 0, &state),
            "three-body equilibrium");
    } else {
      if (params->contains("mu1") && !mu1_set)
        mu1 = as_num(params->at("mu1"), "config.params.mu1");
      if (params->contains("mu2") && !mu2_set)
        mu2 = as_num(params->at("mu2"), "config.params.mu2");
      mu_given = mu_given || params->contains("mu1") || params->contains("mu2");
    }
  }
  if (!search) {
    if (!mu_given) die(2, "equilibrium needs --mu1/--mu2 or a config seed");
    check(r4nb_equilateral_equilibrium(mu1, mu2, pot, &state), "three-body equilibrium");
  }

  double f[12];
  check(r4nb_reduced3b_eom(&state, masses, pot, f), "vector field");
  double eom_norm = 0.0;
  for (double v : f) eom_norm = std::max(eom_norm, std::abs(v));

  double d12 = 0, d13 = 0, d23 = 0;
  check(r4nb_reduced3b_distances(&state, masses, &d12, &d13, &d23), "distances");
  int branch = 0;
  check(r4nb_re_branch(&state, masses, pot, 1e-9, &branch), "branch");

  JVal root = JVal::obj();
  root.set("problem", "threebody");
  root.set("potential", potential_json(ps));
  JVal ma = JVal::arr();
  for (double m : masses) ma.push(m);
  root.set("masses", std::move(ma));
  root.set("state", state_json(state));
  root.set("eom_norm", eom_norm);
  root.set("branch", r4nb_re_branch_name(branch));
  JVal dist = JVal::obj();
  dist.set("d12", d12).set("d13", d13).set("d23", d23);
  root.set("distances", std::move(dist));
  write_artifact(os.path, root.dump());
  return 0;
}

// the grid convention: mu1 = mu and mu2 = gamma^2 mu, so gamma is the
// radius ratio of the two planes at the equilateral equilibrium
int run_stability(const Ctx& ctx, double mu, double gamma, bool mu_given, bool gamma_given) {
  const PotentialSpec ps = eff_potential(ctx);
  const OutputSpec os = eff_output(ctx, "json");
  if (os.format != "json") die(2, "stability emits json only (use 'stability sweep' for csv)");

  if (const json* params = ctx.params()) {
    check_keys(*params, {"mu", "gamma"}, "config.params");
    if (params->contains("mu")) {
      if (!mu_given) mu = as_num(params->at("mu"), "config.params.mu");
      mu_given = true;
    }
    if (params->contains("gamma")) {
      if (!gamma_given) gamma = as_num(params->at("gamma"), "config.params.gamma");
      gamma_given = true;
    }
  }
  if (!mu_given || !gamma_given) die(2, "stability needs --mu and --gamma");

  Pot pot(ps);
  const double masses[3] = {1.0, 1.0, 1.0};
  r4nb_reduced3b eq;
  check(r4nb_equilateral_equilibrium(mu, gamma * gamma * mu, pot, &eq), "equilibrium");
  r4nb_spectral_report rep;
  check(r4nb_stability_analysis(&eq, masses, pot, &rep), "stability");

  JVal root = JVal::obj();
  root.set("problem", "stability");
  root.set("potential", potential_json(ps));
  root.set("mu", mu);
  root.set("gamma", gamma);
  JVal eigs = JVal::arr();
  for (int i = 0; i < 12; ++i) {
    JVal e = JVal::obj();
    e.set("re", rep.eig_re[i]).set("im", rep.eig_im[i]);
    eigs.push(std::move(e));
  }
  root.set("eigenvalues", std::move(eigs));
  root.set("dim_ker_m", rep.dim_ker_m);
  root.set("dim_ker_m2", rep.dim_ker_m2);
  root.set("det_f", rep.det_f);
  root.set("max_real_part", rep.max_real_part);
  root.set("f_nonsingular", rep.f_nonsingular != 0);
  root.set("nilpotent", rep.nilpotent != 0);
  root.set("spectrally_unstable", rep.spectrally_unstable != 0);
  root.set("verdict", r4nb_verdict_name(rep.verdict));
  write_artifact(os.path, root.dump());
  return 0;
}

int run_stability_sweep(const Ctx& ctx, std::string mu_grid, std::string gamma_grid) {
  const PotentialSpec ps = eff_potential(ctx);
  OutputSpec os = eff_output(ctx, "csv");
  if (os.format != "csv") die(2, "stability sweep emits csv only");

  if (const json* params = ctx.params()) {
    check_keys(*params, {"mu_grid", "gamma_grid"}, "config.params");
    auto join = [](const std::vector<double>& v) {
      std::string s;
      for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt_num(v[i]);
      return s;
    };
    if (params->contains("mu_grid"))
      mu_grid = join(as_num_list(params->at("mu_grid"), "config.params.mu_grid"));
    if (params->contains("gamma_grid"))
      gamma_grid = join(as_num_list(params->at("gamma_grid"), "config.params.gamma_grid"));
  }
  const std::vector<double> mus = parse_grid(mu_grid, "--mu-grid");
  const std::vector<double> gammas = parse_grid(gamma_grid, "--gamma-grid");

  Pot pot(ps);
  const double masses[3] = {1.0, 1.0, 1.0};
  std::string csv = "mu,gamma,det_f,dim_ker_m,dim_ker_m2,verdict\n";
  for (double mu : mus)
    for (double gamma : gammas) {
      r4nb_reduced3b eq;
      check(r4nb_equilateral_equilibrium(mu, gamma * gamma * mu, pot, &eq), "equilibrium");
      r4nb_spectral_report rep;
      check(r4nb_stability_analysis(&eq, masses, pot, &rep), "stability");
      csv += fmt_num(mu) + "," + fmt_num(gamma) + "," + fmt_num(rep.det_f) + "," +
             fmt_int(rep.dim_ker_m) + "," + fmt_int(rep.dim_ker_m2) + "," +
             r4nb_verdict_name(rep.verdict) + "\n";
    }
  write_artifact(os.path, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamics of point masses in four-dimensional space: central-force and "
               "n-body propagation, relative equilibria, regular n-gons, the reduced "
               "three-body problem, and spectral stability of its equilateral family."};
  app.require_subcommand(1);
  app.fallthrough();

  Ctx ctx;
  std::string config_path;
  long seed = 0;

  app.add_option("--config", config_path, "scenario configuration file (JSON)");
  CLI::Option* out_opt = app.add_option("--out", ctx.out_path, "output path (default stdout)");
  app.add_option("--seed", seed, "seed for randomized scenarios (reserved)");
  CLI::Option* tol_opt = app.add_option("--tol", ctx.tol, "solver tolerance override");
  CLI::Option* kind_opt =
      app.add_option("--potential", ctx.pot_flags.kind,
                     "potential kind: newtonian, jacobi, homogeneous, harmonic");
  CLI::Option* k_opt = app.add_option("--k", ctx.pot_flags.k, "potential coupling");
  CLI::Option* alpha_opt =
      app.add_option("--alpha", ctx.pot_flags.alpha, "homogeneous potential exponent");
  CLI::Option* fmt_opt = app.add_option("--format", ctx.format, "output format: json or csv");
  CLI::Option* dt_opt = app.add_option("--dt", ctx.integ_flags.dt, "integrator step size");
  CLI::Option* steps_opt = app.add_option("--steps", ctx.integ_flags.steps, "step count");
  CLI::Option* every_opt =
      app.add_option("--every", ctx.integ_flags.output_every, "sample every n-th step");
  CLI::Option* coll_opt = app.add_option("--collision-threshold",
                                         ctx.integ_flags.collision_threshold,
                                         "distance at which propagation stops");

  // central-force
  std::string q_flag, p_flag;
  CLI::App* central = app.add_subcommand("central-force", "propagate one body around a fixed center");
  central->fallthrough();
  central->add_option("--q", q_flag, "initial position x,y,z,w");
  central->add_option("--p", p_flag, "initial momentum x,y,z,w");

  // nbody
  CLI::App* nbody = app.add_subcommand("nbody", "propagate an n-body state from a config");
  nbody->fallthrough();

  // find-re
  CLI::App* findre = app.add_subcommand("find-re", "balanced / central tests of a configuration");
  findre->fallthrough();

  // ngon with actions
  CLI::App* ngon = app.add_subcommand("ngon", "regular n-gons in the two principal planes");
  ngon->fallthrough();
  ngon->require_subcommand(1);
  r4nb_ngon_spec ngon_flags;
  r4nb_ngon_spec_init(&ngon_flags);
  double c1 = 0.0, c2 = 0.0;
  auto add_spec_flags = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("--a1", ngon_flags.a1, "first block winding");
    sub->add_option("--b1", ngon_flags.b1, "first block order");
    sub->add_option("--a2", ngon_flags.a2, "second block winding");
    sub->add_option("--b2", ngon_flags.b2, "second block order");
    sub->add_option("--r1", ngon_flags.r1, "first block radius");
    sub->add_option("--r2", ngon_flags.r2, "second block radius");
    sub->add_option("--theta1", ngon_flags.theta1, "first block phase");
    sub->add_option("--theta2", ngon_flags.theta2, "second block phase");
  };
  CLI::App* ngon_build = ngon->add_subcommand("build", "emit the vertex coordinates");
  add_spec_flags(ngon_build);
  CLI::App* ngon_classify = ngon->add_subcommand("classify", "planar / skew classification");
  add_spec_flags(ngon_classify);
  CLI::App* ngon_solve = ngon->add_subcommand("solve-re", "radii of the relative equilibrium");
  add_spec_flags(ngon_solve);
  ngon_solve->add_option("--c1", c1, "per-body angular momentum, first plane");
  ngon_solve->add_option("--c2", c2, "per-body angular momentum, second plane");

  // three-body with actions
  CLI::App* threebody = app.add_subcommand("three-body", "the reduced three-body problem");
  threebody->fallthrough();
  threebody->require_subcommand(1);
  CLI::App* tb_reduce = threebody->add_subcommand("reduce", "full state to reduced chart");
  tb_reduce->fallthrough();
  CLI::App* tb_sim = threebody->add_subcommand("simulate", "propagate a reduced state");
  tb_sim->fallthrough();
  CLI::App* tb_eq = threebody->add_subcommand("equilibrium", "equilateral family or root search");
  tb_eq->fallthrough();
  double mu1 = 0.0, mu2 = 0.0;
  CLI::Option* mu1_opt = tb_eq->add_option("--mu1", mu1, "first momentum component");
  CLI::Option* mu2_opt = tb_eq->add_option("--mu2", mu2, "second momentum component");

  // stability with optional sweep
  CLI::App* stability = app.add_subcommand("stability", "spectral report at an equilateral point");
  stability->fallthrough();
  double mu = 0.0, gamma = 0.0;
  CLI::Option* mu_opt = stability->add_option("--mu", mu, "momentum scale mu1");
  CLI::Option* gamma_opt =
      stability->add_option("--gamma", gamma, "radius ratio: mu2 = gamma^2 mu");
  std::string mu_grid = "0.5,1,1.5,2", gamma_grid = "0.5,1,1.5,2";
  CLI::App* sweep = stability->add_subcommand("sweep", "csv over a (mu, gamma) grid");
  sweep->fallthrough();
  sweep->add_option("--mu-grid", mu_grid, "comma-separated mu values");
  sweep->add_option("--gamma-grid", gamma_grid, "comma-separated gamma values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  ctx.out_set = out_opt->count() > 0;
  ctx.tol_set = tol_opt->count() > 0;
  ctx.kind_set = kind_opt->count() > 0;
  ctx.k_set = k_opt->count() > 0;
  ctx.alpha_set = alpha_opt->count() > 0;
  ctx.format_set = fmt_opt->count() > 0;
  ctx.dt_set = dt_opt->count() > 0;
  ctx.steps_set = steps_opt->count() > 0;
  ctx.every_set = every_opt->count() > 0;
  ctx.coll_set = coll_opt->count() > 0;
  (void)seed;

  try {
    const char* problem = app.got_subcommand(central)     ? "central"
                          : app.got_subcommand(nbody)     ? "nbody"
                          : app.got_subcommand(findre)    ? "nbody"
                          : app.got_subcommand(ngon)      ? "ngon"
                          : app.got_subcommand(threebody) ? "threebody"
                                                          : "stability";
    if (!config_path.empty()) load_config(ctx, config_path, problem);

    if (app.got_subcommand(central)) return run_central(ctx, q_flag, p_flag);
    if (app.got_subcommand(nbody)) return run_nbody(ctx);
    if (app.got_subcommand(findre)) return run_find_re(ctx);

    if (app.got_subcommand(ngon)) {
      const json* params = ctx.params();
      if (params)
        check_keys(*params, {"a1", "b1", "a2", "b2", "r1", "r2", "theta1", "theta2", "c1", "c2"},
                   "config.params");
      r4nb_ngon_spec spec = config_ngon_spec(params);
      // command line values win over the config file
      CLI::App* sub = ngon->got_subcommand(ngon_build)      ? ngon_build
                      : ngon->got_subcommand(ngon_classify) ? ngon_classify
                                                            : ngon_solve;
      if (sub->count("--a1") > 0) spec.a1 = ngon_flags.a1;
      if (sub->count("--b1") > 0) spec.b1 = ngon_flags.b1;
      if (sub->count("--a2") > 0) spec.a2 = ngon_flags.a2;
      if (sub->count("--b2") > 0) spec.b2 = ngon_flags.b2;
      if (sub->count("--r1") > 0) spec.r1 = ngon_flags.r1;
      if (sub->count("--r2") > 0) spec.r2 = ngon_flags.r2;
      if (sub->count("--theta1") > 0) spec.theta1 = ngon_flags.theta1;
      if (sub->count("--theta2") > 0) spec.theta2 = ngon_flags.theta2;
      if (ngon->got_subcommand(ngon_build)) return run_ngon_build(ctx, spec);
      if (ngon->got_subcommand(ngon_classify)) return run_ngon_classify(ctx, spec);
      if (params && params->contains("c1") && ngon_solve->count("--c1") == 0)
        c1 = as_num(params->at("c1"), "config.params.c1");
      if (params && params->contains("c2") && ngon_solve->count("--c2") == 0)
        c2 = as_num(params->at("c2"), "config.params.c2");
      return run_ngon_solve_re(ctx, spec, c1, c2);
    }

    if (app.got_subcommand(threebody)) {
      if (threebody->got_subcommand(tb_reduce)) return run_threebody_reduce(ctx);
      if (threebody->got_subcommand(tb_sim)) return run_threebody_simulate(ctx);
      return run_threebody_equilibrium(ctx, mu1, mu2, mu1_opt->count() > 0,
                                       mu2_opt->count() > 0);
    }

    if (stability->got_subcommand(sweep)) return run_stability_sweep(ctx, mu_grid, gamma_grid);
    return run_stability(ctx, mu, gamma, mu_opt->count() > 0, gamma_opt->count() > 0);
  } catch (const CliError& e) {
    std::cerr << "r4nbody: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "r4nbody: " << e.what() << "\n";
    return 3;
  }
}
