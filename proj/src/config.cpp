#include "rcslab/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rcslab/text.hpp"

namespace rcs {

ConfigError::ConfigError(const std::string& key, const std::string& message)
    : std::runtime_error(key.empty() ? message : key + ": " + message), key_(key) {}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "c", "N", "kernel", "kernel.beta", "T_star", "k_B", "mass", "dof",
      "dt", "t_end", "sample_every", "model", "seed",
      "init.kind", "init.x_scale", "init.w_scale", "init.separation", "init.truncation",
      "init.positions", "init.velocities", "init.mode",
      "K", "c_list", "n_list",
      "band.climit_lo", "band.climit_hi", "band.kinetic_lo", "band.kinetic_hi",
      "fit.r2_min", "fit.window"};
  return keys;
}

struct Entry {
  std::string value;
  int line = 0;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  const std::string& raw(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(key, "missing required key");
    return it->second.value;
  }

  double number(const std::string& key) const {
    const auto v = parse_double(raw(key));
    if (!v || !std::isfinite(*v)) throw ConfigError(key, "expected a finite number, got '" + raw(key) + "'");
    return *v;
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  long long integer(const std::string& key) const {
    const auto v = parse_integer(raw(key));
    if (!v) throw ConfigError(key, "expected an integer, got '" + raw(key) + "'");
    return *v;
  }

  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    for (const auto& f : split(raw(key), ',')) {
      const auto v = parse_double(f);
      if (!v || !std::isfinite(*v)) throw ConfigError(key, "bad list entry '" + f + "'");
      out.push_back(*v);
    }
    if (out.empty()) throw ConfigError(key, "empty list");
    return out;
  }

  std::vector<Vec3> vectors(const std::string& key) const {
    std::vector<Vec3> out;
    for (const auto& triple : split(raw(key), ';')) {
      std::vector<double> comps;
      for (const auto& f : split(triple, ',')) {
        const auto v = parse_double(f);
        if (!v || !std::isfinite(*v)) throw ConfigError(key, "bad vector component '" + f + "'");
        comps.push_back(*v);
      }
      if (comps.size() != 3) throw ConfigError(key, "each vector needs 3 components: '" + triple + "'");
      out.emplace_back(comps[0], comps[1], comps[2]);
    }
    if (out.empty()) throw ConfigError(key, "empty vector list");
    return out;
  }

 private:
  std::map<std::string, Entry> entries_;
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

std::vector<double> per_agent(const Reader& r, const std::string& key, std::size_t n,
                              double fallback) {
  if (!r.has(key)) return std::vector<double>(n, fallback);
  const auto vals = r.numbers(key);
  if (vals.size() == 1) return std::vector<double>(n, vals.front());
  require(vals.size() == n, key, "expected 1 or N = " + std::to_string(n) + " values");
  return vals;
}

std::map<std::string, Entry> tokenize(const std::string& text) {
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    std::string_view body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key(trim(body.substr(0, eq)));
    const std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
    if (!known_keys().count(key)) throw ConfigError(key, "unknown key");
    if (entries.count(key)) throw ConfigError(key, "duplicate key");
    entries[key] = Entry{value, lineno};
  }
  return entries;
}

}  // namespace

RunConfig parse_config_string(const std::string& text) {
  const Reader r(tokenize(text));
  RunConfig cfg;
  ModelParams& p = cfg.params;

  p.c = r.number("c");
  require(p.c > 0.0, "c", "must be > 0, got " + r.raw("c"));

  const long long n = r.integer("N");
  require(n >= 1, "N", "must be >= 1, got " + r.raw("N"));
  const auto N = static_cast<std::size_t>(n);

  try {
    p.kernel.kind = kernel_kind_from_string(r.raw("kernel"));
  } catch (const std::invalid_argument&) {
    throw ConfigError("kernel", "unknown kernel kind '" + r.raw("kernel") + "'");
  }
  p.kernel.beta = r.number_or("kernel.beta", 2.0);
  require(p.kernel.beta >= 0.0, "kernel.beta", "must be >= 0");

  p.T_star = r.number_or("T_star", 1.0);
  require(p.T_star > 0.0, "T_star", "must be > 0");
  p.k_B = r.number_or("k_B", 1.0);
  require(p.k_B > 0.0, "k_B", "must be > 0");

  const auto masses = per_agent(r, "mass", N, 1.0);
  const auto dofs = per_agent(r, "dof", N, 3.0);
  p.agents.resize(N);
  for (std::size_t a = 0; a < N; ++a) {
    require(masses[a] > 0.0, "mass", "must be > 0");
    require(dofs[a] >= 1.0, "dof", "must be >= 1");
    p.agents[a] = AgentSpec{masses[a], dofs[a]};
  }

  SimConfig& s = cfg.sim;
  cfg.dt_from_rule = !r.has("dt");
  s.dt = cfg.dt_from_rule ? default_dt(p) : r.number("dt");
  require(s.dt > 0.0, "dt", "must be > 0");
  s.t_end = r.number_or("t_end", 10.0);
  require(s.t_end > 0.0, "t_end", "must be > 0");
  require(s.dt <= s.t_end, "dt", "must not exceed t_end");
  if (r.has("sample_every")) {
    const long long k = r.integer("sample_every");
    require(k >= 1, "sample_every", "must be >= 1");
    s.sample_every = static_cast<int>(k);
  }
  if (r.has("model")) {
    try {
      s.model = model_from_string(r.raw("model"));
    } catch (const std::invalid_argument&) {
      throw ConfigError("model", "expected rcs or cs, got '" + r.raw("model") + "'");
    }
  }
  if (r.has("seed")) {
    const long long seed = r.integer("seed");
    require(seed >= 0, "seed", "must be >= 0");
    s.seed = static_cast<std::uint64_t>(seed);
  }

  Scenario& sc = cfg.scenario;
  if (r.has("init.kind")) sc.init_kind = r.raw("init.kind");
  if (sc.init_kind != "explicit") {
    try {
      sc.measure.kind = measure_kind_from_string(sc.init_kind);
    } catch (const std::invalid_argument&) {
      throw ConfigError("init.kind", "unknown initial data kind '" + sc.init_kind + "'");
    }
  }
  sc.measure.x_scale = r.number_or("init.x_scale", sc.measure.x_scale);
  require(sc.measure.x_scale >= 0.0, "init.x_scale", "must be >= 0");
  sc.measure.w_scale = r.number_or("init.w_scale", sc.measure.w_scale);
  require(sc.measure.w_scale >= 0.0, "init.w_scale", "must be >= 0");
  sc.measure.separation = r.number_or("init.separation", sc.measure.separation);
  require(sc.measure.separation >= 0.0, "init.separation", "must be >= 0");
  sc.measure.truncation = r.number_or("init.truncation", sc.measure.truncation);
  require(sc.measure.truncation > 0.0, "init.truncation", "must be > 0");

  if (r.has("init.mode")) {
    const std::string& m = r.raw("init.mode");
    if (m == "from_v") sc.init_mode = InitMode::from_v;
    else if (m == "from_w") sc.init_mode = InitMode::from_w;
    else throw ConfigError("init.mode", "expected from_v or from_w, got '" + m + "'");
  }
  if (sc.init_kind == "explicit") {
    sc.positions = r.vectors("init.positions");
    sc.velocities = r.vectors("init.velocities");
    require(sc.positions.size() == N, "init.positions", "expected N = " + std::to_string(N) + " vectors");
    require(sc.velocities.size() == N, "init.velocities", "expected N = " + std::to_string(N) + " vectors");
    if (sc.init_mode == InitMode::from_v)
      for (const auto& v : sc.velocities)
        require(v.norm() < p.c, "init.velocities", "speed must be below c");
  } else {
    require(!r.has("init.positions"), "init.positions", "only allowed with init.kind = explicit");
    require(!r.has("init.velocities"), "init.velocities", "only allowed with init.kind = explicit");
  }

  sc.K = r.number_or("K", 0.0);
  require(sc.K >= 0.0, "K", "must be >= 0");
  if (r.has("c_list")) {
    sc.c_list = r.numbers("c_list");
    for (std::size_t i = 0; i < sc.c_list.size(); ++i) {
      require(sc.c_list[i] > 0.0, "c_list", "entries must be > 0");
      if (i > 0) require(sc.c_list[i] > sc.c_list[i - 1], "c_list", "entries must be increasing");
    }
  }
  if (r.has("n_list")) {
    for (double v : r.numbers("n_list")) {
      require(v >= 1.0 && v == std::floor(v), "n_list", "entries must be positive integers");
      sc.n_list.push_back(static_cast<std::size_t>(v));
    }
    for (std::size_t i = 1; i < sc.n_list.size(); ++i)
      require(sc.n_list[i] > sc.n_list[i - 1], "n_list", "entries must be increasing");
  }
  sc.climit_band.lo = r.number_or("band.climit_lo", sc.climit_band.lo);
  sc.climit_band.hi = r.number_or("band.climit_hi", sc.climit_band.hi);
  require(sc.climit_band.lo < sc.climit_band.hi, "band.climit_lo", "must be below band.climit_hi");
  sc.kinetic_band.lo = r.number_or("band.kinetic_lo", sc.kinetic_band.lo);
  sc.kinetic_band.hi = r.number_or("band.kinetic_hi", sc.kinetic_band.hi);
  require(sc.kinetic_band.lo < sc.kinetic_band.hi, "band.kinetic_lo", "must be below band.kinetic_hi");
  sc.r2_min = r.number_or("fit.r2_min", sc.r2_min);
  require(sc.r2_min >= 0.0 && sc.r2_min <= 1.0, "fit.r2_min", "must lie in [0, 1]");
  sc.fit_window = r.number_or("fit.window", sc.fit_window);
  require(sc.fit_window > 0.0 && sc.fit_window <= 1.0, "fit.window", "must lie in (0, 1]");
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str());
}

namespace {

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

std::string join(const std::vector<Vec3>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += "; ";
    out += format_double(v[i][0]) + ", " + format_double(v[i][1]) + ", " + format_double(v[i][2]);
  }
  return out;
}

}  // namespace

std::string serialize_config(const RunConfig& cfg) {
  const ModelParams& p = cfg.params;
  const SimConfig& s = cfg.sim;
  const Scenario& sc = cfg.scenario;
  std::ostringstream out;
  auto put = [&](const std::string& key, const std::string& value) {
    out << key << " = " << value << "\n";
  };

  put("c", format_double(p.c));
  put("N", std::to_string(p.size()));
  put("kernel", to_string(p.kernel.kind));
  put("kernel.beta", format_double(p.kernel.beta));
  put("T_star", format_double(p.T_star));
  put("k_B", format_double(p.k_B));
  std::vector<double> masses, dofs;
  bool homogeneous = true;
  for (const auto& a : p.agents) {
    masses.push_back(a.mass);
    dofs.push_back(a.dof);
    homogeneous = homogeneous && a.mass == p.agents.front().mass && a.dof == p.agents.front().dof;
  }
  if (homogeneous && !p.agents.empty()) {
    put("mass", format_double(masses.front()));
    put("dof", format_double(dofs.front()));
  } else {
    put("mass", join(masses));
    put("dof", join(dofs));
  }

  if (!cfg.dt_from_rule) put("dt", format_double(s.dt));
  put("t_end", format_double(s.t_end));
  put("sample_every", std::to_string(s.sample_every));
  put("model", to_string(s.model));
  put("seed", std::to_string(s.seed));

  put("init.kind", sc.init_kind);
  put("init.x_scale", format_double(sc.measure.x_scale));
  put("init.w_scale", format_double(sc.measure.w_scale));
  put("init.separation", format_double(sc.measure.separation));
  put("init.truncation", format_double(sc.measure.truncation));
  put("init.mode", sc.init_mode == InitMode::from_v ? "from_v" : "from_w");
  if (sc.init_kind == "explicit") {
    put("init.positions", join(sc.positions));
    put("init.velocities", join(sc.velocities));
  }

  put("K", format_double(sc.K));
  if (!sc.c_list.empty()) put("c_list", join(sc.c_list));
  if (!sc.n_list.empty()) {
    std::string ns;
    for (std::size_t i = 0; i < sc.n_list.size(); ++i)
      ns += (i ? ", " : "") + std::to_string(sc.n_list[i]);
    put("n_list", ns);
  }
  put("band.climit_lo", format_double(sc.climit_band.lo));
  put("band.climit_hi", format_double(sc.climit_band.hi));
  put("band.kinetic_lo", format_double(sc.kinetic_band.lo));
  put("band.kinetic_hi", format_double(sc.kinetic_band.hi));
  put("fit.r2_min", format_double(sc.r2_min));
  put("fit.window", format_double(sc.fit_window));
  return out.str();
}

EnsembleState build_initial(const RunConfig& cfg, Model model) {
  const Scenario& sc = cfg.scenario;
  if (sc.init_kind == "explicit") {
    const InitMode mode = model == Model::cs ? InitMode::from_w : sc.init_mode;
    return prepare_initial(sc.positions, sc.velocities, mode, cfg.params).state;
  }
  return sample_cloud(sc.measure, cfg.params.size(), cfg.sim.seed).state;
}

}  // namespace rcs
