#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "app.hpp"
#include "relform/errors.hpp"
#include "relform/kernel.hpp"
#include "relform/spectral.hpp"
#include "relform/version.hpp"

namespace relform::app {

namespace {

const std::vector<std::string> kKeys = {"prime_q",           "epsilon",         "max_tree_radius_F",
                                        "max_tree_radius_E", "n_max",           "congruence_level_k",
                                        "anisotropic_shells", "random_data",    "f1",
                                        "f2",                "pairs",           "torus_instances",
                                        "constants_file"};

long get_long(const json& j, const char* key, long fallback, long lo, long hi) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string(key) + " must be an integer");
  const long x = v.get<long>();
  if (x < lo || x > hi)
    throw ConfigError(std::string(key) + " = " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  return x;
}

std::vector<std::pair<HeckeFunction, HeckeFunction>> default_pairs() {
  const HeckeFunction one = HeckeFunction::indicator(0), t1 = HeckeFunction::indicator(1);
  const HeckeFunction mix{{{0, Rational(1)}, {1, Rational(1, 2)}}};
  const HeckeFunction signed_mix{{{0, Rational(3)}, {1, Rational(-1, 4)}}};
  return {{one, one}, {t1, one}, {mix, mix}, {signed_mix, t1}};
}

const char* kind_name(TorusKind k) { return k == TorusKind::split_M ? "split-M" : "anisotropic"; }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

}  // namespace

LocalField RunConfig::field() const { return epsilon ? LocalField(prime_q, *epsilon) : LocalField(prime_q); }

json rational_to_json(const Rational& r) {
  return json::array({r.numerator().get_str(), r.denominator().get_str()});
}

Rational rational_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("rational must be [numerator, denominator]");
  auto part = [](const json& v) -> std::string {
    if (v.is_number_integer()) return std::to_string(v.get<long>());
    if (v.is_string()) return v.get<std::string>();
    throw ConfigError("rational parts must be integers");
  };
  try {
    return Rational::parse(part(j[0]) + "/" + part(j[1]));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad rational: ") + e.what());
  }
}

json hecke_to_json(const HeckeFunction& f) {
  json out = json::array();
  for (const auto& [h, c] : f.coeffs) {
    if (c.is_zero()) continue;
    out.push_back(json::array({h, c.numerator().get_str(), c.denominator().get_str()}));
  }
  return out;
}

HeckeFunction hecke_from_json(const json& j, long max_height) {
  if (!j.is_array()) throw ConfigError("Hecke function must be a list of [height, numerator, denominator]");
  HeckeFunction f;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer())
      throw ConfigError("Hecke entry must be [height, numerator, denominator]");
    const long h = e[0].get<long>();
    if (h < 0 || h > max_height) throw ConfigError("Hecke height " + std::to_string(h) + " outside the cap");
    const Rational c = rational_from_json(json::array({e[1], e[2]}));
    if (f.coeffs.count(h)) throw ConfigError("duplicate Hecke height " + std::to_string(h));
    if (!c.is_zero()) f.coeffs[h] = c;
  }
  return f;
}

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) throw ConfigError("unknown config key: " + key);
  RunConfig cfg;
  cfg.prime_q = get_long(j, "prime_q", 3, 3, 97);
  if (j.contains("epsilon")) {
    if (!j.at("epsilon").is_number_integer()) throw ConfigError("epsilon must be an integer");
    cfg.epsilon = j.at("epsilon").get<long>();
  }
  const LocalField F = cfg.field();  // validates q and epsilon
  cfg.max_tree_radius_F = get_long(j, "max_tree_radius_F", kMaxTreeRadiusF, 1, kMaxTreeRadiusF);
  cfg.max_tree_radius_E = get_long(j, "max_tree_radius_E", kMaxTreeRadiusE, 1, kMaxTreeRadiusE);
  cfg.n_max = get_long(j, "n_max", 6, 2, kKernelCellCap);
  cfg.congruence_level_k = get_long(j, "congruence_level_k", 2, 1, 3);
  cfg.anisotropic_shells = get_long(j, "anisotropic_shells", 1, 0, 2);
  cfg.random_data = get_long(j, "random_data", 50, 0, 1000);

  const long hmax = std::min(cfg.max_tree_radius_E, 3L);
  if (j.contains("pairs")) {
    if (!j.at("pairs").is_array()) throw ConfigError("pairs must be a list");
    for (const auto& p : j.at("pairs")) {
      if (!p.is_object() || !p.contains("f1") || !p.contains("f2")) throw ConfigError("each pair needs f1 and f2");
      cfg.pairs.emplace_back(hecke_from_json(p.at("f1"), hmax), hecke_from_json(p.at("f2"), hmax));
    }
  } else {
    cfg.pairs = default_pairs();
  }
  if (j.contains("f1") != j.contains("f2")) throw ConfigError("f1 and f2 must be given together");
  if (j.contains("f1"))
    cfg.pairs.insert(cfg.pairs.begin(), {hecke_from_json(j.at("f1"), hmax), hecke_from_json(j.at("f2"), hmax)});
  if (cfg.pairs.empty()) throw ConfigError("no test-function pairs");

  if (j.contains("torus_instances")) {
    if (!j.at("torus_instances").is_array()) throw ConfigError("torus_instances must be a list");
    for (const auto& t : j.at("torus_instances")) {
      if (!t.is_object() || !t.contains("kind") || !t.at("kind").is_string())
        throw ConfigError("torus instance needs a kind");
      const std::string kind = t.at("kind").get<std::string>();
      TorusOverride o;
      if (kind == "split-M") o.kind = TorusKind::split_M;
      else if (kind == "anisotropic") o.kind = TorusKind::anisotropic;
      else throw ConfigError("unknown torus kind: " + kind);
      if (!t.contains("c0") || !t.at("c0").is_array() || t.at("c0").size() != 1)
        throw ConfigError("torus instance needs exactly one c0 constant (κ_S = {1})");
      o.c0.push_back(rational_from_json(t.at("c0")[0]));
      cfg.torus_instances.push_back(o);
    }
  }
  std::string cf = "relform_constants.json";
  if (j.contains("constants_file")) {
    if (!j.at("constants_file").is_string()) throw ConfigError("constants_file must be a string");
    cf = j.at("constants_file").get<std::string>();
  }
  cfg.constants_file = std::filesystem::path(cf).is_absolute() ? std::filesystem::path(cf) : base_dir / cf;

  json c;
  c["prime_q"] = cfg.prime_q;
  c["epsilon"] = F.eps();
  c["max_tree_radius_F"] = cfg.max_tree_radius_F;
  c["max_tree_radius_E"] = cfg.max_tree_radius_E;
  c["n_max"] = cfg.n_max;
  c["congruence_level_k"] = cfg.congruence_level_k;
  c["anisotropic_shells"] = cfg.anisotropic_shells;
  c["random_data"] = cfg.random_data;
  c["pairs"] = json::array();
  for (const auto& [f1, f2] : cfg.pairs) c["pairs"].push_back({{"f1", hecke_to_json(f1)}, {"f2", hecke_to_json(f2)}});
  c["torus_instances"] = json::array();
  for (const auto& o : cfg.torus_instances)
    c["torus_instances"].push_back({{"kind", kind_name(o.kind)}, {"c0", json::array({rational_to_json(o.c0[0])})}});
  cfg.canonical = c;
  return cfg;
}

RunConfig load_config(const std::optional<std::filesystem::path>& path) {
  if (!path) return parse_config(json::object(), std::filesystem::current_path());
  const json j = parse_json_text(read_file(*path), path->string());
  return parse_config(j, std::filesystem::absolute(*path).parent_path());
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char ch : cfg.canonical.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

json Constants::to_json(const RunConfig& cfg) const {
  return {{"library_version", kLibraryVersion},
          {"config_hash", config_hash(cfg)},
          {"prime_q", prime_q},
          {"congruence_level_k", congruence_level_k},
          {"anisotropic_shells", anisotropic_shells},
          {"anchor", {{"pair", "indicator of K"}, {"slope", rational_to_json(anchor_slope)},
                      {"intercept", rational_to_json(anchor_intercept)}}},
          {"formal_degree", rational_to_json(formal_degree)},
          {"c0_M", rational_to_json(c0_M)},
          {"c0_aniso", rational_to_json(c0_aniso)}};
}

Constants Constants::from_json(const json& j) {
  try {
    Constants k;
    k.prime_q = j.at("prime_q").get<long>();
    k.congruence_level_k = j.at("congruence_level_k").get<long>();
    k.anisotropic_shells = j.at("anisotropic_shells").get<long>();
    k.anchor_slope = rational_from_json(j.at("anchor").at("slope"));
    k.anchor_intercept = rational_from_json(j.at("anchor").at("intercept"));
    k.formal_degree = rational_from_json(j.at("formal_degree"));
    k.c0_M = rational_from_json(j.at("c0_M"));
    k.c0_aniso = rational_from_json(j.at("c0_aniso"));
    return k;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("constants file: ") + e.what());
  }
}

Constants fit_constants(const RunConfig& cfg) {
  const LocalField F = cfg.field();
  const HeckeFunction one = HeckeFunction::indicator(0);
  const Rational k1 = truncated_kernel(F, one, one, 1), k2 = truncated_kernel(F, one, one, 2),
                 k3 = truncated_kernel(F, one, one, 3);
  if (k3 - k2 != k2 - k1) throw InternalConsistencyError("indicator kernel is not yet linear at n = 1");
  Constants k;
  k.prime_q = cfg.prime_q;
  k.congruence_level_k = cfg.congruence_level_k;
  k.anisotropic_shells = cfg.anisotropic_shells;
  k.anchor_slope = k2 - k1;
  k.anchor_intercept = k1 - k.anchor_slope;
  k.formal_degree = formal_degree_from_slope(F, k.anchor_slope);
  const auto g = calibrate_geometric(F, cfg.congruence_level_k, k.anchor_slope, k.anchor_intercept,
                                     cfg.anisotropic_shells);
  k.c0_M = g.c0_M;
  k.c0_aniso = g.c0_aniso;
  return k;
}

Constants ensure_constants(const RunConfig& cfg, std::ostream& log) {
  if (!std::filesystem::exists(cfg.constants_file)) {
    const Constants k = fit_constants(cfg);
    write_file(cfg.constants_file, k.to_json(cfg).dump(2) + "\n");
    log << "constants written to " << cfg.constants_file.string() << " (anchor slope " << k.anchor_slope.str()
        << ")\n";
    return k;
  }
  const Constants k = Constants::from_json(parse_json_text(read_file(cfg.constants_file), cfg.constants_file.string()));
  if (k.prime_q != cfg.prime_q || k.congruence_level_k != cfg.congruence_level_k ||
      k.anisotropic_shells != cfg.anisotropic_shells)
    throw ConfigError("constants in " + cfg.constants_file.string() +
                      " were fitted for another q, level or shell count; recalibrate with --force-calibrate");
  return k;
}

int calibrate(const RunConfig& cfg, bool force, std::ostream& log) {
  const bool exists = std::filesystem::exists(cfg.constants_file);
  if (exists && !force) {
    log << "refusing to overwrite " << cfg.constants_file.string() << "; pass --force-calibrate to refit\n";
    return 3;
  }
  const Constants k = fit_constants(cfg);
  if (exists) {
    std::string before = "unreadable";
    try {
      const Constants old =
          Constants::from_json(parse_json_text(read_file(cfg.constants_file), cfg.constants_file.string()));
      before = "q " + std::to_string(old.prime_q) + ", formal_degree " + old.formal_degree.str() + ", c0_M " +
               old.c0_M.str() + ", c0_aniso " + old.c0_aniso.str();
    } catch (const ConfigError&) {
    }
    std::ofstream cl(cfg.constants_file.string() + ".changelog", std::ios::app);
    cl << utc_now() << " forced recalibration (config " << config_hash(cfg) << "): was " << before << "; now q "
       << k.prime_q << ", formal_degree " << k.formal_degree.str() << ", c0_M " << k.c0_M.str() << ", c0_aniso "
       << k.c0_aniso.str() << "\n";
  }
  write_file(cfg.constants_file, k.to_json(cfg).dump(2) + "\n");
  log << "constants written to " << cfg.constants_file.string() << " (anchor slope " << k.anchor_slope.str()
      << ", intercept " << k.anchor_intercept.str() << ")\n";
  return 0;
}

std::vector<SigmaTorusInstance> torus_instances(const RunConfig& cfg, const Constants& k) {
  auto inst = default_instances(cfg.field(), cfg.congruence_level_k, k.c0_M, k.c0_aniso, cfg.anisotropic_shells);
  for (const auto& o : cfg.torus_instances)
    for (auto& t : inst)
      if (t.kind == o.kind) t.c0 = o.c0;
  return inst;
}

}  // namespace relform::app
