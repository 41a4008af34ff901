#include "hydrostat/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

namespace hydrostat {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) throw ConfigError(key + ": not a number: '" + s + "'");
  return v;
}

long long parse_integer(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) throw ConfigError(key + ": not an integer: '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const std::string& key) {
  const long long v = parse_integer(s, key);
  if (v < -1000000000LL || v > 1000000000LL) throw ConfigError(key + ": out of range");
  return static_cast<int>(v);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(trim(item));
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& s, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(parse_double(item, key));
  return out;
}

std::vector<int> parse_ints(const std::string& s, const std::string& key) {
  std::vector<int> out;
  for (const auto& item : split_list(s)) out.push_back(parse_int(item, key));
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::string fmt_list(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt(v[i]);
    } else {
      out += std::to_string(v[i]);
    }
  }
  return out;
}

std::string initial_kind_name(InitialKind k) {
  switch (k) {
    case InitialKind::analytic: return "analytic";
    case InitialKind::layered: return "layered";
    case InitialKind::snapshot: return "snapshot";
  }
  return "analytic";
}

struct Entry {
  std::string section;
  std::string key;
  std::function<void(RunConfig&, const std::string&, const std::string&)> parse;
  std::function<std::string(const RunConfig&)> print;
};

#define HS_DOUBLE(sec, name, member)                                                          \
  Entry {                                                                                     \
    sec, name, [](RunConfig& c, const std::string& v, const std::string& k) {                 \
      c.member = parse_double(v, k);                                                          \
    },                                                                                        \
        [](const RunConfig& c) { return fmt(c.member); }                                      \
  }
#define HS_INT(sec, name, member)                                                             \
  Entry {                                                                                     \
    sec, name, [](RunConfig& c, const std::string& v, const std::string& k) {                 \
      c.member = parse_int(v, k);                                                             \
    },                                                                                        \
        [](const RunConfig& c) { return std::to_string(c.member); }                           \
  }
#define HS_STRING(sec, name, member)                                                          \
  Entry {                                                                                     \
    sec, name, [](RunConfig& c, const std::string& v, const std::string&) {                   \
      c.member = trim(v);                                                                     \
    },                                                                                        \
        [](const RunConfig& c) { return std::string(c.member); }                              \
  }
#define HS_DOUBLES(sec, name, member)                                                         \
  Entry {                                                                                     \
    sec, name, [](RunConfig& c, const std::string& v, const std::string& k) {                 \
      c.member = parse_doubles(v, k);                                                         \
    },                                                                                        \
        [](const RunConfig& c) { return fmt_list(c.member); }                                 \
  }

const std::vector<Entry>& schema() {
  static const std::vector<Entry> entries = {
      Entry{"run", "experiment",
            [](RunConfig& c, const std::string& v, const std::string& k) {
              const std::string s = trim(v);
              if (s == "energy_identity") c.experiment = ExperimentKind::energy_identity;
              else if (s == "decomposition") c.experiment = ExperimentKind::decomposition;
              else if (s == "stability") c.experiment = ExperimentKind::stability;
              else if (s == "mollification_convergence") c.experiment = ExperimentKind::mollification;
              else if (s == "lemma_suite") c.experiment = ExperimentKind::lemma_suite;
              else throw ConfigError(k + ": unknown experiment '" + s + "'");
            },
            [](const RunConfig& c) { return to_string(c.experiment); }},
      Entry{"run", "seed",
            [](RunConfig& c, const std::string& v, const std::string& k) {
              const long long s = parse_integer(v, k);
              if (s < 0) throw ConfigError(k + ": must be non-negative");
              c.seed = static_cast<std::uint64_t>(s);
            },
            [](const RunConfig& c) { return std::to_string(c.seed); }},
      HS_DOUBLE("run", "t_end", t_end),
      Entry{"run", "output",
            [](RunConfig& c, const std::string& v, const std::string&) { c.output = trim(v); },
            nullptr},
      HS_INT("grid", "nx", grid.nx),
      HS_INT("grid", "ny", grid.ny),
      HS_INT("grid", "nz", grid.nz),
      HS_DOUBLE("physics", "f0", physics.f0),
      HS_DOUBLE("physics", "h", physics.h),
      HS_DOUBLE("step", "dt", step.dt),
      HS_DOUBLE("step", "cfl_target", step.cfl_target),
      Entry{"initial", "kind",
            [](RunConfig& c, const std::string& v, const std::string& k) {
              const std::string s = trim(v);
              if (s == "analytic") c.initial.kind = InitialKind::analytic;
              else if (s == "layered") c.initial.kind = InitialKind::layered;
              else if (s == "snapshot") c.initial.kind = InitialKind::snapshot;
              else throw ConfigError(k + ": unknown kind '" + s + "'");
            },
            [](const RunConfig& c) { return initial_kind_name(c.initial.kind); }},
      HS_STRING("initial", "field", initial.analytic.name),
      HS_DOUBLE("initial", "amplitude", initial.analytic.amplitude),
      HS_DOUBLE("initial", "a1", initial.layered.a[0]),
      HS_DOUBLE("initial", "a2", initial.layered.a[1]),
      HS_DOUBLE("initial", "delta", initial.layered.delta),
      HS_DOUBLE("initial", "eta", initial.layered.eta),
      HS_DOUBLE("initial", "sigma1", initial.layered.sigma[0]),
      HS_DOUBLE("initial", "sigma2", initial.layered.sigma[1]),
      HS_STRING("initial", "background", initial.background.name),
      HS_DOUBLE("initial", "background_amplitude", initial.background.amplitude),
      Entry{"initial", "snapshot",
            [](RunConfig& c, const std::string& v, const std::string&) {
              c.initial.snapshot = trim(v);
            },
            [](const RunConfig& c) { return c.initial.snapshot.string(); }},
      HS_DOUBLE("initial", "epsilon", initial.epsilon),
      HS_DOUBLE("bounds", "C0", bounds.C0),
      HS_DOUBLE("bounds", "C", bounds.C),
      HS_DOUBLE("bounds", "C0star", bounds.C0star),
      HS_DOUBLES("output", "snapshot_times", snapshot_times),
      HS_DOUBLES("output", "qs", qs),
      HS_INT("energy_identity", "halvings", energy.halvings),
      HS_INT("decomposition", "refine_nz", decomposition.refine_nz),
      HS_DOUBLE("stability", "perturbation", stability.perturbation),
      HS_DOUBLE("stability", "eta", stability.eta),
      HS_DOUBLES("mollification", "epsilons", mollification.epsilons),
      HS_DOUBLES("mollification", "times", mollification.times),
      HS_INT("lemma_suite", "moser_instances", lemma.moser_instances),
      HS_INT("lemma_suite", "moser_kmax", lemma.moser_kmax),
      HS_DOUBLE("lemma_suite", "moser_m0_max", lemma.moser_m0_max),
      HS_INT("lemma_suite", "triples", lemma.triples),
      HS_INT("lemma_suite", "band", lemma.band),
      HS_INT("lemma_suite", "nx", lemma.nx),
      Entry{"lemma_suite", "nz",
            [](RunConfig& c, const std::string& v, const std::string& k) {
              c.lemma.nz = parse_ints(v, k);
            },
            [](const RunConfig& c) { return fmt_list(c.lemma.nz); }},
  };
  return entries;
}

#undef HS_DOUBLE
#undef HS_INT
#undef HS_STRING
#undef HS_DOUBLES

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::energy_identity: return "energy_identity";
    case ExperimentKind::decomposition: return "decomposition";
    case ExperimentKind::stability: return "stability";
    case ExperimentKind::mollification: return "mollification_convergence";
    case ExperimentKind::lemma_suite: return "lemma_suite";
  }
  return "energy_identity";
}

RunConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  std::map<std::string, const Entry*> by_key;
  for (const auto& e : schema()) by_key[e.section + "." + e.key] = &e;

  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config: key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = by_key.find(full);
      if (it == by_key.end()) throw ConfigError("config: unknown key '" + full + "'");
      it->second->parse(cfg, value.data(), full);
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

GridPtr make_run_grid(const RunConfig& cfg, int nz_override) {
  return make_grid(cfg.grid.nx, cfg.grid.ny, nz_override > 0 ? nz_override : cfg.grid.nz,
                   cfg.physics.h);
}

void validate(const RunConfig& cfg) {
  make_run_grid(cfg);
  validate(cfg.physics);
  validate(cfg.step);
  validate(cfg.initial, cfg.physics.h);
  BoundParams b = cfg.bounds;
  b.h = cfg.physics.h;
  validate(b);
  if (cfg.initial.kind == InitialKind::analytic) {
    analytic_field(make_grid(8, 8, 8, cfg.physics.h), cfg.initial.analytic);
  }
  if (cfg.initial.kind == InitialKind::layered) {
    analytic_field(make_grid(8, 8, 8, cfg.physics.h), cfg.initial.background);
  }
  if (!(cfg.t_end > 0.0)) throw ConfigError("run.t_end must be positive");
  for (double t : cfg.snapshot_times) {
    if (t < 0.0 || t > cfg.t_end) throw ConfigError("output.snapshot_times outside [0, t_end]");
  }
  for (double q : cfg.qs) {
    if (!(q >= 1.0)) throw ConfigError("output.qs entries must be >= 1");
  }
  switch (cfg.experiment) {
    case ExperimentKind::energy_identity:
      if (cfg.energy.halvings < 1 || cfg.energy.halvings > 6) {
        throw ConfigError("energy_identity.halvings must lie in [1, 6]");
      }
      break;
    case ExperimentKind::decomposition:
      if (cfg.decomposition.refine_nz != 0) make_run_grid(cfg, cfg.decomposition.refine_nz);
      break;
    case ExperimentKind::stability:
      if (cfg.stability.perturbation < 0.0) throw ConfigError("stability.perturbation must be >= 0");
      if (!(cfg.stability.eta > 0.0) || cfg.stability.eta > cfg.physics.h) {
        throw ConfigError("stability.eta must lie in (0, h]");
      }
      break;
    case ExperimentKind::mollification: {
      const auto& eps = cfg.mollification.epsilons;
      if (eps.size() < 2) throw ConfigError("mollification.epsilons needs at least two radii");
      for (std::size_t i = 0; i < eps.size(); ++i) {
        InitialDataSpec s = cfg.initial;
        s.epsilon = eps[i];
        validate(s, cfg.physics.h);
        if (!(eps[i] > 0.0)) throw ConfigError("mollification.epsilons must be positive");
        if (i && !(eps[i] < eps[i - 1])) {
          throw ConfigError("mollification.epsilons must be strictly decreasing");
        }
      }
      for (double t : cfg.mollification.times) {
        if (!(t > 0.0) || t > cfg.t_end) throw ConfigError("mollification.times outside (0, t_end]");
      }
      break;
    }
    case ExperimentKind::lemma_suite: {
      const auto& l = cfg.lemma;
      if (l.moser_instances < 1 || l.moser_kmax < 1 || l.moser_kmax > 60) {
        throw ConfigError("lemma_suite: need moser_instances >= 1 and moser_kmax in [1, 60]");
      }
      if (!(l.moser_m0_max >= 2.0)) throw ConfigError("lemma_suite.moser_m0_max must be >= 2");
      if (l.triples < 1 || l.band < 1) throw ConfigError("lemma_suite: triples and band must be >= 1");
      if (l.nz.size() != 2) throw ConfigError("lemma_suite.nz needs exactly two resolutions");
      for (int nz : l.nz) {
        make_grid(l.nx, l.nx, nz, cfg.physics.h);
        if (3 * l.band > std::min(l.nx, nz)) {
          throw ConfigError("lemma_suite.band not resolved by the grids");
        }
      }
      break;
    }
  }
}

std::string canonical_form(const RunConfig& cfg) {
  std::vector<std::string> lines;
  for (const auto& e : schema()) {
    if (!e.print) continue;
    lines.push_back(e.section + "." + e.key + " = " + e.print(cfg));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256: digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string config_hash(const RunConfig& cfg) { return sha256_hex(canonical_form(cfg)); }

}  // namespace hydrostat
