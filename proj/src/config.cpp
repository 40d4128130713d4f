#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "ewbem/driver.hpp"

namespace ewbem {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) throw ConfigError("`" + key + "`: expected a number, got `" + v + "`");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long out = 0;
  try {
    out = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) throw ConfigError("`" + key + "`: expected an integer, got `" + v + "`");
  return static_cast<int>(out);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("`" + key + "`: expected on/off, got `" + v + "`");
}

int parse_component(const std::string& key, const std::string& v) {
  if (v == "x" || v == "0") return 0;
  if (v == "y" || v == "1") return 1;
  if (v == "z" || v == "2") return 2;
  if (v == "all" || v == "*") return -1;
  throw ConfigError("`" + key + "`: component must be x, y, z or all, got `" + v + "`");
}

template <std::size_t N, class T, class F>
std::array<T, N> fixed_list(const std::string& key, const std::string& v, F convert) {
  const auto w = words(v);
  if (w.size() != N) throw ConfigError("`" + key + "`: expected " + std::to_string(N) + " values");
  std::array<T, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = convert(key, w[i]);
  return out;
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

unsigned workers_from_env(unsigned fallback) {
  const char* env = std::getenv("EWBEM_WORKERS");
  if (env == nullptr || *env == '\0') return fallback;
  const int n = to_int("EWBEM_WORKERS", env);
  if (n < 1) throw ConfigError("EWBEM_WORKERS must be >= 1");
  return static_cast<unsigned>(n);
}

SweepConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  SweepConfig cfg;
  std::optional<double> young, poisson, lambda, mu, rho;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected `key = value`");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": `" + key + "` has no value");

    if (key == "mesh") {
      if (value == "box") cfg.mesh.kind = MeshSource::Kind::Box;
      else if (value == "file") cfg.mesh.kind = MeshSource::Kind::File;
      else if (value == "cavity-box") cfg.mesh.kind = MeshSource::Kind::CavityBox;
      else throw ConfigError("`mesh` must be box, file or cavity-box");
    } else if (key == "mesh.lengths") {
      cfg.mesh.lengths = fixed_list<3, double>(key, value, to_double);
    } else if (key == "mesh.divisions") {
      cfg.mesh.divisions = fixed_list<3, int>(key, value, to_int);
    } else if (key == "mesh.file") {
      cfg.mesh.file = resolve_path(base_dir, value);
    } else if (key == "cavity") {
      const auto w = words(value);
      if (w.size() != 5) throw ConfigError("`cavity` expects `cx cy cz radius subdivisions`");
      cfg.mesh.cavities.push_back({Vec3(to_double(key, w[0]), to_double(key, w[1]), to_double(key, w[2])),
                                   to_double(key, w[3]), to_int(key, w[4])});
    } else if (key == "material.E") {
      young = to_double(key, value);
    } else if (key == "material.nu") {
      poisson = to_double(key, value);
    } else if (key == "material.lambda") {
      lambda = to_double(key, value);
    } else if (key == "material.mu") {
      mu = to_double(key, value);
    } else if (key == "material.rho") {
      rho = to_double(key, value);
    } else if (key == "signal") {
      const auto w = words(value);
      if (w.size() < 2) throw ConfigError("`signal` expects `name kind [args]`");
      const std::string& name = w[0];
      if (name == "zero") throw ConfigError("signal name `zero` is reserved");
      if (cfg.signals.count(name) != 0) throw ConfigError("signal `" + name + "` defined twice");
      if (w[1] == "heaviside" && w.size() == 3) {
        cfg.signals.emplace(name, TimeSignal::heaviside(to_double(key, w[2])));
      } else if (w[1] == "zero" && w.size() == 2) {
        cfg.signals.emplace(name, TimeSignal::zero());
      } else if (w[1] == "csv" && w.size() == 3) {
        cfg.signals.emplace(name, TimeSignal::from_csv(resolve_path(base_dir, w[2])));
      } else {
        throw ConfigError("`signal " + value + "`: kind must be `heaviside AMP`, `zero` or `csv PATH`");
      }
    } else if (key == "bc") {
      const auto w = words(value);
      if (w.size() != 4) throw ConfigError("`bc` expects `region component kind signal`");
      BcRule rule;
      rule.region_tag = to_int(key, w[0]);
      rule.component = parse_component(key, w[1]);
      if (w[2] == "displacement") rule.kind = BcKind::Displacement;
      else if (w[2] == "traction") rule.kind = BcKind::Traction;
      else throw ConfigError("`bc`: kind must be displacement or traction");
      rule.signal = w[3] == "zero" ? "" : w[3];
      cfg.bcs.push_back(rule);
    } else if (key == "allow_floating") {
      cfg.allow_floating = to_bool(key, value);
    } else if (key == "period") {
      cfg.period = to_double(key, value);
    } else if (key == "n_omega") {
      cfg.n_omega = to_int(key, value);
    } else if (key == "kappa") {
      cfg.kappa = to_double(key, value);
    } else if (key == "window") {
      cfg.window = parse_window(value);
    } else if (key == "sem") {
      cfg.sem = to_bool(key, value);
    } else if (key == "sem.depth") {
      cfg.sem_depth = to_int(key, value);
    } else if (key == "precondition") {
      if (value == "block") cfg.precondition = true;
      else if (value == "none") cfg.precondition = false;
      else throw ConfigError("`precondition` must be block or none");
    } else if (key == "gmres.tol") {
      cfg.gmres.tol = to_double(key, value);
    } else if (key == "gmres.restart") {
      cfg.gmres.restart = to_int(key, value);
    } else if (key == "gmres.maxiter") {
      cfg.gmres.maxiter = to_int(key, value);
    } else if (key == "quadrature") {
      if (value == "default") cfg.refined_quadrature = false;
      else if (value == "refined") cfg.refined_quadrature = true;
      else throw ConfigError("`quadrature` must be default or refined");
    } else if (key == "probe") {
      const auto w = words(value);
      if (w.size() != 4) throw ConfigError("`probe` expects `name element:I|region:TAG component quantity`");
      Probe p;
      p.name = w[0];
      const std::string& where = w[1];
      if (where.rfind("element:", 0) == 0) {
        const int e = to_int(key, where.substr(8));
        if (e < 0) throw ConfigError("probe `" + p.name + "`: negative element index");
        p.element = static_cast<std::size_t>(e);
      } else if (where.rfind("region:", 0) == 0) {
        p.region = to_int(key, where.substr(7));
      } else {
        throw ConfigError("probe `" + p.name + "`: location must be element:I or region:TAG");
      }
      p.component = parse_component(key, w[2]);
      if (p.component < 0) throw ConfigError("probe `" + p.name + "`: component must be x, y or z");
      if (w[3] == "displacement") p.quantity = ProbeQuantity::Displacement;
      else if (w[3] == "traction") p.quantity = ProbeQuantity::Traction;
      else throw ConfigError("probe `" + p.name + "`: quantity must be displacement or traction");
      cfg.probes.push_back(p);
    } else if (key == "output.dir") {
      cfg.output_dir = resolve_path(base_dir, value);
    } else if (key == "workers") {
      const int n = to_int(key, value);
      if (n < 1) throw ConfigError("`workers` must be >= 1");
      cfg.workers = static_cast<unsigned>(n);
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key `" + key + "`");
    }
  }

  if (!rho) throw ConfigError("material.rho is required");
  if (young && poisson && !lambda && !mu) {
    cfg.material = Material::from_young(*young, *poisson, *rho);
  } else if (lambda && mu && !young && !poisson) {
    cfg.material = Material::from_lame(*lambda, *mu, *rho);
  } else {
    throw ConfigError("give either material.E and material.nu, or material.lambda and material.mu");
  }
  cfg.workers = workers_from_env(cfg.workers);
  cfg.validate();
  return cfg;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

void SweepConfig::validate() const {
  if (!(period > 0.0)) throw ConfigError("period must be positive");
  if (n_omega < 4 || n_omega % 2 != 0) throw ConfigError("n_omega must be an even integer >= 4");
  if (!(kappa >= 0.0)) throw ConfigError("kappa must be non-negative");
  if (sem_depth < 1) throw ConfigError("sem.depth must be >= 1");
  if (!(gmres.tol > 0.0 && gmres.tol < 1.0)) throw ConfigError("gmres.tol must lie in (0, 1)");
  if (gmres.restart < 1 || gmres.maxiter < 1) throw ConfigError("gmres.restart and gmres.maxiter must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (mesh.kind == MeshSource::Kind::File && mesh.file.empty()) throw ConfigError("mesh = file needs mesh.file");
  if (mesh.kind != MeshSource::Kind::File) {
    for (int i = 0; i < 3; ++i) {
      if (!(mesh.lengths[i] > 0.0)) throw ConfigError("mesh.lengths must be positive");
      if (mesh.divisions[i] < 1) throw ConfigError("mesh.divisions must be >= 1");
    }
  }
  if (mesh.kind == MeshSource::Kind::CavityBox && mesh.cavities.empty()) {
    throw ConfigError("mesh = cavity-box needs at least one `cavity` line");
  }
  for (const auto& c : mesh.cavities) {
    if (!(c.radius > 0.0) || c.subdivisions < 0) throw ConfigError("cavity needs radius > 0 and subdivisions >= 0");
  }
  if (bcs.empty()) throw ConfigError("no boundary conditions given");
  for (const auto& bc : bcs) {
    if (!bc.signal.empty() && signals.count(bc.signal) == 0) {
      throw ConfigError("bc on region " + std::to_string(bc.region_tag) + " uses undefined signal `" + bc.signal + "`");
    }
  }
  if (probes.empty()) throw ConfigError("at least one probe is required");
  std::set<std::string> names;
  for (const auto& p : probes) {
    if (!names.insert(p.name).second) throw ConfigError("probe `" + p.name + "` defined twice");
    if (p.name.find_first_of("/\\") != std::string::npos) throw ConfigError("probe names cannot contain slashes");
  }
}

TriangleMesh build_mesh(const MeshSource& source) {
  switch (source.kind) {
    case MeshSource::Kind::Box:
      return generate_box_mesh(source.lengths, source.divisions);
    case MeshSource::Kind::File:
      return load_mesh(source.file, MeshFormat::Ascii, true);
    case MeshSource::Kind::CavityBox: {
      std::vector<TriangleMesh> parts;
      parts.push_back(generate_box_mesh(source.lengths, source.divisions));
      int tag = 6;
      for (const auto& c : source.cavities) {
        for (int i = 0; i < 3; ++i) {
          if (c.center[i] - c.radius <= 0.0 || c.center[i] + c.radius >= source.lengths[i]) {
            throw ConfigError("cavity does not fit inside the box");
          }
        }
        parts.push_back(generate_icosphere(c.center, c.radius, c.subdivisions, true, tag++));
      }
      return merge_meshes(parts, true);
    }
  }
  throw ConfigError("unknown mesh source");
}

}  // namespace ewbem
