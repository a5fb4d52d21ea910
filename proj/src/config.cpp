#include "posfem/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "posfem/output.hpp"

namespace posfem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key, "expected a number, got '" + v + "'");
  return out;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

// shortest text that parses back to the same double
std::string shortest(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, p) : format_double(v);
}

std::string from_bool(bool b) { return b ? "true" : "false"; }

struct Field {
  std::function<void(ExperimentSpec&, const std::string& key, const std::string& value)> set;
  std::function<std::string(const ExperimentSpec&)> get;
};

Field real(double ExperimentSpec::*member) {
  return {[member](ExperimentSpec& s, const std::string& k, const std::string& v) { s.*member = to_double(k, v); },
          [member](const ExperimentSpec& s) { return shortest(s.*member); }};
}

template <typename Get>
Field real_at(Get get) {
  return {[get](ExperimentSpec& s, const std::string& k, const std::string& v) { get(s) = to_double(k, v); },
          [get](const ExperimentSpec& s) { return shortest(get(const_cast<ExperimentSpec&>(s))); }};
}

template <typename Get>
Field integer_at(Get get) {
  return {[get](ExperimentSpec& s, const std::string& k, const std::string& v) {
            const long long x = to_integer(k, v);
            if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
              throw ConfigError(k, "integer out of range");
            }
            get(s) = static_cast<int>(x);
          },
          [get](const ExperimentSpec& s) { return std::to_string(get(const_cast<ExperimentSpec&>(s))); }};
}

template <typename Get>
Field boolean_at(Get get) {
  return {[get](ExperimentSpec& s, const std::string& k, const std::string& v) { get(s) = to_bool(k, v); },
          [get](const ExperimentSpec& s) { return from_bool(get(const_cast<ExperimentSpec&>(s))); }};
}

// ordered for serialisation
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = [] {
    std::vector<std::pair<std::string, Field>> t;
    t.emplace_back("mesh.nx", integer_at([](ExperimentSpec& s) -> int& { return s.nx; }));
    t.emplace_back("mesh.ny", integer_at([](ExperimentSpec& s) -> int& { return s.ny; }));
    t.emplace_back("mesh.x_min", real_at([](ExperimentSpec& s) -> double& { return s.domain.x_min; }));
    t.emplace_back("mesh.x_max", real_at([](ExperimentSpec& s) -> double& { return s.domain.x_max; }));
    t.emplace_back("mesh.y_min", real_at([](ExperimentSpec& s) -> double& { return s.domain.y_min; }));
    t.emplace_back("mesh.y_max", real_at([](ExperimentSpec& s) -> double& { return s.domain.y_max; }));

    t.emplace_back("mesh.diagonal", Field{[](ExperimentSpec& s, const std::string& k, const std::string& v) {
                                            try {
                                              s.diagonal = parse_diagonal(v);
                                            } catch (const std::invalid_argument& e) {
                                              throw ConfigError(k, e.what());
                                            }
                                          },
                                          [](const ExperimentSpec& s) { return to_string(s.diagonal); }});

    t.emplace_back("time.t0", real(&ExperimentSpec::t0));
    t.emplace_back("time.dt", real(&ExperimentSpec::dt));
    t.emplace_back("time.T", real(&ExperimentSpec::T));

    t.emplace_back("physics.mobility",
                   Field{[](ExperimentSpec& s, const std::string& k, const std::string& v) {
                           try {
                             s.physics.mobility.kind = parse_mobility_kind(v);
                           } catch (const std::invalid_argument& e) {
                             throw ConfigError(k, e.what());
                           }
                         },
                         [](const ExperimentSpec& s) { return to_string(s.physics.mobility.kind); }});
    t.emplace_back("physics.M", real_at([](ExperimentSpec& s) -> double& { return s.physics.mobility.M; }));
    t.emplace_back("physics.p", real_at([](ExperimentSpec& s) -> double& { return s.physics.mobility.p; }));
    t.emplace_back("physics.energy",
                   Field{[](ExperimentSpec& s, const std::string& k, const std::string& v) {
                           try {
                             s.physics.energy.kind = parse_energy_kind(v);
                           } catch (const std::invalid_argument& e) {
                             throw ConfigError(k, e.what());
                           }
                         },
                         [](const ExperimentSpec& s) { return to_string(s.physics.energy.kind); }});
    t.emplace_back("physics.c", real_at([](ExperimentSpec& s) -> double& { return s.physics.energy.c; }));
    t.emplace_back("physics.root", real_at([](ExperimentSpec& s) -> double& { return s.physics.energy.root; }));
    t.emplace_back("physics.theta", real_at([](ExperimentSpec& s) -> double& { return s.physics.energy.theta; }));
    t.emplace_back("physics.theta_c",
                   real_at([](ExperimentSpec& s) -> double& { return s.physics.energy.theta_c; }));
    t.emplace_back("physics.gamma", real_at([](ExperimentSpec& s) -> double& { return s.physics.gamma; }));
    t.emplace_back("physics.g_form", boolean_at([](ExperimentSpec& s) -> bool& { return s.physics.g_form; }));

    t.emplace_back("scheme.id", integer_at([](ExperimentSpec& s) -> int& { return s.scheme; }));
    t.emplace_back("scheme.varrho", real_at([](ExperimentSpec& s) -> double& { return s.barrett.varrho; }));
    t.emplace_back("scheme.max_iter", integer_at([](ExperimentSpec& s) -> int& { return s.barrett.max_iter; }));

    t.emplace_back("constraints.lower", real_at([](ExperimentSpec& s) -> double& { return s.bounds.lower; }));
    t.emplace_back("constraints.upper",
                   Field{[](ExperimentSpec& s, const std::string& k, const std::string& v) {
                           if (v == "none") {
                             s.bounds.upper.reset();
                           } else {
                             s.bounds.upper = to_double(k, v);
                           }
                         },
                         [](const ExperimentSpec& s) {
                           return s.bounds.upper ? shortest(*s.bounds.upper) : std::string("none");
                         }});
    t.emplace_back("constraints.conserve_mass",
                   boolean_at([](ExperimentSpec& s) -> bool& { return s.conserve_mass; }));
    t.emplace_back("constraints.eps", real(&ExperimentSpec::eps));
    t.emplace_back("constraints.alpha", real_at([](ExperimentSpec& s) -> double& { return s.uzawa.alpha; }));
    t.emplace_back("constraints.beta", real_at([](ExperimentSpec& s) -> double& { return s.uzawa.beta; }));
    t.emplace_back("constraints.rho", real_at([](ExperimentSpec& s) -> double& { return s.uzawa.rho; }));
    t.emplace_back("constraints.uzawa_max_iter",
                   integer_at([](ExperimentSpec& s) -> int& { return s.uzawa.max_iter; }));

    t.emplace_back("case.kind", Field{[](ExperimentSpec& s, const std::string& k, const std::string& v) {
                                        try {
                                          s.init.kind = parse_case_kind(v);
                                        } catch (const std::invalid_argument& e) {
                                          throw ConfigError(k, e.what());
                                        }
                                      },
                                      [](const ExperimentSpec& s) { return to_string(s.init.kind); }});
    t.emplace_back("case.bc", Field{[](ExperimentSpec& s, const std::string& k, const std::string& v) {
                                      try {
                                        s.bc = parse_bc_kind(v);
                                      } catch (const std::invalid_argument& e) {
                                        throw ConfigError(k, e.what());
                                      }
                                    },
                                    [](const ExperimentSpec& s) { return to_string(s.bc); }});
    t.emplace_back("case.L", real_at([](ExperimentSpec& s) -> double& { return s.init.L; }));
    t.emplace_back("case.C", real_at([](ExperimentSpec& s) -> double& { return s.init.C; }));
    t.emplace_back("case.sigma", real_at([](ExperimentSpec& s) -> double& { return s.init.sigma; }));
    t.emplace_back("case.beta0", real_at([](ExperimentSpec& s) -> double& { return s.init.beta0; }));
    t.emplace_back("case.beta1", real_at([](ExperimentSpec& s) -> double& { return s.init.beta1; }));
    t.emplace_back("case.delta", real_at([](ExperimentSpec& s) -> double& { return s.init.delta; }));
    t.emplace_back("case.b", real_at([](ExperimentSpec& s) -> double& { return s.init.b; }));
    t.emplace_back("case.Q", integer_at([](ExperimentSpec& s) -> int& { return s.init.Q; }));
    t.emplace_back("case.amplitude", real_at([](ExperimentSpec& s) -> double& { return s.init.amplitude; }));
    t.emplace_back("case.seed", Field{[](ExperimentSpec& s, const std::string& k, const std::string& v) {
                                        const long long x = to_integer(k, v);
                                        if (x < 0) throw ConfigError(k, "seed must be non-negative");
                                        s.init.seed = static_cast<std::uint64_t>(x);
                                      },
                                      [](const ExperimentSpec& s) { return std::to_string(s.init.seed); }});
    t.emplace_back("case.value", real_at([](ExperimentSpec& s) -> double& { return s.init.value; }));

    t.emplace_back("output.name", Field{[](ExperimentSpec& s, const std::string&, const std::string& v) { s.name = v; },
                                        [](const ExperimentSpec& s) { return s.name; }});
    t.emplace_back("output.snapshots",
                   Field{[](ExperimentSpec& s, const std::string& k, const std::string& v) {
                           s.snapshot_times.clear();
                           std::stringstream ss(v);
                           std::string item;
                           while (std::getline(ss, item, ',')) {
                             item = trim(item);
                             if (!item.empty()) s.snapshot_times.push_back(to_double(k, item));
                           }
                         },
                         [](const ExperimentSpec& s) {
                           std::string out;
                           for (std::size_t i = 0; i < s.snapshot_times.size(); ++i) {
                             out += (i ? "," : "") + shortest(s.snapshot_times[i]);
                           }
                           return out;
                         }});
    return t;
  }();
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& [k, f] : fields()) {
    if (k == key) return &f;
  }
  return nullptr;
}

}  // namespace

ExperimentSpec parse_config(const std::string& text) {
  static const std::set<std::string> sections{"mesh", "time", "physics", "scheme", "constraints", "case", "output"};
  ExperimentSpec spec;
  spec.snapshot_times.clear();
  std::set<std::string> seen_sections, seen_keys;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no), "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!sections.count(section)) throw ConfigError(section, "unknown section");
      seen_sections.insert(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    if (section.empty()) throw ConfigError("line " + std::to_string(line_no), "key outside any section");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const Field* f = find_field(key);
    if (!f) throw ConfigError(key, "unknown key");
    if (!seen_keys.insert(key).second) throw ConfigError(key, "duplicate key");
    f->set(spec, key, value);
  }
  for (const char* required : {"mesh", "time"}) {
    if (!seen_sections.count(required)) throw ConfigError(required, "missing section");
  }
  // the mass multiplier bound of the Uzawa theorem follows the constant step
  spec.uzawa.rho_min = spec.uzawa.rho;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    throw ConfigError(what.substr(0, what.find(' ')), what);
  }
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot read config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentSpec& spec) {
  std::ostringstream out;
  std::string section;
  for (const auto& [key, f] : fields()) {
    const auto dot = key.find('.');
    const std::string s = key.substr(0, dot);
    if (s != section) {
      out << (section.empty() ? "" : "\n") << '[' << s << "]\n";
      section = s;
    }
    out << key.substr(dot + 1) << " = " << f.get(spec) << '\n';
  }
  return out.str();
}

}  // namespace posfem
