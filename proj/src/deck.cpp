#include "resim/deck.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace resim {

DeckError::DeckError(int line, const std::string& what)
    : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

struct RawTable {
  std::vector<std::vector<double>> rows;
  int line = 0;
};

struct RawDeck {
  std::map<std::string, std::map<std::string, Entry>> keys;
  std::map<std::string, std::vector<Entry>> repeated;  // "wells.well", "schedule.at"
  std::map<std::string, RawTable> tables;
  std::set<std::string> sections;
};

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> k{
      {"grid", {"dims", "cell_size", "depth_top"}},
      {"fields", {"kx", "ky", "kz", "poro", "perm_file", "poro_file", "source_dims", "layers"}},
      {"fluid",
       {"model", "rho_w", "rho_o", "rho_g", "c_w", "c_o", "c_r", "c_mu", "p_ref", "mu_w", "mu_o",
        "s_wc", "s_or", "n_w", "n_o"}},
      {"init", {"pressure", "datum", "s_w", "s_g", "p_b", "hydrostatic"}},
      {"wells", {"well"}},
      {"schedule", {"at"}},
      {"solver",
       {"tolerance", "max_newton", "forcing", "fixed_theta", "gamma", "beta", "theta_initial",
        "theta_min", "theta_max", "mb_tolerance", "max_saturation_change", "max_pressure_change",
        "linear_max_iterations", "preconditioner", "decoupling", "ilu_subdomains",
        "amg_strength", "amg_coarse_size", "amg_jacobi_weight", "conservation_correction"}},
      {"time", {"t_end", "dt_init", "dt_max", "dt_min", "growth", "cut", "max_cuts"}},
      {"output", {"report", "vtk_every", "vtk_prefix", "dump_matrices", "dump_dir"}},
  };
  return k;
}

const std::map<std::string, std::size_t>& table_columns() {
  static const std::map<std::string, std::size_t> t{
      {"pvto", 4}, {"pvdg", 3}, {"swof", 4}, {"sgof", 4}};
  return t;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

double to_double(const std::string& s, int line, const std::string& what) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw DeckError(line, what + ": expected a number, got '" + s + "'");
  return v;
}

long long to_int(const std::string& s, int line, const std::string& what) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DeckError(line, what + ": expected an integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& s, int line, const std::string& what) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw DeckError(line, what + ": expected true or false, got '" + s + "'");
}

template <class E>
E to_enum(const std::string& s, const std::vector<std::pair<const char*, E>>& names, int line,
          const std::string& what) {
  for (const auto& [n, v] : names)
    if (s == n) return v;
  std::string options;
  for (const auto& [n, v] : names) options += std::string(options.empty() ? "" : ", ") + n;
  throw DeckError(line, what + ": unknown value '" + s + "' (expected one of " + options + ")");
}

template <class E>
const char* enum_name(E v, const std::vector<std::pair<const char*, E>>& names) {
  for (const auto& [n, x] : names)
    if (x == v) return n;
  return "?";
}

const std::vector<std::pair<const char*, WellType>> kWellTypes{
    {"producer", WellType::producer},
    {"water_injector", WellType::water_injector},
    {"gas_injector", WellType::gas_injector}};
const std::vector<std::pair<const char*, ConstraintKind>> kConstraints{
    {"bhp", ConstraintKind::bhp},
    {"water_rate", ConstraintKind::water_rate},
    {"oil_rate", ConstraintKind::oil_rate},
    {"liquid_rate", ConstraintKind::liquid_rate},
    {"gas_rate", ConstraintKind::gas_rate}};
const std::vector<std::pair<const char*, ForcingRule>> kForcing{
    {"a", ForcingRule::a}, {"b", ForcingRule::b}, {"c", ForcingRule::c},
    {"fixed", ForcingRule::fixed}};
const std::vector<std::pair<const char*, PreconditionerKind>> kPreconditioners{
    {"none", PreconditionerKind::none},
    {"ilu0", PreconditionerKind::ilu0},
    {"cpr_fpf", PreconditionerKind::cpr_fpf}};
const std::vector<std::pair<const char*, Decoupling>> kDecouplings{
    {"none", Decoupling::none},
    {"quasi_impes", Decoupling::quasi_impes},
    {"abf", Decoupling::abf}};
const std::vector<std::pair<const char*, FluidKind>> kModels{
    {"two_phase", FluidKind::two_phase}, {"black_oil", FluidKind::black_oil}};

RawDeck read_raw(std::istream& in) {
  RawDeck raw;
  std::string section;
  std::string table;
  RawTable* current = nullptr;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto hash = text.find('#');
    if (hash != std::string::npos) text.erase(hash);
    text = trim(text);
    if (text.empty()) continue;

    if (current) {
      if (text == "end") {
        current = nullptr;
        continue;
      }
      std::vector<double> row;
      for (const std::string& w : split(text)) row.push_back(to_double(w, line, "table " + table));
      const std::size_t cols = table_columns().at(table);
      const std::size_t min_cols = (table == "swof" || table == "sgof") ? 3 : cols;
      if (row.size() < min_cols || row.size() > cols)
        throw DeckError(line, "table " + table + ": expected " + std::to_string(cols) +
                                  " columns, got " + std::to_string(row.size()));
      row.resize(cols, 0.0);
      current->rows.push_back(std::move(row));
      continue;
    }

    if (text.front() == '[') {
      if (text.back() != ']') throw DeckError(line, "malformed section header '" + text + "'");
      section = trim(text.substr(1, text.size() - 2));
      if (!known_keys().count(section)) throw DeckError(line, "unknown section [" + section + "]");
      if (raw.sections.count(section)) throw DeckError(line, "duplicate section [" + section + "]");
      raw.sections.insert(section);
      continue;
    }
    if (section.empty()) throw DeckError(line, "entry outside of any section");

    if (text.rfind("table", 0) == 0 && text.find('=') == std::string::npos) {
      const auto words = split(text);
      if (section != "fluid" || words.size() != 2)
        throw DeckError(line, "tables are declared as 'table <name>' in [fluid]");
      table = words[1];
      if (!table_columns().count(table)) throw DeckError(line, "unknown table '" + table + "'");
      if (raw.tables.count(table)) throw DeckError(line, "duplicate table '" + table + "'");
      current = &raw.tables[table];
      current->line = line;
      continue;
    }

    const auto eq = text.find('=');
    if (eq == std::string::npos) throw DeckError(line, "expected 'key = value', got '" + text + "'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (!known_keys().at(section).count(key))
      throw DeckError(line, "unknown key '" + key + "' in [" + section + "]");
    if (value.empty()) throw DeckError(line, "missing value for '" + key + "'");
    if (key == "well" || key == "at") {
      raw.repeated[section + "." + key].push_back({value, line});
      continue;
    }
    auto& slot = raw.keys[section];
    if (slot.count(key)) throw DeckError(line, "duplicate key '" + key + "' in [" + section + "]");
    slot[key] = {value, line};
  }
  if (current) throw DeckError(line, "table '" + table + "' is missing 'end'");
  return raw;
}

class Reader {
 public:
  Reader(const RawDeck& raw, std::string section) : raw_(raw), section_(std::move(section)) {}

  const Entry* find(const std::string& key) const {
    const auto s = raw_.keys.find(section_);
    if (s == raw_.keys.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }
  std::string what(const std::string& key) const { return section_ + "." + key; }

  void number(const std::string& key, double& out) const {
    if (const Entry* e = find(key)) out = to_double(e->value, e->line, what(key));
  }
  void number(const std::string& key, std::optional<double>& out) const {
    if (const Entry* e = find(key)) out = to_double(e->value, e->line, what(key));
  }
  template <class I>
  void integer(const std::string& key, I& out) const {
    if (const Entry* e = find(key)) out = static_cast<I>(to_int(e->value, e->line, what(key)));
  }
  void boolean(const std::string& key, bool& out) const {
    if (const Entry* e = find(key)) out = to_bool(e->value, e->line, what(key));
  }
  void text(const std::string& key, std::string& out) const {
    if (const Entry* e = find(key)) out = e->value;
  }
  template <class E>
  void choice(const std::string& key, E& out, const std::vector<std::pair<const char*, E>>& n) const {
    if (const Entry* e = find(key)) out = to_enum(e->value, n, e->line, what(key));
  }
  template <class T, std::size_t N>
  void list(const std::string& key, std::array<T, N>& out) const {
    const Entry* e = find(key);
    if (!e) return;
    const auto words = split(e->value);
    if (words.size() != N)
      throw DeckError(e->line, what(key) + ": expected " + std::to_string(N) + " values");
    for (std::size_t i = 0; i < N; ++i) {
      if constexpr (std::is_integral_v<T>)
        out[i] = static_cast<T>(to_int(words[i], e->line, what(key)));
      else
        out[i] = to_double(words[i], e->line, what(key));
    }
  }

 private:
  const RawDeck& raw_;
  std::string section_;
};

Table1D column(const RawTable& t, std::size_t col, const std::string& name) {
  std::vector<double> x, y;
  for (const auto& r : t.rows) {
    x.push_back(r[0]);
    y.push_back(r[col]);
  }
  try {
    return {x, y};
  } catch (const ConfigError& e) {
    throw DeckError(t.line, "table " + name + ": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

Deck parse_deck(std::istream& in, const std::filesystem::path& base_dir) {
  const RawDeck raw = read_raw(in);
  for (const char* s : {"grid", "fields", "fluid", "time"})
    if (!raw.sections.count(s)) throw ConfigError(std::string("missing required section [") + s + "]");

  Deck d;
  d.base_dir = base_dir;

  const Reader grid(raw, "grid");
  grid.list("dims", d.grid.dims);
  grid.list("cell_size", d.grid.cell_size);
  grid.number("depth_top", d.grid.depth_top);
  for (Index v : d.grid.dims)
    if (v < 1) throw ConfigError("grid.dims must be positive");
  for (double v : d.grid.cell_size)
    if (!(v > 0.0)) throw ConfigError("grid.cell_size must be positive");

  const Reader fields(raw, "fields");
  fields.number("kx", d.fields.kx);
  fields.number("ky", d.fields.ky);
  fields.number("kz", d.fields.kz);
  fields.number("poro", d.fields.poro);
  std::string perm, poro;
  fields.text("perm_file", perm);
  fields.text("poro_file", poro);
  if (perm.empty() != poro.empty())
    throw ConfigError("fields: perm_file and poro_file must be given together");
  if (!perm.empty()) {
    d.fields.perm_file = resolve(base_dir, perm);
    d.fields.poro_file = resolve(base_dir, poro);
    for (const auto& f : {d.fields.perm_file, d.fields.poro_file})
      if (!std::filesystem::exists(f)) throw ConfigError("field file not found: " + f.string());
  }
  d.fields.source_dims = d.grid.dims;
  fields.list("source_dims", d.fields.source_dims);
  fields.list("layers", d.fields.layers);

  const Reader fluid(raw, "fluid");
  FluidKind kind = FluidKind::two_phase;
  fluid.choice("model", kind, kModels);
  d.pvt = kind == FluidKind::two_phase ? default_two_phase() : default_black_oil();
  fluid.number("rho_w", d.pvt.rho_w_ref);
  fluid.number("rho_o", d.pvt.rho_o_ref);
  fluid.number("rho_g", d.pvt.rho_g_ref);
  fluid.number("c_w", d.pvt.c_w);
  fluid.number("c_o", d.pvt.c_o);
  fluid.number("c_r", d.pvt.c_r);
  fluid.number("c_mu", d.pvt.c_mu);
  fluid.number("p_ref", d.pvt.p_ref);
  fluid.number("mu_w", d.pvt.mu_w);
  fluid.number("mu_o", d.pvt.mu_o);
  fluid.number("s_wc", d.pvt.corey.s_wc);
  fluid.number("s_or", d.pvt.corey.s_or);
  fluid.number("n_w", d.pvt.corey.n_w);
  fluid.number("n_o", d.pvt.corey.n_o);
  for (const auto& [name, t] : raw.tables) {
    if (kind == FluidKind::two_phase && name != "swof")
      throw DeckError(t.line, "table " + name + " requires model = black_oil");
    if (name == "pvto") {
      d.pvt.rs = column(t, 1, name);
      d.pvt.bo = column(t, 2, name);
      d.pvt.mu_o_sat = column(t, 3, name);
    } else if (name == "pvdg") {
      d.pvt.bg = column(t, 1, name);
      d.pvt.mu_g = column(t, 2, name);
    } else if (name == "swof") {
      if (kind == FluidKind::black_oil) {
        d.pvt.relperm.krw = column(t, 1, name);
        d.pvt.relperm.krow = column(t, 2, name);
      }
      d.pvt.pcow = column(t, 3, name);
    } else if (name == "sgof") {
      d.pvt.relperm.krg = column(t, 1, name);
      d.pvt.relperm.krog = column(t, 2, name);
      d.pvt.pcog = column(t, 3, name);
    }
  }
  d.pvt.validate();

  const Reader init(raw, "init");
  init.number("pressure", d.init.pressure);
  init.number("datum", d.init.datum);
  init.number("s_w", d.init.s_w);
  init.number("s_g", d.init.s_g);
  init.number("p_b", d.init.p_b);
  init.boolean("hydrostatic", d.init.hydrostatic);

  const auto& wells = raw.repeated.find("wells.well");
  if (wells != raw.repeated.end()) {
    for (const Entry& e : wells->second) {
      const auto w = split(e.value);
      if (w.size() < 6)
        throw DeckError(e.line, "well: expected 'NAME TYPE I J K_TOP K_BOTTOM [radius R] [skin S]'");
      WellSpec s;
      s.name = w[0];
      s.type = to_enum(w[1], kWellTypes, e.line, "well type");
      s.i = to_int(w[2], e.line, "well i") - 1;
      s.j = to_int(w[3], e.line, "well j") - 1;
      s.k_top = to_int(w[4], e.line, "well k_top") - 1;
      s.k_bottom = to_int(w[5], e.line, "well k_bottom") - 1;
      for (std::size_t p = 6; p < w.size(); p += 2) {
        if (p + 1 >= w.size()) throw DeckError(e.line, "well: option '" + w[p] + "' needs a value");
        if (w[p] == "radius")
          s.radius = to_double(w[p + 1], e.line, "well radius");
        else if (w[p] == "skin")
          s.skin = to_double(w[p + 1], e.line, "well skin");
        else
          throw DeckError(e.line, "well: unknown option '" + w[p] + "'");
      }
      const auto& dims = d.grid.dims;
      if (s.i < 0 || s.i >= dims[0] || s.j < 0 || s.j >= dims[1] || s.k_top < 0 ||
          s.k_bottom < s.k_top || s.k_bottom >= dims[2])
        throw DeckError(e.line, "well " + s.name + ": location outside the grid");
      for (const WellSpec& o : d.wells)
        if (o.name == s.name) throw DeckError(e.line, "duplicate well '" + s.name + "'");
      d.wells.push_back(s);
    }
  }

  const auto& sched = raw.repeated.find("schedule.at");
  if (sched != raw.repeated.end()) {
    for (const Entry& e : sched->second) {
      const auto w = split(e.value);
      if (w.size() != 4) throw DeckError(e.line, "at: expected 'T WELL KIND VALUE'");
      ScheduleEntry s;
      s.start = to_double(w[0], e.line, "schedule time");
      s.well = w[1];
      s.constraint.kind = to_enum(w[2], kConstraints, e.line, "constraint");
      s.constraint.value = to_double(w[3], e.line, "constraint value");
      if (std::none_of(d.wells.begin(), d.wells.end(),
                       [&](const WellSpec& ws) { return ws.name == s.well; }))
        throw DeckError(e.line, "schedule references undeclared well '" + s.well + "'");
      d.schedule.push_back(s);
    }
  }
  for (const WellSpec& w : d.wells) {
    const bool controlled = std::any_of(d.schedule.begin(), d.schedule.end(), [&](const auto& s) {
      return s.well == w.name && s.start <= 0.0;
    });
    if (!controlled) throw ConfigError("well " + w.name + " has no schedule entry at t = 0");
  }
  {
    std::vector<Well> named(d.wells.size());
    for (std::size_t i = 0; i < d.wells.size(); ++i) named[i].name = d.wells[i].name;
    validate_schedule(d.schedule, named);
  }

  const Reader solver(raw, "solver");
  NewtonConfig& nc = d.sim.newton;
  solver.number("tolerance", nc.tolerance);
  solver.integer("max_newton", nc.max_newton);
  solver.choice("forcing", nc.rule, kForcing);
  solver.number("fixed_theta", nc.fixed_theta);
  solver.number("gamma", nc.gamma);
  solver.number("beta", nc.beta);
  solver.number("theta_initial", nc.theta_initial);
  solver.number("theta_min", nc.theta_min);
  solver.number("theta_max", nc.theta_max);
  solver.number("mb_tolerance", nc.mb_tolerance);
  solver.number("max_saturation_change", nc.max_saturation_change);
  solver.number("max_pressure_change", nc.max_pressure_change);
  LinearConfig& lc = d.sim.linear;
  solver.integer("linear_max_iterations", lc.max_iterations);
  solver.choice("preconditioner", lc.preconditioner, kPreconditioners);
  solver.choice("decoupling", lc.decoupling, kDecouplings);
  solver.boolean("conservation_correction", lc.conservation_correction);
  solver.integer("ilu_subdomains", lc.cpr.ilu_subdomains);
  solver.number("amg_strength", lc.cpr.amg.strength);
  solver.integer("amg_coarse_size", lc.cpr.amg.coarse_size);
  solver.number("amg_jacobi_weight", lc.cpr.amg.jacobi_weight);
  nc.validate();
  lc.validate();

  const Reader time(raw, "time");
  if (!time.find("t_end")) throw ConfigError("[time] requires t_end");
  time.number("t_end", d.t_end);
  StepController& sc = d.sim.control;
  time.number("dt_init", sc.dt_init);
  time.number("dt_max", sc.dt_max);
  time.number("dt_min", sc.dt_min);
  time.number("growth", sc.growth);
  time.number("cut", sc.cut);
  time.integer("max_cuts", sc.max_cuts);
  if (d.t_end < 0.0) throw ConfigError("time.t_end must be nonnegative");
  sc.validate();

  const Reader output(raw, "output");
  std::string text;
  output.text("report", text);
  if (!text.empty()) d.output.report = resolve(base_dir, text);
  output.integer("vtk_every", d.output.vtk_every);
  text.clear();
  output.text("vtk_prefix", text);
  d.output.vtk_prefix = resolve(base_dir, text.empty() ? d.output.vtk_prefix.string() : text);
  output.boolean("dump_matrices", d.output.dump_matrices);
  text.clear();
  output.text("dump_dir", text);
  d.output.dump_dir = resolve(base_dir, text.empty() ? d.output.dump_dir.string() : text);
  if (d.output.vtk_every < 0) throw ConfigError("output.vtk_every must be nonnegative");
  return d;
}

Deck load_deck(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open deck '" + path.string() + "'");
  return parse_deck(in, path.parent_path());
}

void Deck::echo(std::ostream& out) const {
  std::ostringstream o;
  o << std::setprecision(10);
  auto kv = [&](const char* key, const auto& v) { o << key << " = " << v << '\n'; };
  auto triple = [&](const char* key, const auto& a) {
    o << key << " = " << a[0] << ' ' << a[1] << ' ' << a[2] << '\n';
  };
  auto opt = [](const std::optional<double>& v, const char* fallback) {
    std::ostringstream s;
    s << std::setprecision(10);
    if (v) s << *v;
    else s << fallback;
    return s.str();
  };
  auto table = [&](const char* key, const std::vector<const Table1D*>& cols) {
    o << key << " =";
    if (cols.front()->empty()) {
      o << " none\n";
      return;
    }
    for (std::size_t r = 0; r < cols.front()->x().size(); ++r) {
      o << (r ? ";" : "") << ' ' << cols.front()->x()[r];
      for (const Table1D* c : cols) o << ' ' << (c->empty() ? 0.0 : c->y()[r]);
    }
    o << '\n';
  };

  triple("grid.dims", grid.dims);
  triple("grid.cell_size", grid.cell_size);
  kv("grid.depth_top", grid.depth_top);
  if (fields.perm_file.empty()) {
    kv("fields.kx", fields.kx);
    kv("fields.ky", fields.ky);
    kv("fields.kz", fields.kz);
    kv("fields.poro", fields.poro);
  } else {
    kv("fields.perm_file", fields.perm_file.string());
    kv("fields.poro_file", fields.poro_file.string());
    triple("fields.source_dims", fields.source_dims);
    o << "fields.layers = " << fields.layers[0] << ' ' << fields.layers[1] << '\n';
  }
  const bool black_oil = pvt.kind == FluidKind::black_oil;
  kv("fluid.model", black_oil ? "black_oil" : "two_phase");
  kv("fluid.rho_w", pvt.rho_w_ref);
  kv("fluid.rho_o", pvt.rho_o_ref);
  kv("fluid.c_w", pvt.c_w);
  kv("fluid.c_o", pvt.c_o);
  kv("fluid.c_r", pvt.c_r);
  kv("fluid.p_ref", pvt.p_ref);
  kv("fluid.mu_w", pvt.mu_w);
  if (black_oil) {
    kv("fluid.rho_g", pvt.rho_g_ref);
    kv("fluid.c_mu", pvt.c_mu);
    table("fluid.pvto", {&pvt.rs, &pvt.bo, &pvt.mu_o_sat});
    table("fluid.pvdg", {&pvt.bg, &pvt.mu_g});
    table("fluid.swof", {&pvt.relperm.krw, &pvt.relperm.krow});
    table("fluid.sgof", {&pvt.relperm.krg, &pvt.relperm.krog});
  } else {
    kv("fluid.mu_o", pvt.mu_o);
    kv("fluid.s_wc", pvt.corey.s_wc);
    kv("fluid.s_or", pvt.corey.s_or);
    kv("fluid.n_w", pvt.corey.n_w);
    kv("fluid.n_o", pvt.corey.n_o);
  }
  table("fluid.pcow", {&pvt.pcow});
  if (black_oil) table("fluid.pcog", {&pvt.pcog});
  kv("init.pressure", init.pressure);
  kv("init.datum", opt(init.datum, "top_cell_center"));
  kv("init.s_w", opt(init.s_w, "connate"));
  if (black_oil) {
    kv("init.s_g", init.s_g);
    kv("init.p_b", opt(init.p_b, "pressure"));
  }
  kv("init.hydrostatic", init.hydrostatic ? "true" : "false");
  for (const WellSpec& w : wells)
    o << "wells.well = " << w.name << ' ' << enum_name(w.type, kWellTypes) << ' ' << w.i + 1 << ' '
      << w.j + 1 << ' ' << w.k_top + 1 << ' ' << w.k_bottom + 1 << " radius " << w.radius
      << " skin " << w.skin << '\n';
  for (const ScheduleEntry& s : schedule)
    o << "schedule.at = " << s.start << ' ' << s.well << ' '
      << enum_name(s.constraint.kind, kConstraints) << ' ' << s.constraint.value << '\n';
  const NewtonConfig& nc = sim.newton;
  kv("solver.tolerance", nc.tolerance);
  kv("solver.max_newton", nc.max_newton);
  kv("solver.forcing", enum_name(nc.rule, kForcing));
  if (nc.rule == ForcingRule::fixed) {
    kv("solver.fixed_theta", nc.fixed_theta);
  } else {
    if (nc.rule == ForcingRule::c) {
      kv("solver.gamma", nc.gamma);
      kv("solver.beta", nc.beta);
    }
    kv("solver.theta_initial", nc.theta_initial);
    kv("solver.theta_min", nc.theta_min);
    kv("solver.theta_max", nc.theta_max);
  }
  kv("solver.mb_tolerance", nc.mb_tolerance);
  kv("solver.max_saturation_change", nc.max_saturation_change);
  kv("solver.max_pressure_change", nc.max_pressure_change);
  const LinearConfig& lc = sim.linear;
  kv("solver.linear_max_iterations", lc.max_iterations);
  kv("solver.preconditioner", enum_name(lc.preconditioner, kPreconditioners));
  kv("solver.decoupling", enum_name(lc.decoupling, kDecouplings));
  kv("solver.conservation_correction", lc.conservation_correction ? "true" : "false");
  if (lc.preconditioner != PreconditionerKind::none) kv("solver.ilu_subdomains", lc.cpr.ilu_subdomains);
  if (lc.preconditioner == PreconditionerKind::cpr_fpf) {
    kv("solver.amg_strength", lc.cpr.amg.strength);
    kv("solver.amg_coarse_size", lc.cpr.amg.coarse_size);
    kv("solver.amg_jacobi_weight", lc.cpr.amg.jacobi_weight);
  }
  kv("time.t_end", t_end);
  const StepController& sc = sim.control;
  kv("time.dt_init", sc.dt_init);
  kv("time.dt_max", sc.dt_max);
  kv("time.dt_min", sc.dt_min);
  kv("time.growth", sc.growth);
  kv("time.cut", sc.cut);
  kv("time.max_cuts", sc.max_cuts);
  kv("output.report", output.report.empty() ? std::string("none") : output.report.string());
  kv("output.vtk_every", output.vtk_every);
  kv("output.vtk_prefix", output.vtk_prefix.string());
  kv("output.dump_matrices", output.dump_matrices ? "true" : "false");
  if (output.dump_matrices) kv("output.dump_dir", output.dump_dir.string());
  out << o.str();
}

}  // namespace resim
