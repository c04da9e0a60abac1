#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "funcint/error.hpp"
#include "funcint/field.hpp"
#include "funcint/gaussian.hpp"

namespace funcint::cli {
namespace {

using nlohmann::json;

/// Object view that records which keys were read, so leftovers can be
/// reported as unknown fields.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "config" : path_, "must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) fail(name(key), "is required");
    return j_.at(key);
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) fail(name(key), "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(name(key), "must be finite");
    return d;
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : (seen_.insert(key), fallback);
  }

  double positive(const std::string& key, double fallback) {
    const double d = number(key, fallback);
    if (!(d > 0.0)) fail(name(key), "must be positive");
    return d;
  }

  std::size_t count(const std::string& key, std::size_t fallback, std::size_t min = 0) {
    if (!has(key)) {
      seen_.insert(key);
      return fallback;
    }
    const json& v = at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail(name(key), "must be a non-negative integer");
    }
    const auto n = v.get<std::size_t>();
    if (n < min) fail(name(key), "must be at least " + std::to_string(min));
    return n;
  }

  std::string text(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) fail(name(key), "must be a string");
    return v.get<std::string>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    return has(key) ? text(key) : (seen_.insert(key), fallback);
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = at(key);
    return number_list(v, name(key));
  }

  std::string name(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void done() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.contains(key)) fail(name(key), "is not a recognized field");
    }
  }

  [[noreturn]] static void fail(const std::string& field, const std::string& what) {
    throw ConfigError("config field '" + field + "' " + what);
  }

  static std::vector<double> number_list(const json& v, const std::string& field) {
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array() || v.empty()) fail(field, "must be a number or a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(field, "must contain only numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

 private:
  json j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string resolve_path(const std::string& p, const std::string& base_dir) {
  const std::filesystem::path path(p);
  if (path.is_absolute() || base_dir.empty()) return p;
  return (std::filesystem::path(base_dir) / path).string();
}

Load parse_load(Fields& f) {
  const json* v = f.find("load");
  if (!v) return Load{};
  if (v->is_number()) return Load{v->get<double>()};
  return Load{Fields::number_list(*v, f.name("load"))};
}

Mesh parse_interval_mesh(const json* j, double length, const std::string& base_dir,
                         std::size_t default_elements) {
  if (!j) return build_uniform_interval_mesh(length, default_elements);
  Fields m(*j, "mesh");
  Mesh out = [&] {
    if (m.has("file")) return read_msh_file(resolve_path(m.text("file"), base_dir));
    if (m.has("positions")) {
      const auto x = m.numbers("positions");
      return build_interval_mesh(length, x);
    }
    return build_uniform_interval_mesh(length, m.count("elements", default_elements, 1));
  }();
  m.done();
  return out;
}

Mesh parse_planar_mesh(const json* j, const std::string& base_dir) {
  if (!j) Fields::fail("mesh", "is required for membrane2d");
  Fields m(*j, "mesh");
  Mesh out = [&] {
    if (m.has("file")) return read_msh_file(resolve_path(m.text("file"), base_dir));
    if (!m.has("rectangle")) Fields::fail("mesh", "needs 'file' or 'rectangle'");
    Fields r(m.at("rectangle"), "mesh.rectangle");
    const std::size_t nx = r.count("nx", 8, 1), ny = r.count("ny", 8, 1);
    const double lx = r.positive("lx", 1.0), ly = r.positive("ly", 1.0);
    const int tag = static_cast<int>(r.count("boundary_tag", 1));
    r.done();
    return build_rectangle_mesh(nx, ny, lx, ly, tag);
  }();
  m.done();
  return out;
}

ModelSystem parse_string(Fields& p, const json* mesh, const std::string& base_dir) {
  StringParams s;
  s.length = p.positive("length", 1.0);
  s.sigma = p.positive("sigma", 1.0);
  s.left = p.number("left", 0.0);
  s.right = p.number("right", 0.0);
  s.load = parse_load(p);
  return build_string(s, parse_interval_mesh(mesh, s.length, base_dir, 8));
}

ModelSystem parse_beam(Fields& p, const json* mesh, const std::string& base_dir) {
  BeamParams b;
  b.length = p.positive("length", 1.0);
  b.bending_stiffness = p.positive("bending_stiffness", 1.0);
  b.load = parse_load(p);
  if (const json* s = p.find("supports")) {
    if (!s->is_array()) Fields::fail("parameters.supports", "must be an array");
    b.supports.clear();
    for (std::size_t i = 0; i < s->size(); ++i) {
      Fields e((*s)[i], "parameters.supports[" + std::to_string(i) + "]");
      BeamSupport sup;
      sup.x = e.number("x");
      if (e.has("value")) sup.value = e.number("value");
      else e.find("value");
      if (e.has("slope")) sup.slope = e.number("slope");
      else e.find("slope");
      e.done();
      b.supports.push_back(sup);
    }
  }
  return build_beam(b, parse_interval_mesh(mesh, b.length, base_dir, 4));
}

ModelSystem parse_membrane(Fields& p, const json* mesh, const std::string& base_dir) {
  MembraneParams m{parse_planar_mesh(mesh, base_dir), 1.0, {}, {}};
  m.sigma = p.positive("sigma", 1.0);
  m.load = parse_load(p);
  const json& bv = p.at("boundary");
  if (!bv.is_array() || bv.empty()) Fields::fail("parameters.boundary", "must be a non-empty array");
  for (std::size_t i = 0; i < bv.size(); ++i) {
    Fields e(bv[i], "parameters.boundary[" + std::to_string(i) + "]");
    const int tag = static_cast<int>(e.count("tag", 0));
    const double value = e.number("value", 0.0);
    e.done();
    m.boundary_values.emplace_back(tag, value);
  }
  return build_membrane(m);
}

AdhesionParams parse_adhesion(Fields& p, const json* mesh, bool& scaled) {
  AdhesionParams a;
  a.length = p.positive("length", 1.0);
  a.bending_stiffness = p.positive("bending_stiffness", 1.0);
  a.n_bonds = p.count("n_bonds", 6, 1);
  a.bond_stiffness = p.positive("bond_stiffness", 5.0);
  a.broken_length = p.positive("broken_length", 1.0);
  a.u_bar = p.number("u_bar", 0.0);
  if (p.has("bond_positions")) a.bond_positions = p.numbers("bond_positions");
  else p.find("bond_positions");
  const std::string units = p.text("units", "raw");
  if (units != "raw" && units != "scaled") {
    Fields::fail("parameters.units", "must be \"raw\" or \"scaled\"");
  }
  scaled = units == "scaled";
  if (scaled) a.u_bar *= a.broken_length;
  if (mesh) {
    Fields m(*mesh, "mesh");
    a.mesh_positions = m.numbers("positions");
    m.done();
  }
  return a;
}

void parse_method(Fields& root, RunConfig& cfg) {
  const std::string method = root.text("method", "analytic");
  if (method == "analytic") {
    cfg.method = Method::Analytic;
    if (root.has("mcmc")) Fields::fail("mcmc", "is only valid with method \"mcmc\"");
    root.find("mcmc");
    return;
  }
  if (method != "mcmc") Fields::fail("method", "must be \"analytic\" or \"mcmc\"");
  cfg.method = Method::Mcmc;
  Fields m(root.at("mcmc"), "mcmc");
  cfg.mcmc.chain.n_steps = m.count("n_steps", 0, 1);
  cfg.mcmc.chain.burn_in = m.count("burn_in", cfg.mcmc.chain.n_steps / 10);
  cfg.mcmc.chain.proposal_scale = m.positive("proposal_scale", 1.0);
  cfg.mcmc.chain.thin = m.count("thin", 1, 1);
  cfg.mcmc.chain.seed = m.count("seed", 0);
  cfg.mcmc.chains = m.count("chains", 1, 1);
  m.done();
  if (cfg.mcmc.chain.burn_in >= cfg.mcmc.chain.n_steps) {
    Fields::fail("mcmc.burn_in", "must be smaller than mcmc.n_steps");
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& base_dir) {
  json j;
  try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    Fields root(j, "");
    RunConfig cfg;
    cfg.model_name = root.text("model");
    static const std::map<std::string, ModelKind> kinds = {{"string", ModelKind::String},
                                                           {"beam", ModelKind::Beam},
                                                           {"membrane2d", ModelKind::Membrane},
                                                           {"adhesion", ModelKind::Adhesion}};
    const auto kind = kinds.find(cfg.model_name);
    if (kind == kinds.end()) {
      Fields::fail("model", "must be one of string, beam, membrane2d, adhesion");
    }
    cfg.model = kind->second;

    // Ensemble and sweep come first so model errors never mask schema errors.
    if (const json* e = root.find("ensemble")) {
      Fields ens(*e, "ensemble");
      cfg.betas = ens.numbers("beta");
      ens.done();
    }
    if (const json* s = root.find("sweep")) {
      Fields sw(*s, "sweep");
      const std::string var = sw.text("variable");
      if (var == "beta") cfg.sweep_variable = SweepVariable::Beta;
      else if (var == "u_bar") cfg.sweep_variable = SweepVariable::UBar;
      else Fields::fail("sweep.variable", "must be \"beta\" or \"u_bar\"");
      cfg.sweep_values = sw.numbers("values");
      sw.done();
      if (cfg.sweep_variable == SweepVariable::UBar && cfg.model != ModelKind::Adhesion) {
        Fields::fail("sweep.variable", "u_bar applies to the adhesion model only");
      }
    }
    if (cfg.sweep_variable == SweepVariable::Beta) {
      if (!cfg.betas.empty()) Fields::fail("ensemble.beta", "conflicts with a beta sweep");
      cfg.betas = cfg.sweep_values;
    }
    if (cfg.betas.empty()) Fields::fail("ensemble.beta", "is required");
    for (double b : cfg.betas) {
      if (!(b > 0.0) || !std::isfinite(b)) {
        Fields::fail(cfg.sweep_variable == SweepVariable::Beta ? "sweep.values" : "ensemble.beta",
                     "must contain positive values");
      }
    }
    parse_method(root, cfg);
    if (cfg.method == Method::Mcmc && cfg.model != ModelKind::Adhesion && cfg.betas.size() != 1) {
      Fields::fail("ensemble.beta", "must be a single value with method \"mcmc\"");
    }

    {
      Fields out(root.at("output"), "output");
      cfg.output_path = out.text("path", "");
      const std::string fmt = out.text("format", "csv");
      if (fmt == "csv") cfg.format = OutputFormat::Csv;
      else if (fmt == "json") cfg.format = OutputFormat::Json;
      else Fields::fail("output.format", "must be \"csv\" or \"json\"");
      out.done();
      if (!cfg.output_path.empty()) cfg.output_path = resolve_path(cfg.output_path, base_dir);
    }

    const json* mesh = root.find("mesh");
    Fields params(root.has("parameters") ? root.at("parameters") : json::object(), "parameters");
    try {
    switch (cfg.model) {
      case ModelKind::String: cfg.system = parse_string(params, mesh, base_dir); break;
      case ModelKind::Beam: cfg.system = parse_beam(params, mesh, base_dir); break;
      case ModelKind::Membrane: cfg.system = parse_membrane(params, mesh, base_dir); break;
      case ModelKind::Adhesion: {
        AdhesionParams a = parse_adhesion(params, mesh, cfg.scaled_units);
        if (cfg.scaled_units) {
          const double e0 = a.energy_scale();
          for (double& b : cfg.betas) b /= e0;
          if (cfg.sweep_variable == SweepVariable::UBar) {
            for (double& u : cfg.sweep_values) u *= a.broken_length;
          }
        }
        cfg.system = std::move(a);
        break;
      }
    }
  } catch (const Error& e) {
    throw ModelError(cfg.model_name, e);
  }
  params.done();
  root.done();
  return cfg;
}

namespace {

// Node positions of a model in output order: ascending x in 1-D, file order in 2-D.
std::vector<std::size_t> output_nodes(const Mesh& mesh) {
  std::vector<std::size_t> order(mesh.node_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (mesh.spatial_dim() == 1) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return mesh.nodes()[a].coords.x() < mesh.nodes()[b].coords.x();
    });
  }
  return order;
}

std::vector<std::string> position_columns(const Mesh& mesh) {
  if (mesh.spatial_dim() == 1) return {"x"};
  return {"x", "y"};
}

void push_position(std::vector<double>& row, const Mesh& mesh, std::size_t node) {
  row.push_back(mesh.nodes()[node].coords.x());
  if (mesh.spatial_dim() == 2) row.push_back(mesh.nodes()[node].coords.y());
}

Table analytic_field(const ModelSystem& s, double beta) {
  const GaussianStats g = moments({beta, s.form});
  Table t{position_columns(s.mesh), {}};
  t.columns.insert(t.columns.end(), {"mean_u", "var_u"});
  for (std::size_t node : output_nodes(s.mesh)) {
    const Point p = s.mesh.nodes()[node].coords;
    std::vector<double> row;
    push_position(row, s.mesh, node);
    row.push_back(mean_field(g, s.mesh, s.dofs, p));
    row.push_back(field_covariance(g, s.mesh, s.dofs, p, p));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table mcmc_field(const ModelSystem& s, double beta, const McmcConfig& mc) {
  const auto nodes = output_nodes(s.mesh);
  const int nd = s.dofs.ndof_per_node();
  const DofMap& dofs = s.dofs;
  Observable obs = [&](std::span<const double> d) {
    const Eigen::VectorXd full =
        full_dof_vector(dofs, Eigen::Map<const Eigen::VectorXd>(d.data(), d.size()));
    std::vector<double> u(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) u[k] = full[nodes[k] * nd];
    return u;
  };
  const std::vector<double> init(s.form.n(), 0.0);
  const QuadraticForm& form = s.form;
  auto factory = [&form] { return std::make_unique<QuadraticEnergy>(form); };
  const Estimate est = run_chains(factory, beta, init, obs, mc.chain, mc.chains);

  Table t{position_columns(s.mesh), {}};
  t.columns.insert(t.columns.end(), {"mean_u", "se_u"});
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    std::vector<double> row;
    push_position(row, s.mesh, nodes[k]);
    row.push_back(est.value[k]);
    row.push_back(est.std_error[k]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table mcmc_adhesion(const AdhesionParams& base, const std::vector<double>& betas,
                    const std::vector<double>& u_values, const McmcConfig& mc) {
  Table t{{"u_bar", "beta", "mean_xi", "se_xi", "acceptance"}, {}};
  for (double beta : betas) {
    for (double u : u_values) {
      AdhesionParams p = base;
      p.u_bar = u;
      const SpinEnsemble se = build_spin_ensemble(p, beta);
      std::vector<Estimate> runs;
      for (std::size_t c = 0; c < mc.chains; ++c) {
        SpinQuadraticEnergy model(se.forms, se.forms.size() - 1);
        ChainConfig cc = mc.chain;
        cc.seed = mc.chains == 1 ? mc.chain.seed : chain_seed(mc.chain.seed, c);
        const std::vector<double> init(se.forms.front().n(), 0.0);
        runs.push_back(metropolis_with_spin(
            model, beta, init, se.forms.size() - 1,
            [](std::span<const double>, std::size_t xi) {
              return std::vector<double>{static_cast<double>(xi)};
            },
            cc));
      }
      const Estimate e = combine_estimates(runs);
      double acc = 0.0;
      for (const auto& r : runs) acc += r.acceptance_rate / static_cast<double>(runs.size());
      t.rows.push_back({u, beta, e.value[0], e.std_error[0], acc});
    }
  }
  return t;
}

}  // namespace

RunResult execute(const RunConfig& cfg) {
  RunResult r;
  if (const auto* s = std::get_if<ModelSystem>(&cfg.system)) {
    r.n_dofs = s->form.n();
    if (cfg.method == Method::Mcmc) {
      r.table = mcmc_field(*s, cfg.betas.front(), cfg.mcmc);
    } else if (cfg.betas.size() == 1 && !cfg.sweep_variable) {
      r.table = analytic_field(*s, cfg.betas.front());
    } else {
      r.table = sweep(*s, SweepVariable::Beta, cfg.betas);
    }
    return r;
  }
  const AdhesionParams& a = std::get<AdhesionParams>(cfg.system);
  const std::vector<double> u_values = cfg.sweep_variable == SweepVariable::UBar
                                           ? cfg.sweep_values
                                           : std::vector<double>{a.u_bar};
  {
    const SpinEnsemble probe = build_spin_ensemble(a, cfg.betas.front());
    r.n_dofs = probe.forms.front().n();
  }
  if (cfg.method == Method::Mcmc) {
    r.table = mcmc_adhesion(a, cfg.betas, u_values, cfg.mcmc);
  } else {
    r.table = sweep(a, SweepVariable::UBar, u_values, cfg.betas);
  }
  if (cfg.scaled_units) {
    const double e0 = a.energy_scale(), u0 = a.broken_length;
    for (auto& row : r.table.rows) {
      row[0] /= u0;
      row[1] *= e0;
      if (cfg.method == Method::Analytic) row[2] *= u0 / e0;
    }
  }
  return r;
}

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string format_json(const Table& t) {
  using ordered = nlohmann::ordered_json;
  ordered rows = ordered::array();
  for (const auto& row : t.rows) {
    ordered obj = ordered::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      obj[t.columns[i]] = std::isfinite(row[i]) ? ordered(row[i]) : ordered(nullptr);
    }
    rows.push_back(std::move(obj));
  }
  ordered doc = {{"columns", t.columns}, {"rows", std::move(rows)}};
  return doc.dump(2) + "\n";
}

std::string mesh_summary(const Mesh& mesh) {
  std::map<std::string, std::size_t> cells, boundary;
  for (const auto& e : mesh.elements()) ++cells[std::string(to_string(e.kind))];
  for (const auto& e : mesh.boundary()) ++boundary[std::string(to_string(e.kind))];
  Point lo = mesh.nodes().front().coords, hi = lo;
  for (const auto& n : mesh.nodes()) {
    lo = lo.cwiseMin(n.coords);
    hi = hi.cwiseMax(n.coords);
  }
  std::ostringstream s;
  s << "dimension: " << mesh.spatial_dim() << '\n';
  s << "nodes: " << mesh.node_count() << '\n';
  s << "elements: " << mesh.elements().size() << '\n';
  for (const auto& [kind, n] : cells) s << "  " << kind << ": " << n << '\n';
  s << "boundary elements: " << mesh.boundary().size() << '\n';
  for (const auto& [kind, n] : boundary) s << "  " << kind << ": " << n << '\n';
  s << "h: " << format_number(mesh.h()) << '\n';
  s << "bounding box: [" << format_number(lo.x()) << ", " << format_number(hi.x()) << "] x ["
    << format_number(lo.y()) << ", " << format_number(hi.y()) << "]\n";
  return s.str();
}

}  // namespace funcint::cli
