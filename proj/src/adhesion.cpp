#include "funcint/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "funcint/error.hpp"

namespace funcint {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidParameter, std::string(name) + " must be positive");
  }
}

}  // namespace

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(top)) return top;
  double s = 0.0;
  for (double x : v) s += std::exp(x - top);
  return top + std::log(s);
}

std::vector<double> AdhesionParams::resolved_bond_positions() const {
  if (!bond_positions.empty()) {
    std::vector<double> x = bond_positions;
    std::sort(x.begin(), x.end());
    return x;
  }
  std::vector<double> x(n_bonds);
  for (std::size_t a = 0; a < n_bonds; ++a) {
    x[a] = length * static_cast<double>(a + 1) / static_cast<double>(n_bonds + 1);
  }
  return x;
}

SpinEnsemble build_spin_ensemble(const AdhesionParams& p, double beta) {
  require_positive(beta, "beta");
  require_positive(p.length, "length");
  require_positive(p.bending_stiffness, "bending_stiffness");
  require_positive(p.bond_stiffness, "bond_stiffness");
  require_positive(p.broken_length, "broken_length");
  if (p.n_bonds < 1) throw Error(ErrorCode::InvalidParameter, "n_bonds must be >= 1");
  if (!p.bond_positions.empty() && p.bond_positions.size() != p.n_bonds) {
    throw Error(ErrorCode::InvalidParameter, "bond_positions must list n_bonds positions");
  }
  const std::vector<double> bonds = p.resolved_bond_positions();
  for (std::size_t a = 0; a < bonds.size(); ++a) {
    if (!(bonds[a] > 0.0 && bonds[a] < p.length) || (a > 0 && bonds[a] == bonds[a - 1])) {
      throw Error(ErrorCode::BondOffMesh, "bond at x = " + std::to_string(bonds[a]) +
                                              " is not at a distinct interior node");
    }
  }

  std::vector<double> positions = p.mesh_positions;
  if (positions.empty()) {
    positions.push_back(0.0);
    positions.insert(positions.end(), bonds.begin(), bonds.end());
    positions.push_back(p.length);
  }
  Mesh mesh = build_interval_mesh(p.length, positions, ElementKind::HermiteLine2);

  BeamParams beam_params;
  beam_params.length = p.length;
  beam_params.bending_stiffness = p.bending_stiffness;
  beam_params.supports = {{0.0, 0.0, 0.0}, {p.length, p.u_bar, std::nullopt}};

  ModelSystem beam = build_beam(beam_params, mesh);
  const Mesh& m = beam.mesh;
  const DofLabel support{m.nodes().back().id, 0};
  std::vector<int> bond_dofs;

  const double tol = 1e-9 * p.length;
  for (double xb : bonds) {
    const auto it = std::find_if(m.nodes().begin(), m.nodes().end(), [&](const Node& n) {
      return std::abs(n.coords.x() - xb) <= tol;
    });
    if (it == m.nodes().end()) {
      throw Error(ErrorCode::BondOffMesh, "no mesh node at bond x = " + std::to_string(xb));
    }
    const auto idx = beam.dofs.open_index(static_cast<std::size_t>(it - m.nodes().begin()), 0);
    if (!idx) {
      throw Error(ErrorCode::BondOffMesh,
                  "bond at x = " + std::to_string(xb) + " sits on a prescribed node");
    }
    bond_dofs.push_back(*idx);
  }

  const double k = p.bond_stiffness;
  const double broken = 0.5 * k * p.broken_length * p.broken_length;
  const std::size_t n = p.n_bonds;
  std::vector<QuadraticForm> forms;
  forms.reserve(n + 1);
  for (std::size_t xi = 0; xi <= n; ++xi) {
    QuadraticForm f = beam.form;
    for (std::size_t a = 0; a < xi; ++a) f.K(bond_dofs[a], bond_dofs[a]) += k;
    f.c += static_cast<double>(n - xi) * broken;
    forms.push_back(std::move(f));
  }
  return SpinEnsemble{beta, std::move(beam), std::move(forms), std::move(bond_dofs), support};
}

SpinObservables spin_observables(const SpinEnsemble& se) {
  SpinObservables out;
  out.log_Z.reserve(se.forms.size());
  for (const auto& f : se.forms) {
    out.log_Z.push_back(moments({se.beta, f}, false).log_Z);
  }
  out.log_Z_total = log_sum_exp(out.log_Z);
  out.xi_distribution.resize(out.log_Z.size());
  for (std::size_t xi = 0; xi < out.log_Z.size(); ++xi) {
    out.xi_distribution[xi] = std::exp(out.log_Z[xi] - out.log_Z_total);
    out.mean_xi += static_cast<double>(xi) * out.xi_distribution[xi];
  }
  return out;
}

double mean_force(const SpinEnsemble& se) {
  const FormSensitivity s = assemble_sensitivity(se.beam.mesh, se.beam.dofs, se.beam.material,
                                                 se.beam.nodal_load, se.support);
  std::vector<double> log_z(se.forms.size());
  std::vector<double> dE(se.forms.size());
  for (std::size_t xi = 0; xi < se.forms.size(); ++xi) {
    const GaussianStats g = moments({se.beta, se.forms[xi]}, false);
    log_z[xi] = g.log_Z;
    // -(1/beta) d ln Z_xi / d u_bar = dc + db . mean
    dE[xi] = s.dc + s.db.dot(g.mean);
  }
  const double total = log_sum_exp(log_z);
  double f = 0.0;
  for (std::size_t xi = 0; xi < log_z.size(); ++xi) f += std::exp(log_z[xi] - total) * dE[xi];
  return f;
}

double mean_force(const AdhesionParams& p, double beta) {
  return mean_force(build_spin_ensemble(p, beta));
}

}  // namespace funcint
