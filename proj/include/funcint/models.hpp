#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "funcint/assembly.hpp"
#include "funcint/dof_map.hpp"
#include "funcint/gaussian.hpp"
#include "funcint/mesh.hpp"

namespace funcint {

/// Distributed load f: constant, one value per mesh node, or a function of x.
/// Inside an element f is interpolated linearly from its nodal values.
struct Load {
  std::variant<double, std::vector<double>, std::function<double(const Point&)>> source = 0.0;

  std::vector<double> nodal_values(const Mesh& mesh) const;
};

/// Everything needed to evaluate observables of a discretized quadratic model.
struct ModelSystem {
  std::string name;
  Mesh mesh;
  DofMap dofs;
  Coefficient material;
  std::vector<double> nodal_load;
  QuadraticForm form;
};

// --- string: E = int 1/2 sigma u_x^2 - f u, u(0) = left, u(L) = right ---------

struct StringParams {
  double length = 1.0;
  double sigma = 1.0;
  Load load;
  double left = 0.0;
  double right = 0.0;
};

/// `mesh` must be a Line2 interval mesh over [0, length].
ModelSystem build_string(const StringParams& p, const Mesh& mesh);

// --- beam: E = int 1/2 K_B u_xx^2 - f u ----------------------------------------

struct BeamSupport {
  double x = 0.0;
  std::optional<double> value;  ///< prescribed u
  std::optional<double> slope;  ///< prescribed u_x
};

struct BeamParams {
  double length = 1.0;
  double bending_stiffness = 1.0;
  Load load;
  /// Defaults to a clamped left end (u = u_x = 0 at x = 0).
  std::vector<BeamSupport> supports = {{0.0, 0.0, 0.0}};
};

/// `mesh` is an interval mesh over [0, length]; it is used with Hermite elements.
ModelSystem build_beam(const BeamParams& p, const Mesh& mesh);

// --- membrane: E = int 1/2 sigma |grad u|^2 - f u over a triangulation --------

struct MembraneParams {
  Mesh mesh;
  double sigma = 1.0;
  Load load;
  /// (physical tag, prescribed value). Tags sharing a value form one constraint.
  std::vector<std::pair<int, double>> boundary_values;
};

ModelSystem build_membrane(const MembraneParams& p);

// --- adhesion: clamped beam with N breakable bonds, end held at u_bar ---------

struct AdhesionParams {
  double length = 1.0;             ///< L
  double bending_stiffness = 1.0;  ///< K_B
  std::size_t n_bonds = 6;         ///< N
  double bond_stiffness = 5.0;     ///< k
  double broken_length = 1.0;      ///< U, broken bond energy is 1/2 k U^2
  double u_bar = 0.0;              ///< prescribed end displacement
  /// Bond positions; default A L / (N + 1), A = 1..N.
  std::vector<double> bond_positions;
  /// Optional interval mesh node positions; bonds must sit on interior nodes.
  /// Default: nodes at 0, the bond positions and L.
  std::vector<double> mesh_positions;

  /// E0 = K_B U^2 / L^3.
  double energy_scale() const {
    return bending_stiffness * broken_length * broken_length / (length * length * length);
  }
  std::vector<double> resolved_bond_positions() const;
};

/// N + 1 quadratic forms; form xi has bonds 1..xi (nearest the clamp) connected:
/// k added on their value-dof diagonal, 1/2 (N - xi) k U^2 added to c.
struct SpinEnsemble {
  double beta = 1.0;
  ModelSystem beam;                ///< bare beam with the end displacement applied
  std::vector<QuadraticForm> forms;
  std::vector<int> bond_dofs;      ///< open index of each bond's value dof, by x ascending
  DofLabel support;                ///< prescribed end displacement dof
};

SpinEnsemble build_spin_ensemble(const AdhesionParams& p, double beta);

struct SpinObservables {
  std::vector<double> log_Z;            ///< per xi
  double log_Z_total = 0.0;             ///< logsumexp of log_Z
  std::vector<double> xi_distribution;  ///< exp(log_Z[xi] - log_Z_total)
  double mean_xi = 0.0;
};

SpinObservables spin_observables(const SpinEnsemble& se);

/// <f> = -(1/beta) d ln Z / d u_bar, evaluated analytically from the exact
/// sensitivities of (b, c).
double mean_force(const SpinEnsemble& se);
double mean_force(const AdhesionParams& p, double beta);

/// Stable log(sum(exp(v))).
double log_sum_exp(std::span<const double> v);

}  // namespace funcint
