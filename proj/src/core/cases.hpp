#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/fixed_solver.hpp"
#include "core/manufactured.hpp"
#include "core/mesh.hpp"

namespace mlswe {

/// A fully resolved benchmark configuration: physics, domain, initial data,
/// monitor settings and the per-case acceptance checks.
struct CaseSetup {
  std::string name;
  int dim = 1;
  LayerSystem sys{{1.0}, 9.812};
  double x1lo = 0, x1hi = 1, x2lo = 0, x2hi = 1;
  Boundary bc1 = Boundary::outflow, bc2 = Boundary::outflow;
  double t_end = 1.0;
  int default_n1 = 100, default_n2 = 1;
  MonitorConfig monitor;

  /// Nodal initial data (also used to resample during the initial mesh
  /// adaptation); fills h, u, v and b of the node.
  std::function<void(double x1, double x2, NodeState &)> initial;
  std::function<double(double x1, double x2)> bathymetry;

  bool wb_case = false;                // starts from a lake-at-rest state
  std::vector<double> surface_levels;  // plain levels sum_{k>=m} h_k + b
  bool check_energy_monotone = false;  // dam-break / perturbation runs
  std::vector<double> snapshot_times;  // extra output instants

  std::shared_ptr<const ExactSolution> exact; // accuracy runs
  SourceFn source;                            // manufactured source
  bool has_reference = false; // fine-grid self-generated reference recipe
};

/// Catalogue lookup.  layers = 0 picks the case default (two layers).
/// Throws std::invalid_argument for unknown names or unsupported layer
/// counts, listing the catalogue.
CaseSetup make_case(const std::string &name, int layers = 0);

std::vector<std::string> case_names();

/// Printed closed-form momentum sources of the 1D two-layer accuracy run
/// (g = 1); slot 1 of layer 1 and layer 2.  Kept verbatim so the residual
/// oracle can guard the transcription.
double accuracy_1d_two_layer_s2(double x, double t);
double accuracy_1d_two_layer_s4(double x, double t, double r12);

} // namespace mlswe
