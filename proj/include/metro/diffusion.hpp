#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "metro/network.hpp"

namespace metro {

struct FlowSignal {
  std::vector<double> q;  // net outflow per station: exits - entries
  std::string period;
  std::vector<double> component_sums;  // per connected component
};

struct DiffusionParams {
  double k = 1.0;  // diffusivity, stations per unit time
  // Relative residual target and per-component iteration cap
  // (max_iter_factor * component size) of the Laplacian solve.
  double tolerance = 1e-10;
  std::size_t max_iter_factor = 20;
};

struct PopulationEstimate {
  std::vector<double> phi;            // relative population, min 0 per component
  std::vector<double> raw_phi;        // zero mean per component
  double residual = 0.0;              // relative residual of the projected system
  std::vector<double> projected_out;  // per-component mean of q removed before solving
  std::size_t iterations = 0;         // summed over components
};

/// q = -k L phi.
FlowSignal forward_flux(const Network& net, std::span<const double> phi,
                        const DiffusionParams& params = {});

/// phi = -(1/k) L^+ q, anchored so the smallest value in each connected
/// component is 0. L^+ is applied by conjugate gradients on each component
/// after projecting q onto the zero-mean subspace.
PopulationEstimate estimate_population(const Network& net, const FlowSignal& flow,
                                       const DiffusionParams& params = {});

/// ||-k L raw_phi - q_projected|| / max(||q_projected||, 1e-300).
double round_trip_residual(const Network& net, const FlowSignal& flow,
                           const PopulationEstimate& est, const DiffusionParams& params = {});

/// Per-component zero-mean part of v.
std::vector<double> project_zero_mean(const Network& net, std::span<const double> v);

/// Computes component sums of q and wraps it in a FlowSignal.
FlowSignal make_flow_signal(const Network& net, std::vector<double> q, std::string period);

struct SolveResult {
  std::vector<double> x;
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Minimum-norm solution of L x = rhs, i.e. x = L^+ rhs_projected.
SolveResult solve_laplacian(const Network& net, std::span<const double> rhs,
                            double tolerance = 1e-10, std::size_t max_iter_factor = 20);

}  // namespace metro
