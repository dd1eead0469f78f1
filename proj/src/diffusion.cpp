#include "metro/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "metro/error.hpp"
#include "metro/simd/kernels.hpp"
#include "parallel.hpp"

namespace metro {

namespace {

constexpr double kResidualGuard = 1e-300;

void check_length(const Network& net, std::size_t len, const char* what) {
  if (len != net.size())
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": vector length " +
                                                  std::to_string(len) + " != N = " +
                                                  std::to_string(net.size()));
}

/// Laplacian of one connected component in local numbering.
struct LocalGraph {
  std::vector<std::uint32_t> members;  // global ids, ascending
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> targets;

  LocalGraph(const Network& net, std::vector<std::uint32_t> ids) : members(std::move(ids)) {
    offsets.reserve(members.size() + 1);
    offsets.push_back(0);
    for (std::uint32_t g : members) {
      for (std::uint32_t u : net.neighbors(g)) {
        // Neighbours share the component, so lower_bound always hits.
        auto it = std::lower_bound(members.begin(), members.end(), u);
        targets.push_back(static_cast<std::uint32_t>(it - members.begin()));
      }
      offsets.push_back(static_cast<std::uint32_t>(targets.size()));
    }
  }

  std::size_t size() const { return members.size(); }

  void apply(std::span<const double> x, std::span<double> out) const {
    simd::laplacian(offsets, targets, x, 1.0, out);
  }
};

void remove_mean(std::span<double> v) {
  if (v.empty()) return;
  simd::add_scalar(-simd::sum(v) / static_cast<double>(v.size()), v);
}

/// Conjugate gradients for L x = b with b zero-mean. The residual is kept in
/// range(L) by re-projecting it every step, and the recurrence is restarted
/// from the true residual if the two drift apart. Iteration continues past
/// `tolerance` towards kPolish * tolerance while restarts keep improving the
/// true residual: on tree-like graphs a 1e-10 residual alone leaves errors
/// near 1e-8 in x.
struct CgOutcome {
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

CgOutcome conjugate_gradient(const LocalGraph& g, std::span<const double> b, std::span<double> x,
                             double tolerance, std::size_t budget) {
  const std::size_t n = g.size();
  std::fill(x.begin(), x.end(), 0.0);
  const double bnorm = simd::norm2(b);
  if (bnorm == 0.0) return {0.0, 0, true};

  constexpr double kPolish = 1e-3;
  const double goal = tolerance * kPolish;
  std::vector<double> r(b.begin(), b.end());
  std::vector<double> p(n), ap(n);
  CgOutcome out;
  double best = std::numeric_limits<double>::infinity();
  while (out.iterations < budget) {
    const std::size_t pass_start = out.iterations;
    p = r;
    double rr = simd::dot(r, r);
    while (out.iterations < budget && std::sqrt(rr) > goal * bnorm) {
      g.apply(p, ap);
      const double pap = simd::dot(p, ap);
      if (!(pap > 0.0)) break;
      const double alpha = rr / pap;
      simd::axpy(alpha, p, x);
      simd::axpy(-alpha, ap, r);
      remove_mean(r);
      const double rr_next = simd::dot(r, r);
      simd::xpby(r, rr_next / rr, p);
      rr = rr_next;
      ++out.iterations;
    }
    // True residual of the current iterate.
    remove_mean(x);
    g.apply(x, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
    remove_mean(r);
    out.residual = simd::norm2(r) / bnorm;
    if (out.residual <= goal || out.iterations == pass_start) break;
    // Rounding floor reached: further restarts no longer pay off.
    if (best <= tolerance && out.residual > 0.5 * best) break;
    best = std::min(best, out.residual);
  }
  out.converged = out.residual <= tolerance;
  return out;
}

struct ComponentSolve {
  std::vector<double> x;
  double mean = 0.0;
  std::size_t iterations = 0;
};

std::vector<ComponentSolve> solve_components(const Network& net, const Components& comp,
                                             std::span<const double> rhs, double tolerance,
                                             std::size_t max_iter_factor) {
  std::vector<std::vector<std::uint32_t>> members(comp.count);
  for (std::uint32_t v = 0; v < net.size(); ++v) members[comp.label[v]].push_back(v);

  std::vector<ComponentSolve> solves(comp.count);
  detail::parallel_for(comp.count, [&](std::size_t c) {
    ComponentSolve& s = solves[c];
    const auto& ids = members[c];
    std::vector<double> b(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) b[i] = rhs[ids[i]];
    s.mean = simd::sum(b) / static_cast<double>(b.size());
    s.x.assign(ids.size(), 0.0);
    if (ids.size() == 1) return;
    simd::add_scalar(-s.mean, b);

    const LocalGraph g(net, ids);
    const std::size_t budget = std::max<std::size_t>(1, max_iter_factor * ids.size());
    const CgOutcome cg = conjugate_gradient(g, b, s.x, tolerance, budget);
    s.iterations = cg.iterations;
    if (!cg.converged) {
      throw Error(ErrorKind::SolverDivergence,
                  "Laplacian solve on component of " + std::to_string(ids.size()) +
                      " stations stopped at relative residual " + std::to_string(cg.residual) +
                      " after " + std::to_string(cg.iterations) + " iterations");
    }
  });
  return solves;
}

}  // namespace

FlowSignal make_flow_signal(const Network& net, std::vector<double> q, std::string period) {
  check_length(net, q.size(), "flow signal");
  const Components comp = connected_components(net);
  FlowSignal out{std::move(q), std::move(period), std::vector<double>(comp.count, 0.0)};
  for (std::size_t v = 0; v < net.size(); ++v) out.component_sums[comp.label[v]] += out.q[v];
  return out;
}

FlowSignal forward_flux(const Network& net, std::span<const double> phi,
                        const DiffusionParams& params) {
  check_length(net, phi.size(), "forward_flux");
  std::vector<double> q(net.size());
  simd::laplacian(net.csr_offsets(), net.csr_targets(), phi, -params.k, q);
  return make_flow_signal(net, std::move(q), "model");
}

std::vector<double> project_zero_mean(const Network& net, std::span<const double> v) {
  check_length(net, v.size(), "project_zero_mean");
  const Components comp = connected_components(net);
  std::vector<double> sums(comp.count, 0.0);
  const std::vector<std::size_t> sizes = comp.sizes();
  for (std::size_t i = 0; i < v.size(); ++i) sums[comp.label[i]] += v[i];
  std::vector<double> out(v.begin(), v.end());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] -= sums[comp.label[i]] / static_cast<double>(sizes[comp.label[i]]);
  return out;
}

SolveResult solve_laplacian(const Network& net, std::span<const double> rhs, double tolerance,
                            std::size_t max_iter_factor) {
  check_length(net, rhs.size(), "solve_laplacian");
  const Components comp = connected_components(net);
  const auto solves = solve_components(net, comp, rhs, tolerance, max_iter_factor);

  SolveResult out{std::vector<double>(net.size(), 0.0), 0.0, 0};
  std::vector<std::size_t> cursor(comp.count, 0);
  for (std::size_t v = 0; v < net.size(); ++v) {
    const auto c = comp.label[v];
    out.x[v] = solves[c].x[cursor[c]++];
  }
  for (const auto& s : solves) out.iterations += s.iterations;

  const std::vector<double> b = project_zero_mean(net, rhs);
  std::vector<double> lx(net.size());
  laplacian(net).apply(out.x, lx);
  simd::axpy(-1.0, b, lx);
  out.residual = simd::norm2(lx) / std::max(simd::norm2(b), kResidualGuard);
  return out;
}

PopulationEstimate estimate_population(const Network& net, const FlowSignal& flow,
                                       const DiffusionParams& params) {
  check_length(net, flow.q.size(), "estimate_population");
  if (!(params.k > 0.0))
    throw Error(ErrorKind::InvalidArgument, "diffusivity k must be positive");

  const Components comp = connected_components(net);
  const auto solves =
      solve_components(net, comp, flow.q, params.tolerance, params.max_iter_factor);

  PopulationEstimate est;
  est.raw_phi.assign(net.size(), 0.0);
  est.projected_out.resize(comp.count);
  std::vector<std::size_t> cursor(comp.count, 0);
  for (std::size_t v = 0; v < net.size(); ++v) {
    const auto c = comp.label[v];
    // L y = q_projected, phi = -y / k
    est.raw_phi[v] = -solves[c].x[cursor[c]++] / params.k;
  }
  for (std::uint32_t c = 0; c < comp.count; ++c) {
    est.projected_out[c] = solves[c].mean;
    est.iterations += solves[c].iterations;
  }

  std::vector<double> low(comp.count, INFINITY);
  for (std::size_t v = 0; v < net.size(); ++v)
    low[comp.label[v]] = std::min(low[comp.label[v]], est.raw_phi[v]);
  est.phi.resize(net.size());
  for (std::size_t v = 0; v < net.size(); ++v) est.phi[v] = est.raw_phi[v] - low[comp.label[v]];

  est.residual = round_trip_residual(net, flow, est, params);
  return est;
}

double round_trip_residual(const Network& net, const FlowSignal& flow,
                           const PopulationEstimate& est, const DiffusionParams& params) {
  check_length(net, flow.q.size(), "round_trip_residual");
  check_length(net, est.raw_phi.size(), "round_trip_residual");
  const std::vector<double> q_projected = project_zero_mean(net, flow.q);
  std::vector<double> diff(net.size());
  simd::laplacian(net.csr_offsets(), net.csr_targets(), est.raw_phi, -params.k, diff);
  simd::axpy(-1.0, q_projected, diff);
  return simd::norm2(diff) / std::max(simd::norm2(q_projected), kResidualGuard);
}

}  // namespace metro
