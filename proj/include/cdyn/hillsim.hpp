#pragma once

#include "cdyn/paramgraph.hpp"
#include "cdyn/timeseries.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cdyn {

class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class NoOscillationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class IrregularOscillationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct EdgeValues {
  double l = 0;
  double h = 0;
  double theta = 0;
};

// One (l, h, theta) per network edge, indexed like RegulatoryNetwork::edges().
struct RealParameterization {
  std::vector<EdgeValues> edges;
  double hill_n = 10;
};

struct SampleOptions {
  double log_margin = 3.0;  // separation of values from thresholds, in natural log units
  std::size_t vertices = 3;
};

// Point inside the region of the given factor parameters. The result is re-classified by
// direct evaluation and rejected if it lands in a different region.
RealParameterization sample_region(const RegulatoryNetwork& net, const std::vector<FactorParameter>& params,
                                   std::uint64_t seed, const SampleOptions& opt = {});
RealParameterization sample_region(const ParameterGraph& pg, std::uint64_t k, std::uint64_t seed,
                                   const SampleOptions& opt = {});

// Factor parameters of a real parameterization by direct evaluation of the step functions.
std::vector<FactorParameter> classify(const RegulatoryNetwork& net, const RealParameterization& rp);

// Value of node i's steep-sigmoid input function at state x.
double hill_input(const RegulatoryNetwork& net, const RealParameterization& rp, std::size_t i,
                  const std::vector<double>& x);
std::vector<double> vector_field(const RegulatoryNetwork& net, const RealParameterization& rp,
                                 const std::vector<double>& x);

struct SimOptions {
  double t_end = 200;
  double dt = 0.01;
  std::size_t stride = 1;  // record every stride-th step
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[var][sample]
  std::vector<double> final_state() const;
};

Trajectory simulate(const RegulatoryNetwork& net, const RealParameterization& rp, const std::vector<double>& x0,
                    const SimOptions& opt = {});

// Domain coordinates of a state: thresholds of each node lying below its value.
std::vector<std::size_t> domain_of(const RegulatoryNetwork& net, const RealParameterization& rp,
                                   const std::vector<double>& x);

// Seeded initial conditions, log-uniform over a box that contains every threshold and every
// attainable input value of each node.
std::vector<std::vector<double>> initial_conditions(const RegulatoryNetwork& net, const RealParameterization& rp,
                                                    std::size_t count, std::uint64_t seed);

// Newton refinement of an equilibrium of the smooth system.
std::vector<double> refine_equilibrium(const RegulatoryNetwork& net, const RealParameterization& rp,
                                       std::vector<double> x);

struct TrajectoryEvent {
  std::size_t var;
  ExtremumKind kind;
  double time;
};

// Cyclic order of extrema over the last full period after discarding the transient.
// A variable oscillates when its post-transient amplitude exceeds eps times its magnitude.
std::vector<TrajectoryEvent> extrema_order(const Trajectory& traj, double eps, double transient = 0.5);

std::string witness_json(const RegulatoryNetwork& net, const RealParameterization& rp);
RealParameterization parse_witness(const RegulatoryNetwork& net, const std::string& text);

} // namespace cdyn
