#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ergoplan/stl/formula.hpp"
#include "ergoplan/stl/signal.hpp"

namespace ergoplan::stl {

/// Exact (min/max) robustness of `formula` at sample k.
///
/// Throws UnknownChannel if a predicate names a channel absent from the
/// signal, and EmptyWindow if a temporal window starts past the horizon.
double eval_robust(const Formula& formula, const Signal& signal, std::size_t k);

/// Smooth robustness with arithmetic-geometric mean aggregation.
///
/// For children r_1..r_m the conjunction is (prod(1 + r_i))^(1/m) - 1 when
/// every r_i > 0 and (1/m) * sum of the non-positive r_i otherwise; the
/// disjunction is -And(-r). Both keep the sign of min/max exactly.
double eval_agm(const Formula& formula, const Signal& signal, std::size_t k);

/// A signal coordinate: channel name and sample index.
using Coordinate = std::pair<std::string, std::size_t>;

/// Partial derivatives of eval_agm with respect to the requested coordinates,
/// obtained by forward accumulation through the evaluation tree. At an
/// aggregator branch boundary (some child exactly 0) the derivative of the
/// branch chosen by the evaluator is returned.
std::vector<double> eval_agm_gradient(const Formula& formula, const Signal& signal, std::size_t k,
                                      std::span<const Coordinate> wrt);

/// Smooth value together with its full gradient. `gradient` is dense with
/// layout [channel_index * sample_count + sample].
struct SmoothRobustness {
  double value = 0.0;
  std::vector<double> gradient;
};
SmoothRobustness eval_agm_with_gradient(const Formula& formula, const Signal& signal, std::size_t k);

/// The aggregators themselves, exposed for tests and diagnostics.
double agm_and(std::span<const double> values);
double agm_or(std::span<const double> values);

}  // namespace ergoplan::stl
