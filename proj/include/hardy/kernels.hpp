#pragma once

// Data-parallel node kernels behind the cubature and the sampled-field
// evaluator. Every kernel exists twice: an OpenMP version used in production
// and a plain serial reference kept for testing and benchmarking.
//
// The parallel reductions split the node range into fixed blocks of
// kBlockSize, sum inside each block in index order and combine the block
// sums pairwise. The result therefore does not depend on the thread count.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hardy/quadrature.hpp"

namespace hardy::kernels {

enum class Exec { Serial, Parallel };

inline constexpr std::size_t kBlockSize = 2048;

/// Writes `out.size()` values for the node at `x`.
using NodeFn = std::function<void(std::span<const double> x, std::span<double> out)>;

/// Σᵢ wᵢ·fn(xᵢ), one sum per output slot. Nodes with zero weight are skipped.
/// Throws IntegrationError naming the lowest-index node with a non-finite value.
std::vector<double> integrate_nodes(const CubatureRule& rule, std::size_t width, const NodeFn& fn,
                                    Exec exec = Exec::Parallel);

/// Row-major table of per-node payloads for repeated reductions.
struct NodeTable {
  std::size_t width = 0;
  std::vector<double> weight;  // one per kept node
  std::vector<double> rows;    // weight.size() × width
  std::vector<std::size_t> index;  // rule index of each kept node
  std::span<const double> row(std::size_t i) const { return {rows.data() + i * width, width}; }
  std::size_t size() const noexcept { return weight.size(); }
};

/// Evaluates fn at every node with non-zero weight and stores the payload.
NodeTable tabulate(const CubatureRule& rule, std::size_t width, const NodeFn& fn, Exec exec = Exec::Parallel);

using RowFn = std::function<void(std::span<const double> row, std::span<double> out)>;

/// Σᵢ wᵢ·fn(rowᵢ) over a table.
std::vector<double> reduce(const NodeTable& table, std::size_t width, const RowFn& fn,
                           Exec exec = Exec::Parallel);

/// Pairwise (cascade) summation of a contiguous range.
double pairwise_sum(std::span<const double> values);

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();

}  // namespace hardy::kernels
