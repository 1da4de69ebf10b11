#include "hardy/kernels.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include "hardy/errors.hpp"

#ifdef HARDY_HAVE_OPENMP
#include <omp.h>
#endif

namespace hardy::kernels {

namespace {

constexpr std::size_t kNoFailure = std::numeric_limits<std::size_t>::max();

[[noreturn]] void throw_bad_node(const CubatureRule& rule, std::size_t index) {
  std::array<double, kMaxDim> x{};
  rule.node(index, std::span<double>(x.data(), rule.dim()));
  std::ostringstream os;
  os << "non-finite integrand at node " << index << " (x = ";
  for (std::size_t d = 0; d < rule.dim(); ++d) os << (d ? ", " : "") << x[d];
  os << ")";
  throw IntegrationError(os.str());
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
}

// Combines per-block partial sums (block-major, `width` slots each) pairwise.
std::vector<double> combine_blocks(const std::vector<double>& partial, std::size_t blocks, std::size_t width) {
  std::vector<double> out(width), column(blocks);
  for (std::size_t k = 0; k < width; ++k) {
    for (std::size_t b = 0; b < blocks; ++b) column[b] = partial[b * width + k];
    out[k] = pairwise_sum(column);
  }
  return out;
}

void update_failure(std::atomic<std::size_t>& failure, std::size_t index) {
  std::size_t cur = failure.load();
  while (index < cur && !failure.compare_exchange_weak(cur, index)) {
  }
}

std::vector<double> integrate_nodes_parallel(const CubatureRule& rule, std::size_t width, const NodeFn& fn) {
  const std::size_t n = rule.size();
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<double> partial(blocks * width, 0.0);
  std::atomic<std::size_t> failure{kNoFailure};
  const auto nb = static_cast<std::ptrdiff_t>(blocks);

#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    std::array<double, kMaxDim> x{};
    std::vector<double> val(width);
    double* acc = partial.data() + static_cast<std::size_t>(b) * width;
    const std::size_t begin = static_cast<std::size_t>(b) * kBlockSize;
    const std::size_t end = std::min(n, begin + kBlockSize);
    for (std::size_t i = begin; i < end; ++i) {
      const double w = rule.node(i, std::span<double>(x.data(), rule.dim()));
      if (w == 0.0) continue;
      fn(std::span<const double>(x.data(), rule.dim()), val);
      if (!all_finite(val)) {
        update_failure(failure, i);
        break;
      }
      for (std::size_t k = 0; k < width; ++k) acc[k] += w * val[k];
    }
  }
  if (failure.load() != kNoFailure) throw_bad_node(rule, failure.load());
  return combine_blocks(partial, blocks, width);
}

std::vector<double> integrate_nodes_serial(const CubatureRule& rule, std::size_t width, const NodeFn& fn) {
  const std::size_t n = rule.size();
  std::vector<std::vector<double>> terms(width, std::vector<double>(n, 0.0));
  std::array<double, kMaxDim> x{};
  std::vector<double> val(width);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = rule.node(i, std::span<double>(x.data(), rule.dim()));
    if (w == 0.0) continue;
    fn(std::span<const double>(x.data(), rule.dim()), val);
    if (!all_finite(val)) throw_bad_node(rule, i);
    for (std::size_t k = 0; k < width; ++k) terms[k][i] = w * val[k];
  }
  std::vector<double> out(width);
  for (std::size_t k = 0; k < width; ++k) out[k] = pairwise_sum(terms[k]);
  return out;
}

}  // namespace

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double a : v) s += a;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

int max_threads() {
#ifdef HARDY_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<double> integrate_nodes(const CubatureRule& rule, std::size_t width, const NodeFn& fn, Exec exec) {
  return exec == Exec::Parallel ? integrate_nodes_parallel(rule, width, fn) : integrate_nodes_serial(rule, width, fn);
}

NodeTable tabulate(const CubatureRule& rule, std::size_t width, const NodeFn& fn, Exec exec) {
  // Kept nodes are compacted in index order, so both paths produce the same table.
  std::vector<std::size_t> kept;
  std::vector<double> weights;
  {
    std::array<double, kMaxDim> x{};
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double w = rule.node(i, std::span<double>(x.data(), rule.dim()));
      if (w != 0.0) {
        kept.push_back(i);
        weights.push_back(w);
      }
    }
  }
  NodeTable table;
  table.width = width;
  table.weight = std::move(weights);
  table.index = kept;
  table.rows.assign(kept.size() * width, 0.0);
  const auto m = static_cast<std::ptrdiff_t>(kept.size());
  std::atomic<std::size_t> failure{kNoFailure};

  auto body = [&](std::ptrdiff_t j) {
    std::array<double, kMaxDim> x{};
    rule.node(kept[static_cast<std::size_t>(j)], std::span<double>(x.data(), rule.dim()));
    std::span<double> out(table.rows.data() + static_cast<std::size_t>(j) * width, width);
    fn(std::span<const double>(x.data(), rule.dim()), out);
    if (!all_finite(out)) update_failure(failure, kept[static_cast<std::size_t>(j)]);
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 256)
    for (std::ptrdiff_t j = 0; j < m; ++j) body(j);
  } else {
    for (std::ptrdiff_t j = 0; j < m; ++j) body(j);
  }
  if (failure.load() != kNoFailure) throw_bad_node(rule, failure.load());
  return table;
}

std::vector<double> reduce(const NodeTable& table, std::size_t width, const RowFn& fn, Exec exec) {
  const std::size_t n = table.size();
  if (exec == Exec::Serial) {
    std::vector<std::vector<double>> terms(width, std::vector<double>(n));
    std::vector<double> val(width);
    for (std::size_t i = 0; i < n; ++i) {
      fn(table.row(i), val);
      for (std::size_t k = 0; k < width; ++k) terms[k][i] = table.weight[i] * val[k];
    }
    std::vector<double> out(width);
    for (std::size_t k = 0; k < width; ++k) out[k] = pairwise_sum(terms[k]);
    return out;
  }
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<double> partial(blocks * width, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    std::vector<double> val(width);
    double* acc = partial.data() + static_cast<std::size_t>(b) * width;
    const std::size_t begin = static_cast<std::size_t>(b) * kBlockSize;
    const std::size_t end = std::min(n, begin + kBlockSize);
    for (std::size_t i = begin; i < end; ++i) {
      fn(table.row(i), val);
      for (std::size_t k = 0; k < width; ++k) acc[k] += table.weight[i] * val[k];
    }
  }
  return combine_blocks(partial, blocks, width);
}

}  // namespace hardy::kernels
