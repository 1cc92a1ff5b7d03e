#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <exception>
#include <mutex>
#include <vector>

#include "flatscan/symexpr/ratfunc.hpp"
#include "flatscan/symexpr/sample.hpp"

namespace flatscan::kernels {

// Serial is the reference implementation; Parallel uses OpenMP and must
// produce identical results.
enum class Policy { Serial, Parallel };

struct QMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<mpq_class> data;

  QMatrix() = default;
  QMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  mpq_class& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const mpq_class& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  bool operator==(const QMatrix&) const = default;
};

using SymRow = std::vector<symexpr::RatFunc>;

// Runs f(i) for i in [0, n). Under Parallel the iterations are spread over
// OpenMP threads; the first exception thrown is rethrown on the caller.
template <class F>
void for_each_index(std::size_t n, Policy policy, F&& f) {
  if (policy == Policy::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr error;
  std::mutex m;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(m);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

// Evaluates the symbolic rows at every point; result[p] is rows x cols.
std::vector<QMatrix> evaluate(const std::vector<SymRow>& rows, std::size_t cols,
                              const std::vector<symexpr::SamplePoint>& points, Policy policy);

// Rank by Gaussian elimination over Q.
std::size_t rank(QMatrix m, Policy policy);

// Greedy selection of rows that are independent at a generic point: row j is
// kept when, at some point where the rows kept so far are independent, it
// raises the rank. All matrices must have the same shape.
std::vector<std::size_t> independent_rows(const std::vector<QMatrix>& evaluated, Policy policy);

}  // namespace flatscan::kernels
