#pragma once

// Data-parallel kernels. Every OpenMP kernel has a serial twin with the same
// arithmetic order per output entry, so results agree bit for bit; the serial
// versions are the test oracles and the benchmark baselines.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <vector>

#include <omp.h>

namespace avgbin::kernels {

struct Csr {
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  std::size_t nnz() const { return val.size(); }
};

// out = in + (diag .* in + A in) / lambda, i.e. one step of P = I + Q / lambda
// where Q = A + diag(diag).
inline void uniformized_step_serial(const Csr& a, std::span<const double> diag, double lambda,
                                    std::span<const double> in, std::span<double> out) {
  const double inv = 1.0 / lambda;
  for (std::size_t i = 0; i < a.rows; ++i) {
    double acc = diag[i] * in[i];
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) acc += a.val[p] * in[a.col[p]];
    out[i] = in[i] + acc * inv;
  }
}

inline void uniformized_step(const Csr& a, std::span<const double> diag, double lambda, std::span<const double> in,
                             std::span<double> out) {
  const double inv = 1.0 / lambda;
  const auto rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static) if (a.nnz() > 50000)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    double acc = diag[i] * in[i];
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) acc += a.val[p] * in[a.col[p]];
    out[i] = in[i] + acc * inv;
  }
}

// out = diag .* in + A in
inline void generator_apply_serial(const Csr& a, std::span<const double> diag, std::span<const double> in,
                                   std::span<double> out) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    double acc = diag[i] * in[i];
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) acc += a.val[p] * in[a.col[p]];
    out[i] = acc;
  }
}

inline void generator_apply(const Csr& a, std::span<const double> diag, std::span<const double> in,
                            std::span<double> out) {
  const auto rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static) if (a.nnz() > 50000)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    double acc = diag[i] * in[i];
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) acc += a.val[p] * in[a.col[p]];
    out[i] = acc;
  }
}

// y += w * x
inline void axpy_serial(double w, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += w * x[i];
}

inline void axpy(double w, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (n > 200000)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += w * x[i];
}

// Runs body(r) for r in [0, count). Bodies must write only to slot r of
// their outputs; callers reduce serially in replica order afterwards. The
// first exception thrown by any body is rethrown on the calling thread.
template <class Body>
void for_each_replica(std::size_t count, int threads, Body&& body) {
  const auto total = static_cast<std::ptrdiff_t>(count);
  const int width = threads > 0 ? threads : omp_get_max_threads();
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16) num_threads(width)
  for (std::ptrdiff_t r = 0; r < total; ++r) {
    try {
      body(static_cast<std::size_t>(r));
    } catch (...) {
#pragma omp critical(avgbin_replica_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

template <class Body>
void for_each_replica_serial(std::size_t count, Body&& body) {
  for (std::size_t r = 0; r < count; ++r) body(r);
}

}  // namespace avgbin::kernels
