#include "ecfr/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ecfr {

namespace {
int g_threads = 0;  // 0 = library default
}

void set_num_threads(int n) { g_threads = n > 0 ? n : 0; }

int num_threads() {
#ifdef _OPENMP
  return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

inline void recover_row(const double* wrow, const double* table, double* orow, int m, int a) {
  for (int j = 0; j < a; ++j) orow[j] = 0.0;
  for (int p = 0; p < m; ++p) {
    const double w = wrow[p];
    if (w == 0.0) continue;
    const double* trow = table + static_cast<std::size_t>(p) * a;
    for (int j = 0; j < a; ++j) orow[j] += w * trow[j];
  }
}

}  // namespace

void recover_rows(const double* weights, const double* table, double* out, int n, int m, int a) {
#pragma omp parallel for schedule(static) num_threads(num_threads())
  for (int q = 0; q < n; ++q)
    recover_row(weights + static_cast<std::size_t>(q) * m, table, out + static_cast<std::size_t>(q) * a, m, a);
}

void recover_rows_serial(const double* weights, const double* table, double* out, int n, int m,
                         int a) {
  for (int q = 0; q < n; ++q)
    recover_row(weights + static_cast<std::size_t>(q) * m, table, out + static_cast<std::size_t>(q) * a, m, a);
}

void project_rows_serial(const double* weights, const double* grads, double* out, int n, int m,
                         int a) {
  for (int q = 0; q < n; ++q) {
    const double* grow = grads + static_cast<std::size_t>(q) * a;
    bool zero = true;
    for (int j = 0; j < a; ++j) zero = zero && grow[j] == 0.0;
    if (zero) continue;
    const double* wrow = weights + static_cast<std::size_t>(q) * m;
    for (int p = 0; p < m; ++p) {
      const double w = wrow[p];
      if (w == 0.0) continue;
      double* orow = out + static_cast<std::size_t>(p) * a;
      for (int j = 0; j < a; ++j) orow[j] += w * grow[j];
    }
  }
}

void project_rows(const double* weights, const double* grads, double* out, int n, int m, int a) {
  // Parallel over the m output rows: each thread owns a row range, walks all
  // n inputs, and no two threads write the same row.
#pragma omp parallel num_threads(num_threads())
  {
#ifdef _OPENMP
    const int tid = omp_get_thread_num();
    const int nt = omp_get_num_threads();
#else
    const int tid = 0, nt = 1;
#endif
    const int lo = static_cast<int>(static_cast<long long>(m) * tid / nt);
    const int hi = static_cast<int>(static_cast<long long>(m) * (tid + 1) / nt);
    if (lo < hi) {
      for (int q = 0; q < n; ++q) {
        const double* grow = grads + static_cast<std::size_t>(q) * a;
        bool zero = true;
        for (int j = 0; j < a; ++j) zero = zero && grow[j] == 0.0;
        if (zero) continue;
        const double* wrow = weights + static_cast<std::size_t>(q) * m;
        for (int p = lo; p < hi; ++p) {
          const double w = wrow[p];
          if (w == 0.0) continue;
          double* orow = out + static_cast<std::size_t>(p) * a;
          for (int j = 0; j < a; ++j) orow[j] += w * grow[j];
        }
      }
    }
  }
}

void parallel_groups(int groups, const std::function<void(int)>& fn) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(num_threads())
  for (int g = 0; g < groups; ++g) fn(g);
}

}  // namespace ecfr
