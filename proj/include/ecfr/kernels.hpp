#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ecfr {

// Global worker count for the OpenMP kernels below. 1 = serial. All parallel
// paths in this project write disjoint outputs or merge fixed chunks in a
// fixed order, so results are identical for every worker count.
void set_num_threads(int n);
int num_threads();

// out[n x a] = weights[n x m] * table[m x a]. Row-major throughout.
// Maps per-row mixing weights over m table rows onto n outputs.
void recover_rows(const double* weights, const double* table, double* out, int n, int m, int a);

// out[m x a] += weights[n x m]^T * grads[n x a]: scatters n per-row values
// back onto m table rows. `out` is accumulated into.
void project_rows(const double* weights, const double* grads, double* out, int n, int m, int a);

// Serial references for the kernels above, kept for equivalence tests and
// the benchmark target.
void recover_rows_serial(const double* weights, const double* table, double* out, int n, int m,
                         int a);
void project_rows_serial(const double* weights, const double* grads, double* out, int n, int m,
                         int a);

// Runs fn(g) for g in [0, groups) across workers. Each group must write to
// memory no other group touches; then any schedule yields the same result.
void parallel_groups(int groups, const std::function<void(int)>& fn);

}  // namespace ecfr
