#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sehgnn {

using Index = std::int64_t;

// Row-major throughout: semantic matrices are stored and persisted row-major,
// and the fused (batch*K) x D stack reinterprets as batch x (K*D) for free.
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;

/// Raised for malformed inputs: bad files, schema violations, shape or
/// metapath mismatches. The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sets the worker count for the sparse kernels. Results do not depend on it.
void set_num_threads(int threads);
int num_threads();

/// Keeps freed blocks in the heap instead of returning them to the OS, so
/// repeated large temporaries stop costing page faults. Process-wide; a no-op
/// outside glibc.
void retain_freed_memory();

}  // namespace sehgnn
