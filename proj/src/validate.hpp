#pragma once

#include <cmath>
#include <string>

#include "grs/errors.hpp"
#include "grs/types.hpp"

namespace grs::detail {

inline void require_finite(const Vector& v, const std::string& name) {
  if (!v.allFinite()) throw InvalidArgument(name + ": non-finite entry");
}

inline void require_finite(const Matrix& m, const std::string& name) {
  if (!m.allFinite()) throw InvalidArgument(name + ": non-finite entry");
}

inline void require_square(const Matrix& m, const std::string& name) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidArgument(name + ": expected a non-empty square matrix, got " +
                          std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()));
  }
}

inline void require_nonnegative(double x, const std::string& name) {
  if (!std::isfinite(x) || x < 0.0) {
    throw InvalidArgument(name + " must be finite and >= 0, got " +
                          std::to_string(x));
  }
}

inline void require_dim(const Vector& v, Eigen::Index n,
                        const std::string& name) {
  if (v.size() != n) {
    throw InvalidArgument(name + ": expected dimension " + std::to_string(n) +
                          ", got " + std::to_string(v.size()));
  }
}

}  // namespace grs::detail
