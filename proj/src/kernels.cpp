// Copyright 2026 The dualsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dualsim/kernels.hpp"

#include <memory>
#include <numeric>

#include "dualsim/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dualsim::kernels {

namespace {

using Index = Eigen::Index;

// Flat offsets contributed by each multi-index over a subset of subsystems.
std::vector<std::size_t> subset_offsets(std::span<const std::size_t> dims,
                                        std::span<const bool> select) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];

  std::vector<std::size_t> offsets{0};
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (!select[k]) continue;
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * dims[k]);
    for (std::size_t base : offsets) {
      for (std::size_t d = 0; d < dims[k]; ++d) next.push_back(base + d * strides[k]);
    }
    offsets = std::move(next);
  }
  return offsets;
}

void check_partial_trace_args(const Matrix& rho, std::span<const std::size_t> dims,
                              std::span<const bool> keep) {
  if (dims.size() != keep.size()) throw InvalidArgument("partial trace: keep mask size mismatch");
  const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                                            std::multiplies<>());
  if (static_cast<std::size_t>(rho.rows()) != total || rho.rows() != rho.cols()) {
    throw InvalidArgument("partial trace: matrix does not match subsystem dimensions");
  }
}

void check_placement(const Placement& p, const Matrix& local) {
  std::size_t local_dim = 1;
  for (std::size_t t : p.targets) {
    if (t >= p.dims.size()) throw InvalidArgument("embed: target position out of range");
    local_dim *= p.dims[t];
  }
  if (static_cast<std::size_t>(local.rows()) != local_dim || local.rows() != local.cols()) {
    throw InvalidArgument("embed: local operator has wrong dimension");
  }
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Matrix kron(const Matrix& a, const Matrix& b) {
  const Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  Matrix out(ar * br, ac * bc);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < ac; ++j) {
    for (Index i = 0; i < ar; ++i) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  const Index n = a.size(), m = b.size();
  Vector out(n * m);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) out.segment(i * m, m) = a[i] * b;
  return out;
}

Matrix partial_trace(const Matrix& rho, std::span<const std::size_t> dims,
                     std::span<const bool> keep) {
  check_partial_trace_args(rho, dims, keep);
  // std::vector<bool> has no contiguous storage to view through a span.
  std::unique_ptr<bool[]> traced(new bool[keep.size()]);
  for (std::size_t k = 0; k < keep.size(); ++k) traced[k] = !keep[k];

  const auto kept_off = subset_offsets(dims, keep);
  const auto traced_off = subset_offsets(dims, std::span<const bool>(traced.get(), keep.size()));
  const auto n = static_cast<Index>(kept_off.size());

  Matrix out(n, n);
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) {
      Complex acc{0.0, 0.0};
      for (std::size_t t : traced_off) {
        acc += rho(static_cast<Index>(kept_off[r] + t), static_cast<Index>(kept_off[c] + t));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

Matrix conjugate(const Matrix& u, const Matrix& rho) {
  const Index n = u.rows();
  // W = ρ u†, column by column, then out = u W.
  Matrix w(n, n);
  Matrix out(n, n);
  const Matrix u_adj = u.adjoint();
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) w.col(j).noalias() = rho * u_adj.col(j);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) out.col(j).noalias() = u * w.col(j);
  return out;
}

Matrix conjugate_diagonal(const Eigen::VectorXd& energies, double t, const Matrix& rho) {
  const Index n = rho.rows();
  Vector phase(n);
  for (Index k = 0; k < n; ++k) phase[k] = std::polar(1.0, -energies[k] * t);
  Matrix out(n, n);
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < n; ++c) {
    const Complex right = std::conj(phase[c]);
    for (Index r = 0; r < n; ++r) out(r, c) = phase[r] * rho(r, c) * right;
  }
  return out;
}

Vector apply_diagonal(const Eigen::VectorXd& energies, double t, const Vector& psi) {
  const Index n = psi.size();
  Vector out(n);
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < n; ++k) out[k] = std::polar(1.0, -energies[k] * t) * psi[k];
  return out;
}

Matrix embed(const Placement& p, const Matrix& local) {
  check_placement(p, local);
  std::vector<bool> is_target(p.dims.size(), false);
  for (std::size_t t : p.targets) is_target[t] = true;
  std::unique_ptr<bool[]> rest(new bool[p.dims.size()]);
  for (std::size_t k = 0; k < p.dims.size(); ++k) rest[k] = !is_target[k];

  // Offsets of the local basis (in the order of p.targets) and of the rest.
  std::vector<std::size_t> strides(p.dims.size(), 1);
  for (std::size_t k = p.dims.size(); k-- > 1;) strides[k - 1] = strides[k] * p.dims[k];
  std::vector<std::size_t> local_off{0};
  for (std::size_t t : p.targets) {
    std::vector<std::size_t> next;
    for (std::size_t base : local_off) {
      for (std::size_t d = 0; d < p.dims[t]; ++d) next.push_back(base + d * strides[t]);
    }
    local_off = std::move(next);
  }
  const auto rest_off =
      subset_offsets(p.dims, std::span<const bool>(rest.get(), p.dims.size()));

  const std::size_t total = std::accumulate(p.dims.begin(), p.dims.end(), std::size_t{1},
                                            std::multiplies<>());
  Matrix out = Matrix::Zero(static_cast<Index>(total), static_cast<Index>(total));
  const auto ln = static_cast<Index>(local_off.size());
  const auto rn = static_cast<Index>(rest_off.size());
#pragma omp parallel for schedule(static)
  for (Index e = 0; e < rn; ++e) {
    for (Index c = 0; c < ln; ++c) {
      for (Index r = 0; r < ln; ++r) {
        const Complex v = local(r, c);
        if (v == Complex{}) continue;
        out(static_cast<Index>(rest_off[e] + local_off[r]),
            static_cast<Index>(rest_off[e] + local_off[c])) = v;
      }
    }
  }
  return out;
}

namespace reference {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < out.rows(); ++i) {
    for (Index j = 0; j < out.cols(); ++j) {
      out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < out.size(); ++i) out[i] = a[i / b.size()] * b[i % b.size()];
  return out;
}

Matrix partial_trace(const Matrix& rho, std::span<const std::size_t> dims,
                     std::span<const bool> keep) {
  check_partial_trace_args(rho, dims, keep);
  const std::size_t m = dims.size();
  std::vector<std::size_t> strides(m, 1);
  for (std::size_t k = m; k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  std::size_t kept_dim = 1;
  for (std::size_t k = 0; k < m; ++k) {
    if (keep[k]) kept_dim *= dims[k];
  }

  // Decode every flat index into (kept index, traced digits) and accumulate
  // matrix elements whose traced digits agree.
  const auto n = static_cast<std::size_t>(rho.rows());
  std::vector<std::size_t> kept_of(n), traced_of(n);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t kept = 0, traced = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t d = (flat / strides[k]) % dims[k];
      if (keep[k]) {
        kept = kept * dims[k] + d;
      } else {
        traced = traced * dims[k] + d;
      }
    }
    kept_of[flat] = kept;
    traced_of[flat] = traced;
  }
  Matrix out = Matrix::Zero(static_cast<Index>(kept_dim), static_cast<Index>(kept_dim));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (traced_of[i] != traced_of[j]) continue;
      out(static_cast<Index>(kept_of[i]), static_cast<Index>(kept_of[j])) +=
          rho(static_cast<Index>(i), static_cast<Index>(j));
    }
  }
  return out;
}

Matrix conjugate(const Matrix& u, const Matrix& rho) { return u * rho * u.adjoint(); }

Matrix conjugate_diagonal(const Eigen::VectorXd& energies, double t, const Matrix& rho) {
  Matrix out(rho.rows(), rho.cols());
  for (Index r = 0; r < rho.rows(); ++r) {
    for (Index c = 0; c < rho.cols(); ++c) {
      out(r, c) = std::exp(Complex(0.0, -(energies[r] - energies[c]) * t)) * rho(r, c);
    }
  }
  return out;
}

Vector apply_diagonal(const Eigen::VectorXd& energies, double t, const Vector& psi) {
  Vector out(psi.size());
  for (Index k = 0; k < psi.size(); ++k) out[k] = std::exp(Complex(0.0, -energies[k] * t)) * psi[k];
  return out;
}

Matrix embed(const Placement& p, const Matrix& local) {
  check_placement(p, local);
  // Build I ⊗ ... ⊗ local-in-place by direct index comparison.
  const std::size_t m = p.dims.size();
  std::vector<std::size_t> strides(m, 1);
  for (std::size_t k = m; k-- > 1;) strides[k - 1] = strides[k] * p.dims[k];
  std::vector<bool> is_target(m, false);
  for (std::size_t t : p.targets) is_target[t] = true;
  const std::size_t total = strides[0] * p.dims[0];

  auto local_index = [&](std::size_t flat) {
    std::size_t idx = 0;
    for (std::size_t t : p.targets) idx = idx * p.dims[t] + (flat / strides[t]) % p.dims[t];
    return idx;
  };
  Matrix out = Matrix::Zero(static_cast<Index>(total), static_cast<Index>(total));
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t c = 0; c < total; ++c) {
      bool rest_equal = true;
      for (std::size_t k = 0; k < m && rest_equal; ++k) {
        if (!is_target[k]) {
          rest_equal = (r / strides[k]) % p.dims[k] == (c / strides[k]) % p.dims[k];
        }
      }
      if (rest_equal) {
        out(static_cast<Index>(r), static_cast<Index>(c)) =
            local(static_cast<Index>(local_index(r)), static_cast<Index>(local_index(c)));
      }
    }
  }
  return out;
}

}  // namespace reference

}  // namespace dualsim::kernels
