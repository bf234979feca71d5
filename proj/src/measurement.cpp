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

#include "dualsim/measurement.hpp"

#include <cmath>
#include <set>

#include "dualsim/errors.hpp"
#include "dualsim/kernels.hpp"

namespace dualsim {

namespace {

using Index = Eigen::Index;

Vector plus_state() {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return v;
}

}  // namespace

std::string environment_label(std::size_t k) { return "E" + std::to_string(k + 1); }

MeasurementModel MeasurementModel::calibrated(std::size_t s_dim, std::size_t o_dim,
                                              double duration) {
  MeasurementModel m{s_dim, o_dim, std::numbers::pi / (2.0 * duration), duration};
  m.validate();
  return m;
}

void MeasurementModel::validate() const {
  if (s_dim < 2) throw InvalidArgument("measurement model: s_dim must be at least 2");
  if (o_dim < s_dim + 1) {
    throw InvalidArgument("measurement model: o_dim must be at least s_dim + 1 (got s_dim=" +
                          std::to_string(s_dim) + ", o_dim=" + std::to_string(o_dim) + ")");
  }
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw InvalidArgument("measurement model: duration must be positive");
  }
  if (!std::isfinite(coupling)) throw InvalidArgument("measurement model: coupling not finite");
}

std::vector<double> default_pointer_values(std::size_t o_dim) {
  std::vector<double> q(o_dim, 0.0);
  for (std::size_t i = 1; i < o_dim; ++i) {
    const double magnitude = static_cast<double>((i + 1) / 2);
    q[i] = (i % 2 == 1) ? magnitude : -magnitude;
  }
  return q;
}

void EnvironmentModel::validate(std::size_t s_dim, std::size_t o_dim) const {
  if (pointer_values.size() != o_dim) {
    throw InvalidArgument("environment: expected " + std::to_string(o_dim) +
                          " pointer values, got " + std::to_string(pointer_values.size()));
  }
  if (pointer_values[0] != 0.0) {
    throw InvalidArgument("environment: pointer value of the ready state O_0 must be 0");
  }
  std::set<double> seen;
  for (std::size_t b = 1; b <= s_dim && b < o_dim; ++b) {
    if (!seen.insert(pointer_values[b]).second) {
      throw InvalidArgument("environment: pointer values must be distinct on O_1..O_" +
                            std::to_string(s_dim));
    }
  }
  for (double g : couplings) {
    if (!std::isfinite(g)) throw InvalidArgument("environment: non-finite coupling");
  }
}

CompositeLayout measurement_layout(const MeasurementModel& model) {
  return CompositeLayout({{std::string(kSystem), model.s_dim}, {std::string(kObserver), model.o_dim}});
}

CompositeLayout decoherence_layout(const MeasurementModel& model, std::size_t n_atoms) {
  std::vector<Subsystem> parts{{std::string(kSystem), model.s_dim},
                               {std::string(kObserver), model.o_dim}};
  for (std::size_t k = 0; k < n_atoms; ++k) parts.push_back({environment_label(k), 2});
  return CompositeLayout(std::move(parts));
}

StateVector system_state(const Vector& amplitudes) {
  return StateVector(
      CompositeLayout({{std::string(kSystem), static_cast<std::size_t>(amplitudes.size())}}),
      amplitudes);
}

StateVector ready_state(const StateVector& psi_s, const MeasurementModel& model) {
  model.validate();
  if (psi_s.layout() != CompositeLayout({{std::string(kSystem), model.s_dim}})) {
    throw LayoutMismatch("premeasurement input must live on [S:" + std::to_string(model.s_dim) +
                         "], got " + psi_s.layout().describe());
  }
  const auto o0 =
      StateVector::basis(CompositeLayout({{std::string(kObserver), model.o_dim}}), {0});
  return tensor_compose(psi_s, o0);
}

StateVector environment_ready_state(std::size_t n_atoms) {
  if (n_atoms == 0) throw InvalidArgument("environment_ready_state: no atoms");
  std::vector<StateVector> atoms;
  atoms.reserve(n_atoms);
  for (std::size_t k = 0; k < n_atoms; ++k) {
    atoms.emplace_back(CompositeLayout({{environment_label(k), 2}}), plus_state());
  }
  return tensor_compose(std::span<const StateVector>(atoms));
}

LinearOperator build_meas_hamiltonian(const MeasurementModel& model,
                                      const CompositeLayout& layout,
                                      std::string_view system_label,
                                      std::string_view observer_label) {
  model.validate();
  if (!layout.contains(system_label) || !layout.contains(observer_label)) {
    throw InvalidArgument("build_meas_hamiltonian: layout " + layout.describe() +
                          " lacks subsystem '" + std::string(system_label) + "' or '" +
                          std::string(observer_label) + "'");
  }
  if (layout.dim_of(system_label) != model.s_dim || layout.dim_of(observer_label) != model.o_dim) {
    throw LayoutMismatch("build_meas_hamiltonian: subsystem dimensions differ from the model");
  }
  const auto s = static_cast<Index>(model.s_dim);
  const auto o = static_cast<Index>(model.o_dim);
  // Local operator on (S, O), index = s_digit * o_dim + o_digit.
  Matrix local = Matrix::Zero(s * o, s * o);
  for (std::size_t b = 1; b <= model.s_dim; ++b) {
    const auto row = static_cast<Index>(system_index(b)) * o;
    const auto ob = static_cast<Index>(pointer_index(b));
    local(row + ob, row + 0) = model.coupling;
    local(row + 0, row + ob) = model.coupling;
  }
  return embed(layout, {std::string(system_label), std::string(observer_label)}, local);
}

Premeasurement run_premeasurement(const StateVector& psi_s, const MeasurementModel& model) {
  const StateVector initial = ready_state(psi_s, model);
  const LinearOperator h = build_meas_hamiltonian(model, initial.layout());
  const Propagator prop(h);

  Premeasurement out{prop.apply(initial, model.duration), {}};
  const auto& layout = initial.layout();
  for (std::size_t b = 1; b <= model.s_dim; ++b) {
    const StateVector from = StateVector::basis(layout, {system_index(b), 0});
    const StateVector to = StateVector::basis(layout, {system_index(b), pointer_index(b)});
    out.branch_phases.push_back(to.inner(prop.apply(from, model.duration)));
  }
  return out;
}

DensityMatrix pointer_mixture(const StateVector& psi_s, const MeasurementModel& model) {
  model.validate();
  const auto layout = measurement_layout(model);
  std::vector<double> weights;
  std::vector<DensityMatrix> branches;
  for (std::size_t b = 1; b <= model.s_dim; ++b) {
    weights.push_back(std::norm(psi_s[system_index(b)]));
    branches.push_back(individual_event_state(model, b));
  }
  // Rounding in |a_b|² must not trip the mixture's weight-sum check.
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return DensityMatrix::mixture(weights, branches);
}

DensityMatrix individual_event_state(const MeasurementModel& model, std::size_t branch) {
  model.validate();
  if (branch < 1 || branch > model.s_dim) {
    throw InvalidArgument("individual_event_state: branch " + std::to_string(branch) +
                          " out of range 1.." + std::to_string(model.s_dim));
  }
  return DensityMatrix::from_pure(StateVector::basis(
      measurement_layout(model), {system_index(branch), pointer_index(branch)}));
}

LinearOperator build_dephasing_hamiltonian(const EnvironmentModel& env,
                                           const CompositeLayout& layout,
                                           std::string_view observer_label) {
  const std::size_t o_pos = layout.position(observer_label);
  if (env.pointer_values.size() != layout.subsystems()[o_pos].dim) {
    throw InvalidArgument("build_dephasing_hamiltonian: pointer values do not cover the O basis");
  }
  std::vector<std::size_t> atom_pos;
  for (std::size_t k = 0; k < env.n_atoms(); ++k) {
    const auto label = environment_label(k);
    if (!layout.contains(label) || layout.dim_of(label) != 2) {
      throw InvalidArgument("build_dephasing_hamiltonian: layout " + layout.describe() +
                            " is missing two-level environment atom '" + label + "'");
    }
    atom_pos.push_back(layout.position(label));
  }
  // H_OE is diagonal in the product basis: entry = Σ_k g_k q(o) z_k with
  // z_k = +1 for |0⟩ and −1 for |1⟩ of atom k.
  const auto n = static_cast<Index>(layout.total_dim());
  Matrix h = Matrix::Zero(n, n);
  for (std::size_t flat = 0; flat < layout.total_dim(); ++flat) {
    const double q = env.pointer_values[layout.digit(flat, o_pos)];
    double e = 0.0;
    for (std::size_t k = 0; k < atom_pos.size(); ++k) {
      const double z = layout.digit(flat, atom_pos[k]) == 0 ? 1.0 : -1.0;
      e += env.couplings[k] * q * z;
    }
    h(static_cast<Index>(flat), static_cast<Index>(flat)) = e;
  }
  return LinearOperator(layout, std::move(h));
}

Decoherence run_decoherence(const StateVector& state, const EnvironmentModel& env, double t) {
  const auto& layout = state.layout();
  if (!layout.contains(kSystem) || !layout.contains(kObserver)) {
    throw InvalidArgument("run_decoherence: state lacks S or O");
  }
  const std::size_t s_dim = layout.dim_of(kSystem);
  const std::size_t o_dim = layout.dim_of(kObserver);
  const MeasurementModel shape{s_dim, o_dim, 0.0, 1.0};
  if (layout != decoherence_layout(shape, env.n_atoms())) {
    throw LayoutMismatch("run_decoherence: expected layout " +
                         decoherence_layout(shape, env.n_atoms()).describe() + ", got " +
                         layout.describe());
  }
  env.validate(s_dim, o_dim);

  const std::size_t env_dim = layout.total_dim() / (s_dim * o_dim);
  const Vector plus = env.n_atoms() ? environment_ready_state(env.n_atoms()).amplitudes()
                                    : Vector::Ones(1);

  // Precondition: the environment factor is |+⟩^{⊗n}.
  double overlap = 0.0;
  for (std::size_t so = 0; so < s_dim * o_dim; ++so) {
    const Complex c = plus.dot(state.amplitudes().segment(static_cast<Index>(so * env_dim),
                                                          static_cast<Index>(env_dim)));
    overlap += std::norm(c);
  }
  if (std::abs(overlap - 1.0) > kTol.ready_state) {
    throw PreconditionFailed("run_decoherence: environment atoms are not in |+⟩ (weight " +
                             std::to_string(overlap) + ")");
  }

  const Propagator prop(build_dephasing_hamiltonian(env, layout));
  Decoherence out{prop.apply(state, t), Complex{}, Matrix::Zero(static_cast<Index>(s_dim),
                                                                 static_cast<Index>(s_dim))};

  // Environment state conditioned on branch b: the evolved block divided by
  // the branch's input coefficient c_b (H_OE leaves S and the pointer label
  // alone). A branch with no weight is read from an evolved reference
  // |s_b O_b⟩|+...+⟩ instead.
  auto branch_env = [&](std::size_t b) -> Vector {
    const std::size_t block = system_index(b) * o_dim + pointer_index(b);
    const auto offset = static_cast<Index>(block * env_dim);
    const auto len = static_cast<Index>(env_dim);
    const Complex c_b = plus.dot(state.amplitudes().segment(offset, len));
    if (std::abs(c_b) > 1e-8) return out.state.amplitudes().segment(offset, len) / c_b;
    Vector ref = Vector::Zero(static_cast<Index>(layout.total_dim()));
    ref.segment(static_cast<Index>(block * env_dim), static_cast<Index>(env_dim)) = plus;
    const StateVector evolved = prop.apply(StateVector(layout, ref), t);
    return evolved.amplitudes().segment(static_cast<Index>(block * env_dim),
                                        static_cast<Index>(env_dim));
  };
  std::vector<Vector> envs;
  for (std::size_t b = 1; b <= s_dim; ++b) envs.push_back(branch_env(b));
  for (std::size_t a = 0; a < s_dim; ++a) {
    for (std::size_t b = 0; b < s_dim; ++b) {
      out.branch_overlaps(static_cast<Index>(a), static_cast<Index>(b)) = envs[a].dot(envs[b]);
    }
  }
  out.offdiag_factor = out.branch_overlaps(0, 1);
  return out;
}

double dephasing_factor(const EnvironmentModel& env, double t, std::size_t branch_a,
                        std::size_t branch_b) {
  const double dq =
      env.pointer_values.at(pointer_index(branch_a)) - env.pointer_values.at(pointer_index(branch_b));
  double f = 1.0;
  for (double g : env.couplings) f *= std::cos(dq * g * t);
  return f;
}

StateVector reverse_evolution(const StateVector& state, const LinearOperator& h, double t) {
  return evolve_unitary(state, h, -t);
}

DensityMatrix reverse_evolution(const DensityMatrix& state, const LinearOperator& h, double t) {
  return evolve_unitary(state, h, -t);
}

LinearOperator system_observable(const CompositeLayout& layout, const std::vector<double>& q) {
  return diagonal_observable(layout, kSystem, q);
}

}  // namespace dualsim
