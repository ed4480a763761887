// Copyright 2026 The gsemit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <random>

#include <fmt/core.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "gsemit/circuit.hpp"
#include "json.hpp"

namespace gsemit {

namespace {

struct Objective {
  const Circuit* circuit;
  const PauliSum* h;
  bool shift_rule;
  std::vector<double> scratch;

  double energy(const gsl_vector* x) {
    scratch.resize(x->size);
    for (std::size_t i = 0; i < x->size; ++i) scratch[i] = gsl_vector_get(x, i);
    return statevector_energy(*circuit, *h, scratch);
  }

  void gradient(const gsl_vector* x, gsl_vector* g) {
    std::vector<double> p(x->size);
    for (std::size_t i = 0; i < x->size; ++i) p[i] = gsl_vector_get(x, i);
    // Shift rule for RZ(t) = diag(1, e^{-it}); otherwise central differences.
    const double shift = shift_rule ? std::numbers::pi / 2 : 1e-6;
    const double scale = shift_rule ? 0.5 : 0.5 / shift;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double saved = p[i];
      p[i] = saved + shift;
      const double plus = statevector_energy(*circuit, *h, p);
      p[i] = saved - shift;
      const double minus = statevector_energy(*circuit, *h, p);
      p[i] = saved;
      gsl_vector_set(g, i, scale * (plus - minus));
    }
  }
};

double f_cb(const gsl_vector* x, void* params) { return static_cast<Objective*>(params)->energy(x); }

void df_cb(const gsl_vector* x, void* params, gsl_vector* g) {
  static_cast<Objective*>(params)->gradient(x, g);
}

void fdf_cb(const gsl_vector* x, void* params, double* f, gsl_vector* g) {
  auto* obj = static_cast<Objective*>(params);
  *f = obj->energy(x);
  obj->gradient(x, g);
}

bool single_use_parameters(const Circuit& c) {
  std::vector<int> uses(c.num_params(), 0);
  for (const auto& g : c.gates()) {
    if (g.param && ++uses[*g.param] > 1) return false;
  }
  return true;
}

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fdfminimizer* m) const { gsl_multimin_fdfminimizer_free(m); }
};

// One BFGS descent from `start`; returns the final point.
std::vector<double> descend(Objective& obj, std::vector<double> start,
                            const OptimizeOptions& options) {
  const std::size_t n = start.size();
  gsl_multimin_function_fdf fn{&f_cb, &df_cb, &fdf_cb, n, &obj};
  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(n));
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x.get(), i, start[i]);
  std::unique_ptr<gsl_multimin_fdfminimizer, MinimizerDeleter> m(
      gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n));
  gsl_multimin_fdfminimizer_set(m.get(), &fn, x.get(), 0.1, 0.1);
  for (int it = 0; it < options.max_iterations; ++it) {
    if (gsl_multimin_fdfminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_gradient(m->gradient, options.gradient_tol) == GSL_SUCCESS) break;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = gsl_vector_get(m->x, i);
  return out;
}

}  // namespace

OptimizeResult optimize(const Circuit& c, const PauliSum& h, std::uint64_t seed,
                        const OptimizeOptions& options) {
  if (h.n_qubits() != c.n_qubits()) {
    throw CircuitError("optimize: observable and circuit sizes differ");
  }
  gsl_set_error_handler_off();

  OptimizeResult best;
  best.exact = exact_ground_energy(h);
  best.energy = std::numeric_limits<double>::infinity();
  const double tolerance = options.target_rel_error * std::abs(best.exact);

  if (c.num_params() == 0) {
    best.energy = statevector_energy(c, h, {});
    best.reached_target = best.energy - best.exact <= tolerance;
  } else {
    Objective obj{&c, &h, single_use_parameters(c), {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    for (int r = 0; r < std::max(1, options.restarts); ++r) {
      std::vector<double> start(c.num_params());
      for (auto& v : start) v = angle(rng);
      std::vector<double> p = descend(obj, std::move(start), options);
      const double e = statevector_energy(c, h, p);
      best.restarts_used = r + 1;
      if (e < best.energy) {
        best.energy = e;
        best.params = std::move(p);
      }
      if (best.energy - best.exact <= tolerance) {
        best.reached_target = true;
        break;
      }
    }
  }
  if (!best.reached_target && options.require_target) {
    throw OptimizeError(fmt::format("optimize: best energy {:.10f} misses exact {:.10f} by more "
                                    "than {:.3g} after {} restarts",
                                    best.energy, best.exact, tolerance, best.restarts_used),
                        best);
  }
  return best;
}

std::string parameters_to_json(const ParameterRecord& r) {
  std::string out = "{\n";
  out += fmt::format("  \"n_qubits\": {},\n", r.n_qubits);
  out += fmt::format("  \"depth\": {},\n", r.depth);
  out += fmt::format("  \"seed\": {},\n", r.seed);
  out += fmt::format("  \"energy\": {:.17g},\n", r.energy);
  out += "  \"parameters\": [";
  for (std::size_t i = 0; i < r.parameters.size(); ++i) {
    out += fmt::format("{}{:.17g}", i == 0 ? "" : ", ", r.parameters[i]);
  }
  out += "]\n}\n";
  return out;
}

void save_parameters(const std::filesystem::path& path, const ParameterRecord& record) {
  std::ofstream out(path);
  if (!out) {
    throw CircuitError(fmt::format("cannot write parameter file '{}'", path.string()));
  }
  out << parameters_to_json(record);
}

ParameterRecord load_parameters(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw CircuitError(fmt::format("cannot open parameter file '{}'", path.string()));
  }
  try {
    const auto j = nlohmann::json::parse(in);
    for (const auto& [key, value] : j.items()) {
      if (key != "n_qubits" && key != "depth" && key != "seed" && key != "energy" &&
          key != "parameters") {
        throw CircuitError(fmt::format("parameter file: unknown key '{}'", key));
      }
    }
    ParameterRecord r;
    r.n_qubits = j.at("n_qubits").get<int>();
    r.depth = j.at("depth").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.energy = j.at("energy").get<double>();
    r.parameters = j.at("parameters").get<std::vector<double>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw CircuitError(fmt::format("parameter file '{}': {}", path.string(), e.what()));
  }
}

}  // namespace gsemit
