// Copyright 2026 The hgf Authors
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

#include "hgf/hgf.h"

#include <cmath>
#include <memory>
#include <string>

#include "hgf/coeff_space.hpp"
#include "hgf/commands.hpp"
#include "hgf/error.hpp"
#include "hgf/gen_func.hpp"
#include "hgf/ladder.hpp"

struct hgf_basis {
  hgf::BasisSpec spec;
  std::shared_ptr<const hgf::QuadRule> rule;
};

struct hgf_coeffs {
  hgf::CoeffTensor a;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_message;

hgf_status code_of(hgf::ErrorCode c) {
  switch (c) {
    case hgf::ErrorCode::invalid_input: return HGF_ERR_INVALID_INPUT;
    case hgf::ErrorCode::quadrature_insufficient: return HGF_ERR_QUADRATURE;
    case hgf::ErrorCode::simulation_diverged: return HGF_ERR_DIVERGED;
    case hgf::ErrorCode::io_error: return HGF_ERR_IO;
    case hgf::ErrorCode::config_error: return HGF_ERR_CONFIG;
  }
  return HGF_ERR_INTERNAL;
}

template <class F>
hgf_status guarded(F&& f) {
  try {
    f();
    g_error.clear();
    return HGF_OK;
  } catch (const hgf::Error& e) {
    g_error = e.what();
    return code_of(e.code());
  } catch (const std::exception& e) {
    g_error = e.what();
    return HGF_ERR_INTERNAL;
  } catch (...) {
    g_error = "unknown error";
    return HGF_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw hgf::InvalidInput(std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* hgf_version(void) { return "1.0.0"; }
const char* hgf_last_error(void) { return g_error.c_str(); }
const char* hgf_last_message(void) { return g_message.c_str(); }

hgf_status hgf_basis_create(int dim, int level, hgf_basis** out) {
  return guarded([&] {
    need(out, "out");
    if (dim < 1 || level < 0) throw hgf::InvalidInput("need dim >= 1 and level >= 0");
    const auto spec = hgf::BasisSpec::make(dim, level);
    *out = new hgf_basis{spec, hgf::build_quadrature(spec)};
  });
}

hgf_status hgf_basis_create_custom(int dim, int level, int nodes, double halfwidth, hgf_basis** out) {
  return guarded([&] {
    need(out, "out");
    if (dim < 1 || level < 0) throw hgf::InvalidInput("need dim >= 1 and level >= 0");
    auto spec = hgf::BasisSpec::make(dim, level);
    spec.nodes = nodes;
    spec.halfwidth = halfwidth;
    spec.validate();
    *out = new hgf_basis{spec, hgf::build_quadrature(spec)};
  });
}

void hgf_basis_destroy(hgf_basis* b) { delete b; }

hgf_status hgf_basis_info(const hgf_basis* b, int* dim, int* level, int* nodes, double* halfwidth) {
  return guarded([&] {
    need(b, "basis");
    if (dim) *dim = b->spec.dim;
    if (level) *level = b->spec.level;
    if (nodes) *nodes = b->spec.nodes;
    if (halfwidth) *halfwidth = b->spec.halfwidth;
  });
}

hgf_status hgf_basis_gram_defect(const hgf_basis* b, double* out) {
  return guarded([&] {
    need(b, "basis");
    need(out, "out");
    *out = b->rule->gram_defect;
  });
}

hgf_status hgf_coeffs_analyze(const hgf_basis* b, hgf_function f, void* user, hgf_coeffs** out) {
  return guarded([&] {
    need(b, "basis");
    need(reinterpret_cast<const void*>(f), "function");
    need(out, "out");
    const int dim = b->spec.dim;
    auto fn = [f, user, dim](std::span<const double> x) { return f(x.data(), dim, user); };
    *out = new hgf_coeffs{hgf::analyze(fn, b->spec)};
  });
}

hgf_status hgf_coeffs_dirac(const hgf_basis* b, const double* point, hgf_coeffs** out) {
  return guarded([&] {
    need(b, "basis");
    need(point, "point");
    need(out, "out");
    std::vector<double> p(point, point + b->spec.dim);
    *out = new hgf_coeffs{hgf::embed_coeffs(hgf::DistributionSpec::dirac(std::move(p)), b->spec)};
  });
}

hgf_status hgf_coeffs_read_csv(const char* path, hgf_coeffs** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new hgf_coeffs{hgf::read_coeff_csv(path)};
  });
}

hgf_status hgf_coeffs_write_csv(const hgf_coeffs* c, const char* path) {
  return guarded([&] {
    need(c, "coeffs");
    need(path, "path");
    hgf::write_coeff_csv(c->a, path);
  });
}

void hgf_coeffs_destroy(hgf_coeffs* c) { delete c; }

hgf_status hgf_coeffs_size(const hgf_coeffs* c, size_t* out) {
  return guarded([&] {
    need(c, "coeffs");
    need(out, "out");
    *out = c->a.size();
  });
}

hgf_status hgf_coeffs_values(const hgf_coeffs* c, double* out, size_t n) {
  return guarded([&] {
    need(c, "coeffs");
    need(out, "out");
    const auto v = c->a.values();
    for (size_t i = 0; i < n && i < v.size(); ++i) out[i] = v[i];
  });
}

hgf_status hgf_coeffs_get(const hgf_coeffs* c, const int* beta, double* out) {
  return guarded([&] {
    need(c, "coeffs");
    need(beta, "beta");
    need(out, "out");
    const hgf::MultiIndex idx(std::vector<int>(beta, beta + c->a.dim()));
    for (int i = 0; i < c->a.dim(); ++i)
      if (idx[i] < 0 || idx[i] > c->a.level(i)) throw hgf::InvalidInput("index outside the stored box");
    *out = c->a.at(idx);
  });
}

hgf_status hgf_coeffs_seminorm(const hgf_coeffs* c, int n, double* out) {
  return guarded([&] {
    need(c, "coeffs");
    need(out, "out");
    *out = hgf::seminorm(c->a, n);
  });
}

hgf_status hgf_coeffs_pairing(const hgf_coeffs* b, const hgf_coeffs* a, double* out) {
  return guarded([&] {
    need(b, "b");
    need(a, "a");
    need(out, "out");
    *out = hgf::pairing(b->a, a->a);
  });
}

hgf_status hgf_coeffs_synthesize(const hgf_coeffs* c, const double* x, double* out) {
  return guarded([&] {
    need(c, "coeffs");
    need(x, "x");
    need(out, "out");
    *out = hgf::synthesize(c->a, std::span<const double>(x, static_cast<size_t>(c->a.dim())));
  });
}

hgf_status hgf_coeffs_translate(const hgf_coeffs* c, const double* shift, hgf_coeffs** out) {
  return guarded([&] {
    need(c, "coeffs");
    need(shift, "shift");
    need(out, "out");
    *out = new hgf_coeffs{
        hgf::translate_coeffs(c->a, std::span<const double>(shift, static_cast<size_t>(c->a.dim())))};
  });
}

hgf_status hgf_coeffs_derivative(const hgf_coeffs* c, int axis, hgf_coeffs** out) {
  return guarded([&] {
    need(c, "coeffs");
    need(out, "out");
    if (axis < 0 || axis >= c->a.dim()) throw hgf::InvalidInput("axis out of range");
    *out = new hgf_coeffs{hgf::ladder_derivative(c->a, axis)};
  });
}

void hgf_run_options_init(hgf_run_options* opt) {
  if (!opt) return;
  opt->command = nullptr;
  opt->config_json = nullptr;
  opt->out_dir = nullptr;
  opt->seed = -1;
  opt->tol = std::nan("");
}

int hgf_run(const hgf_run_options* opt) {
  if (!opt) {
    g_message = g_error = "options are null";
    return 1;
  }
  hgf::Overrides ov;
  if (opt->seed >= 0) ov.seed = static_cast<std::uint64_t>(opt->seed);
  if (opt->out_dir) ov.out = opt->out_dir;
  if (!std::isnan(opt->tol)) ov.tol = opt->tol;
  const auto r = hgf::run_command(opt->command ? opt->command : "", opt->config_json ? opt->config_json : "", ov);
  g_message = r.message;
  if (r.status == hgf::ExitStatus::pass) g_error.clear();
  else g_error = r.message;
  return static_cast<int>(r.status);
}

const char* hgf_command_names(void) {
  static const std::string names = [] {
    std::string s;
    for (const auto& n : hgf::command_names()) s += n + "\n";
    return s;
  }();
  return names.c_str();
}

}  // extern "C"
