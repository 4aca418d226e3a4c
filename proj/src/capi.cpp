// SPDX-License-Identifier: Apache-2.0
#include "circqft/circqft.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "circqft/error.hpp"
#include "circqft/scenario.hpp"

struct cqft_scenario {
  circqft::Scenario s;
  std::string kind_name;
};

struct cqft_result {
  circqft::ScenarioResult r;
};

namespace {

thread_local std::string g_last_error;

cqft_status fail(cqft_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

template <class F>
cqft_status guarded(F&& f) {
  try {
    return f();
  } catch (const circqft::Error& e) {
    switch (e.kind()) {
      case circqft::ErrorKind::config:
        return fail(CQFT_ERR_CONFIG, e.what());
      case circqft::ErrorKind::precondition:
        return fail(CQFT_ERR_PRECONDITION, e.what());
      case circqft::ErrorKind::numerical:
        return fail(CQFT_ERR_NUMERICAL, e.what());
    }
    return fail(CQFT_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CQFT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CQFT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CQFT_ERR_INTERNAL, "unknown failure");
  }
}

cqft_status null_arg(const char* name) {
  return fail(CQFT_ERR_INVALID_ARGUMENT, std::string(name) + " is NULL");
}

cqft_status copy_text(const std::string& text, char* buf, size_t cap, size_t* needed) {
  if (!needed) return null_arg("needed");
  *needed = text.size() + 1;
  if (!buf || cap < *needed) return fail(CQFT_ERR_INVALID_ARGUMENT, "buffer too small");
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return CQFT_OK;
}

void store(const circqft::Operator& m, cqft_complex out[64]) {
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) out[r * 8 + c] = {m(r, c).real(), m(r, c).imag()};
}

circqft::Operator load(const cqft_complex in[64]) {
  circqft::Operator m;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) m(r, c) = {in[r * 8 + c].re, in[r * 8 + c].im};
  return m;
}

cqft_status new_scenario(circqft::Scenario s, cqft_scenario** out) {
  *out = new cqft_scenario{std::move(s), {}};
  return CQFT_OK;
}

}  // namespace

extern "C" {

const char* cqft_version(void) { return "0.1.0"; }

const char* cqft_last_error(void) { return g_last_error.c_str(); }

const char* cqft_status_name(cqft_status status) {
  switch (status) {
    case CQFT_OK:
      return "ok";
    case CQFT_ERR_CONFIG:
      return "config";
    case CQFT_ERR_PRECONDITION:
      return "precondition";
    case CQFT_ERR_NUMERICAL:
      return "numerical";
    case CQFT_ERR_INVALID_ARGUMENT:
      return "invalid-argument";
    case CQFT_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

size_t cqft_preset_count(void) { return circqft::presets().size(); }

const char* cqft_preset_name(size_t index) {
  const auto& p = circqft::presets();
  return index < p.size() ? p[index].name.c_str() : nullptr;
}

cqft_status cqft_preset_describe(const char* name, char* buf, size_t cap, size_t* needed) {
  if (!name) return null_arg("name");
  return guarded([&] { return copy_text(circqft::describe_preset(circqft::find_preset(name)), buf, cap, needed); });
}

cqft_status cqft_scenario_from_preset(const char* name, cqft_scenario** out) {
  if (!name) return null_arg("name");
  if (!out) return null_arg("out");
  return guarded([&] { return new_scenario(circqft::find_preset(name).scenario, out); });
}

cqft_status cqft_scenario_from_config_text(const char* text, cqft_scenario** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guarded([&] { return new_scenario(circqft::parse_config(text), out); });
}

cqft_status cqft_scenario_from_config_file(const char* path, cqft_scenario** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] { return new_scenario(circqft::load_config(path), out); });
}

void cqft_scenario_free(cqft_scenario* s) { delete s; }

cqft_status cqft_scenario_set_kind(cqft_scenario* s, const char* kind) {
  if (!s) return null_arg("scenario");
  if (!kind) return null_arg("kind");
  return guarded([&] {
    s->s.kind = circqft::parse_kind(kind);
    return CQFT_OK;
  });
}

cqft_status cqft_scenario_set_samples(cqft_scenario* s, size_t samples) {
  if (!s) return null_arg("scenario");
  if (samples < 2) return fail(CQFT_ERR_PRECONDITION, "samples must be at least 2");
  s->s.samples = samples;
  return CQFT_OK;
}

cqft_status cqft_scenario_set_with_cd(cqft_scenario* s, int enabled) {
  if (!s) return null_arg("scenario");
  s->s.with_cd = enabled != 0;
  return CQFT_OK;
}

cqft_status cqft_scenario_set_seed(cqft_scenario* s, uint64_t seed) {
  if (!s) return null_arg("scenario");
  s->s.seed = seed;
  return CQFT_OK;
}

cqft_status cqft_scenario_kind(const cqft_scenario* s, const char** kind) {
  if (!s) return null_arg("scenario");
  if (!kind) return null_arg("kind");
  *kind = circqft::to_string(s->s.kind);
  return CQFT_OK;
}

cqft_status cqft_scenario_seed(const cqft_scenario* s, uint64_t* seed) {
  if (!s) return null_arg("scenario");
  if (!seed) return null_arg("seed");
  *seed = s->s.seed;
  return CQFT_OK;
}

cqft_status cqft_scenario_serialize(const cqft_scenario* s, int as_json, char* buf, size_t cap, size_t* needed) {
  if (!s) return null_arg("scenario");
  return guarded([&] {
    return copy_text(as_json ? circqft::export_json(s->s) : circqft::serialize_config(s->s), buf, cap, needed);
  });
}

cqft_status cqft_run(const cqft_scenario* s, cqft_result** out) {
  if (!s) return null_arg("scenario");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new cqft_result{circqft::run_scenario(s->s)};
    return CQFT_OK;
  });
}

void cqft_result_free(cqft_result* r) { delete r; }

size_t cqft_result_rows(const cqft_result* r) { return r ? r->r.rows.size() : 0; }

size_t cqft_result_columns(const cqft_result* r) { return r ? r->r.columns.size() : 0; }

const char* cqft_result_column_name(const cqft_result* r, size_t col) {
  if (!r || col >= r->r.columns.size()) return nullptr;
  return r->r.columns[col].c_str();
}

cqft_status cqft_result_value(const cqft_result* r, size_t row, size_t col, double* out) {
  if (!r) return null_arg("result");
  if (!out) return null_arg("out");
  if (row >= r->r.rows.size() || col >= r->r.columns.size())
    return fail(CQFT_ERR_INVALID_ARGUMENT, "row or column out of range");
  *out = r->r.rows[row][col];
  return CQFT_OK;
}

cqft_status cqft_result_csv(const cqft_result* r, char* buf, size_t cap, size_t* needed) {
  if (!r) return null_arg("result");
  return guarded([&] { return copy_text(circqft::format_csv(r->r), buf, cap, needed); });
}

cqft_status cqft_result_diagnostics(const cqft_result* r, char* buf, size_t cap, size_t* needed) {
  if (!r) return null_arg("result");
  return copy_text(r->r.diagnostics_json, buf, cap, needed);
}

size_t cqft_result_warning_count(const cqft_result* r) { return r ? r->r.warnings.size() : 0; }

const char* cqft_result_warning(const cqft_result* r, size_t index) {
  if (!r || index >= r->r.warnings.size()) return nullptr;
  return r->r.warnings[index].c_str();
}

cqft_status cqft_result_write(const cqft_scenario* s, const cqft_result* r, const char* path) {
  if (!s) return null_arg("scenario");
  if (!r) return null_arg("result");
  if (!path) return null_arg("path");
  return guarded([&] {
    circqft::write_outputs(s->s, r->r, path);
    return CQFT_OK;
  });
}

cqft_status cqft_build_circulant(int variant, double J, double J1, double Omega1, double phi, cqft_complex out[64]) {
  if (!out) return null_arg("out");
  return guarded([&] {
    store(circqft::build_circulant({variant, J, J1, Omega1, phi}), out);
    return CQFT_OK;
  });
}

cqft_status cqft_build_offset(double Delta1, double Delta2, double Delta3, cqft_complex out[64]) {
  if (!out) return null_arg("out");
  store(circqft::build_offset({Delta1, Delta2, Delta3}), out);
  return CQFT_OK;
}

cqft_status cqft_build_rotating(double J, double J1, double Omega2, double Omega3, double phi, cqft_complex out[64]) {
  if (!out) return null_arg("out");
  return guarded([&] {
    store(circqft::build_rotating({J, J1, Omega2, Omega3, phi}), out);
    return CQFT_OK;
  });
}

cqft_status cqft_build_counter_driving(double kappa_rate, cqft_complex out[64]) {
  if (!out) return null_arg("out");
  store(circqft::build_counter_driving(kappa_rate), out);
  return CQFT_OK;
}

cqft_status cqft_eigensystem(const cqft_complex h[64], double values[8], cqft_complex vectors[64]) {
  if (!h) return null_arg("h");
  if (!values) return null_arg("values");
  if (!vectors) return null_arg("vectors");
  return guarded([&] {
    const auto es = circqft::hermitian_eigensystem(load(h));
    for (int k = 0; k < 8; ++k) values[k] = es.values[k];
    store(es.vectors, vectors);
    return CQFT_OK;
  });
}

cqft_status cqft_qft_gate(cqft_complex out[64]) {
  if (!out) return null_arg("out");
  store(circqft::qft_gate(), out);
  return CQFT_OK;
}

cqft_status cqft_gate_fidelity(const cqft_complex u[64], double* out) {
  if (!u) return null_arg("u");
  if (!out) return null_arg("out");
  *out = circqft::gate_fidelity(load(u));
  return CQFT_OK;
}

cqft_status cqft_uhlmann_fidelity(const cqft_complex rho0[64], const cqft_complex rho[64], double* out) {
  if (!rho0) return null_arg("rho0");
  if (!rho) return null_arg("rho");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = circqft::uhlmann_fidelity(load(rho0), load(rho));
    return CQFT_OK;
  });
}

cqft_status cqft_mixing_angle(double Omega2, double Omega3, double J1, double J, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = circqft::mixing_angle(Omega2, Omega3, J1, J);
    return CQFT_OK;
  });
}

cqft_status cqft_lamb_dicke(double b, double k, double M, double Omega_n, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = circqft::lamb_dicke(b, k, M, Omega_n);
    return CQFT_OK;
  });
}

cqft_status cqft_pairwise_coupling(const double* Jj, const double* Jp, const double* Omega, size_t modes, double nu,
                                   double* out) {
  if (!out) return null_arg("out");
  if (modes && (!Jj || !Jp || !Omega)) return null_arg("mode list");
  return guarded([&] {
    *out = circqft::pairwise_coupling({Jj, Jj + modes}, {Jp, Jp + modes}, nu, {Omega, Omega + modes});
    return CQFT_OK;
  });
}

cqft_status cqft_trilinear_coupling(const double* Jj, const double* Jp, const double* h, const double* Omega,
                                    size_t modes, double nu, double* out) {
  if (!out) return null_arg("out");
  if (modes && (!Jj || !Jp || !h || !Omega)) return null_arg("mode list");
  return guarded([&] {
    *out = circqft::trilinear_coupling({Jj, Jj + modes}, {Jp, Jp + modes}, {h, h + modes}, nu,
                                       {Omega, Omega + modes});
    return CQFT_OK;
  });
}

}  // extern "C"
