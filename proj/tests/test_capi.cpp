// SPDX-License-Identifier: Apache-2.0
// Exercises the exported C surface only.
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "circqft/circqft.h"
#include "doctest.h"

namespace {

std::string text_of(cqft_status (*get)(const cqft_result*, char*, size_t, size_t*), const cqft_result* r) {
  size_t n = 0;
  get(r, nullptr, 0, &n);
  std::string s(n, '\0');
  REQUIRE(get(r, s.data(), s.size(), &n) == CQFT_OK);
  s.resize(n - 1);
  return s;
}

}  // namespace

TEST_CASE("capi: presets") {
  REQUIRE(cqft_preset_count() == 11);
  CHECK(std::string(cqft_preset_name(0)) == "fig3");
  CHECK(cqft_preset_name(99) == nullptr);

  size_t n = 0;
  CHECK(cqft_preset_describe("fig5", nullptr, 0, &n) == CQFT_ERR_INVALID_ARGUMENT);
  CHECK(n > 1);
  std::vector<char> buf(n);
  REQUIRE(cqft_preset_describe("fig5", buf.data(), buf.size(), &n) == CQFT_OK);
  CHECK(std::strstr(buf.data(), "t_max") != nullptr);

  CHECK(cqft_preset_describe("zzz", buf.data(), buf.size(), &n) == CQFT_ERR_CONFIG);
  CHECK(std::strstr(cqft_last_error(), "fig3") != nullptr);
}

TEST_CASE("capi: scenario lifecycle and run") {
  cqft_scenario* s = nullptr;
  REQUIRE(cqft_scenario_from_preset("fig7-blue", &s) == CQFT_OK);
  const char* kind = nullptr;
  REQUIRE(cqft_scenario_kind(s, &kind) == CQFT_OK);
  CHECK(std::string(kind) == "counter-driving");
  REQUIRE(cqft_scenario_set_samples(s, 21) == CQFT_OK);
  CHECK(cqft_scenario_set_samples(s, 1) == CQFT_ERR_PRECONDITION);
  CHECK(cqft_scenario_set_kind(s, "nonsense") == CQFT_ERR_CONFIG);
  REQUIRE(cqft_scenario_set_seed(s, 7) == CQFT_OK);
  uint64_t seed = 0;
  REQUIRE(cqft_scenario_seed(s, &seed) == CQFT_OK);
  CHECK(seed == 7);

  cqft_result* r = nullptr;
  REQUIRE(cqft_run(s, &r) == CQFT_OK);
  CHECK(cqft_result_rows(r) == 21);
  CHECK(cqft_result_columns(r) == 2);
  CHECK(std::string(cqft_result_column_name(r, 1)) == "kappa_rate");
  CHECK(cqft_result_column_name(r, 2) == nullptr);
  double v = -1;
  REQUIRE(cqft_result_value(r, 0, 1, &v) == CQFT_OK);
  CHECK(v == 0.0);
  REQUIRE(cqft_result_value(r, 20, 1, &v) == CQFT_OK);
  CHECK(v == 0.0);
  CHECK(cqft_result_value(r, 21, 0, &v) == CQFT_ERR_INVALID_ARGUMENT);

  const std::string csv = text_of(cqft_result_csv, r);
  CHECK(csv.rfind("time_ms,kappa_rate\n", 0) == 0);
  CHECK(text_of(cqft_result_diagnostics, r).find("kappa_rate_end") != std::string::npos);
  cqft_result_free(r);

  // with_cd is only meaningful for adiabatic-fidelity
  REQUIRE(cqft_scenario_set_with_cd(s, 1) == CQFT_OK);
  CHECK(cqft_run(s, &r) == CQFT_ERR_CONFIG);
  cqft_scenario_free(s);
}

TEST_CASE("capi: config round trip") {
  cqft_scenario* s = nullptr;
  REQUIRE(cqft_scenario_from_preset("fig4", &s) == CQFT_OK);
  size_t n = 0;
  cqft_scenario_serialize(s, 0, nullptr, 0, &n);
  std::string text(n, '\0');
  REQUIRE(cqft_scenario_serialize(s, 0, text.data(), n, &n) == CQFT_OK);
  cqft_scenario* t = nullptr;
  REQUIRE(cqft_scenario_from_config_text(text.c_str(), &t) == CQFT_OK);
  std::string again(n, '\0');
  REQUIRE(cqft_scenario_serialize(t, 0, again.data(), n, &n) == CQFT_OK);
  CHECK(again == text);
  cqft_scenario_serialize(t, 1, nullptr, 0, &n);
  std::string js(n, '\0');
  REQUIRE(cqft_scenario_serialize(t, 1, js.data(), n, &n) == CQFT_OK);
  CHECK(js.front() == '{');
  cqft_scenario_free(s);
  cqft_scenario_free(t);

  CHECK(cqft_scenario_from_config_text("[scenario]\nfoo = 1\n", &t) == CQFT_ERR_CONFIG);
  CHECK(cqft_scenario_from_config_file("/nonexistent.cfg", &t) == CQFT_ERR_CONFIG);
  CHECK(cqft_scenario_from_preset(nullptr, &t) == CQFT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("capi: primitives") {
  cqft_complex g[64], h[64], vec[64];
  double vals[8];
  REQUIRE(cqft_qft_gate(g) == CQFT_OK);
  double f = 0;
  REQUIRE(cqft_gate_fidelity(g, &f) == CQFT_OK);
  CHECK(f == doctest::Approx(1.0).epsilon(1e-14));

  REQUIRE(cqft_build_circulant(1, 1, 2, 0, M_PI / 2, h) == CQFT_OK);
  CHECK(h[1].re == doctest::Approx(0.0));
  CHECK(h[1].im == doctest::Approx(1.0));
  CHECK(cqft_build_circulant(1, 1, 2, 0.5, 0, h) == CQFT_ERR_PRECONDITION);

  REQUIRE(cqft_build_offset(1, 2, 4, h) == CQFT_OK);
  REQUIRE(cqft_eigensystem(h, vals, vec) == CQFT_OK);
  const double expect[8] = {-7, -5, -3, -1, 1, 3, 5, 7};
  for (int k = 0; k < 8; ++k) CHECK(vals[k] == doctest::Approx(expect[k]).epsilon(1e-14));

  h[1] = {1, 0};  // breaks Hermiticity
  CHECK(cqft_eigensystem(h, vals, vec) == CQFT_ERR_PRECONDITION);

  REQUIRE(cqft_build_counter_driving(2, h) == CQFT_OK);
  CHECK(h[4].re == -2.0);
  REQUIRE(cqft_build_rotating(1, 1, 2, 3, M_PI / 4, h) == CQFT_OK);
  CHECK(h[1].re == doctest::Approx(3 * std::cos(M_PI / 4)));

  double k = 0;
  REQUIRE(cqft_mixing_angle(1, 1, 1, 1, &k) == CQFT_OK);
  CHECK(k == doctest::Approx(M_PI / 4));
  CHECK(cqft_mixing_angle(-1, 1, 1, 1, &k) == CQFT_ERR_PRECONDITION);

  double eta = 0;
  REQUIRE(cqft_lamb_dicke(1, 2 * M_PI / 729e-9, 6.64e-26, 2 * M_PI * 3e6, &eta) == CQFT_OK);
  CHECK(eta == doctest::Approx(0.055942364856126185).epsilon(1e-12));

  const double a[1] = {1}, om[1] = {1};
  double j = 0;
  REQUIRE(cqft_pairwise_coupling(a, a, om, 1, 2, &j) == CQFT_OK);
  CHECK(j == doctest::Approx(1.0 / 3));
  REQUIRE(cqft_trilinear_coupling(a, a, a, om, 1, 2, &j) == CQFT_OK);
  CHECK(j == doctest::Approx(1.0 / 3));
  CHECK(cqft_pairwise_coupling(a, a, om, 1, 1, &j) == CQFT_ERR_PRECONDITION);
  REQUIRE(cqft_pairwise_coupling(nullptr, nullptr, nullptr, 0, 2, &j) == CQFT_OK);
  CHECK(j == 0.0);

  cqft_complex rho[64] = {};
  rho[0] = {1, 0};
  REQUIRE(cqft_uhlmann_fidelity(rho, rho, &f) == CQFT_OK);
  CHECK(f == doctest::Approx(1.0));
  rho[0] = {2, 0};
  CHECK(cqft_uhlmann_fidelity(rho, rho, &f) == CQFT_ERR_PRECONDITION);
}

TEST_CASE("capi: status names and null handles") {
  CHECK(std::string(cqft_status_name(CQFT_ERR_NUMERICAL)) == "numerical");
  CHECK(cqft_result_rows(nullptr) == 0);
  cqft_result_free(nullptr);
  cqft_scenario_free(nullptr);
  CHECK(cqft_run(nullptr, nullptr) == CQFT_ERR_INVALID_ARGUMENT);
}
