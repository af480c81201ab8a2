#include "qnetsim/qnetsim.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "qnetsim/error.hpp"
#include "qnetsim/scenario.hpp"

struct qnetsim_config {
  std::vector<qnetsim::Scenario> scenarios;
};

struct qnetsim_result {
  std::vector<qnetsim::RunRecord> records;
  std::vector<std::string> outputs;
};

namespace {

thread_local std::string last_error;

qnetsim_status status_of(qnetsim::ErrorCode code) {
  using qnetsim::ErrorCode;
  if (qnetsim::is_numerical(code)) return QNETSIM_ERR_NUMERICAL;
  switch (code) {
    case ErrorCode::ParseError: return QNETSIM_ERR_PARSE;
    case ErrorCode::ValidationError: return QNETSIM_ERR_VALIDATION;
    case ErrorCode::IoError: return QNETSIM_ERR_IO;
    case ErrorCode::InvalidArgument:
    case ErrorCode::DimMismatch:
    case ErrorCode::BadTimeRange: return QNETSIM_ERR_ARGUMENT;
    default: return QNETSIM_ERR_MODEL;
  }
}

template <class F>
qnetsim_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return QNETSIM_OK;
  } catch (const qnetsim::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return QNETSIM_ERR_INTERNAL;
}

qnetsim_status bad_argument(const char* what) {
  last_error = what;
  return QNETSIM_ERR_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string csv_of(const qnetsim_result* result, size_t index) {
  if (index == QNETSIM_ALL) return qnetsim::to_csv(result->records);
  if (index >= result->records.size())
    throw qnetsim::Error(qnetsim::ErrorCode::InvalidArgument, "result index out of range");
  return qnetsim::to_csv(result->records[index]);
}

}  // namespace

extern "C" {

const char* qnetsim_version(void) { return "1.0.0"; }

const char* qnetsim_last_error(void) { return last_error.c_str(); }

const char* qnetsim_status_name(qnetsim_status status) {
  switch (status) {
    case QNETSIM_OK: return "ok";
    case QNETSIM_ERR_PARSE: return "parse error";
    case QNETSIM_ERR_VALIDATION: return "validation error";
    case QNETSIM_ERR_NUMERICAL: return "numerical failure";
    case QNETSIM_ERR_IO: return "i/o error";
    case QNETSIM_ERR_ARGUMENT: return "invalid argument";
    case QNETSIM_ERR_MODEL: return "model error";
    case QNETSIM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

qnetsim_status qnetsim_config_parse(const char* text, qnetsim_config** out) {
  if (!text || !out) return bad_argument("null argument");
  *out = nullptr;
  return guarded([&] { *out = new qnetsim_config{qnetsim::parse_scenarios(text)}; });
}

qnetsim_status qnetsim_config_load(const char* path, qnetsim_config** out) {
  if (!path || !out) return bad_argument("null argument");
  *out = nullptr;
  return guarded([&] { *out = new qnetsim_config{qnetsim::load_scenarios(path)}; });
}

void qnetsim_config_free(qnetsim_config* config) { delete config; }

size_t qnetsim_config_count(const qnetsim_config* config) {
  return config ? config->scenarios.size() : 0;
}

qnetsim_status qnetsim_config_name(const qnetsim_config* config, size_t index, const char** name) {
  if (!config || !name) return bad_argument("null argument");
  if (index >= config->scenarios.size()) return bad_argument("scenario index out of range");
  *name = config->scenarios[index].name.c_str();
  return QNETSIM_OK;
}

qnetsim_status qnetsim_config_operation(const qnetsim_config* config, size_t index,
                                        const char** operation) {
  if (!config || !operation) return bad_argument("null argument");
  if (index >= config->scenarios.size()) return bad_argument("scenario index out of range");
  *operation = qnetsim::to_string(config->scenarios[index].operation);
  return QNETSIM_OK;
}

qnetsim_status qnetsim_config_set_seed(qnetsim_config* config, uint64_t seed) {
  if (!config) return bad_argument("null config");
  for (auto& s : config->scenarios) s.seed = seed;
  return QNETSIM_OK;
}

qnetsim_status qnetsim_config_set_samples(qnetsim_config* config, int samples) {
  if (!config) return bad_argument("null config");
  if (samples < 2) return bad_argument("samples must be >= 2");
  for (auto& s : config->scenarios) s.grid.samples = samples;
  return QNETSIM_OK;
}

qnetsim_status qnetsim_config_serialize(const qnetsim_config* config, char** text) {
  if (!config || !text) return bad_argument("null argument");
  *text = nullptr;
  return guarded([&] { *text = copy_string(qnetsim::serialize_scenarios(config->scenarios)); });
}

void qnetsim_string_free(char* text) { delete[] text; }

qnetsim_status qnetsim_run(const qnetsim_config* config, const char* operation, unsigned jobs,
                           qnetsim_result** out) {
  if (!config || !operation || !out) return bad_argument("null argument");
  *out = nullptr;
  const auto op = qnetsim::parse_operation(operation);
  if (!op) return bad_argument("unknown operation");
  return guarded([&] {
    std::vector<qnetsim::Scenario> selected;
    for (const auto& s : config->scenarios)
      if (s.operation == *op) selected.push_back(s);
    if (selected.empty())
      throw qnetsim::Error(qnetsim::ErrorCode::ValidationError,
                           std::string("config has no '") + operation + "' scenarios");
    auto result = std::make_unique<qnetsim_result>();
    result->records = qnetsim::run_experiments(selected, jobs);
    for (const auto& s : selected) result->outputs.push_back(s.output);
    *out = result.release();
  });
}

void qnetsim_result_free(qnetsim_result* result) { delete result; }

size_t qnetsim_result_count(const qnetsim_result* result) {
  return result ? result->records.size() : 0;
}

qnetsim_status qnetsim_result_scenario(const qnetsim_result* result, size_t index, const char** name) {
  if (!result || !name) return bad_argument("null argument");
  if (index >= result->records.size()) return bad_argument("result index out of range");
  *name = result->records[index].scenario.c_str();
  return QNETSIM_OK;
}

qnetsim_status qnetsim_result_output(const qnetsim_result* result, size_t index, const char** path) {
  if (!result || !path) return bad_argument("null argument");
  if (index >= result->outputs.size()) return bad_argument("result index out of range");
  *path = result->outputs[index].c_str();
  return QNETSIM_OK;
}

qnetsim_status qnetsim_result_rows(const qnetsim_result* result, size_t index, size_t* rows) {
  if (!result || !rows) return bad_argument("null argument");
  if (index == QNETSIM_ALL) {
    *rows = 0;
    for (const auto& r : result->records) *rows += r.rows.size();
    return QNETSIM_OK;
  }
  if (index >= result->records.size()) return bad_argument("result index out of range");
  *rows = result->records[index].rows.size();
  return QNETSIM_OK;
}

qnetsim_status qnetsim_result_seconds(const qnetsim_result* result, size_t index, double* seconds) {
  if (!result || !seconds) return bad_argument("null argument");
  if (index >= result->records.size()) return bad_argument("result index out of range");
  *seconds = result->records[index].wall_seconds;
  return QNETSIM_OK;
}

qnetsim_status qnetsim_result_csv(const qnetsim_result* result, size_t index, char** text) {
  if (!result || !text) return bad_argument("null argument");
  *text = nullptr;
  return guarded([&] { *text = copy_string(csv_of(result, index)); });
}

qnetsim_status qnetsim_result_write_csv(const qnetsim_result* result, size_t index, const char* path) {
  if (!result || !path) return bad_argument("null argument");
  return guarded([&] { qnetsim::write_file_atomic(path, csv_of(result, index)); });
}

qnetsim_status qnetsim_network_eigenvalues(double e_g, double g1, double g2, double values[8]) {
  if (!values) return bad_argument("null argument");
  return guarded([&] {
    const auto eig = qnetsim::network_eigensystem(qnetsim::NetworkSystem::simplified(e_g, g1, g2));
    for (int k = 0; k < 8; ++k) values[k] = eig.values[static_cast<std::size_t>(k)];
  });
}

qnetsim_status qnetsim_network_entropy(double e_g, double g1, double g2, int k, int keep,
                                       double* entropy) {
  if (!entropy) return bad_argument("null argument");
  if (k < 1 || k > 8) return bad_argument("eigenstate label must be in 1..8");
  if (keep < 0 || keep > 2) return bad_argument("keep must be 0, 1 or 2");
  return guarded([&] {
    const auto eig = qnetsim::network_eigensystem(qnetsim::NetworkSystem::simplified(e_g, g1, g2));
    const qnetsim::StateVector psi(eig.vectors[static_cast<std::size_t>(k - 1)],
                                   qnetsim::BasisLabel::NetworkEnergy);
    const int dims[] = {2, 2, 2};
    *entropy = qnetsim::von_neumann_entropy(psi, dims, keep);
  });
}

qnetsim_status qnetsim_jc_transfer(double e_g, double e_e, double e_phi1, double e_phi2, double g,
                                   double t, double* coefficient) {
  if (!coefficient) return bad_argument("null argument");
  return guarded([&] {
    const auto sys = qnetsim::CoupledSystem::constant(e_g, e_e, e_phi1, e_phi2, g);
    sys.validate(0.0, t > 0.0 ? t : 0.0);
    *coefficient = qnetsim::energy_transfer_coefficient(sys, 0.0, t);
  });
}

}  // extern "C"
