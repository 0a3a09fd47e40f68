#include "antdyn/c_api.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <string>

#include <json.hpp>

#include "antdyn/env.hpp"
#include "antdyn/errors.hpp"

struct antdyn_env {
  std::unique_ptr<antdyn::Environment> env;
  bool closed = false;
  std::string last_error;
};

namespace {

thread_local std::string g_create_error;

template <typename F>
int guarded(std::string& error_out, F&& body) {
  try {
    body();
    error_out.clear();
    return ANTDYN_OK;
  } catch (const antdyn::DataError& e) {
    error_out = e.what();
    return ANTDYN_DATA_ERROR;
  } catch (const antdyn::ConfigError& e) {
    error_out = e.what();
    return ANTDYN_CONFIG_ERROR;
  } catch (const std::exception& e) {
    error_out = e.what();
    return ANTDYN_CONTRACT_ERROR;
  }
}

bool usable(antdyn_env* env) {
  if (!env) return false;
  if (env->closed) {
    env->last_error = "environment handle is closed";
    return false;
  }
  return true;
}

}  // namespace

extern "C" {

antdyn_env* antdyn_create(const char* config_json, int* status) {
  auto handle = std::make_unique<antdyn_env>();
  const int rc = guarded(g_create_error, [&] {
    if (!config_json) throw antdyn::ContractViolation("config_json is NULL");
    handle->env = antdyn::environment_from_json(config_json);
  });
  if (status) *status = rc;
  return rc == ANTDYN_OK ? handle.release() : nullptr;
}

int antdyn_reset(antdyn_env* env, uint64_t seed, double* obs) {
  if (!usable(env)) return ANTDYN_CONTRACT_ERROR;
  return guarded(env->last_error, [&] {
    if (!obs) throw antdyn::ContractViolation("obs is NULL");
    const antdyn::Observation o = env->env->reset(seed);
    std::memcpy(obs, o.data(), sizeof(double) * o.size());
  });
}

int antdyn_step(antdyn_env* env, int action, double* obs, double* reward, int* flags) {
  if (!usable(env)) return ANTDYN_CONTRACT_ERROR;
  return guarded(env->last_error, [&] {
    if (!obs || !reward || !flags) throw antdyn::ContractViolation("output pointer is NULL");
    const auto a = antdyn::action_from_index(action);
    if (!a) {
      throw antdyn::ContractViolation("action " + std::to_string(action) + " outside valid range 0..3");
    }
    const antdyn::StepResult r = env->env->step(*a);
    std::memcpy(obs, r.observation.data(), sizeof(double) * r.observation.size());
    *reward = r.reward;
    *flags = (r.terminated ? 1 : 0) | (r.truncated ? 2 : 0);
  });
}

size_t antdyn_info_json(const antdyn_env* env, char* buf, size_t buf_len) {
  std::string text = "{}";
  if (env && !env->closed && env->env) text = nlohmann::json(env->env->last_info()).dump();
  if (buf && buf_len > 0) {
    const size_t n = std::min(text.size(), buf_len - 1);
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
  }
  return text.size();
}

int antdyn_horizon(const antdyn_env* env) {
  if (!env || env->closed) return -1;
  return env->env->horizon();
}

void antdyn_close(antdyn_env* env) {
  if (env) env->closed = true;
}

void antdyn_destroy(antdyn_env* env) { delete env; }

const char* antdyn_last_error(const antdyn_env* env) {
  return env ? env->last_error.c_str() : g_create_error.c_str();
}

}  // extern "C"
