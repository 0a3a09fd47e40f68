/* C-compatible boundary around the environment core, for foreign-language
 * adapters. All functions are safe to call with a handle from
 * antdyn_create until antdyn_destroy; a handle is single-threaded.
 *
 * Status codes mirror the CLI exit codes: 0 ok, 2 data error, 3 config
 * error, 4 contract violation (bad action, stepping a finished episode,
 * use of a closed handle). The message for the last failure is available
 * from antdyn_last_error.
 */
#ifndef ANTDYN_C_API_H
#define ANTDYN_C_API_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define ANTDYN_OBS_SIZE 13
#define ANTDYN_ACTION_COUNT 4

#define ANTDYN_OK 0
#define ANTDYN_DATA_ERROR 2
#define ANTDYN_CONFIG_ERROR 3
#define ANTDYN_CONTRACT_ERROR 4

typedef struct antdyn_env antdyn_env;

/* Config is an EnvConfig JSON document plus exactly one world source:
 *   "data": "<bundle path>"                      recording bundle on disk, or
 *   "synthetic": {"n_ants": .., "seed": .., ...} generated recording.
 * Returns NULL on failure; *status and the thread's last creation error
 * (antdyn_last_error(NULL)) describe why. */
antdyn_env* antdyn_create(const char* config_json, int* status);

/* Starts an episode. Writes ANTDYN_OBS_SIZE doubles to obs. */
int antdyn_reset(antdyn_env* env, uint64_t seed, double* obs);

/* Advances one step with action 0=forward, 1=backward, 2=turn-left,
 * 3=turn-right. flags bit 0 = terminated, bit 1 = truncated. */
int antdyn_step(antdyn_env* env, int action, double* obs, double* reward, int* flags);

/* Info map of the last reset/step as a JSON object. Returns the length the
 * full string needs (excluding the terminator); writes at most buf_len - 1
 * characters plus a terminator when buf_len > 0. */
size_t antdyn_info_json(const antdyn_env* env, char* buf, size_t buf_len);

/* Episode length T in steps, or -1 for a closed/NULL handle. */
int antdyn_horizon(const antdyn_env* env);

/* Marks the handle closed; later calls fail with ANTDYN_CONTRACT_ERROR.
 * Memory is released by antdyn_destroy. */
void antdyn_close(antdyn_env* env);

void antdyn_destroy(antdyn_env* env);

/* Message of the last failure on env, or of the last antdyn_create failure
 * on this thread when env is NULL. Never NULL. */
const char* antdyn_last_error(const antdyn_env* env);

#ifdef __cplusplus
}
#endif

#endif /* ANTDYN_C_API_H */
