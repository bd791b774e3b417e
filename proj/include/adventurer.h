/* C interface to the exploration-training library. All functions return
 * ADV_OK on success; on failure they return an error code and record a
 * message retrievable via adv_last_error(). Handles are opaque; every
 * created handle must be released with its destroy function. */
#ifndef ADVENTURER_H
#define ADVENTURER_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define ADV_OK 0
#define ADV_ERR_CONFIG 1  /* bad key, value, file, or argument */
#define ADV_ERR_RUNTIME 2 /* training / IO / numeric failure */

typedef struct adv_config adv_config;

/* Fresh config holding every documented default. Never fails. */
adv_config* adv_config_create(void);

/* Parse a flat dotted-key = value file; NULL on failure (see
 * adv_last_error). */
adv_config* adv_config_load(const char* path);

int adv_config_set(adv_config* cfg, const char* key, const char* value);

/* Copies the value into buf (NUL-terminated, truncated to buf_len). */
int adv_config_get(const adv_config* cfg, const char* key, char* buf,
                   size_t buf_len);

void adv_config_destroy(adv_config* cfg);

/* Full training run. out_dir overrides the config's out.dir; pass NULL to
 * use the config value. Writes metrics.jsonl, timings.jsonl, config.txt,
 * and final checkpoints into the output directory. */
int adv_train(const adv_config* cfg, const char* out_dir);

/* Distribution-separation evaluation of one estimator on the synthetic
 * two-room corpus, averaged over eval.seeds replicates. method NULL uses
 * the config's novelty.method. */
int adv_eval_novelty(const adv_config* cfg, const char* method,
                     double* objective1, double* objective2);

/* Grid search over "alpha" or "beta" with the standard value grids. The
 * full table is written as CSV to out_csv_path (NULL: <out.dir>/
 * grid_<param>.csv); the winning value lands in *best. */
int adv_grid_search(const adv_config* cfg, const char* param,
                    const char* out_csv_path, double* best);

/* Aggregates every .jsonl metrics file under in_dir into per-metric SVG
 * charts plus a combined CSV in out_dir. */
int adv_plot(const char* in_dir, const char* out_dir);

/* Message from the most recent failing call on this thread; empty string
 * if none. The pointer stays valid until the next failing call. */
const char* adv_last_error(void);

const char* adv_version(void);

#ifdef __cplusplus
}
#endif

#endif /* ADVENTURER_H */
