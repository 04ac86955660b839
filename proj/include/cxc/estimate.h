// Copyright 2026 The cxc Authors
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

#ifndef CXC_ESTIMATE_H
#define CXC_ESTIMATE_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cxc/circuit.h"
#include "cxc/cxc_code.h"
#include "cxc/decoder.h"
#include "cxc/noise_sim.h"

namespace cxc {

/// Per-round rate 1 - (1 - P)^(1/d) for total failure probability P.
double per_round_rate(double total, size_t rounds);

/// p^(d/2) exp(alpha + beta p + gamma p^2).
struct HeuristicFit {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    size_t d = 0;
    std::vector<double> residuals;  // log-space, one per fitted point
};

double heuristic_rate(double p, const HeuristicFit &fit);

/// 0.1 (100 p)^((d+1)/2).
double surface_heuristic(double p, size_t d);

struct WilsonInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Wilson score interval for a binomial proportion (z = 1.96 by default).
WilsonInterval wilson_interval(size_t failures, size_t shots, double z = 1.96);

struct RatePoint {
    std::string code;  // e.g. "[[240,8,8]]"
    std::string family;
    Basis basis = Basis::Z;
    Variant variant = Variant::Packed;
    size_t rounds = 1;
    size_t k = 0;
    double p = 0.0;
    size_t shots = 0;
    size_t failures = 0;          // any observable wrong
    size_t logical_failures = 0;  // summed over observables
    double p_log_round = 0.0;
    double p_log_round_per_k = 0.0;
    double p_log_linear = 0.0;      // P / d, for comparison
    double p_log_per_logical = 0.0;  // per-round rate of the mean per-observable failure
    double ci_lo = 0.0;              // per-round Wilson bounds
    double ci_hi = 0.0;
};

/// Fills the derived rate fields from shots, failures, logical_failures,
/// rounds and k.
void finalize_rate_point(RatePoint &point);

/// Least squares of ln(p_log) - (d/2) ln(p) on [1, p, p^2], weighted by the
/// inverse delta-method variance of ln(p_log). Points without failures are
/// skipped; a point with shots == 0 and a positive rate gets unit weight.
/// Throws std::invalid_argument with fewer than three usable points or fewer
/// than three distinct p.
HeuristicFit fit_heuristic(const std::vector<RatePoint> &points, size_t d);

struct TableRow {
    std::string code;
    std::string family;
    double alpha;
    double beta;
    double gamma;
    size_t omega;
    size_t d;
};

/// Published fit parameters for the eight reference codes.
const std::vector<TableRow> &reference_fits();
HeuristicFit fit_from_row(const TableRow &row);

/// Circuit, noise, sampling, decoding and normalization for one (code, p).
RatePoint run_memory_experiment(const CxcCode &code, Basis basis, Variant variant, size_t rounds, double p,
                                size_t shots, uint64_t seed, const DecoderConfig &config, size_t workers = 1);

/// Header line plus one row per point. The first twelve columns are code,
/// family, basis, variant, d, p, shots, failures, p_log_round,
/// p_log_round_per_k, ci_lo, ci_hi; extra columns follow.
std::string results_csv(const std::vector<RatePoint> &points);
/// Reads results back; lines starting with '#' are ignored. Throws
/// std::invalid_argument on malformed input.
std::vector<RatePoint> parse_results_csv(const std::string &text);

/// {"code", "alpha", "beta", "gamma", "omega", "d", "residuals"}.
std::string fit_json(const std::string &code, const HeuristicFit &fit, size_t omega);

}  // namespace cxc

#endif
