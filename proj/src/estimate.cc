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

#include "cxc/estimate.h"

#include <Eigen/Dense>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cxc {

double per_round_rate(double total, size_t rounds) {
    if (!(total >= 0.0 && total <= 1.0) || rounds == 0) {
        throw std::invalid_argument("per_round_rate needs 0 <= P <= 1 and d >= 1");
    }
    // -expm1(log1p(-P)/d) keeps precision for small P.
    if (total == 1.0 || rounds == 1) {
        return total;
    }
    return -std::expm1(std::log1p(-total) / static_cast<double>(rounds));
}

double heuristic_rate(double p, const HeuristicFit &fit) {
    return std::pow(p, 0.5 * static_cast<double>(fit.d)) * std::exp(fit.alpha + fit.beta * p + fit.gamma * p * p);
}

double surface_heuristic(double p, size_t d) { return 0.1 * std::pow(100.0 * p, 0.5 * static_cast<double>(d + 1)); }

WilsonInterval wilson_interval(size_t failures, size_t shots, double z) {
    if (shots == 0) {
        return {0.0, 1.0};
    }
    const double n = static_cast<double>(shots);
    const double phat = static_cast<double>(failures) / n;
    const double z2 = z * z;
    const double center = (phat + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z / (1 + z2 / n) * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

void finalize_rate_point(RatePoint &pt) {
    if (pt.failures > pt.shots) {
        throw std::invalid_argument("failures exceed shots");
    }
    if (pt.shots == 0) {
        return;
    }
    const double n = static_cast<double>(pt.shots);
    const double total = static_cast<double>(pt.failures) / n;
    pt.p_log_round = per_round_rate(total, pt.rounds);
    pt.p_log_round_per_k = pt.k > 0 ? pt.p_log_round / static_cast<double>(pt.k) : 0.0;
    pt.p_log_linear = total / static_cast<double>(pt.rounds);
    if (pt.k > 0) {
        double mean = static_cast<double>(pt.logical_failures) / (n * static_cast<double>(pt.k));
        pt.p_log_per_logical = per_round_rate(std::min(1.0, mean), pt.rounds);
    }
    WilsonInterval ci = wilson_interval(pt.failures, pt.shots);
    pt.ci_lo = per_round_rate(ci.lo, pt.rounds);
    pt.ci_hi = per_round_rate(ci.hi, pt.rounds);
}

namespace {

// Variance of ln(per-round rate) from the binomial variance of P.
double log_rate_variance(const RatePoint &pt) {
    if (pt.shots == 0) {
        return 1.0;
    }
    const double n = static_cast<double>(pt.shots);
    const double total = static_cast<double>(pt.failures) / n;
    const double d = static_cast<double>(pt.rounds);
    const double rate = pt.p_log_round;
    // d ln(rate) / dP = (1 - P)^(1/d - 1) / (d * rate)
    const double slope = std::pow(1 - total, 1 / d - 1) / (d * rate);
    return slope * slope * total * (1 - total) / n;
}

}  // namespace

HeuristicFit fit_heuristic(const std::vector<RatePoint> &points, size_t d) {
    std::vector<const RatePoint *> used;
    for (const RatePoint &pt : points) {
        bool has_rate = pt.shots == 0 ? pt.p_log_round > 0 : pt.failures > 0;
        if (has_rate && pt.p > 0 && pt.p_log_round > 0 && pt.p_log_round < 1) {
            used.push_back(&pt);
        }
    }
    std::set<double> distinct;
    for (const RatePoint *pt : used) {
        distinct.insert(pt->p);
    }
    if (used.size() < 3 || distinct.size() < 3) {
        throw std::invalid_argument("fit_heuristic needs at least three points with failures at distinct p");
    }
    const Eigen::Index m = static_cast<Eigen::Index>(used.size());
    Eigen::MatrixXd a(m, 3);
    Eigen::VectorXd y(m);
    Eigen::VectorXd y_raw(m);
    for (Eigen::Index i = 0; i < m; i++) {
        const RatePoint &pt = *used[i];
        double var = log_rate_variance(pt);
        double w = var > 0 ? 1 / std::sqrt(var) : 1.0;
        y_raw(i) = std::log(pt.p_log_round) - 0.5 * static_cast<double>(d) * std::log(pt.p);
        a(i, 0) = w;
        a(i, 1) = w * pt.p;
        a(i, 2) = w * pt.p * pt.p;
        y(i) = w * y_raw(i);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < 3) {
        throw std::invalid_argument("fit_heuristic design matrix is degenerate");
    }
    Eigen::Vector3d coef = qr.solve(y);
    HeuristicFit fit;
    fit.alpha = coef(0);
    fit.beta = coef(1);
    fit.gamma = coef(2);
    fit.d = d;
    for (Eigen::Index i = 0; i < m; i++) {
        double p = used[i]->p;
        fit.residuals.push_back(y_raw(i) - (fit.alpha + fit.beta * p + fit.gamma * p * p));
    }
    return fit;
}

const std::vector<TableRow> &reference_fits() {
    static const std::vector<TableRow> rows = {
        {"[[450,32,8]]", "C2", 16.22, 266, 4336, 6, 8},
        {"[[882,98,8]]", "C2", 18.01, 605, -72880, 8, 8},
        {"[[882,50,10]]", "C2", 20.09, 271, 25160, 6, 10},
        {"[[336,20,6]]", "CxR", 12.02, 457.2, -28040, 6, 6},
        {"[[336,14,8]]", "CxR", 15.10, 565.0, -16850, 6, 8},
        {"[[240,8,8]]", "CxR", 14.30, 476.5, -4284, 5, 8},
        {"[[420,10,10]]", "CxR", 17.89, 708.7, -14710, 5, 10},
        {"[[620,20,10]]", "CxR", 16.89, 2178, -172900, 7, 10},
    };
    return rows;
}

HeuristicFit fit_from_row(const TableRow &row) {
    HeuristicFit fit;
    fit.alpha = row.alpha;
    fit.beta = row.beta;
    fit.gamma = row.gamma;
    fit.d = row.d;
    return fit;
}

RatePoint run_memory_experiment(const CxcCode &code, Basis basis, Variant variant, size_t rounds, double p,
                                size_t shots, uint64_t seed, const DecoderConfig &config, size_t workers) {
    if (!(p >= 0.0 && p <= 0.5)) {
        throw std::invalid_argument("physical error rate must lie in [0, 0.5]");
    }
    SimCircuit noisy = annotate_noise(build_memory_experiment(code, {basis, rounds, variant}), {p});
    DetectorErrorModel dem = extract_dem(noisy);
    ShotBatch batch = pauli_frame_sample(noisy, shots, seed, workers);
    BatchDecodeResult decoded = decode_batch(dem, batch, config, workers);

    RatePoint pt;
    pt.code = code_params(code).label();
    pt.family = family_name(code.family);
    pt.basis = basis;
    pt.variant = variant;
    pt.rounds = rounds;
    pt.k = dem.num_observables;
    pt.p = p;
    pt.shots = shots;
    pt.failures = decoded.failures;
    for (size_t f : decoded.failures_per_logical) {
        pt.logical_failures += f;
    }
    finalize_rate_point(pt);
    return pt;
}

namespace {

constexpr const char *kCsvHeader =
    "code,family,basis,variant,d,p,shots,failures,p_log_round,p_log_round_per_k,ci_lo,ci_hi,"
    "k,logical_failures,p_log_linear,p_log_per_logical";

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

}  // namespace

std::string results_csv(const std::vector<RatePoint> &points) {
    std::ostringstream out;
    out << kCsvHeader << '\n' << std::setprecision(10);
    for (const RatePoint &pt : points) {
        out << '"' << pt.code << '"' << ',' << pt.family << ',' << basis_name(pt.basis) << ','
            << variant_name(pt.variant) << ',' << pt.rounds << ',' << pt.p << ',' << pt.shots << ',' << pt.failures
            << ',' << pt.p_log_round << ',' << pt.p_log_round_per_k << ',' << pt.ci_lo << ',' << pt.ci_hi << ','
            << pt.k << ',' << pt.logical_failures << ',' << pt.p_log_linear << ',' << pt.p_log_per_logical << '\n';
    }
    return out.str();
}

std::vector<RatePoint> parse_results_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> header;
    std::vector<RatePoint> out;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        // Labels like "[[240,8,8]]" are quoted because they contain commas.
        std::string code;
        if (!header.empty() && line[0] == '"') {
            size_t close = line.find('"', 1);
            if (close == std::string::npos) {
                throw std::invalid_argument("unterminated quoted field in results CSV");
            }
            code = line.substr(1, close - 1);
            line = "_" + line.substr(close + 1);
        }
        std::vector<std::string> cells = split_csv(line);
        if (header.empty()) {
            header = cells;
            if (header.size() < 12 || header[0] != "code" || header[5] != "p") {
                throw std::invalid_argument("results CSV header is missing required columns");
            }
            continue;
        }
        if (cells.size() != header.size()) {
            throw std::invalid_argument("results CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(header.size()));
        }
        RatePoint pt;
        pt.code = code.empty() ? cells[0] : code;
        try {
            for (size_t i = 1; i < header.size(); i++) {
                const std::string &h = header[i];
                const std::string &v = cells[i];
                if (h == "family") {
                    pt.family = v;
                } else if (h == "basis") {
                    pt.basis = parse_basis(v);
                } else if (h == "variant") {
                    pt.variant = parse_variant(v);
                } else if (h == "d") {
                    pt.rounds = std::stoul(v);
                } else if (h == "p") {
                    pt.p = std::stod(v);
                } else if (h == "shots") {
                    pt.shots = std::stoul(v);
                } else if (h == "failures") {
                    pt.failures = std::stoul(v);
                } else if (h == "p_log_round") {
                    pt.p_log_round = std::stod(v);
                } else if (h == "p_log_round_per_k") {
                    pt.p_log_round_per_k = std::stod(v);
                } else if (h == "ci_lo") {
                    pt.ci_lo = std::stod(v);
                } else if (h == "ci_hi") {
                    pt.ci_hi = std::stod(v);
                } else if (h == "k") {
                    pt.k = std::stoul(v);
                } else if (h == "logical_failures") {
                    pt.logical_failures = std::stoul(v);
                } else if (h == "p_log_linear") {
                    pt.p_log_linear = std::stod(v);
                } else if (h == "p_log_per_logical") {
                    pt.p_log_per_logical = std::stod(v);
                }
            }
        } catch (const std::logic_error &e) {
            throw std::invalid_argument("malformed results CSV value: " + std::string(e.what()));
        }
        if (pt.failures > pt.shots) {
            throw std::invalid_argument("results CSV row has more failures than shots");
        }
        out.push_back(pt);
    }
    if (header.empty()) {
        throw std::invalid_argument("results CSV is empty");
    }
    return out;
}

std::string fit_json(const std::string &code, const HeuristicFit &fit, size_t omega) {
    nlohmann::ordered_json j;
    j["code"] = code;
    j["alpha"] = fit.alpha;
    j["beta"] = fit.beta;
    j["gamma"] = fit.gamma;
    j["omega"] = omega;
    j["d"] = fit.d;
    j["residuals"] = fit.residuals;
    return j.dump(2);
}

}  // namespace cxc
