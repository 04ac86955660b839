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

#include "cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cxc/circuit.h"
#include "cxc/cxc_code.h"
#include "cxc/cyclic_codes.h"
#include "cxc/decoder.h"
#include "cxc/estimate.h"
#include "cxc/noise_sim.h"
#include "json.hpp"

namespace cxc::cli {

using nlohmann::ordered_json;

uint64_t fnv1a(const std::string &text) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << v;
    return s.str();
}

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    uint64_t seed = 1;
    size_t workers = 1;
    std::string out = ".";
    std::string config;

    // search
    size_t n_max = 40;
    size_t w_min = 2;
    size_t w_max = 5;
    uint64_t codeword_cap = kDefaultCodewordCap;

    // build
    std::string family = "cxr";
    std::string seed_a;
    std::string seed_b;

    // circuit / simulate
    std::string code;
    std::string catalog;
    std::string variant = "packed";
    size_t rounds = 1;
    std::string format = "text";
    std::string basis = "z";
    std::vector<double> p_list;
    size_t shots = 10000;
    DecoderConfig decoder;

    // fit
    std::string results;
    size_t d = 0;
    size_t omega = 0;
};

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot read " + path);
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string &dir, const std::string &name, const std::string &content) {
    std::filesystem::create_directories(dir);
    std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot write " + path);
    }
    out << content;
}

// "15:0,1,4" -> CyclicPoly(15, {0, 1, 4})
CyclicPoly parse_seed(const std::string &text) {
    size_t colon = text.find(':');
    if (colon == std::string::npos) {
        throw UsageError("seed polynomial must look like n:s0,s1,... (got '" + text + "')");
    }
    try {
        uint32_t n = static_cast<uint32_t>(std::stoul(text.substr(0, colon)));
        std::vector<uint32_t> support;
        std::stringstream list(text.substr(colon + 1));
        std::string item;
        while (std::getline(list, item, ',')) {
            support.push_back(static_cast<uint32_t>(std::stoul(item)));
        }
        return CyclicPoly(n, support);
    } catch (const std::logic_error &e) {
        throw UsageError("bad seed polynomial '" + text + "': " + e.what());
    }
}

struct NamedCode {
    const char *label;
    Family family;
    uint32_t n;
    std::vector<uint32_t> support;
};

const std::vector<NamedCode> &named_codes() {
    static const std::vector<NamedCode> codes = {
        {"[[450,32,8]]", Family::C2, 15, {0, 1, 4}},      {"[[882,98,8]]", Family::C2, 21, {0, 1, 3, 8}},
        {"[[882,50,10]]", Family::C2, 21, {0, 1, 5}},     {"[[336,20,6]]", Family::CxR, 28, {0, 2, 4, 10}},
        {"[[336,14,8]]", Family::CxR, 21, {0, 1, 3, 8}},  {"[[240,8,8]]", Family::CxR, 15, {0, 1, 4}},
        {"[[420,10,10]]", Family::CxR, 21, {0, 1, 5}},    {"[[620,20,10]]", Family::CxR, 31, {0, 1, 2, 6, 27}},
    };
    return codes;
}

std::vector<CatalogEntry> read_catalog(const std::string &path) {
    nlohmann::json j = nlohmann::json::parse(slurp(path));
    if (j.is_object() && j.contains("codes")) {
        j = j["codes"];
    }
    return catalog_from_json(j.dump());
}

// toric:<d>, a reference label such as [[240,8,8]], c2:<seed>, cxr:<seed>,
// cxc:<seed>/<seed>, or a label from --catalog.
CxcCode resolve_code(const std::string &id, const std::string &catalog) {
    if (!catalog.empty()) {
        for (const CatalogEntry &e : read_catalog(catalog)) {
            if (e.label() == id) {
                return build_from_entry(e);
            }
        }
    }
    for (const NamedCode &c : named_codes()) {
        if (id == c.label) {
            CyclicPoly poly(c.n, c.support);
            return c.family == Family::C2 ? build_c2(poly) : build_cxr(poly);
        }
    }
    auto rest = [&](size_t prefix) { return id.substr(prefix); };
    if (id.rfind("toric:", 0) == 0) {
        uint32_t d = static_cast<uint32_t>(std::stoul(rest(6)));
        return build_cxc(CyclicPoly(d, {0, 1}), CyclicPoly(d, {0, 1}));
    }
    if (id.rfind("c2:", 0) == 0) {
        return build_c2(parse_seed(rest(3)));
    }
    if (id.rfind("cxr:", 0) == 0) {
        return build_cxr(parse_seed(rest(4)));
    }
    if (id.rfind("cxc:", 0) == 0) {
        std::string body = rest(4);
        size_t slash = body.find('/');
        if (slash == std::string::npos) {
            throw UsageError("cxc code id must look like cxc:n:support/n:support");
        }
        return build_cxc(parse_seed(body.substr(0, slash)), parse_seed(body.substr(slash + 1)));
    }
    throw std::invalid_argument("unknown code id '" + id + "'");
}

std::string config_header(const ordered_json &config) {
    std::string dump = config.dump();
    return "# config " + hex64(fnv1a(dump)) + " " + dump + "\n";
}

ordered_json wrap_json(const ordered_json &config, const char *key, const ordered_json &payload) {
    ordered_json j;
    j["config_hash"] = hex64(fnv1a(config.dump()));
    j["config"] = config;
    j[key] = payload;
    return j;
}

std::string json_scalar(const nlohmann::json &v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

// Keys name long options (underscores for dashes); "decoder" takes a decoder
// config object. Values given in the file win over command-line flags.
void apply_config(const std::string &path, CLI::App &app, CLI::App &sub, Options &opt) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(slurp(path));
    } catch (const nlohmann::json::exception &e) {
        throw UsageError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) {
        throw UsageError("config file must hold a JSON object");
    }
    for (const auto &[key, value] : j.items()) {
        if (key == "decoder") {
            opt.decoder = DecoderConfig::from_json(value.dump());
            continue;
        }
        std::string name = "--" + key;
        std::replace(name.begin(), name.end(), '_', '-');
        CLI::Option *o = sub.get_option_no_throw(name);
        if (!o) {
            o = app.get_option_no_throw(name);
        }
        if (!o || name == "--config") {
            throw UsageError("unknown config key '" + key + "'");
        }
        o->clear();
        if (value.is_array()) {
            for (const auto &item : value) {
                o->add_result(json_scalar(item));
            }
        } else {
            o->add_result(json_scalar(value));
        }
        o->run_callback();
    }
}

int cmd_search(const Options &o, std::ostream &out) {
    if (o.w_min < 2 || o.w_min > o.w_max || o.n_max < 2) {
        throw UsageError("search needs 2 <= w_min <= w_max and n_max >= 2");
    }
    SearchConfig cfg;
    cfg.n_max = o.n_max;
    cfg.w_min = o.w_min;
    cfg.w_max = o.w_max;
    cfg.codeword_cap = o.codeword_cap;
    cfg.workers = o.workers;
    SearchResult res = enumerate_cyclic_codes(cfg);

    ordered_json config = {{"command", "search"}, {"n_max", o.n_max}, {"w_min", o.w_min}, {"w_max", o.w_max},
                           {"codeword_cap", o.codeword_cap}};
    write_file(o.out, "search_tables.csv", config_header(config) + tables_to_csv(res.tables));
    ordered_json codes = ordered_json::array();
    for (const BestRateTable &t : res.tables) {
        for (const auto &[d, code] : t.entries) {
            codes.push_back({{"w", t.weight}, {"n", code.n}, {"k", code.k}, {"d", code.d},
                             {"support", code.poly.support()}});
        }
    }
    write_file(o.out, "search_codes.json", wrap_json(config, "codes", codes).dump(2) + "\n");
    out << "candidates " << res.candidates_evaluated << ", accepted " << res.accepted.size() << ", skipped "
        << res.skipped.size() << "\n";
    for (const BestRateTable &t : res.tables) {
        out << "w=" << t.weight << ":";
        for (const auto &[d, code] : t.entries) {
            out << " " << code.label();
        }
        out << "\n";
    }
    return kOk;
}

int cmd_build(const Options &o, std::ostream &out) {
    std::string name = o.family;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    Family family = name == "c2" ? Family::C2 : name == "cxr" ? Family::CxR : Family::CxC;
    if (name != "c2" && name != "cxr" && name != "cxc") {
        throw UsageError("family must be cxc, c2 or cxr");
    }
    if (o.seed_a.empty() || (family == Family::CxC) != !o.seed_b.empty()) {
        throw UsageError("build needs --seed-a, plus --seed-b exactly when the family is cxc");
    }
    CyclicPoly a = parse_seed(o.seed_a);
    CxcCode code = family == Family::C2    ? build_c2(a)
                   : family == Family::CxR ? build_cxr(a, o.codeword_cap)
                                           : build_cxc(a, parse_seed(o.seed_b));
    CatalogEntry entry = catalog_entry(code);
    ordered_json config = {{"command", "build"}, {"family", family_name(family)}, {"seed_a", o.seed_a},
                           {"seed_b", o.seed_b}};
    ordered_json codes = ordered_json::parse(catalog_to_json({entry}));
    write_file(o.out, "code.json", wrap_json(config, "codes", codes).dump(2) + "\n");
    out << entry.label() << " omega=" << entry.omega << " family=" << family_name(family) << "\n";
    return kOk;
}

Variant variant_of(const Options &o) {
    try {
        return parse_variant(o.variant);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
}

Basis basis_of(const Options &o) {
    try {
        return parse_basis(o.basis);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
}

int cmd_circuit(const Options &o, std::ostream &out) {
    if (o.format != "text" && o.format != "stim") {
        throw UsageError("format must be text or stim");
    }
    if (o.rounds == 0) {
        throw UsageError("rounds must be at least 1");
    }
    Variant variant = variant_of(o);
    CxcCode code = resolve_code(o.code, o.catalog);
    Circuit circuit = gen_circuit(code, o.rounds, variant);
    ordered_json config = {{"command", "circuit"}, {"code", o.code},         {"variant", variant_name(variant)},
                           {"rounds", o.rounds},   {"format", o.format}};
    std::string body;
    if (o.format == "text") {
        body = emit_text(circuit);
    } else {
        config["basis"] = basis_name(basis_of(o));
        config["p"] = o.p_list.empty() ? 0.0 : o.p_list.front();
        SimCircuit sim = build_memory_experiment(code, circuit, basis_of(o));
        body = to_stim(annotate_noise(sim, {config["p"].get<double>()}));
    }
    write_file(o.out, o.format == "text" ? "circuit.txt" : "circuit.stim", config_header(config) + body);
    out << code_params(code).label() << " " << variant_name(variant) << " rounds=" << o.rounds
        << " layers=" << circuit_depth(circuit) << "\n";
    return kOk;
}

int cmd_simulate(const Options &o, std::ostream &out) {
    if (o.rounds == 0 || o.p_list.empty()) {
        throw UsageError("simulate needs rounds >= 1 and at least one --p value");
    }
    Variant variant = variant_of(o);
    Basis basis = basis_of(o);
    CxcCode code = resolve_code(o.code, o.catalog);
    ordered_json config = {{"command", "simulate"},
                           {"code", o.code},
                           {"basis", basis_name(basis)},
                           {"variant", variant_name(variant)},
                           {"rounds", o.rounds},
                           {"p", o.p_list},
                           {"shots", o.shots},
                           {"seed", o.seed},
                           {"decoder", ordered_json::parse(o.decoder.to_json())}};
    std::vector<RatePoint> points;
    for (size_t i = 0; i < o.p_list.size(); i++) {
        // Each grid point gets its own stream derived from the master seed.
        uint64_t seed = o.seed + 0x9E3779B97F4A7C15ULL * (i + 1);
        points.push_back(
            run_memory_experiment(code, basis, variant, o.rounds, o.p_list[i], o.shots, seed, o.decoder, o.workers));
        const RatePoint &pt = points.back();
        out << "p=" << pt.p << " failures=" << pt.failures << "/" << pt.shots << " p_log_round=" << pt.p_log_round
            << "\n";
    }
    write_file(o.out, "results.csv", config_header(config) + results_csv(points));
    return kOk;
}

int cmd_fit(const Options &o, std::ostream &out) {
    if (o.results.empty()) {
        throw UsageError("fit needs --results");
    }
    std::vector<RatePoint> points = parse_results_csv(slurp(o.results));
    if (points.empty()) {
        throw std::invalid_argument("results file holds no rows");
    }
    size_t d = o.d;
    if (d == 0) {
        throw UsageError("fit needs --d (the code distance)");
    }
    std::string label = o.code.empty() ? points.front().code : o.code;
    size_t omega = o.omega;
    for (const TableRow &row : reference_fits()) {
        if (omega == 0 && row.code == label) {
            omega = row.omega;
        }
    }
    HeuristicFit fit = fit_heuristic(points, d);
    ordered_json config = {{"command", "fit"}, {"results_hash", hex64(fnv1a(slurp(o.results)))}, {"d", d},
                           {"code", label}};
    ordered_json payload = ordered_json::parse(fit_json(label, fit, omega));
    write_file(o.out, "fit.json", wrap_json(config, "fit", payload).dump(2) + "\n");
    out << label << " alpha=" << fit.alpha << " beta=" << fit.beta << " gamma=" << fit.gamma << "\n";
    return kOk;
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"CxC quantum LDPC code construction, circuits and memory experiments", "cxc"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--seed", o.seed, "Master random seed");
    app.add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", o.out, "Output directory");
    app.add_option("--config", o.config, "JSON file overriding flags");

    CLI::App *search = app.add_subcommand("search", "Exhaustive cyclic-code search");
    search->add_option("--n-max", o.n_max, "Largest code length");
    search->add_option("--w-min", o.w_min, "Smallest generator weight");
    search->add_option("--w-max", o.w_max, "Largest generator weight");
    search->add_option("--codeword-cap", o.codeword_cap, "Enumeration cap per distance computation");

    CLI::App *build = app.add_subcommand("build", "Build a CxC, C2 or CxR code");
    build->add_option("--family", o.family, "cxc, c2 or cxr");
    build->add_option("--seed-a", o.seed_a, "First seed polynomial n:s0,s1,...");
    build->add_option("--seed-b", o.seed_b, "Second seed polynomial (cxc only)");
    build->add_option("--codeword-cap", o.codeword_cap, "Enumeration cap for the seed distance");

    CLI::App *circuit = app.add_subcommand("circuit", "Emit a syndrome-extraction circuit");
    CLI::App *simulate = app.add_subcommand("simulate", "Run memory experiments");
    for (CLI::App *sub : {circuit, simulate}) {
        sub->add_option("--code", o.code, "toric:<d>, a reference label, c2:/cxr:/cxc: seeds")->required();
        sub->add_option("--catalog", o.catalog, "Catalog JSON with extra codes");
        sub->add_option("--variant", o.variant, "packed or modular");
        sub->add_option("--rounds", o.rounds, "Syndrome rounds d");
        sub->add_option("--basis", o.basis, "Memory basis, x or z");
        sub->add_option("--p", o.p_list, "Physical error rates")->delimiter(',');
    }
    circuit->add_option("--format", o.format, "text or stim");
    simulate->add_option("--shots", o.shots, "Shots per error rate");
    simulate->add_option("--max-iter", o.decoder.max_iter, "BP iteration limit");
    simulate->add_option("--osd-order", o.decoder.osd_order, "OSD order");
    simulate->add_flag("--force-osd", o.decoder.force_osd, "Run OSD even when BP converges");

    CLI::App *fitcmd = app.add_subcommand("fit", "Fit the logical error rate heuristic");
    fitcmd->add_option("--results", o.results, "Results CSV from simulate");
    fitcmd->add_option("--d", o.d, "Code distance");
    fitcmd->add_option("--code", o.code, "Label for the output");
    fitcmd->add_option("--omega", o.omega, "Stabilizer weight for the output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    CLI::App *sub = app.get_subcommands().front();
    try {
        if (!o.config.empty()) {
            apply_config(o.config, app, *sub, o);
        }
        if (sub == search) {
            return cmd_search(o, out);
        }
        if (sub == build) {
            return cmd_build(o, out);
        }
        if (sub == circuit) {
            return cmd_circuit(o, out);
        }
        if (sub == simulate) {
            return cmd_simulate(o, out);
        }
        return cmd_fit(o, out);
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ResourceCapExceeded &e) {
        err << "error: resource cap exceeded: " << e.what() << "\n";
        return kCapExceeded;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
}

}  // namespace cxc::cli
