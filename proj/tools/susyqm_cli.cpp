// susyqm: batch front end. Writes CSV/JSON only.
//
// Exit status: 0 success, 1 numerical failure, 2 usage error.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "susyqm/susyqm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace susyqm;

namespace {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Files of one run. Each is written to a temporary name and renamed when
/// complete; on failure everything written so far is removed.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    fs::path resolve(const std::string& name) const {
        fs::path p(name);
        return p.is_absolute() ? p : dir_ / p;
    }

    void write(const fs::path& path, const std::function<void(std::ostream&)>& body) {
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        fs::path tmp = path;
        tmp += ".partial";
        pending_ = tmp;
        {
            std::ofstream os(tmp, std::ios::binary);
            if (!os) throw numerical_error("cannot open " + path.string() + " for writing");
            body(os);
            if (!os) throw numerical_error("write failed for " + path.string());
        }
        fs::rename(tmp, path);
        pending_.reset();
        done_.push_back(path);
    }

    void write_json(const fs::path& path, const json& j) {
        write(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    }

    void discard() noexcept {
        std::error_code ec;
        if (pending_) fs::remove(*pending_, ec);
        for (const auto& p : done_) fs::remove(p, ec);
        done_.clear();
    }

private:
    fs::path dir_;
    std::vector<fs::path> done_;
    std::optional<fs::path> pending_;
};

Grid parse_grid(const std::string& text) {
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) )
        throw usage_error("grid must be min:max:count");
    try {
        return Grid(std::stod(a), std::stod(b), std::stoul(c));
    } catch (const std::invalid_argument&) {
        throw usage_error("grid must be min:max:count");
    }
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
        throw usage_error("sizes must be start:stop:step");
    std::size_t start, stop, step;
    try {
        start = std::stoul(a);
        stop = std::stoul(b);
        step = std::stoul(c);
    } catch (const std::exception&) {
        throw usage_error("sizes must be start:stop:step");
    }
    if (step == 0 || stop < start) throw usage_error("sizes must be ascending with a positive step");
    std::vector<std::size_t> out;
    for (std::size_t n = start; n <= stop; n += step) out.push_back(n);
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw usage_error("expected comma-separated integers: " + text);
        }
    }
    return out;
}

FamilyParams parse_params(const std::vector<std::string>& items) {
    FamilyParams out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw usage_error("parameter must be key=value: " + item);
        try {
            out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw usage_error("parameter value is not a number: " + item);
        }
    }
    return out;
}

json params_json(const FamilyParams& p) {
    json j = json::object();
    for (const auto& [k, v] : p) j[k] = v;
    return j;
}

struct Common {
    double eta = 1.0;
    double lambda = 1.0;
    std::string output;
    PhysicalParams phys() const { return PhysicalParams(eta, lambda); }
};

void add_physics(CLI::App* sub, Common& c) {
    sub->add_option("--eta", c.eta, "η = ħ/√(2m)");
    sub->add_option("--lambda", c.lambda, "Coulomb constant Λ");
}

// ---------------------------------------------------------------------------

struct AnalyticArgs {
    Common common;
    std::string family;
    std::vector<std::string> params;
    unsigned levels = 3;
    std::string grid;
};

void run_analytic(const AnalyticArgs& a, OutputSet& out) {
    const auto phys = a.common.phys();
    const auto params = parse_params(a.params);
    const auto fam = family(a.family, params, phys);
    if (a.levels > fam.bound_states)
        throw numerical_error("family " + fam.name + " has " + std::to_string(fam.bound_states) +
                              " bound state(s), requested " + std::to_string(a.levels));
    const Grid grid = a.grid.empty() ? default_grid(fam, phys) : parse_grid(a.grid);

    std::vector<double> energies, shifted;
    std::vector<SampledFunction> states;
    for (unsigned n = 0; n < a.levels; ++n) {
        shifted.push_back(shape_invariant_energy(fam, n));
        energies.push_back(fam.e0 + shifted.back());
        if (auto s = family_eigenstate(fam, n, grid, phys)) states.push_back(*s);
    }

    const std::string stem = a.common.output.empty() ? "analytic_" + fam.name : a.common.output;
    out.write(out.resolve(stem + "_states.csv"), [&](std::ostream& os) {
        os << "x,w,v1,v2";
        for (std::size_t k = 0; k < states.size(); ++k) os << ",psi_" << k;
        os << '\n';
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = grid[i];
            detail::write_number(os, x);
            for (double v : {fam.w(x), fam.v1(x), fam.v2(x)}) {
                os << ',';
                detail::write_number(os, v);
            }
            for (const auto& s : states) {
                os << ',';
                detail::write_number(os, s[i]);
            }
            os << '\n';
        }
    });
    json j{{"family", fam.name},
           {"params", params_json(params)},
           {"eta", phys.eta},
           {"lambda", phys.lambda_coulomb},
           {"e0", fam.e0},
           {"energies", energies},
           {"shifted_energies", shifted}};
    out.write_json(out.resolve(stem + "_energies.json"), j);
}

// ---------------------------------------------------------------------------

struct PartnerArgs {
    Common common;
    std::string mode = "continuum";
    std::string family = "linear";
    std::vector<std::string> params;
    std::string potential_csv;
    std::string grid;
    double tol = default_partner_tolerance;
};

SampledFunction partner_input(const PartnerArgs& a, const PhysicalParams& phys) {
    if (!a.potential_csv.empty()) {
        std::ifstream is(a.potential_csv);
        if (!is) throw numerical_error("cannot read " + a.potential_csv);
        return read_csv(is);
    }
    if (a.family == "linear") {
        if (!a.params.empty()) throw usage_error("the linear potential takes no parameters");
        const Grid g = a.grid.empty() ? Grid(0.0, 199.0, 200) : parse_grid(a.grid);
        return SampledFunction::from(g, [](double x) { return x; });
    }
    const auto fam = family(a.family, parse_params(a.params), phys);
    const Grid g = a.grid.empty() ? default_grid(fam, phys) : parse_grid(a.grid);
    return SampledFunction::from(g, [&](double x) { return fam.v1(x); });
}

void run_partner(const PartnerArgs& a, OutputSet& out) {
    const auto phys = a.common.phys();
    const auto v = partner_input(a, phys);
    const std::string stem = a.common.output.empty() ? "partner" : a.common.output;

    if (a.mode == "continuum") {
        const auto chain = partner_chain(v, phys.eta, 1);
        const auto& pair = chain.pairs.front();
        out.write(out.resolve(stem + ".csv"), [&](std::ostream& os) {
            os << "x,v1,w,v2\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                detail::write_number(os, v.x(i));
                for (double val : {pair.v1[i], pair.w.w()[i], pair.v2[i]}) {
                    os << ',';
                    detail::write_number(os, val);
                }
                os << '\n';
            }
        });
        out.write_json(out.resolve(stem + ".json"),
                       json{{"mode", "continuum"}, {"ground_energy", chain.ground_energies.front()}});
        return;
    }
    if (a.mode != "matrix") throw usage_error("mode must be continuum or matrix");

    // Unit-spacing matrix picture: H1 = -∂² + diag(v), partner L Lᵀ → Lᵀ L.
    const auto h1 = hamiltonian_matrix(v.values());
    const auto h2 = susy_partner_matrix(h1, a.tol);
    out.write(out.resolve(stem + "_diagonal.csv"), [&](std::ostream& os) {
        os << "i,x,h1,h2\n";
        for (std::size_t i = 0; i < h1.size(); ++i) {
            os << i << ',';
            detail::write_number(os, v.x(i));
            os << ',';
            detail::write_number(os, h1(i, i));
            os << ',';
            detail::write_number(os, h2(i, i));
            os << '\n';
        }
    });
    out.write(out.resolve(stem + "_matrix.csv"), [&](std::ostream& os) { write_matrix_csv(os, h2.matrix()); });
    out.write_json(out.resolve(stem + ".json"),
                   json{{"mode", "matrix"}, {"n", h1.size()}, {"ground_energy", lowest_eigenvalue(h1)}, {"tol", a.tol}});
}

// ---------------------------------------------------------------------------

struct SwkbArgs {
    Common common;
    std::string family = "harmonic";
    std::vector<std::string> params;
    unsigned levels = 5;
};

void run_swkb(const SwkbArgs& a, OutputSet& out) {
    const auto phys = a.common.phys();
    const auto params = parse_params(a.params);
    const auto fam = family(a.family, params, phys);
    const auto problem = swkb_problem(fam);
    std::vector<unsigned> ns;
    std::vector<double> energies;
    for (unsigned n = 1; n <= a.levels; ++n) {
        ns.push_back(n);
        energies.push_back(swkb_energy_level(problem, n));
    }
    json j{{"family", fam.name}, {"params", params_json(params)}, {"eta", phys.eta}, {"levels", ns}, {"energies", energies}};
    if (fam.has_parameter_map() || fam.closed_spectrum) {
        std::vector<double> exact;
        for (unsigned n : ns) exact.push_back(shape_invariant_energy(fam, n));
        j["exact"] = exact;
    }
    const std::string stem = a.common.output.empty() ? "swkb_" + fam.name : a.common.output;
    out.write_json(out.resolve(stem + ".json"), j);
}

// ---------------------------------------------------------------------------

struct MatrixSource {
    std::string dist = "uniform";
    double scale = 50.0;
    std::uint64_t seed = 0;
    std::string generator = "entrywise";
    double tol = default_partner_tolerance;
};

MatrixGenerator parse_generator(const std::string& s) {
    if (s == "entrywise") return MatrixGenerator::entrywise;
    if (s == "spectral") return MatrixGenerator::spectral;
    throw usage_error("generator must be entrywise or spectral");
}

Distribution parse_dist(const std::string& s) {
    if (s == "uniform") return Distribution::uniform;
    if (s == "normal") return Distribution::normal;
    throw usage_error("distribution must be uniform or normal");
}

struct RmtArgs {
    MatrixSource source;
    std::string output;
    std::size_t n = 200;
    int iterations = 20;
    std::string snapshots;
    std::string format = "csv";
};

void run_rmt(const RmtArgs& a, OutputSet& out) {
    if (a.n < 2) throw usage_error("matrix size must be at least 2");
    if (a.iterations < 0) throw usage_error("iterations must be non-negative");
    if (a.format != "csv" && a.format != "json") throw usage_error("format must be csv or json");
    std::vector<int> snaps = a.snapshots.empty() ? std::vector<int>{0, a.iterations} : parse_int_list(a.snapshots);
    for (int s : snaps)
        if (s < 0 || s > a.iterations) throw usage_error("snapshot index outside 0..iterations");
    const Distribution dist = parse_dist(a.source.dist);
    const RngSeed seed{a.source.seed};
    SymmetricMatrix h = parse_generator(a.source.generator) == MatrixGenerator::entrywise
                            ? random_symmetric(a.n, dist, a.source.scale, seed)
                            : random_symmetric_spectral(a.n, dist, a.source.scale, seed);
    const std::string stem = a.output.empty() ? "rmt" : a.output;
    json summary{{"n", a.n}, {"dist", a.source.dist}, {"scale", a.source.scale}, {"seed", a.source.seed},
                 {"generator", a.source.generator}, {"tol", a.source.tol}};
    json stats = json::array();
    for (int k = 0; k <= a.iterations; ++k) {
        if (k > 0) h = susy_partner_matrix(h, a.source.tol);
        if (std::find(snaps.begin(), snaps.end(), k) == snaps.end()) continue;
        const auto path = out.resolve(stem + "_iter" + std::to_string(k) + "." + a.format);
        if (a.format == "csv")
            out.write(path, [&](std::ostream& os) { write_matrix_csv(os, h.matrix()); });
        else
            out.write(path, [&](std::ostream& os) { write_matrix_json(os, h.matrix()); });
        stats.push_back(json{{"iteration", k},
                             {"diag_spacing", diag_spacing_estimate(h)},
                             {"offdiag_mean_abs", offdiag_mean_abs(h)},
                             {"diag_monotone_fraction", diag_monotone_fraction(h)}});
    }
    summary["snapshots"] = stats;
    out.write_json(out.resolve(stem + ".json"), summary);
}

// ---------------------------------------------------------------------------

struct EthArgs {
    MatrixSource source;
    std::string output;
    int condition = 1;
    std::string sizes = "100:400:50";
    int iterations = -1;
};

void run_eth(const EthArgs& a, OutputSet& out) {
    EthSweepOptions opts;
    if (a.condition != 1 && a.condition != 2) throw usage_error("condition must be 1 or 2");
    opts.condition = parse_condition(a.condition);
    opts.dist = parse_dist(a.source.dist);
    opts.scale = a.source.scale;
    opts.seed = RngSeed{a.source.seed};
    opts.generator = parse_generator(a.source.generator);
    opts.tol = a.source.tol;
    if (a.iterations >= 0) opts.iterations = a.iterations;
    const auto result = eth_sweep(parse_sizes(a.sizes), opts);
    const std::string stem = a.output.empty() ? "eth_condition" + std::to_string(a.condition) : a.output;
    out.write(out.resolve(stem + "_sweep.csv"), [&](std::ostream& os) { write_sweep_csv(os, result); });
    out.write_json(out.resolve(stem + "_fit.json"), fit_to_json(result.fit, result.condition));
}

void add_source(CLI::App* sub, MatrixSource& s, double default_scale) {
    s.scale = default_scale;
    sub->add_option("--dist", s.dist, "entry distribution: uniform|normal");
    sub->add_option("--scale", s.scale, "about 95% of entries fall in [-scale, scale]");
    sub->add_option("--seed", s.seed, "64-bit RNG seed");
    sub->add_option("--generator", s.generator, "entrywise|spectral (Q D Qᵀ)");
    sub->add_option("--tol", s.tol, "shift above the ground energy before factorising")
        ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Supersymmetric quantum mechanics workbench"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    std::string output_dir;
    if (const char* env = std::getenv("SUSYQM_OUTPUT_DIR")) output_dir = env;
    if (output_dir.empty()) output_dir = ".";
    app.add_option("--output-dir", output_dir, "directory for relative output names (env SUSYQM_OUTPUT_DIR)");

    AnalyticArgs analytic;
    auto* s_analytic = app.add_subcommand("analytic", "closed-form states and energies of a family");
    s_analytic->add_option("--family", analytic.family,
                           "harmonic|box|sech|inverse_square|hydrogen_radial|constant")->required();
    s_analytic->add_option("--param", analytic.params, "family parameter key=value (repeatable)");
    s_analytic->add_option("--levels", analytic.levels, "number of levels");
    s_analytic->add_option("--grid", analytic.grid, "min:max:count (default depends on the family)");
    s_analytic->add_option("--output", analytic.common.output, "output stem");
    add_physics(s_analytic, analytic.common);

    PartnerArgs partner;
    auto* s_partner = app.add_subcommand("partner", "partner potential of sampled V");
    s_partner->add_option("--mode", partner.mode, "continuum (three-point ground state) | matrix (Cholesky map)");
    s_partner->add_option("--family", partner.family, "linear (V = x) or a family name whose V1 is sampled");
    s_partner->add_option("--param", partner.params, "family parameter key=value (repeatable)");
    s_partner->add_option("--potential-csv", partner.potential_csv, "x,value samples of V (overrides --family)");
    s_partner->add_option("--grid", partner.grid, "min:max:count");
    s_partner->add_option("--tol", partner.tol, "matrix mode shift")->check(CLI::PositiveNumber);
    s_partner->add_option("--output", partner.common.output, "output stem");
    add_physics(s_partner, partner.common);

    SwkbArgs swkb;
    auto* s_swkb = app.add_subcommand("swkb", "SWKB energy levels 1..N");
    s_swkb->add_option("--family", swkb.family, "harmonic|sech|hydrogen_radial|box|...");
    s_swkb->add_option("--param", swkb.params, "family parameter key=value (repeatable)");
    s_swkb->add_option("--levels", swkb.levels, "highest level N");
    s_swkb->add_option("--output", swkb.common.output, "output stem");
    add_physics(s_swkb, swkb.common);

    RmtArgs rmt;
    auto* s_rmt = app.add_subcommand("rmt-iterate", "iterate the partner map on a random symmetric matrix");
    s_rmt->add_option("--n", rmt.n, "matrix size");
    s_rmt->add_option("--iterations", rmt.iterations, "number of partner iterations");
    s_rmt->add_option("--snapshots", rmt.snapshots, "comma-separated iteration indices to write (default 0 and last)");
    s_rmt->add_option("--format", rmt.format, "csv|json");
    s_rmt->add_option("--output", rmt.output, "output stem");
    add_source(s_rmt, rmt.source, 50.0);

    EthArgs eth;
    auto* s_eth = app.add_subcommand("eth-verify", "size sweep and power-law fit of an ETH statistic");
    s_eth->add_option("--condition", eth.condition, "1 (diagonal spacing) or 2 (off-diagonal mean)");
    s_eth->add_option("--sizes", eth.sizes, "start:stop:step, inclusive");
    s_eth->add_option("--iterations", eth.iterations, "override the iteration rule (-1: 5 or n/20)");
    s_eth->add_option("--output", eth.output, "output stem");
    add_source(s_eth, eth.source, default_eth_scale);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << '\n' << app.help();
        return 2;
    }

    OutputSet out{fs::path(output_dir)};
    std::string module = "cli";
    try {
        if (s_analytic->parsed()) {
            module = "analytic";
            run_analytic(analytic, out);
        } else if (s_partner->parsed()) {
            module = "partner";
            run_partner(partner, out);
        } else if (s_swkb->parsed()) {
            module = "swkb";
            run_swkb(swkb, out);
        } else if (s_rmt->parsed()) {
            module = "rmt-iterate";
            run_rmt(rmt, out);
        } else if (s_eth->parsed()) {
            module = "eth-verify";
            run_eth(eth, out);
        }
    } catch (const usage_error& e) {
        out.discard();
        std::cerr << "error: usage: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        out.discard();
        std::cerr << "error: " << module << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}
