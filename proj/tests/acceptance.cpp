// Acceptance runner: `acceptance [id...]` runs the named criteria (all when
// none given), prints one PASS/FAIL line each and exits non-zero on any FAIL.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "susyqm/susyqm.hpp"

using namespace susyqm;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream observed;

    void check(bool ok) { pass = pass && ok; }
};

struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> sampled(const Grid& g, const std::function<double(double)>& f) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g[i]);
    return v;
}

void harmonic_spectrum(Outcome& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const Grid g(-10.0, 10.0, 801);
    const auto fam = harmonic_family(1.0);
    const auto h = hamiltonian_matrix(sampled(g, [&](double x) { return fam.v1(x); }), g.spacing(), 1.0, HamiltonianStencil::three_point);
    const auto values = symmetric_eigen(h, false).values;
    const double elapsed = seconds_since(t0);
    out.observed << "E0..E4 =";
    for (unsigned n = 0; n < 5; ++n) {
        const double exact = 4.0 * n;
        // E0 = 0: 1% is taken relative to the level spacing 4a.
        out.check(std::abs(values[n] - exact) <= 0.01 * (n == 0 ? 4.0 : exact));
        out.observed << ' ' << values[n];
    }
    out.check(elapsed < 60.0);
    out.observed << "; jacobi " << elapsed << " s";
}

void swkb_exactness(Outcome& out) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double a : {0.5, 1.0, 2.0}) {
        const auto p = swkb_problem(harmonic_family(a));
        for (unsigned n = 1; n <= 8; ++n) {
            const double exact = 4 * a * n;
            worst = std::max(worst, std::abs(swkb_energy_level(p, n) - exact) / exact);
        }
    }
    const double elapsed = seconds_since(t0);
    out.check(worst <= 1e-6 && elapsed < 1.0);
    out.observed << "max relative error " << worst << "; " << elapsed << " s";
}

void box_ladder(Outcome& out) {
    const auto fam = box_family(pi);
    const Grid g = Grid::inset(0.0, pi, 2001);
    const auto t = schrodinger_tridiagonal(sampled(g, [&](double x) { return fam.v2(x); }), g.spacing());
    const auto values = tridiagonal_eigenvalues(t, 3);
    out.observed << "E(2)_0..2 =";
    for (unsigned n = 0; n < 3; ++n) {
        const double exact = (n + 2.0) * (n + 2.0) - 1.0;
        out.check(std::abs(values[n] - exact) <= 0.02 * exact);
        out.observed << ' ' << values[n] << " (" << exact << ")";
    }
}

void hydrogen_energies(Outcome& out) {
    int mismatches = 0;
    for (int l = 0; l < 4; ++l)
        for (int n = 0; n < 4; ++n)
            for (double lambda : {1.0, 2.5})
                for (double eta : {0.5, 1.0, 3.0}) {
                    const double q = l + n + 1.0;
                    if (hydrogen_energy(l, n, lambda, eta) != -(lambda * lambda) / (4.0 * q * q * eta * eta)) ++mismatches;
                }
    const auto si = PhysicalParams::electron_si();
    const double ev = hydrogen_energy(0, 0, si.lambda_coulomb, si.eta) / electron_volt;
    out.check(mismatches == 0 && std::abs(ev + 13.6) <= 0.1);
    out.observed << "formula mismatches " << mismatches << "; ground state " << ev << " eV";
}

void sech_partner(Outcome& out) {
    const Grid g(-15.0, 15.0, 3001);
    const auto w = SuperpotentialModel::from(g, 1.0, [](double x) { return std::tanh(x); });
    const auto v2 = partner_potential(w).v2;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < g.size(); ++i) worst = std::max(worst, std::abs(v2[i] - 1.0));
    out.check(worst <= 1e-4);

    const auto fam = sech_family(1.0);
    const auto t = schrodinger_tridiagonal(sampled(g, [&](double x) { return fam.v1(x); }), g.spacing());
    const double lowest = tridiagonal_eigenvalue(t, 0);
    const std::size_t below = t.count_below(0.9);
    out.check(std::abs(lowest) <= 5e-3 && below == 1);
    out.observed << "max |V2 - 1| " << worst << "; lowest " << lowest << "; levels below 0.9a^2: " << below;
}

void susy_algebra(Outcome& out) {
    const auto s = build_supersymmetric_system(random_symmetric(30, Distribution::uniform, 50.0, RngSeed{31}));
    const Matrix zero(60);
    const bool nilpotent = s.q * s.q == zero && s.q_dagger * s.q_dagger == zero;
    const bool anticommutator = s.q * s.q_dagger + s.q_dagger * s.q == s.hamiltonian;
    const double ratio = (s.q * s.hamiltonian - s.hamiltonian * s.q).frobenius_norm() / s.hamiltonian.frobenius_norm();
    out.check(nilpotent && anticommutator && ratio <= 1e-10);
    out.observed << "Q^2=0 " << (nilpotent ? "yes" : "no") << "; {Q,Q+}=H " << (anticommutator ? "yes" : "no")
                 << "; |[Q,H]|/|H| " << ratio;
}

void isospectrality(Outcome& out) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto h1 = random_symmetric(50, Distribution::uniform, 50.0, RngSeed{seed});
        const auto a = symmetric_eigen(h1, false).values;
        const auto b = symmetric_eigen(susy_partner_matrix(h1), false).values;
        for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    }
    out.check(worst <= 1e-6);
    out.observed << "max eigenvalue difference over 20 seeds " << worst;
}

void eth_condition(Outcome& out, EthCondition c, double budget) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::size_t> sizes;
    for (std::size_t n = 100; n <= 400; n += 50) sizes.push_back(n);
    for (std::uint64_t seed : {1, 2, 3}) {
        EthSweepOptions o;
        o.condition = c;
        o.seed = RngSeed{seed};
        const auto fit = eth_sweep(sizes, o).fit;
        const bool in_band = c == EthCondition::diagonal ? fit.p >= -0.65 && fit.p <= -0.35 : fit.p <= -1.0;
        out.check(in_band && fit.r_squared > 0.95);
        out.observed << "seed " << seed << ": p " << fit.p << " r2 " << fit.r_squared << "; ";
    }
    const double elapsed = seconds_since(t0);
    out.check(elapsed <= budget);
    out.observed << elapsed << " s";
}

void diagonal_ordering(Outcome& out) {
    auto h = random_symmetric(200, Distribution::uniform, default_eth_scale, RngSeed{1});
    const double before = diag_monotone_fraction(h);
    h = iterate_partner(std::move(h), 20);
    const double after = diag_monotone_fraction(h);
    out.check(after >= 0.95);
    out.observed << "monotone fraction " << before << " -> " << after << " after 20 iterations";
}

void property_suites(Outcome& out) {
    std::stringstream paths(SUSYQM_UNIT_TESTS);
    std::string path;
    int suites = 0;
    while (std::getline(paths, path, '|')) {
        if (path.empty()) continue;
        const std::string cmd = "'" + path + "' --gtest_filter='*Property*' --gtest_brief=1 >/dev/null 2>&1";
        const int raw = std::system(cmd.c_str());
        const bool ok = WIFEXITED(raw) && WEXITSTATUS(raw) == 0;
        out.check(ok);
        ++suites;
        if (!ok) out.observed << "failed: " << path << "; ";
    }
    out.check(suites > 0);
    out.observed << suites << " binaries run";
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {1, "harmonic_discrete_spectrum", harmonic_spectrum},
        {2, "swkb_harmonic_exact", swkb_exactness},
        {3, "box_partner_ladder", box_ladder},
        {4, "hydrogen_energies", hydrogen_energies},
        {5, "sech_partner_constant", sech_partner},
        {6, "susy_algebra", susy_algebra},
        {7, "partner_isospectral", isospectrality},
        {8, "eth_condition1", [](Outcome& o) { eth_condition(o, EthCondition::diagonal, 600.0); }},
        {9, "eth_condition2", [](Outcome& o) { eth_condition(o, EthCondition::offdiagonal, 1200.0); }},
        {10, "diagonal_ordering", diagonal_ordering},
        {11, "property_suites", property_suites},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    int failures = 0;
    for (const auto& c : criteria()) {
        if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
        Outcome out;
        try {
            c.run(out);
        } catch (const std::exception& e) {
            out.pass = false;
            out.observed << " exception: " << e.what();
        }
        if (!out.pass) ++failures;
        std::printf("%s %02d %s: %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.observed.str().c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
