// Command-line front end: orchestrates the experiment modules and emits
// machine-readable CSV/JSON. Exit codes: 0 success, 2 usage/config error,
// 3 runtime guard (blow-up, non-convergence).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hnls/estimates_probe.hpp"
#include "hnls/lattice_resonance.hpp"
#include "hnls/normal_form.hpp"
#include "hnls/solver.hpp"
#include "hnls/spectral_field.hpp"

namespace {

constexpr const char* kVersion = "hnls 1.0.0 (equation-map v1)";

int g_threads = 1;  // accepted cap; module evaluation is currently serial

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CLI::ValidationError("--init", "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& out, const std::string& payload) {
    if (out == "-") {
        std::fwrite(payload.data(), 1, payload.size(), stdout);
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out);
    f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Apply the JSON config section for `cmd`: any known key whose flag was not
// given on the command line overrides the option default; unknown keys are
// usage errors. Flat per-command sections.
void apply_config(CLI::App* cmd, const std::string& config_path) {
    if (config_path.empty()) return;
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(read_file(config_path));
    } catch (const std::exception& e) {
        throw CLI::ValidationError("--config", e.what());
    }
    if (!cfg.is_object()) throw CLI::ValidationError("--config", "expected a JSON object");
    for (const auto& [section, _] : cfg.items()) {
        bool known = section == cmd->get_name();
        for (const CLI::App* sub : cmd->get_parent()->get_subcommands({}))
            known = known || section == sub->get_name();
        if (!known) throw CLI::ValidationError("--config", "unknown section: " + section);
    }
    if (!cfg.contains(cmd->get_name())) return;
    const auto& section = cfg[cmd->get_name()];
    if (!section.is_object())
        throw CLI::ValidationError("--config", "section must be an object");
    for (const auto& [key, value] : section.items()) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (!opt) throw CLI::ValidationError("--config", "unknown key: " + key);
        if (opt->count() > 0) continue;  // command line wins
        std::string text = value.is_string() ? value.get<std::string>() : value.dump();
        opt->add_result(text);
        opt->run_callback();
    }
}

hnls::ModulusSign parse_sign(const std::string& s) {
    if (s == "hyperbolic") return hnls::ModulusSign::Hyperbolic;
    if (s == "elliptic") return hnls::ModulusSign::Elliptic;
    throw CLI::ValidationError("--sign", "expected hyperbolic or elliptic");
}

// ---------------------------------------------------------------- count ----
struct CountArgs {
    std::string sign = "hyperbolic";
    std::int64_t radius = 0;
    double theta = 0.25;
    std::int64_t samples = 1000;
    std::uint64_t seed = 0;
    std::string out = "-";
};

int run_count(const CountArgs& a) {
    const auto rep = hnls::empirical_count_constant(parse_sign(a.sign), a.theta,
                                                    a.radius, a.samples, a.seed);
    write_output(a.out, rep.to_json() + "\n");
    return 0;
}

// ------------------------------------------------------------- simulate ----
struct SimArgs {
    std::string init;
    std::int64_t radius = 8;
    double dt = 1e-3;
    double T = 1.0;
    int record_every = 1;
    std::string out = "-";
};

int run_simulate(const SimArgs& a) {
    hnls::SpectralField u0(0);
    try {
        u0 = hnls::SpectralField::from_json(read_file(a.init), a.radius);
    } catch (const CLI::Error&) {
        throw;
    } catch (const std::exception& e) {
        std::cerr << "simulate: bad init field: " << e.what() << "\n";
        return 2;
    }
    hnls::SimConfig cfg;
    cfg.radius = a.radius;
    cfg.dt = a.dt;
    cfg.T = a.T;
    cfg.record_every = a.record_every;
    const auto res = hnls::integrate(u0, cfg);

    std::string payload;
    for (std::size_t i = 0; i < res.traj.times.size(); ++i) {
        nlohmann::ordered_json rec;
        rec["t"] = res.traj.times[i];
        rec["field_ref"] = "step-" + std::to_string(i);
        rec["mass"] = res.conserved.mass[i];
        if (res.conserved.hamiltonian_enabled)
            rec["hamiltonian"] = res.conserved.hamiltonian[i];
        rec["fl_norms"] = {{"0,2", hnls::fl_norm(res.traj.fields[i], {0.0, 2.0})},
                           {"1,2", hnls::fl_norm(res.traj.fields[i], {1.0, 2.0})}};
        rec["field"] = nlohmann::ordered_json::parse(res.traj.fields[i].to_json());
        payload += rec.dump() + "\n";
    }
    if (res.traj.blew_up) {
        nlohmann::ordered_json rec;
        rec["blow_up"] = true;
        rec["t"] = res.traj.blowup_time;
        payload += rec.dump() + "\n";
        write_output(a.out, payload);
        return 3;
    }
    write_output(a.out, payload);
    return 0;
}

// ----------------------------------------------------------- nf-compare ----
struct NfArgs {
    std::string init;
    std::int64_t radius = 4;
    double T = 0.1;
    int steps = 100;
    int Jmax = 3;
    double K = 0.0;  // 0 = derive from data
    double p = 2.0;
    double s = 1.0;
    std::string out = "-";
};

int run_nf_compare(const NfArgs& a) {
    if (a.Jmax < 2) {
        std::cerr << "nf-compare: --Jmax must be >= 2\n";
        return 2;
    }
    hnls::SpectralField u0(0);
    try {
        u0 = hnls::SpectralField::from_json(read_file(a.init), a.radius);
    } catch (const CLI::Error&) {
        throw;
    } catch (const std::exception& e) {
        std::cerr << "nf-compare: bad init field: " << e.what() << "\n";
        return 2;
    }
    hnls::NormalFormParams prm;
    prm.radius = a.radius;
    prm.J_max = a.Jmax;
    prm.p = a.p;
    prm.s = a.s;
    prm.K = a.K > 0 ? a.K : hnls::default_K(u0, a.s, a.p);

    const auto nf = hnls::nf_solve(u0, a.T, a.steps, prm);
    hnls::SimConfig cfg;
    cfg.radius = a.radius;
    cfg.dt = a.T / (10.0 * a.steps);
    cfg.T = a.T;
    cfg.record_every = 10;
    const auto direct = hnls::integrate(u0, cfg);

    nlohmann::ordered_json rep;
    double sup = 0.0;
    auto& dist = rep["distances"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < nf.times.size() && i < direct.traj.fields.size(); ++i) {
        double d = 0.0;
        {
            hnls::SpectralField diff(a.radius);
            for (const auto& [n, c] : nf.fields[i].data()) diff.add(n, c);
            for (const auto& [n, c] : direct.traj.fields[i].data()) diff.add(n, -c);
            d = hnls::fl_norm(diff, {a.s, a.p});
        }
        sup = std::max(sup, d);
        dist.push_back({{"t", nf.times[i]}, {"fl_distance", d}});
    }
    rep["sup_distance"] = sup;
    rep["convergence"] = nlohmann::ordered_json::parse(nf.report.to_json(prm));
    write_output(a.out, rep.dump(2) + "\n");
    return nf.report.converged ? 0 : 3;
}

// -------------------------------------------------------------- illpose ----
struct IllArgs {
    double s = 0.0;
    double p = 2.0;
    double t = 0.5;
    std::vector<int> N;
    std::string out = "-";
};

int run_illpose(const IllArgs& a) {
    if (a.N.size() < 3) {
        std::cerr << "illpose: need at least 3 values of N\n";
        return 2;
    }
    if (a.t == 0.0) {
        std::cerr << "illpose: t = 0 is degenerate\n";
        return 2;
    }
    const auto rep = hnls::illposedness_slope(a.s, a.p, a.t, a.N);
    std::string payload = "N,norm\n";
    for (const auto& [N, nrm] : rep.norms)
        payload += std::to_string(N) + "," + fmt(nrm) + "\n";
    payload += "slope," + fmt(rep.slope) + "\n";
    payload += "expected," + fmt(rep.expected) + "\n";
    write_output(a.out, payload);
    return 0;
}

// ---------------------------------------------------------------- probe ----
struct ProbeArgs {
    double p = 2.0;
    std::vector<double> s_list;
    std::vector<std::int64_t> radii;
    std::int64_t sigma0_range = 64;
    double epsilon = 0.05;
    std::string sign = "hyperbolic";
    int msum_j = 0;  // nonzero: emit the modulation-sum CSV instead
    double msum_K = 1.0;
    std::int64_t msum_alpha_radius = 100000;
    std::string out = "-";
};

int run_probe(const ProbeArgs& a) {
    if (a.msum_j > 0) {
        const double S = hnls::modulation_sum_S(a.msum_j, a.msum_K, a.p, a.msum_alpha_radius);
        const double bound = hnls::modulation_sum_bound(a.msum_j, a.msum_K, a.p);
        std::string payload = "j,K,p,alpha_radius,S_value,bound\n";
        payload += std::to_string(a.msum_j) + "," + fmt(a.msum_K) + "," + fmt(a.p) + "," +
                   std::to_string(a.msum_alpha_radius) + "," + fmt(S) + "," + fmt(bound) + "\n";
        write_output(a.out, payload);
        return 0;
    }
    if (a.s_list.empty() || a.radii.empty()) {
        std::cerr << "probe: --s-list and --radii are required\n";
        return 2;
    }
    const auto rows = hnls::threshold_scan(a.p, a.s_list, a.radii, a.sigma0_range,
                                           a.epsilon, parse_sign(a.sign));
    write_output(a.out, hnls::threshold_scan_csv(rows));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HNLS computational laboratory"};
    app.set_version_flag("--version", kVersion);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flat per-command sections)");
    app.add_option("--threads", g_threads, "worker count cap")->check(CLI::PositiveNumber);
    app.require_subcommand(0, 1);

    CountArgs ca;
    auto* count = app.add_subcommand("count", "resonance counting-constant sweep");
    count->add_option("--sign", ca.sign, "hyperbolic|elliptic");
    count->add_option("--radius", ca.radius);
    count->add_option("--theta", ca.theta);
    count->add_option("--samples", ca.samples);
    count->add_option("--seed", ca.seed);
    count->add_option("--out", ca.out);

    SimArgs sa;
    auto* sim = app.add_subcommand("simulate", "direct Galerkin integration");
    sim->add_option("--init", sa.init);
    sim->add_option("--radius", sa.radius);
    sim->add_option("--dt", sa.dt);
    sim->add_option("--T", sa.T);
    sim->add_option("--record-every", sa.record_every);
    sim->add_option("--out", sa.out);

    NfArgs na;
    auto* nfc = app.add_subcommand("nf-compare", "normal form vs direct solver");
    nfc->add_option("--init", na.init);
    nfc->add_option("--radius", na.radius);
    nfc->add_option("--T", na.T);
    nfc->add_option("--steps", na.steps);
    nfc->add_option("--Jmax", na.Jmax);
    nfc->add_option("--K", na.K);
    nfc->add_option("--p", na.p);
    nfc->add_option("--s", na.s);
    nfc->add_option("--out", na.out);

    IllArgs ia;
    auto* ill = app.add_subcommand("illpose", "Picard-iterate growth slope");
    ill->add_option("--s", ia.s);
    ill->add_option("--p", ia.p);
    ill->add_option("--t", ia.t);
    ill->add_option("--N", ia.N)->delimiter(',');
    ill->add_option("--out", ia.out);

    ProbeArgs pa;
    auto* probe = app.add_subcommand("probe", "kernel threshold scan / modulation sums");
    probe->add_option("--p", pa.p);
    probe->add_option("--s-list", pa.s_list)->delimiter(',');
    probe->add_option("--radii", pa.radii)->delimiter(',');
    probe->add_option("--sigma0-range", pa.sigma0_range);
    probe->add_option("--epsilon", pa.epsilon);
    probe->add_option("--sign", pa.sign);
    probe->add_option("--msum-j", pa.msum_j);
    probe->add_option("--msum-K", pa.msum_K);
    probe->add_option("--msum-alpha-radius", pa.msum_alpha_radius);
    probe->add_option("--out", pa.out);

    try {
        app.parse(argc, argv);
        if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return 2;
        }
        CLI::App* chosen = app.get_subcommands().front();
        apply_config(chosen, config_path);
        // requiredness is checked after the config merge so either source counts
        const auto need = [&](CLI::App* c, const char* name) {
            if (c->get_option(name)->count() > 0) return true;
            std::cerr << c->get_name() << ": " << name << " is required\n";
            return false;
        };
        if (chosen == count && !need(count, "--radius")) return 2;
        if (chosen == sim && (!need(sim, "--init") || !need(sim, "--radius"))) return 2;
        if (chosen == nfc && !need(nfc, "--init")) return 2;
        if (chosen == count) return run_count(ca);
        if (chosen == sim) return run_simulate(sa);
        if (chosen == nfc) return run_nf_compare(na);
        if (chosen == ill) return run_illpose(ia);
        if (chosen == probe) return run_probe(pa);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << kVersion << "\n";
        return 0;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
