#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "oscspec/config.hpp"
#include "oscspec/errors.hpp"
#include "oscspec/inverse.hpp"
#include "oscspec/isospectral.hpp"
#include "oscspec/linmaps.hpp"
#include "oscspec/serialize.hpp"
#include "oscspec/verify.hpp"

namespace {

using namespace oscspec;

struct Flags {
    std::optional<double> xmax, h;
    std::optional<int> N, K, M;
    std::vector<std::string> tol;
    std::string config;
    std::string out;
    std::string format = "json";
};

RunConfig effective_config(const Flags& f) {
    RunConfig cfg;
    std::string file = f.config;
    if (file.empty()) {
        if (const char* env = std::getenv("OSCSPEC_CONFIG")) file = env;
    }
    if (!file.empty()) merge_config(cfg, read_json_file(file));
    if (f.xmax) cfg.xmax = *f.xmax;
    if (f.h) cfg.h = *f.h;
    if (f.N) cfg.N = *f.N;
    if (f.K) cfg.K = *f.K;
    if (f.M) cfg.M = *f.M;
    for (const auto& item : f.tol) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw input_error("--tol expects name=value, got \"" + item + "\"");
        try {
            cfg.tolerances[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw input_error("--tol value is not a number: \"" + item + "\"");
        }
    }
    cfg.validate();
    return cfg;
}

// The file's own grid unless xmax or h was set; Hermite potentials are rebuilt exactly.
// cfg is updated to the grid actually used so the echoed config is truthful.
Potential load_potential(const std::string& path, RunConfig& cfg) {
    const auto q = potential_from_json(read_json_file(path));
    if (!cfg.xmax && cfg.h == q.grid().h()) {
        cfg.xmax = q.grid().xmax();
        cfg.validate();
        return q;
    }
    const Grid g = cfg.grid();
    cfg.xmax = g.xmax();
    if (g == q.grid()) return q;
    if (q.hermite()) return Potential::from_hermite(*q.hermite(), g);
    return Potential::from_function([&q](double x) { return q(x); }, g);
}

void emit(const Flags& f, const std::string& text) {
    if (f.out.empty()) {
        std::cout << text;
    } else {
        write_text_file(f.out, text);
    }
}

std::string fmt(double x, const char* spec = "%.12g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

std::string dataset_table(const SpectralDataSet& d) {
    std::ostringstream s;
    s << "   n            sigma               nu               mu                r   quality\n";
    for (int n = 0; n < d.N; ++n) {
        char line[160];
        std::snprintf(line, sizeof line, "%4d %16.10f %16.10f %16.10f %16.10f %9.2e\n", n, d.sigma[n], d.nu[n],
                      d.mu[n], d.r[n], d.quality[n]);
        s << line;
    }
    s << "q(0) = " << fmt(d.q0) << "\n";
    return s.str();
}

std::string config_comment(const RunConfig& cfg) { return "# config " + to_json(cfg).dump() + "\n"; }

int cmd_spectrum(const std::string& file, const Flags& f, bool neumann) {
    auto cfg = effective_config(f);
    const auto q = load_potential(file, cfg);
    const auto d = spectral_data(q, cfg.N, neumann);
    auto j = to_json(d);
    j["config"] = to_json(cfg);
    if (f.format == "table") {
        emit(f, config_comment(cfg) + dataset_table(d));
    } else {
        emit(f, j.dump(2) + "\n");
        if (!f.out.empty()) std::cout << dataset_table(d);
    }
    return 0;
}

std::vector<DarbouxMove> parse_moves(const std::vector<std::string>& items) {
    std::vector<DarbouxMove> moves;
    for (const auto& item : items) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw input_error("move must be n:t, got \"" + item + "\"");
        try {
            moves.push_back({std::stoi(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
        } catch (const std::exception&) {
            throw input_error("move must be n:t, got \"" + item + "\"");
        }
    }
    return moves;
}

int write_potential(const Flags& f, const RunConfig& cfg, const Potential& p) {
    auto j = to_json(p);
    j["config"] = to_json(cfg);
    emit(f, j.dump(2) + "\n");
    return 0;
}

int cmd_flow(const std::string& file, const std::vector<std::string>& items, const Flags& f) {
    auto cfg = effective_config(f);
    const auto q = load_potential(file, cfg);
    const auto moves = parse_moves(items);
    return write_potential(f, cfg, flow(q, moves));
}

int cmd_verify(const std::string& file, const std::string& data_file, const Flags& f) {
    auto cfg = effective_config(f);
    const auto q = load_potential(file, cfg);
    std::optional<SpectralDataSet> data;
    if (!data_file.empty()) data = dataset_from_json(read_json_file(data_file));
    const auto checks = run_verification(q, cfg, data);
    bool ok = true;
    for (const auto& c : checks) ok = ok && c.pass();
    if (f.format == "table") {
        std::ostringstream s;
        s << config_comment(cfg);
        for (const auto& c : checks) {
            char line[256];
            std::snprintf(line, sizeof line, "%-4s %-60s %12.4e <= %12.4e\n", c.pass() ? "PASS" : "FAIL",
                          c.name.c_str(), c.residual, c.bound);
            s << line;
        }
        emit(f, s.str());
    } else {
        json j = {{"schema_version", schema_version}, {"kind", "verification"}, {"pass", ok}};
        j["checks"] = json::array();
        for (const auto& c : checks) j["checks"].push_back(to_json(c));
        j["config"] = to_json(cfg);
        emit(f, j.dump(2) + "\n");
    }
    return ok ? 0 : 2;
}

int cmd_reconstruct(const std::string& file, const std::string& log_file, bool by_flow, const Flags& f) {
    const auto cfg = effective_config(f);
    const auto target = dataset_from_json(read_json_file(file));
    RunConfig c = cfg;
    c.N = target.N;
    ReconstructionProblem p;
    p.target = target;
    p.grid = Grid(f.xmax ? *f.xmax : (cfg.xmax ? *cfg.xmax : default_xmax(target.N)), cfg.h);
    c.xmax = p.grid.xmax();
    p.basis_dim = f.K ? static_cast<std::size_t>(*f.K) : 0;
    p.tol.residual_tol = cfg.tol("reconstruct");
    json j;
    Reconstruction rec;
    if (by_flow) {
        auto fl = reconstruct_by_flow(p);
        rec = fl.spectrum_stage;
        j = to_json(rec);
        j["strategy"] = "darboux_flow";
        j["moves"] = json::array();
        for (const auto& m : fl.moves) j["moves"].push_back({{"n", m.n}, {"t", m.t}});
        j["potential"] = to_json(fl.q);
    } else {
        rec = reconstruct(p);
        j = to_json(rec);
        j["strategy"] = "newton";
    }
    j["config"] = to_json(c);
    const std::string lines = iteration_log_lines(rec.log);
    if (!log_file.empty()) write_text_file(log_file, lines);
    else std::cerr << lines;
    emit(f, j.dump(2) + "\n");
    if (!rec.converged) {
        std::cerr << "reconstruct: not converged, best weighted residual " << fmt(rec.residual) << "\n";
        return 2;
    }
    return 0;
}

int cmd_linmaps(const std::string& file, const Flags& f) {
    auto cfg = effective_config(f);
    const auto q = load_potential(file, cfg);
    const auto K = static_cast<std::size_t>(cfg.K);
    TildeSettings ts;
    ts.gd_length = static_cast<std::size_t>(cfg.M);
    const auto tilde = tilde_n(q, K, ts);
    json j = {{"schema_version", schema_version}, {"kind", "linmaps"}};
    j["F"] = map_F(q, K);
    j["G"] = map_G(q, K);
    j["F_D"] = map_FD(q, K);
    j["G_D"] = map_GD(q, K);
    j["qtilde"] = tilde.coeffs;
    j["qtilde_kernel_bound"] = tilde.kernel_bound;
    j["config"] = to_json(cfg);
    if (f.format == "table") {
        std::ostringstream s;
        s << config_comment(cfg) << "   k                F                G              F_D              G_D           qtilde\n";
        for (std::size_t k = 0; k < K; ++k) {
            char line[160];
            std::snprintf(line, sizeof line, "%4zu %16.9e %16.9e %16.9e %16.9e %16.9e\n", k, j["F"][k].get<double>(),
                          j["G"][k].get<double>(), j["F_D"][k].get<double>(), j["G_D"][k].get<double>(),
                          tilde.coeffs[k]);
            s << line;
        }
        emit(f, s.str());
    } else {
        emit(f, j.dump(2) + "\n");
    }
    return 0;
}

void add_common(CLI::App* sub, Flags& f) {
    sub->set_help_flag("--help", "print this help");  // -h would shadow the grid-step flag
    sub->add_option("--xmax", f.xmax, "right end of the computational interval");
    sub->add_option("--h", f.h, "grid step");
    sub->add_option("--n", f.N, "number of Dirichlet indices");
    sub->add_option("--k", f.K, "coefficient / basis truncation");
    sub->add_option("--m", f.M, "Laurent terms kept in kernel sums");
    sub->add_option("--tol", f.tol, "tolerance override name=value")->take_all();
    sub->add_option("--config", f.config, "JSON config file (fallback: OSCSPEC_CONFIG)");
    sub->add_option("--out", f.out, "output file (default stdout)");
    sub->add_option("--format", f.format, "json or table")->check(CLI::IsMember({"json", "table"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral toolkit for the perturbed harmonic oscillator on the half-line"};
    app.set_help_flag("--help", "print this help");
    app.require_subcommand(1);
    Flags f;
    std::string file, data_file, log_file;
    std::vector<std::string> moves;
    int index = 0;
    double shift = 0.0;
    bool neumann = false, by_flow = false;

    auto* spectrum = app.add_subcommand("spectrum", "Dirichlet eigenvalues, norming constants and derived data");
    spectrum->add_option("potential", file, "potential JSON")->required();
    spectrum->add_flag("--neumann", neumann, "also compute the even-extension spectrum");
    add_common(spectrum, f);

    auto* darb = app.add_subcommand("darboux", "single isospectral move");
    darb->add_option("potential", file, "potential JSON")->required();
    darb->add_option("index", index, "eigenvalue index")->required();
    darb->add_option("t", shift, "norming-constant shift")->required();
    add_common(darb, f);

    auto* fl = app.add_subcommand("flow", "composition of moves n:t, applied right to left");
    fl->add_option("potential", file, "potential JSON")->required();
    fl->add_option("moves", moves, "moves n:t")->required();
    add_common(fl, f);

    auto* ver = app.add_subcommand("verify", "run every identity and asymptotic check");
    ver->add_option("potential", file, "potential JSON")->required();
    ver->add_option("--data", data_file, "spectral data JSON to check instead of the computed spectra");
    add_common(ver, f);

    auto* rec = app.add_subcommand("reconstruct", "potential from spectral data");
    rec->add_option("data", file, "spectral data JSON")->required();
    rec->add_option("--log", log_file, "iteration log (one JSON record per line; default stderr)");
    rec->add_flag("--flow", by_flow, "match (mu, q(0)) first, then fix r with Darboux moves");
    add_common(rec, f);

    auto* lin = app.add_subcommand("linmaps", "dump F, G, F_D, G_D and qtilde coefficients");
    lin->add_option("potential", file, "potential JSON")->required();
    add_common(lin, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*spectrum) return cmd_spectrum(file, f, neumann);
        if (*darb) {
            const std::vector<std::string> one{std::to_string(index) + ":" + fmt(shift, "%.17g")};
            return cmd_flow(file, one, f);
        }
        if (*fl) return cmd_flow(file, moves, f);
        if (*ver) return cmd_verify(file, data_file, f);
        if (*rec) return cmd_reconstruct(file, log_file, by_flow, f);
        if (*lin) return cmd_linmaps(file, f);
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
