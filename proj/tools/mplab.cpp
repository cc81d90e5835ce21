// mplab: command-line surface for the multiportlab library. Subcommands cover
// the coin matrices, the ring-interferometer scattering solve, principal-log
// generators, ladder band structure, crossing detection, SU(2)/SU(3)
// decomposition, network evolution with shot sampling, state preparation, the
// chain consistency report, and network-file validation.
//
// Exit codes: 0 success, 1 domain error (physics/data), 2 usage error.
// Data goes to stdout or --out; stderr carries diagnostics only.
//
// Configuration: multiportlab.toml (key = value lines) discovered in the
// working directory, then the home directory. Environment variables
// MPLAB_TOLERANCE, MPLAB_SAMPLES, MPLAB_OUT_DIR and MPLAB_SEED override the
// file; explicit flags override both.

#include <multiportlab/multiportlab.hpp>

#include <CLI11.hpp>

#include <array>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace mplab;

struct CliConfig {
    double tolerance = 1e-10;
    int samples = 256;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string unquote(std::string v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                          (v.front() == '\'' && v.back() == '\'')))
        return v.substr(1, v.size() - 2);
    return v;
}

void apply_config_line(CliConfig& cfg, const std::string& key, const std::string& value,
                       const std::string& origin) {
    try {
        if (key == "tolerance") cfg.tolerance = std::stod(value);
        else if (key == "samples") cfg.samples = std::stoi(value);
        else if (key == "out_dir") cfg.out_dir = unquote(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        // unknown keys are ignored for forward compatibility
    } catch (const std::exception&) {
        throw UsageError(origin + ": cannot parse value for '" + key + "'");
    }
}

void load_config_file(CliConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) return;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
        apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)),
                          path + ":" + std::to_string(lineno));
    }
}

CliConfig load_config() {
    CliConfig cfg;
    std::ifstream cwd("multiportlab.toml");
    if (cwd.good()) {
        load_config_file(cfg, "multiportlab.toml");
    } else if (const char* home = std::getenv("HOME")) {
        load_config_file(cfg, std::string(home) + "/multiportlab.toml");
    }
    for (const char* key : {"MPLAB_TOLERANCE", "MPLAB_SAMPLES", "MPLAB_OUT_DIR", "MPLAB_SEED"}) {
        const char* v = std::getenv(key);
        if (!v) continue;
        const std::string name = std::string(key).substr(6);
        std::string lowered;
        for (char c : name) lowered += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        apply_config_line(cfg, lowered, v, std::string("environment ") + key);
    }
    if (!(cfg.tolerance > 0.0)) throw UsageError("configured tolerance must be positive");
    if (cfg.samples < 3) throw UsageError("configured samples must be at least 3");
    return cfg;
}

void write_output(const std::string& text, const std::string& out, const CliConfig& cfg) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::string path = out;
    if (out.front() != '/' && !cfg.out_dir.empty() && cfg.out_dir != ".")
        path = cfg.out_dir + "/" + out;
    std::ofstream f(path, std::ios::binary);
    if (!f.good()) throw std::runtime_error("cannot open output file '" + path + "'");
    f << text;
    if (!f.good()) throw std::runtime_error("failed writing output file '" + path + "'");
}

std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw std::runtime_error("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string matrix_to_json(const ComplexMatrix& m) {
    JsonWriter w;
    w.begin_object();
    w.key("dim").value(static_cast<int>(m.rows()));
    w.key("entries");
    w.begin_array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        w.begin_array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            w.begin_array(true);
            w.value(m(r, c).real()).value(m(r, c).imag());
            w.end_array();
        }
        w.end_array();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

std::string matrix_to_csv(const ComplexMatrix& m) {
    std::string out = "row,col,re,im\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out += csv_join({std::to_string(r), std::to_string(c), fmt17(m(r, c).real()),
                             fmt17(m(r, c).imag())});
    return out;
}

std::string matrix_text(const ComplexMatrix& m, const std::string& format) {
    return format == "csv" ? matrix_to_csv(m) : matrix_to_json(m);
}

std::string state_to_json(const StateVector& psi) {
    JsonWriter w;
    w.begin_object();
    w.key("dim").value(static_cast<int>(psi.dim()));
    w.key("labels");
    w.begin_array(true);
    for (Eigen::Index i = 0; i < psi.dim(); ++i)
        w.value(psi.basis.empty() ? std::to_string(i) : psi.basis[static_cast<size_t>(i)]);
    w.end_array();
    w.key("amplitudes");
    w.begin_array();
    for (Eigen::Index i = 0; i < psi.dim(); ++i) {
        w.begin_array(true);
        w.value(psi.amplitudes(i).real()).value(psi.amplitudes(i).imag());
        w.end_array();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

std::string state_to_csv(const StateVector& psi) {
    std::string out = "index,label,re,im\n";
    for (Eigen::Index i = 0; i < psi.dim(); ++i)
        out += csv_join({std::to_string(i),
                         psi.basis.empty() ? std::to_string(i) : psi.basis[static_cast<size_t>(i)],
                         fmt17(psi.amplitudes(i).real()), fmt17(psi.amplitudes(i).imag())});
    return out;
}

BandSource band_source(const std::string& name) {
    return name == "numerical" ? BandSource::numerical : BandSource::closed_form;
}

int parse_port_index(const std::string& input) {
    const std::string prefix = "port:";
    if (input.rfind(prefix, 0) != 0)
        throw UsageError("--input must look like port:<index>, got '" + input + "'");
    try {
        size_t used = 0;
        const int idx = std::stoi(input.substr(prefix.size()), &used);
        if (used != input.size() - prefix.size()) throw std::invalid_argument("trailing junk");
        return idx;
    } catch (const std::exception&) {
        throw UsageError("--input must look like port:<index>, got '" + input + "'");
    }
}

} // namespace

int main(int argc, char** argv) {
    CliConfig cfg;
    try {
        cfg = load_config();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"directionally-unbiased multiport walk toolkit"};
    app.require_subcommand(1);

    // unitary
    auto* cmd_unitary = app.add_subcommand("unitary", "n-port coin matrix");
    int un_n = 3;
    std::string un_format = "json", un_out;
    cmd_unitary->add_option("--n", un_n, "port count")->capture_default_str();
    cmd_unitary->add_option("--format", un_format)->check(CLI::IsMember({"csv", "json"}));
    cmd_unitary->add_option("--out", un_out, "output file (default stdout)");

    // strict3
    auto* cmd_strict3 = app.add_subcommand("strict3", "balanced three-port matrix");
    std::string s3_format = "json", s3_out;
    cmd_strict3->add_option("--format", s3_format)->check(CLI::IsMember({"csv", "json"}));
    cmd_strict3->add_option("--out", s3_out, "output file (default stdout)");

    // scatter
    auto* cmd_scatter =
        app.add_subcommand("scatter", "ring-interferometer steady-state scattering matrix");
    std::vector<double> sc_phases;
    double sc_ring_phase = kCalibratedThreePortProfile.ring_phase;
    double sc_mirror_sign = kCalibratedThreePortProfile.mirror_sign;
    std::string sc_format = "json", sc_out;
    cmd_scatter
        ->add_option("--vertex-phases", sc_phases,
                     "phase-plate settings, one value for all three vertices or three values")
        ->expected(1, 3);
    cmd_scatter->add_option("--ring-phase", sc_ring_phase, "per-segment propagation phase")
        ->capture_default_str();
    cmd_scatter->add_option("--mirror-sign", sc_mirror_sign, "vertex mirror reflection sign")
        ->capture_default_str();
    cmd_scatter->add_option("--format", sc_format)->check(CLI::IsMember({"csv", "json"}));
    cmd_scatter->add_option("--out", sc_out, "output file (default stdout)");

    // hamiltonian
    auto* cmd_hamiltonian =
        app.add_subcommand("hamiltonian", "principal-log generator of the n-port coin");
    int ha_n = 3;
    std::string ha_boundary = "error", ha_format = "json", ha_out;
    cmd_hamiltonian->add_option("--n", ha_n, "port count")->capture_default_str();
    cmd_hamiltonian->add_option("--boundary", ha_boundary, "branch-cut handling")
        ->check(CLI::IsMember({"error", "snap"}));
    cmd_hamiltonian->add_option("--format", ha_format)->check(CLI::IsMember({"csv", "json"}));
    cmd_hamiltonian->add_option("--out", ha_out, "output file (default stdout)");

    // bands
    auto* cmd_bands = app.add_subcommand("bands", "sampled ladder band structure as CSV");
    std::string ba_source = "closed-form", ba_out;
    int ba_samples = cfg.samples;
    cmd_bands->add_option("--source", ba_source, "band provenance")
        ->check(CLI::IsMember({"closed-form", "numerical"}));
    cmd_bands->add_option("--samples", ba_samples, "momentum grid size")->capture_default_str();
    cmd_bands->add_option("--out", ba_out, "output file (default stdout)");

    // crossings
    auto* cmd_crossings = app.add_subcommand("crossings", "band-touching quasi-momenta");
    std::string cr_source = "closed-form", cr_format = "json", cr_out;
    int cr_samples = cfg.samples;
    double cr_tol = cfg.tolerance;
    cmd_crossings->add_option("--source", cr_source, "band provenance")
        ->check(CLI::IsMember({"closed-form", "numerical"}));
    cmd_crossings->add_option("--samples", cr_samples, "momentum grid size")->capture_default_str();
    cmd_crossings->add_option("--tol", cr_tol, "gap tolerance")->capture_default_str();
    cmd_crossings->add_option("--format", cr_format)->check(CLI::IsMember({"csv", "json"}));
    cmd_crossings->add_option("--out", cr_out, "output file (default stdout)");

    // decompose
    auto* cmd_decompose =
        app.add_subcommand("decompose", "generator coefficients of the momentum-space operator");
    std::string de_algebra = "su3", de_out;
    int de_samples = cfg.samples;
    cmd_decompose->add_option("--algebra", de_algebra)->check(CLI::IsMember({"su2", "su3"}));
    cmd_decompose->add_option("--samples", de_samples, "momentum grid size (su3)")
        ->capture_default_str();
    cmd_decompose->add_option("--out", de_out, "output file (default stdout)");

    // evolve
    auto* cmd_evolve = app.add_subcommand("evolve", "walk a network file and read out statistics");
    std::string ev_network, ev_input = "port:0", ev_format = "json", ev_out;
    int ev_steps = 1;
    long long ev_shots = 0;
    std::uint64_t ev_seed = cfg.seed;
    cmd_evolve->add_option("--network", ev_network, "network description file")->required();
    cmd_evolve->add_option("--input", ev_input, "input mode, port:<index> in the directed-edge basis")
        ->capture_default_str();
    cmd_evolve->add_option("--steps", ev_steps, "number of discrete steps")->capture_default_str();
    cmd_evolve->add_option("--shots", ev_shots, "detector shots; 0 emits exact probabilities")
        ->capture_default_str();
    cmd_evolve->add_option("--seed", ev_seed, "sampling seed")->capture_default_str();
    cmd_evolve->add_option("--format", ev_format)->check(CLI::IsMember({"csv", "json"}));
    cmd_evolve->add_option("--out", ev_out, "output file (default stdout)");

    // prepare
    auto* cmd_prepare = app.add_subcommand("prepare", "preparation-layer states");
    std::string pr_kind, pr_format = "json", pr_out;
    int pr_sites = 3, pr_site = 0, pr_modes = 3;
    double pr_wavenumber = 0.0;
    cmd_prepare->add_option("--kind", pr_kind, "position | momentum | w")
        ->required()
        ->check(CLI::IsMember({"position", "momentum", "w"}));
    cmd_prepare->add_option("--sites", pr_sites, "ring size (position/momentum)")
        ->capture_default_str();
    cmd_prepare->add_option("--site", pr_site, "occupied site (position)")->capture_default_str();
    cmd_prepare->add_option("--wavenumber", pr_wavenumber, "quasi-momentum (momentum)")
        ->capture_default_str();
    cmd_prepare->add_option("--modes", pr_modes, "mode count (w)")->capture_default_str();
    cmd_prepare->add_option("--format", pr_format)->check(CLI::IsMember({"csv", "json"}));
    cmd_prepare->add_option("--out", pr_out, "output file (default stdout)");

    // report
    auto* cmd_report = app.add_subcommand("report", "chain consistency report as JSON");
    int re_sites = 12, re_samples = cfg.samples;
    std::string re_out;
    cmd_report->add_option("--sites", re_sites, "ring size (at least 8)")->capture_default_str();
    cmd_report->add_option("--samples", re_samples, "momentum grid size")->capture_default_str();
    cmd_report->add_option("--out", re_out, "output file (default stdout)");

    // validate
    auto* cmd_validate = app.add_subcommand("validate", "network-file diagnostics");
    std::string va_network;
    cmd_validate->add_option("--network", va_network, "network description file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_unitary->parsed()) {
            write_output(matrix_text(grover_unitary(un_n).inner, un_format), un_out, cfg);
        } else if (cmd_strict3->parsed()) {
            write_output(matrix_text(strict_three_port().inner, s3_format), s3_out, cfg);
        } else if (cmd_scatter->parsed()) {
            std::array<double, 3> phases{-3.0 * kPi / 4.0, -3.0 * kPi / 4.0, -3.0 * kPi / 4.0};
            if (sc_phases.size() == 1) {
                phases = {sc_phases[0], sc_phases[0], sc_phases[0]};
            } else if (sc_phases.size() == 3) {
                phases = {sc_phases[0], sc_phases[1], sc_phases[2]};
            } else if (!sc_phases.empty()) {
                throw UsageError("--vertex-phases takes one value or three");
            }
            const CalibrationProfile profile{sc_ring_phase, sc_mirror_sign};
            const UnitaryMatrix s = effective_smatrix(build_unbiased_three_port(phases, profile));
            write_output(matrix_text(s.inner, sc_format), sc_out, cfg);
        } else if (cmd_hamiltonian->parsed()) {
            const BranchBoundary boundary =
                ha_boundary == "snap" ? BranchBoundary::snap : BranchBoundary::error;
            const HamiltonianOperator h = principal_log_hamiltonian(grover_unitary(ha_n), boundary);
            write_output(matrix_text(h.inner, ha_format), ha_out, cfg);
        } else if (cmd_bands->parsed()) {
            write_output(bands_to_csv(band_structure(band_source(ba_source), ba_samples)), ba_out,
                         cfg);
        } else if (cmd_crossings->parsed()) {
            const std::vector<double> ks =
                crossing_points(band_structure(band_source(cr_source), cr_samples), cr_tol);
            std::string text;
            if (cr_format == "csv") {
                text = "k\n";
                for (double k : ks) text += csv_join({fmt17(k)});
            } else {
                JsonWriter w;
                w.begin_object();
                w.key("source").value(cr_source);
                w.key("samples").value(cr_samples);
                w.key("tolerance").value(cr_tol);
                w.key("crossings");
                w.begin_array(true);
                for (double k : ks) w.value(k);
                w.end_array();
                w.end_object();
                text = w.str();
            }
            write_output(text, cr_out, cfg);
        } else if (cmd_decompose->parsed()) {
            std::string text;
            if (de_algebra == "su2") {
                const HamiltonianOperator h = principal_log_hamiltonian(grover_unitary(2));
                const PauliCoefficients c = su2_decompose(h.inner);
                JsonWriter w;
                w.begin_object();
                w.key("algebra").value("su2");
                w.key("d0").value(c.d0);
                w.key("dx").value(c.dx);
                w.key("dy").value(c.dy);
                w.key("dz").value(c.dz);
                w.end_object();
                text = w.str();
            } else {
                std::vector<std::pair<double, GellMannCoefficients>> rows;
                rows.reserve(static_cast<size_t>(de_samples));
                for (int n = 0; n < de_samples; ++n) {
                    const double k = kTwoPi * n / de_samples;
                    rows.emplace_back(k, su3_decompose(bloch_hamiltonian(k)));
                }
                text = coefficients_to_json(rows);
            }
            write_output(text, de_out, cfg);
        } else if (cmd_evolve->parsed()) {
            if (ev_steps < 0) throw UsageError("--steps must be non-negative");
            const int port = parse_port_index(ev_input);
            const NetworkSpec spec = parse_network(slurp_file(ev_network));
            const CompiledEvolution compiled = compile_evolution(spec);
            const int dim = compiled.basis.size();
            if (port < 0 || port >= dim)
                throw std::domain_error("input mode " + std::to_string(port) +
                                        " out of range for a " + std::to_string(dim) +
                                        "-mode network");
            ComplexVector amps = ComplexVector::Zero(dim);
            amps(port) = 1.0;
            const StateVector psi0(compiled.basis.labels(), std::move(amps));
            const ExitDistribution dist = walk_distribution(compiled.step, psi0, ev_steps);
            std::string text;
            if (ev_shots > 0) {
                const ShotRecord rec = sample_shots(dist, ev_shots, ev_seed);
                if (ev_format == "csv") {
                    text = shots_to_csv(rec);
                } else {
                    JsonWriter w;
                    w.begin_object();
                    w.key("shots").value(rec.shots);
                    w.key("seed").value(static_cast<unsigned long long>(rec.seed));
                    w.key("counts");
                    w.begin_array(true);
                    for (long long c : rec.counts) w.value(c);
                    w.end_array();
                    w.end_object();
                    text = w.str();
                }
            } else if (ev_format == "csv") {
                text = "port,probability\n";
                for (size_t i = 0; i < dist.probabilities.size(); ++i)
                    text += csv_join({std::to_string(i), fmt17(dist.probabilities[i])});
            } else {
                text = distribution_to_json(dist);
            }
            write_output(text, ev_out, cfg);
        } else if (cmd_prepare->parsed()) {
            StateVector psi;
            if (pr_kind == "position") {
                psi = prepare_position(pr_site, pr_sites);
            } else if (pr_kind == "momentum") {
                psi = momentum_state(pr_wavenumber, pr_sites).vector;
            } else {
                psi = to_state(w_state(pr_modes));
            }
            write_output(pr_format == "csv" ? state_to_csv(psi) : state_to_json(psi), pr_out, cfg);
        } else if (cmd_report->parsed()) {
            write_output(report_to_json(consistency_report(re_sites, re_samples)), re_out, cfg);
        } else if (cmd_validate->parsed()) {
            std::vector<Diagnostic> diags;
            try {
                diags = validate_network(parse_network_unvalidated(slurp_file(va_network)));
            } catch (const NetError& e) {
                diags.push_back({e.code, e.what()});
            }
            JsonWriter w;
            w.begin_array();
            for (const auto& d : diags) {
                w.begin_object();
                w.key("code").value(net_code_name(d.code));
                w.key("message").value(d.message);
                w.end_object();
            }
            w.end_array();
            std::cout << w.str();
            return diags.empty() ? 0 : 1;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
