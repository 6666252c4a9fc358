// Command-line front door: batch computations over JSON state/Hamiltonian
// files, JSON reports, CSV sweep tables, and the built-in property suite.
//
// Exit codes: 0 success, 2 parse error, 3 numeric failure, 4 selftest failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coh/io.hpp"
#include "coh/selftest.hpp"

namespace {

using coh::json;

double snap_tolerance() {
    if (const char* env = std::getenv("COH_SNAP_TOL")) {
        try {
            const double v = std::stod(env);
            if (v > 0.0) return v;
        } catch (...) {
            throw coh::ParseError("COH_SNAP_TOL: not a positive number");
        }
    }
    return 1e-6;
}

json config_echo(const std::string& command, std::uint64_t seed,
                 const std::vector<std::pair<std::string, std::string>>& inputs) {
    json cfg{{"command", command}, {"seed", seed}, {"version", coh::version}};
    for (const auto& [key, path] : inputs) cfg[key] = path;
    return cfg;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw coh::ParseError("cannot open output file: " + out_path);
    out << j.dump(2) << '\n';
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw coh::ParseError("cannot open output file: " + out_path);
    out << text;
}

coh::PureState require_pure(const coh::StateFile& s, const std::string& what) {
    if (!s.pure) throw coh::ParseError(what + ": this command needs a pure state");
    return *s.pure;
}

json dist_json(const coh::IntDist& d) {
    json pmf = json::array();
    for (auto n : d.support())
        pmf.push_back(json::array({n, coh::real_field(d.pmf(n))}));
    return json{{"pmf", pmf},
                {"mean", coh::real_field(d.mean())},
                {"variance", coh::real_field(d.variance())}};
}

std::vector<double> parse_reals_csv(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw coh::ParseError(what + ": bad number \"" + tok + "\"");
        }
    }
    if (out.empty()) throw coh::ParseError(what + ": empty grid");
    return out;
}

std::vector<std::uint64_t> parse_ints_csv(const std::string& s, const std::string& what) {
    std::vector<std::uint64_t> out;
    for (double v : parse_reals_csv(s, what)) out.push_back(std::uint64_t(v));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherence/metrology toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "seed for randomized routines")->capture_default_str();

    std::string state1, state2, ham1, ham2, out_path;
    double rate = 1.0, delta = 0.05;
    std::uint64_t copies = 100, trials = 20000;
    std::string rates_csv = "0.3,0.375,0.5", copies_csv = "100,200,400,800";
    std::string deltas_csv = "0.05", blocks_csv = "50,100,200";
    std::string sweep_mode = "convert";

    auto add_io = [&](CLI::App* cmd, bool two_systems) {
        cmd->fallthrough(); // let global options like --seed appear anywhere
        cmd->add_option("--state", state1, "state JSON file")->required();
        cmd->add_option("--ham", ham1, "Hamiltonian JSON file")->required();
        if (two_systems) {
            cmd->add_option("--state2", state2, "target state JSON file")->required();
            cmd->add_option("--ham2", ham2, "target Hamiltonian JSON file")->required();
        }
        cmd->add_option("--out", out_path, "output file (default stdout)");
    };

    CLI::App* c_qfi = app.add_subcommand("qfi", "information value of a state");
    add_io(c_qfi, false);

    CLI::App* c_purify = app.add_subcommand("purify", "minimum-variance purification");
    add_io(c_purify, false);

    CLI::App* c_ensemble = app.add_subcommand("ensemble", "optimal pure-state decomposition");
    add_io(c_ensemble, false);

    CLI::App* c_dist = app.add_subcommand("dist", "integer energy distribution of a pure state");
    add_io(c_dist, false);

    CLI::App* c_convert = app.add_subcommand("convert", "pure-state conversion report");
    add_io(c_convert, true);
    c_convert->add_option("--rate", rate, "output copies per input copy")->capture_default_str();
    c_convert->add_option("--copies", copies, "input copy count (omit for single-copy)");

    CLI::App* c_cost = app.add_subcommand("cost", "coherence cost and preparation protocol");
    add_io(c_cost, false);
    c_cost->add_option("--delta", delta, "typicality slack")->capture_default_str();
    c_cost->add_option("--copies", copies, "block size m")->capture_default_str();
    c_cost->add_option("--trials", trials, "Monte-Carlo trials")->capture_default_str();

    CLI::App* c_bound = app.add_subcommand("bound", "rate bound and error floor between states");
    add_io(c_bound, true);
    c_bound->add_option("--rate", rate, "rate at which to evaluate the error floor")
        ->capture_default_str();

    CLI::App* c_sweep = app.add_subcommand("sweep", "CSV sweep over conversion or protocol grids");
    add_io(c_sweep, false);
    c_sweep->add_option("--mode", sweep_mode, "convert | cost")->capture_default_str();
    c_sweep->add_option("--state2", state2, "target state (convert mode)");
    c_sweep->add_option("--ham2", ham2, "target Hamiltonian (convert mode)");
    c_sweep->add_option("--rates", rates_csv, "comma-separated rate grid")->capture_default_str();
    c_sweep->add_option("--copies-grid", copies_csv, "comma-separated copy counts")
        ->capture_default_str();
    c_sweep->add_option("--deltas", deltas_csv, "comma-separated slack grid (cost mode)")
        ->capture_default_str();
    c_sweep->add_option("--blocks", blocks_csv, "comma-separated block sizes (cost mode)")
        ->capture_default_str();
    c_sweep->add_option("--trials", trials, "Monte-Carlo trials (cost mode)")
        ->capture_default_str();

    app.add_subcommand("selftest", "run the full property suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const double tol_snap = snap_tolerance();

        if (app.got_subcommand("selftest")) {
            int failures = 0;
            for (const auto& c : coh::run_all_checks()) {
                std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  (" << c.detail << ")\n";
                failures += !c.pass;
            }
            std::cout << (failures ? "selftest: FAIL\n" : "selftest: PASS\n");
            return failures ? 4 : 0;
        }

        if (app.got_subcommand("qfi")) {
            const auto s = coh::load_state(state1);
            const auto h = coh::load_hamiltonian(ham1, tol_snap);
            const auto r = coh::qfi(s.density, h.matrix());
            emit(json{{"config", config_echo("qfi", seed, {{"state", state1}, {"ham", ham1}})},
                      {"value", coh::real_field(r.value)},
                      {"dropped_pairs", r.dropped_pairs}},
                 out_path);
            return 0;
        }

        if (app.got_subcommand("purify")) {
            const auto s = coh::load_state(state1);
            const auto h = coh::load_hamiltonian(ham1, tol_snap);
            const coh::Matrix h_a = coh::optimal_aux_hamiltonian(s.density, h.matrix());
            emit(json{{"config", config_echo("purify", seed, {{"state", state1}, {"ham", ham1}})},
                      {"aux_hamiltonian", coh::dump_matrix(h_a)},
                      {"total_variance",
                       coh::real_field(coh::purification_variance(s.density, h.matrix(), h_a))},
                      {"aux_information_value", coh::real_field(coh::aux_qfi(s.density, h.matrix()))},
                      {"information_value", coh::real_field(coh::qfi(s.density, h.matrix()).value)}},
                 out_path);
            return 0;
        }

        if (app.got_subcommand("ensemble")) {
            const auto s = coh::load_state(state1);
            const auto h = coh::load_hamiltonian(ham1, tol_snap);
            const coh::Ensemble e = coh::yu_ensemble(s.density, h.matrix());
            json members = json::array();
            for (const auto& [q, eta] : e.members) {
                json amps = json::array();
                for (std::size_t i = 0; i < eta.dim(); ++i)
                    amps.push_back(coh::dump_complex(eta[i]));
                members.push_back(json{{"weight", coh::real_field(q)}, {"amplitudes", amps}});
            }
            emit(json{{"config", config_echo("ensemble", seed, {{"state", state1}, {"ham", ham1}})},
                      {"members", members},
                      {"average_information_value",
                       coh::real_field(coh::ensemble_avg_qfi(e, h.matrix()))}},
                 out_path);
            return 0;
        }

        if (app.got_subcommand("dist")) {
            const auto s = coh::load_state(state1);
            const auto h = coh::load_hamiltonian(ham1, tol_snap);
            const coh::PureState psi = require_pure(s, state1);
            const coh::IntDist d = coh::energy_distribution(psi, h);
            const auto period = coh::state_period(psi, h);
            const auto min_l = coh::minimal_adjacent_L(d);
            json j{{"config", config_echo("dist", seed, {{"state", state1}, {"ham", ham1}})},
                   {"distribution", dist_json(d)},
                   {"period", period ? json(coh::real_field(*period)) : json(nullptr)},
                   {"minimal_adjacent_copies", min_l ? json(*min_l) : json(nullptr)}};
            emit(j, out_path);
            return 0;
        }

        if (app.got_subcommand("convert")) {
            const auto s1 = coh::load_state(state1);
            const auto s2 = coh::load_state(state2);
            const auto h1 = coh::load_hamiltonian(ham1, tol_snap);
            const auto h2 = coh::load_hamiltonian(ham2, tol_snap);
            const coh::PureState p1 = require_pure(s1, state1);
            const coh::PureState p2 = require_pure(s2, state2);
            const coh::ConversionReport r =
                c_convert->count("--copies")
                    ? coh::iid_convert(p1, h1, p2, h2, rate, copies)
                    : coh::single_copy_error(p1, h1, p2, h2);
            json j = coh::conversion_report_json(r);
            j["config"] = config_echo("convert", seed,
                                      {{"state", state1},
                                       {"ham", ham1},
                                       {"state2", state2},
                                       {"ham2", ham2}});
            emit(j, out_path);
            return 0;
        }

        if (app.got_subcommand("cost")) {
            const auto s = coh::load_state(state1);
            const auto h = coh::load_hamiltonian(ham1, tol_snap);
            const coh::ProtocolReport r =
                coh::typicality_simulate(s.density, h, delta, copies, trials, seed);
            json j = coh::protocol_report_json(r);
            j["coherence_cost"] = coh::real_field(coh::coherence_cost(s.density, h));
            j["config"] = config_echo("cost", seed, {{"state", state1}, {"ham", ham1}});
            emit(j, out_path);
            return 0;
        }

        if (app.got_subcommand("bound")) {
            const auto s1 = coh::load_state(state1);
            const auto s2 = coh::load_state(state2);
            const auto h1 = coh::load_hamiltonian(ham1, tol_snap);
            const auto h2 = coh::load_hamiltonian(ham2, tol_snap);
            const double rb = coh::rate_bound(s1.density, h1.matrix(), s2.density, h2.matrix());
            const double f_in = coh::qfi(s1.density, h1.matrix()).value;
            const double f_out = coh::qfi(s2.density, h2.matrix()).value;
            emit(json{{"config", config_echo("bound", seed,
                                             {{"state", state1},
                                              {"ham", ham1},
                                              {"state2", state2},
                                              {"ham2", ham2}})},
                      {"rate_bound", coh::real_field(rb)},
                      {"error_floor_at_rate", coh::real_field(coh::min_error_floor(f_in, f_out, rate))},
                      {"rate", coh::real_field(rate)}},
                 out_path);
            return 0;
        }

        if (app.got_subcommand("sweep")) {
            if (sweep_mode == "convert") {
                if (state2.empty() || ham2.empty())
                    throw coh::ParseError("sweep --mode convert needs --state2 and --ham2");
                const coh::PureState p1 = require_pure(coh::load_state(state1), state1);
                const coh::PureState p2 = require_pure(coh::load_state(state2), state2);
                const auto h1 = coh::load_hamiltonian(ham1, tol_snap);
                const auto h2 = coh::load_hamiltonian(ham2, tol_snap);
                std::vector<coh::ConversionReport> rows;
                for (std::uint64_t n : parse_ints_csv(copies_csv, "--copies-grid"))
                    for (double r : parse_reals_csv(rates_csv, "--rates"))
                        rows.push_back(coh::iid_convert(p1, h1, p2, h2, r, n));
                emit_text(coh::convert_sweep_csv(rows), out_path);
                return 0;
            }
            if (sweep_mode == "cost") {
                const auto s = coh::load_state(state1);
                const auto h = coh::load_hamiltonian(ham1, tol_snap);
                std::vector<coh::ProtocolReport> rows;
                for (std::uint64_t m : parse_ints_csv(blocks_csv, "--blocks"))
                    for (double d : parse_reals_csv(deltas_csv, "--deltas"))
                        rows.push_back(coh::typicality_simulate(s.density, h, d, m, trials, seed));
                emit_text(coh::cost_sweep_csv(rows), out_path);
                return 0;
            }
            throw coh::ParseError("sweep: unknown mode \"" + sweep_mode + "\"");
        }
    } catch (const coh::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const coh::Error& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
