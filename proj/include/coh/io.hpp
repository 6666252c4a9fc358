#pragma once

// File formats: JSON states and Hamiltonians (complex numbers as [re, im],
// matrices as row-major nested arrays), JSON reports with 17-significant-
// digit reals for exact round-trips, and CSV sweep tables.

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "coh/convert.hpp"
#include "coh/cost.hpp"
#include "coh/linalg.hpp"
#include "coh/spectral.hpp"

namespace coh {

inline constexpr const char* version = "0.1.0";

using json = nlohmann::json;

inline cplx parse_complex(const json& j, const std::string& where) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx(j[0].get<double>(), j[1].get<double>());
    throw ParseError(where + ": expected a number or [re, im]");
}

inline json dump_complex(cplx z) { return json::array({z.real(), z.imag()}); }

inline Matrix parse_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ParseError(where + ": expected nested array rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw ParseError(where + ": empty row");
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ParseError(where + ": ragged row " + std::to_string(i));
        for (std::size_t k = 0; k < cols; ++k)
            m(i, k) = parse_complex(j[i][k], where + "[" + std::to_string(i) + "][" +
                                                  std::to_string(k) + "]");
    }
    return m;
}

inline json dump_matrix(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(dump_complex(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

// State files: {"kind": "pure", "amplitudes": [[re,im], ...]}
//          or  {"kind": "density", "matrix": [[[re,im], ...], ...]}.
// Pure states are promoted to rank-one density operators when needed.
struct StateFile {
    std::optional<PureState> pure;
    DensityOperator density{Matrix::identity(1)};
};

inline StateFile parse_state(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind")) throw ParseError(where + ": missing \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    StateFile s;
    if (kind == "pure") {
        if (!j.contains("amplitudes") || !j["amplitudes"].is_array())
            throw ParseError(where + ": pure state needs \"amplitudes\"");
        std::vector<cplx> a;
        for (std::size_t i = 0; i < j["amplitudes"].size(); ++i)
            a.push_back(parse_complex(j["amplitudes"][i],
                                      where + ".amplitudes[" + std::to_string(i) + "]"));
        s.pure = PureState(std::move(a));
        s.density = DensityOperator(s.pure->projector());
    } else if (kind == "density") {
        if (!j.contains("matrix")) throw ParseError(where + ": density state needs \"matrix\"");
        s.density = DensityOperator(parse_matrix(j["matrix"], where + ".matrix"));
    } else {
        throw ParseError(where + ": unknown state kind \"" + kind + "\"");
    }
    return s;
}

// Hamiltonian files:
//   {"kind": "integer_levels", "tau": t, "levels": [n...],
//    "offset": e0?, "basis": matrix?}
//   {"kind": "hermitian", "tau": t, "matrix": [[[re,im],...],...]}
// The hermitian form is snapped onto the 2*pi/tau integer grid.
inline PeriodicHamiltonian parse_hamiltonian(const json& j, const std::string& where,
                                             double tol_snap = 1e-6) {
    if (!j.is_object() || !j.contains("kind")) throw ParseError(where + ": missing \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    if (!j.contains("tau") || !j["tau"].is_number())
        throw ParseError(where + ": missing numeric \"tau\"");
    const double tau = j["tau"].get<double>();
    if (!(tau > 0.0)) throw ParseError(where + ": tau must be positive");
    if (kind == "integer_levels") {
        if (!j.contains("levels") || !j["levels"].is_array())
            throw ParseError(where + ": integer_levels needs \"levels\"");
        std::vector<std::int64_t> levels;
        for (const auto& v : j["levels"]) {
            if (!v.is_number_integer()) throw ParseError(where + ": levels must be integers");
            levels.push_back(v.get<std::int64_t>());
        }
        const double offset = j.value("offset", 0.0);
        Matrix basis;
        if (j.contains("basis")) basis = parse_matrix(j["basis"], where + ".basis");
        return PeriodicHamiltonian::from_levels(tau, std::move(levels), offset, std::move(basis));
    }
    if (kind == "hermitian") {
        if (!j.contains("matrix")) throw ParseError(where + ": hermitian needs \"matrix\"");
        return snap_hermitian(parse_matrix(j["matrix"], where + ".matrix"), tau, tol_snap);
    }
    throw ParseError(where + ": unknown hamiltonian kind \"" + kind + "\"");
}

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw ParseError(path + ": " + ex.what());
    }
    return j;
}

inline StateFile load_state(const std::string& path) { return parse_state(load_json(path), path); }

inline PeriodicHamiltonian load_hamiltonian(const std::string& path, double tol_snap = 1e-6) {
    return parse_hamiltonian(load_json(path), path, tol_snap);
}

// 17 significant digits: enough for a bit-exact double round-trip.
inline std::string format_real(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// Reals are emitted as decimal strings so the declared precision survives
// any JSON printer.
inline json real_field(double x) { return json(format_real(x)); }

inline json conversion_report_json(const ConversionReport& r) {
    return json{{"n_in", r.n_in},
                {"n_out", r.n_out},
                {"rate", real_field(r.rate)},
                {"shift", r.shift},
                {"overlap", real_field(r.overlap)},
                {"trace_error", real_field(r.trace_error)},
                {"error_upper_bound", real_field(r.error_upper_bound)},
                {"converse_floor", real_field(r.converse_floor)}};
}

inline json protocol_report_json(const ProtocolReport& r) {
    return json{{"m", r.m},
                {"delta", real_field(r.delta)},
                {"p_err", real_field(r.p_err)},
                {"cbit_rate", real_field(r.cbit_rate)},
                {"target_cost", real_field(r.target_cost)},
                {"achieved_error", real_field(r.achieved_error)}};
}

inline std::string convert_sweep_csv(const std::vector<ConversionReport>& rows) {
    std::ostringstream os;
    os << "n,R,k,overlap,trace_error,upper_bound,converse_floor\n";
    for (const auto& r : rows)
        os << r.n_in << ',' << format_real(r.rate) << ',' << r.shift << ','
           << format_real(r.overlap) << ',' << format_real(r.trace_error) << ','
           << format_real(r.error_upper_bound) << ',' << format_real(r.converse_floor) << '\n';
    return os.str();
}

inline std::string cost_sweep_csv(const std::vector<ProtocolReport>& rows) {
    std::ostringstream os;
    os << "m,delta,p_err,cbit_rate,target_cost,achieved_error\n";
    for (const auto& r : rows)
        os << r.m << ',' << format_real(r.delta) << ',' << format_real(r.p_err) << ','
           << format_real(r.cbit_rate) << ',' << format_real(r.target_cost) << ','
           << format_real(r.achieved_error) << '\n';
    return os.str();
}

} // namespace coh
