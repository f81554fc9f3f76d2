#pragma once

// JSON and CSV encodings: matrices, power-law fits, sweep records.

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eth.hpp"
#include "matrix.hpp"
#include "numerics.hpp"

namespace susyqm {

/// {"n": n, "rows": [[...], ...]}
inline nlohmann::json matrix_to_json(const Matrix& m) {
    if (!m.square()) throw numerical_error("matrix JSON requires a square matrix");
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return nlohmann::json{{"n", m.rows()}, {"rows", rows}};
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    try {
        const auto n = j.at("n").get<std::size_t>();
        const auto& rows = j.at("rows");
        if (!rows.is_array() || rows.size() != n) throw numerical_error("matrix JSON row count mismatch");
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = rows[i].get<std::vector<double>>();
            if (r.size() != n) throw numerical_error("matrix JSON row length mismatch");
            for (std::size_t k = 0; k < n; ++k) m(i, k) = r[k];
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw numerical_error(std::string("malformed matrix JSON: ") + e.what());
    }
}

inline void write_matrix_json(std::ostream& os, const Matrix& m) { os << matrix_to_json(m).dump() << '\n'; }

inline Matrix read_matrix_json(std::istream& is) {
    try {
        return matrix_from_json(nlohmann::json::parse(is));
    } catch (const nlohmann::json::exception& e) {
        throw numerical_error(std::string("malformed matrix JSON: ") + e.what());
    }
}

/// {"p", "c", "r_squared", "condition"}
inline nlohmann::json fit_to_json(const PowerLawFit& fit, EthCondition condition) {
    return nlohmann::json{{"p", fit.p},
                          {"c", fit.c},
                          {"r_squared", fit.r_squared},
                          {"condition", static_cast<int>(condition)}};
}

/// Header n,iterations,statistic,seed; the statistic is the condition's.
inline void write_sweep_csv(std::ostream& os, const EthSweepResult& result) {
    os << "n,iterations,statistic,seed\n";
    for (const auto& r : result.records) {
        os << r.n << ',' << r.iterations << ',';
        detail::write_number(os, r.statistic(result.condition));
        os << ',' << r.seed.value << '\n';
    }
}

}  // namespace susyqm
