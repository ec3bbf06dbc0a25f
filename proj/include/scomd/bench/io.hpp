#pragma once

// File formats for the command-line tool.
//
//   price CSV       header a1,...,ad then one row of nonnegative reals per round
//   observables     {"dimension": d, "observables": [[[re, im], ... d*d, row-major], ...]}
//                   optional "outcomes" (0-based) and "true_state" (same layout)
//   trace CSV       t,loss,cum_loss,cmp_cum_loss,regret,r_t

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "scomd/error.hpp"
#include "scomd/ops.hpp"
#include "scomd/quantum.hpp"

namespace scomd::bench {

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    std::string_view cell = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) cell.remove_suffix(1);
    out.push_back(cell);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(std::string_view cell, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw DataError("line " + std::to_string(line_no) + ": cannot parse '" + std::string(cell) + "' as a number");
  return v;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline std::vector<PriceRelatives> parse_price_csv(std::string_view text) {
  std::vector<PriceRelatives> out;
  std::size_t line_no = 0;
  Eigen::Index d = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const auto cells = detail::split_commas(line);
    if (d == 0) {
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i] != "a" + std::to_string(i + 1))
          throw DataError("price CSV header must be a1,...,ad (line " + std::to_string(line_no) + ")");
      d = static_cast<Eigen::Index>(cells.size());
      continue;
    }
    if (static_cast<Eigen::Index>(cells.size()) != d)
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(d) + " columns");
    Eigen::VectorXd a(d);
    for (Eigen::Index i = 0; i < d; ++i) a(i) = detail::parse_double(cells[static_cast<std::size_t>(i)], line_no);
    try {
      out.emplace_back(std::move(a));
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (d == 0) throw DataError("price CSV has no header");
  if (out.empty()) throw DataError("price CSV has no rounds");
  return out;
}

inline std::vector<PriceRelatives> read_price_csv(const std::string& path) {
  return parse_price_csv(detail::read_file(path));
}

inline void write_price_csv(std::ostream& out, std::span<const PriceRelatives> stream) {
  if (stream.empty()) return;
  const Eigen::Index d = stream.front().dim();
  for (Eigen::Index i = 0; i < d; ++i) out << (i ? "," : "") << 'a' << i + 1;
  out << '\n';
  char buf[32];
  for (const PriceRelatives& a : stream) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto res = std::to_chars(buf, buf + sizeof buf, a[i]);
      out << (i ? "," : "") << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

inline nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back({m(i, j).real(), m(i, j).imag()});
  return entries;
}

inline HermitianMatrix matrix_from_json(const nlohmann::json& j, Eigen::Index d) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != d * d)
    throw DataError("expected " + std::to_string(d * d) + " [re, im] entries");
  ComplexMatrix m(d, d);
  for (Eigen::Index k = 0; k < d * d; ++k) {
    const auto& e = j[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw DataError("matrix entries must be [re, im] pairs");
    m(k / d, k % d) = {e[0].get<double>(), e[1].get<double>()};
  }
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw DataError("matrix is not Hermitian");
  return HermitianMatrix(m);
}

struct ObservableFile {
  Eigen::Index dimension = 0;
  std::vector<Observable> observables;
  std::vector<std::size_t> outcomes;
  std::optional<DensityMatrix> true_state;
};

inline ObservableFile parse_observables_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("observables JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dimension") || !j.contains("observables"))
    throw DataError("observables JSON needs 'dimension' and 'observables'");
  ObservableFile out;
  if (!j["dimension"].is_number_integer() || j["dimension"].get<long long>() < 1)
    throw DataError("observables JSON: 'dimension' must be a positive integer");
  out.dimension = j["dimension"].get<Eigen::Index>();
  if (!j["observables"].is_array()) throw DataError("observables JSON: 'observables' must be an array");
  std::size_t k = 0;
  for (const auto& m : j["observables"]) {
    try {
      out.observables.emplace_back(matrix_from_json(m, out.dimension));
    } catch (const DataError& e) {
      throw DataError("observable " + std::to_string(k) + ": " + e.what());
    }
    ++k;
  }
  if (out.observables.empty()) throw DataError("observables JSON has no rounds");
  if (j.contains("outcomes")) out.outcomes = j["outcomes"].get<std::vector<std::size_t>>();
  if (j.contains("true_state")) out.true_state.emplace(matrix_from_json(j["true_state"], out.dimension));
  return out;
}

inline ObservableFile read_observables_json(const std::string& path) {
  return parse_observables_json(detail::read_file(path));
}

inline nlohmann::json observables_to_json(Eigen::Index d, std::span<const Observable> observables,
                                          std::span<const std::size_t> outcomes = {},
                                          const DensityMatrix* true_state = nullptr) {
  nlohmann::json j;
  j["dimension"] = d;
  j["observables"] = nlohmann::json::array();
  for (const Observable& a : observables) j["observables"].push_back(matrix_to_json(a.matrix()));
  if (!outcomes.empty()) j["outcomes"] = std::vector<std::size_t>(outcomes.begin(), outcomes.end());
  if (true_state) j["true_state"] = matrix_to_json(true_state->matrix());
  return j;
}

}  // namespace scomd::bench
