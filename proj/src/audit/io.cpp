// Copyright 2026 The bellsim Authors
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

#include "bellsim/audit/io.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace bellsim::audit {
namespace {

std::string format_probability(const double& v) { return fmt::format("{:.17g}", v); }
std::string format_probability(const Rational& v) {
  return fmt::format("{}/{}", numerator(v).str(), denominator(v).str());
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      return Rational(boost::multiprecision::cpp_int(trim(s.substr(0, slash))),
                      boost::multiprecision::cpp_int(trim(s.substr(slash + 1))));
    }
    return Rational(std::stod(s));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad probability value '" + s + "'");
  }
}

struct ParsedCsv {
  std::vector<VariableSpec> vars;
  std::vector<std::vector<std::int64_t>> rows;
  std::vector<std::string> counts;
  std::vector<std::string> probs;
};

ParsedCsv parse(std::istream& in) {
  ParsedCsv out;
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    header = split(line);
    break;
  }
  if (header.size() < 3 || trim(header[header.size() - 2]) != "count" ||
      trim(header.back()) != "probability") {
    throw std::invalid_argument("table CSV header must end with count,probability");
  }
  const std::size_t nv = header.size() - 2;
  std::vector<std::set<std::int64_t>> domains(nv);
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw std::invalid_argument("table CSV row has wrong arity");
    std::vector<std::int64_t> row(nv);
    for (std::size_t k = 0; k < nv; ++k) {
      try {
        std::size_t used = 0;
        row[k] = std::stoll(trim(cells[k]), &used);
        if (used != trim(cells[k]).size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw std::invalid_argument("bad variable value '" + cells[k] + "'");
      }
      domains[k].insert(row[k]);
    }
    out.rows.push_back(std::move(row));
    out.counts.push_back(trim(cells[nv]));
    out.probs.push_back(trim(cells[nv + 1]));
  }
  if (out.rows.empty()) throw std::invalid_argument("table CSV has no rows");
  for (std::size_t k = 0; k < nv; ++k) {
    out.vars.push_back({trim(header[k]), {domains[k].begin(), domains[k].end()}});
  }
  return out;
}

template <class S>
ProbabilityTable<S> build(const ParsedCsv& csv) {
  std::vector<std::size_t> sizes;
  for (const auto& v : csv.vars) sizes.push_back(v.size());
  const Indexer index(sizes);
  std::vector<std::size_t> idx(csv.vars.size());
  auto flat_of = [&](const std::vector<std::int64_t>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) idx[k] = *csv.vars[k].index_of(row[k]);
    return index.flatten(idx);
  };
  const bool counted = std::all_of(csv.counts.begin(), csv.counts.end(),
                                   [](const std::string& c) { return !c.empty(); });
  if (counted) {
    std::vector<std::uint64_t> counts(index.cells(), 0);
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
      try {
        counts[flat_of(csv.rows[r])] += std::stoull(csv.counts[r]);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad count '" + csv.counts[r] + "'");
      }
    }
    return ProbabilityTable<S>::from_counts(csv.vars, std::move(counts));
  }
  std::vector<S> p(index.cells(), S(0));
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const Rational v = parse_rational(csv.probs[r]);
    if constexpr (std::is_same_v<S, Rational>) {
      p[flat_of(csv.rows[r])] += v;
    } else {
      p[flat_of(csv.rows[r])] += to_double(v);
    }
  }
  return ProbabilityTable<S>::from_probabilities(csv.vars, std::move(p));
}

}  // namespace

template <class S>
void write_table_csv(std::ostream& out, const ProbabilityTable<S>& t) {
  for (const auto& v : t.variables()) fmt::print(out, "{},", v.name);
  fmt::print(out, "count,probability\n");
  std::vector<std::size_t> idx(t.variables().size());
  for (std::size_t f = 0; f < t.cell_count(); ++f) {
    t.indexer().unflatten(f, idx);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      fmt::print(out, "{},", t.variables()[k].values[idx[k]]);
    }
    if (t.has_counts()) fmt::print(out, "{}", t.count(f));
    fmt::print(out, ",{}\n", format_probability(t.p(f)));
  }
}

ProbabilityTable<double> read_table_csv(std::istream& in) { return build<double>(parse(in)); }

ProbabilityTable<Rational> read_rational_table_csv(std::istream& in) {
  return build<Rational>(parse(in));
}

template <class S>
nlohmann::json table_to_json(const ProbabilityTable<S>& t) {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : t.variables()) vars.push_back({{"name", v.name}, {"values", v.values}});
  nlohmann::json cells = nlohmann::json::array();
  std::vector<std::size_t> idx(t.variables().size());
  for (std::size_t f = 0; f < t.cell_count(); ++f) {
    t.indexer().unflatten(f, idx);
    std::vector<std::int64_t> values;
    for (std::size_t k = 0; k < idx.size(); ++k) values.push_back(t.variables()[k].values[idx[k]]);
    nlohmann::json cell{{"values", values}};
    if constexpr (std::is_same_v<S, Rational>) {
      cell["p"] = format_probability(t.p(f));
    } else {
      cell["p"] = t.p(f);
    }
    if (t.has_counts()) cell["count"] = t.count(f);
    cells.push_back(std::move(cell));
  }
  return {{"variables", vars}, {"n", t.total()}, {"cells", cells}};
}

nlohmann::json to_json(const TolerancePolicy& p) {
  if (p.mode == TolerancePolicy::Mode::absolute) {
    return {{"mode", "absolute"}, {"value", p.absolute}};
  }
  return {{"mode", "statistical"},
          {"nsigma", p.nsigma},
          {"witness_sigma", p.witness_sigma},
          {"min_cell_count", p.min_cell_count}};
}

nlohmann::json to_json(const ConditionVerdict& v) {
  return {{"condition", v.name},
          {"clause", v.clause},
          {"max_deviation", v.max_deviation},
          {"tolerance", v.tolerance},
          {"sigma", v.sigma},
          {"pass", v.pass},
          {"inconclusive", v.inconclusive},
          {"significant_violation", v.significant_violation},
          {"detail", v.detail},
          {"cells_tested", v.cells_tested},
          {"cells_skipped", v.cells_skipped}};
}

nlohmann::json to_json(const ImplicationReport& r) {
  return {{"premises", {{"FW", to_json(r.fw)}, {"NS2", to_json(r.ns)}, {"ST", to_json(r.st)}}},
          {"conclusion_FR", to_json(r.fr)},
          {"derived_tolerance", to_json(r.derived)},
          {"premises_hold", r.premises_hold},
          {"implication_holds", r.implication_holds},
          {"converse",
           {{"applicable", r.converse_applicable},
            {"FR", to_json(r.fr_base)},
            {"holds", r.converse_holds}}}};
}

nlohmann::json to_json(const FreeChoiceReport& r) {
  return {{"joint_factorization", to_json(r.joint_factorization)},
          {"local_factorization", to_json(r.local_factorization)},
          {"derived_ns", to_json(r.derived_ns)},
          {"derived_tolerance", to_json(r.derived)},
          {"premises_hold", r.premises_hold},
          {"derivation_holds", r.derivation_holds}};
}

template void write_table_csv(std::ostream&, const ProbabilityTable<double>&);
template void write_table_csv(std::ostream&, const ProbabilityTable<Rational>&);
template nlohmann::json table_to_json(const ProbabilityTable<double>&);
template nlohmann::json table_to_json(const ProbabilityTable<Rational>&);

}  // namespace bellsim::audit
