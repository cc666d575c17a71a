#include "sb/io.hpp"

#include <istream>
#include <sstream>

namespace sb::io {

namespace {

std::vector<int> one_based(const std::vector<int>& xs) {
  std::vector<int> out;
  out.reserve(xs.size());
  for (int x : xs) out.push_back(x + 1);
  return out;
}

}  // namespace

NonnegMatrix read_matrix(std::istream& in) {
  int n = 0, m = 0;
  if (!(in >> n >> m)) throw ParseError("matrix: missing 'n m' header");
  if (n <= 0 || m <= 0) throw ParseError("matrix: dimensions must be positive");
  std::vector<Triplet> entries;
  int i, j;
  std::string value_text;
  while (in >> i >> j >> value_text) {
    if (i < 1 || i > n || j < 1 || j > m) throw ParseError("matrix: entry index out of range");
    double v;
    try {
      v = to_double(parse_rational(value_text));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("matrix: bad value: ") + e.what());
    }
    if (!(v > 0.0)) throw ParseError("matrix: entries must be positive");
    entries.push_back({i - 1, j - 1, v});
  }
  if (!in.eof()) throw ParseError("matrix: malformed entry line");
  try {
    return NonnegMatrix(n, m, std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("matrix: ") + e.what());
  }
}

std::vector<Rational> read_rational_vector(std::istream& in) {
  std::vector<Rational> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string token;
    std::istringstream ls(line);
    if (!(ls >> token)) continue;  // blank line
    std::string extra;
    if (ls >> extra) throw ParseError("vector: one value per line expected");
    try {
      out.push_back(parse_rational(token));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("vector: ") + e.what());
    }
  }
  if (out.empty()) throw ParseError("vector: no values");
  return out;
}

BipartiteGraph read_graph(std::istream& in) {
  int n1 = 0, n2 = 0;
  if (!(in >> n1 >> n2)) throw ParseError("graph: missing 'n1 n2' header");
  if (n1 <= 0 || n2 <= 0) throw ParseError("graph: sides must be positive");
  std::vector<std::pair<int, int>> edges;
  int u, v;
  while (in >> u >> v) {
    if (u < 1 || u > n1 || v < 1 || v > n2) throw ParseError("graph: edge endpoint out of range");
    edges.push_back({u - 1, v - 1});
  }
  if (!in.eof()) throw ParseError("graph: malformed edge line");
  return BipartiteGraph(n1, n2, std::move(edges));
}

nlohmann::ordered_json decomposition_report(const PrincipalPartition& pp,
                                            const RefinedDecomposition& rd,
                                            const std::optional<SinkhornLimit>& limit) {
  nlohmann::ordered_json out;
  out["theta"] = pp.theta;

  nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
  for (const PartitionBlock& blk : pp.blocks) {
    nlohmann::ordered_json b;
    b["rows"] = one_based(blk.rows);
    b["cols"] = one_based(blk.cols);
    b["R"] = to_string(blk.row_sum);
    b["C"] = to_string(blk.col_sum);
    blocks.push_back(std::move(b));
  }
  out["blocks"] = std::move(blocks);

  nlohmann::ordered_json lambdas = nlohmann::ordered_json::array();
  for (const Rational& l : pp.critical_lambdas) lambdas.push_back(to_string(l));
  out["critical_lambdas"] = std::move(lambdas);

  nlohmann::ordered_json pstar = nlohmann::ordered_json::array();
  for (const Rational& v : pp.p_star) pstar.push_back(to_string(v));
  out["p_star"] = std::move(pstar);

  nlohmann::ordered_json fine = nlohmann::ordered_json::array();
  for (const auto& per_kappa : rd.fine_blocks) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const FineBlock& fb : per_kappa) {
      nlohmann::ordered_json b;
      b["rows"] = one_based(fb.rows);
      b["cols"] = one_based(fb.cols);
      list.push_back(std::move(b));
    }
    fine.push_back(std::move(list));
  }
  out["fine_blocks"] = std::move(fine);

  if (limit) {
    auto entry_list = [](const NonnegMatrix& a) {
      nlohmann::ordered_json list = nlohmann::ordered_json::array();
      for (int i = 0; i < a.n_rows(); ++i) {
        auto cols = a.row_cols(i);
        auto vals = a.row_vals(i);
        for (std::size_t e = 0; e < cols.size(); ++e)
          list.push_back({i + 1, cols[e] + 1, vals[e]});
      }
      return list;
    };
    out["limit"] = {{"M", entry_list(limit->m_star)}, {"N", entry_list(limit->n_star)}};
  }
  return out;
}

nlohmann::ordered_json hall_report(const BipartiteGraph& g, const HallReport& rep) {
  nlohmann::ordered_json out;
  out["n1"] = g.n_left();
  out["n2"] = g.n_right();
  nlohmann::ordered_json cands = nlohmann::ordered_json::array();
  for (const auto& c : rep.candidates) cands.push_back(one_based(c));
  out["candidates"] = std::move(cands);
  out["best_set"] = one_based(rep.best_set);
  out["deficiency"] = rep.deficiency;
  out["matching_number"] = rep.matching_number;
  out["has_perfect_matching"] = rep.has_perfect_matching;
  out["iterations_used"] = rep.iterations_used;
  out["budget_mode"] = rep.budget_mode;
  out["p_final"] = rep.p_final;
  return out;
}

}  // namespace sb::io
