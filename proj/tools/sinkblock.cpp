// Batch front door: matrix scaling runs, limit decompositions, Hall-blocker
// extraction and oracle cross-checks over the text formats in io.hpp.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>

#include "sb/decomposition.hpp"
#include "sb/divergence.hpp"
#include "sb/hall.hpp"
#include "sb/io.hpp"
#include "sb/oracle.hpp"
#include "sb/parallel.hpp"
#include "sb/sinkhorn.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBlocker = 1;
constexpr int kExitParse = 2;
constexpr int kExitDimension = 3;
constexpr int kExitIsolated = 4;
constexpr int kExitDisagree = 5;

struct Options {
  std::string input;
  std::string row_marginals = "uniform";
  std::string col_marginals = "uniform";
  std::string iters = "1000";
  double tol = 0.0;  // stopping rules are opt-in; the default runs the full budget
  std::string format = "json";
  std::uint64_t record_stride = 0;
  std::string out;
  int sweep = 0;
  bool with_limit = false;
};

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sb::io::ParseError("cannot open '" + path + "'");
  return in;
}

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(opt.out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + opt.out + "'");
  os << text;
}

sb::MarginalPair load_marginals(const Options& opt, const sb::NonnegMatrix& a) {
  std::vector<sb::Rational> r, c;
  if (opt.row_marginals == "uniform") {
    r.assign(a.n_rows(), sb::Rational(1));
  } else {
    auto in = open_or_throw(opt.row_marginals);
    r = sb::io::read_rational_vector(in);
  }
  if (opt.col_marginals == "uniform") {
    c.assign(a.n_cols(), sb::Rational(1));
  } else {
    auto in = open_or_throw(opt.col_marginals);
    c = sb::io::read_rational_vector(in);
  }
  if (static_cast<int>(r.size()) != a.n_rows() || static_cast<int>(c.size()) != a.n_cols())
    throw sb::io::DimensionMismatch("marginal lengths do not match the matrix");
  return sb::MarginalPair(std::move(r), std::move(c));
}

std::uint64_t parse_iters(const std::string& text) {
  std::uint64_t v = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') throw sb::io::ParseError("bad --iters value '" + text + "'");
    v = v * 10 + static_cast<std::uint64_t>(ch - '0');
  }
  return v;
}

int cmd_scale(const Options& opt) {
  auto in = open_or_throw(opt.input);
  sb::NonnegMatrix a = sb::io::read_matrix(in);
  sb::MarginalPair mp = load_marginals(opt, a);
  if (opt.iters == "auto" || opt.iters == "theorem")
    throw sb::io::ParseError("--iters auto/theorem is only valid for the blocker command");

  sb::StopRule stop = opt.tol > 0 ? sb::StopRule::marginal_change(opt.tol) : sb::StopRule::none();
  sb::RunResult res = sb::run(a, mp, parse_iters(opt.iters), stop, opt.record_stride);

  if (opt.format == "csv") {
    std::ostringstream os;
    res.trajectory.write_csv(os);
    emit(opt, os.str());
    return kExitOk;
  }

  std::vector<double> p = res.state.row_marginal();
  std::vector<double> q = res.state.matrix().col_sums();
  if (opt.format == "text") {
    std::ostringstream os;
    os << "iterations " << res.state.iteration() << "\n";
    os << "divergence " << res.state.divergence() << "\n";
    os << "row_marginal";
    for (double v : p) os << ' ' << v;
    os << "\ncol_marginal";
    for (double v : q) os << ' ' << v;
    os << "\n";
    emit(opt, os.str());
    return kExitOk;
  }

  nlohmann::ordered_json out;
  out["iterations"] = res.state.iteration();
  out["divergence"] = res.state.divergence();
  out["row_marginal"] = p;
  out["col_marginal"] = q;
  nlohmann::ordered_json traj = nlohmann::ordered_json::array();
  for (const auto& rec : res.trajectory.records)
    traj.push_back({{"k", rec.k},
                    {"divergence", rec.divergence},
                    {"linf_change", rec.linf_change},
                    {"row_marginal", rec.row_marginal}});
  out["trajectory"] = std::move(traj);
  emit(opt, out.dump(2) + "\n");
  return kExitOk;
}

int cmd_decompose(const Options& opt) {
  if (opt.iters == "auto" || opt.iters == "theorem")
    throw sb::io::ParseError("--iters auto/theorem is only valid for the blocker command");
  auto in = open_or_throw(opt.input);
  sb::NonnegMatrix a = sb::io::read_matrix(in);
  sb::MarginalPair mp = load_marginals(opt, a);
  sb::PrincipalPartition pp = sb::principal_partition(a, mp);
  sb::RefinedDecomposition rd = sb::refined_chain(a, mp, pp);
  std::optional<sb::SinkhornLimit> limit;
  if (opt.with_limit) limit = sb::sinkhorn_limit(a, mp, rd);
  emit(opt, sb::io::decomposition_report(pp, rd, limit).dump(2) + "\n");
  return kExitOk;
}

int cmd_blocker(const Options& opt) {
  auto in = open_or_throw(opt.input);
  sb::BipartiteGraph g = sb::io::read_graph(in);
  sb::SortResult sorted;
  if (opt.iters == "auto") {
    sorted = sb::sinkhorn_and_sort_auto(g);
  } else if (opt.iters == "theorem") {
    sorted = sb::sinkhorn_and_sort(g, sb::iteration_budget(g.n_total()));
    sorted.budget_mode = "theorem";
  } else {
    sorted = sb::sinkhorn_and_sort(g, parse_iters(opt.iters));
  }
  sb::HallReport rep = sb::best_blocker(g, sorted);
  emit(opt, sb::io::hall_report(g, rep).dump(2) + "\n");
  return rep.deficiency > 0 ? kExitBlocker : kExitOk;
}

// Flow decomposition against the oracle hull, and (for 0/1 inputs with
// uniform marginals) the blocker against exhaustive deficiency search.
bool check_one(const sb::NonnegMatrix& a, const sb::MarginalPair& mp, std::string& complaint) {
  sb::PrincipalPartition pp = sb::principal_partition(a, mp);
  auto hull = sb::oracle::hull_extremes(sb::oracle::stable_points(a, mp));
  if (hull.size() != static_cast<std::size_t>(pp.theta) + 1) {
    complaint = "theta mismatch";
    return false;
  }
  for (std::size_t k = 0; k < hull.size(); ++k)
    if (!(hull[k].set == pp.extreme_sets[k])) {
      complaint = "extreme set mismatch at position " + std::to_string(k);
      return false;
    }
  if (!sb::oracle::verify_kkt(a, mp, pp)) {
    complaint = "KKT certificate failed";
    return false;
  }

  bool zero_one = true;
  for (double v : a.values()) zero_one &= v == 1.0;
  bool uniform = true;
  for (const sb::Rational& v : mp.r()) uniform &= v == 1;
  for (const sb::Rational& v : mp.c()) uniform &= v == 1;
  if (zero_one && uniform) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < a.n_rows(); ++i)
      for (int j : a.row_cols(i)) edges.push_back({i, j});
    sb::BipartiteGraph g(a.n_rows(), a.n_cols(), std::move(edges));
    sb::HallReport rep = sb::best_blocker(g, sb::sinkhorn_and_sort_auto(g));
    auto exhaustive = sb::oracle::max_deficiency_exhaustive(g);
    if (rep.deficiency != exhaustive.value) {
      complaint = "blocker deficiency " + std::to_string(rep.deficiency) + " != exhaustive " +
                  std::to_string(exhaustive.value);
      return false;
    }
  }
  return true;
}

int cmd_oracle_check(const Options& opt) {
  if (opt.sweep > 0) {
    const int n = opt.sweep;
    if (n > 4) throw sb::io::ParseError("sweep size too large (max 4)");
    std::vector<std::uint32_t> patterns;
    for (std::uint32_t bits = 0; bits < (1u << (n * n)); ++bits) {
      bool ok = true;
      for (int i = 0; i < n && ok; ++i)
        ok = ((bits >> (i * n)) & ((1u << n) - 1)) != 0;
      for (int j = 0; j < n && ok; ++j) {
        bool hit = false;
        for (int i = 0; i < n; ++i) hit |= bits >> (i * n + j) & 1;
        ok = hit;
      }
      if (ok) patterns.push_back(bits);
    }

    std::mutex mu;
    std::vector<std::pair<std::uint32_t, std::string>> failures;
    sb::parallel_for(patterns.size(), [&](std::size_t idx) {
      std::uint32_t bits = patterns[idx];
      std::vector<sb::Triplet> entries;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (bits >> (i * n + j) & 1) entries.push_back({i, j, 1.0});
      sb::NonnegMatrix a(n, n, std::move(entries));
      std::string complaint;
      if (!check_one(a, sb::MarginalPair::uniform(n, n), complaint)) {
        std::lock_guard<std::mutex> lock(mu);
        failures.push_back({bits, complaint});
      }
    });
    if (!failures.empty()) {
      std::sort(failures.begin(), failures.end());
      std::cerr << "disagreement on pattern " << failures.front().first << ": "
                << failures.front().second << "\n";
      return kExitDisagree;
    }
    emit(opt, "oracle-check: sweep " + std::to_string(n) + "x" + std::to_string(n) + " over " +
                  std::to_string(patterns.size()) + " patterns agreed\n");
    return kExitOk;
  }

  auto in = open_or_throw(opt.input);
  sb::NonnegMatrix a = sb::io::read_matrix(in);
  if (a.n_rows() > 16 || a.n_cols() > 16)
    throw sb::io::ParseError("oracle-check input too large (16 per side max)");
  sb::MarginalPair mp = load_marginals(opt, a);
  std::string complaint;
  if (!check_one(a, mp, complaint)) {
    std::cerr << "disagreement: " << complaint << "\n";
    return kExitDisagree;
  }
  emit(opt, "oracle-check: agreed\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sinkhorn scaling, limit decomposition and Hall blockers"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input)
      sub->add_option("--input", opt.input, "input file")->required();
    sub->add_option("--row-marginals", opt.row_marginals, "path or 'uniform'");
    sub->add_option("--col-marginals", opt.col_marginals, "path or 'uniform'");
    sub->add_option("--iters", opt.iters, "iteration count, 'auto' or 'theorem'");
    sub->add_option("--tol", opt.tol, "marginal-change stopping tolerance (0 disables)");
    sub->add_option("--format", opt.format, "json|csv|text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--record-stride", opt.record_stride, "trajectory stride (0 = default)");
    sub->add_option("--out", opt.out, "output path (default stdout)");
  };

  CLI::App* scale = app.add_subcommand("scale", "run the scaling iteration");
  add_common(scale, true);
  CLI::App* decompose = app.add_subcommand("decompose", "principal partition and fine blocks");
  add_common(decompose, true);
  decompose->add_flag("--with-limit", opt.with_limit, "include the limit pair (M*, N*)");
  CLI::App* blocker = app.add_subcommand("blocker", "extract a Hall blocker candidate");
  add_common(blocker, true);
  CLI::App* oracle_check = app.add_subcommand("oracle-check", "cross-check against brute force");
  add_common(oracle_check, false);
  oracle_check->add_option("--input", opt.input, "input file (omit when sweeping)");
  oracle_check->add_option("--sweep", opt.sweep, "exhaustive n x n sweep (uniform marginals)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitParse;
  }

  try {
    if (scale->parsed()) return cmd_scale(opt);
    if (decompose->parsed()) return cmd_decompose(opt);
    if (blocker->parsed()) return cmd_blocker(opt);
    if (oracle_check->parsed()) {
      if (opt.sweep == 0 && opt.input.empty())
        throw sb::io::ParseError("oracle-check needs --input or --sweep");
      return cmd_oracle_check(opt);
    }
  } catch (const sb::io::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDimension;
  } catch (const sb::IsolatedVertexError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIsolated;
  } catch (const sb::io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitOk;
}
