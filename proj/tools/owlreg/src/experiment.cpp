#include "owlreg/experiment.hpp"

#include "owlreg/io.hpp"

#include "owl/analysis.hpp"
#include "owl/datagen.hpp"
#include "owl/rng.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace owlreg {

namespace {

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> items;
  while (true) {
    const auto comma = value.find(',');
    items.push_back(trim(value.substr(0, comma)));
    if (comma == std::string_view::npos) {
      break;
    }
    value = value.substr(comma + 1);
  }
  return items;
}

std::vector<Eigen::Index> parse_index_list(std::string_view value, const std::string& key,
                                           long long min_value) {
  std::vector<Eigen::Index> out;
  for (const auto item : split_list(value)) {
    const long long v = parse_integer(item, "config key '" + key + "'");
    if (v < min_value) {
      throw ParseError("config key '" + key + "': values must be >= " +
                       std::to_string(min_value));
    }
    out.push_back(static_cast<Eigen::Index>(v));
  }
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      throw ParseError(where + ": expected KEY = VALUE");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      throw ParseError(where + ": empty key or value");
    }
    if (!kv.emplace(key, value).second) {
      throw ParseError(where + ": key '" + key + "' given twice");
    }
  }

  ExperimentConfig cfg;
  for (const auto& [key, value] : kv) {
    const std::string what = "config key '" + key + "'";
    if (key == "n") {
      cfg.n = parse_index_list(value, key, 1);
    } else if (key == "n_rule") {
      cfg.n_rule = parse_double(value, what);
      if (!(*cfg.n_rule > 0.0)) {
        throw ParseError(what + ": must be > 0");
      }
    } else if (key == "s") {
      cfg.s = parse_index_list(value, key, 0);
    } else if (key == "q") {
      cfg.q = parse_index_list(value, key, 2);
    } else if (key == "p") {
      cfg.p = parse_index_list(value, key, 2);
    } else if (key == "replication") {
      const long long r = parse_integer(value, what);
      if (r < 1) {
        throw ParseError(what + ": must be >= 1");
      }
      cfg.replication = static_cast<Eigen::Index>(r);
    } else if (key == "eps") {
      for (const auto item : split_list(value)) {
        const double e = parse_double(item, what);
        if (!(e >= 0.0) || !std::isfinite(e)) {
          throw ParseError(what + ": values must be finite and >= 0");
        }
        cfg.eps.push_back(e);
      }
    } else if (key == "weights") {
      cfg.weights = WeightSpec::parse(value);
    } else if (key == "trials") {
      const long long t = parse_integer(value, what);
      if (t < 1 || t > std::numeric_limits<int>::max()) {
        throw ParseError(what + ": must be >= 1");
      }
      cfg.trials = static_cast<int>(t);
    } else if (key == "seed") {
      const long long sd = parse_integer(value, what);
      if (sd < 0) {
        throw ParseError(what + ": must be >= 0");
      }
      cfg.seed = static_cast<std::uint64_t>(sd);
    } else if (key == "loss") {
      if (value == "abs") {
        cfg.loss = owl::Loss::AbsoluteL1;
      } else if (value == "sq") {
        cfg.loss = owl::Loss::SquaredL2;
      } else {
        throw ParseError(what + ": expected abs or sq");
      }
    } else if (key == "formulation") {
      if (value == "constrained") {
        cfg.constrained = true;
      } else if (value == "lagrangian") {
        cfg.constrained = false;
      } else {
        throw ParseError(what + ": expected constrained or lagrangian");
      }
    } else if (key == "output") {
      cfg.output = value;
    } else if (key == "trials_output") {
      cfg.trials_output = value;
    } else {
      throw ParseError("unknown config key '" + key + "'");
    }
  }

  if (cfg.n.empty() == !cfg.n_rule.has_value()) {
    throw ParseError("config: give exactly one of 'n' and 'n_rule'");
  }
  if (cfg.s.empty() || cfg.q.empty() || cfg.eps.empty()) {
    throw ParseError("config: 's', 'q' and 'eps' are required");
  }
  return cfg;
}

std::vector<CellSpec> expand_grid(const ExperimentConfig& cfg) {
  std::vector<CellSpec> cells;
  const std::vector<Eigen::Index> n_axis = cfg.n_rule ? std::vector<Eigen::Index>{0} : cfg.n;
  for (const Eigen::Index n : n_axis) {
    for (const Eigen::Index s : cfg.s) {
      for (const Eigen::Index q : cfg.q) {
        const std::vector<Eigen::Index> p_axis =
            cfg.p.empty() ? std::vector<Eigen::Index>{cfg.replication * q} : cfg.p;
        for (const Eigen::Index p : p_axis) {
          if (p < q) {
            throw ParseError("config: p = " + std::to_string(p) + " is below q = " +
                             std::to_string(q));
          }
          if (s > q) {
            throw ParseError("config: s = " + std::to_string(s) + " exceeds q = " +
                             std::to_string(q));
          }
          Eigen::Index cell_n = n;
          if (cfg.n_rule) {
            const double raw = *cfg.n_rule * static_cast<double>(s) *
                               std::log(static_cast<double>(p));
            cell_n = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::ceil(raw)));
          }
          for (const double e : cfg.eps) {
            cells.push_back({cell_n, s, q, p, e});
          }
        }
      }
    }
  }
  return cells;
}

bool CellResult::passed() const noexcept {
  return nonconverged < static_cast<int>(trials.size()) && ratio <= 1.0 && violations == 0;
}

bool ExperimentReport::passed() const noexcept {
  for (const auto& c : cells) {
    if (!c.passed()) {
      return false;
    }
  }
  return !cells.empty();
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  out << "n,s,q,p,eps,trials,mean_error,std_error,bound_rhs,ratio,clustering_violations,"
         "nonconverged\n";
  for (const auto& c : cells) {
    out << c.cell.n << ',' << c.cell.s << ',' << c.cell.q << ',' << c.cell.p << ','
        << format_double(c.cell.eps) << ',' << c.trials.size() << ','
        << format_double(c.mean_error) << ',' << format_double(c.std_error) << ','
        << format_double(c.bound) << ',' << format_double(c.ratio) << ',' << c.violations
        << ',' << c.nonconverged << '\n';
  }
  return out.str();
}

std::string ExperimentReport::trials_csv() const {
  std::ostringstream out;
  out << "cell,trial,seed,error,converged,infeasible,iterations,violations\n";
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const auto& trials = cells[ci].trials;
    for (std::size_t t = 0; t < trials.size(); ++t) {
      const auto& r = trials[t];
      out << ci << ',' << t << ',' << r.seed << ',' << format_double(r.error) << ','
          << (r.converged ? 1 : 0) << ',' << (r.infeasible ? 1 : 0) << ',' << r.iterations
          << ',' << r.violations << '\n';
    }
  }
  return out.str();
}

TrialResult run_trial(const ExperimentConfig& cfg, const CellSpec& cell, std::uint64_t seed,
                      const RunOptions& opts) {
  const owl::GroupStructure gs = owl::GroupStructure::contiguous(cell.p, cell.q);
  const owl::WeightVector w = cfg.weights.build(cell.p);
  const owl::Dataset d = owl::generate({gs, cell.n, cell.s, cell.eps, seed});

  owl::Formulation form = owl::Lagrangian{};
  if (cfg.constrained) {
    form = owl::Constrained{cell.eps};
  }
  const owl::ProblemInstance prob(d.a, d.y, w, cfg.loss, form);

  TrialResult r;
  r.seed = seed;
  owl::Solution sol;
  try {
    sol = owl::solve(prob, opts.solver);
  } catch (const owl::InfeasibleError&) {
    r.infeasible = true;
    return r;
  }
  r.converged = sol.converged;
  r.iterations = sol.iterations;
  r.error = owl::c_metric(sol.x_hat, d.x_star, owl::replication_matrix(gs));
  if (w.delta() > 0.0) {
    for (const auto& group : gs.groups()) {
      for (std::size_t a = 0; a < group.size(); ++a) {
        for (std::size_t b = a + 1; b < group.size(); ++b) {
          const Eigen::Index i = group[a];
          const Eigen::Index j = group[b];
          const double zi = gs.signs()[static_cast<std::size_t>(i)] * sol.x_hat[i];
          const double zj = gs.signs()[static_cast<std::size_t>(j)] * sol.x_hat[j];
          if (std::fabs(zi - zj) > opts.cluster_tol) {
            ++r.violations;
          }
        }
      }
    }
  }
  return r;
}

namespace {

void summarize(const ExperimentConfig& cfg, CellResult& c) {
  double sum = 0.0;
  int used = 0;
  for (const auto& t : c.trials) {
    if (t.converged) {
      sum += t.error;
      ++used;
      c.violations += t.violations;
    } else {
      ++c.nonconverged;
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  c.mean_error = used > 0 ? sum / used : nan;
  double ss = 0.0;
  for (const auto& t : c.trials) {
    if (t.converged) {
      ss += (t.error - c.mean_error) * (t.error - c.mean_error);
    }
  }
  c.std_error = used > 1 ? std::sqrt(ss / (used - 1)) : 0.0;

  const owl::WeightVector w = cfg.weights.build(c.cell.p);
  const owl::GroupStructure gs = owl::GroupStructure::contiguous(c.cell.p, c.cell.q);
  owl::BoundInputs b;
  b.s = static_cast<double>(c.cell.s);
  b.n = static_cast<double>(c.cell.n);
  b.p = static_cast<double>(c.cell.p);
  b.q = static_cast<double>(c.cell.q);
  b.w1_over_wbar = w.max_over_mean();
  b.c_l1_norm = owl::matrix_l1_norm(owl::replication_matrix(gs));
  b.epsilon = c.cell.eps;
  c.bound = owl::bound_rhs(b, owl::BoundVariant::GeneralQ);
  if (used == 0) {
    c.ratio = nan;
  } else if (c.bound > 0.0) {
    c.ratio = c.mean_error / c.bound;
  } else {
    c.ratio = c.mean_error == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  const std::vector<CellSpec> cells = expand_grid(cfg);
  ExperimentReport report;
  report.cells.resize(cells.size());
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    report.cells[ci].cell = cells[ci];
    report.cells[ci].trials.resize(static_cast<std::size_t>(cfg.trials));
  }

  // Jobs are (cell, trial) pairs handed out in order; each writes only its
  // own slot, so the result is independent of scheduling.
  const std::size_t per_cell = static_cast<std::size_t>(cfg.trials);
  const std::size_t jobs = cells.size() * per_cell;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  const auto worker = [&]() {
    while (!failed.load()) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) {
        return;
      }
      const std::size_t ci = job / per_cell;
      const std::size_t t = job % per_cell;
      try {
        const std::uint64_t seed = owl::derive_seed(cfg.seed, {ci, t});
        report.cells[ci].trials[t] = run_trial(cfg, cells[ci], seed, opts);
      } catch (...) {
        if (!failed.exchange(true)) {
          failure = std::current_exception();
        }
      }
    }
  };

  const int threads = std::max(1, opts.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) {
      pool.emplace_back(worker);
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  for (auto& c : report.cells) {
    summarize(cfg, c);
    if (opts.log) {
      *opts.log << "cell n=" << c.cell.n << " s=" << c.cell.s << " q=" << c.cell.q
                << " p=" << c.cell.p << " eps=" << format_double(c.cell.eps)
                << " mean=" << format_double(c.mean_error)
                << " bound=" << format_double(c.bound) << " ratio=" << format_double(c.ratio)
                << (c.passed() ? "" : " FAIL") << '\n';
    }
  }
  return report;
}

}  // namespace owlreg
