#include "owl/datagen.hpp"

#include "owl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace owl {

GroupStructure::GroupStructure(std::vector<std::vector<Eigen::Index>> groups,
                               std::vector<int> signs)
    : groups_(std::move(groups)), signs_(std::move(signs)) {
  Eigen::Index p = 0;
  for (const auto& g : groups_) {
    if (g.empty()) {
      throw std::invalid_argument("GroupStructure: empty group");
    }
    p += static_cast<Eigen::Index>(g.size());
  }
  if (groups_.empty()) {
    throw std::invalid_argument("GroupStructure: no groups");
  }
  owner_.assign(static_cast<std::size_t>(p), -1);
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    for (Eigen::Index j : groups_[gi]) {
      if (j < 0 || j >= p || owner_[static_cast<std::size_t>(j)] != -1) {
        throw std::invalid_argument("GroupStructure: groups must partition 0..p-1");
      }
      owner_[static_cast<std::size_t>(j)] = static_cast<Eigen::Index>(gi);
    }
  }
  if (signs_.empty()) {
    signs_.assign(static_cast<std::size_t>(p), 1);
  }
  if (static_cast<Eigen::Index>(signs_.size()) != p) {
    throw std::invalid_argument("GroupStructure: signs must have one entry per column");
  }
  for (int s : signs_) {
    if (s != 1 && s != -1) {
      throw std::invalid_argument("GroupStructure: signs must be +1 or -1");
    }
  }
}

GroupStructure GroupStructure::contiguous(Eigen::Index p, Eigen::Index q) {
  if (q < 1 || q > p) {
    throw std::invalid_argument("GroupStructure::contiguous: need 1 <= q <= p");
  }
  std::vector<std::vector<Eigen::Index>> groups(static_cast<std::size_t>(q));
  const Eigen::Index base = p / q;
  const Eigen::Index extra = p % q;
  Eigen::Index j = 0;
  for (Eigen::Index g = 0; g < q; ++g) {
    const Eigen::Index size = base + (g < extra ? 1 : 0);
    for (Eigen::Index k = 0; k < size; ++k) {
      groups[static_cast<std::size_t>(g)].push_back(j++);
    }
  }
  return GroupStructure(std::move(groups));
}

GroupStructure GroupStructure::singletons(Eigen::Index p) { return contiguous(p, p); }

GroupStructure GroupStructure::parse(const std::string& text) {
  std::vector<std::vector<Eigen::Index>> groups;
  std::vector<std::pair<Eigen::Index, int>> columns;
  std::stringstream outer(text);
  std::string group_text;
  while (std::getline(outer, group_text, ';')) {
    std::vector<Eigen::Index> group;
    std::stringstream inner(group_text);
    std::string item;
    while (std::getline(inner, item, ',')) {
      const auto first = item.find_first_not_of(" \t");
      if (first == std::string::npos) {
        continue;
      }
      item = item.substr(first, item.find_last_not_of(" \t") - first + 1);
      int sign = 1;
      if (item[0] == '-') {
        sign = -1;
        item.erase(0, 1);
      }
      std::size_t used = 0;
      long long idx = 0;
      try {
        idx = std::stoll(item, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("GroupStructure::parse: bad column index '" + item + "'");
      }
      if (used != item.size() || idx < 1) {
        throw std::invalid_argument("GroupStructure::parse: bad column index '" + item + "'");
      }
      group.push_back(static_cast<Eigen::Index>(idx - 1));
      columns.emplace_back(static_cast<Eigen::Index>(idx - 1), sign);
    }
    groups.push_back(std::move(group));
  }
  std::vector<int> signs(columns.size(), 1);
  for (const auto& [j, sign] : columns) {
    if (j >= static_cast<Eigen::Index>(signs.size())) {
      throw std::invalid_argument("GroupStructure::parse: groups must partition 1..p");
    }
    signs[static_cast<std::size_t>(j)] = sign;
  }
  return GroupStructure(std::move(groups), std::move(signs));
}

std::string GroupStructure::to_string() const {
  std::ostringstream out;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (g > 0) {
      out << ';';
    }
    for (std::size_t k = 0; k < groups_[g].size(); ++k) {
      const Eigen::Index j = groups_[g][k];
      if (k > 0) {
        out << ',';
      }
      if (signs_[static_cast<std::size_t>(j)] < 0) {
        out << '-';
      }
      out << (j + 1);
    }
  }
  return out.str();
}

Matrix replication_matrix(const GroupStructure& gs) {
  Matrix c = Matrix::Zero(gs.q(), gs.p());
  for (Eigen::Index j = 0; j < gs.p(); ++j) {
    c(gs.group_of(j), j) = gs.signs()[static_cast<std::size_t>(j)];
  }
  return c;
}

Matrix sample_design(Eigen::Index n, const MatrixRef& c, std::uint64_t seed) {
  if (n < 1) {
    throw std::invalid_argument("sample_design: n must be >= 1");
  }
  const Eigen::Index q = c.rows();
  const CounterRng rng(seed, streams::kDesign);
  Matrix b(n, q);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < q; ++k) {
      b(i, k) = rng.normal_at(static_cast<std::uint64_t>(i * q + k));
    }
  }
  return b * c;
}

CoefficientVector sample_signal(const GroupStructure& gs, Eigen::Index s, std::uint64_t seed,
                                SignalOptions opts) {
  const Eigen::Index q = gs.q();
  if (s < 0 || s > q) {
    throw std::invalid_argument("sample_signal: need 0 <= s <= q");
  }
  CoefficientVector x = CoefficientVector::Zero(gs.p());
  if (s == 0) {
    return x;
  }
  CounterRng rng(seed, streams::kSignal);
  // Partial Fisher-Yates: the first s entries become a uniform s-subset.
  std::vector<Eigen::Index> pick(static_cast<std::size_t>(q));
  std::iota(pick.begin(), pick.end(), Eigen::Index{0});
  for (Eigen::Index k = 0; k < s; ++k) {
    const auto span = static_cast<std::uint64_t>(q - k);
    const auto offset = static_cast<Eigen::Index>(rng() % span);
    std::swap(pick[static_cast<std::size_t>(k)], pick[static_cast<std::size_t>(k + offset)]);
  }

  const double group_mass = 1.0 / std::sqrt(static_cast<double>(s));
  for (Eigen::Index k = 0; k < s; ++k) {
    const auto& members = gs.groups()[static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])];
    const double each = group_mass / static_cast<double>(members.size());
    for (Eigen::Index j : members) {
      double magnitude = each;
      if (opts.perturbed) {
        magnitude *= 1.0 + 0.1 * (2.0 * rng.uniform() - 1.0);
      }
      x[j] = gs.signs()[static_cast<std::size_t>(j)] * magnitude;
    }
  }
  x *= std::sqrt(static_cast<double>(s)) / x.lpNorm<1>();
  return x;
}

Vector sample_noise(Eigen::Index n, double epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument("sample_noise: epsilon must be >= 0");
  }
  Vector nu = Vector::Zero(n);
  if (epsilon == 0.0 || n == 0) {
    return nu;
  }
  const CounterRng rng(seed, streams::kNoise);
  for (Eigen::Index i = 0; i < n; ++i) {
    nu[i] = rng.normal_at(static_cast<std::uint64_t>(i));
  }
  nu *= epsilon * static_cast<double>(n) / nu.lpNorm<1>();
  return nu;
}

Dataset generate(const GenerativeModel& model, std::string* warning) {
  const GroupStructure& gs = model.groups;
  if (warning != nullptr) {
    warning->clear();
    if (gs.q() < model.n) {
      *warning = "latent dimension q=" + std::to_string(gs.q()) + " is smaller than n=" +
                 std::to_string(model.n) + "; the error bound assumes q >= n";
    }
  }
  Dataset d;
  d.a = sample_design(model.n, replication_matrix(gs), model.seed);
  d.x_star = sample_signal(gs, model.s, model.seed, model.signal);
  d.noise = sample_noise(model.n, model.epsilon, model.seed);
  d.y = d.a * d.x_star + d.noise;
  return d;
}

}  // namespace owl
