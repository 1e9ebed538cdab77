#include "owl/isotonic.hpp"

#include <algorithm>
#include <cstddef>

namespace owl {

namespace {

struct Block {
  double sum;
  std::size_t count;
  double mean() const { return sum / static_cast<double>(count); }
};

template <class Emit>
void pool_adjacent_violators(std::span<const double> v, Emit&& emit) {
  std::vector<Block> stack;
  stack.reserve(v.size());
  for (double value : v) {
    stack.push_back({value, 1});
    // Non-increasing fit: a block whose mean rises above its predecessor's
    // violates the order and is pooled into it.
    while (stack.size() > 1 && stack[stack.size() - 2].mean() <= stack.back().mean()) {
      const Block top = stack.back();
      stack.pop_back();
      stack.back().sum += top.sum;
      stack.back().count += top.count;
    }
  }
  for (const Block& b : stack) {
    emit(b.mean(), b.count);
  }
}

}  // namespace

std::vector<double> isotonic_nonincreasing(std::span<const double> v) {
  std::vector<double> out;
  out.reserve(v.size());
  pool_adjacent_violators(v, [&](double level, std::size_t count) {
    out.insert(out.end(), count, level);
  });
  return out;
}

std::vector<double> isotonic_nonincreasing_nonnegative(std::span<const double> v) {
  std::vector<double> out;
  out.reserve(v.size());
  pool_adjacent_violators(v, [&](double level, std::size_t count) {
    out.insert(out.end(), count, std::max(level, 0.0));
  });
  return out;
}

}  // namespace owl
