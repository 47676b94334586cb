#include "debias/random.hpp"

#include <vector>

namespace debias {
namespace {

std::seed_seq make_seed_seq(std::uint64_t seed,
                            std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (path.size() + 1) + 1);
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  // path length participates so {a} and {a, 0} differ
  words.push_back(static_cast<std::uint32_t>(path.size()));
  for (std::uint64_t v : path) push(v);
  return std::seed_seq(words.begin(), words.end());
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed) : RandomSource(seed, {}) {}

RandomSource::RandomSource(std::uint64_t seed,
                           std::initializer_list<std::uint64_t> path)
    : engine_(derive_seed(seed, path)) {}

RandomSource RandomSource::substream(std::uint64_t seed,
                                     std::uint64_t replication,
                                     StreamRole role) {
  return RandomSource(seed, {replication, static_cast<std::uint64_t>(role)});
}

std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> path) {
  auto seq = make_seed_seq(seed, path);
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

}  // namespace debias
