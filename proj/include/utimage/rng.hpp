#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace utimage {

// Seeded generator with fully pinned-down integer mappings. mt19937_64 output
// is specified by the standard, and we map to ranges by plain modulo, so a
// seed reproduces the same stream on every platform and compiler.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Inclusive range. Modulo bias is irrelevant for the tiny ranges used here.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    std::int64_t nonzero_int(std::int64_t lo, std::int64_t hi) {
        for (;;) {
            auto v = uniform_int(lo, hi);
            if (v != 0) return v;
        }
    }

    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(next() % static_cast<std::uint64_t>(n));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace utimage
