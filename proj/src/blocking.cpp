#include "reldev/blocking.hpp"

#include <algorithm>
#include <cmath>

#include "reldev/errors.hpp"

namespace reldev {

BlockPermutation::BlockPermutation(std::size_t n, std::size_t block_width)
    : n_(n), block_width_(block_width), block_count_(block_width == 0 ? 0 : n / block_width) {
    if (n == 0) {
        throw ArgumentError("block permutation needs n >= 1");
    }
    if (block_width == 0 || block_width > n) {
        throw ArgumentError("block width must lie in [1, n]");
    }
}

std::size_t BlockPermutation::permute_index(std::size_t k) const {
    if (k < 1 || k > n_) {
        throw ArgumentError("permute_index: k must lie in [1, n]");
    }
    if (k > block_count_ * block_width_) {
        return k;
    }
    const std::size_t l = block_count_;
    return ((k - 1) % l) * block_width_ + (k + l - 1) / l;
}

std::size_t BlockPermutation::prefix_length(double lambda) const {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw ArgumentError("prefix fraction lambda must lie in (0, 1]");
    }
    // Guard floor() against representation error, e.g. 0.2 * 500.
    const double scaled = lambda * static_cast<double>(n_);
    const auto m = static_cast<std::size_t>(std::floor(scaled + 1e-9 * (1.0 + scaled)));
    return std::min(m, n_);
}

std::vector<std::size_t> BlockPermutation::permuted_prefix(double lambda) const {
    const std::size_t m = prefix_length(lambda);
    std::vector<std::size_t> out;
    out.reserve(m);
    for (std::size_t k = 1; k <= m; ++k) {
        out.push_back(permute_index(k));
    }
    return out;
}

std::size_t permute_index(const BlockPermutation& p, std::size_t k) { return p.permute_index(k); }

std::vector<std::size_t> permuted_prefix(const BlockPermutation& p, double lambda) {
    return p.permuted_prefix(lambda);
}

}  // namespace reldev
