#pragma once

#include <cstddef>
#include <vector>

namespace reldev {

inline constexpr std::size_t kDefaultBlockWidth = 20;

/// Fixed interleaving of {1, ..., n} into floor(n / b) blocks of width b.
///
/// Position k (1-based) maps to T_k = ((k - 1) mod l) * b + ceil(k / l) for
/// k <= l * b and to k otherwise, so that the first l images are the first
/// elements of each block, the next l the second elements, and so on. All
/// indices exposed by this class are 1-based.
class BlockPermutation {
public:
    /// Throws ArgumentError unless n >= 1 and 1 <= block_width <= n.
    BlockPermutation(std::size_t n, std::size_t block_width = kDefaultBlockWidth);

    std::size_t size() const noexcept { return n_; }
    std::size_t block_width() const noexcept { return block_width_; }
    std::size_t block_count() const noexcept { return block_count_; }

    /// T_k for k in [1, n].
    std::size_t permute_index(std::size_t k) const;

    /// Number of observations in the lambda-prefix, floor(lambda * n).
    std::size_t prefix_length(double lambda) const;

    /// (T_1, ..., T_floor(lambda n)) in permutation order; lambda in (0, 1].
    std::vector<std::size_t> permuted_prefix(double lambda) const;

private:
    std::size_t n_;
    std::size_t block_width_;
    std::size_t block_count_;
};

/// Free-function forms of the member operations.
std::size_t permute_index(const BlockPermutation& p, std::size_t k);
std::vector<std::size_t> permuted_prefix(const BlockPermutation& p, double lambda);

}  // namespace reldev
