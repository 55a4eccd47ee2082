#include "ocf/rng.hpp"

#include "ocf/errors.hpp"

namespace ocf {

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n) throw ConfigError("sample_without_replacement: k > n");
    // Partial Fisher-Yates over the index vector.
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(below(n - i));
        std::swap(idx[i], idx[j]);
        out.push_back(idx[i]);
    }
    return out;
}

std::vector<std::size_t> Rng::sample_with_replacement(std::size_t n, std::size_t k) {
    if (n == 0) throw ConfigError("sample_with_replacement: empty population");
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(static_cast<std::size_t>(below(n)));
    return out;
}

}  // namespace ocf
