#include "rng.hpp"

#include <algorithm>
#include <unordered_map>

namespace zeroone {

std::vector<int> Rng::sample_without_replacement(int n, int k) {
    if (k >= n) {
        std::vector<int> all(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) all[size_t(i)] = i;
        return all;
    }
    // Sparse Fisher-Yates: only touched slots are stored.
    std::unordered_map<int, int> slot;
    std::vector<int> out;
    out.reserve(size_t(k));
    for (int i = 0; i < k; ++i) {
        int j = i + int(next_below(uint64_t(n - i)));
        auto geti = [&](int idx) {
            auto it = slot.find(idx);
            return it == slot.end() ? idx : it->second;
        };
        int vi = geti(i), vj = geti(j);
        slot[i] = vj;
        slot[j] = vi;
        out.push_back(vj);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace zeroone
