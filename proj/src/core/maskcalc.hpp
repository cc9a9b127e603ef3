#ifndef ZEROONE_MASKCALC_HPP
#define ZEROONE_MASKCALC_HPP

#include <bit>
#include <cstdint>
#include <vector>

namespace zeroone {

using Mask = uint32_t;

inline int mask_popcount(Mask m) { return std::popcount(m); }

// Weighted-tuple calculator over a universe of <= 25 elements.
// w(A,B) = |B\A| - sum of weights of tuples inside B but not inside A;
// exact telescoping along any chain A ⊆ B ⊆ C by construction.
class MaskCalc {
public:
    MaskCalc() = default;
    MaskCalc(int n, std::vector<std::pair<Mask, double>> weighted_tuples)
        : n_(n), tuples_(std::move(weighted_tuples)) {
        if (n_ <= kTableBits) {
            table_.assign(size_t(1) << n_, 0.0);
            for (const auto& [tm, a] : tuples_) table_[tm] += a;
            // subset-sum DP: table_[m] = sum over tuples with mask ⊆ m
            for (int b = 0; b < n_; ++b)
                for (Mask m = 0; m < (Mask(1) << n_); ++m)
                    if (m & (Mask(1) << b)) table_[m] += table_[m ^ (Mask(1) << b)];
        }
    }

    int size() const { return n_; }
    Mask full() const { return n_ >= 32 ? ~Mask(0) : (Mask(1) << n_) - 1; }

    double sum_inside(Mask m) const {
        if (!table_.empty()) return table_[m];
        double s = 0;
        for (const auto& [tm, a] : tuples_)
            if ((tm & m) == tm) s += a;
        return s;
    }

    double w(Mask a, Mask b) const {
        return double(mask_popcount(b & ~a)) - (sum_inside(b) - sum_inside(a));
    }

private:
    static constexpr int kTableBits = 18;
    int n_ = 0;
    std::vector<std::pair<Mask, double>> tuples_;
    std::vector<double> table_;
};

// Iterate strict non-empty sub-selections s of the bit set d (s ⊂ d, s ≠ d;
// s = 0 is included). Usage: for (Mask s = (d - 1) & d; ; s = (s - 1) & d) {
// ...; if (s == 0) break; }

} // namespace zeroone

#endif
