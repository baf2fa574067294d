#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace covstream {

// Fixed-width bit set over a universe [0, nbits). Used internally by the
// solvers; the observable set representation stays the sorted ElementSet.
class Bitmask {
public:
    Bitmask() = default;
    explicit Bitmask(std::size_t nbits)
        : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    static Bitmask full(std::size_t nbits) {
        Bitmask b(nbits);
        for (auto& w : b.words_) w = ~std::uint64_t{0};
        b.trim();
        return b;
    }

    std::size_t size_bits() const { return nbits_; }

    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) {
        words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    bool any_and(const Bitmask& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    std::size_t count_and(const Bitmask& o) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
        return c;
    }

    // True iff o is a subset of this; early-exits on the first stray word.
    bool covers(const Bitmask& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (o.words_[i] & ~words_[i]) return false;
        return true;
    }

    Bitmask& operator|=(const Bitmask& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    Bitmask& operator&=(const Bitmask& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    // this := this \ o
    Bitmask& subtract(const Bitmask& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    friend Bitmask operator&(Bitmask a, const Bitmask& b) { return a &= b; }
    friend Bitmask operator|(Bitmask a, const Bitmask& b) { return a |= b; }

    bool operator==(const Bitmask&) const = default;

    // Lowest set bit, or nbits if none.
    std::size_t first() const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i])
                return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
        return nbits_;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            while (w) {
                f(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

private:
    void trim() {
        if (nbits_ % 64 != 0 && !words_.empty())
            words_.back() &= (~std::uint64_t{0}) >> (64 - nbits_ % 64);
    }

    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace covstream
