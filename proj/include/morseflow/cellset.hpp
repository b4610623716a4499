#ifndef MORSEFLOW_CELLSET_HPP_
#define MORSEFLOW_CELLSET_HPP_

#include <cstdint>
#include <cstddef>
#include <functional>
#include <vector>

#ifdef _MSC_VER
#include <intrin.h>
#endif

namespace morseflow {

// Dense bitset over cell indices [0, size). Word-parallel set algebra is the
// workhorse of every reachability and limit-set computation, so the storage
// stays flat and the hot operations stay branch-free.
class CellSet {
public:
    CellSet() = default;
    explicit CellSet(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    static CellSet full(std::size_t n) {
        CellSet s(n);
        for (auto& w : s.words_) w = ~std::uint64_t(0);
        s.trim();
        return s;
    }

    template <typename It>
    static CellSet of(std::size_t n, It first, It last) {
        CellSet s(n);
        for (; first != last; ++first) s.set(static_cast<std::size_t>(*first));
        return s;
    }
    static CellSet of(std::size_t n, std::initializer_list<int> cells) {
        return of(n, cells.begin(), cells.end());
    }
    static CellSet of(std::size_t n, const std::vector<int>& cells) {
        return of(n, cells.begin(), cells.end());
    }

    std::size_t size() const { return n_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
    void clear() { for (auto& w : words_) w = 0; }

    bool any() const {
        for (auto w : words_) if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += popcount64(w);
        return c;
    }

    CellSet& operator|=(const CellSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    CellSet& operator&=(const CellSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    CellSet& operator-=(const CellSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    friend CellSet operator|(CellSet a, const CellSet& b) { return a |= b; }
    friend CellSet operator&(CellSet a, const CellSet& b) { return a &= b; }
    friend CellSet operator-(CellSet a, const CellSet& b) { return a -= b; }

    CellSet complement() const {
        CellSet r(n_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
        r.trim();
        return r;
    }

    bool operator==(const CellSet& o) const { return n_ == o.n_ && words_ == o.words_; }
    bool operator!=(const CellSet& o) const { return !(*this == o); }

    bool subset_of(const CellSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool intersects(const CellSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    // Lowest set index, or -1 when empty.
    int first() const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i]) return static_cast<int>(i * 64 + ctz64(words_[i]));
        return -1;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            while (w) {
                const unsigned b = ctz64(w);
                f(static_cast<int>(i * 64 + b));
                w &= w - 1;
            }
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> v;
        v.reserve(count());
        for_each([&](int i) { v.push_back(i); });
        return v;
    }

    std::size_t hash() const {
        std::uint64_t h = 1469598103934665603ull;  // FNV offset basis
        for (auto w : words_) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }

private:
    void trim() {
        const unsigned rem = n_ & 63;
        if (rem && !words_.empty()) words_.back() &= (std::uint64_t(1) << rem) - 1;
    }

    static unsigned popcount64(std::uint64_t w) {
#ifdef _MSC_VER
        return static_cast<unsigned>(__popcnt64(w));
#else
        return static_cast<unsigned>(__builtin_popcountll(w));
#endif
    }
    static unsigned ctz64(std::uint64_t w) {
#ifdef _MSC_VER
        unsigned long idx;
        _BitScanForward64(&idx, w);
        return idx;
#else
        return static_cast<unsigned>(__builtin_ctzll(w));
#endif
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

struct CellSetHash {
    std::size_t operator()(const CellSet& s) const { return s.hash(); }
};

}  // namespace morseflow

#endif  // MORSEFLOW_CELLSET_HPP_
