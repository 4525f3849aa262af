#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "rfit/errors.hpp"

namespace rfit {

// A permutation of {0,...,n-1}, stored as the image list: images[x] is where x goes.
class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
        std::vector<bool> seen(images_.size(), false);
        for (std::uint32_t v : images_) {
            if (v >= images_.size() || seen[v])
                throw validation_error("permutation image list is not a bijection");
            seen[v] = true;
        }
    }

    static Permutation identity(std::size_t n) {
        std::vector<std::uint32_t> im(n);
        std::iota(im.begin(), im.end(), 0u);
        return Permutation(std::move(im));
    }

    std::size_t degree() const { return images_.size(); }
    std::uint32_t operator()(std::uint32_t x) const { return images_[x]; }
    const std::vector<std::uint32_t>& images() const { return images_; }

    bool is_identity() const {
        for (std::uint32_t x = 0; x < images_.size(); ++x)
            if (images_[x] != x) return false;
        return true;
    }

    // (a * b)(x) = a(b(x)): apply b first, then a.
    friend Permutation operator*(const Permutation& a, const Permutation& b) {
        if (a.degree() != b.degree())
            throw validation_error("cannot compose permutations of different degree");
        std::vector<std::uint32_t> im(a.degree());
        for (std::uint32_t x = 0; x < im.size(); ++x) im[x] = a.images_[b.images_[x]];
        Permutation p;
        p.images_ = std::move(im);
        return p;
    }

    Permutation inverse() const {
        std::vector<std::uint32_t> im(degree());
        for (std::uint32_t x = 0; x < degree(); ++x) im[images_[x]] = x;
        Permutation p;
        p.images_ = std::move(im);
        return p;
    }

    std::size_t fixed_points() const {
        std::size_t n = 0;
        for (std::uint32_t x = 0; x < images_.size(); ++x)
            if (images_[x] == x) ++n;
        return n;
    }

    // Cycle notation on nontrivial cycles, e.g. "(0 1)(2 3)"; "()" for the identity.
    std::string cycle_string() const {
        std::string out;
        std::vector<bool> seen(degree(), false);
        for (std::uint32_t x = 0; x < degree(); ++x) {
            if (seen[x] || images_[x] == x) continue;
            out += '(';
            std::uint32_t y = x;
            bool first = true;
            while (!seen[y]) {
                seen[y] = true;
                if (!first) out += ' ';
                out += std::to_string(y);
                first = false;
                y = images_[y];
            }
            out += ')';
        }
        return out.empty() ? "()" : out;
    }

    friend bool operator==(const Permutation& a, const Permutation& b) {
        return a.images_ == b.images_;
    }
    friend bool operator<(const Permutation& a, const Permutation& b) {
        return a.images_ < b.images_;
    }

private:
    std::vector<std::uint32_t> images_;
};

struct PermutationHash {
    std::size_t operator()(const Permutation& p) const {
        std::size_t h = 0x811c9dc5u;
        for (std::uint32_t v : p.images()) h = (h ^ v) * 0x01000193u;
        return h;
    }
};

}  // namespace rfit
