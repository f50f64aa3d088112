#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsplit {

// Angular quadrants of the 2D transform, covering normal angles
// [0,pi/4], [pi/4,pi/2], [pi/2,3pi/4], [3pi/4,pi) in order.
enum class Quad : int { a = 0, b = 1, c = 2, d = 3 };

constexpr std::array<Quad, 4> kQuads{Quad::a, Quad::b, Quad::c, Quad::d};

inline char quad_name(Quad q) { return static_cast<char>('a' + static_cast<int>(q)); }

inline Quad quad_from_name(char c) {
    if (c < 'a' || c > 'd') throw std::invalid_argument("quadrant label must be one of a,b,c,d");
    return static_cast<Quad>(c - 'a');
}

// One quadrant of the discrete Radon transform of an n x n grid.
//
// Entry (h, s) is the sum over the digital line with intercept h and slope s.
// Heights run over h in [-(n-1), n-1], stored at row index h + (n-1); lines
// with h < -s never meet the grid and their entries are exactly zero.
// Storage is slope-major: each slope column of 2n-1 heights is contiguous.
struct Quadrant2D {
    int n = 0;
    Quad label = Quad::a;
    std::vector<double> data;  // data[s * (2n-1) + h_index]

    Quadrant2D() = default;
    Quadrant2D(int n_, Quad label_)
        : n(n_), label(label_), data(static_cast<size_t>(n_) * (2 * n_ - 1), 0.0) {}

    int heights() const { return 2 * n - 1; }
    int height_offset() const { return n - 1; }  // h_index = h + height_offset()

    // first row index with a nonempty digital line for slope s
    int valid_begin(int s) const { return n - 1 - s; }

    double& at(int h_index, int s) { return data[static_cast<size_t>(s) * heights() + h_index]; }
    double at(int h_index, int s) const { return data[static_cast<size_t>(s) * heights() + h_index]; }

    std::span<double> slope_column(int s) {
        return {data.data() + static_cast<size_t>(s) * heights(), static_cast<size_t>(heights())};
    }
    std::span<const double> slope_column(int s) const {
        return {data.data() + static_cast<size_t>(s) * heights(), static_cast<size_t>(heights())};
    }

    double column_sum(int s) const {
        double sum = 0.0;
        for (double v : slope_column(s)) sum += v;
        return sum;
    }
};

// Full 2D transform: the ordered quadrant tuple (a, b, c, d).
struct Sinogram2D {
    int n = 0;
    std::array<Quadrant2D, 4> quadrants;

    Sinogram2D() = default;
    explicit Sinogram2D(int n_) : n(n_) {
        for (Quad q : kQuads) quadrants[static_cast<int>(q)] = Quadrant2D(n_, q);
    }

    Quadrant2D& operator[](Quad q) { return quadrants[static_cast<int>(q)]; }
    const Quadrant2D& operator[](Quad q) const { return quadrants[static_cast<int>(q)]; }
};

// Hexadecant labels are ordered pairs of quadrant labels: aa, ab, ..., dd.
struct HexLabel {
    Quad first = Quad::a;
    Quad second = Quad::a;

    int index() const { return 4 * static_cast<int>(first) + static_cast<int>(second); }
    std::string name() const { return {quad_name(first), quad_name(second)}; }
    static HexLabel from_index(int idx) {
        return {static_cast<Quad>(idx / 4), static_cast<Quad>(idx % 4)};
    }
};

// One of the 16 sectors of the 3D transform.  Entry (h, s1, s2) sums the
// digital plane with intercept h in [-2(n-1), n-1]; storage keeps each
// height column contiguous: data[(s1 * n + s2) * (3n-2) + h_index].
struct Hexadecant3D {
    int n = 0;
    HexLabel label;
    std::vector<double> data;

    Hexadecant3D() = default;
    Hexadecant3D(int n_, HexLabel label_)
        : n(n_), label(label_),
          data(static_cast<size_t>(n_) * n_ * (3 * n_ - 2), 0.0) {}

    int heights() const { return 3 * n - 2; }
    int height_offset() const { return 2 * (n - 1); }

    double& at(int h_index, int s1, int s2) {
        return data[(static_cast<size_t>(s1) * n + s2) * heights() + h_index];
    }
    double at(int h_index, int s1, int s2) const {
        return data[(static_cast<size_t>(s1) * n + s2) * heights() + h_index];
    }

    double column_sum(int s1, int s2) const {
        const double* col = data.data() + (static_cast<size_t>(s1) * n + s2) * heights();
        double sum = 0.0;
        for (int h = 0; h < heights(); ++h) sum += col[h];
        return sum;
    }
};

struct Sinogram3D {
    int n = 0;
    std::vector<Hexadecant3D> hexadecants;  // 16, in HexLabel index order

    Sinogram3D() = default;
    explicit Sinogram3D(int n_) : n(n_) {
        hexadecants.reserve(16);
        for (int idx = 0; idx < 16; ++idx)
            hexadecants.emplace_back(n_, HexLabel::from_index(idx));
    }
};

}  // namespace rsplit
