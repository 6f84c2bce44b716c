#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orbp/error.hpp"

namespace orbp {

inline constexpr int kDefaultWordLength = 256;

// Smallest j >= 0 with 2^-j < eps (capped at 64). Two symbolic points agreeing
// on j leading symbols are at distance <= 2^-j, so this is the cylinder depth
// that resolves eps as a strict ball radius. Note the cap: beyond depth 64 the
// distance underflows any eps we accept.
int resolving_depth(double eps);

// Exact arc distance between two lattice points: min(|a-b|, 2^32-|a-b|) ticks.
double circle_tick_distance(uint32_t a, uint32_t b);

// A phase-space point: a finite word over {0..k-1} for shift systems, or a
// circle coordinate. Circle coordinates are kept on the 2^-32 lattice
// (coord = ticks * 2^-32). Integer arithmetic makes rotation an exact
// isometry and doubling exact mod 1; the lattice spacing 2.3e-10 is far
// below every radius the estimators use.
class Point {
public:
    Point() = default;

    static Point word(std::vector<uint8_t> symbols);
    static Point circle(double x);  // reduced mod 1, then quantized
    static Point circle_ticks(uint32_t ticks);

    bool symbolic() const { return symbolic_; }

    const std::vector<uint8_t>& symbols() const;
    uint32_t ticks() const;
    double coord() const;

    bool operator==(const Point& other) const;

private:
    bool symbolic_ = false;
    std::vector<uint8_t> word_;
    uint32_t ticks_ = 0;
};

enum class SystemKind { FullShift, Sft, Doubling, Rotation };

const char* system_kind_name(SystemKind kind);

// One of the built-in transformations: full shift or SFT on k symbols
// (word length L bounds every orbit query), the doubling map, or an
// irrational rotation. Immutable after construction.
class DynSystem {
public:
    static DynSystem full_shift(int k, int word_length = kDefaultWordLength);
    // transitions: k x k 0/1 matrix, row a lists the symbols allowed after a.
    static DynSystem sft(std::vector<std::vector<int>> transitions,
                         int word_length = kDefaultWordLength);
    static DynSystem doubling();
    static DynSystem rotation(double alpha);  // alpha in (0,1)

    SystemKind kind() const { return kind_; }
    bool symbolic() const {
        return kind_ == SystemKind::FullShift || kind_ == SystemKind::Sft;
    }
    int alphabet() const { return alphabet_; }
    int word_length() const { return word_length_; }
    bool allowed(int a, int b) const;
    double alpha() const;
    uint32_t alpha_ticks() const { return alpha_ticks_; }

    // Throws KindMismatch / ConfigError if x does not belong to this system
    // (wrong representation, symbol out of range, forbidden SFT transition).
    void check_point(const Point& x) const;

    // One application of the map. Shifting consumes one symbol; a word needs
    // at least two symbols left (HorizonExhausted otherwise).
    Point apply(const Point& x) const;

    // One circle-map step on raw ticks (doubling or rotation); the inner
    // loops of the metric kernels walk orbits with this.
    uint32_t step_ticks(uint32_t t) const {
        return kind_ == SystemKind::Doubling ? (t << 1) : (t + alpha_ticks_);
    }

    // (x, T^q x, ..., T^{q(n-1)} x). For shifts the last point must retain at
    // least one symbol: (n-1)*q < len(x), else HorizonExhausted.
    std::vector<Point> orbit_segment(const Point& x, int n, int q = 1) const;

    // Metric on the phase space. Circle: arc distance, exact on the tick
    // lattice. Symbolic: 2^-j with j the first differing index; words are
    // compared over the shorter length and count as distance 0 when they
    // agree on the full compared stretch.
    double base_distance(const Point& x, const Point& y) const;

    std::string describe() const;

private:
    DynSystem() = default;

    SystemKind kind_ = SystemKind::FullShift;
    int alphabet_ = 0;
    int word_length_ = 0;
    std::vector<uint8_t> transitions_;  // k*k row-major, unused for circle
    uint32_t alpha_ticks_ = 0;
};

// Potentials the estimators integrate: zero, a constant, a per-leading-symbol
// table, or a named Lipschitz function on the circle ("identity", "cos",
// "dist0"). An additive offset supports phi -> phi + c without changing kind.
class Potential {
public:
    static Potential zero();
    static Potential constant(double c);
    static Potential first_symbol(std::vector<double> values);
    static Potential circle(const std::string& name);

    double operator()(const DynSystem& system, const Point& x) const;
    Potential shifted(double c) const;

    bool is_zero() const;
    double sup_norm() const;
    double lipschitz() const;
    std::string describe() const;

    // True for Zero/Constant, with the value in `out`. The closed-form
    // pressure oracles use this to recognize potentials that shift every
    // estimate by a constant.
    bool constant_value(double& out) const;

    // Closed-form Lebesgue integral over [0,1) for circle and constant
    // potentials (identity 1/2, cos 0, dist0 1/4, plus any offset);
    // KindMismatch for per-symbol tables.
    double mean_on_circle() const;

    // Fast paths used by the kernels; valid only for the matching system kind.
    double symbol_value(uint8_t a) const;
    double circle_value(uint32_t ticks) const;

private:
    enum class Kind { Zero, Constant, FirstSymbol, Circle };

    Kind kind_ = Kind::Zero;
    double offset_ = 0.0;
    std::vector<double> table_;
    int circle_id_ = 0;
    std::string name_;
};

// Sum of phi along the q-step orbit: phi(x) + phi(T^q x) + ... over n terms.
// Walks the orbit in place, no Point copies.
double birkhoff_sum(const DynSystem& system, const Potential& phi,
                    const Point& x, int n, int q = 1);

}  // namespace orbp
