#include "orbp/systems.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace orbp {

namespace {

constexpr double kTick = 0x1p-32;

uint32_t quantize(double x) {
    if (!std::isfinite(x)) fail(ErrorCode::ConfigError, "non-finite circle coordinate");
    double frac = x - std::floor(x);
    // frac in [0,1); rounding may land on 2^32, which wraps to 0.
    return static_cast<uint32_t>(
        static_cast<uint64_t>(std::llround(frac * 4294967296.0)) & 0xFFFFFFFFull);
}

}  // namespace

double circle_tick_distance(uint32_t a, uint32_t b) {
    uint32_t d = a - b;  // wraps mod 2^32
    uint32_t m = std::min(d, static_cast<uint32_t>(0u - d));
    return m * kTick;
}

int resolving_depth(double eps) {
    if (!(eps > 0.0)) fail(ErrorCode::ConfigError, "eps must be positive");
    int j = 0;
    while (j < 64 && std::ldexp(1.0, -j) >= eps) ++j;
    return j;
}

Point Point::word(std::vector<uint8_t> symbols) {
    if (symbols.empty()) fail(ErrorCode::ConfigError, "empty symbolic word");
    Point p;
    p.symbolic_ = true;
    p.word_ = std::move(symbols);
    return p;
}

Point Point::circle(double x) { return circle_ticks(quantize(x)); }

Point Point::circle_ticks(uint32_t ticks) {
    Point p;
    p.symbolic_ = false;
    p.ticks_ = ticks;
    return p;
}

const std::vector<uint8_t>& Point::symbols() const {
    if (!symbolic_) fail(ErrorCode::KindMismatch, "circle point has no symbols");
    return word_;
}

uint32_t Point::ticks() const {
    if (symbolic_) fail(ErrorCode::KindMismatch, "symbolic point has no coordinate");
    return ticks_;
}

double Point::coord() const { return ticks() * kTick; }

bool Point::operator==(const Point& other) const {
    if (symbolic_ != other.symbolic_) return false;
    return symbolic_ ? word_ == other.word_ : ticks_ == other.ticks_;
}

const char* system_kind_name(SystemKind kind) {
    switch (kind) {
        case SystemKind::FullShift: return "fullshift";
        case SystemKind::Sft: return "sft";
        case SystemKind::Doubling: return "doubling";
        case SystemKind::Rotation: return "rotation";
    }
    return "unknown";
}

DynSystem DynSystem::full_shift(int k, int word_length) {
    if (k < 2 || k > 255) fail(ErrorCode::ConfigError, "alphabet size must be in [2,255]");
    if (word_length < 2) fail(ErrorCode::ConfigError, "word length must be at least 2");
    DynSystem s;
    s.kind_ = SystemKind::FullShift;
    s.alphabet_ = k;
    s.word_length_ = word_length;
    return s;
}

DynSystem DynSystem::sft(std::vector<std::vector<int>> transitions, int word_length) {
    int k = static_cast<int>(transitions.size());
    if (k < 2 || k > 255) fail(ErrorCode::ConfigError, "alphabet size must be in [2,255]");
    if (word_length < 2) fail(ErrorCode::ConfigError, "word length must be at least 2");
    DynSystem s;
    s.kind_ = SystemKind::Sft;
    s.alphabet_ = k;
    s.word_length_ = word_length;
    s.transitions_.assign(static_cast<size_t>(k) * k, 0);
    for (int a = 0; a < k; ++a) {
        if (static_cast<int>(transitions[a].size()) != k)
            fail(ErrorCode::ConfigError, "transition matrix must be square");
        int row_ones = 0;
        for (int b = 0; b < k; ++b) {
            int v = transitions[a][b];
            if (v != 0 && v != 1) fail(ErrorCode::ConfigError, "transition entries must be 0/1");
            s.transitions_[static_cast<size_t>(a) * k + b] = static_cast<uint8_t>(v);
            row_ones += v;
        }
        if (row_ones == 0)
            fail(ErrorCode::ConfigError, "every symbol needs at least one successor");
    }
    return s;
}

DynSystem DynSystem::doubling() {
    DynSystem s;
    s.kind_ = SystemKind::Doubling;
    return s;
}

DynSystem DynSystem::rotation(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        fail(ErrorCode::ConfigError, "rotation angle must lie in (0,1)");
    DynSystem s;
    s.kind_ = SystemKind::Rotation;
    s.alpha_ticks_ = quantize(alpha);
    if (s.alpha_ticks_ == 0) fail(ErrorCode::ConfigError, "rotation angle quantizes to zero");
    return s;
}

bool DynSystem::allowed(int a, int b) const {
    if (kind_ == SystemKind::FullShift) return a >= 0 && a < alphabet_ && b >= 0 && b < alphabet_;
    if (kind_ != SystemKind::Sft) fail(ErrorCode::KindMismatch, "transitions are a shift notion");
    if (a < 0 || a >= alphabet_ || b < 0 || b >= alphabet_) return false;
    return transitions_[static_cast<size_t>(a) * alphabet_ + b] != 0;
}

double DynSystem::alpha() const {
    if (kind_ != SystemKind::Rotation) fail(ErrorCode::KindMismatch, "not a rotation");
    return alpha_ticks_ * kTick;
}

void DynSystem::check_point(const Point& x) const {
    if (x.symbolic() != symbolic())
        fail(ErrorCode::KindMismatch, "point representation does not match the system");
    if (!symbolic()) return;
    const auto& w = x.symbols();
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i] >= alphabet_) fail(ErrorCode::ConfigError, "symbol out of range");
        if (kind_ == SystemKind::Sft && i + 1 < w.size() && !allowed(w[i], w[i + 1]))
            fail(ErrorCode::ConfigError, "forbidden transition in word");
    }
}

Point DynSystem::apply(const Point& x) const {
    check_point(x);
    switch (kind_) {
        case SystemKind::FullShift:
        case SystemKind::Sft: {
            const auto& w = x.symbols();
            if (w.size() < 2)
                fail(ErrorCode::HorizonExhausted, "word too short to shift");
            return Point::word(std::vector<uint8_t>(w.begin() + 1, w.end()));
        }
        case SystemKind::Doubling:
            return Point::circle_ticks(x.ticks() << 1);
        case SystemKind::Rotation:
            return Point::circle_ticks(x.ticks() + alpha_ticks_);
    }
    fail(ErrorCode::ConfigError, "unreachable");
}

std::vector<Point> DynSystem::orbit_segment(const Point& x, int n, int q) const {
    check_point(x);
    if (n < 1 || q < 1) fail(ErrorCode::ConfigError, "orbit needs n >= 1 and q >= 1");
    std::vector<Point> orbit;
    orbit.reserve(n);
    if (symbolic()) {
        const auto& w = x.symbols();
        size_t need = static_cast<size_t>(n - 1) * q;
        if (need >= w.size())
            fail(ErrorCode::HorizonExhausted, "orbit window exceeds the sampled word");
        for (int i = 0; i < n; ++i)
            orbit.push_back(Point::word(
                std::vector<uint8_t>(w.begin() + static_cast<size_t>(i) * q, w.end())));
    } else {
        uint32_t t = x.ticks();
        for (int i = 0; i < n; ++i) {
            orbit.push_back(Point::circle_ticks(t));
            for (int s = 0; s < q; ++s)
                t = (kind_ == SystemKind::Doubling) ? (t << 1) : (t + alpha_ticks_);
        }
    }
    return orbit;
}

double DynSystem::base_distance(const Point& x, const Point& y) const {
    if (x.symbolic() != y.symbolic())
        fail(ErrorCode::KindMismatch, "cannot compare symbolic and circle points");
    if (x.symbolic() != symbolic())
        fail(ErrorCode::KindMismatch, "points do not match the system");
    if (!symbolic()) return circle_tick_distance(x.ticks(), y.ticks());
    const auto& a = x.symbols();
    const auto& b = y.symbols();
    size_t m = std::min(a.size(), b.size());
    for (size_t j = 0; j < m; ++j)
        if (a[j] != b[j]) return std::ldexp(1.0, -static_cast<int>(j));
    return 0.0;
}

std::string DynSystem::describe() const {
    char buf[128];
    switch (kind_) {
        case SystemKind::FullShift:
            std::snprintf(buf, sizeof buf, "fullshift(k=%d,L=%d)", alphabet_, word_length_);
            return buf;
        case SystemKind::Sft: {
            std::string rows;
            for (int a = 0; a < alphabet_; ++a) {
                if (a) rows += '|';
                for (int b = 0; b < alphabet_; ++b)
                    rows += allowed(a, b) ? '1' : '0';
            }
            std::snprintf(buf, sizeof buf, "sft(k=%d,rows=%s,L=%d)", alphabet_, rows.c_str(),
                          word_length_);
            return buf;
        }
        case SystemKind::Doubling:
            return "doubling";
        case SystemKind::Rotation:
            std::snprintf(buf, sizeof buf, "rotation(alpha=%.17g)", alpha());
            return buf;
    }
    return "unknown";
}

Potential Potential::zero() { return Potential{}; }

Potential Potential::constant(double c) {
    Potential p;
    p.kind_ = Kind::Constant;
    p.offset_ = c;
    return p;
}

Potential Potential::first_symbol(std::vector<double> values) {
    if (values.empty()) fail(ErrorCode::ConfigError, "symbol table must not be empty");
    Potential p;
    p.kind_ = Kind::FirstSymbol;
    p.table_ = std::move(values);
    return p;
}

Potential Potential::circle(const std::string& name) {
    Potential p;
    p.kind_ = Kind::Circle;
    p.name_ = name;
    if (name == "identity") p.circle_id_ = 0;
    else if (name == "cos") p.circle_id_ = 1;
    else if (name == "dist0") p.circle_id_ = 2;
    else fail(ErrorCode::ConfigError, "unknown circle potential: " + name);
    return p;
}

double Potential::symbol_value(uint8_t a) const {
    if (kind_ == Kind::Zero) return 0.0;
    if (kind_ == Kind::Constant) return offset_;
    if (kind_ != Kind::FirstSymbol)
        fail(ErrorCode::KindMismatch, "potential is not symbolic");
    if (a >= table_.size()) fail(ErrorCode::ConfigError, "symbol outside potential table");
    return table_[a] + offset_;
}

double Potential::circle_value(uint32_t ticks) const {
    if (kind_ == Kind::Zero) return 0.0;
    if (kind_ == Kind::Constant) return offset_;
    if (kind_ != Kind::Circle)
        fail(ErrorCode::KindMismatch, "potential is not defined on the circle");
    double x = ticks * 0x1p-32;
    switch (circle_id_) {
        case 0: return x + offset_;
        case 1: return std::cos(6.283185307179586476925286766559 * x) + offset_;
        default: return std::min(x, 1.0 - x) + offset_;
    }
}

double Potential::operator()(const DynSystem& system, const Point& x) const {
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return offset_;
        case Kind::FirstSymbol:
            if (!x.symbolic()) fail(ErrorCode::KindMismatch, "potential expects a word");
            if (static_cast<int>(table_.size()) != system.alphabet() && system.symbolic())
                fail(ErrorCode::ConfigError, "potential table does not match the alphabet");
            return symbol_value(x.symbols().front());
        case Kind::Circle:
            if (x.symbolic()) fail(ErrorCode::KindMismatch, "potential expects a circle point");
            return circle_value(x.ticks());
    }
    fail(ErrorCode::ConfigError, "unreachable");
}

Potential Potential::shifted(double c) const {
    Potential p = *this;
    if (p.kind_ == Kind::Zero) p.kind_ = Kind::Constant;
    p.offset_ += c;
    return p;
}

bool Potential::is_zero() const {
    if (kind_ == Kind::Zero) return true;
    if (kind_ == Kind::Constant) return offset_ == 0.0;
    return false;
}

bool Potential::constant_value(double& out) const {
    if (kind_ != Kind::Zero && kind_ != Kind::Constant) return false;
    out = offset_;
    return true;
}

double Potential::mean_on_circle() const {
    switch (kind_) {
        case Kind::Zero:
        case Kind::Constant:
            return offset_;
        case Kind::Circle:
            switch (circle_id_) {
                case 0: return 0.5 + offset_;
                case 1: return offset_;
                default: return 0.25 + offset_;
            }
        case Kind::FirstSymbol:
            break;
    }
    fail(ErrorCode::KindMismatch, "per-symbol potentials have no circle integral");
}

double Potential::sup_norm() const {
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return std::abs(offset_);
        case Kind::FirstSymbol: {
            double m = 0.0;
            for (double v : table_) m = std::max(m, std::abs(v + offset_));
            return m;
        }
        case Kind::Circle: {
            double base = (circle_id_ == 2) ? 0.5 : 1.0;
            return base + std::abs(offset_);
        }
    }
    return 0.0;
}

double Potential::lipschitz() const {
    if (kind_ != Kind::Circle) return 0.0;
    return (circle_id_ == 1) ? 6.283185307179586476925286766559 : 1.0;
}

std::string Potential::describe() const {
    char buf[160];
    switch (kind_) {
        case Kind::Zero: return "zero";
        case Kind::Constant:
            std::snprintf(buf, sizeof buf, "constant(%.17g)", offset_);
            return buf;
        case Kind::FirstSymbol: {
            std::string vals;
            for (size_t i = 0; i < table_.size(); ++i) {
                char one[40];
                std::snprintf(one, sizeof one, "%s%.17g", i ? "," : "", table_[i]);
                vals += one;
            }
            std::snprintf(buf, sizeof buf, "first_symbol(%s)%s", vals.c_str(),
                          offset_ != 0.0 ? "+offset" : "");
            std::string out = buf;
            if (offset_ != 0.0) {
                std::snprintf(buf, sizeof buf, "first_symbol(%s)+%.17g", vals.c_str(), offset_);
                out = buf;
            }
            return out;
        }
        case Kind::Circle:
            if (offset_ != 0.0) {
                std::snprintf(buf, sizeof buf, "circle(%s)+%.17g", name_.c_str(), offset_);
                return buf;
            }
            return "circle(" + name_ + ")";
    }
    return "unknown";
}

double birkhoff_sum(const DynSystem& system, const Potential& phi, const Point& x, int n,
                    int q) {
    system.check_point(x);
    if (n < 1 || q < 1) fail(ErrorCode::ConfigError, "birkhoff sum needs n >= 1 and q >= 1");
    if (phi.is_zero()) return 0.0;
    double total = 0.0;
    if (system.symbolic()) {
        const auto& w = x.symbols();
        size_t need = static_cast<size_t>(n - 1) * q;
        if (need >= w.size())
            fail(ErrorCode::HorizonExhausted, "orbit window exceeds the sampled word");
        for (int i = 0; i < n; ++i) total += phi.symbol_value(w[static_cast<size_t>(i) * q]);
    } else {
        uint32_t t = x.ticks();
        uint32_t step = system.alpha_ticks();
        for (int i = 0; i < n; ++i) {
            total += phi.circle_value(t);
            for (int s = 0; s < q; ++s)
                t = (system.kind() == SystemKind::Doubling) ? (t << 1) : (t + step);
        }
    }
    return total;
}

}  // namespace orbp
