#include "cornerhom/cubical.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace cornerhom {

// ---------------------------------------------------------------- Dyadic

namespace {

constexpr int kMaxExponent = 60;

std::int64_t checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("dyadic numerator overflow");
    return static_cast<std::int64_t>(v);
}

__int128 widen(const Dyadic& a, int exp) { return static_cast<__int128>(a.numerator()) << (exp - a.exponent()); }

}  // namespace

Dyadic::Dyadic(std::int64_t num, int exp) : num_(num), exp_(exp) {
    if (exp_ < 0) {
        num_ = checked(static_cast<__int128>(num_) << -exp_);
        exp_ = 0;
    }
    while (exp_ > 0 && num_ % 2 == 0) num_ /= 2, --exp_;
    if (exp_ > kMaxExponent) throw std::overflow_error("dyadic denominator too large");
}

Dyadic Dyadic::parse(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    auto integer = [&](const std::string& s) -> std::int64_t {
        std::size_t pos = 0;
        if (s.empty() || s == "-" || s == "+") throw std::invalid_argument("bad dyadic '" + text + "'");
        std::int64_t v = 0;
        try {
            v = std::stoll(s, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad dyadic '" + text + "'");
        }
        if (pos != s.size()) throw std::invalid_argument("bad dyadic '" + text + "'");
        return v;
    };
    if (auto slash = t.find('/'); slash != std::string::npos) {
        const std::int64_t p = integer(t.substr(0, slash)), q = integer(t.substr(slash + 1));
        if (q <= 0 || (q & (q - 1)) != 0) throw std::invalid_argument("denominator of '" + text + "' is not a power of 2");
        int e = 0;
        while ((std::int64_t{1} << e) != q) ++e;
        return {p, e};
    }
    if (auto dot = t.find('.'); dot != std::string::npos) {
        const std::string frac = t.substr(dot + 1);
        if (frac.empty() || frac.size() > 18 || !std::all_of(frac.begin(), frac.end(), ::isdigit))
            throw std::invalid_argument("bad dyadic '" + text + "'");
        const std::int64_t n = integer(t.substr(0, dot) + frac);
        std::int64_t five = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) five *= 5;
        if (n % five != 0) throw std::invalid_argument("'" + text + "' is not a dyadic rational");
        return {n / five, static_cast<int>(frac.size())};
    }
    return {integer(t), 0};
}

double Dyadic::to_double() const { return static_cast<double>(num_) / static_cast<double>(std::int64_t{1} << exp_); }

std::string Dyadic::to_string() const {
    if (exp_ == 0) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(std::int64_t{1} << exp_);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    const int e = std::max(a.exp_, b.exp_);
    return {checked(widen(a, e) + widen(b, e)), e};
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
    const int e = std::max(a.exp_, b.exp_);
    return {checked(widen(a, e) - widen(b, e)), e};
}

Dyadic midpoint(const Dyadic& a, const Dyadic& b) {
    const Dyadic s = a + b;
    return {s.num_, s.exp_ + 1};
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    const int e = std::max(a.exp_, b.exp_);
    const __int128 x = widen(a, e), y = widen(b, e);
    return x < y ? std::strong_ordering::less : x > y ? std::strong_ordering::greater : std::strong_ordering::equal;
}

// ---------------------------------------------------------------- cubes

int ElementaryCube::dimension() const {
    return static_cast<int>(std::count_if(components.begin(), components.end(), [](const Interval& i) { return !i.degenerate(); }));
}

std::vector<std::size_t> ElementaryCube::free_axes() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < components.size(); ++i)
        if (!components[i].degenerate()) out.push_back(i);
    return out;
}

std::string ElementaryCube::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (i) s += "x";
        const auto& c = components[i];
        s += c.degenerate() ? "{" + c.lo.to_string() + "}" : "[" + c.lo.to_string() + "," + c.hi.to_string() + "]";
    }
    return s;
}

ElementaryCube parse_cube(const std::string& text) {
    ElementaryCube q;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const char open = text[pos];
        const char close = open == '{' ? '}' : open == '[' ? ']' : '\0';
        if (!close) throw std::invalid_argument("bad cube '" + text + "'");
        const auto end = text.find(close, pos);
        if (end == std::string::npos) throw std::invalid_argument("bad cube '" + text + "'");
        const std::string body = text.substr(pos + 1, end - pos - 1);
        if (open == '{') {
            q.components.push_back(Interval::point(Dyadic::parse(body)));
        } else {
            const auto comma = body.find(',');
            if (comma == std::string::npos) throw std::invalid_argument("bad interval in '" + text + "'");
            const Interval iv{Dyadic::parse(body.substr(0, comma)), Dyadic::parse(body.substr(comma + 1))};
            if (!(iv.lo < iv.hi)) throw std::invalid_argument("interval with lo >= hi in '" + text + "'");
            q.components.push_back(iv);
        }
        pos = end + 1;
        if (pos < text.size()) {
            if (text[pos] != 'x') throw std::invalid_argument("bad cube '" + text + "'");
            ++pos;
            if (pos == text.size()) throw std::invalid_argument("bad cube '" + text + "'");
        }
    }
    if (q.components.empty()) throw std::invalid_argument("empty cube");
    return q;
}

LabeledCube LabeledCube::canonical(ElementaryCube target) {
    LabeledCube q{std::move(target), {}};
    for (std::size_t j : q.target.free_axes()) q.axes.push_back({j, FormalAxis::Direction::Increasing});
    return q;
}

void LabeledCube::validate() const {
    std::vector<bool> hit(target.ambient_dim(), false);
    int free = 0;
    for (const auto& a : axes) {
        if (a.direction == FormalAxis::Direction::Collapsed) {
            if (a.component != 0) throw std::invalid_argument("collapsed formal axis must carry component 0");
            continue;
        }
        if (a.component >= target.ambient_dim()) throw std::invalid_argument("formal axis points outside the cube");
        if (target.components[a.component].degenerate())
            throw std::invalid_argument("formal axis sent to a degenerate component");
        if (hit[a.component]) throw std::invalid_argument("two formal axes sent to the same component");
        hit[a.component] = true;
        ++free;
    }
    if (free != target.dimension()) throw std::invalid_argument("nondegenerate component not covered by a formal axis");
}

bool LabeledCube::degenerate() const {
    return std::any_of(axes.begin(), axes.end(), [](const FormalAxis& a) { return a.direction == FormalAxis::Direction::Collapsed; });
}

bool LabeledCube::is_canonical() const { return *this == canonical(target); }

// ---------------------------------------------------------------- chains

CubicalChain::CubicalChain(int formal_dim, std::initializer_list<std::pair<LabeledCube, Coefficient>> terms) : dim_(formal_dim) {
    for (const auto& [q, c] : terms) add(q, c);
}

CubicalChain CubicalChain::of(const ElementaryCube& q, Coefficient c) {
    CubicalChain out(q.dimension());
    out.add(LabeledCube::canonical(q), c);
    return out;
}

Coefficient CubicalChain::coefficient(const LabeledCube& q) const {
    const auto it = terms_.find(q);
    return it == terms_.end() ? 0 : it->second;
}

void CubicalChain::add(const LabeledCube& q, Coefficient c) {
    if (q.formal_dim() != dim_)
        throw std::invalid_argument("cube of formal dimension " + std::to_string(q.formal_dim()) +
                                    " added to a chain of dimension " + std::to_string(dim_));
    q.validate();
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(q, c);
    if (!inserted && (it->second += c) == 0) terms_.erase(it);
}

void CubicalChain::add(const CubicalChain& other, Coefficient scale) {
    for (const auto& [q, c] : other.terms_) add(q, scale * c);
}

std::string CubicalChain::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [q, c] : terms_) {
        os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        if (std::abs(c) != 1) os << std::abs(c) << "*";
        os << q.target.to_string();
        if (!q.is_canonical()) {
            os << "<";
            for (std::size_t i = 0; i < q.axes.size(); ++i) {
                const auto& a = q.axes[i];
                if (i) os << ",";
                if (a.direction == FormalAxis::Direction::Collapsed) os << "c";
                else os << (a.direction == FormalAxis::Direction::Decreasing ? "-" : "+") << a.component;
            }
            os << ">";
        }
        first = false;
    }
    return os.str();
}

CubicalChain operator+(CubicalChain a, const CubicalChain& b) {
    a.add(b);
    return a;
}

CubicalChain operator-(CubicalChain a, const CubicalChain& b) {
    a.add(b, -1);
    return a;
}

CubicalChain operator*(Coefficient s, CubicalChain a) {
    CubicalChain out(a.formal_dim());
    out.add(a, s);
    return out;
}

CubicalChain normalize_chain(const CubicalChain& c) {
    CubicalChain out(c.formal_dim());
    for (const auto& [q, coeff] : c.terms()) {
        if (q.degenerate()) continue;
        std::vector<std::size_t> order;
        int sign = 1;
        for (const auto& a : q.axes) {
            order.push_back(a.component);
            if (a.direction == FormalAxis::Direction::Decreasing) sign = -sign;
        }
        for (std::size_t i = 0; i < order.size(); ++i)
            for (std::size_t j = i + 1; j < order.size(); ++j)
                if (order[i] > order[j]) sign = -sign;
        out.add(LabeledCube::canonical(q.target), sign * coeff);
    }
    return out;
}

CubicalChain cube_boundary(const CubicalChain& c) {
    if (c.formal_dim() <= 0) throw std::invalid_argument("boundary of a 0-dimensional chain");
    CubicalChain out(c.formal_dim() - 1);
    for (const auto& [q, coeff] : c.terms()) {
        for (std::size_t i = 0; i < q.axes.size(); ++i) {
            const auto& a = q.axes[i];
            if (a.direction == FormalAxis::Direction::Collapsed) continue;  // the two faces coincide
            const Interval iv = q.target.components[a.component];
            const bool up = a.direction == FormalAxis::Direction::Increasing;
            const Coefficient s = i % 2 == 0 ? coeff : -coeff;
            LabeledCube face{q.target, q.axes};
            face.axes.erase(face.axes.begin() + static_cast<std::ptrdiff_t>(i));
            face.target.components[a.component] = Interval::point(up ? iv.hi : iv.lo);
            out.add(face, s);
            face.target.components[a.component] = Interval::point(up ? iv.lo : iv.hi);
            out.add(face, -s);
        }
    }
    return normalize_chain(out);
}

// ---------------------------------------------------------------- complexes

std::set<ElementaryCube> face_closure(const std::set<ElementaryCube>& cubes) {
    std::set<ElementaryCube> out;
    std::vector<ElementaryCube> todo(cubes.begin(), cubes.end());
    const std::size_t n = cubes.empty() ? 0 : cubes.begin()->ambient_dim();
    while (!todo.empty()) {
        ElementaryCube q = std::move(todo.back());
        todo.pop_back();
        if (q.ambient_dim() != n) throw std::invalid_argument("cubes of different ambient dimensions");
        if (!out.insert(q).second) continue;
        for (std::size_t j : q.free_axes()) {
            ElementaryCube f = q;
            f.components[j] = Interval::point(q.components[j].lo);
            todo.push_back(f);
            f.components[j] = Interval::point(q.components[j].hi);
            todo.push_back(std::move(f));
        }
    }
    return out;
}

CubicalComplex build_complex(const std::set<ElementaryCube>& cubes) {
    CubicalComplex out;
    const auto closed = face_closure(cubes);
    for (const auto& q : closed)
        if (!cubes.count(q)) out.added.push_back(q);
    if (closed.empty()) return out;

    int top = 0;
    for (const auto& q : closed) top = std::max(top, q.dimension());
    out.cells.resize(static_cast<std::size_t>(top) + 1);
    for (const auto& q : closed) out.cells[static_cast<std::size_t>(q.dimension())].push_back(q);

    std::vector<std::vector<std::string>> labels;
    std::vector<IntegerMatrix> bnds;
    for (std::size_t k = 0; k < out.cells.size(); ++k) {
        std::vector<std::string> l;
        for (const auto& q : out.cells[k]) l.push_back(q.to_string());
        labels.push_back(std::move(l));
    }
    for (std::size_t k = 1; k < out.cells.size(); ++k) {
        std::map<ElementaryCube, std::size_t> row;
        for (std::size_t i = 0; i < out.cells[k - 1].size(); ++i) row[out.cells[k - 1][i]] = i;
        IntegerMatrix d(out.cells[k - 1].size(), out.cells[k].size());
        for (std::size_t j = 0; j < out.cells[k].size(); ++j) {
            const auto faces = cube_boundary(CubicalChain::of(out.cells[k][j]));
            for (const auto& [f, c] : faces.terms()) d(row.at(f.target), j) = c;
        }
        bnds.push_back(std::move(d));
    }
    out.complex = GradedFreeComplex(0, std::move(labels), std::move(bnds));
    return out;
}

IntegerVector chain_coordinates(const CubicalComplex& x, const CubicalChain& c) {
    const auto k = static_cast<std::size_t>(c.formal_dim());
    if (c.formal_dim() < 0 || k >= x.cells.size()) {
        if (!c.is_zero()) throw std::invalid_argument("chain dimension outside the complex");
        return IntegerVector(x.complex.rank(c.formal_dim()));
    }
    IntegerVector out(x.cells[k].size());
    for (const auto chain = normalize_chain(c); const auto& [q, coeff] : chain.terms()) {
        const auto it = std::lower_bound(x.cells[k].begin(), x.cells[k].end(), q.target);
        if (it == x.cells[k].end() || *it != q.target) throw std::invalid_argument("cube " + q.target.to_string() + " is not a cell");
        out[static_cast<std::size_t>(it - x.cells[k].begin())] = coeff;
    }
    return out;
}

// ---------------------------------------------------------------- cutting

namespace {

enum class Side { Minus, Plus, Crossing };

Side side_of(const ElementaryCube& q, std::size_t axis, const Dyadic& level) {
    if (axis >= q.ambient_dim()) throw std::invalid_argument("cut axis outside the ambient space");
    const Interval& iv = q.components[axis];
    if (iv.lo == level || iv.hi == level)
        throw std::invalid_argument("non-generic cut: level " + level.to_string() + " meets " + q.to_string());
    if (iv.hi < level) return Side::Minus;
    if (iv.lo > level) return Side::Plus;
    return Side::Crossing;
}

// free components before the axis
int free_before(const ElementaryCube& q, std::size_t axis) {
    int p = 0;
    for (std::size_t j = 0; j < axis; ++j) p += q.components[j].degenerate() ? 0 : 1;
    return p;
}

ElementaryCube with_component(ElementaryCube q, std::size_t axis, Interval iv) {
    q.components[axis] = iv;
    return q;
}

ElementaryCube extend(ElementaryCube q, Interval iv) {
    q.components.push_back(iv);
    return q;
}

// C applied to a normalized chain: crease cells over crossing cubes, boxes elsewhere
CreaseChain crease_of(const CubicalChain& c, std::size_t axis, const Dyadic& level) {
    CreaseChain out(c.formal_dim() + 1);
    for (const auto& [q, coeff] : c.terms()) {
        if (side_of(q.target, axis, level) == Side::Crossing) out.add_crease({q.target, axis, level}, coeff);
        else out.add_box(CubicalChain::of(extend(q.target, {0, 1})), coeff);
    }
    return out;
}

CreaseChain homotopy(const CubicalChain& c, std::size_t axis, const Dyadic& level) {
    CreaseChain k = crease_of(normalize_chain(c), axis, level);
    if (c.formal_dim() % 2 == 0) return k;
    CreaseChain neg(k.formal_dim());
    neg.add(k, -1);
    return neg;
}

}  // namespace

CutResult cut_chain(const CubicalChain& c, std::size_t axis, const Dyadic& level) {
    const int k = c.formal_dim();
    CutResult r{CubicalChain(k), CubicalChain(k), CubicalChain(k - 1), axis, level};
    for (const auto chain = normalize_chain(c); const auto& [q, coeff] : chain.terms()) {
        const ElementaryCube& t = q.target;
        switch (side_of(t, axis, level)) {
            case Side::Minus: r.minus.add(q, coeff); break;
            case Side::Plus: r.plus.add(q, coeff); break;
            case Side::Crossing: {
                const Interval iv = t.components[axis];
                r.plus.add(LabeledCube::canonical(with_component(t, axis, {level, iv.hi})), coeff);
                r.minus.add(LabeledCube::canonical(with_component(t, axis, {iv.lo, level})), coeff);
                const Coefficient s = free_before(t, axis) % 2 == 0 ? coeff : -coeff;
                r.slice.add(LabeledCube::canonical(with_component(t, axis, Interval::point(level))), s);
                break;
            }
        }
    }
    return r;
}

bool cut_identity_holds(const CubicalChain& c, std::size_t axis, const Dyadic& level) {
    if (c.formal_dim() == 0) {
        const auto r = cut_chain(c, axis, level);
        return r.slice.is_zero() && r.plus + r.minus == normalize_chain(c);
    }
    const auto r = cut_chain(c, axis, level);
    const auto rb = cut_chain(cube_boundary(c), axis, level);
    bool ok = cube_boundary(r.plus) == rb.plus - r.slice && cube_boundary(r.minus) == rb.minus + r.slice;
    if (c.formal_dim() >= 2) ok = ok && cube_boundary(r.slice) == -1 * rb.slice;
    return ok;
}

// ---------------------------------------------------------------- creases

void CreaseChain::add_box(const CubicalChain& c, Coefficient scale) {
    if (c.is_zero()) return;
    boxes_.add(c, scale);
}

void CreaseChain::add_crease(const CreaseCell& cell, Coefficient c) {
    if (cell.base.dimension() + 1 != dim_) throw std::invalid_argument("crease cell of the wrong dimension");
    if (c == 0) return;
    auto [it, inserted] = creases_.try_emplace(cell, c);
    if (!inserted && (it->second += c) == 0) creases_.erase(it);
}

void CreaseChain::add(const CreaseChain& other, Coefficient scale) {
    add_box(other.boxes_, scale);
    for (const auto& [cell, c] : other.creases_) add_crease(cell, scale * c);
}

std::string CreaseChain::to_string() const {
    std::ostringstream os;
    os << boxes_.to_string();
    for (const auto& [cell, c] : creases_)
        os << (c < 0 ? " - " : " + ") << std::abs(c) << "*crease(" << cell.base.to_string() << ", x" << cell.axis
           << "=" << cell.level.to_string() << ")";
    return os.str();
}

CreaseChain embed_at(const CubicalChain& c, const Dyadic& t) {
    CreaseChain out(c.formal_dim());
    for (const auto chain = normalize_chain(c); const auto& [q, coeff] : chain.terms())
        out.add_box(CubicalChain::of(extend(q.target, Interval::point(t))), coeff);
    return out;
}

CreaseChain crease_boundary(const CreaseChain& c) {
    if (c.formal_dim() <= 0) throw std::invalid_argument("boundary of a 0-dimensional chain");
    CreaseChain out(c.formal_dim() - 1);
    if (!c.boxes().is_zero()) out.add_box(cube_boundary(c.boxes()));
    for (const auto& [cell, coeff] : c.creases()) {
        const int k = cell.base.dimension();
        const CubicalChain q = CubicalChain::of(cell.base);
        if (k >= 1) out.add(crease_of(cube_boundary(q), cell.axis, cell.level), coeff);
        const auto r = cut_chain(q, cell.axis, cell.level);
        const Coefficient s = k % 2 == 0 ? coeff : -coeff;
        out.add(embed_at(r.plus + r.minus, 1), s);
        out.add(embed_at(q, 0), -s);
    }
    return out;
}

CreaseChain crease_homotopy(const CubicalChain& c, std::size_t axis, const Dyadic& level) {
    if (c.formal_dim() <= 0) throw std::invalid_argument("crease homotopy needs a chain of dimension >= 1");
    cut_chain(c, axis, level);  // genericity
    return homotopy(c, axis, level);
}

bool crease_identity_holds(const CubicalChain& c, std::size_t axis, const Dyadic& level) {
    const auto r = cut_chain(c, axis, level);
    CreaseChain lhs = crease_boundary(crease_homotopy(c, axis, level));
    lhs.add(homotopy(cube_boundary(c), axis, level));
    CreaseChain rhs = embed_at(r.plus + r.minus, 1);
    rhs.add(embed_at(c, 0), -1);
    return lhs == rhs;
}

// ---------------------------------------------------------------- subdivision

std::set<ElementaryCube> subdivide(const std::set<ElementaryCube>& cubes, std::size_t axis, const Dyadic& level) {
    std::set<ElementaryCube> out;
    for (const auto& q : face_closure(cubes)) {
        if (side_of(q, axis, level) != Side::Crossing) {
            out.insert(q);
            continue;
        }
        const Interval iv = q.components[axis];
        out.insert(with_component(q, axis, {iv.lo, level}));
        out.insert(with_component(q, axis, {level, iv.hi}));
        out.insert(with_component(q, axis, Interval::point(level)));
    }
    return out;
}

ChainMap subdivision_map(const CubicalComplex& coarse, const CubicalComplex& fine, std::size_t axis, const Dyadic& level) {
    ChainMap f{coarse.complex, fine.complex, 0, {}};
    for (std::size_t k = 0; k < coarse.cells.size(); ++k) {
        std::vector<IntegerVector> cols;
        for (const auto& q : coarse.cells[k]) {
            const auto r = cut_chain(CubicalChain::of(q), axis, level);
            cols.push_back(chain_coordinates(fine, r.plus + r.minus));
        }
        f.matrices.push_back(IntegerMatrix::from_columns(fine.complex.rank(static_cast<int>(k)), cols));
    }
    return f;
}

}  // namespace cornerhom
