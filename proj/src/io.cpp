#include "cornerhom/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace cornerhom {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::invalid_argument(line == 0 ? what
                                      : "line " + std::to_string(line) +
                                            (column ? ", column " + std::to_string(column) : std::string()) + ": " +
                                            what),
      line_(line),
      column_(column) {}

namespace {

struct Token {
    std::string text;
    std::size_t column = 0;
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

std::string strip_comment(const std::string& line) {
    const auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

bool valid_label(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'' || c == '[' ||
               c == ']' || c == '{' || c == '}' || c == ',' || c == '/';
    });
}

Integer parse_integer(const std::string& s, std::size_t line, std::size_t column) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParseError("malformed coefficient '" + s + "'", line, column);
    return Integer(s);
}

int parse_small(const std::string& s, std::size_t line, std::size_t column) {
    const Integer v = parse_integer(s, line, column);
    if (v > 1000000) throw ParseError("degree " + s + " is too large", line, column);
    return static_cast<int>(v.get_si());
}

struct Declared {
    int degree = 0;
    std::size_t index = 0;
};

struct Term {
    Integer coefficient;
    std::string label;
    std::size_t column = 0;
};

// "+2*a", "-b", "+1*c"
Term parse_term(const Token& t, std::size_t line) {
    std::string s = t.text;
    Term term{1, "", t.column};
    std::size_t pos = 0;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        if (s[pos] == '-') term.coefficient = -1;
        ++pos;
    }
    const auto star = s.find('*', pos);
    if (star != std::string::npos) {
        term.coefficient *= parse_integer(s.substr(pos, star - pos), line, t.column + pos);
        pos = star + 1;
    }
    term.label = s.substr(pos);
    if (!valid_label(term.label)) throw ParseError("malformed term '" + s + "'", line, t.column);
    return term;
}

}  // namespace

CircleComplex ComplexFile::circle_or_trivial() const { return circle ? *circle : CircleComplex::trivial(complex); }

ComplexFile parse_complex(const std::string& text) {
    const auto lines = split_lines(text);
    std::optional<int> dim;
    std::size_t dim_line = 0;
    std::vector<std::vector<std::string>> gens;
    std::vector<bool> gen_seen;
    std::map<std::string, Declared> declared;
    std::vector<IntegerMatrix> bnd, rot;
    std::map<std::string, std::size_t> bnd_seen, rot_seen;
    bool any_rot = false, matrices_ready = false;

    auto require_dim = [&](std::size_t ln, std::size_t col) {
        if (!dim) throw ParseError("'dim' must come first", ln, col);
    };

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t ln = i + 1;
        const auto toks = tokenize(strip_comment(lines[i]));
        if (toks.empty()) continue;
        const std::string& kw = toks[0].text;
        if (kw == "dim") {
            if (dim) throw ParseError("duplicate 'dim'", ln, toks[0].column);
            if (toks.size() != 2) throw ParseError("expected 'dim N'", ln, toks[0].column);
            dim = parse_small(toks[1].text, ln, toks[1].column);
            dim_line = ln;
            const auto n = static_cast<std::size_t>(*dim + 1);
            gens.assign(n, {});
            gen_seen.assign(n, false);
            continue;
        }
        if (kw == "gen") {
            require_dim(ln, toks[0].column);
            if (toks.size() < 2 || toks[1].text.empty() || toks[1].text.back() != ':')
                throw ParseError("expected 'gen k: labels'", ln, toks[0].column);
            const int k = parse_small(toks[1].text.substr(0, toks[1].text.size() - 1), ln, toks[1].column);
            if (k > *dim) throw ParseError("degree " + std::to_string(k) + " exceeds dim", ln, toks[1].column);
            const auto uk = static_cast<std::size_t>(k);
            if (gen_seen[uk]) throw ParseError("duplicate 'gen " + std::to_string(k) + "'", ln, toks[0].column);
            if (!bnd_seen.empty() || !rot_seen.empty())
                throw ParseError("generators must be declared before bnd/rot lines", ln, toks[0].column);
            gen_seen[uk] = true;
            for (std::size_t t = 2; t < toks.size(); ++t) {
                if (!valid_label(toks[t].text)) throw ParseError("invalid label '" + toks[t].text + "'", ln, toks[t].column);
                if (declared.count(toks[t].text))
                    throw ParseError("label '" + toks[t].text + "' declared twice", ln, toks[t].column);
                declared[toks[t].text] = {k, gens[uk].size()};
                gens[uk].push_back(toks[t].text);
            }
            continue;
        }
        if (kw == "bnd" || kw == "rot") {
            require_dim(ln, toks[0].column);
            const bool is_bnd = kw == "bnd";
            if (toks.size() < 2 || toks[1].text.size() < 2 || toks[1].text.back() != ':')
                throw ParseError("expected '" + kw + " label: terms'", ln, toks[0].column);
            const std::string src = toks[1].text.substr(0, toks[1].text.size() - 1);
            const auto it = declared.find(src);
            if (it == declared.end()) throw ParseError("unknown label '" + src + "'", ln, toks[1].column);
            auto& seen = is_bnd ? bnd_seen : rot_seen;
            if (seen.count(src)) throw ParseError("duplicate '" + kw + " " + src + "'", ln, toks[0].column);
            seen[src] = ln;
            if (!matrices_ready) {
                matrices_ready = true;
                for (int k = 1; k <= *dim; ++k)
                    bnd.emplace_back(gens[static_cast<std::size_t>(k - 1)].size(), gens[static_cast<std::size_t>(k)].size());
                for (int k = 0; k <= *dim; ++k)
                    rot.emplace_back(k < *dim ? gens[static_cast<std::size_t>(k + 1)].size() : 0,
                                     gens[static_cast<std::size_t>(k)].size());
            }
            const int target = it->second.degree + (is_bnd ? -1 : 1);
            for (std::size_t t = 2; t < toks.size(); ++t) {
                const Term term = parse_term(toks[t], ln);
                const auto jt = declared.find(term.label);
                if (jt == declared.end()) throw ParseError("unknown label '" + term.label + "'", ln, term.column);
                if (jt->second.degree != target)
                    throw ParseError("degree mismatch: '" + term.label + "' has degree " +
                                         std::to_string(jt->second.degree) + ", expected " + std::to_string(target),
                                     ln, term.column);
                if (is_bnd)
                    bnd[static_cast<std::size_t>(target)](jt->second.index, it->second.index) += term.coefficient;
                else {
                    any_rot = true;
                    rot[static_cast<std::size_t>(it->second.degree)](jt->second.index, it->second.index) +=
                        term.coefficient;
                }
            }
            continue;
        }
        throw ParseError("unknown keyword '" + kw + "'", ln, toks[0].column);
    }
    if (!dim) throw ParseError("missing 'dim'", 0, 0);
    if (!matrices_ready)
        for (int k = 1; k <= *dim; ++k)
            bnd.emplace_back(gens[static_cast<std::size_t>(k - 1)].size(), gens[static_cast<std::size_t>(k)].size());

    ComplexFile out;
    out.complex = GradedFreeComplex::from_degree_zero(gens, bnd);
    const auto bad = verify_complex(out.complex);
    if (!bad.empty()) throw ParseError("boundary of boundary is nonzero in degree " + std::to_string(bad.front()), dim_line, 0);
    if (any_rot) {
        CircleComplex c{out.complex, rot};
        const auto issues = verify_circle_complex(c);
        if (!issues.empty()) throw ParseError(issues.front(), rot_seen.begin()->second, 0);
        out.circle = std::move(c);
    }
    return out;
}

ComplexFile read_complex_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0, 0);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_complex(buf.str());
}

namespace {

void emit_terms(std::ostringstream& out, const IntegerMatrix& m, std::size_t col, const std::vector<std::string>& rows) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const Integer& c = m(r, col);
        if (c == 0) continue;
        out << ' ' << (c > 0 ? "+" : "-") << Integer(abs(c)).get_str() << '*' << rows[r];
    }
}

}  // namespace

std::string emit_complex(const GradedFreeComplex& x, const std::vector<IntegerMatrix>& rotation) {
    if (x.bottom_degree() != 0 || x.modulus() != 0)
        throw std::invalid_argument("complex files hold integral complexes starting in degree 0");
    std::ostringstream out;
    const int top = x.top_degree();
    out << "dim " << top << '\n';
    for (int k = 0; k <= top; ++k) {
        out << "gen " << k << ':';
        for (const auto& g : x.generators(k)) out << ' ' << g;
        out << '\n';
    }
    for (int k = 1; k <= top; ++k) {
        const auto d = x.boundary(k);
        for (std::size_t c = 0; c < x.rank(k); ++c) {
            out << "bnd " << x.generators(k)[c] << ':';
            emit_terms(out, d, c, x.generators(k - 1));
            out << '\n';
        }
    }
    for (std::size_t i = 0; i < rotation.size(); ++i) {
        const int k = static_cast<int>(i);
        for (std::size_t c = 0; c < rotation[i].cols(); ++c) {
            bool any = false;
            for (std::size_t r = 0; r < rotation[i].rows(); ++r) any = any || rotation[i](r, c) != 0;
            if (!any) continue;
            out << "rot " << x.generators(k)[c] << ':';
            emit_terms(out, rotation[i], c, x.generators(k + 1));
            out << '\n';
        }
    }
    return out.str();
}

SurfaceCase parse_surface(const std::string& text, const std::string& name) {
    const auto lines = split_lines(text);
    std::optional<Expression> constraint, function;
    std::optional<Box> box;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t ln = i + 1;
        const std::string body = strip_comment(lines[i]);
        const auto toks = tokenize(body);
        if (toks.empty()) continue;
        const std::string& kw = toks[0].text;
        const std::size_t rest = toks[0].column - 1 + kw.size();
        if (kw == "constraint" || kw == "function") {
            auto& slot = kw == "constraint" ? constraint : function;
            if (slot) throw ParseError("duplicate '" + kw + "'", ln, toks[0].column);
            try {
                slot = Expression::parse(body.substr(rest));
            } catch (const ExpressionError& e) {
                std::string what = e.what();
                what = what.substr(0, what.rfind(" at column "));
                throw ParseError(what, ln, rest + e.column());
            }
        } else if (kw == "box") {
            if (box) throw ParseError("duplicate 'box'", ln, toks[0].column);
            if (toks.size() != 7) throw ParseError("expected 'box x0 x1 y0 y1 z0 z1'", ln, toks[0].column);
            Box b;
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t e = 0; e < 2; ++e) {
                    const Token& t = toks[1 + 2 * a + e];
                    std::size_t used = 0;
                    double v = 0;
                    try {
                        v = std::stod(t.text, &used);
                    } catch (const std::exception&) {
                        used = 0;
                    }
                    if (used != t.text.size() || !std::isfinite(v)) throw ParseError("malformed number '" + t.text + "'", ln, t.column);
                    (e == 0 ? b.lo : b.hi)[a] = v;
                }
            for (std::size_t a = 0; a < 3; ++a)
                if (!(b.lo[a] < b.hi[a])) throw ParseError("empty box", ln, toks[0].column);
            box = b;
        } else {
            throw ParseError("unknown keyword '" + kw + "'", ln, toks[0].column);
        }
    }
    if (!constraint) throw ParseError("missing 'constraint'", 0, 0);
    if (!function) throw ParseError("missing 'function'", 0, 0);
    if (!box) throw ParseError("missing 'box'", 0, 0);
    SurfaceCase c;
    c.surface.name = name;
    c.surface.constraint = *constraint;
    c.surface.box = *box;
    c.function.f = *function;
    const auto bad = regularity_violations(c.surface);
    if (!bad.empty()) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "(%.6g, %.6g, %.6g)", bad[0][0], bad[0][1], bad[0][2]);
        throw MorseAssumptionError("0 is not a regular value of the constraint: |grad F| <= 1e-8 near " + std::string(buf));
    }
    return c;
}

SurfaceCase read_surface_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0, 0);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string name = path;
    const auto slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    return parse_surface(buf.str(), name);
}

// Report

namespace {

void require_key(const std::string& key) {
    if (key.empty() || key.find_first_of("=\n ") != std::string::npos)
        throw std::invalid_argument("report key '" + key + "' must be nonempty without spaces, '=' or newlines");
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '\\') out += "\\\\";
        else if (c == '\n') out += "\\n";
        else out += c;
    }
    return out;
}

std::string unescape(const std::string& s, std::size_t line) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out += s[i];
            continue;
        }
        if (i + 1 == s.size()) throw ParseError("dangling escape", line, i + 1);
        const char n = s[++i];
        if (n == '\\') out += '\\';
        else if (n == 'n') out += '\n';
        else throw ParseError(std::string("unknown escape '\\") + n + "'", line, i);
    }
    return out;
}

std::string torsion_text(const IntegerVector& t) {
    std::string s;
    for (const auto& v : t) s += (s.empty() ? "" : " ") + v.get_str();
    return s;
}

std::string group_text(const HomologyGroup& h, const std::string& ring) {
    std::string s;
    if (h.betti == 1) s = ring;
    else if (h.betti > 1) s = ring + "^" + std::to_string(h.betti);
    for (const auto& t : h.torsion) s += (s.empty() ? "" : " + ") + std::string("Z/") + t.get_str();
    return s.empty() ? "0" : s;
}

}  // namespace

bool Report::passes() const {
    return std::all_of(checks.begin(), checks.end(), [](const ReportCheck& c) { return c.passed; });
}

void Report::check(const std::string& name, bool passed, const std::string& detail) {
    require_key(name);
    checks.push_back({name, passed, detail});
}

void Report::field(const std::string& key, const std::string& value) {
    require_key(key);
    fields.emplace_back(key, value);
}

std::string Report::to_text() const {
    std::ostringstream out;
    out << "command: " << command << '\n';
    if (!coefficients.empty()) out << "coefficients: " << coefficients << '\n';
    if (!homology.empty()) {
        std::size_t wd = 6, wb = 5;
        for (const auto& h : homology) {
            wd = std::max(wd, std::to_string(h.degree).size());
            wb = std::max(wb, std::to_string(h.betti).size());
        }
        out << '\n'
            << std::setw(static_cast<int>(wd)) << "degree" << "  " << std::setw(static_cast<int>(wb)) << "betti"
            << "  torsion  group\n";
        for (const auto& h : homology) {
            const std::string t = h.torsion.empty() ? "-" : torsion_text(h.torsion);
            out << std::setw(static_cast<int>(wd)) << h.degree << "  " << std::setw(static_cast<int>(wb)) << h.betti
                << "  " << std::left << std::setw(7) << t << std::right << "  " << group_text(h, coefficients.empty() ? "Z" : coefficients) << '\n';
        }
    }
    if (!fields.empty()) {
        std::size_t wk = 0;
        for (const auto& [k, v] : fields) wk = std::max(wk, k.size());
        out << '\n';
        for (const auto& [k, v] : fields)
            out << std::left << std::setw(static_cast<int>(wk)) << k << std::right << "  " << v << '\n';
    }
    if (!checks.empty()) {
        out << '\n';
        for (const auto& c : checks) {
            out << (c.passed ? "[pass] " : "[FAIL] ") << c.name;
            if (!c.detail.empty()) out << ": " << c.detail;
            out << '\n';
        }
    }
    if (!diagnostics.empty()) {
        out << "\ndiagnostics:\n";
        for (const auto& d : diagnostics) out << "  " << d << '\n';
    }
    out << "\nresult: " << (passes() ? "pass" : "FAIL") << '\n';
    return out.str();
}

std::string Report::to_machine() const {
    std::ostringstream out;
    out << "begin report\n";
    out << "command=" << escape(command) << '\n';
    out << "coefficients=" << escape(coefficients) << '\n';
    for (const auto& h : homology) out << "homology." << h.degree << '=' << h.betti << (h.torsion.empty() ? "" : " ") << torsion_text(h.torsion) << '\n';
    for (const auto& c : checks) out << "check." << c.name << '=' << (c.passed ? "pass" : "fail") << (c.detail.empty() ? "" : " ") << escape(c.detail) << '\n';
    for (const auto& [k, v] : fields) out << "field." << k << '=' << escape(v) << '\n';
    for (const auto& d : diagnostics) out << "diagnostic=" << escape(d) << '\n';
    out << "status=" << (passes() ? "pass" : "fail") << '\n';
    out << "end report\n";
    return out.str();
}

Report Report::from_machine(const std::string& text) {
    const auto lines = split_lines(text);
    Report r;
    bool inside = false, done = false, status_seen = false;
    for (std::size_t i = 0; i < lines.size() && !done; ++i) {
        const std::size_t ln = i + 1;
        const std::string& line = lines[i];
        if (!inside) {
            inside = line == "begin report";
            continue;
        }
        if (line == "end report") {
            done = true;
            break;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", ln, 1);
        const std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        if (key == "command") r.command = unescape(value, ln);
        else if (key == "coefficients") r.coefficients = unescape(value, ln);
        else if (key.rfind("homology.", 0) == 0) {
            HomologyGroup h;
            try {
                std::size_t used = 0;
                h.degree = std::stoi(key.substr(9), &used);
                if (used != key.size() - 9) throw std::invalid_argument("degree");
            } catch (const std::exception&) {
                throw ParseError("malformed degree in '" + key + "'", ln, 10);
            }
            std::istringstream vs(value);
            std::string tok;
            if (!(vs >> tok)) throw ParseError("missing betti number", ln, eq + 2);
            h.betti = static_cast<std::size_t>(parse_integer(tok, ln, eq + 2).get_ui());
            while (vs >> tok) h.torsion.push_back(parse_integer(tok, ln, eq + 2));
            r.homology.push_back(std::move(h));
        } else if (key.rfind("check.", 0) == 0) {
            ReportCheck c;
            c.name = key.substr(6);
            const std::string verdict = value.substr(0, value.find(' '));
            if (verdict != "pass" && verdict != "fail") throw ParseError("expected pass or fail", ln, eq + 2);
            c.passed = verdict == "pass";
            if (value.size() > verdict.size()) c.detail = unescape(value.substr(verdict.size() + 1), ln);
            r.checks.push_back(std::move(c));
        } else if (key.rfind("field.", 0) == 0) {
            r.fields.emplace_back(key.substr(6), unescape(value, ln));
        } else if (key == "diagnostic") {
            r.diagnostics.push_back(unescape(value, ln));
        } else if (key == "status") {
            status_seen = true;
            if (value != (r.passes() ? "pass" : "fail")) throw ParseError("status disagrees with the checks", ln, eq + 2);
        } else {
            throw ParseError("unknown key '" + key + "'", ln, 1);
        }
    }
    if (!inside) throw ParseError("no 'begin report' line", 0, 0);
    if (!done) throw ParseError("missing 'end report'", 0, 0);
    if (!status_seen) throw ParseError("missing status", 0, 0);
    return r;
}

}  // namespace cornerhom
