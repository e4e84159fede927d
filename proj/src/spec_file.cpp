#include "odecert/spec_file.hpp"

#include "odecert/errors.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace odecert {

namespace {

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// integer or p/q, consuming from pos
mpq_class parse_rat(const std::string& s, std::size_t& pos) {
    std::size_t start = pos;
    bool neg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        neg = s[pos] == '-';
        ++pos;
    }
    std::size_t d0 = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == d0) throw validation_error("malformed rational '" + s.substr(start) + "'");
    mpz_class num(s.substr(d0, pos - d0));
    mpz_class den(1);
    if (pos < s.size() && s[pos] == '/') {
        ++pos;
        std::size_t q0 = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == q0) throw validation_error("malformed rational '" + s.substr(start) + "'");
        den = mpz_class(s.substr(q0, pos - q0));
        if (den == 0) throw validation_error("zero denominator in '" + s.substr(start) + "'");
    }
    mpq_class q(num, den);
    q.canonicalize();
    return neg ? mpq_class(-q) : q;
}

void skip_spaces(const std::string& s, std::size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

} // namespace

GaussianRational parse_gaussian_rational(const std::string& text) {
    std::string s = trimmed(text);
    if (s.empty()) throw validation_error("empty rational");
    std::size_t pos = 0;

    // lone "i" / "-i"
    if (s == "i") return GaussianRational::i();
    if (s == "-i") return -GaussianRational::i();

    mpq_class first = parse_rat(s, pos);
    skip_spaces(s, pos);
    if (pos == s.size()) return GaussianRational(first);
    if (s[pos] == 'i' && pos + 1 == s.size()) return GaussianRational(mpq_class(0), first);

    if (s[pos] != '+' && s[pos] != '-')
        throw validation_error("malformed rational '" + s + "'");
    mpq_class second = parse_rat(s, pos);
    skip_spaces(s, pos);
    if (pos == s.size() || s[pos] != 'i' || pos + 1 != s.size())
        throw validation_error("malformed complex rational '" + s + "' (expected trailing i)");
    return GaussianRational(first, second);
}

namespace {

std::vector<GaussianRational> parse_list(const std::string& value, std::size_t line) {
    std::vector<GaussianRational> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::string x = trimmed(item);
        if (x.empty()) throw parse_error(line, "empty list entry");
        try {
            out.push_back(parse_gaussian_rational(x));
        } catch (const error& e) {
            throw parse_error(line, e.what());
        }
    }
    if (out.empty()) throw parse_error(line, "empty list");
    return out;
}

QMatrix to_matrix(const std::vector<GaussianRational>& flat, int d, std::size_t line) {
    if (static_cast<int>(flat.size()) != d * d)
        throw parse_error(line, "matrix needs " + std::to_string(d * d) + " entries, got " +
                                    std::to_string(flat.size()));
    QMatrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m.at(i, j) = flat[i * d + j];
    return m;
}

struct Entry {
    std::string value;
    std::size_t line;
};
using Section = std::map<std::string, Entry>;

} // namespace

LoadedSpec load_spec_text(const std::string& text) {
    std::map<std::string, Section> sections;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    std::string current;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trimmed(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw parse_error(lineno, "unterminated section header");
            current = trimmed(line.substr(1, line.size() - 2));
            if (current.empty()) throw parse_error(lineno, "empty section name");
            sections[current];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw parse_error(lineno, "expected 'key = value'");
        if (current.empty()) throw parse_error(lineno, "key outside of any section");
        std::string key = trimmed(line.substr(0, eq));
        std::string value = trimmed(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw parse_error(lineno, "expected 'key = value'");
        auto [it, fresh] = sections[current].emplace(key, Entry{value, lineno});
        if (!fresh) throw parse_error(lineno, "duplicate key '" + key + "'");
    }

    int kinds = static_cast<int>(sections.count("ode")) + static_cast<int>(sections.count("system")) +
                static_cast<int>(sections.count("lif"));
    if (kinds != 1)
        throw parse_error(0, "file must contain exactly one of [ode], [system], [lif]");

    auto require = [&](const Section& s, const std::string& key, const std::string& sec) -> const Entry& {
        auto it = s.find(key);
        if (it == s.end()) throw parse_error(0, "missing key '" + key + "' in [" + sec + "]");
        return it->second;
    };

    auto parse_expr_signal = [&](const Entry& e) {
        try {
            return Signal::from_text(e.value);
        } catch (const error& err) {
            throw parse_error(e.line, err.what());
        }
    };

    LoadedSpec out;
    if (sections.count("ode")) {
        const Section& sec = sections["ode"];
        out.kind = LoadedSpec::Kind::Scalar;
        LinearODE ode;
        ode.a = parse_list(require(sec, "a", "ode").value, require(sec, "a", "ode").line);
        ode.b = parse_list(require(sec, "b", "ode").value, require(sec, "b", "ode").line);
        if (sec.count("y0"))
            ode.y0 = parse_list(sec.at("y0").value, sec.at("y0").line);
        else
            ode.y0.assign(static_cast<std::size_t>(ode.m() > 0 ? ode.m() : 0), GaussianRational(0));
        ode.validate();
        out.ode = ode.normalize();
        if (sections.count("signal"))
            out.signals.push_back(parse_expr_signal(require(sections["signal"], "expr", "signal")));
        else
            out.signals.push_back(Signal::zero());
        return out;
    }

    if (sections.count("system")) {
        const Section& sec = sections["system"];
        out.kind = LoadedSpec::Kind::System;
        ODESystem sys;
        {
            const Entry& de = require(sec, "d", "system");
            try {
                GaussianRational dv = parse_gaussian_rational(de.value);
                if (!dv.is_real() || dv.re().get_den() != 1 || dv.re() <= 0)
                    throw parse_error(de.line, "d must be a positive integer");
                sys.d = static_cast<int>(dv.re().get_num().get_si());
            } catch (const error&) {
                throw parse_error(de.line, "d must be a positive integer");
            }
        }
        // A0, A1 required; A2.. optional (loaded so the analyzer can reject m >= 2)
        for (int k = 0;; ++k) {
            std::string key = "A" + std::to_string(k);
            if (!sec.count(key)) {
                if (k <= 1) throw parse_error(0, "missing key '" + key + "' in [system]");
                break;
            }
            const Entry& e = sec.at(key);
            sys.A.push_back(to_matrix(parse_list(e.value, e.line), sys.d, e.line));
        }
        for (int k = 0;; ++k) {
            std::string key = "B" + std::to_string(k);
            if (!sec.count(key)) break;
            const Entry& e = sec.at(key);
            sys.B.push_back(to_matrix(parse_list(e.value, e.line), sys.d, e.line));
        }
        if (sys.B.empty()) sys.B.push_back(QMatrix(sys.d, sys.d));
        if (sec.count("y0"))
            sys.y0 = parse_list(sec.at("y0").value, sec.at("y0").line);
        else
            sys.y0.assign(static_cast<std::size_t>(sys.d), GaussianRational(0));
        sys.validate();
        out.sys = sys;
        // component signals expr0..expr{d-1}; a bare `expr` fills component 0
        out.signals.assign(static_cast<std::size_t>(sys.d), Signal::zero());
        if (sections.count("signal")) {
            const Section& sig = sections["signal"];
            if (sig.count("expr")) out.signals[0] = parse_expr_signal(sig.at("expr"));
            for (int c = 0; c < sys.d; ++c) {
                std::string key = "expr" + std::to_string(c);
                if (sig.count(key))
                    out.signals[static_cast<std::size_t>(c)] = parse_expr_signal(sig.at(key));
            }
        }
        return out;
    }

    const Section& sec = sections["lif"];
    out.kind = LoadedSpec::Kind::Lif;
    auto get = [&](const std::string& key) {
        const Entry& e = require(sec, key, "lif");
        try {
            return parse_gaussian_rational(e.value);
        } catch (const error& err) {
            throw parse_error(e.line, err.what());
        }
    };
    out.lif.tau_m = get("tau_m");
    out.lif.tau_s = get("tau_s");
    out.lif.v_rest = get("v_rest");
    out.lif.theta = get("theta");
    out.lif.v0 = get("v0");
    out.lif.i0 = get("i0");
    if (sections.count("signal"))
        out.signals.push_back(parse_expr_signal(require(sections["signal"], "expr", "signal")));
    else
        out.signals.push_back(Signal::zero());
    return out;
}

LoadedSpec load_spec(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw validation_error("cannot open '" + path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    return load_spec_text(buf.str());
}

} // namespace odecert
