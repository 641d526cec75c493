#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "exvort/errors.hpp"
#include "exvort/problem.hpp"

namespace exvort {

// ---------------------------------------------------------------------------
// Number formatting: 17 significant digits, locale-independent, so repeated
// runs produce byte-identical files.
// ---------------------------------------------------------------------------

inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt_complex(Complex z) {
    std::string s = fmt_double(z.real());
    const double im = z.imag();
    s += (im < 0.0 || (im == 0.0 && std::signbit(im))) ? "-" : "+";
    s += fmt_double(std::abs(im));
    s += "i";
    return s;
}

inline double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("malformed number: '" + s + "'");
    }
    if (pos != s.size()) throw ConfigError("malformed number: '" + s + "'");
    return v;
}

/// Parse "re+imi" (e.g. "-0.5+0i", "1.25-3.5i").
inline Complex parse_complex(const std::string& s) {
    if (s.empty() || s.back() != 'i')
        throw ConfigError("malformed complex number: '" + s + "'");
    const std::string body = s.substr(0, s.size() - 1);
    // Split at the last '+'/'-' that is not an exponent sign and not leading.
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        const char c = body[i];
        if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos)
        throw ConfigError("malformed complex number: '" + s + "'");
    const double re = parse_double(body.substr(0, split));
    const double im = parse_double(body.substr(split));
    return {re, im};
}

// ---------------------------------------------------------------------------
// Field CSV: header x,y,h1[,h2],phi1_sq[,phi2_sq]; retained nodes only,
// row-major (y outer, x inner).
// ---------------------------------------------------------------------------

inline void write_fields_csv(const std::string& path, const Grid& grid,
                             const std::vector<GridField>& h) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    const int nf = static_cast<int>(h.size());
    out << "x,y";
    for (int A = 0; A < nf; ++A) out << ",h" << (A + 1);
    for (int A = 0; A < nf; ++A) out << ",phi" << (A + 1) << "_sq";
    out << "\n";
    grid.for_each_node([&](int ix, int iy, NodeClass) {
        const Complex z = grid.point(ix, iy);
        out << fmt_double(z.real()) << "," << fmt_double(z.imag());
        for (int A = 0; A < nf; ++A) out << "," << fmt_double(h[A].at(ix, iy));
        for (int A = 0; A < nf; ++A)
            out << "," << fmt_double(std::exp(2.0 * h[A].at(ix, iy)));
        out << "\n";
    });
}

/// Read back a field CSV onto the given grid; returns the h_A fields.
inline std::vector<GridField> read_fields_csv(const std::string& path,
                                              const Grid& grid) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open field file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty field file: " + path);
    int nf = 0;
    {
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ','))
            if (col.rfind("h", 0) == 0) ++nf;
    }
    if (nf < 1) throw ConfigError("field file has no h columns: " + path);
    std::vector<GridField> h(nf, GridField(grid, 0.0));
    std::vector<char> filled(grid.size(), 0);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string col;
        std::vector<double> vals;
        while (std::getline(ss, col, ',')) vals.push_back(std::strtod(col.c_str(), nullptr));
        if (static_cast<int>(vals.size()) < 2 + 2 * nf)
            throw ConfigError("short row in field file: " + path);
        const int ix = static_cast<int>(std::lround(vals[0] / grid.spacing()));
        const int iy = static_cast<int>(std::lround(vals[1] / grid.spacing()));
        if (std::abs(ix) > grid.n() || std::abs(iy) > grid.n() ||
            !grid.is_retained(ix, iy))
            throw ConfigError("field row off the grid: " + path);
        for (int A = 0; A < nf; ++A) h[A].at(ix, iy) = vals[2 + A];
        filled[grid.index(ix, iy)] = 1;
    }
    bool complete = true;
    grid.for_each_node([&](int ix, int iy, NodeClass) {
        complete = complete && filled[grid.index(ix, iy)];
    });
    if (!complete)
        throw ConfigError("field file does not cover the grid: " + path);
    return h;
}

// ---------------------------------------------------------------------------
// Run configuration: flat key-value text with sections.  Complex numbers are
// "re+imi"; per-flavor vortex lists use repeated keys vortex1 / vortex2.
// ---------------------------------------------------------------------------

struct RunConfig {
    // [problem]
    std::string family = "solve";
    int lambda0 = 1;
    int lambda = 1;
    double cutoff = 0.0;  // 0 = surface default
    std::vector<std::vector<double>> q_rows;
    std::vector<double> r;
    std::vector<std::vector<Complex>> vortices;  // up to two flavors
    std::string impurity = "none";               // none | constant | delta
    double impurity_constant = 0.0;
    std::vector<std::pair<Complex, double>> impurity_deltas;
    std::string boundary = "vacuum";  // vacuum | explicit
    std::vector<double> boundary_values;
    // analytic map data
    std::vector<Complex> f_num;
    std::vector<Complex> f_den;
    double beta = 0.0;
    double alpha = 1.0;
    std::vector<Complex> f1_num;
    std::vector<Complex> f2_num;
    // [grid]
    int n = 128;
    // [solver]
    double tol = 1e-10;
    int max_iter = 60;
    double damping = 1.0;
    // [output]
    std::string out_fields = "fields.csv";
    std::string out_meta = "meta.json";
    std::string out_history = "history.txt";
    // [verify] / [compare]
    std::string input_fields;
    std::string compare_a;
    std::string compare_b;
    double compare_tol = 0.0;

    bool operator==(const RunConfig&) const = default;
};

inline std::string serialize_config(const RunConfig& c) {
    std::ostringstream o;
    auto complex_list = [](const std::vector<Complex>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += " ";
            s += fmt_complex(v[i]);
        }
        return s;
    };
    o << "[problem]\n";
    o << "family = " << c.family << "\n";
    o << "lambda0 = " << c.lambda0 << "\n";
    o << "lambda = " << c.lambda << "\n";
    o << "cutoff = " << fmt_double(c.cutoff) << "\n";
    for (auto& row : c.q_rows) {
        o << "q_row =";
        for (double x : row) o << " " << fmt_double(x);
        o << "\n";
    }
    if (!c.r.empty()) {
        o << "r =";
        for (double x : c.r) o << " " << fmt_double(x);
        o << "\n";
    }
    for (std::size_t A = 0; A < c.vortices.size(); ++A)
        for (Complex z : c.vortices[A])
            o << "vortex" << (A + 1) << " = " << fmt_complex(z) << "\n";
    o << "impurity = " << c.impurity << "\n";
    if (c.impurity == "constant")
        o << "impurity_constant = " << fmt_double(c.impurity_constant) << "\n";
    for (auto& [pos, alpha] : c.impurity_deltas)
        o << "delta = " << fmt_complex(pos) << " " << fmt_double(alpha) << "\n";
    o << "boundary = " << c.boundary << "\n";
    if (!c.boundary_values.empty()) {
        o << "boundary_values =";
        for (double x : c.boundary_values) o << " " << fmt_double(x);
        o << "\n";
    }
    if (!c.f_num.empty()) o << "f_num = " << complex_list(c.f_num) << "\n";
    if (!c.f_den.empty()) o << "f_den = " << complex_list(c.f_den) << "\n";
    o << "beta = " << fmt_double(c.beta) << "\n";
    o << "alpha = " << fmt_double(c.alpha) << "\n";
    if (!c.f1_num.empty()) o << "f1_num = " << complex_list(c.f1_num) << "\n";
    if (!c.f2_num.empty()) o << "f2_num = " << complex_list(c.f2_num) << "\n";
    o << "[grid]\n";
    o << "n = " << c.n << "\n";
    o << "[solver]\n";
    o << "tol = " << fmt_double(c.tol) << "\n";
    o << "max_iter = " << c.max_iter << "\n";
    o << "damping = " << fmt_double(c.damping) << "\n";
    o << "[output]\n";
    o << "fields = " << c.out_fields << "\n";
    o << "meta = " << c.out_meta << "\n";
    o << "history = " << c.out_history << "\n";
    if (!c.input_fields.empty()) o << "input_fields = " << c.input_fields << "\n";
    if (!c.compare_a.empty()) o << "a = " << c.compare_a << "\n";
    if (!c.compare_b.empty()) o << "b = " << c.compare_b << "\n";
    if (c.compare_tol != 0.0)
        o << "compare_tol = " << fmt_double(c.compare_tol) << "\n";
    return o.str();
}

inline RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    c.vortices.clear();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ConfigError("config line " + std::to_string(lineno) + ": " + msg);
    };
    auto split_ws = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string tok;
        while (ss >> tok) out.push_back(tok);
        return out;
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line.front() == '[') continue;  // section headers are decorative
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto b2 = s.find_first_not_of(" \t");
            const auto e2 = s.find_last_not_of(" \t");
            s = b2 == std::string::npos ? "" : s.substr(b2, e2 - b2 + 1);
        };
        trim(key);
        trim(val);
        if (val.empty()) fail("empty value for key '" + key + "'");
        try {
            if (key == "family") c.family = val;
            else if (key == "lambda0") c.lambda0 = static_cast<int>(parse_double(val));
            else if (key == "lambda") c.lambda = static_cast<int>(parse_double(val));
            else if (key == "cutoff") c.cutoff = parse_double(val);
            else if (key == "q_row") {
                std::vector<double> row;
                for (auto& t : split_ws(val)) row.push_back(parse_double(t));
                c.q_rows.push_back(std::move(row));
            } else if (key == "r") {
                c.r.clear();
                for (auto& t : split_ws(val)) c.r.push_back(parse_double(t));
            } else if (key == "vortex1" || key == "vortex2") {
                const std::size_t A = key == "vortex1" ? 0 : 1;
                if (c.vortices.size() <= A) c.vortices.resize(A + 1);
                c.vortices[A].push_back(parse_complex(val));
            } else if (key == "impurity") c.impurity = val;
            else if (key == "impurity_constant") c.impurity_constant = parse_double(val);
            else if (key == "delta") {
                auto toks = split_ws(val);
                if (toks.size() != 2) fail("delta needs 'position alpha'");
                c.impurity_deltas.emplace_back(parse_complex(toks[0]),
                                               parse_double(toks[1]));
            } else if (key == "boundary") c.boundary = val;
            else if (key == "boundary_values") {
                c.boundary_values.clear();
                for (auto& t : split_ws(val))
                    c.boundary_values.push_back(parse_double(t));
            } else if (key == "f_num" || key == "f_den" || key == "f1_num" ||
                       key == "f2_num") {
                std::vector<Complex> list;
                for (auto& t : split_ws(val)) list.push_back(parse_complex(t));
                if (key == "f_num") c.f_num = std::move(list);
                else if (key == "f_den") c.f_den = std::move(list);
                else if (key == "f1_num") c.f1_num = std::move(list);
                else c.f2_num = std::move(list);
            } else if (key == "beta") c.beta = parse_double(val);
            else if (key == "alpha") c.alpha = parse_double(val);
            else if (key == "n") c.n = static_cast<int>(parse_double(val));
            else if (key == "tol") c.tol = parse_double(val);
            else if (key == "max_iter") c.max_iter = static_cast<int>(parse_double(val));
            else if (key == "damping") c.damping = parse_double(val);
            else if (key == "fields") c.out_fields = val;
            else if (key == "meta") c.out_meta = val;
            else if (key == "history") c.out_history = val;
            else if (key == "input_fields") c.input_fields = val;
            else if (key == "a") c.compare_a = val;
            else if (key == "b") c.compare_b = val;
            else if (key == "compare_tol") c.compare_tol = parse_double(val);
            else fail("unknown key '" + key + "'");
        } catch (const ConfigError& err) {
            fail(std::string(err.what()) + " (key '" + key + "')");
        }
    }
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace exvort
