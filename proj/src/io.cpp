#include "portphase/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace portphase {

using nlohmann::json;

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[64];
    for (int p = 1; p <= 12; ++p) {
        std::snprintf(buf, sizeof buf, "%.*g", p, x);
        if (std::strtod(buf, nullptr) == x) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string format_complex(cplx z) {
    std::string re = format_real(z.real());
    double im = z.imag();
    if (std::isnan(im)) return re + "+nani";
    std::string mag = format_real(std::abs(im));
    return re + (std::signbit(im) && im != 0.0 ? "-" : "+") + mag + "i";
}

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_real(const std::string& s, const std::string& whole) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) fail(ErrorCode::Parse, "bad number '" + whole + "'");
    return v;
}

}  // namespace

cplx parse_complex(const std::string& text) {
    std::string t = trim(text);
    if (t.empty()) fail(ErrorCode::Parse, "empty matrix entry");
    char last = t.back();
    if (last != 'i' && last != 'j') {
        char* end = nullptr;
        double v = std::strtod(t.c_str(), &end);
        if (end != t.c_str() + t.size()) fail(ErrorCode::Parse, "bad number '" + t + "'");
        return {v, 0.0};
    }
    std::string body = t.substr(0, t.size() - 1);
    // Split at the last sign that is not an exponent sign and not the leading sign.
    size_t split = std::string::npos;
    for (size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, parse_real(body, t)};
    std::string re = body.substr(0, split);
    char* end = nullptr;
    double rv = std::strtod(re.c_str(), &end);
    if (re.empty() || end != re.c_str() + re.size()) fail(ErrorCode::Parse, "bad number '" + t + "'");
    return {rv, parse_real(body.substr(split), t)};
}

std::vector<CMatrix> parse_matrices(const std::string& text) {
    std::vector<CMatrix> out;
    std::vector<std::vector<cplx>> rows;
    auto flush = [&] {
        if (rows.empty()) return;
        const size_t m = rows[0].size();
        CMatrix M(Eigen::Index(rows.size()), Eigen::Index(m));
        for (size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m) fail(ErrorCode::Parse, "ragged matrix rows");
            for (size_t j = 0; j < m; ++j) M(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
        }
        out.push_back(M);
        rows.clear();
    };
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::string t = trim(line);
        if (!t.empty() && t[0] == '#') continue;
        if (t.empty()) {
            flush();
            continue;
        }
        std::vector<cplx> row;
        std::stringstream ls(t);
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(parse_complex(cell));
        rows.push_back(std::move(row));
    }
    flush();
    return out;
}

std::string matrix_to_csv(const CMatrix& M) {
    std::string s;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j) s += ',';
            s += format_complex(M(i, j));
        }
        s += '\n';
    }
    return s;
}

std::string matrices_to_csv(const std::vector<CMatrix>& Ms) {
    std::string s;
    for (size_t k = 0; k < Ms.size(); ++k) {
        if (k) s += '\n';
        s += matrix_to_csv(Ms[k]);
    }
    return s;
}

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
    }
}

Poly poly_from(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) fail(ErrorCode::Parse, std::string("network entry missing '") + key + "'");
    Poly p;
    for (const auto& v : j[key]) {
        if (!v.is_number()) fail(ErrorCode::Parse, "network coefficients must be numbers");
        p.push_back(v.get<double>());
    }
    if (p.empty()) fail(ErrorCode::Parse, "empty coefficient list");
    return p;
}

RMatrix real_matrix(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_array()) fail(ErrorCode::Parse, "confluence file missing '" + key + "'");
    const json& a = j[key];
    const size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    RMatrix M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (size_t i = 0; i < rows; ++i) {
        if (!a[i].is_array() || a[i].size() != cols) fail(ErrorCode::Parse, "ragged matrix '" + key + "'");
        for (size_t k = 0; k < cols; ++k) {
            if (!a[i][k].is_number()) fail(ErrorCode::Parse, "non-numeric entry in '" + key + "'");
            M(Eigen::Index(i), Eigen::Index(k)) = a[i][k].get<double>();
        }
    }
    return M;
}

json to_json(const RMatrix& M) {
    json a = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
        a.push_back(row);
    }
    return a;
}

void check_n(const json& j, int nc) {
    if (j.contains("n") && (!j["n"].is_number_integer() || j["n"].get<int>() != nc))
        fail(ErrorCode::Parse, "confluence file: 'n' does not match the matrix sizes");
}

std::string first_key(const json& j, std::initializer_list<const char*> keys) {
    for (const char* k : keys)
        if (j.contains(k)) return k;
    return *keys.begin();
}

}  // namespace

RationalMatrix parse_network_json(const std::string& text) {
    json j = parse_json(text);
    if (!j.contains("n") || !j["n"].is_number_integer()) fail(ErrorCode::Parse, "network file missing integer 'n'");
    int n = j["n"].get<int>();
    if (n <= 0) fail(ErrorCode::Parse, "network 'n' must be positive");
    if (!j.contains("entries") || !j["entries"].is_array() || int(j["entries"].size()) != n)
        fail(ErrorCode::Parse, "network 'entries' must have n rows");
    RationalMatrix Z(n);
    for (int i = 0; i < n; ++i) {
        const json& row = j["entries"][size_t(i)];
        if (!row.is_array() || int(row.size()) != n) fail(ErrorCode::Parse, "network row length must be n");
        for (int k = 0; k < n; ++k) {
            try {
                Z.at(i, k) = make_rational(poly_from(row[size_t(k)], "num"), poly_from(row[size_t(k)], "den"));
            } catch (const Error& e) {
                fail(ErrorCode::Parse, e.what());
            }
        }
    }
    return Z;
}

std::string network_to_json(const RationalMatrix& Z) {
    json j;
    j["n"] = Z.n;
    json rows = json::array();
    for (int i = 0; i < Z.n; ++i) {
        json row = json::array();
        for (int k = 0; k < Z.n; ++k) row.push_back({{"num", Z.at(i, k).num}, {"den", Z.at(i, k).den}});
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j.dump(2) + "\n";
}

ConfluenceRep parse_confluence_json(const std::string& text) {
    json j = parse_json(text);
    ConfluenceRep rep{real_matrix(j, "S"), real_matrix(j, "T"), real_matrix(j, "U"), real_matrix(j, "W")};
    check_n(j, rep.nc());
    return rep;
}

DualRep parse_dual_json(const std::string& text) {
    json j = parse_json(text);
    DualRep d{real_matrix(j, first_key(j, {"Phi", "Φ"})), real_matrix(j, first_key(j, {"Psi", "Ψ"})),
              real_matrix(j, first_key(j, {"Xi", "Ξ"})), real_matrix(j, first_key(j, {"Omega", "Ω"}))};
    check_n(j, d.nc());
    return d;
}

std::string confluence_to_json(const ConfluenceRep& rep) {
    json j;
    j["n"] = rep.nc();
    j["S"] = to_json(rep.S);
    j["T"] = to_json(rep.T);
    j["U"] = to_json(rep.U);
    j["W"] = to_json(rep.W);
    return j.dump(2) + "\n";
}

std::string dual_to_json(const DualRep& d) {
    json j;
    j["n"] = d.nc();
    j["Phi"] = to_json(d.Phi);
    j["Psi"] = to_json(d.Psi);
    j["Xi"] = to_json(d.Xi);
    j["Omega"] = to_json(d.Omega);
    return j.dump(2) + "\n";
}

std::string sweep_to_csv(const SweepResult& r) {
    std::string s = "omega,phi_min_rad,phi_max_rad,class,detour\n";
    for (const SweepPoint& p : r.points) {
        s += format_real(p.omega);
        s += ',';
        s += p.has_phase ? format_real(p.lo) : "nan";
        s += ',';
        s += p.has_phase ? format_real(p.hi) : "nan";
        s += ',';
        s += class_tag(p.tag);
        s += ',';
        s += p.detour ? '1' : '0';
        s += '\n';
    }
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
    out << content;
    if (!out) fail(ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace portphase
