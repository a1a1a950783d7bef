#include "qpencil/config_io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace qp {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

Complex parse_complex(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) throw Error("parse_complex: empty literal");
    // Pure imaginary or real: find a '+'/'-' separating the two parts (not at
    // position 0, not right after an exponent 'e').
    size_t split = std::string::npos;
    for (size_t k = 1; k < s.size(); ++k) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E')
            split = k;  // keep the last one: handles "1e-3+2e-4i"
    }
    auto to_real = [](const std::string& raw_part) {
        const std::string t = trim(raw_part);
        try {
            size_t used = 0;
            const Real v = std::stod(t, &used);
            if (used != t.size()) throw Error("parse_complex: bad number '" + t + "'");
            return v;
        } catch (const std::logic_error&) {
            throw Error("parse_complex: bad number '" + t + "'");
        }
    };
    if (!s.empty() && s.back() == 'i') {
        const std::string body = s.substr(0, s.size() - 1);
        if (split == std::string::npos) {
            if (body.empty() || body == "+") return Complex(0, 1);
            if (body == "-") return Complex(0, -1);
            return Complex(0, to_real(body));
        }
        std::string re = body.substr(0, split);
        std::string im = trim(body.substr(split));
        if (im == "+") im = "1";
        else if (im == "-") im = "-1";
        else if (im.size() >= 2 && (im[0] == '+' || im[0] == '-') &&
                 std::isspace(static_cast<unsigned char>(im[1])))
            im = im.substr(0, 1) + trim(im.substr(1));
        return Complex(to_real(re), to_real(im));
    }
    if (split != std::string::npos) throw Error("parse_complex: missing trailing 'i' in '" + s + "'");
    return Complex(to_real(s), 0);
}

std::string format_complex(const Complex& z) {
    std::ostringstream os;
    os.precision(17);
    os << z.real() << (z.imag() < 0 ? "-" : "+");
    os.precision(17);
    os << std::abs(z.imag()) << "i";
    return os.str();
}

std::vector<Complex> parse_complex_list(const std::string& s) {
    std::vector<Complex> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
    return out;
}

RunConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw Error("config: expected key=value, got '" + line + "'");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    auto need = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw Error("config: missing key '" + key + "'");
        return it->second;
    };
    auto maybe = [&](const std::string& key) -> std::string {
        auto it = kv.find(key);
        return it == kv.end() ? std::string() : it->second;
    };

    const auto fam = family_from_string(need("family"));
    if (!fam) throw Error("config: unknown family '" + kv["family"] + "'");

    std::string pts = maybe("points");
    if (pts.empty()) pts = maybe("a");
    if (pts.empty()) pts = maybe("c");
    if (pts.empty()) pts = maybe("z");
    if (pts.empty()) throw Error("config: missing parameter list (points / a / c / z)");

    std::optional<Complex> kappa;
    if (!maybe("kappa").empty()) kappa = parse_complex(kv["kappa"]);

    bool symmetric = false;
    const std::string symtext = maybe("symmetric");
    if (symtext == "true" || symtext == "1") symmetric = true;
    else if (!symtext.empty() && symtext != "false" && symtext != "0")
        throw Error("config: symmetric must be true/false");

    RunConfig rc{
        make_config(*fam, parse_complex_list(pts), kappa, parse_complex(need("step")), symmetric),
        Complex(0), Complex(0), Complex(0)};
    const std::string pos0 = maybe("pos0");
    rc.pos0 = pos0.empty() ? autonomous_pos(rc.family) : parse_complex(pos0);
    rc.x0 = maybe("x0").empty() ? Complex(0.7, 0.2) : parse_complex(kv["x0"]);
    rc.y0 = maybe("y0").empty() ? Complex(0.3, 0.1) : parse_complex(kv["y0"]);
    return rc;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string config_to_text(const RunConfig& rc) {
    std::ostringstream os;
    os << "family = " << to_string(rc.family.tag) << "\n";
    os << "step = " << format_complex(rc.family.step) << "\n";
    if (rc.family.kappa) os << "kappa = " << format_complex(*rc.family.kappa) << "\n";
    os << "points = ";
    for (size_t k = 0; k < rc.family.params.size(); ++k) {
        if (k) os << ", ";
        os << format_complex(rc.family.params[k]);
    }
    os << "\n";
    os << "symmetric = " << (rc.family.symmetric ? "true" : "false") << "\n";
    os << "pos0 = " << format_complex(rc.pos0) << "\n";
    os << "x0 = " << format_complex(rc.x0) << "\n";
    os << "y0 = " << format_complex(rc.y0) << "\n";
    return os.str();
}

}  // namespace qp
