#include "bolab/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <regex>
#include <sstream>

#include "bolab/error.hpp"
#include "bolab/snapshot.hpp"
#include "bolab/spectral.hpp"

namespace bolab {

namespace {
double parse_double(const std::string& s, const std::string& spec) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        fail(ErrorCode::Parse, "bad number '" + s + "' in '" + spec + "'");
    }
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) fail(ErrorCode::Parse, "bad number '" + s + "' in '" + spec + "'");
    return v;
}

RealField parse_modes(const std::string& body, GridSpec grid, const std::string& spec) {
    static const std::regex tuple(R"(\(\s*([^,()]+)\s*,\s*([^,()]+)\s*,\s*([^,()]+)\s*\))");
    std::vector<cplx> c(grid.n_modes, 0.0);
    std::string rest = body;
    auto begin = std::sregex_iterator(body.begin(), body.end(), tuple);
    std::size_t consumed = 0;
    int count = 0;
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        std::string gap = body.substr(consumed, m.position() - consumed);
        for (char ch : gap)
            if (!std::isspace(static_cast<unsigned char>(ch)) && ch != ',')
                fail(ErrorCode::Parse, "unexpected text in '" + spec + "'");
        consumed = m.position() + m.length();
        double xr = parse_double(m[1], spec);
        double amp = parse_double(m[2], spec);
        double ph = parse_double(m[3], spec);
        if (xr != std::floor(xr)) fail(ErrorCode::Parse, "mode index must be an integer in '" + spec + "'");
        int xi = std::abs(static_cast<int>(xr));
        if (xi >= grid.n_modes / 2) fail(ErrorCode::Parse, "mode " + std::to_string(xi) + " is not resolved");
        // amp cos(xi x + ph) = (amp/2)(e^{i ph} e^{i xi x} + e^{-i ph} e^{-i xi x})
        const double two_pi = 2.0 * std::numbers::pi;
        if (xi == 0) {
            c[0] += two_pi * amp * std::cos(ph);
        } else {
            c[grid.index(xi)] += two_pi * 0.5 * amp * std::polar(1.0, ph);
            c[grid.index(-xi)] += two_pi * 0.5 * amp * std::polar(1.0, -ph);
        }
        ++count;
    }
    std::string tail = body.substr(consumed);
    for (char ch : tail)
        if (!std::isspace(static_cast<unsigned char>(ch)) && ch != ',')
            fail(ErrorCode::Parse, "unexpected text in '" + spec + "'");
    if (count == 0) fail(ErrorCode::Parse, "no modes in '" + spec + "'");
    return RealField(grid, std::move(c));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}
}  // namespace

RealField random_field(GridSpec grid, double s, double norm, std::uint64_t seed, int band) {
    if (band <= 0) band = grid.dealias_cut;
    if (band >= grid.n_modes / 2) fail(ErrorCode::InvalidArgument, "random band exceeds the grid");
    if (!(norm >= 0.0)) fail(ErrorCode::InvalidArgument, "norm must be nonnegative");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<cplx> c(grid.n_modes, 0.0);
    for (int xi = 1; xi <= band; ++xi) {
        cplx v = std::pow(static_cast<double>(xi), -s - 0.5) * std::polar(1.0, phase(rng));
        c[grid.index(xi)] = v;
        c[grid.index(-xi)] = std::conj(v);
    }
    RealField u(grid, std::move(c));
    double n0 = l2_norm(u);
    if (n0 > 0.0) u *= norm / n0;
    return u;
}

RealField initial_data(const std::string& spec, GridSpec grid) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) fail(ErrorCode::Parse, "initial data spec needs a kind prefix: '" + spec + "'");
    std::string kind = spec.substr(0, colon);
    std::string body = spec.substr(colon + 1);
    if (kind == "modes") return parse_modes(body, grid, spec);
    if (kind == "random") {
        auto parts = split(body, ',');
        if (parts.size() != 3 && parts.size() != 4) fail(ErrorCode::Parse, "random spec is 's,norm,seed[,band]'");
        double s = parse_double(parts[0], spec);
        double norm = parse_double(parts[1], spec);
        double seed = parse_double(parts[2], spec);
        if (seed < 0 || seed != std::floor(seed)) fail(ErrorCode::Parse, "seed must be a nonnegative integer");
        int band = 0;
        if (parts.size() == 4) band = static_cast<int>(parse_double(parts[3], spec));
        if (norm < 0) fail(ErrorCode::Parse, "norm must be nonnegative");
        return random_field(grid, s, norm, static_cast<std::uint64_t>(seed), band);
    }
    if (kind == "file") {
        RealField u = read_snapshot(body);
        require_same_grid(u.grid(), grid);
        return u;
    }
    fail(ErrorCode::Parse, "unknown initial data kind '" + kind + "'");
}

}  // namespace bolab
