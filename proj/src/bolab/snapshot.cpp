#include "bolab/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bolab/error.hpp"

namespace bolab {

namespace {
static_assert(sizeof(double) == 8);

void put_le(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    char buf[8];
    for (int k = 0; k < 8; ++k) buf[k] = static_cast<char>((bits >> (8 * k)) & 0xff);
    out.write(buf, 8);
}

double get_le(std::istream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    if (!in) fail(ErrorCode::Parse, "truncated BOFIELD payload");
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(buf[k]) << (8 * k);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}
}  // namespace

void write_snapshot(const std::string& path, const RealField& u) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot open " + path + " for writing");
    out << "BOFIELD v1 n_modes=" << u.grid().n_modes << "\n";
    for (const auto& c : u.coeffs()) {
        put_le(out, c.real());
        put_le(out, c.imag());
    }
    if (!out) fail(ErrorCode::Io, "write failed for " + path);
}

RealField read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open " + path);
    std::string header;
    std::getline(in, header);
    const std::string prefix = "BOFIELD v1 n_modes=";
    if (header.rfind(prefix, 0) != 0) fail(ErrorCode::Parse, "not a BOFIELD v1 file: " + path);
    int n = 0;
    std::istringstream hs(header.substr(prefix.size()));
    if (!(hs >> n)) fail(ErrorCode::Parse, "bad n_modes in " + path);
    GridSpec g = GridSpec::make(n);
    std::vector<cplx> c(n);
    for (int i = 0; i < n; ++i) {
        double re = get_le(in);
        double im = get_le(in);
        c[i] = cplx(re, im);
    }
    RealField u(g, c);
    // Symmetrization is bit-exact on files written from real fields.
    double scale = 0.0, diff = 0.0;
    for (int i = 0; i < n; ++i) {
        scale = std::max(scale, std::abs(c[i]));
        diff = std::max(diff, std::abs(u.coeffs()[i] - c[i]));
    }
    if (diff > 1e-12 * scale) fail(ErrorCode::Parse, "BOFIELD coefficients are not Hermitian: " + path);
    return u;
}

}  // namespace bolab
