#include "bolab/field.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bolab/error.hpp"
#include "bolab/fft.hpp"

namespace bolab {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

void symmetrize(const GridSpec& g, std::vector<cplx>& c) {
    const int n = g.n_modes;
    c[0] = c[0].real();
    for (int xi = 1; xi < n / 2; ++xi) {
        cplx p = c[xi];
        cplx m = c[n - xi];
        cplx avg = 0.5 * (p + std::conj(m));
        c[xi] = avg;
        c[n - xi] = std::conj(avg);
    }
    c[n / 2] = c[n / 2].real();
}
}  // namespace

GridSpec GridSpec::make(int n_modes) {
    if (n_modes < 8 || n_modes % 2 != 0)
        fail(ErrorCode::InvalidArgument, "n_modes must be even and >= 8, got " + std::to_string(n_modes));
    return GridSpec{n_modes, n_modes / 3};
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
    if (a != b)
        fail(ErrorCode::GridMismatch,
             "grid mismatch: " + std::to_string(a.n_modes) + " vs " + std::to_string(b.n_modes));
}

std::vector<cplx> coeffs_to_samples(const GridSpec& grid, const std::vector<cplx>& coeffs, int m, bool real_nyquist) {
    const int n = grid.n_modes;
    if (m <= 0) m = n;
    if (m < n) fail(ErrorCode::InvalidArgument, "sample count below grid size");
    std::vector<cplx> buf(m, cplx(0.0));
    for (int i = 0; i < n; ++i) {
        int xi = grid.freq(i);
        if (xi == n / 2 && m > n) {
            if (real_nyquist) {
                buf[xi] += 0.5 * coeffs[i];
                buf[m - xi] += 0.5 * coeffs[i];
            } else {
                buf[xi] += coeffs[i];
            }
            continue;
        }
        buf[xi >= 0 ? xi : m + xi] += coeffs[i];
    }
    fft::backward(buf.data(), buf.data(), m);
    for (auto& v : buf) v /= two_pi;
    return buf;
}

std::vector<cplx> samples_to_coeffs(const GridSpec& grid, const std::vector<cplx>& samples, int band, bool real_nyquist) {
    const int n = grid.n_modes;
    const int m = static_cast<int>(samples.size());
    std::vector<cplx> buf(samples);
    fft::forward(buf.data(), buf.data(), m);
    const double scale = two_pi / m;
    std::vector<cplx> out(n, cplx(0.0));
    for (int i = 0; i < n; ++i) {
        int xi = grid.freq(i);
        if (std::abs(xi) > band) continue;
        if (xi == n / 2 && m > n) {
            out[i] = real_nyquist ? scale * (buf[xi] + buf[m - xi]) : scale * buf[xi];
            continue;
        }
        out[i] = scale * buf[xi >= 0 ? xi : m + xi];
    }
    return out;
}

RealField::RealField(GridSpec grid) : grid_(grid), coeffs_(grid.n_modes, cplx(0.0)) {}

RealField::RealField(GridSpec grid, std::vector<cplx> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != grid_.n_modes)
        fail(ErrorCode::InvalidArgument, "coefficient count does not match grid");
    symmetrize(grid_, coeffs_);
}

RealField RealField::from_samples(GridSpec grid, const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != grid.n_modes)
        fail(ErrorCode::InvalidArgument, "sample count does not match grid");
    std::vector<cplx> s(values.begin(), values.end());
    return RealField(grid, samples_to_coeffs(grid, s, grid.n_modes / 2, true));
}

std::vector<double> RealField::samples(int m) const {
    auto s = coeffs_to_samples(grid_, coeffs_, m, true);
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i].real();
    return out;
}

RealField& RealField::operator+=(const RealField& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

RealField& RealField::operator-=(const RealField& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

RealField& RealField::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(double s, RealField a) { return a *= s; }
RealField operator-(RealField a) { return a *= -1.0; }

ComplexField::ComplexField(GridSpec grid) : grid_(grid), coeffs_(grid.n_modes, cplx(0.0)) {}

ComplexField::ComplexField(GridSpec grid, std::vector<cplx> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != grid_.n_modes)
        fail(ErrorCode::InvalidArgument, "coefficient count does not match grid");
}

ComplexField::ComplexField(const RealField& r) : grid_(r.grid_), coeffs_(r.coeffs_) {}

ComplexField ComplexField::from_samples(GridSpec grid, const std::vector<cplx>& values) {
    if (static_cast<int>(values.size()) != grid.n_modes)
        fail(ErrorCode::InvalidArgument, "sample count does not match grid");
    return ComplexField(grid, samples_to_coeffs(grid, values, grid.n_modes / 2, false));
}

std::vector<cplx> ComplexField::samples(int m) const { return coeffs_to_samples(grid_, coeffs_, m, false); }

RealField ComplexField::real_part() const {
    const int n = grid_.n_modes;
    std::vector<cplx> c(n);
    for (int i = 0; i < n; ++i) {
        int j = grid_.index(-grid_.freq(i));
        if (grid_.freq(i) == n / 2) j = i;
        c[i] = 0.5 * (coeffs_[i] + std::conj(coeffs_[j]));
    }
    return RealField(grid_, std::move(c));
}

ComplexField& ComplexField::operator+=(const ComplexField& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

ComplexField& ComplexField::operator*=(cplx s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
ComplexField operator*(cplx s, ComplexField a) { return a *= s; }

}  // namespace bolab
