#pragma once

#include <complex>
#include <vector>

namespace bolab {

using cplx = std::complex<double>;

// Spatial grid on the torus [0, 2pi). Coefficients are stored in FFT order:
// 0, 1, ..., n/2, -n/2+1, ..., -1.
struct GridSpec {
    int n_modes = 0;
    int dealias_cut = 0;

    static GridSpec make(int n_modes);

    int nyquist() const { return n_modes / 2; }
    int freq(int index) const { return index <= n_modes / 2 ? index : index - n_modes; }
    int index(int xi) const { return xi >= 0 ? xi : xi + n_modes; }
    bool resolves(int xi) const { return xi > -n_modes / 2 && xi <= n_modes / 2; }

    bool operator==(const GridSpec& o) const { return n_modes == o.n_modes; }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

void require_same_grid(const GridSpec& a, const GridSpec& b);

class ComplexField;

// Real-valued grid function. Coefficients satisfy c(-xi) = conj(c(xi)); the Nyquist
// slot is real and stands for the cos(n x / 2) mode of the trigonometric interpolant.
class RealField {
public:
    RealField() = default;
    explicit RealField(GridSpec grid);
    RealField(GridSpec grid, std::vector<cplx> coeffs);  // symmetrizes

    static RealField from_samples(GridSpec grid, const std::vector<double>& values);

    const GridSpec& grid() const { return grid_; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    cplx coeff(int xi) const { return coeffs_[grid_.index(xi)]; }
    double mean() const { return coeffs_.empty() ? 0.0 : coeffs_[0].real() / (2.0 * 3.14159265358979323846); }

    // Values on m equispaced points (m = 0 means the native grid).
    std::vector<double> samples(int m = 0) const;

    RealField& operator+=(const RealField& o);
    RealField& operator-=(const RealField& o);
    RealField& operator*=(double s);

private:
    friend class ComplexField;
    GridSpec grid_;
    std::vector<cplx> coeffs_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double s, RealField a);
RealField operator-(RealField a);

class ComplexField {
public:
    ComplexField() = default;
    explicit ComplexField(GridSpec grid);
    ComplexField(GridSpec grid, std::vector<cplx> coeffs);
    ComplexField(const RealField& r);  // NOLINT: real fields embed into complex ones

    static ComplexField from_samples(GridSpec grid, const std::vector<cplx>& values);

    const GridSpec& grid() const { return grid_; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    std::vector<cplx>& coeffs() { return coeffs_; }
    cplx coeff(int xi) const { return coeffs_[grid_.index(xi)]; }

    std::vector<cplx> samples(int m = 0) const;
    RealField real_part() const;

    ComplexField& operator+=(const ComplexField& o);
    ComplexField& operator-=(const ComplexField& o);
    ComplexField& operator*=(cplx s);

private:
    GridSpec grid_;
    std::vector<cplx> coeffs_;
};

ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);
ComplexField operator*(cplx s, ComplexField a);

// Physical-space helpers shared by the spectral layer. `real_nyquist` splits the
// Nyquist coefficient evenly between +n/2 and -n/2 when padding.
std::vector<cplx> coeffs_to_samples(const GridSpec& grid, const std::vector<cplx>& coeffs, int m, bool real_nyquist);
// Returns coefficients of the samples restricted to |xi| <= band (band <= n/2).
std::vector<cplx> samples_to_coeffs(const GridSpec& grid, const std::vector<cplx>& samples, int band, bool real_nyquist);

}  // namespace bolab
