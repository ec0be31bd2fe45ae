#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace gzk {

using cplx = std::complex<double>;

// Periodic computational box: the centered cube [-L/2, L/2)^3 sampled on a
// uniform lattice with an even number of points per axis (counts may differ
// per axis, the box length is shared). Frequencies per axis are
// 2*pi*m/L with m = -n/2 .. n/2-1, stored in standard FFT order
// (index i maps to m = i for i < n/2 and m = i - n otherwise).
struct Grid3 {
    int nx = 0;
    int ny1 = 0;
    int ny2 = 0;
    double box_len = 0.0;

    std::size_t size() const {
        return std::size_t(nx) * std::size_t(ny1) * std::size_t(ny2);
    }
    double spacing_x() const { return box_len / nx; }
    double spacing_y1() const { return box_len / ny1; }
    double spacing_y2() const { return box_len / ny2; }
    // cell volume of the physical quadrature rule
    double cell() const { return spacing_x() * spacing_y1() * spacing_y2(); }
    double volume() const { return box_len * box_len * box_len; }

    std::size_t idx(int ix, int iy1, int iy2) const {
        return (std::size_t(ix) * ny1 + iy1) * ny2 + iy2;
    }

    // physical coordinates, centered
    double x(int i) const { return -0.5 * box_len + i * spacing_x(); }
    double y1(int i) const { return -0.5 * box_len + i * spacing_y1(); }
    double y2(int i) const { return -0.5 * box_len + i * spacing_y2(); }

    // signed integer mode for a raw array index
    static int mode_of(int i, int n) { return (i < n / 2) ? i : i - n; }
    double freq(int i, int n) const {
        return 2.0 * 3.14159265358979323846 * mode_of(i, n) / box_len;
    }
    double xi(int ix) const { return freq(ix, nx); }
    double eta1(int iy1) const { return freq(iy1, ny1); }
    double eta2(int iy2) const { return freq(iy2, ny2); }

    bool operator==(const Grid3&) const = default;
};

// One scalar field as physical samples on a Grid3.
struct RealField {
    Grid3 grid;
    std::vector<double> v;

    RealField() = default;
    explicit RealField(const Grid3& g) : grid(g), v(g.size(), 0.0) {}
    double& at(int ix, int iy1, int iy2) { return v[grid.idx(ix, iy1, iy2)]; }
    double at(int ix, int iy1, int iy2) const { return v[grid.idx(ix, iy1, iy2)]; }
};

// One scalar field as complex Fourier coefficients on the frequency lattice.
// Coefficients approximate the continuum transform \int f e^{-i x.xi} dx.
// real_rep marks fields that represent a real function (Hermitian symmetric);
// it is cleared by operations that cannot preserve the symmetry exactly.
struct SpectralField {
    Grid3 grid;
    std::vector<cplx> c;
    bool real_rep = true;

    SpectralField() = default;
    explicit SpectralField(const Grid3& g) : grid(g), c(g.size(), cplx{0.0, 0.0}) {}
    cplx& at(int ix, int iy1, int iy2) { return c[grid.idx(ix, iy1, iy2)]; }
    cplx at(int ix, int iy1, int iy2) const { return c[grid.idx(ix, iy1, iy2)]; }
};

Grid3 make_grid(int n_axis, double box_len);
Grid3 make_grid(int nx, int ny1, int ny2, double box_len);

// Forward transform of a real field; output is exactly Hermitian symmetric.
SpectralField forward_transform(const RealField& f);

// Inverse transform. Fields flagged real_rep take the half-spectrum path and
// come back exactly real; otherwise the full complex inverse is taken and the
// real part returned, with the relative L2 size of the discarded imaginary
// part written to *imag_residue when requested.
RealField inverse_transform(const SpectralField& F, double* imag_residue = nullptr);

// Full complex inverse regardless of flags; used by tests that measure the
// imaginary residue an operation actually leaves behind.
RealField inverse_transform_complex(const SpectralField& F, double& imag_residue);

// 0/1 multiplier keeping modes with |m_d| <= fraction * n_d/2 on every axis.
std::vector<std::uint8_t> dealias_mask(const Grid3& g, double fraction);

void apply_mask(SpectralField& F, const std::vector<std::uint8_t>& mask);

}  // namespace gzk
