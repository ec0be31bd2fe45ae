#include "gzk/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace gzk {

Grid3 make_grid(int n_axis, double box_len) {
    return make_grid(n_axis, n_axis, n_axis, box_len);
}

Grid3 make_grid(int nx, int ny1, int ny2, double box_len) {
    for (int n : {nx, ny1, ny2}) {
        if (n < 8) throw std::invalid_argument("grid: n_axis must be >= 8");
        if (n % 2 != 0) throw std::invalid_argument("grid: n_axis must be even");
    }
    if (!(box_len > 0.0)) throw std::invalid_argument("grid: box_len must be positive");
    return Grid3{nx, ny1, ny2, box_len};
}

namespace {

// Per-shape FFTW plans with owned scratch buffers. Plans are created once and
// reused; a lock serializes access to the shared scratch.
struct PlanSet {
    int nx, ny1, ny2;
    fftw_complex* a = nullptr;   // c2c in
    fftw_complex* b = nullptr;   // c2c out
    double* r = nullptr;         // real side of r2c/c2r
    fftw_complex* h = nullptr;   // half spectrum
    fftw_plan c2c_fwd = nullptr;
    fftw_plan c2c_bwd = nullptr;
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;

    PlanSet(int nx_, int ny1_, int ny2_) : nx(nx_), ny1(ny1_), ny2(ny2_) {
        const std::size_t n = std::size_t(nx) * ny1 * ny2;
        const std::size_t nh = std::size_t(nx) * ny1 * (ny2 / 2 + 1);
        r = fftw_alloc_real(n);
        h = fftw_alloc_complex(nh);
        // FFTW_ESTIMATE keeps plan selection deterministic across runs
        r2c = fftw_plan_dft_r2c_3d(nx, ny1, ny2, r, h, FFTW_ESTIMATE);
        c2r = fftw_plan_dft_c2r_3d(nx, ny1, ny2, h, r, FFTW_ESTIMATE);
    }
    // the full complex pair is only needed for non-Hermitian inverses; large
    // grids that never take that path skip the extra buffers
    void ensure_c2c() {
        if (a) return;
        const std::size_t n = std::size_t(nx) * ny1 * ny2;
        a = fftw_alloc_complex(n);
        b = fftw_alloc_complex(n);
        c2c_fwd = fftw_plan_dft_3d(nx, ny1, ny2, a, b, FFTW_FORWARD, FFTW_ESTIMATE);
        c2c_bwd = fftw_plan_dft_3d(nx, ny1, ny2, a, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~PlanSet() {
        if (a) {
            fftw_destroy_plan(c2c_fwd);
            fftw_destroy_plan(c2c_bwd);
            fftw_free(a);
            fftw_free(b);
        }
        fftw_destroy_plan(r2c);
        fftw_destroy_plan(c2r);
        fftw_free(r);
        fftw_free(h);
    }
};

std::mutex g_fft_mutex;

PlanSet& plans_for(const Grid3& g) {
    static std::map<std::tuple<int, int, int>, PlanSet*> cache;
    auto key = std::make_tuple(g.nx, g.ny1, g.ny2);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, new PlanSet(g.nx, g.ny1, g.ny2)).first;
    return *it->second;
}

// (-1)^(ix+iy1+iy2), the phase shift between index-origin and centered-origin
// coordinates; valid because every axis count is even.
inline double center_phase(int ix, int iy1, int iy2) {
    return ((ix + iy1 + iy2) & 1) ? -1.0 : 1.0;
}

}  // namespace

SpectralField forward_transform(const RealField& f) {
    const Grid3& g = f.grid;
    if (f.v.size() != g.size()) throw std::invalid_argument("forward_transform: size mismatch");
    SpectralField F(g);
    const double scale = g.cell();
    const int hz = g.ny2 / 2 + 1;

    std::lock_guard<std::mutex> lock(g_fft_mutex);
    PlanSet& P = plans_for(g);
    for (std::size_t i = 0; i < f.v.size(); ++i) P.r[i] = f.v[i];
    fftw_execute(P.r2c);

    // unpack half spectrum into the full cube with Hermitian extension
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny1; ++iy)
            for (int iz = 0; iz < hz; ++iz) {
                const std::size_t src = (std::size_t(ix) * g.ny1 + iy) * hz + iz;
                const cplx val = scale * center_phase(ix, iy, iz) *
                                 cplx(P.h[src][0], P.h[src][1]);
                F.c[g.idx(ix, iy, iz)] = val;
                if (iz != 0 && iz != g.ny2 - iz) {
                    const int jx = (g.nx - ix) % g.nx;
                    const int jy = (g.ny1 - iy) % g.ny1;
                    F.c[g.idx(jx, jy, g.ny2 - iz)] = std::conj(val);
                }
            }
    F.real_rep = true;
    return F;
}

RealField inverse_transform(const SpectralField& F, double* imag_residue) {
    const Grid3& g = F.grid;
    if (F.c.size() != g.size()) throw std::invalid_argument("inverse_transform: size mismatch");

    if (!F.real_rep) {
        double res = 0.0;
        RealField out = inverse_transform_complex(F, res);
        if (imag_residue) *imag_residue = res;
        return out;
    }

    RealField out(g);
    const double scale = 1.0 / g.volume();
    const int hz = g.ny2 / 2 + 1;

    std::lock_guard<std::mutex> lock(g_fft_mutex);
    PlanSet& P = plans_for(g);
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny1; ++iy)
            for (int iz = 0; iz < hz; ++iz) {
                const cplx val = center_phase(ix, iy, iz) * F.c[g.idx(ix, iy, iz)];
                const std::size_t dst = (std::size_t(ix) * g.ny1 + iy) * hz + iz;
                P.h[dst][0] = val.real();
                P.h[dst][1] = val.imag();
            }
    fftw_execute(P.c2r);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = scale * P.r[i];
    if (imag_residue) *imag_residue = 0.0;
    return out;
}

RealField inverse_transform_complex(const SpectralField& F, double& imag_residue) {
    const Grid3& g = F.grid;
    if (F.c.size() != g.size()) throw std::invalid_argument("inverse_transform: size mismatch");
    RealField out(g);
    const double scale = 1.0 / g.volume();

    std::lock_guard<std::mutex> lock(g_fft_mutex);
    PlanSet& P = plans_for(g);
    P.ensure_c2c();
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny1; ++iy)
            for (int iz = 0; iz < g.ny2; ++iz) {
                const cplx val = center_phase(ix, iy, iz) * F.c[g.idx(ix, iy, iz)];
                const std::size_t k = g.idx(ix, iy, iz);
                P.a[k][0] = val.real();
                P.a[k][1] = val.imag();
            }
    fftw_execute(P.c2c_bwd);
    double re2 = 0.0, im2 = 0.0;
    for (std::size_t i = 0; i < out.v.size(); ++i) {
        out.v[i] = scale * P.b[i][0];
        re2 += P.b[i][0] * P.b[i][0];
        im2 += P.b[i][1] * P.b[i][1];
    }
    imag_residue = (re2 > 0.0) ? std::sqrt(im2 / re2) : std::sqrt(im2);
    return out;
}

std::vector<std::uint8_t> dealias_mask(const Grid3& g, double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw std::invalid_argument("dealias_mask: fraction must be in (0,1]");
    std::vector<std::uint8_t> mask(g.size(), 0);
    const double cx = fraction * g.nx / 2.0;
    const double cy1 = fraction * g.ny1 / 2.0;
    const double cy2 = fraction * g.ny2 / 2.0;
    for (int ix = 0; ix < g.nx; ++ix) {
        const int mx = std::abs(Grid3::mode_of(ix, g.nx));
        for (int iy = 0; iy < g.ny1; ++iy) {
            const int my = std::abs(Grid3::mode_of(iy, g.ny1));
            for (int iz = 0; iz < g.ny2; ++iz) {
                const int mz = std::abs(Grid3::mode_of(iz, g.ny2));
                mask[g.idx(ix, iy, iz)] = (mx <= cx && my <= cy1 && mz <= cy2) ? 1 : 0;
            }
        }
    }
    return mask;
}

void apply_mask(SpectralField& F, const std::vector<std::uint8_t>& mask) {
    if (mask.size() != F.c.size()) throw std::invalid_argument("apply_mask: size mismatch");
    for (std::size_t i = 0; i < F.c.size(); ++i)
        if (!mask[i]) F.c[i] = cplx{0.0, 0.0};
}

}  // namespace gzk
