#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace evt {

struct SimplexResult {
    std::vector<double> x;
    double fmin = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Nelder-Mead downhill simplex. Convergence when the relative spread of
// function values drops below f_tol and the simplex diameter below x_tol.
inline SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x0,
                                 double initial_step = 0.25,
                                 double f_tol = 1e-9,
                                 double x_tol = 1e-7,
                                 int max_iter = 4000) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += initial_step;
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(pts[i]);

    SimplexResult res;
    int iter = 0;
    auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> p2;
        std::vector<double> f2;
        for (auto i : idx) { p2.push_back(pts[i]); f2.push_back(fv[i]); }
        pts.swap(p2);
        fv.swap(f2);
    };

    for (; iter < max_iter; ++iter) {
        order();
        const double spread = std::abs(fv[n] - fv[0]) /
                              (std::abs(fv[0]) + std::abs(fv[n]) + 1e-300);
        double diam = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            diam = std::max(diam, std::abs(pts[n][i] - pts[0][i]));
        if (spread < f_tol && diam < x_tol) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
        }
        for (auto& c : centroid) c /= static_cast<double>(n);

        auto affine = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + coef * (pts[n][j] - centroid[j]);
            return p;
        };

        const auto xr = affine(-1.0);
        const double fr = f(xr);
        if (fr < fv[0]) {
            const auto xe = affine(-2.0);
            const double fe = f(xe);
            if (fe < fr) { pts[n] = xe; fv[n] = fe; }
            else { pts[n] = xr; fv[n] = fr; }
        } else if (fr < fv[n - 1]) {
            pts[n] = xr;
            fv[n] = fr;
        } else {
            const auto xc = affine(fr < fv[n] ? -0.5 : 0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fv[n])) {
                pts[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    fv[i] = f(pts[i]);
                }
            }
        }
    }
    order();
    res.x = pts[0];
    res.fmin = fv[0];
    res.iterations = iter;
    return res;
}

}  // namespace evt
