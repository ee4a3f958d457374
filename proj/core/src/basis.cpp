#include "osilp/basis.hpp"

#include <cmath>
#include <string>

namespace osilp {

Basis build_rbf_basis(const BasisSpec& spec) {
    if (spec.m < 1) throw config_error("basis: m must be >= 1");
    if (spec.q < 1) throw config_error("basis: q must be >= 1");
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) throw config_error("basis: alpha must be in (0,1)");
    if (!(spec.rho_coarse > 0.0 && spec.rho_coarse < 1.0)) throw config_error("basis: rho_coarse must be in (0,1)");
    if (!(spec.rho_fine > 0.0 && spec.rho_fine < 1.0)) throw config_error("basis: rho_fine must be in (0,1)");

    const int kc = static_cast<int>(std::ceil(spec.alpha * spec.q));
    const int kf = spec.q - kc;
    if (kc < 2)
        throw config_error("basis: coarse layer needs K_c = ceil(alpha*q) >= 2, got " + std::to_string(kc));

    const double delta = 1.0 / (kc - 1);
    const double sigma_c = delta / (2.0 * std::log(1.0 / spec.rho_coarse));
    const double sigma_f = delta / (2.0 * std::log(1.0 / spec.rho_fine));

    Basis b;
    b.m = spec.m;
    b.q = spec.q;
    b.k_coarse = kc;
    b.k_fine = kf;
    b.centers.resize(spec.q);
    b.bandwidths.resize(spec.q);
    for (int k = 0; k < kc; ++k) {
        b.centers[k] = static_cast<double>(k) / (kc - 1);
        b.bandwidths[k] = sigma_c;
    }
    for (int l = 0; l < kf; ++l) {
        const double c = delta / 2.0 + l * delta;
        b.centers[kc + l] = c - std::floor(c);
        b.bandwidths[kc + l] = sigma_f;
    }

    b.embed.resize(spec.m);
    for (int i = 0; i < spec.m; ++i) b.embed[i] = (i + 0.5) / spec.m;

    b.phi = Mat(spec.m, spec.q);
    for (int i = 0; i < spec.m; ++i) {
        double* row = b.phi.row(i);
        const double u = b.embed[i];
        for (int j = 0; j < spec.q; ++j) {
            const double z = u - b.centers[j];
            row[j] = std::exp(-(z * z) / (2.0 * b.bandwidths[j] * b.bandwidths[j]));
        }
    }

    b.col_norm2.assign(spec.q, 0.0);
    for (int j = 0; j < spec.q; ++j) {
        double s = 0.0;
        for (int i = 0; i < spec.m; ++i) s += b.phi(i, j) * b.phi(i, j);
        b.col_norm2[j] = std::sqrt(s);
    }
    return b;
}

Vec project_columns(const Basis& basis, const Vec& a) {
    if (static_cast<int>(a.size()) != basis.m) throw dim_error("project_columns: a must have length m");
    Vec out(basis.q, 0.0);
    for (int i = 0; i < basis.m; ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        const double* row = basis.phi.row(i);
        for (int j = 0; j < basis.q; ++j) out[j] += ai * row[j];
    }
    return out;
}

Vec eval_dual(const Basis& basis, const Vec& w) {
    if (static_cast<int>(w.size()) != basis.q) throw dim_error("eval_dual: w must have length q");
    for (double x : w)
        if (x < 0.0) throw config_error("eval_dual: w must be componentwise non-negative");
    Vec out(basis.m, 0.0);
    for (int i = 0; i < basis.m; ++i) out[i] = dot(basis.phi.row(i), w.data(), basis.q);
    return out;
}

}  // namespace osilp
