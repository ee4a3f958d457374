#pragma once
// Hand-built fixtures so tests can pin exact arithmetic without going
// through the generators.

#include <vector>

#include "osilp/basis.hpp"
#include "osilp/instance.hpp"
#include "osilp/policies.hpp"

namespace testutil {

// basis with explicit row-major entries; geometry fields get placeholders
inline osilp::Basis make_basis(int m, int q, const std::vector<double>& phi_rowmajor) {
    osilp::Basis b;
    b.m = m;
    b.q = q;
    b.phi = osilp::Mat(m, q);
    b.phi.a = phi_rowmajor;
    b.centers.assign(static_cast<size_t>(q), 0.5);
    b.bandwidths.assign(static_cast<size_t>(q), 1.0);
    b.embed.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) b.embed[static_cast<size_t>(i)] = (i + 0.5) / m;
    b.k_coarse = q;
    b.k_fine = 0;
    b.col_norm2.assign(static_cast<size_t>(q), 0.0);
    for (int j = 0; j < q; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += b.phi(i, j) * b.phi(i, j);
        b.col_norm2[static_cast<size_t>(j)] = std::sqrt(s);
    }
    return b;
}

// one support atom per arrival
inline osilp::ArrivalStream make_stream(int m, const std::vector<double>& r,
                                        const std::vector<osilp::Vec>& a) {
    osilp::ArrivalStream s;
    s.T = static_cast<long>(r.size());
    s.m = m;
    s.r = r;
    s.support.K = static_cast<int>(a.size());
    s.support.m = m;
    s.support.atoms = osilp::Mat(static_cast<int>(a.size()), m);
    s.support.r.resize(a.size());
    s.atom.resize(r.size());
    for (size_t k = 0; k < a.size(); ++k) {
        for (int i = 0; i < m; ++i) s.support.atoms(static_cast<int>(k), i) = a[k][static_cast<size_t>(i)];
        s.support.r[k] = k < r.size() ? r[k] : 0.0;
        if (k < r.size()) s.atom[k] = static_cast<int>(k);
    }
    return s;
}

// whole projected fixture owned in one object (ProjectedStream keeps pointers)
struct Fixture {
    osilp::ArrivalStream stream;
    osilp::Basis basis;
    osilp::Instance inst;
    osilp::ProjectedStream ps;

    Fixture(int m, int q, const std::vector<double>& phi_rowmajor, const std::vector<double>& r,
            const std::vector<osilp::Vec>& a, const osilp::Vec& d)
        : stream(make_stream(m, r, a)), basis(make_basis(m, q, phi_rowmajor)) {
        inst = osilp::make_instance(stream.T, d);
        ps = osilp::make_projected(stream, basis, inst);
    }
};

}  // namespace testutil
