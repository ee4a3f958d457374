#include "osilp/instance.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "osilp/textio.hpp"

namespace osilp {

double Dist1D::sample(Rng& rng) const {
    switch (family) {
        case Family::uniform: return rng.uniform(p1, p2);
        case Family::normal: return rng.normal(p1, p2);
        case Family::cauchy: return rng.cauchy(p1, p2);
        case Family::categorical: {
            if (values.empty()) throw config_error("categorical distribution needs values");
            return values[rng.below(values.size())];
        }
    }
    throw config_error("unknown distribution family");
}

DistConfig preset_uniform() {
    DistConfig c;
    c.reward = {Dist1D::Family::uniform, 0.0, 1.0, {}};
    c.entry = {Dist1D::Family::uniform, 0.0, 4.0, {}};
    return c;
}

DistConfig preset_normal() {
    DistConfig c;
    c.reward = {Dist1D::Family::normal, 1.0, 1.0, {}};
    c.entry = {Dist1D::Family::normal, 4.0, 1.0, {}};
    return c;
}

DistConfig preset_cauchy() {
    DistConfig c;
    c.reward = {Dist1D::Family::cauchy, 0.0, 1.0, {}};
    c.entry = {Dist1D::Family::cauchy, 2.0, 1.0, {}};
    return c;
}

DistConfig preset_perm_mix() {
    DistConfig c;
    c.reward = {Dist1D::Family::uniform, 0.0, 1.0, {}};
    c.perm_mix = true;
    return c;
}

namespace {

// Row categories for the permutation-mix preset, assigned round-robin.
double sample_perm_mix_entry(int row, Rng& rng) {
    switch (row % 5) {
        case 0: return rng.uniform(0.0, 3.0);
        case 1: return rng.normal(2.0, 1.0);
        case 2: return rng.normal(1.0, 1.0);
        case 3: return rng.normal(0.0, 1.0);
        default: return static_cast<double>(static_cast<long>(rng.below(3)) - 1);  // {-1,0,1}
    }
}

}  // namespace

Support gen_support(const DistConfig& dist, int K, int m, uint64_t seed) {
    if (K < 1) throw config_error("gen_support: K must be >= 1");
    if (m < 1) throw config_error("gen_support: m must be >= 1");
    Rng rng(seed);
    Support s;
    s.K = K;
    s.m = m;
    s.r.resize(K);
    s.atoms = Mat(K, m);
    for (int k = 0; k < K; ++k) {
        s.r[k] = dist.reward.sample(rng);
        double* row = s.atoms.row(k);
        if (dist.perm_mix) {
            for (int i = 0; i < m; ++i) row[i] = sample_perm_mix_entry(i, rng);
        } else {
            for (int i = 0; i < m; ++i) row[i] = dist.entry.sample(rng);
        }
    }
    return s;
}

ArrivalStream stream_stochastic(const Support& support, long T, uint64_t seed) {
    if (T < 1) throw config_error("stream_stochastic: T must be >= 1");
    ArrivalStream st;
    st.T = T;
    st.m = support.m;
    st.support = support;
    st.model = InputModel::stochastic;
    st.seed = seed;
    st.r.resize(static_cast<size_t>(T));
    st.atom.resize(static_cast<size_t>(T));
    Rng rng(seed);
    for (long t = 0; t < T; ++t) {
        const int k = static_cast<int>(rng.below(static_cast<uint64_t>(support.K)));
        st.atom[static_cast<size_t>(t)] = k;
        st.r[static_cast<size_t>(t)] = support.r[k];
    }
    return st;
}

ArrivalStream stream_stochastic(const DistConfig& dist, long T, int m, uint64_t seed) {
    if (dist.support_K > 0) {
        const Support s = gen_support(dist, dist.support_K, m, child_seed(seed, 0));
        return stream_stochastic(s, T, child_seed(seed, 1));
    }
    // Continuous source: every arrival is a fresh atom.
    if (T < 1) throw config_error("stream_stochastic: T must be >= 1");
    ArrivalStream st;
    st.T = T;
    st.m = m;
    st.model = InputModel::stochastic;
    st.seed = seed;
    st.support.K = static_cast<int>(T);
    st.support.m = m;
    st.support.r.resize(static_cast<size_t>(T));
    st.support.atoms = Mat(static_cast<int>(T), m);
    st.r.resize(static_cast<size_t>(T));
    st.atom.resize(static_cast<size_t>(T));
    Rng rng(seed);
    for (long t = 0; t < T; ++t) {
        st.support.r[static_cast<size_t>(t)] = dist.reward.sample(rng);
        double* row = st.support.atoms.row(static_cast<int>(t));
        if (dist.perm_mix) {
            for (int i = 0; i < m; ++i) row[i] = sample_perm_mix_entry(i, rng);
        } else {
            for (int i = 0; i < m; ++i) row[i] = dist.entry.sample(rng);
        }
        st.r[static_cast<size_t>(t)] = st.support.r[static_cast<size_t>(t)];
        st.atom[static_cast<size_t>(t)] = static_cast<int>(t);
    }
    return st;
}

ArrivalStream stream_permutation(const ArrivalStream& base, uint64_t seed) {
    if (base.T < 1) throw config_error("stream_permutation: empty multiset");
    ArrivalStream st = base;
    st.model = InputModel::permutation;
    st.seed = seed;
    Rng rng(seed);
    // Fisher-Yates over the arrival order; the (r, atom) pairs move together
    // so the output multiset equals the input multiset exactly.
    for (long i = base.T - 1; i >= 1; --i) {
        const long j = static_cast<long>(rng.below(static_cast<uint64_t>(i + 1)));
        std::swap(st.r[static_cast<size_t>(i)], st.r[static_cast<size_t>(j)]);
        std::swap(st.atom[static_cast<size_t>(i)], st.atom[static_cast<size_t>(j)]);
    }
    return st;
}

Vec sample_rhs(int m, double lo, double hi, uint64_t seed) {
    if (!(lo > 0.0)) throw config_error("sample_rhs: lower bound must be positive (budget d > 0)");
    if (!(lo < hi)) throw config_error("sample_rhs: need lo < hi");
    Rng rng(seed);
    Vec d(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) d[static_cast<size_t>(i)] = rng.uniform(lo, hi);
    return d;
}

Instance make_instance(long T, Vec d) {
    if (T < 1) throw config_error("make_instance: T must be >= 1");
    Instance inst;
    inst.T = T;
    inst.m = static_cast<int>(d.size());
    inst.b.resize(d.size());
    for (size_t i = 0; i < d.size(); ++i) {
        if (!(d[i] > 0.0)) throw config_error("make_instance: d must be componentwise positive");
        inst.b[i] = static_cast<double>(T) * d[i];
    }
    inst.d = std::move(d);
    return inst;
}

ArrivalStream perturb_rewards(const ArrivalStream& stream, double beta, uint64_t seed) {
    if (beta < 0.0) throw config_error("perturb_rewards: beta must be >= 0");
    ArrivalStream st = stream;
    if (beta == 0.0) return st;
    Rng rng(seed);
    for (auto& r : st.r) r += rng.uniform(0.0, beta);
    return st;
}

DataBounds compute_bounds(const ArrivalStream& stream, const Instance& inst, const Basis& basis,
                          bool heavy_tailed) {
    if (stream.m != inst.m || stream.m != basis.m) throw dim_error("compute_bounds: m mismatch");
    DataBounds b;
    b.bounded = !heavy_tailed;
    b.r_bar = stream.r.empty() ? 0.0 : stream.r[0];
    for (double r : stream.r) {
        b.r_bar = std::max(b.r_bar, r);
        b.r_abs = std::max(b.r_abs, std::fabs(r));
    }
    // Atom-level maxima; every arrival is one of the atoms.
    for (int k = 0; k < stream.support.K; ++k) {
        const double* row = stream.support.atoms.row(k);
        double ai = 0.0;
        for (int i = 0; i < stream.m; ++i) ai = std::max(ai, std::fabs(row[i]));
        b.a_bar = std::max(b.a_bar, ai);
        Vec aphi = project_columns(basis, Vec(row, row + stream.m));
        b.C_bar = std::max(b.C_bar, norm_inf(aphi));
    }
    b.d_lo = vmin(inst.d);
    b.d_hi = vmax(inst.d);
    const Vec dphi = project_columns(basis, inst.d);
    b.D_lo = vmin(dphi);
    b.D_hi = vmax(dphi);
    return b;
}

void dump_stream_csv(const ArrivalStream& stream, std::ostream& os) {
    os << "t,r";
    for (int i = 1; i <= stream.m; ++i) os << ",a_" << i;
    os << "\n";
    for (long t = 0; t < stream.T; ++t) {
        os << t << ",";
        put_g17(os, stream.r[static_cast<size_t>(t)]);
        const double* a = stream.arrival_a(t);
        for (int i = 0; i < stream.m; ++i) {
            os << ",";
            put_g17(os, a[i]);
        }
        os << "\n";
    }
}

ArrivalStream load_stream_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw config_error("stream csv: missing header");
    // Columns beyond t,r are the m entries.
    int m = -1;
    {
        int commas = 0;
        for (char c : line)
            if (c == ',') ++commas;
        m = commas - 1;
    }
    if (m < 1) throw config_error("stream csv: header must be t,r,a_1,...,a_m");
    std::vector<double> rewards;
    std::vector<Vec> rows;
    long lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        if (!std::getline(ss, cell, ',')) throw config_error("stream csv: bad line " + std::to_string(lineno));
        if (!std::getline(ss, cell, ',')) throw config_error("stream csv: bad line " + std::to_string(lineno));
        rewards.push_back(std::stod(cell));
        Vec a;
        a.reserve(static_cast<size_t>(m));
        while (std::getline(ss, cell, ',')) a.push_back(std::stod(cell));
        if (static_cast<int>(a.size()) != m)
            throw config_error("stream csv: line " + std::to_string(lineno) + " has wrong column count");
        rows.push_back(std::move(a));
    }
    if (rows.empty()) throw config_error("stream csv: no arrivals");
    ArrivalStream st;
    st.T = static_cast<long>(rows.size());
    st.m = m;
    st.model = InputModel::stochastic;
    st.support.K = static_cast<int>(rows.size());
    st.support.m = m;
    st.support.r = rewards;
    st.support.atoms = Mat(static_cast<int>(rows.size()), m);
    for (size_t k = 0; k < rows.size(); ++k) {
        double* row = st.support.atoms.row(static_cast<int>(k));
        for (int i = 0; i < m; ++i) row[i] = rows[k][static_cast<size_t>(i)];
    }
    st.r = rewards;
    st.atom.resize(rows.size());
    for (size_t t = 0; t < rows.size(); ++t) st.atom[t] = static_cast<int>(t);
    return st;
}

void dump_rhs_csv(const Vec& d, std::ostream& os) {
    os << "j,d_j\n";
    for (size_t j = 0; j < d.size(); ++j) {
        os << (j + 1) << ",";
        put_g17(os, d[j]);
        os << "\n";
    }
}

Vec load_rhs_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw config_error("rhs csv: missing header");
    Vec d;
    long lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto pos = line.find(',');
        if (pos == std::string::npos) throw config_error("rhs csv: bad line " + std::to_string(lineno));
        d.push_back(std::stod(line.substr(pos + 1)));
    }
    if (d.empty()) throw config_error("rhs csv: empty");
    return d;
}

}  // namespace osilp
