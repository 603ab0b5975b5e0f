#include "su2hk/sde_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>
#include <nlohmann/json.hpp>

#include "su2hk/errors.hpp"
#include "su2hk/quadrature.hpp"
#include "su2hk/su2_kernel.hpp"

namespace su2hk {

using cd = std::complex<double>;

void MCConfig::validate() const {
    if (n_paths < 100) throw Error(ErrorCode::DomainError, "n_paths must be at least 100");
    if (!(step > 0) || !(t_final > 0)) throw Error(ErrorCode::DomainError, "step and t_final must be positive");
    double n = t_final / step;
    if (std::round(n) < 1 || std::abs(n - std::round(n)) > 1e-6 * n)
        throw Error(ErrorCode::DomainError, "t_final / step must be a positive integer");
    if (threads < 0) throw Error(ErrorCode::DomainError, "threads must be nonnegative");
}

long MCConfig::n_steps() const {
    validate();
    return std::lround(t_final / step);
}

namespace {

// [[a, b], [-conj b, conj a]]
struct Quat {
    cd a{1, 0}, b{0, 0};
};

inline Quat mul(const Quat& p, const Quat& q) {
    return {p.a * q.a - p.b * std::conj(q.b), p.a * q.b + p.b * std::conj(q.a)};
}

Quat run_path(long id, long n_steps, double s, std::uint64_t seed) {
    std::seed_seq sq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(id), std::uint32_t(id >> 32)};
    std::mt19937_64 rng(sq);
    std::normal_distribution<double> N;
    Quat g;
    for (long k = 1; k <= n_steps; ++k) {
        double x1 = N(rng), x2 = N(rng);
        double rho = s * std::hypot(x1, x2);
        double sinc = rho < 1e-8 ? 1 - rho * rho / 6 : std::sin(rho) / rho;
        // exp(s (x1 X + x2 Y)) with X = [[0,1],[-1,0]], Y = [[0,i],[i,0]]
        Quat e{cd(std::cos(rho), 0), sinc * s * cd(x1, x2)};
        g = mul(g, e);
        if (k % 100 == 0) {
            double n = std::norm(g.a) + std::norm(g.b);
            if (std::abs(n - 1) > 1e-8) throw Error(ErrorCode::OverflowGuard, "unitarity drift above 1e-8");
            n = std::sqrt(n);
            g.a /= n;
            g.b /= n;
        }
    }
    return g;
}

}  // namespace

std::vector<GroupElement> simulate_paths(const MCConfig& cfg) {
    const long n_steps = cfg.n_steps();
    const double s = std::sqrt(2 * cfg.step);
    std::vector<GroupElement> out(cfg.n_paths);
    int nt = cfg.threads > 0 ? cfg.threads : int(std::max(1u, std::thread::hardware_concurrency()));
    nt = int(std::min<long>(nt, cfg.n_paths));
    auto work = [&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            Quat q = run_path(i, n_steps, s, cfg.seed);
            out[i].m << q.a, q.b, -std::conj(q.b), std::conj(q.a);
        }
    };
    if (nt == 1) {
        work(0, cfg.n_paths);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(nt);
    for (int w = 0; w < nt; ++w) {
        long lo = cfg.n_paths * w / nt, hi = cfg.n_paths * (w + 1) / nt;
        pool.emplace_back([&, w, lo, hi] {
            try {
                work(lo, hi);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

double discrete_eigen_mean(double step, double t_final) {
    MCConfig c;
    c.step = step;
    c.t_final = t_final;
    long n = c.n_steps();
    const double s = std::sqrt(2 * step);
    auto m = integrate([s](double r) { return std::cos(s * r) * r * std::exp(-r * r / 2); }, 0.0, 40.0,
                       {1e-17, 1e-15, 2000});
    return std::pow(m.value, double(n));
}

MomentEstimate sample_moment(const std::vector<GroupElement>& samples,
                             const std::function<double(const CylCoord&)>& f) {
    if (samples.size() < 2) throw Error(ErrorCode::DomainError, "need at least two samples");
    double sum = 0, sum2 = 0;
    for (const auto& g : samples) {
        double v = f(from_matrix(g));
        sum += v;
        sum2 += v * v;
    }
    double n = double(samples.size());
    double mean = sum / n;
    double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1));
    return {mean, std::sqrt(var / n)};
}

Histogram2D Histogram2D::uniform(int nr, int nz) {
    if (nr < 1 || nz < 1) throw Error(ErrorCode::DomainError, "histogram sizes must be positive");
    Histogram2D h;
    for (int i = 0; i <= nr; ++i) h.r_edges.push_back(kPi / 2 * i / nr);
    for (int j = 0; j <= nz; ++j) h.z_edges.push_back(-kPi + 2 * kPi * j / nz);
    h.counts.assign(std::size_t(nr) * nz, 0);
    return h;
}

void Histogram2D::validate() const {
    auto inc = [](const std::vector<double>& e) {
        if (e.size() < 2) return false;
        for (std::size_t i = 1; i < e.size(); ++i)
            if (!(e[i] > e[i - 1])) return false;
        return true;
    };
    if (!inc(r_edges) || !inc(z_edges)) throw Error(ErrorCode::DomainError, "edges must be strictly increasing");
    if (counts.size() != std::size_t(nr()) * nz()) throw Error(ErrorCode::DomainError, "count array size mismatch");
}

Histogram2D empirical_density(const std::vector<GroupElement>& samples, const Histogram2D& edges) {
    Histogram2D h = edges;
    h.counts.assign(std::size_t(h.nr()) * h.nz(), 0);
    h.total = 0;
    h.validate();
    auto bin = [](const std::vector<double>& e, double x) {
        auto it = std::upper_bound(e.begin(), e.end(), x);
        long i = long(it - e.begin()) - 1;
        if (x == e.back()) i = long(e.size()) - 2;
        return i;
    };
    for (const auto& g : samples) {
        CylCoord c = from_matrix(g);
        long i = bin(h.r_edges, c.r), j = bin(h.z_edges, c.z);
        if (i < 0 || i >= h.nr() || j < 0 || j >= h.nz()) continue;
        ++h.counts[std::size_t(i) * h.nz() + j];
        ++h.total;
    }
    return h;
}

std::vector<double> cell_probabilities(const Histogram2D& edges, const std::function<double(double, double)>& density) {
    edges.validate();
    std::vector<double> p(std::size_t(edges.nr()) * edges.nz());
    const QuadratureSpec spec{1e-14, 1e-10, 2000};
    for (int j = 0; j < edges.nz(); ++j) {
        double z0 = edges.z_edges[j], z1 = edges.z_edges[j + 1];
        for (int i = 0; i < edges.nr(); ++i) {
            double r0 = edges.r_edges[i], r1 = edges.r_edges[i + 1];
            auto inner = [&](double r) {
                auto q = integrate([&](double z) { return density(r, z); }, z0, z1, spec);
                return q.value * std::sin(2 * r) / (2 * kPi);
            };
            p[std::size_t(i) * edges.nz() + j] = integrate(inner, r0, r1, spec).value;
        }
    }
    return p;
}

std::vector<double> kernel_cell_probabilities(const Histogram2D& edges, double t) {
    KernelField field(t, KernelField::Accuracy::Absolute);
    return cell_probabilities(edges, [&](double r, double z) { return field(r, z); });
}

std::vector<double> haar_cell_probabilities(const Histogram2D& edges) {
    return cell_probabilities(edges, [](double, double) { return 1.0; });
}

ChiSquareResult chi_square(const Histogram2D& h, const std::vector<double>& probs) {
    h.validate();
    if (probs.size() != h.counts.size()) throw Error(ErrorCode::DomainError, "probability array size mismatch");
    if (h.total <= 0) throw Error(ErrorCode::DomainError, "empty histogram");
    const double n = double(h.total);
    const double psum = std::accumulate(probs.begin(), probs.end(), 0.0);
    ChiSquareResult res;
    double pool_e = 0, pool_o = 0;
    std::vector<std::pair<double, double>> bins;  // (expected, observed)
    for (std::size_t k = 0; k < probs.size(); ++k) {
        double e = n * probs[k] / psum;
        if (e < 5) {
            pool_e += e;
            pool_o += double(h.counts[k]);
            ++res.n_merged;
        } else {
            bins.push_back({e, double(h.counts[k])});
        }
    }
    if (res.n_merged > 0) {
        if (pool_e >= 5 || bins.empty()) {
            bins.push_back({pool_e, pool_o});
        } else {
            auto it = std::min_element(bins.begin(), bins.end());
            it->first += pool_e;
            it->second += pool_o;
        }
    }
    for (auto [e, o] : bins) res.statistic += (o - e) * (o - e) / e;
    res.n_bins = int(bins.size());
    res.dof = res.n_bins - 1;
    if (res.dof < 1) throw Error(ErrorCode::DomainError, "too few cells for a chi-square test");
    boost::math::chi_squared dist(res.dof);
    res.p_value = boost::math::cdf(boost::math::complement(dist, res.statistic));
    return res;
}

void write_samples_csv(const std::string& path, const std::vector<GroupElement>& samples) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw Error(ErrorCode::DomainError, "cannot open " + tmp);
        os.precision(17);
        os << "path_id,r,theta,z\n";
        for (std::size_t i = 0; i < samples.size(); ++i) {
            CylCoord c = from_matrix(samples[i]);
            os << i << ',' << c.r << ',' << c.theta << ',' << c.z << '\n';
        }
        if (!os) throw Error(ErrorCode::DomainError, "write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error(ErrorCode::DomainError, "cannot rename to " + path);
}

std::string histogram_json(const Histogram2D& h) {
    nlohmann::json j;
    j["r_edges"] = h.r_edges;
    j["z_edges"] = h.z_edges;
    j["counts"] = nlohmann::json::array();
    for (int i = 0; i < h.nr(); ++i) {
        std::vector<long> row(h.counts.begin() + std::size_t(i) * h.nz(), h.counts.begin() + std::size_t(i + 1) * h.nz());
        j["counts"].push_back(row);
    }
    j["total"] = h.total;
    return j.dump(2);
}

}  // namespace su2hk
