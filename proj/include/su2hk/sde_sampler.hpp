#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "su2hk/geometry.hpp"

namespace su2hk {

struct MCConfig {
    long n_paths = 100000;
    double step = 1e-3;
    double t_final = 0.5;
    std::uint64_t seed = 42;
    int threads = 0;  // 0: hardware concurrency

    long n_steps() const;  // t_final / step rounded; validates the config
    void validate() const;
};

// Group Euler scheme X_{k+1} = X_k exp(sqrt(2h) (xi1 X + xi2 Y)), X_0 = identity.
// The sqrt(2h) scaling gives the diffusion generated by the sub-Laplacian, so the law at t has density p_t.
std::vector<GroupElement> simulate_paths(const MCConfig& cfg);

// E[cos(sqrt(2h) R)]^(t/h) with R Rayleigh: the scheme's exact mean of Re a11, for the weak-error oracle
double discrete_eigen_mean(double step, double t_final);

struct MomentEstimate {
    double mean = 0;
    double stderr_ = 0;
};
MomentEstimate sample_moment(const std::vector<GroupElement>& samples,
                             const std::function<double(const CylCoord&)>& f);

struct Histogram2D {
    std::vector<double> r_edges, z_edges;
    std::vector<long> counts;  // row-major, r outer
    long total = 0;

    static Histogram2D uniform(int nr, int nz);  // [0, pi/2] x [-pi, pi]
    int nr() const { return int(r_edges.size()) - 1; }
    int nz() const { return int(z_edges.size()) - 1; }
    long at(int i, int j) const { return counts[std::size_t(i) * nz() + j]; }
    void validate() const;
};

Histogram2D empirical_density(const std::vector<GroupElement>& samples, const Histogram2D& edges);

// cell probabilities of the density p(r, z) sin(2r) / (2 pi)
std::vector<double> cell_probabilities(const Histogram2D& edges, const std::function<double(double, double)>& density);
std::vector<double> kernel_cell_probabilities(const Histogram2D& edges, double t);
std::vector<double> haar_cell_probabilities(const Histogram2D& edges);

struct ChiSquareResult {
    double statistic = 0;
    int dof = 0;
    double p_value = 0;
    int n_bins = 0;    // after merging
    int n_merged = 0;  // cells pooled because their expected count was below 5
};
// cells with expected count < 5 are pooled into one bin
ChiSquareResult chi_square(const Histogram2D& h, const std::vector<double>& probs);

void write_samples_csv(const std::string& path, const std::vector<GroupElement>& samples);
std::string histogram_json(const Histogram2D& h);

}  // namespace su2hk
