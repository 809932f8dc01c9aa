#ifndef GCRM_BASE_DISTRIBUTION_HPP
#define GCRM_BASE_DISTRIBUTION_HPP

#include <span>
#include <vector>

#include "gcrm/rng.hpp"

namespace gcrm {

struct Atom {
    double location;
    double weight;
};

/// Finite-support probability distribution on the real line. Weights must be
/// nonnegative and sum to 1 within 1e-12. Used as a Dirichlet base measure on
/// [0,1], as the law of a random correlation constant, and as a subordinator
/// jump law on (0, inf); range checks belong to the consumers.
class BaseDistribution {
public:
    explicit BaseDistribution(std::vector<Atom> atoms);

    static BaseDistribution point_mass(double location);

    std::span<const Atom> atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

    /// j-th raw moment sum_i w_i s_i^j, j >= 0.
    double moment(int j) const;
    double mean() const { return moment(1); }

    bool in_unit_interval() const;
    bool strictly_positive() const;

    /// Draw one atom location. A single-atom distribution consumes no
    /// randomness, so degenerate kernels replay identically to their
    /// deterministic counterparts.
    double sample(RandomStream& rng) const;

private:
    std::vector<Atom> atoms_;
    std::vector<double> cumulative_;
};

} // namespace gcrm

#endif
