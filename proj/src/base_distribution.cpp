#include "gcrm/base_distribution.hpp"

#include <cmath>
#include <stdexcept>

namespace gcrm {

BaseDistribution::BaseDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty())
        throw std::domain_error("BaseDistribution: needs at least one atom");
    double total = 0.0;
    for (const Atom& a : atoms_) {
        if (!(a.weight >= 0.0) || !std::isfinite(a.weight) || !std::isfinite(a.location))
            throw std::domain_error("BaseDistribution: atoms must be finite with weight >= 0");
        total += a.weight;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw std::domain_error("BaseDistribution: weights must sum to 1");
    cumulative_.resize(atoms_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        acc += atoms_[i].weight;
        cumulative_[i] = acc;
    }
    cumulative_.back() = 1.0;
}

BaseDistribution BaseDistribution::point_mass(double location) {
    return BaseDistribution({{location, 1.0}});
}

double BaseDistribution::moment(int j) const {
    if (j < 0)
        throw std::domain_error("BaseDistribution::moment: negative order");
    if (j == 0)
        return 1.0;
    double acc = 0.0;
    for (const Atom& a : atoms_)
        acc += a.weight * std::pow(a.location, j);
    return acc;
}

bool BaseDistribution::in_unit_interval() const {
    for (const Atom& a : atoms_)
        if (a.location < 0.0 || a.location > 1.0)
            return false;
    return true;
}

bool BaseDistribution::strictly_positive() const {
    for (const Atom& a : atoms_)
        if (!(a.location > 0.0))
            return false;
    return true;
}

double BaseDistribution::sample(RandomStream& rng) const {
    if (atoms_.size() == 1)
        return atoms_[0].location;
    double u = draw_uniform(rng);
    for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i)
        if (u < cumulative_[i])
            return atoms_[i].location;
    return atoms_.back().location;
}

} // namespace gcrm
