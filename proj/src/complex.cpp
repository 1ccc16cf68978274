#include "cornerhom/complex.hpp"

#include <set>
#include <stdexcept>

namespace cornerhom {

GradedFreeComplex::GradedFreeComplex(int bottom, std::vector<std::vector<std::string>> generators,
                                     std::vector<IntegerMatrix> boundaries, int modulus)
    : bottom_(bottom), modulus_(modulus), generators_(std::move(generators)), boundaries_(std::move(boundaries)) {
    if (modulus_ < 0 || modulus_ == 1) throw std::invalid_argument("complex modulus must be 0 or >= 2");
    const std::size_t levels = generators_.size();
    if (levels == 0 && !boundaries_.empty()) throw std::invalid_argument("boundaries given for an empty complex");
    if (levels > 0 && boundaries_.size() != levels - 1)
        throw std::invalid_argument("expected one boundary matrix per degree above the bottom");
    for (std::size_t i = 0; i < levels; ++i) {
        std::set<std::string> seen;
        for (const auto& g : generators_[i])
            if (!seen.insert(g).second)
                throw std::invalid_argument("duplicate generator label '" + g + "' in degree " +
                                            std::to_string(bottom_ + static_cast<int>(i)));
    }
    for (std::size_t i = 0; i + 1 < levels; ++i) {
        const auto& d = boundaries_[i];
        if (d.rows() != generators_[i].size() || d.cols() != generators_[i + 1].size())
            throw std::invalid_argument("boundary matrix of degree " + std::to_string(bottom_ + static_cast<int>(i) + 1) +
                                        " has the wrong shape");
    }
    if (modulus_ > 0)
        for (auto& d : boundaries_) d = d.mod(modulus_);
}

std::size_t GradedFreeComplex::rank(int degree) const {
    if (degree < bottom_ || degree > top_degree()) return 0;
    return generators_[static_cast<std::size_t>(degree - bottom_)].size();
}

const std::vector<std::string>& GradedFreeComplex::generators(int degree) const {
    static const std::vector<std::string> none;
    if (degree < bottom_ || degree > top_degree()) return none;
    return generators_[static_cast<std::size_t>(degree - bottom_)];
}

int GradedFreeComplex::index_of(int degree, const std::string& label) const {
    const auto& gens = generators(degree);
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (gens[i] == label) return static_cast<int>(i);
    return -1;
}

IntegerMatrix GradedFreeComplex::boundary(int degree) const {
    if (degree <= bottom_ || degree > top_degree()) return IntegerMatrix::zero(rank(degree - 1), rank(degree));
    return boundaries_[static_cast<std::size_t>(degree - bottom_ - 1)];
}

GradedFreeComplex GradedFreeComplex::shifted(int shift) const {
    GradedFreeComplex out(*this);
    out.bottom_ += shift;
    return out;
}

GradedFreeComplex GradedFreeComplex::truncated(int lo, int hi) const {
    std::vector<std::vector<std::string>> gens;
    std::vector<IntegerMatrix> bnds;
    for (int k = lo; k <= hi; ++k) {
        gens.push_back(generators(k));
        if (k > lo) bnds.push_back(boundary(k));
    }
    return {lo, std::move(gens), std::move(bnds), modulus_};
}

bool operator==(const GradedFreeComplex& a, const GradedFreeComplex& b) {
    return a.bottom_ == b.bottom_ && a.modulus_ == b.modulus_ && a.generators_ == b.generators_ &&
           a.boundaries_ == b.boundaries_;
}

std::vector<int> verify_complex(const GradedFreeComplex& x) {
    std::vector<int> bad;
    for (int k = x.bottom_degree() + 2; k <= x.top_degree(); ++k) {
        IntegerMatrix dd = x.boundary(k - 1) * x.boundary(k);
        if (x.modulus() > 0) dd = dd.mod(x.modulus());
        if (!dd.is_zero()) bad.push_back(k);
    }
    return bad;
}

}  // namespace cornerhom
