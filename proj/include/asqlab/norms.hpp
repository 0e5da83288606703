#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "asqlab/linalg.hpp"
#include "asqlab/poly_norm.hpp"
#include "asqlab/spaces.hpp"

// Dense, double-valued view of the norms the search code optimizes over.
// Sparse spaces adapt by treating slot i as coordinate i+1.

namespace asqlab {

class DenseNorm {
  public:
    virtual ~DenseNorm() = default;
    virtual int dim() const = 0;
    virtual double eval(const std::vector<double>& v) const = 0;
    // a constant c > 0 with eval(v) >= c * max|v_i| for all v; bounds how
    // far the unit sphere reaches in any coordinate (1/c)
    virtual double linf_lower() const = 0;
    virtual std::string name() const = 0;

    // sum of basis-vector norms: ||v|| <= basis_cost() * max|v_i|, the
    // Lipschitz constant used by grid covering arguments
    double basis_cost() const {
        std::vector<double> e(static_cast<std::size_t>(dim()), 0.0);
        double s = 0.0;
        for (int i = 0; i < dim(); ++i) {
            e[static_cast<std::size_t>(i)] = 1.0;
            s += eval(e);
            e[static_cast<std::size_t>(i)] = 0.0;
        }
        return s;
    }
};

class LinfNorm final : public DenseNorm {
  public:
    explicit LinfNorm(int d) : d_(d) {
        if (d < 1) throw ConfigError("sup norm: dimension must be >= 1");
    }
    int dim() const override { return d_; }
    double eval(const std::vector<double>& v) const override {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    double linf_lower() const override { return 1.0; }
    std::string name() const override { return "linf" + std::to_string(d_); }

  private:
    int d_;
};

// ||v||_J = sqrt(v'Qv) for symmetric positive definite Q.
class EllipsoidNorm final : public DenseNorm {
  public:
    explicit EllipsoidNorm(Matrix q) : q_(std::move(q)) {
        if (q_.rows != q_.cols || q_.rows < 1) throw ConfigError("ellipsoid norm: Q must be square");
        for (int i = 0; i < q_.rows; ++i)
            for (int j = i + 1; j < q_.cols; ++j)
                if (std::abs(q_.at(i, j) - q_.at(j, i)) > 1e-12 * (1.0 + std::abs(q_.at(i, j))))
                    throw ConfigError("ellipsoid norm: Q must be symmetric");
        EigenSym e = jacobi_eigensym(q_);
        lam_min_ = e.values.front();
        lam_max_ = e.values.back();
        if (lam_min_ <= 0.0) throw ConfigError("ellipsoid norm: Q must be positive definite");
    }
    int dim() const override { return q_.rows; }
    double eval(const std::vector<double>& v) const override {
        return std::sqrt(dot(v, q_.mul(v)));
    }
    double linf_lower() const override { return std::sqrt(lam_min_); }
    std::string name() const override { return "ellipsoid" + std::to_string(q_.rows); }
    const Matrix& Q() const { return q_; }
    double lambda_min() const { return lam_min_; }
    double lambda_max() const { return lam_max_; }

  private:
    Matrix q_;
    double lam_min_ = 0.0;
    double lam_max_ = 0.0;
};

// Gauge of a symmetric polytope given by facet functionals: the value is
// max |a.v| over the stored normals (each standing for the +-a pair).
// linf_radius must bound the ball's box extent (max |v_i| over the ball);
// for a vertex representation this is just the largest vertex coordinate.
class FacetNorm final : public DenseNorm {
  public:
    FacetNorm(int d, std::vector<std::vector<double>> normals, double linf_radius)
        : d_(d), normals_(std::move(normals)), linf_lower_(1.0 / linf_radius) {
        if (normals_.empty()) throw ConfigError("facet norm: needs at least one facet");
        if (!(linf_radius > 0.0)) throw ConfigError("facet norm: radius must be positive");
    }
    int dim() const override { return d_; }
    double eval(const std::vector<double>& v) const override {
        double m = 0.0;
        for (const auto& a : normals_) {
            double s = 0.0;
            for (int i = 0; i < d_; ++i) s += a[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
            m = std::max(m, std::abs(s));
        }
        return m;
    }
    double linf_lower() const override { return linf_lower_; }
    std::string name() const override {
        return "polytope" + std::to_string(d_) + "f" + std::to_string(normals_.size());
    }
    const std::vector<std::vector<double>>& normals() const { return normals_; }

  private:
    int d_;
    std::vector<std::vector<double>> normals_;
    double linf_lower_ = 0.0;
};

// Sparse polyhedral space seen densely: slot i-1 holds coordinate i.
class PolyNormD final : public DenseNorm {
  public:
    PolyNormD(PolyNormSpace<double> space, std::int64_t k)
        : space_(std::move(space)), k_(k) {}
    int dim() const override { return static_cast<int>(space_.m); }
    double eval(const std::vector<double>& v) const override {
        return space_.norm(to_sparse(v));
    }
    double linf_lower() const override { return 1.0 / static_cast<double>(k_); }
    std::string name() const override { return space_.name; }
    const PolyNormSpace<double>& space() const { return space_; }

    CoordVector<double> to_sparse(const std::vector<double>& v) const {
        CoordVector<double> f;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0.0) f.set(static_cast<std::int64_t>(i) + 1, v[i]);
        return f;
    }
    std::vector<double> to_dense(const CoordVector<double>& f) const {
        check_in_truncation(f, space_.m);
        std::vector<double> v(static_cast<std::size_t>(space_.m), 0.0);
        for (const auto& [j, x] : f.entries()) v[static_cast<std::size_t>(j - 1)] = x;
        return v;
    }

  private:
    PolyNormSpace<double> space_;
    std::int64_t k_;
};

// Dense view of a finite sup-sum: slots are the components' coordinates laid
// out consecutively, norm is the max of the component norms.
class SumNormD final : public DenseNorm {
  public:
    explicit SumNormD(const C0Sum<double>& sum) {
        for (const auto& c : sum.comps) {
            offsets_.push_back(total_);
            total_ += static_cast<int>(c.m);
            comps_.push_back(c.space);
            k_ = std::max(k_, c.k);
        }
    }
    int dim() const override { return total_; }
    std::vector<double> to_dense(const SumVector<double>& x) const {
        std::vector<double> v(static_cast<std::size_t>(total_), 0.0);
        for (std::size_t c = 0; c < comps_.size() && c < x.parts.size(); ++c) {
            check_in_truncation(x.parts[c], comps_[c].m);
            for (const auto& [j, val] : x.parts[c].entries())
                v[static_cast<std::size_t>(offsets_[c] + j - 1)] = val;
        }
        return v;
    }
    double eval(const std::vector<double>& v) const override {
        double m = 0.0;
        for (std::size_t c = 0; c < comps_.size(); ++c) {
            CoordVector<double> f;
            int base = offsets_[c];
            int len = static_cast<int>(comps_[c].m);
            for (int i = 0; i < len; ++i) {
                double x = v[static_cast<std::size_t>(base + i)];
                if (x != 0.0) f.set(i + 1, x);
            }
            m = std::max(m, comps_[c].norm(f));
        }
        return m;
    }
    double linf_lower() const override { return 1.0 / static_cast<double>(k_); }
    std::string name() const override { return "c0sum" + std::to_string(comps_.size()); }

  private:
    std::vector<PolyNormSpace<double>> comps_;
    std::vector<int> offsets_;
    int total_ = 0;
    std::int64_t k_ = 1;
};

} // namespace asqlab
