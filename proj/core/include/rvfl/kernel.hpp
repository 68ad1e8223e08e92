#pragma once

#include <Eigen/Core>
#include <memory>
#include <ostream>

#include "rvfl/rng.hpp"

namespace rvfl {

// The Bessel-window mollifier pieces for dimension m:
//   omega(x)  = c_norm [|x| <= 1/2] J_nu(2 j_nu |x|) / |x|^nu,  nu = m/2 - 1,
//   Psi(x)    = (omega * omega)(x / sqrt(m))   (autoconvolution, radial),
//   psi       = inverse Fourier transform of Psi (a pdf; implemented at m=1
//               for validation and the convolution form of g).
// c_norm makes the L2 norm of omega equal 1, hence Psi(0) = 1 and
// supp Psi = {|x| <= sqrt(m)}. Psi is served from a radial table built once
// per m; lookups are pure and thread-safe.
class SmoothingKernel {
  public:
    // table_scale != 1 deliberately corrupts the table (negative-control
    // hook for the validation CLI); leave at 1.0 for real use.
    explicit SmoothingKernel(int m, double table_scale = 1.0);
    ~SmoothingKernel();

    int dim() const { return m_; }
    double nu() const { return nu_; }
    double bessel_zero() const { return j_nu_; }  // j_nu
    double c_norm() const { return c_norm_; }

    // Radial omega profile at r = |x| (0 beyond 1/2).
    double omega(double r) const;

    // Psi at |x| = r via the radial table (0 beyond sqrt(m)).
    double psi_cap_radial(double r) const;
    double psi_cap(const Eigen::VectorXd& x) const { return psi_cap_radial(x.norm()); }

    // Second moment of psi: 4 j_nu^2 / m.
    double second_moment() const;

    // psi(x) by numerical inverse Fourier transform of Psi; m = 1 only.
    double psi_pdf(double x) const;

    // Draw from psi by inverse CDF over a tabulated grid; m = 1 only.
    // Consumes exactly one uniform from the generator.
    double psi_sample(Rng& rng) const;

    // (radius, Psi) rows, radius in [0, sqrt(m)].
    void dump_table_csv(std::ostream& out) const;

    // The normalization constant c_norm for dimension m.
    static double normalization(int m);

  private:
    struct Impl;
    int m_;
    double nu_ = 0.0;
    double j_nu_ = 0.0;
    double c_norm_ = 0.0;
    std::unique_ptr<Impl> impl_;
};

std::shared_ptr<const SmoothingKernel> make_kernel(int m);

}  // namespace rvfl
