#ifndef RESIM_CPR_HPP
#define RESIM_CPR_HPP

#include "resim/amg.hpp"
#include "resim/block_matrix.hpp"
#include "resim/ilu.hpp"

namespace resim {

class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  /// z = M^-1 r, a fixed linear operator once set up.
  virtual void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const = 0;
};

class IdentityPreconditioner final : public Preconditioner {
 public:
  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const override { z = r; }
};

class IluPreconditioner final : public Preconditioner {
 public:
  IluPreconditioner(const BlockMatrix& a, int subdomains, int workers = 1)
      : ilu_(a, subdomains, workers), workers_(workers) {}
  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const override {
    ilu_.apply(r, z, workers_);
  }
  const BlockIlu0& ilu() const { return ilu_; }

 private:
  BlockIlu0 ilu_;
  int workers_;
};

struct CprConfig {
  AmgConfig amg;
  int ilu_subdomains = 8;
};

/// Two-stage Fine-Pressure-Fine preconditioner on a (decoupled) system:
///
///   z1 = F r
///   z2 = z1 + Pi_p^T AMG(Pi_p (r - A z1))
///   z  = z2 + F (r - A z2)
///
/// F is the well-folded block ILU(0), AMG is one V-cycle on A_pp and Pi_p
/// picks the cell pressure unknowns (wells are left to F). The matrix must
/// outlive the preconditioner.
class CprFpf final : public Preconditioner {
 public:
  CprFpf() = default;
  CprFpf(const BlockMatrix& a, const CprConfig& config, const Partition& part) {
    setup(a, config, part);
  }

  void setup(const BlockMatrix& a, const CprConfig& config, const Partition& part);
  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const override;

  const AmgHierarchy& amg() const { return amg_; }
  const BlockIlu0& smoother() const { return fine_; }

 private:
  const BlockMatrix* a_ = nullptr;
  Partition part_;
  BlockIlu0 fine_;
  AmgHierarchy amg_;
};

}  // namespace resim

#endif  // RESIM_CPR_HPP
